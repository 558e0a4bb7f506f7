from django.apps import AppConfig


class PolytopeConfig(AppConfig):
    name = "polytope"
