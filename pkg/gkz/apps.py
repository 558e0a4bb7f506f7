from django.apps import AppConfig


class GkzConfig(AppConfig):
    name = "gkz"
