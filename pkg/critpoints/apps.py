from django.apps import AppConfig


class CritpointsConfig(AppConfig):
    name = "critpoints"
