from django.apps import AppConfig


class LaurentConfig(AppConfig):
    name = "laurent"
