from django.apps import AppConfig


class ShiftopsConfig(AppConfig):
    name = "shiftops"
