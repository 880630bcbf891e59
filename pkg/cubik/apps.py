from django.apps import AppConfig


class CubikConfig(AppConfig):
    name = "cubik"
    verbose_name = "Cubical type theory kernel"
