from django.apps import AppConfig


class LaguerreConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'laguerre'
    verbose_name = 'Deformed Laguerre MVOPs'
