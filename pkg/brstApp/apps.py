from django.apps import AppConfig


class BrstappConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'brstApp'
    verbose_name = 'BRST symmetry'
