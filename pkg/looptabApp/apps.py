from django.apps import AppConfig


class LooptabappConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'looptabApp'
    verbose_name = 'One-loop integrals'
