from django.apps import AppConfig


class SymcoreappConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'symcoreApp'
    verbose_name = 'Symbolic core'
