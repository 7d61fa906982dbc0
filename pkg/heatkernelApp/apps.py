from django.apps import AppConfig


class HeatkernelappConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'heatkernelApp'
    verbose_name = 'Functional determinants'
