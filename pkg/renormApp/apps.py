from django.apps import AppConfig


class RenormappConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'renormApp'
    verbose_name = 'Renormalization'
