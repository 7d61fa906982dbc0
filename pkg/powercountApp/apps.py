from django.apps import AppConfig


class PowercountappConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'powercountApp'
    verbose_name = 'Power counting'
