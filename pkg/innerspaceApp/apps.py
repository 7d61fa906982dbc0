from django.apps import AppConfig


class InnerspaceappConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'innerspaceApp'
    verbose_name = 'Inner space integrals'
