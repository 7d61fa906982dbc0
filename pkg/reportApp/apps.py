from django.apps import AppConfig


class ReportappConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'reportApp'
    verbose_name = 'Run reports'
