from django.apps import AppConfig


class RulesappConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'rulesApp'
    verbose_name = 'Feynman rules'
