from django.apps import AppConfig


class MongeConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'monge'
    verbose_name = 'Monge equations and the (3,2) conformal geometry'
