from django.apps import AppConfig


class Ode3Config(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'ode3'
    verbose_name = 'Third-order ODEs'
