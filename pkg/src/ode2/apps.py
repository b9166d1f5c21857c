from django.apps import AppConfig


class Ode2Config(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'ode2'
    verbose_name = 'Second-order ODEs and the Fefferman metric'
