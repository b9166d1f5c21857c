from django.apps import AppConfig


class ExteriorConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'exterior'
    verbose_name = 'Charts, vector fields and differential forms'
