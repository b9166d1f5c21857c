from django.apps import AppConfig


class LiealgebraConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'liealgebra'
    verbose_name = 'Flat structure constants and matrix connections'
