from django.apps import AppConfig


class CurvatureConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'curvature'
    verbose_name = 'Metric curvature'
