"""
Django settings for odegeometry project.

Generated by 'django-admin startproject' using Django 5.2.8.

For more information on this file, see
https://docs.djangoproject.com/en/5.2/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'django-insecure-odegeometry-command-line-only')

DEBUG = False

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    #geometry apps, bottom-up
    'expressions',
    'exterior',
    'curvature',
    'ode3',
    'ode2',
    'monge',
    'liealgebra',
    'runner',
]

MIDDLEWARE = []


# Database
# the engine persists nothing; tests are SimpleTestCase only

DATABASES = {}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Zero-testing and reporting defaults
# every key can be overridden by the JSON file named in ODEGEOMETRY_CONFIG,
# and then by the command-line flags of the management commands

GEOMETRY = {
    'TOLERANCE': 1e-9,
    'SAMPLES': 20,
    'SEED': 0,
    #mpmath decimal digits used for every numeric evaluation
    'PRECISION': 30,
    'BOX_MARGIN': 0.05,
    'DEFAULT_INTERVAL': (-1, 1),
    'PIVOT_THRESHOLD': 1e-6,
    'DET_FLOOR': 1e-12,
    #relative residual under which a failed zero claim counts as numerical headroom
    'NUMERICAL_HEADROOM': 1e-6,
    'CATALOG': BASE_DIR / 'runner' / 'catalog.json',
}

GEOMETRY_CONFIG_ENV = 'ODEGEOMETRY_CONFIG'


# Logging
# https://docs.djangoproject.com/en/5.2/topics/logging/

LOG_LEVEL = os.environ.get('ODEGEOMETRY_LOG_LEVEL', 'WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        app: {'handlers': ['console'], 'level': LOG_LEVEL, 'propagate': False}
        for app in ('expressions', 'exterior', 'curvature', 'ode3', 'ode2', 'monge', 'liealgebra', 'runner')
    },
}

# Default primary key field type
# https://docs.djangoproject.com/en/5.2/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'
