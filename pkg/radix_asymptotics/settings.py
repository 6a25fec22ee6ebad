"""
Django settings for radix_asymptotics project.

The project has no web surface: it hosts the ``radixrational`` app and its
management commands. Every tunable is read through python-decouple, so a
``.env`` file or environment variables override the defaults below.

For more information on this file, see
https://docs.djangoproject.com/en/5.0/topics/settings/
"""

from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# Only used by Django internals; nothing here is security sensitive.
SECRET_KEY = config('SECRET_KEY', default='radix-asymptotics-local-key')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'radixrational',
]

# No persistence: representations and reports are plain files.
DATABASES = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Analysis Configuration
RADIXRATIONAL = {
    'TOLERANCE': config('RADIX_TOLERANCE', default=1e-9, cast=float),
    'GRID_DEPTH': config('RADIX_GRID_DEPTH', default=12, cast=int),
    'GRID_MAX_NODES': config('RADIX_GRID_MAX_NODES', default=2 ** 16, cast=int),
    'JSR_MAX_T': config('RADIX_JSR_MAX_T', default=4, cast=int),
    'JSR_BUDGET': config('RADIX_JSR_BUDGET', default=10 ** 6, cast=int),
    'NAIVE_MAX_K': config('RADIX_NAIVE_MAX_K', default=16, cast=int),
    'BRUTE_FORCE_MAX_N': config('RADIX_BRUTE_FORCE_MAX_N', default=2 ** 24, cast=int),
    'INFER_MAX_LEVEL': config('RADIX_INFER_MAX_LEVEL', default=8, cast=int),
    'INFER_HORIZON': config('RADIX_INFER_HORIZON', default=1024, cast=int),
    'PERIOD_MAX_Q': config('RADIX_PERIOD_MAX_Q', default=64, cast=int),
    'NMAX': config('RADIX_NMAX', default=2 ** 16, cast=int),
    'CASCADE_ITERATIONS': config('RADIX_CASCADE_ITERATIONS', default=25, cast=int),
    'PROFILE_POINTS': config('RADIX_PROFILE_POINTS', default=1000, cast=int),
    'SAMPLE_POINTS': config('RADIX_SAMPLE_POINTS', default=2048, cast=int),
    'SEED': config('RADIX_SEED', default=0, cast=int),
    'OUTPUT_DIR': config('RADIX_OUTPUT_DIR', default='out'),
}


# Logging Configuration
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
        'radixrational': {
            'handlers': ['console'],
            'level': config('RADIX_LOG_LEVEL', default='WARNING'),
            'propagate': False,
        },
    },
}
