"""
Django settings for nearfield_project.

The project hosts the antenna-density simulator: there are no web views,
only the ``adf`` app with its management commands and an optional SQLite
run history.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from pathlib import Path
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv('SECRET_KEY', 'django-insecure-nearfield-adf-simulator-local-key')

DEBUG = os.getenv('DEBUG', 'True').lower() == 'true'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.auth',
    'django.contrib.contenttypes',

    # Third party apps
    'rest_framework',

    # Local apps
    'adf',
]


# Database
# https://docs.djangoproject.com/en/5.2/ref/settings/#databases

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.getenv('DB_NAME', BASE_DIR / 'db.sqlite3'),
    }
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

# Default primary key field type

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Logging: rich console output for every simulator module

ADF_LOG_LEVEL = os.getenv('ADF_LOG_LEVEL', 'INFO').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'rich': {
            'format': '%(name)s: %(message)s',
            'datefmt': '[%X]',
        },
    },
    'handlers': {
        'console': {
            'class': 'rich.logging.RichHandler',
            'formatter': 'rich',
            'rich_tracebacks': True,
            'show_path': False,
        },
    },
    'loggers': {
        'adf': {
            'handlers': ['console'],
            'level': ADF_LOG_LEVEL,
            'propagate': False,
        },
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
        },
    },
}


# Simulator defaults

ADF_SETTINGS = {
    # P = chi * M grid points for sampled ADFs
    'GRID_MULTIPLIER': int(os.getenv('ADF_GRID_MULTIPLIER', '8')),
    # 'log' or 'printed'; 'log' is what the exact-determinant calibration selects
    'FH_VARIANT': os.getenv('ADF_FH_VARIANT', 'log'),
    'THREADS': int(os.getenv('ADF_THREADS', '1')),
    'OUTPUT_DIR': Path(os.getenv('ADF_OUTPUT_DIR', BASE_DIR / 'results')),
    'SPEED_OF_LIGHT': 299792458.0,
    'RUN_TIMING_TESTS': os.getenv('ADF_RUN_TIMING_TESTS', 'False').lower() == 'true',
}
