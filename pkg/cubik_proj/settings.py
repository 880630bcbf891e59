"""
Django settings for the cubik project.

The project hosts a single application, ``cubik``, which implements a kernel
for De Morgan cubical type theory: the checker, the normalizer and the
``cubik`` management command (check / normalize / repl).

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from pathlib import Path
import os

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
# The kernel never signs anything, but Django refuses to start without one.
SECRET_KEY = os.environ.get("SECRET_KEY", "cubik-insecure-7q$w!k2u9d@x0n3r^p5e*l8v1z4b6m")

DEBUG = os.environ.get("DEBUG", "False") == "True"

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "cubik",
]


# Database
# https://docs.djangoproject.com/en/5.2/ref/settings/#databases

# The kernel keeps no persistent state: checked declarations live in memory
# for the duration of one command. An empty mapping selects the dummy backend.
DATABASES = {}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True


# Kernel options

# CUBIK_TRACE=1 dumps every head reduction step of the evaluator to stderr.
CUBIK_TRACE = os.environ.get("CUBIK_TRACE", "0") == "1"

CUBIK_LOG_LEVEL = "DEBUG" if CUBIK_TRACE else os.environ.get("CUBIK_LOG_LEVEL", "WARNING")


# Logging
# https://docs.djangoproject.com/en/5.2/topics/logging/

# Results go to stdout; logs and traces always go to stderr.
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "[{levelname}] {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "cubik": {
            "handlers": ["console"],
            "level": CUBIK_LOG_LEVEL,
            "propagate": False,
        },
    },
}
