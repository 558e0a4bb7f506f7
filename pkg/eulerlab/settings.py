import os
from dotenv import load_dotenv
from .settings_utils import get_thread_count, get_default_seed

# PROJECT SETTINGS
PROJECT_NAME = "eulerlab"  # shown in CLI summaries
LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_TZ = True

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

load_dotenv(os.path.join(BASE_DIR, ".env"))

SECRET_KEY = os.getenv("SECRET_KEY", "eulerlab-local-only-secret-key")
DEBUG = os.getenv("DEBUG", "False").lower() == "true"
ALLOWED_HOSTS = []

INSTALLED_APPS = [
    "laurent.apps.LaurentConfig",
    "polytope.apps.PolytopeConfig",
    "convergence.apps.ConvergenceConfig",
    "critpoints.apps.CritpointsConfig",
    "limits.apps.LimitsConfig",
    "integrate.apps.IntegrateConfig",
    "gkz.apps.GkzConfig",
    "shiftops.apps.ShiftopsConfig",
    "cli.apps.CliConfig",
]

# no models anywhere, the dummy backend is enough for the test runner
DATABASES = {}

CACHES = {
    "default": {
        "BACKEND": "django.core.cache.backends.locmem.LocMemCache",
        "LOCATION": "eulerlab",
        "TIMEOUT": 3600,
    }
}

EULER_LOG_LEVEL = os.getenv("EULER_LOG_LEVEL", "WARNING").upper()

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {name} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "level": "DEBUG",
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "django": {
            "handlers": ["console"],
            "level": "ERROR",
            "propagate": True,
        },
        **{
            app: {"handlers": ["console"], "level": EULER_LOG_LEVEL, "propagate": False}
            for app in (
                "laurent",
                "polytope",
                "convergence",
                "critpoints",
                "limits",
                "integrate",
                "gkz",
                "shiftops",
                "cli",
            )
        },
    },
}

# NUMERICS
EULER_SEED = get_default_seed()
EULER_THREADS = get_thread_count()
EULER_PROGRESS = os.getenv("EULER_PROGRESS", "False").lower() == "true"

EULER_MAX_DIM = 6  # desk-scale guard for hull computations
EULER_FLOAT_TOL = 1e-9  # facet tolerance when rationalizing float weights

EULER_RESIDUAL_TOL = 1e-8
EULER_DEDUPE_TOL = 1e-6
EULER_EXCLUDED_TOL = 1e-10
EULER_NEWTON_MAX_STEPS = 200
EULER_PATH_MIN_STEP = 1e-6
EULER_PATH_MAX_STEP = 0.1
EULER_COUNT_TRIALS = 5

EULER_BATCH_SIZE = 65536
EULER_GAUSS_NODES = 64
EULER_SMALL_RATE = 1e-2
EULER_SHIFT_REL_TOL = 1e-8  # verify_shift floor for deterministic rules

EULER_CRITICAL_CACHE_TIMEOUT = 24 * 3600
EULER_CACHE_KEY_PREFIX = "eulerlab"
EULER_CACHE_VERSION = 1

try:
    from .local_settings import *  # noqa: F401,F403
except ImportError:
    pass
