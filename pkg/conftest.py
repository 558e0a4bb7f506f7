import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "eulerlab.settings")
django.setup()
