import os
from django.conf import settings
from django.core.exceptions import ImproperlyConfigured


def get_thread_count():
  """
  Worker count for parallel path tracking and sample batches.
  EULER_THREADS from the environment wins, otherwise all available cores.
  """
  value = os.getenv("EULER_THREADS")
  if value:
      try:
          return max(1, int(value))
      except ValueError:
          pass
  return os.cpu_count() or 1


def get_default_seed():
  """
  Fallback seed used when a command is called without --seed.
  """
  value = os.getenv("EULER_SEED")
  if value is None or value == "":
      return 0
  try:
      return int(value)
  except ValueError:
      return 0


def get_setting(name, default):
  """
  Read an EULER_* setting, falling back to `default` when the apps are used
  as a plain library without DJANGO_SETTINGS_MODULE.
  """
  try:
      return getattr(settings, name, default)
  except ImproperlyConfigured:
      return default
