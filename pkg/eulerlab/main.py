import os
import sys


def main(argv=None, prog="euler"):
    """Console entry point; `python manage.py` runs the same command set."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "eulerlab.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError("Django is not installed; install eulerlab with its dependencies") from exc

    execute_from_command_line([prog, *(sys.argv[1:] if argv is None else argv)])


if __name__ == "__main__":
    main()
