#!/usr/bin/env python
"""Administrative entry point of the cubik project: ``./manage.py test``, ``./manage.py cubik ...``."""
import os
import sys
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent


def main(argv=None):
    """Run a management command; ``argv`` defaults to the process arguments."""
    if str(BASE_DIR) not in sys.path:
        sys.path.insert(0, str(BASE_DIR))
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "cubik_proj.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError("cubik runs on Django; install the packages listed in requirements.txt first.") from exc
    execute_from_command_line(argv if argv is not None else sys.argv)


if __name__ == "__main__":
    main()
