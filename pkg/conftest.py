"""Configure Django for plain pytest runs (``./manage.py test`` does this itself)."""
import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "cubik_proj.settings")
django.setup()
