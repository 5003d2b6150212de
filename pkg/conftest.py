"""Pytest wiring: configure Django for the laguerre test suite."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'mvoplab.settings')
django.setup()
