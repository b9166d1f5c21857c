import os
import sys
from pathlib import Path

SRC = Path(__file__).resolve().parent / 'src'
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'odegeometry.settings')

import django

django.setup()
