import os
import sys

# tests import shared helpers from support.py next to this file
sys.path.insert(0, os.path.dirname(__file__))
