"""
@author jacobi petrucciani
@desc warpiso module
"""
from warpiso.models import *  # noqa

__version__ = "0.1"
