"""
dyadpot: dyadic approximation and harmonic layer potentials in the plane.
"""

from dyadpot.project import __project__, __version__
