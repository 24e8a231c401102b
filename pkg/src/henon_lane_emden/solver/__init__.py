"""Numerical construction of positive radial solutions on the unit ball."""
from .ivp import BACKEND, integrate_radial_ivp
from .profile import RadialProfile

__all__ = ["BACKEND", "RadialProfile", "integrate_radial_ivp"]
