"""Henon-Lane-Emden system: existence regions, power solutions, radial solvers."""
from .regions import ExponentPair, Membership, Regime, WeightPair

__version__ = "0.1.0"

__all__ = ["ExponentPair", "Membership", "Regime", "WeightPair", "__version__"]
