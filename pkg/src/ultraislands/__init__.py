"""Exact computations on the Berkovich projective line over Q_p(p^(1/M))."""
from .field import FieldConfig, Magnitude, RamifiedScalar, LogThreshold, Verdict, oo
from .algebra import Poly, RatFunc
from .berkovich import Mobius, ProjDisk, TypeI, TypeII

__version__ = "0.1.0"
