"""Implosion and contraction computations at desk scale."""

from .errors import (DegenerateFlow, ImplosionError, NoConvergence, NumericalError,
                     PoleEncountered, PreconditionError)

__version__ = "0.1.0"

__all__ = [
    "DegenerateFlow",
    "ImplosionError",
    "NoConvergence",
    "NumericalError",
    "PoleEncountered",
    "PreconditionError",
    "__version__",
]
