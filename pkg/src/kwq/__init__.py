"""Exact q-series characters, theta-quotient Laurent coefficients, and
cusp asymptotics, with a verification battery, an HTTP service, and a CLI.
"""

from __future__ import annotations

__version__ = "0.1.0"

DEFAULT_PRECISION = 50
PRECISION_ENV = "KWQ_PRECISION"


def clear_caches() -> None:
    """Drop every memoized constructor result (heavy series, characters)."""
    from . import asymptotics, decomposition, modular, numeric

    for mod in (modular, decomposition, asymptotics, numeric):
        for obj in vars(mod).values():
            if callable(obj) and hasattr(obj, "cache_clear"):
                obj.cache_clear()
