"""Factorial cumulants, partition identities and occupancy CLT diagnostics."""

import sys

from .exact import DomainError

# exact rationals routinely exceed the default int -> str digit cap
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

__version__ = "0.1.0"

__all__ = ["DomainError", "__version__"]
