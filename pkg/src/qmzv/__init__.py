"""Exact arithmetic for multiple q-zeta values.

The package evaluates the finite and infinite nested-sum models as truncated
q-series or exact rationals, builds the recursive word expansions that encode
them, and ships a verification suite plus CLI covering every identity the
library implements.
"""

__version__ = "0.1.0"

from .series import QSeries, invert_unit  # noqa: F401
