"""jetcalc: exact jet-differential calculus and curvature volume integrals.

Exact layer (rational arithmetic, decidable identities):
  jetpoly    -- sparse jet polynomials, the formal derivative, filtrations
  reparam    -- reparametrization jets, their action, invariance certificates,
                invariant generators (determinant/bracket families,
                coordinate-change numerators)
  curvature  -- curvature tensor I/O, metric parameters, symmetric-power
                curvature coefficients, pointwise metric evaluation

Numeric layer (float64, deterministic):
  morse      -- curvature forms on jet fibers, Morse index bucketing,
                Monte Carlo volume integrals with a quadrature oracle
"""

from .coefficients import GaussianRational
from .errors import (DegreeError, InputDataError, JetcalcError,
                     NumericDomainError, OrderOverflowError, SingularJetError)

__version__ = "0.1.0"

__all__ = [
    "GaussianRational", "JetcalcError", "InputDataError",
    "NumericDomainError", "DegreeError", "SingularJetError",
    "OrderOverflowError", "__version__",
]
