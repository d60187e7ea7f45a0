"""Exception hierarchy shared by all jetcalc modules.

The CLI maps these onto its exit codes: InputDataError -> 3,
NumericDomainError -> 4, anything else unexpected -> 5 (internal).
Usage errors never reach this module (argparse exits 2 on its own).
"""

from __future__ import annotations


class JetcalcError(Exception):
    """Base class for all errors raised by jetcalc."""


class InputDataError(JetcalcError):
    """Malformed or inconsistent input data (files, tensors, polynomials)."""


class NumericDomainError(JetcalcError):
    """A numeric evaluation left its domain of validity."""


class DegreeError(JetcalcError):
    """An operation required (nonzero-degree) homogeneous input."""


class SingularJetError(JetcalcError):
    """A reparametrization jet with vanishing linear part cannot be inverted."""


class OrderOverflowError(JetcalcError):
    """A construction needed jet orders beyond the declared budget."""
