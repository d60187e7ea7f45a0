"""Curvature forms on jet fibers and Monte Carlo volume integrals."""

from .forms import (DEGENERATE_TOL, HermitianForm, gamma_gg, gamma_inv,
                    hermitian_form, inertia, morse_index, top_power)
from .integrate import (BucketEstimate, IntegralEstimate, ScalingRow,
                        mc_integrate, prefactor_for, scaling_report,
                        scaling_rows_to_doc)
from .oracle import OracleResult, quadrature_oracle
from .sampling import FiberSample, draw_eta, fiber_samples

__all__ = [
    "DEGENERATE_TOL", "FiberSample", "HermitianForm", "gamma_gg",
    "gamma_inv", "hermitian_form", "inertia", "morse_index", "top_power",
    "BucketEstimate", "IntegralEstimate", "ScalingRow", "mc_integrate",
    "prefactor_for", "scaling_report", "scaling_rows_to_doc",
    "OracleResult", "quadrature_oracle", "draw_eta", "fiber_samples",
]
