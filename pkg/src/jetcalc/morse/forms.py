"""Pointwise fiber curvature forms and Morse-index bookkeeping.

The forms are Hermitian n x n matrices M representing
gamma = (i/2pi) sum M_ij dz_i wedge d(conj z_j) at the center of the
curvature expansion.  morse_index counts eigenvalues below -1e-10;
eigenvalues within [-1e-10, 1e-10] are degenerate and reported separately
(the index indicator is undefined on the degeneracy locus).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..curvature import CurvatureTensor, MetricParams
from ..errors import InputDataError, NumericDomainError
from .sampling import FiberSample

DEGENERATE_TOL = 1e-10
_HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class HermitianForm:
    M: np.ndarray  # (n, n) complex128, exactly Hermitian


def hermitian_form(M) -> HermitianForm:
    arr = np.asarray(M, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InputDataError(f"form matrix must be square, got {arr.shape}")
    asym = float(np.max(np.abs(arr - arr.conj().T))) if arr.size else 0.0
    if asym > _HERMITIAN_TOL:
        raise InputDataError(
            f"matrix is not Hermitian (asymmetry {asym:.3e})")
    sym = (arr + arr.conj().T) / 2
    sym.setflags(write=False)
    return HermitianForm(M=sym)


def _eta_levels(eta, k: int | None, r: int, what: str) -> np.ndarray:
    if isinstance(eta, FiberSample):
        eta = eta.eta
    arr = np.asarray(eta, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[1] != r:
        raise InputDataError(
            f"{what} needs fiber values of shape (k, {r}), got {arr.shape}")
    if k is not None and arr.shape[0] != k:
        raise InputDataError(
            f"{what} needs exactly k={k} levels, got {arr.shape[0]}")
    ns2 = (arr.real * arr.real + arr.imag * arr.imag).sum(axis=1)
    if np.any(ns2 < 1e-300):
        raise NumericDomainError(f"{what}: a jet level is the zero vector")
    return arr


def gamma_gg(c: CurvatureTensor, eta, params: MetricParams) -> HermitianForm:
    """Fiber curvature form of the jet metric:
    M_ij = sum_s (1/s) w_s(eta) * (sum c_ij,lm eta_sl conj(eta_sm)) / |eta_s|^2
    with weight ratios w_s = |eta_s|^(2p/s) / sum_t |eta_t|^(2p/t)."""
    arr = _eta_levels(eta, None, c.r, "jet curvature form")
    k = arr.shape[0]
    params.validate_for(k)
    ns2 = (arr.real * arr.real + arr.imag * arr.imag).sum(axis=1)
    pw = np.array([ns2[s - 1] ** (params.p // s) for s in range(1, k + 1)])
    tot = pw.sum()
    M = np.zeros((c.n, c.n), dtype=np.complex128)
    for s in range(1, k + 1):
        qf = np.einsum("ijab,a,b->ij", c.c, arr[s - 1], np.conj(arr[s - 1]))
        M += (pw[s - 1] / tot) / s * (qf / ns2[s - 1])
    return hermitian_form(M)


def gamma_inv(c: CurvatureTensor, eta, params: MetricParams) -> HermitianForm:
    """Fiber curvature form of the invariant metric after the sphere
    reduction: the averaged base term (1/r) sum_a c_ij,aa plus
    sum_s (1/s) * (full contraction with the unit directions u_s)."""
    arr = _eta_levels(eta, None, c.r, "invariant curvature form")
    k = arr.shape[0]
    params.validate_for(k)
    M = np.einsum("ijaa->ij", c.c) / c.r
    for s in range(1, k + 1):
        ns2 = float((arr[s - 1].real ** 2 + arr[s - 1].imag ** 2).sum())
        u = arr[s - 1] / np.sqrt(ns2)
        M = M + np.einsum("ijab,a,b->ij", c.c, u, np.conj(u)) / s
    return hermitian_form(M)


def inertia(form: HermitianForm) -> tuple:
    """(negative, degenerate, positive) eigenvalue counts."""
    w = np.linalg.eigvalsh(form.M)
    neg = int(np.sum(w < -DEGENERATE_TOL))
    zer = int(np.sum(np.abs(w) <= DEGENERATE_TOL))
    return neg, zer, len(w) - neg - zer


def morse_index(form: HermitianForm) -> int:
    """Number of eigenvalues strictly below -1e-10."""
    return inertia(form)[0]


def top_power(form: HermitianForm) -> float:
    """det(M): the density of gamma^n/n! against the reference volume."""
    return float(np.linalg.det(form.M).real)
