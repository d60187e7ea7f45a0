"""Hermitian curvature data on the rank-r bundle V over an n-dimensional
base, evaluation of the jet metrics near the center of the expansion, and the
induced metric coefficients on symmetric powers S^l V.

Numeric convention: curvature data is empirical input, so this module works
in double precision; c[i,j,lam,mu] are the second-order expansion
coefficients <e_lam, e_mu> = delta + sum c_{ij lam mu} z_i conj(z_j) + ... of
a metric in a frame orthonormal at the center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputDataError, NumericDomainError

__all__ = [
    "CurvatureTensor",
    "MetricParams",
    "SymPowerCoeffs",
    "validate_tensor",
    "tensor_from_doc",
    "tensor_to_doc",
    "gg_metric_eval",
    "inv_metric_eval",
    "sym_power_metric_coeffs",
]

_SYMMETRY_REJECT = 1e-9


@dataclass(frozen=True)
class CurvatureTensor:
    """Validated, exactly-Hermitian curvature coefficients c[i,j,lam,mu]
    (0-based numpy indexing internally; the exchange format is 1-based)."""
    n: int
    r: int
    c: np.ndarray  # complex128, shape (n, n, r, r), c = conj(c^T in (ij),(lm))


def validate_tensor(raw, n: int | None = None, r: int | None = None) -> CurvatureTensor:
    """Check shape and Hermitian symmetry (reject above 1e-9 asymmetry), then
    exactify by averaging with the conjugate transpose."""
    arr = np.asarray(raw, dtype=np.complex128)
    if arr.ndim != 4 or arr.shape[0] != arr.shape[1] or arr.shape[2] != arr.shape[3]:
        raise InputDataError(
            f"curvature tensor must have shape (n, n, r, r), got {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise InputDataError(f"expected base dimension {n}, got {arr.shape[0]}")
    if r is not None and arr.shape[2] != r:
        raise InputDataError(f"expected fiber rank {r}, got {arr.shape[2]}")
    adjoint = np.conj(np.transpose(arr, (1, 0, 3, 2)))
    asym = float(np.max(np.abs(arr - adjoint))) if arr.size else 0.0
    if asym > _SYMMETRY_REJECT:
        raise InputDataError(
            f"curvature tensor violates Hermitian symmetry by {asym:.3e} "
            f"(limit {_SYMMETRY_REJECT:.0e})")
    sym = (arr + adjoint) / 2
    sym.setflags(write=False)
    return CurvatureTensor(n=int(arr.shape[0]), r=int(arr.shape[2]), c=sym)


def tensor_from_doc(doc) -> CurvatureTensor:
    """Parse {"n": int, "r": int, "c": [[i, j, lam, mu, re, im], ...]} with
    1-based indices; omitted entries are zero."""
    if not isinstance(doc, dict):
        raise InputDataError("curvature document must be a JSON object")
    try:
        n = int(doc["n"])
        r = int(doc["r"])
        entries = doc["c"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputDataError(f"curvature document missing field: {exc}") from exc
    if n < 1 or r < 1:
        raise InputDataError(f"invalid dimensions (n={n}, r={r})")
    if not isinstance(entries, list):
        raise InputDataError("curvature field 'c' must be a list of entries")
    arr = np.zeros((n, n, r, r), dtype=np.complex128)
    seen = set()
    for entry in entries:
        try:
            i, j, lam, mu = (int(v) for v in entry[:4])
            re, im = float(entry[4]), float(entry[5])
        except (TypeError, ValueError, IndexError) as exc:
            raise InputDataError(f"malformed curvature entry: {entry!r}") from exc
        if len(entry) != 6:
            raise InputDataError(f"curvature entry needs 6 fields: {entry!r}")
        if not (1 <= i <= n and 1 <= j <= n and 1 <= lam <= r and 1 <= mu <= r):
            raise InputDataError(
                f"curvature entry indices out of range (n={n}, r={r}): {entry!r}")
        key = (i, j, lam, mu)
        if key in seen:
            raise InputDataError(f"duplicate curvature entry at {key}")
        seen.add(key)
        arr[i - 1, j - 1, lam - 1, mu - 1] = complex(re, im)
    return validate_tensor(arr)


def tensor_to_doc(t: CurvatureTensor) -> dict:
    entries = []
    for i in range(t.n):
        for j in range(t.n):
            for lam in range(t.r):
                for mu in range(t.r):
                    v = t.c[i, j, lam, mu]
                    if v != 0:
                        entries.append([i + 1, j + 1, lam + 1, mu + 1,
                                        float(v.real), float(v.imag)])
    return {"n": t.n, "r": t.r, "c": entries}


# ---------------------------------------------------------------------------
# metric parameters
# ---------------------------------------------------------------------------

def _lcm_upto(k: int) -> int:
    out = 1
    for s in range(2, k + 1):
        out = out * s // math.gcd(out, s)
    return out


@dataclass(frozen=True)
class MetricParams:
    """Exponent p and level weights eps_1 > eps_2 > ... > 0.

    p must be a positive even integer divisible by 2*lcm(1..k) for the jet
    order k in use, so every exponent p/s is an even integer and every
    p/(2s-1) is a ratio with even numerator (no branch cuts on nonnegative
    radicands).
    """
    p: int
    eps: tuple

    @staticmethod
    def default_for(k: int, eps_base: float = 0.2) -> "MetricParams":
        params = MetricParams(p=2 * _lcm_upto(k),
                              eps=tuple(eps_base ** s for s in range(1, k + 1)))
        params.validate_for(k)
        return params

    def validate_for(self, k: int) -> None:
        if k < 1:
            raise InputDataError(f"jet order must be >= 1, got {k}")
        if not isinstance(self.p, int) or self.p <= 0 or self.p % 2:
            raise InputDataError(f"p must be a positive even integer, got {self.p}")
        need = 2 * _lcm_upto(k)
        if self.p % need:
            raise InputDataError(
                f"p={self.p} must be divisible by 2*lcm(1..{k}) = {need}")
        if len(self.eps) < k:
            raise InputDataError(
                f"need at least {k} epsilon weights, got {len(self.eps)}")
        eps = self.eps[:k]
        if any(e <= 0 for e in eps):
            raise InputDataError("epsilon weights must be positive")
        if any(eps[i] <= eps[i + 1] for i in range(len(eps) - 1)):
            raise InputDataError("epsilon weights must be strictly decreasing")


# ---------------------------------------------------------------------------
# metric evaluation
# ---------------------------------------------------------------------------

def _level_norm_sq(c: CurvatureTensor, z: np.ndarray, v: np.ndarray,
                   what: str, level: int) -> float:
    """|v|^2 + sum c[i,j,a,b] z_i conj(z_j) v_a conj(v_b), guarded."""
    base = float(np.real(np.vdot(v, v)))
    quad = np.einsum("ijab,i,j,a,b->", c.c, z, np.conj(z), v, np.conj(v))
    ns2 = base + float(np.real(quad))
    if ns2 < 0:
        raise NumericDomainError(
            f"{what} expansion is negative at level {level}: "
            f"|v|^2 + q = {ns2:.6e} (point too far from the expansion center)")
    return ns2


def gg_metric_eval(c: CurvatureTensor, z, xi_vals, params: MetricParams) -> float:
    """( sum_s ||xi_s||_h^(2p/s) )^(1/p) with the second-order expansion of h
    around the center."""
    z = np.asarray(z, dtype=np.complex128)
    if z.shape != (c.n,):
        raise InputDataError(f"base point must have shape ({c.n},), got {z.shape}")
    arr = np.asarray(xi_vals, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[1] != c.r:
        raise InputDataError(
            f"jet values must have shape (k, {c.r}), got {arr.shape}")
    k = arr.shape[0]
    params.validate_for(k)
    total = 0.0
    for s in range(1, k + 1):
        ns2 = _level_norm_sq(c, z, arr[s - 1], "metric", s)
        total += ns2 ** (params.p / s)
    return total ** (1.0 / params.p)


def inv_metric_eval(c: CurvatureTensor, z, eta_vals, params: MetricParams) -> float:
    """( sum_s eps_s ||eta_s||_h^(p/(2s-1)) )^(1/p) times the closed-form
    sphere factor ||eta_1||_h / sqrt(r) (the square root of the average of
    |<eta_1, v>|^2 over unit vectors v)."""
    z = np.asarray(z, dtype=np.complex128)
    if z.shape != (c.n,):
        raise InputDataError(f"base point must have shape ({c.n},), got {z.shape}")
    arr = np.asarray(eta_vals, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[1] != c.r:
        raise InputDataError(
            f"invariant jet values must have shape (k, {c.r}), got {arr.shape}")
    k = arr.shape[0]
    params.validate_for(k)
    norms_sq = [_level_norm_sq(c, z, arr[s - 1], "invariant metric", s)
                for s in range(1, k + 1)]
    total = 0.0
    for s in range(1, k + 1):
        total += params.eps[s - 1] * norms_sq[s - 1] ** (params.p / (2 * (2 * s - 1)))
    sphere_factor = math.sqrt(norms_sq[0] / c.r)
    return total ** (1.0 / params.p) * sphere_factor


# ---------------------------------------------------------------------------
# symmetric powers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymPowerCoeffs:
    """Second-order metric coefficients on S^l V in the basis
    e^alpha = sqrt(l!/alpha!) e_1^alpha_1 ... e_r^alpha_r (orthonormal at the
    center).  C has shape (n, n, B, B) over the multi-index basis."""
    l: int
    basis: tuple           # multi-indices alpha, each a tuple of r ints
    scalings: tuple        # sqrt(l!/alpha!) per basis element
    C: np.ndarray


def multi_indices(r: int, l: int) -> list:
    """All alpha in N^r with |alpha| = l, lexicographically descending
    (deterministic basis order)."""
    if r == 1:
        return [(l,)]
    out = []
    for head in range(l, -1, -1):
        out.extend((head,) + tail for tail in multi_indices(r - 1, l - head))
    return out


def _one_move(alpha: tuple, beta: tuple):
    """If beta = alpha - e_a + e_b for a single pair a != b, return (a, b)."""
    plus = minus = None
    for idx, (x, y) in enumerate(zip(alpha, beta)):
        d = x - y
        if d == 0:
            continue
        if d == 1 and minus is None:
            minus = idx
        elif d == -1 and plus is None:
            plus = idx
        else:
            return None
    if minus is None or plus is None:
        return None
    return minus, plus


def sym_power_metric_coeffs(c: CurvatureTensor, l: int) -> SymPowerCoeffs:
    """Metric coefficients induced on S^l V through the V^{tensor l}
    embedding, in the scaled basis:

        C[i,j,alpha,alpha] = sum_a alpha_a c[i,j,a,a]
        C[i,j,alpha,beta]  = c[i,j,a,b] sqrt(alpha_a beta_b)
                             when beta = alpha - e_a + e_b
        C[i,j,alpha,beta]  = 0 otherwise.
    """
    if l < 1:
        raise InputDataError(f"symmetric power must be >= 1, got {l}")
    basis = multi_indices(c.r, l)
    B = len(basis)
    lfac = math.factorial(l)
    scalings = tuple(
        math.sqrt(lfac / math.prod(math.factorial(x) for x in alpha))
        for alpha in basis)
    C = np.zeros((c.n, c.n, B, B), dtype=np.complex128)
    for A, alpha in enumerate(basis):
        for a, mult in enumerate(alpha):
            if mult:
                C[:, :, A, A] += mult * c.c[:, :, a, a]
        for Bidx, beta in enumerate(basis):
            if Bidx == A:
                continue
            move = _one_move(alpha, beta)
            if move is None:
                continue
            a, b = move
            C[:, :, A, Bidx] = c.c[:, :, a, b] * math.sqrt(alpha[a] * beta[b])
    C.setflags(write=False)
    return SymPowerCoeffs(l=l, basis=tuple(basis), scalings=scalings, C=C)


def sym_coeffs_to_doc(sp: SymPowerCoeffs, n: int, r: int) -> dict:
    entries = []
    B = len(sp.basis)
    for i in range(n):
        for j in range(n):
            for A in range(B):
                for Bidx in range(B):
                    v = sp.C[i, j, A, Bidx]
                    if v != 0:
                        entries.append([i + 1, j + 1, A + 1, Bidx + 1,
                                        float(v.real), float(v.imag)])
    return {"n": n, "r": r, "l": sp.l,
            "basis": [list(alpha) for alpha in sp.basis],
            "C": entries}
