"""Deterministic quadrature cross-check for the order-1 volume integrals.

At jet order 1 the curvature density depends only on the direction
u = eta/|eta| on the unit sphere of C^r, and the sampling distribution of u
is uniform there.  In simplex-times-torus coordinates (x_a = |u_a|^2 on the
probability simplex, independent uniform phases on the non-pivot entries)
the uniform sphere measure is the uniform product measure, so a midpoint
tensor grid integrates it directly.  This route shares no code with the
Monte Carlo path: the form is contracted inline and the nodes are
deterministic, which makes it an independent oracle for small dimensions.

Supported: k = 1, r <= 3, n <= 2.  Anything larger raises InputDataError
("unsupported dimensions") -- the node count needed for a meaningful error
bound grows too fast beyond that.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..curvature import CurvatureTensor
from ..errors import InputDataError
from .forms import DEGENERATE_TOL
from .integrate import prefactor_for

__all__ = ["OracleResult", "quadrature_oracle"]

_DEFAULT_GRIDS = {1: (1, 1), 2: (256, 64), 3: (32, 16)}


@dataclass(frozen=True)
class OracleResult:
    variant: str
    n: int
    r: int
    nodes: int                 # grid points actually used (after simplex cut)
    values: tuple              # per-q integral, q = 0..n, prefactor included
    errors: tuple              # |fine - coarse| refinement error per q
    degenerate_weight: float   # probability mass in the degeneracy band

    def to_doc(self) -> dict:
        return {
            "I": [{"q": q, "value": v, "error": e}
                  for q, (v, e) in enumerate(zip(self.values, self.errors))],
            "degenerate_weight": self.degenerate_weight,
            "nodes": self.nodes,
        }


def _is_pow2(m: int) -> bool:
    return m >= 1 and (m & (m - 1)) == 0


def _sphere_grid(r: int, gx: int, gp: int):
    """Unit directions u (P, r) and weights w (P,) for the uniform sphere
    measure, midpoint rule in simplex-times-phase coordinates."""
    if r == 1:
        return np.ones((1, 1), dtype=np.complex128), np.ones(1)
    if r == 2:
        x1 = (np.arange(gx) + 0.5) / gx
        th = 2.0 * np.pi * (np.arange(gp) + 0.5) / gp
        x1g, thg = np.meshgrid(x1, th, indexing="ij")
        x1f, thf = x1g.ravel(), thg.ravel()
        u = np.empty((x1f.size, 2), dtype=np.complex128)
        u[:, 0] = np.sqrt(x1f)
        u[:, 1] = np.sqrt(1.0 - x1f) * np.exp(1j * thf)
        w = np.full(x1f.size, 1.0 / (gx * gp))
        return u, w
    # r == 3: uniform simplex via an indicator on the unit square
    x = (np.arange(gx) + 0.5) / gx
    th = 2.0 * np.pi * (np.arange(gp) + 0.5) / gp
    x1g, x2g, t2g, t3g = np.meshgrid(x, x, th, th, indexing="ij")
    x1f, x2f = x1g.ravel(), x2g.ravel()
    t2f, t3f = t2g.ravel(), t3g.ravel()
    inside = x1f + x2f < 1.0
    x1f, x2f, t2f, t3f = x1f[inside], x2f[inside], t2f[inside], t3f[inside]
    u = np.empty((x1f.size, 3), dtype=np.complex128)
    u[:, 0] = np.sqrt(x1f)
    u[:, 1] = np.sqrt(x2f) * np.exp(1j * t2f)
    u[:, 2] = np.sqrt(1.0 - x1f - x2f) * np.exp(1j * t3f)
    w = np.full(x1f.size, 2.0 / (gx * gx * gp * gp))
    return u, w


def _evaluate(c: np.ndarray, variant: str, u: np.ndarray, w: np.ndarray,
              n: int, r: int):
    """Per-q normalized integrals (no prefactor) plus degenerate weight."""
    m = np.einsum("ijab,pa,pb->pij", c, u, np.conj(u))
    if variant == "inv":
        base = np.einsum("ijaa->ij", c) * (1.0 / r)
        m = m + base[None, :, :]
    vals = np.linalg.eigvalsh(m)
    dets = np.prod(vals, axis=1)
    negs = np.sum(vals < -DEGENERATE_TOL, axis=1)
    nondeg = np.all(np.abs(vals) > DEGENERATE_TOL, axis=1)
    wsum = float(np.sum(w))
    per_q = []
    for q in range(n + 1):
        mask = nondeg & (negs == q)
        per_q.append(float(np.sum(np.where(mask, w * dets, 0.0))) / wsum)
    deg = float(np.sum(np.where(nondeg, 0.0, w))) / wsum
    return per_q, deg


def quadrature_oracle(c: CurvatureTensor, variant: str = "gg",
                      grid: tuple | None = None) -> OracleResult:
    if variant not in ("gg", "inv"):
        raise InputDataError(
            f"unknown variant {variant!r}; expected 'gg' or 'inv'")
    n, r = c.n, c.r
    if n > 2 or r > 3:
        raise InputDataError(
            f"unsupported dimensions for the quadrature oracle: n={n}, r={r} "
            "(supported: n <= 2, r <= 3 at jet order 1)")
    gx, gp = grid if grid is not None else _DEFAULT_GRIDS[r]
    if not (_is_pow2(gx) and _is_pow2(gp)):
        raise InputDataError(
            f"grid sizes must be powers of two, got ({gx}, {gp})")
    if r > 1 and (gx < 2 or gp < 2):
        raise InputDataError(
            f"grid sizes must be at least 2 for r={r}, got ({gx}, {gp})")

    pref = prefactor_for(variant, 1, n, r)
    u_f, w_f = _sphere_grid(r, gx, gp)
    fine, deg = _evaluate(c.c, variant, u_f, w_f, n, r)
    if r == 1:
        coarse = fine
    else:
        u_c, w_c = _sphere_grid(r, gx // 2, gp // 2)
        coarse, _ = _evaluate(c.c, variant, u_c, w_c, n, r)
    values = tuple(pref * v for v in fine)
    errors = tuple(abs(pref * f - pref * g) for f, g in zip(fine, coarse))
    return OracleResult(variant=variant, n=n, r=r, nodes=int(w_f.size),
                        values=values, errors=errors, degenerate_weight=deg)
