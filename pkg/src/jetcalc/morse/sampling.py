"""Fiber sampling for the Monte Carlo curvature integrals.

Each jet level eta_s is drawn as a standard complex Gaussian vector in C^r
(real and imaginary parts N(0, 1/2), so E|eta_sa|^2 = 1) from a counter-based
Philox stream keyed by the master seed.  All samples for a run are generated
up front in one deterministic pass, which makes every estimate a pure
function of (seed, N) regardless of how the kernel parallelizes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_NORM_FLOOR = 1e-300


@dataclass(frozen=True)
class FiberSample:
    """One fiber point: eta[s-1] is the level-s vector in C^r."""
    eta: np.ndarray            # (k, r) complex128
    provenance: tuple          # (seed, sample index)


def draw_eta(seed: int, N: int, k: int, r: int) -> np.ndarray:
    """(N, k, r) complex128 samples, deterministic in (seed, N, k, r)."""
    if N < 1 or k < 1 or r < 1:
        raise ValueError(f"invalid sampling request (N={N}, k={k}, r={r})")
    rng = np.random.Generator(np.random.Philox(key=seed))
    raw = rng.standard_normal((N, k, r, 2))
    eta = (raw[..., 0] + 1j * raw[..., 1]) * np.sqrt(0.5)
    # guard: no level vector may be (numerically) zero; redraw offenders from
    # the continuation of the same stream (deterministic, astronomically rare)
    while True:
        ns2 = (eta.real * eta.real + eta.imag * eta.imag).sum(axis=2)
        bad = np.flatnonzero(ns2.min(axis=1) < _NORM_FLOOR)
        if bad.size == 0:
            return eta
        raw = rng.standard_normal((bad.size, k, r, 2))
        eta[bad] = (raw[..., 0] + 1j * raw[..., 1]) * np.sqrt(0.5)


def fiber_samples(seed: int, N: int, k: int, r: int) -> list:
    """Materialized FiberSample objects (for pointwise APIs and tests)."""
    eta = draw_eta(seed, N, k, r)
    return [FiberSample(eta=eta[i], provenance=(seed, i)) for i in range(N)]
