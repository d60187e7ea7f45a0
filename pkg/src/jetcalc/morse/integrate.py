"""Monte Carlo estimation of the per-index curvature volume integrals.

Estimator: draw N fiber samples, build the curvature form per sample, bucket
det(M) by Morse index q (samples with any eigenvalue within the degeneracy
band go to a separate bucket), divide by N, and multiply by the combinatorial
prefactor of the variant -- binom(n+kr-1, n) for the plain jet metric,
binom(n+k(r-1), n) for the invariant one.

Determinism: samples come from Philox(seed) in one pass, kernels write
per-sample slots, and the reduction is a fixed-order sum over the sample
axis, so reports are byte-identical for any worker count and backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..curvature import CurvatureTensor, MetricParams
from ..errors import InputDataError, NumericDomainError
from . import backend as _backend
from .sampling import draw_eta

__all__ = ["IntegralEstimate", "BucketEstimate", "mc_integrate",
           "ScalingRow", "scaling_report"]

_VARIANTS = ("gg", "inv")


@dataclass(frozen=True)
class BucketEstimate:
    q: int
    value: float
    stderr: float
    count: int


@dataclass(frozen=True)
class IntegralEstimate:
    variant: str
    k: int
    n: int
    r: int
    samples: int
    seed: int
    prefactor: int
    buckets: tuple            # BucketEstimate for q = 0..n
    degenerate: int
    alternating: float        # prefactor * mean of (-1)^q det over buckets
    alternating_stderr: float

    def to_doc(self) -> dict:
        return {
            "I": [{"q": b.q, "value": b.value, "stderr": b.stderr,
                   "count": b.count} for b in self.buckets],
            "degenerate": self.degenerate,
            "prefactor": self.prefactor,
            "seed": self.seed,
            "samples": self.samples,
        }


def prefactor_for(variant: str, k: int, n: int, r: int) -> int:
    if variant == "gg":
        return math.comb(n + k * r - 1, n)
    return math.comb(n + k * (r - 1), n)


def _mean_and_stderr(contrib: np.ndarray, N: int, prefactor: int):
    """Mean and standard error of (prefactor/N) * sum(contrib) treating the
    per-sample contributions (zeros included) as iid draws."""
    s1 = float(np.sum(contrib))
    s2 = float(np.sum(contrib * contrib))
    mean = s1 / N
    if N > 1:
        var = max(s2 - s1 * s1 / N, 0.0) / (N - 1)
    else:
        var = 0.0
    return prefactor * mean, prefactor * math.sqrt(var / N)


def mc_integrate(c: CurvatureTensor, k: int, params: MetricParams | None,
                 variant: str, N: int, seed: int, threads: int = 1,
                 backend: str | None = None) -> IntegralEstimate:
    if variant not in _VARIANTS:
        raise InputDataError(
            f"unknown variant {variant!r}; expected one of {_VARIANTS}")
    if not isinstance(N, int) or N < 1:
        raise InputDataError(f"sample count must be a positive integer, got {N}")
    if not isinstance(seed, int) or seed < 0:
        raise InputDataError(f"seed must be a nonnegative integer, got {seed}")
    if k < 1:
        raise InputDataError(f"jet order must be >= 1, got {k}")
    if params is None:
        params = MetricParams.default_for(k)
    params.validate_for(k)

    n, r = c.n, c.r
    eta = draw_eta(seed, N, k, r)
    exps = np.array([params.p // s for s in range(1, k + 1)], dtype=np.int64)
    coefs = np.array([1.0 / s for s in range(1, k + 1)])
    if variant == "inv":
        base = np.zeros((n, n), dtype=np.complex128)
        for a in range(r):
            base = base + c.c[:, :, a, a]
        base = base * (1.0 / r)
    else:
        base = np.zeros((n, n), dtype=np.complex128)

    name, kernel = _backend.get_kernel(backend)
    _backend.apply_threads(name, threads)
    dets = np.empty(N)
    negs = np.empty(N, dtype=np.int64)
    zeros = np.empty(N, dtype=np.int64)
    kernel.compute_samples(c.c, eta, exps, coefs, base,
                           1 if variant == "inv" else 0, dets, negs, zeros)

    if not np.all(np.isfinite(dets)):
        first = int(np.flatnonzero(~np.isfinite(dets))[0])
        raise NumericDomainError(
            f"nonfinite curvature density at sample {first} (seed {seed})")

    ok = zeros == 0
    buckets = []
    for q in range(n + 1):
        mask = ok & (negs == q)
        contrib = np.where(mask, dets, 0.0)
        value, stderr = _mean_and_stderr(contrib, N, prefactor_for(variant, k, n, r))
        buckets.append(BucketEstimate(q=q, value=value, stderr=stderr,
                                      count=int(np.sum(mask))))
    signs = np.where(negs % 2 == 0, 1.0, -1.0)
    alt_contrib = np.where(ok, dets * signs, 0.0)
    alt_value, alt_stderr = _mean_and_stderr(
        alt_contrib, N, prefactor_for(variant, k, n, r))
    return IntegralEstimate(
        variant=variant, k=k, n=n, r=r, samples=N, seed=seed,
        prefactor=prefactor_for(variant, k, n, r),
        buckets=tuple(buckets), degenerate=int(N - np.sum(ok)),
        alternating=alt_value, alternating_stderr=alt_stderr)


# ---------------------------------------------------------------------------
# scaling diagnostic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingRow:
    k: int
    alternating: float
    stderr: float
    ratio: float | None          # alternating * n! (k!)^r / (log k)^n, k >= 2
    ratio_stderr: float | None
    estimate: IntegralEstimate


def scaling_report(c: CurvatureTensor, kmax: int,
                   params: MetricParams | None, N: int, seed: int,
                   threads: int = 1, backend: str | None = None) -> list:
    """Invariant-variant estimates for k = 1..kmax with the normalized
    asymptotic ratios.  Diagnostic only: no pass/fail claim is attached."""
    if kmax < 2:
        raise InputDataError(f"scaling report needs kmax >= 2, got {kmax}")
    if params is None:
        params = MetricParams.default_for(kmax)
    params.validate_for(kmax)
    n, r = c.n, c.r
    rows = []
    for k in range(1, kmax + 1):
        est = mc_integrate(c, k, params, "inv", N, seed, threads=threads,
                           backend=backend)
        if k >= 2:
            scale = math.factorial(n) * math.factorial(k) ** r / math.log(k) ** n
            ratio = est.alternating * scale
            ratio_stderr = est.alternating_stderr * scale
        else:
            ratio = ratio_stderr = None
        rows.append(ScalingRow(k=k, alternating=est.alternating,
                               stderr=est.alternating_stderr, ratio=ratio,
                               ratio_stderr=ratio_stderr, estimate=est))
    return rows


def scaling_rows_to_doc(rows: list) -> dict:
    return {"rows": [{
        "k": row.k,
        "I": row.alternating,
        "stderr": row.stderr,
        "ratio": row.ratio,
        "ratio_stderr": row.ratio_stderr,
        "per_q": row.estimate.to_doc(),
    } for row in rows]}
