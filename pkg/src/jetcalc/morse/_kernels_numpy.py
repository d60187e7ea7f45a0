"""Pure-numpy sample kernel (the fallback backend).

Vectorized over samples only, and deliberately written in componentwise REAL
arithmetic: numpy's vectorized complex multiply uses SIMD fused
multiply-adds and its complex-by-real divide multiplies by a reciprocal,
both of which round differently (by an ulp) from the scalar complex
arithmetic the JIT backend executes.  Splitting every complex operation into
its naive real formula -- the same formula scalar code uses -- makes each
intermediate a single IEEE operation in the same order as the JIT kernel,
so the two backends produce identical bytes.  Accumulation order (levels,
then components, ascending), integer powers by repeated multiplication, and
the LAPACK eigensolver also match.
"""

from __future__ import annotations

import numpy as np

DEG_TOL = 1e-10


def compute_samples(c4, eta, exps, coefs, base, variant_inv,
                    dets, negs, zeros):
    """Fill per-sample outputs.

    c4   : (n, n, r, r) complex128 curvature coefficients
    eta  : (N, k, r) complex128 fiber samples
    exps : (k,) int64, the integer exponents p/s (gg variant)
    coefs: (k,) float64 level coefficients
    base : (n, n) complex128 additive base term (inv variant)
    variant_inv: 0 for the gg form, 1 for the invariant form
    dets, negs, zeros: (N,) output slots (float64, int64, int64)
    """
    N, k, r = eta.shape
    n = c4.shape[0]
    er = np.ascontiguousarray(eta.real)
    ei = np.ascontiguousarray(eta.imag)

    ns2 = np.empty((N, k))
    for s in range(k):
        acc = np.zeros(N)
        for a in range(r):
            acc = acc + (er[:, s, a] * er[:, s, a]
                         + ei[:, s, a] * ei[:, s, a])
        ns2[:, s] = acc

    # qf[i,j] accumulates c4[i,j,a,b] * eta_a * conj(eta_b); each complex
    # product is expanded to its two real components explicitly
    qfr = np.empty((N, k, n, n))
    qfi = np.empty((N, k, n, n))
    for s in range(k):
        for i in range(n):
            for j in range(n):
                accr = np.zeros(N)
                acci = np.zeros(N)
                for a in range(r):
                    for b in range(r):
                        xr = er[:, s, a]
                        xi = ei[:, s, a]
                        yr = er[:, s, b]
                        yi = -ei[:, s, b]
                        ur = xr * yr - xi * yi
                        ui = xr * yi + xi * yr
                        cr = c4[i, j, a, b].real
                        ci = c4[i, j, a, b].imag
                        accr = accr + (cr * ur - ci * ui)
                        acci = acci + (cr * ui + ci * ur)
                qfr[:, s, i, j] = accr
                qfi[:, s, i, j] = acci

    M = np.empty((N, n, n), dtype=np.complex128)
    if variant_inv == 0:
        pw = np.empty((N, k))
        for s in range(k):
            acc = ns2[:, s].copy()
            for _ in range(int(exps[s]) - 1):
                acc = acc * ns2[:, s]
            pw[:, s] = acc
        tot = pw[:, 0].copy()
        for s in range(1, k):
            tot = tot + pw[:, s]
        for i in range(n):
            for j in range(n):
                accr = np.zeros(N)
                acci = np.zeros(N)
                for s in range(k):
                    h = coefs[s] * (pw[:, s] / tot)
                    accr = accr + h * (qfr[:, s, i, j] / ns2[:, s])
                    acci = acci + h * (qfi[:, s, i, j] / ns2[:, s])
                M[:, i, j].real = accr
                M[:, i, j].imag = acci
    else:
        for i in range(n):
            for j in range(n):
                accr = np.full(N, base[i, j].real)
                acci = np.full(N, base[i, j].imag)
                for s in range(k):
                    accr = accr + coefs[s] * (qfr[:, s, i, j] / ns2[:, s])
                    acci = acci + coefs[s] * (qfi[:, s, i, j] / ns2[:, s])
                M[:, i, j].real = accr
                M[:, i, j].imag = acci

    w = np.linalg.eigvalsh(M)
    d = np.ones(N)
    neg = np.zeros(N, dtype=np.int64)
    zer = np.zeros(N, dtype=np.int64)
    for q in range(n):
        wq = w[:, q]
        d = d * wq
        neg = neg + (wq < -DEG_TOL)
        zer = zer + (np.abs(wq) <= DEG_TOL)
    dets[:] = d
    negs[:] = neg
    zeros[:] = zer
