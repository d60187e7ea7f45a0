"""Numba JIT sample kernel (the default backend).

One prange iteration per sample; outputs go to per-sample slots so the
result is independent of the thread count.  The scalar operation sequence
mirrors _kernels_numpy exactly (same accumulation order, integer powers by
repeated multiplication, same LAPACK eigensolver), keeping the two backends
bit-identical.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

DEG_TOL = 1e-10


@njit(parallel=True, cache=True)
def _kernel(c4, eta, exps, coefs, base, variant_inv, dets, negs, zeros):
    N, k, r = eta.shape
    n = c4.shape[0]
    for idx in prange(N):
        ns2 = np.empty(k)
        for s in range(k):
            acc = 0.0
            for a in range(r):
                x = eta[idx, s, a]
                acc = acc + (x.real * x.real + x.imag * x.imag)
            ns2[s] = acc

        M = np.empty((n, n), dtype=np.complex128)
        if variant_inv == 0:
            pw = np.empty(k)
            for s in range(k):
                acc2 = ns2[s]
                for _ in range(exps[s] - 1):
                    acc2 = acc2 * ns2[s]
                pw[s] = acc2
            tot = pw[0]
            for s in range(1, k):
                tot = tot + pw[s]
            for i in range(n):
                for j in range(n):
                    accm = 0.0 + 0.0j
                    for s in range(k):
                        qf = 0.0 + 0.0j
                        for a in range(r):
                            for b in range(r):
                                qf = qf + c4[i, j, a, b] * (
                                    eta[idx, s, a] * np.conj(eta[idx, s, b]))
                        accm = accm + (coefs[s] * (pw[s] / tot)) * (qf / ns2[s])
                    M[i, j] = accm
        else:
            for i in range(n):
                for j in range(n):
                    accm = base[i, j]
                    for s in range(k):
                        qf = 0.0 + 0.0j
                        for a in range(r):
                            for b in range(r):
                                qf = qf + c4[i, j, a, b] * (
                                    eta[idx, s, a] * np.conj(eta[idx, s, b]))
                        accm = accm + coefs[s] * (qf / ns2[s])
                    M[i, j] = accm

        w = np.linalg.eigvalsh(M)
        d = 1.0
        neg = 0
        zer = 0
        for q in range(n):
            wq = w[q]
            d = d * wq
            if wq < -DEG_TOL:
                neg += 1
            if abs(wq) <= DEG_TOL:
                zer += 1
        dets[idx] = d
        negs[idx] = neg
        zeros[idx] = zer


def compute_samples(c4, eta, exps, coefs, base, variant_inv,
                    dets, negs, zeros):
    """Same contract as _kernels_numpy.compute_samples."""
    _kernel(np.ascontiguousarray(c4), np.ascontiguousarray(eta),
            exps, coefs, np.ascontiguousarray(base),
            variant_inv, dets, negs, zeros)
