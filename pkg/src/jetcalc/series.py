"""Truncated power-series arithmetic over a generic exact coefficient ring.

A series of order k is a plain list c of length k+1 with c[d] the coefficient
of t^d.  Jets (series of maps fixing 0) have c[0] equal to the ring zero.
Coefficients only need +, *, truthiness (zero test), and -- for inversion --
a caller-supplied "divide by the leading coefficient" map, so the same code
runs over Gaussian rationals, jet polynomials in formal symbols, and the
xi(1,1)-localized ring used by the invariant coordinates.
"""

from __future__ import annotations

from typing import Callable, Sequence

__all__ = ["mul_trunc", "pow_list_trunc", "compose_trunc", "invert_trunc"]


def mul_trunc(A: Sequence, B: Sequence, k: int, zero):
    """Product of two series, truncated at degree k."""
    out = [zero] * (k + 1)
    for i, ai in enumerate(A[: k + 1]):
        if not ai:
            continue
        for j, bj in enumerate(B[: k + 1 - i]):
            if not bj:
                continue
            out[i + j] = out[i + j] + ai * bj
    return out


def pow_list_trunc(phi: Sequence, jmax: int, k: int, zero, one):
    """[phi^0, phi^1, ..., phi^jmax], each truncated at degree k."""
    powers = [[one] + [zero] * k]
    for _ in range(jmax):
        powers.append(mul_trunc(powers[-1], phi, k, zero))
    return powers


def compose_trunc(outer: Sequence, inner: Sequence, k: int, zero):
    """outer(inner(t)) truncated at degree k; requires inner[0] == 0."""
    if inner[0]:
        raise ValueError("inner series must vanish at 0 for jet composition")
    # Horner over inner: sum_{j>=1} outer[j] inner^j, plus outer[0]
    acc = [zero] * (k + 1)
    for j in range(k, 0, -1):
        acc[0] = acc[0] + outer[j]
        acc = mul_trunc(acc, inner, k, zero)
    acc[0] = acc[0] + outer[0]
    return acc


def invert_trunc(a: Sequence, k: int, zero, one, div_lead: Callable):
    """Compositional inverse of the jet a (a[0] == 0, a[1] invertible).

    div_lead(x) must return x divided by a[1].  Returns b of order k with
    a(b(t)) = t through degree k.  Coefficient recursion: the t^n coefficient
    of a(b) depends on b[n] only through the linear term a[1]*b[n], so each
    step solves one linear equation exactly.
    """
    if a[0]:
        raise ValueError("only jets fixing 0 can be inverted")
    b = [zero] * (k + 1)
    b[1] = div_lead(one)
    for n in range(2, k + 1):
        sn = compose_trunc(a, b, n, zero)[n]
        if sn:
            b[n] = div_lead(zero - sn)
    return b
