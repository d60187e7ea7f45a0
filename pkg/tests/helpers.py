"""Shared deterministic random generators for the test suite.

Everything is driven by explicit random.Random / numpy Generator seeds so
each test is reproducible on its own.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from jetcalc.coefficients import GaussianRational
from jetcalc.jetpoly import JetPolynomial, Monomial, enumerate_monomials
from jetcalc.reparam import ReparamJet


def random_gr(rng: random.Random, complex_part: bool = True,
              nonzero: bool = False) -> GaussianRational:
    while True:
        re = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        im = Fraction(rng.randint(-3, 3), rng.randint(1, 2)) \
            if complex_part and rng.random() < 0.4 else Fraction(0)
        v = GaussianRational(re, im)
        if not (nonzero and v.is_zero()):
            return v


def random_monomial(rng: random.Random, k: int, r: int,
                    use_z: bool = False) -> Monomial:
    xi_vars = rng.sample(
        [(s, al) for s in range(1, k + 1) for al in range(1, r + 1)],
        rng.randint(0, min(3, k * r)))
    xi_block = tuple(sorted((s, al, rng.randint(1, 3)) for s, al in xi_vars))
    z_block = ()
    if use_z:
        z_vars = rng.sample(range(1, r + 1), rng.randint(0, min(2, r)))
        z_block = tuple(sorted((i, rng.randint(1, 2)) for i in z_vars))
    return Monomial(xi_block, z_block, ())


def random_poly(rng: random.Random, k: int, r: int, n_terms: int,
                use_z: bool = False) -> JetPolynomial:
    terms = {}
    for _ in range(n_terms):
        mono = random_monomial(rng, k, r, use_z=use_z)
        coeff = random_gr(rng, nonzero=True)
        acc = terms.get(mono)
        coeff = coeff if acc is None else acc + coeff
        if coeff.is_zero():
            terms.pop(mono, None)
        else:
            terms[mono] = coeff
    return JetPolynomial(terms, order=k)


def random_homogeneous(rng: random.Random, k: int, r: int, m: int,
                       n_terms: int) -> JetPolynomial:
    """Nonzero weighted-homogeneous polynomial of degree m."""
    basis = enumerate_monomials(k, r, m)
    chosen = rng.sample(basis, min(n_terms, len(basis)))
    terms = {mono: random_gr(rng, nonzero=True) for mono in chosen}
    return JetPolynomial(terms, order=k)


def random_jet(rng: random.Random, k: int) -> ReparamJet:
    coeffs = [random_gr(rng, complex_part=False, nonzero=True)]
    coeffs += [random_gr(rng, complex_part=False) for _ in range(k - 1)]
    return ReparamJet(coeffs)


def random_hermitian_tensor(rng: np.random.Generator, n: int, r: int,
                            scale: float = 1.0) -> np.ndarray:
    raw = (rng.standard_normal((n, n, r, r))
           + 1j * rng.standard_normal((n, n, r, r))) * scale
    return 0.5 * (raw + np.conj(np.transpose(raw, (1, 0, 3, 2))))


def random_unitary(rng: np.random.Generator, r: int) -> np.ndarray:
    z = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
    q, rr = np.linalg.qr(z)
    return q * (np.diagonal(rr) / np.abs(np.diagonal(rr)))


def brute_force_sym_coeffs(t, l: int) -> np.ndarray:
    """Independent oracle for the symmetric-power metric coefficients: push
    the expansion to the full tensor power V^{tensor l} and restrict to the
    explicitly normalized symmetrized basis (no closed form involved)."""
    import itertools
    import math

    from jetcalc.curvature import multi_indices

    basis = multi_indices(t.r, l)
    arrangements = []
    for alpha in basis:
        letters = []
        for a, mult in enumerate(alpha):
            letters.extend([a] * mult)
        arrangements.append(sorted(set(itertools.permutations(letters))))
    B = len(basis)
    C = np.zeros((t.n, t.n, B, B), dtype=np.complex128)
    for A in range(B):
        for Bi in range(B):
            acc = np.zeros((t.n, t.n), dtype=np.complex128)
            for u in arrangements[A]:
                for v in arrangements[Bi]:
                    for m in range(l):
                        if all(u[s] == v[s] for s in range(l) if s != m):
                            acc += t.c[:, :, u[m], v[m]]
            C[:, :, A, Bi] = acc / math.sqrt(
                len(arrangements[A]) * len(arrangements[Bi]))
    return C
