"""Jets of reparametrizations of (C,0), their action on jet coordinates,
symbolic invariance checking, and the invariant-polynomial generators
(Wronskians, brackets, the bracket tower, coordinate-change numerators).

A reparametrization jet phi(t) = a_1 t + ... + a_k t^k is stored by its
normalized Taylor coefficients a_s = phi^(s)(0)/s!, which keeps the group law
integral.  The action on the unnormalized jet variables xi(s, alpha) follows
by truncated-series composition:

    xi(s, alpha) |-> sum_{j=1..s} (s!/j!) * [t^s](phi^j) * xi(j, alpha).

Invariance of a polynomial P is decided symbolically: pull back along a fully
formal jet (coefficients a_1..a_k as polynomial symbols) and compare with
a_1^m * P as an exact polynomial identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .coefficients import GR_ONE, GR_ZERO, GaussianRational
from .errors import (DegreeError, InputDataError, OrderOverflowError,
                     SingularJetError)
from .jetpoly import (JetPolynomial, avar, const, delta, homogeneous_degree,
                      substitute, weighted_degree, xi, zvar)
from .series import compose_trunc, invert_trunc, mul_trunc, pow_list_trunc

__all__ = [
    "ReparamJet",
    "SymbolicReparamJet",
    "InvarianceReport",
    "identity_jet",
    "compose",
    "invert",
    "act",
    "pullback",
    "invariance_weight",
    "wronskian",
    "bracket",
    "qk_family",
    "invariant_coords",
    "CoordFraction",
]


# ---------------------------------------------------------------------------
# jets
# ---------------------------------------------------------------------------

class ReparamJet:
    """k-jet of a biholomorphism of (C,0): phi(t) = a_1 t + ... + a_k t^k."""

    __slots__ = ("k", "a")

    def __init__(self, coeffs: Sequence):
        a = tuple(GaussianRational.coerce(c) for c in coeffs)
        if not a:
            raise ValueError("a reparametrization jet needs order k >= 1")
        if a[0].is_zero():
            raise SingularJetError("jet has vanishing linear part (a_1 = 0)")
        object.__setattr__(self, "k", len(a))
        object.__setattr__(self, "a", a)

    def __setattr__(self, name, value):
        raise AttributeError("ReparamJet is immutable")

    def series(self) -> list:
        return [GR_ZERO, *self.a]

    def __eq__(self, other):
        if not isinstance(other, ReparamJet):
            return NotImplemented
        return self.a == other.a

    def __hash__(self):
        return hash(self.a)

    def __repr__(self):
        body = " + ".join(
            f"{c!r}*t" + (f"^{s}" if s > 1 else "")
            for s, c in enumerate(self.a, start=1) if not c.is_zero())
        return f"ReparamJet({body or '0'})"

    def to_doc(self) -> dict:
        return {"k": self.k, "a": [c.to_quad() for c in self.a]}

    @staticmethod
    def from_doc(doc) -> "ReparamJet":
        try:
            k = int(doc["k"])
            quads = doc["a"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputDataError(f"jet document missing field: {exc}") from exc
        if not isinstance(quads, list) or len(quads) != k:
            raise InputDataError(f"jet document needs exactly k={k} coefficients")
        try:
            coeffs = [GaussianRational.from_quad(q) for q in quads]
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputDataError(f"malformed jet coefficient: {exc}") from exc
        return ReparamJet(coeffs)


@dataclass(frozen=True)
class SymbolicReparamJet:
    """Fully formal jet: coefficients are the polynomial symbols a_1..a_k."""
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("a reparametrization jet needs order k >= 1")

    def series(self) -> list:
        return [const(0)] + [avar(i) for i in range(1, self.k + 1)]


def identity_jet(k: int) -> ReparamJet:
    return ReparamJet([GR_ONE] + [GR_ZERO] * (k - 1))


def compose(phi: ReparamJet, psi: ReparamJet) -> ReparamJet:
    """The k-jet of t -> psi(phi(t)): apply phi first, then psi (diagrammatic
    order, so that pullback(compose(phi, psi), P) = pullback(psi,
    pullback(phi, P)))."""
    if phi.k != psi.k:
        raise ValueError(f"jet orders differ: {phi.k} vs {psi.k}")
    coeffs = compose_trunc(psi.series(), phi.series(), phi.k, GR_ZERO)
    return ReparamJet(coeffs[1:])


def invert(phi: ReparamJet) -> ReparamJet:
    """The compositional inverse jet (two-sided, exact)."""
    a1 = phi.a[0]
    coeffs = invert_trunc(phi.series(), phi.k, GR_ZERO, GR_ONE,
                          lambda x: x / a1)
    return ReparamJet(coeffs[1:])


# ---------------------------------------------------------------------------
# the action on jet coordinates
# ---------------------------------------------------------------------------

def act(phi: "ReparamJet | SymbolicReparamJet", k: int, r: int) -> dict:
    """Substitution map of the reparametrization action: for each (s, alpha)
    with s <= k, alpha <= r, the polynomial expressing the jet variable of
    f o phi in terms of a_1..a_s and xi(1..s, alpha)."""
    if k < 1 or r < 1:
        raise ValueError(f"invalid ranges (k={k}, r={r})")
    if phi.k < k:
        raise OrderOverflowError(
            f"jet of order {phi.k} cannot act on order-{k} coordinates")
    zero, one = const(0), const(1)
    if isinstance(phi, SymbolicReparamJet):
        phi_series = phi.series()
    else:
        phi_series = [zero] + [const(c) for c in phi.a]
    powers = pow_list_trunc(phi_series[: k + 1], k, k, zero, one)
    images: dict = {}
    for s in range(1, k + 1):
        sfac = math.factorial(s)
        for alpha in range(1, r + 1):
            img = zero
            for j in range(1, s + 1):
                cj = powers[j][s]
                if cj:
                    img = img + cj * xi(j, alpha) * Fraction(sfac,
                                                             math.factorial(j))
            images[(s, alpha)] = img
    return images


def pullback(phi: "ReparamJet | SymbolicReparamJet",
             P: JetPolynomial) -> JetPolynomial:
    """Substitute the action of phi into P (base variables are untouched:
    reparametrization fixes the origin)."""
    k = P.max_jet_order()
    if k == 0:
        return P
    r = max((al for m in P.terms for (_s, al, _e) in m.xi), default=1)
    return substitute(P, xi_map=act(phi, k, r))


# ---------------------------------------------------------------------------
# invariance decision
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InvarianceWitness:
    jet: ReparamJet
    xi_values: dict        # (s, alpha) -> GaussianRational
    z_values: dict         # i -> GaussianRational
    pullback_value: GaussianRational
    scaled_value: GaussianRational  # a_1^m * P at the same point


@dataclass(frozen=True)
class InvarianceReport:
    invariant: bool
    weight: int | None = None
    witness: InvarianceWitness | None = None


def invariance_weight(P: JetPolynomial) -> InvarianceReport:
    """Decide reparametrization invariance symbolically.

    Invariant P of weight m satisfies pullback(phi, P) = a_1^m * P as a
    polynomial identity in the formal symbols a_1..a_k.  Otherwise a concrete
    rational witness (jet + evaluation point) with differing values is
    produced deterministically.
    """
    if P.is_zero():
        raise ValueError("invariance of the zero polynomial is undefined")
    k = max(P.max_jet_order(), 1)
    phi = SymbolicReparamJet(k)
    S = pullback(phi, P)
    degs = weighted_degree(P)
    m = max(degs)
    target = avar(1) ** m * P
    if len(degs) == 1 and S == target:
        return InvarianceReport(invariant=True, weight=m)
    D = S - target
    assert not D.is_zero()
    jet_vals, xi_vals, z_vals, lhs, rhs = _witness_point(D, S, target, k)
    return InvarianceReport(
        invariant=False,
        witness=InvarianceWitness(
            jet=ReparamJet(jet_vals), xi_values=xi_vals, z_values=z_vals,
            pullback_value=lhs, scaled_value=rhs))


def _variables_of(P: JetPolynomial):
    xis, zs, avars = set(), set(), set()
    for mono in P.terms:
        xis.update((s, al) for (s, al, _e) in mono.xi)
        zs.update(i for (i, _e) in mono.z)
        avars.update(i for (i, _e) in mono.a)
    return sorted(xis), sorted(zs), sorted(avars)


def _witness_point(D: JetPolynomial, S: JetPolynomial,
                   target: JetPolynomial, k: int):
    """Deterministic point with D != 0: assign one variable at a time,
    keeping any small value whose partial evaluation stays nonzero (a nonzero
    univariate polynomial of degree d cannot vanish at d+1 distinct points).
    a_1 starts at 1 so the witness jet is regular."""
    xis, zs, avars = _variables_of(D)
    assignment_a: dict[int, GaussianRational] = {}
    assignment_xi: dict = {}
    assignment_z: dict = {}
    cur = D
    for i in avars:
        start = 1 if i == 1 else 0
        v = start
        while True:
            trial = substitute(cur, a_map={i: GaussianRational(v)})
            if not trial.is_zero():
                assignment_a[i] = GaussianRational(v)
                cur = trial
                break
            v += 1
    for (s, al) in xis:
        v = 0
        while True:
            trial = substitute(cur, xi_map={(s, al): GaussianRational(v)})
            if not trial.is_zero():
                assignment_xi[(s, al)] = GaussianRational(v)
                cur = trial
                break
            v += 1
    for i in zs:
        v = 0
        while True:
            trial = substitute(cur, z_map={i: GaussianRational(v)})
            if not trial.is_zero():
                assignment_z[i] = GaussianRational(v)
                cur = trial
                break
            v += 1
    jet_vals = [assignment_a.get(i, GR_ONE if i == 1 else GR_ZERO)
                for i in range(1, k + 1)]
    full_xi = {key: assignment_xi.get(key, GR_ZERO)
               for key in _variables_of(S + target)[0]}
    full_z = {i: assignment_z.get(i, GR_ZERO)
              for i in _variables_of(S + target)[1]}
    a_map = {i: jet_vals[i - 1] for i in range(1, k + 1)}
    lhs = substitute(S, xi_map=full_xi, z_map=full_z,
                     a_map=a_map).constant_value()
    rhs = substitute(target, xi_map=full_xi, z_map=full_z,
                     a_map=a_map).constant_value()
    return jet_vals, full_xi, full_z, lhs, rhs


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def wronskian(u: Sequence[JetPolynomial],
              max_order: int | None = None) -> JetPolynomial:
    """Wronskian of polynomials in the base symbols z_1..z_r: entry (i, j) of
    the matrix is the j-th formal derivative of u_i, j = 1..s."""
    s = len(u)
    if s < 1:
        raise ValueError("wronskian needs at least one entry")
    for entry in u:
        if not isinstance(entry, JetPolynomial):
            raise TypeError("wronskian entries must be jet polynomials")
        if any(m.xi or m.a for m in entry.terms):
            raise ValueError(
                "wronskian entries must be polynomials in the base symbols "
                "z_i only")
    if max_order is not None and s > max_order:
        raise OrderOverflowError(
            f"wronskian of {s} entries needs jet order {s} > budget {max_order}")
    rows = []
    for entry in u:
        derivs = []
        cur = entry
        for _ in range(s):
            cur = delta(cur)
            derivs.append(cur)
        rows.append(derivs)
    return _det(rows)


def _det(rows: list) -> JetPolynomial:
    """Determinant by expansion along the first column (commutative ring)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = const(0)
    for i in range(n):
        if rows[i][0].is_zero():
            continue
        minor = [row[1:] for j, row in enumerate(rows) if j != i]
        term = rows[i][0] * _det(minor)
        total = total + term if i % 2 == 0 else total - term
    return total


def bracket(P: JetPolynomial, Q: JetPolynomial) -> JetPolynomial:
    """[P,Q] = deg(P)·P·δQ − deg(Q)·Q·δP for weighted-homogeneous inputs of
    nonzero weighted degree; homogeneous of degree deg P + deg Q + 1.

    The coefficients must be proportional to (deg P, deg Q): rescaling a
    weight-m invariant along the group orbit perturbs its δ-image by m times
    the invariant, so only this weighting cancels the two anomalies and sends
    invariant pairs to invariants.  It is the quotient d log(P^{1/deg P} /
    Q^{1/deg Q}) · P·Q cleared of denominators (scaled by −deg(P)·deg(Q)),
    and [ξ_{1,1}, N] then reproduces the quotient-rule numerator recursion
    used by invariant_coords."""
    dp = homogeneous_degree(P)
    dq = homogeneous_degree(Q)
    if dp == 0 or dq == 0:
        raise DegreeError("bracket requires nonzero weighted degrees")
    return P * delta(Q) * dp - Q * delta(P) * dq


def qk_family(k: int, r: int) -> list:
    """The bracket tower at level k: Q_2 = {[xi(1,j), xi(1,l)] : j < l},
    Q_m = {[xi(1,j), q] : j <= r, q in Q_{m-1}}.  Returns (label, polynomial)
    pairs; empty for r = 1 (antisymmetry kills level 2)."""
    if k < 2:
        raise ValueError("the bracket tower starts at level 2")
    if r < 1:
        raise ValueError("rank must be >= 1")
    family = [(f"[{j},{l}]", bracket(xi(1, j), xi(1, l)))
              for j in range(1, r + 1) for l in range(j + 1, r + 1)]
    for _level in range(3, k + 1):
        nxt = []
        for j in range(1, r + 1):
            for label, q in family:
                member = bracket(xi(1, j), q)
                if not member.is_zero():
                    nxt.append((f"[{j},{label}]", member))
        family = nxt
    return family


# ---------------------------------------------------------------------------
# invariant coordinates
# ---------------------------------------------------------------------------

class _Localized:
    """num / xi(1,1)^d -- the polynomial ring localized at xi(1,1)."""

    __slots__ = ("num", "d")

    def __init__(self, num: JetPolynomial, d: int = 0):
        self.num = num
        self.d = d

    def __bool__(self):
        return bool(self.num)

    def __add__(self, other):
        d = max(self.d, other.d)
        num = (self.num * _XI11 ** (d - self.d)
               + other.num * _XI11 ** (d - other.d))
        return _Localized(num, d)

    def __sub__(self, other):
        d = max(self.d, other.d)
        num = (self.num * _XI11 ** (d - self.d)
               - other.num * _XI11 ** (d - other.d))
        return _Localized(num, d)

    def __mul__(self, other):
        if isinstance(other, _Localized):
            return _Localized(self.num * other.num, self.d + other.d)
        return _Localized(self.num * other, self.d)

    __rmul__ = __mul__

    def reduced(self) -> "_Localized":
        num, d = self.num, self.d
        while d > 0 and num:
            quotient = _try_div_xi11(num)
            if quotient is None:
                break
            num, d = quotient, d - 1
        if not num:
            d = 0
        return _Localized(num, d)


_XI11 = xi(1, 1)


def _try_div_xi11(P: JetPolynomial) -> JetPolynomial | None:
    """P / xi(1,1) when exact, else None."""
    out = {}
    for mono, coeff in P.terms.items():
        for idx, (s, al, e) in enumerate(mono.xi):
            if s == 1 and al == 1:
                if e > 1:
                    new_xi = mono.xi[:idx] + ((1, 1, e - 1),) + mono.xi[idx + 1:]
                else:
                    new_xi = mono.xi[:idx] + mono.xi[idx + 1:]
                out[mono._replace(xi=new_xi)] = coeff
                break
        else:
            return None
    return JetPolynomial(out)


@dataclass(frozen=True)
class CoordFraction:
    """One invariant coordinate derivative: numerator / xi(1,1)^den_exponent,
    the s-th derivative of the j-th component in the normalized
    parametrization."""
    j: int
    s: int
    numerator: JetPolynomial
    den_exponent: int
    weight: int


def invariant_coords(k: int, r: int) -> list:
    """Derivatives of g_j = f_j o f_1^{-1} for j = 2..r, s = 1..k, expressed
    as exact fractions numerator / xi(1,1)^d via truncated-series inversion
    and composition over the xi(1,1)-localized ring."""
    if k < 1:
        raise ValueError("jet order must be >= 1")
    if r < 2:
        raise ValueError("invariant coordinates need rank >= 2")
    zero = _Localized(const(0))
    one = _Localized(const(1))

    def f_series(alpha: int) -> list:
        return [zero] + [
            _Localized(xi(s, alpha) * Fraction(1, math.factorial(s)))
            for s in range(1, k + 1)]

    inv = invert_trunc(f_series(1), k, zero, one,
                       lambda v: _Localized(v.num, v.d + 1))
    rows = []
    for j in range(2, r + 1):
        g = compose_trunc(f_series(j), inv, k, zero)
        for s in range(1, k + 1):
            frac = (g[s] * Fraction(math.factorial(s))).reduced()
            rows.append(CoordFraction(
                j=j, s=s, numerator=frac.num, den_exponent=frac.d,
                weight=homogeneous_degree(frac.num)))
    return rows
