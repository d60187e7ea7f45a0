"""Exact polynomial algebra in jet coordinates.

A polynomial lives in the variables

  * xi(s, alpha) -- jet variables, derivative order s >= 1, component
    alpha in 1..r; weighted degree of xi(s, alpha) is s;
  * z(i)         -- base variables z_1..z_r (the germ components at 0);
    weighted degree 0; the formal derivative sends z_i to xi(1, i);
  * a(i)         -- internal formal symbols for reparametrization
    coefficients; weighted degree 0; constants under the formal derivative.
    They never appear in the exchange format.

Representation is sparse: a term map from Monomial to a nonzero
GaussianRational.  A Monomial stores each variable block as a sorted tuple of
(index..., exponent) entries, so monomials are hashable and the merge in a
product is a linear scan.  The global term order is lexicographic over
variables ranked (xi block by (s, alpha), then z by i, then a by i) with
exponents compared descending; a sentinel ranking after every real variable
makes a monomial sort after any proper multiple of it.  enumerate_monomials
emits exactly this order.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

from .coefficients import GR_ONE, GaussianRational
from .errors import InputDataError

__all__ = [
    "Monomial",
    "JetPolynomial",
    "xi",
    "zvar",
    "avar",
    "const",
    "delta",
    "weighted_degree",
    "homogeneous_degree",
    "filter_F",
    "truncate_W",
    "dim_fiber",
    "enumerate_monomials",
    "substitute",
    "to_doc",
    "from_doc",
    "to_canonical_json",
    "from_json",
]


class Monomial(NamedTuple):
    xi: tuple  # ((s, alpha, e), ...) sorted by (s, alpha), all e >= 1
    z: tuple   # ((i, e), ...) sorted by i, all e >= 1
    a: tuple   # ((i, e), ...) sorted by i, all e >= 1


MONO_ONE = Monomial((), (), ())

_SENTINEL = ((3,), 0)


def mono_sort_key(m: Monomial) -> tuple:
    parts = [((0, s, al), -e) for (s, al, e) in m.xi]
    parts += [((1, i), -e) for (i, e) in m.z]
    parts += [((2, i), -e) for (i, e) in m.a]
    parts.append(_SENTINEL)
    return tuple(parts)


def mono_weighted_degree(m: Monomial) -> int:
    return sum(s * e for (s, _al, e) in m.xi)


def mono_max_order(m: Monomial) -> int:
    return max((s for (s, _al, _e) in m.xi), default=0)


def _merge2(block1, block2):
    """Merge two sorted exponent blocks, adding exponents on equal keys."""
    if not block1:
        return block2
    if not block2:
        return block1
    out = []
    i = j = 0
    n1, n2 = len(block1), len(block2)
    while i < n1 and j < n2:
        e1, e2 = block1[i], block2[j]
        k1, k2 = e1[:-1], e2[:-1]
        if k1 == k2:
            out.append(k1 + (e1[-1] + e2[-1],))
            i += 1
            j += 1
        elif k1 < k2:
            out.append(e1)
            i += 1
        else:
            out.append(e2)
            j += 1
    out.extend(block1[i:])
    out.extend(block2[j:])
    return tuple(out)


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    return Monomial(_merge2(m1.xi, m2.xi), _merge2(m1.z, m2.z), _merge2(m1.a, m2.a))


class JetPolynomial:
    """Sparse exact polynomial with a declared maximum jet order."""

    __slots__ = ("terms", "order")

    def __init__(self, terms: Mapping[Monomial, object] | None = None,
                 order: int | None = None):
        clean: dict[Monomial, GaussianRational] = {}
        maxo = 0
        if terms:
            for mono, coeff in terms.items():
                c = GaussianRational.coerce(coeff)
                if c.is_zero():
                    continue
                clean[mono] = c
                o = mono_max_order(mono)
                if o > maxo:
                    maxo = o
        if order is None:
            order = maxo
        elif order < maxo:
            raise ValueError(
                f"declared order {order} below a term of jet order {maxo}")
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("JetPolynomial is immutable")

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            acc = terms.get(mono)
            s = c if acc is None else acc + c
            if s.is_zero():
                terms.pop(mono, None)
            else:
                terms[mono] = s
        return _raw(terms, max(self.order, other.order))

    __radd__ = __add__

    def __neg__(self):
        return _raw({m: -c for m, c in self.terms.items()}, self.order)

    def __sub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            c0 = GaussianRational.coerce(other)
            if c0.is_zero():
                return _raw({}, self.order)
            return _raw({m: c * c0 for m, c in self.terms.items()}, self.order)
        if not isinstance(other, JetPolynomial):
            return NotImplemented
        out: dict[Monomial, GaussianRational] = {}
        get = out.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = mono_mul(m1, m2)
                c = c1 * c2
                acc = get(mono)
                s = c if acc is None else acc + c
                if s.is_zero():
                    out.pop(mono, None)
                else:
                    out[mono] = s
        return _raw(out, max(self.order, other.order))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            c0 = GaussianRational.coerce(other)
            return _raw({m: c / c0 for m, c in self.terms.items()}, self.order)
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    # -- identity -----------------------------------------------------------

    def __eq__(self, other):
        # equality is term-map equality only; declared order is metadata
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    # -- inspection ---------------------------------------------------------

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: mono_sort_key(kv[0]))

    def max_jet_order(self) -> int:
        return max((mono_max_order(m) for m in self.terms), default=0)

    def constant_value(self) -> GaussianRational:
        """The coefficient of the empty monomial (the value at the origin)."""
        return self.terms.get(MONO_ONE, GaussianRational(0))

    def __repr__(self):
        if not self.terms:
            return "0"
        chunks = []
        for mono, coeff in self.sorted_terms():
            factors = [f"xi({s},{al})" + (f"^{e}" if e > 1 else "")
                       for (s, al, e) in mono.xi]
            factors += [f"z{i}" + (f"^{e}" if e > 1 else "") for (i, e) in mono.z]
            factors += [f"a{i}" + (f"^{e}" if e > 1 else "") for (i, e) in mono.a]
            body = "*".join(factors)
            if not body:
                chunks.append(f"{coeff!r}")
            elif coeff == GR_ONE:
                chunks.append(body)
            elif coeff == GaussianRational(-1):
                chunks.append(f"-{body}")
            else:
                chunks.append(f"{coeff!r}*{body}")
        return " + ".join(chunks).replace("+ -", "- ")


def _raw(terms: dict, order: int) -> JetPolynomial:
    """Trusted constructor: terms already clean (nonzero GaussianRational)."""
    poly = JetPolynomial.__new__(JetPolynomial)
    object.__setattr__(poly, "terms", terms)
    object.__setattr__(poly, "order", order)
    return poly


def _coerce_poly(value):
    if isinstance(value, JetPolynomial):
        return value
    if isinstance(value, (int, Fraction, GaussianRational)):
        return const(value)
    return NotImplemented


# -- constructors ------------------------------------------------------------

def const(c) -> JetPolynomial:
    c = GaussianRational.coerce(c)
    if c.is_zero():
        return _raw({}, 0)
    return _raw({MONO_ONE: c}, 0)


def xi(s: int, alpha: int, e: int = 1) -> JetPolynomial:
    if s < 1 or alpha < 1 or e < 1:
        raise ValueError(f"invalid jet variable xi({s},{alpha})^{e}")
    return _raw({Monomial(((s, alpha, e),), (), ()): GR_ONE}, s)


def zvar(i: int, e: int = 1) -> JetPolynomial:
    if i < 1 or e < 1:
        raise ValueError(f"invalid base variable z{i}^{e}")
    return _raw({Monomial((), ((i, e),), ()): GR_ONE}, 0)


def avar(i: int, e: int = 1) -> JetPolynomial:
    if i < 1 or e < 1:
        raise ValueError(f"invalid reparametrization symbol a{i}^{e}")
    return _raw({Monomial((), (), ((i, e),)): GR_ONE}, 0)


# -- the formal derivative ----------------------------------------------------

def delta(P: JetPolynomial) -> JetPolynomial:
    """Formal derivative: z_i -> xi(1,i) and xi(s,alpha) -> xi(s+1,alpha),
    extended as a derivation.  Raises the declared order by one."""
    out: dict[Monomial, GaussianRational] = {}
    for mono, coeff in P.terms.items():
        mxi, mz, ma = mono
        for idx, (s, al, e) in enumerate(mxi):
            rest = mxi[:idx] + ((s, al, e - 1),) + mxi[idx + 1:] if e > 1 \
                else mxi[:idx] + mxi[idx + 1:]
            new_xi = _merge2(rest, ((s + 1, al, 1),))
            new = Monomial(new_xi, mz, ma)
            c = coeff * e
            acc = out.get(new)
            sacc = c if acc is None else acc + c
            if sacc.is_zero():
                out.pop(new, None)
            else:
                out[new] = sacc
        for idx, (i, e) in enumerate(mz):
            rest = mz[:idx] + ((i, e - 1),) + mz[idx + 1:] if e > 1 \
                else mz[:idx] + mz[idx + 1:]
            new_xi = _merge2(mxi, ((1, i, 1),))
            new = Monomial(new_xi, rest, ma)
            c = coeff * e
            acc = out.get(new)
            sacc = c if acc is None else acc + c
            if sacc.is_zero():
                out.pop(new, None)
            else:
                out[new] = sacc
    return _raw(out, P.order + 1)


# -- gradings and filtrations -------------------------------------------------

def weighted_degree(P: JetPolynomial) -> frozenset:
    """Set of weighted degrees of the terms; empty for the zero polynomial
    (degree is undefined there -- deliberately not a number)."""
    return frozenset(mono_weighted_degree(m) for m in P.terms)


def homogeneous_degree(P: JetPolynomial) -> int:
    from .errors import DegreeError
    degs = weighted_degree(P)
    if len(degs) != 1:
        raise DegreeError(
            f"polynomial is not weighted-homogeneous (degrees {sorted(degs)})")
    return next(iter(degs))


def filter_F(P: JetPolynomial, p: int) -> JetPolynomial:
    """Keep exactly the terms of weighted degree >= p."""
    if p < 0:
        raise ValueError("filtration level must be >= 0")
    return _raw({m: c for m, c in P.terms.items()
                 if mono_weighted_degree(m) >= p}, P.order)


def truncate_W(P: JetPolynomial, k: int) -> JetPolynomial:
    """Keep exactly the terms using only jet orders <= k; declared order
    becomes k."""
    if k < 1:
        raise ValueError("truncation order must be >= 1")
    return _raw({m: c for m, c in P.terms.items()
                 if mono_max_order(m) <= k}, k)


# -- counting ----------------------------------------------------------------

def dim_fiber(k: int, r: int, m: int) -> int:
    """Number of monomials in xi(s,alpha), s <= k, alpha <= r, of weighted
    degree exactly m: the coefficient of t^m in prod_{s=1..k} (1-t^s)^(-r).
    Exact big-integer arithmetic throughout, so no overflow is possible."""
    if k < 1 or r < 1 or m < 0:
        raise ValueError(f"invalid arguments (k={k}, r={r}, m={m})")
    coeffs = [0] * (m + 1)
    coeffs[0] = 1
    for s in range(1, k + 1):
        for _ in range(r):
            # multiply by 1/(1-t^s): running prefix sum with stride s
            for i in range(s, m + 1):
                coeffs[i] += coeffs[i - s]
    return coeffs[m]


def enumerate_monomials(k: int, r: int, m: int) -> list:
    """All jet monomials of weighted degree m, in the global term order
    (order s major, component alpha minor, exponent descending)."""
    if k < 1 or r < 1 or m < 0:
        raise ValueError(f"invalid arguments (k={k}, r={r}, m={m})")
    variables = [(s, al) for s in range(1, k + 1) for al in range(1, r + 1)]
    out: list[Monomial] = []
    chosen: list = []

    def descend(vi: int, rem: int):
        if rem == 0:
            out.append(Monomial(tuple(chosen), (), ()))
            return
        if vi == len(variables):
            return
        s, al = variables[vi]
        # remaining variables all have weight >= s except same-order ones;
        # the cheap bound below prunes only the obvious dead branch
        for e in range(rem // s, 0, -1):
            chosen.append((s, al, e))
            descend(vi + 1, rem - s * e)
            chosen.pop()
        descend(vi + 1, rem)

    descend(0, m)
    return out


# -- substitution -------------------------------------------------------------

def substitute(P: JetPolynomial,
               xi_map: Mapping | None = None,
               z_map: Mapping | None = None,
               a_map: Mapping | None = None) -> JetPolynomial:
    """Substitute polynomials (or exact scalars) for variables.

    xi_map keys are (s, alpha) pairs; z_map and a_map keys are indices.
    Unmapped variables pass through unchanged.
    """
    xi_map = xi_map or {}
    z_map = z_map or {}
    a_map = a_map or {}
    pow_cache: dict = {}

    def image_power(kind: str, key, image, e: int) -> JetPolynomial:
        ck = (kind, key, e)
        got = pow_cache.get(ck)
        if got is None:
            got = _coerce_poly(image) ** e
            pow_cache[ck] = got
        return got

    total = _raw({}, 0)
    for mono, coeff in P.terms.items():
        kept_xi = []
        kept_z = []
        kept_a = []
        factors: list[JetPolynomial] = []
        for (s, al, e) in mono.xi:
            img = xi_map.get((s, al))
            if img is None:
                kept_xi.append((s, al, e))
            else:
                factors.append(image_power("xi", (s, al), img, e))
        for (i, e) in mono.z:
            img = z_map.get(i)
            if img is None:
                kept_z.append((i, e))
            else:
                factors.append(image_power("z", i, img, e))
        for (i, e) in mono.a:
            img = a_map.get(i)
            if img is None:
                kept_a.append((i, e))
            else:
                factors.append(image_power("a", i, img, e))
        term = _raw({Monomial(tuple(kept_xi), tuple(kept_z), tuple(kept_a)):
                     coeff}, 0)
        for f in factors:
            if f.is_zero():
                term = _raw({}, 0)
                break
            term = term * f
        total = total + term
    return total


# -- exchange format -----------------------------------------------------------

def to_doc(P: JetPolynomial) -> dict:
    """Canonical document form: k and r normalized to the smallest values
    consistent with the terms, terms in the global order."""
    if any(m.a for m in P.terms):
        raise InputDataError(
            "polynomials containing reparametrization symbols have no "
            "exchange form")
    k = P.max_jet_order()
    r = 0
    for m in P.terms:
        for (_s, al, _e) in m.xi:
            if al > r:
                r = al
        for (i, _e) in m.z:
            if i > r:
                r = i
    terms = []
    for mono, coeff in P.sorted_terms():
        terms.append({
            "coeff": coeff.to_quad(),
            "z": [[i, e] for (i, e) in mono.z],
            "xi": [[s, al, e] for (s, al, e) in mono.xi],
        })
    return {"k": k, "r": r, "terms": terms}


def from_doc(doc) -> JetPolynomial:
    if not isinstance(doc, dict):
        raise InputDataError("polynomial document must be a JSON object")
    try:
        k = int(doc["k"])
        r = int(doc["r"])
        raw_terms = doc["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputDataError(f"polynomial document missing field: {exc}") from exc
    if k < 0 or r < 0:
        raise InputDataError(f"invalid polynomial header (k={k}, r={r})")
    if not isinstance(raw_terms, list):
        raise InputDataError("polynomial 'terms' must be a list")
    terms: dict[Monomial, GaussianRational] = {}
    for entry in raw_terms:
        try:
            coeff = GaussianRational.from_quad(entry["coeff"])
            z_block = tuple(sorted((int(i), int(e)) for i, e in entry.get("z", [])))
            xi_block = tuple(sorted((int(s), int(al), int(e))
                                    for s, al, e in entry.get("xi", [])))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputDataError(f"malformed polynomial term: {entry!r}") from exc
        for (s, al, e) in xi_block:
            if s < 1 or s > k or al < 1 or al > r or e < 1:
                raise InputDataError(
                    f"jet variable xi({s},{al})^{e} outside declared ranges "
                    f"(k={k}, r={r})")
        for (i, e) in z_block:
            if i < 1 or i > r or e < 1:
                raise InputDataError(
                    f"base variable z{i}^{e} outside declared range r={r}")
        seen_keys = [t[:-1] for t in xi_block] + [("z", i) for i, _ in z_block]
        if len(set(seen_keys)) != len(seen_keys):
            raise InputDataError(f"duplicate variable in term: {entry!r}")
        mono = Monomial(xi_block, z_block, ())
        if mono in terms:
            raise InputDataError(f"duplicate monomial in document: {entry!r}")
        if not coeff.is_zero():
            terms[mono] = coeff
    return JetPolynomial(terms, order=k)


def to_canonical_json(P: JetPolynomial) -> str:
    return json.dumps(to_doc(P), separators=(",", ":"))


def from_json(text: str) -> JetPolynomial:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputDataError(f"invalid JSON: {exc}") from exc
    return from_doc(doc)
