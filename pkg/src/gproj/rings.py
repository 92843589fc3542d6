"""Multivariate polynomial rings, monomial orders, Groebner bases, quotient rings.

Polynomials are sparse: a tuple of (exponent vector, coefficient) pairs kept
strictly descending in the ring's monomial order, with no zero coefficients.
Every value here is immutable after construction; ideals compute their reduced
Groebner basis at construction time, never lazily, so instances can be shared
freely across threads.
"""

from __future__ import annotations

import re
from typing import Iterable, Optional

from .errors import (
    DegreeGuardExceeded,
    InputError,
    NotMonic,
    ParseError,
    RingMismatch,
)
from .fields import Field

Monomial = tuple[int, ...]

DEFAULT_DEGREE_GUARD = 32


def _key_lex(expt: Monomial):
    return expt


def _key_grevlex(expt: Monomial):
    # total degree first; ties: smaller exponent in the last differing
    # variable wins, encoded by negating the reversed vector
    return (sum(expt),) + tuple(-e for e in reversed(expt))


_ORDER_KEYS = {"lex": _key_lex, "grevlex": _key_grevlex}


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class PolyRing:
    """k[x_1, ..., x_n] with a fixed monomial order ('grevlex' or 'lex')."""

    __slots__ = ("field", "variables", "order", "degree_guard", "_key", "_varindex")

    def __init__(self, field: Field, variables: Iterable[str], order: str = "grevlex",
                 degree_guard: int = DEFAULT_DEGREE_GUARD):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise InputError("duplicate variable names")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                raise InputError(f"bad variable name {v!r}")
        if order not in _ORDER_KEYS:
            raise InputError(f"unknown monomial order {order!r}")
        self.field = field
        self.variables = variables
        self.order = order
        self.degree_guard = degree_guard
        self._key = _ORDER_KEYS[order]
        self._varindex = {v: i for i, v in enumerate(variables)}

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def key(self, expt: Monomial):
        return self._key(expt)

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.field == other.field
                and self.variables == other.variables and self.order == other.order)

    def __hash__(self):
        return hash((self.field, self.variables, self.order))

    def __repr__(self):
        return f"{self.field!r}[{', '.join(self.variables)}] ({self.order})"

    # ----- element constructors -----
    def from_dict(self, d: dict[Monomial, object]) -> "Poly":
        terms = [(e, c) for e, c in d.items() if c != 0]
        terms.sort(key=lambda t: self._key(t[0]), reverse=True)
        return Poly(self, tuple(terms))

    def zero(self) -> "Poly":
        return Poly(self, ())

    def one(self) -> "Poly":
        return self.constant(1)

    def constant(self, c) -> "Poly":
        c = self.field.from_int(c) if isinstance(c, int) else c
        if c == 0:
            return self.zero()
        return Poly(self, (((0,) * self.nvars, c),))

    def var(self, name: str) -> "Poly":
        if name not in self._varindex:
            raise InputError(f"unknown variable {name!r}")
        e = [0] * self.nvars
        e[self._varindex[name]] = 1
        return Poly(self, ((tuple(e), self.field.one),))

    def gens(self) -> tuple["Poly", ...]:
        return tuple(self.var(v) for v in self.variables)

    def poly(self, text: str) -> "Poly":
        return parse_poly(text, self)

    def quotient(self, modulus_gens: Iterable) -> "QuotRing":
        gens = [g if isinstance(g, Poly) else self.poly(g) for g in modulus_gens]
        return QuotRing(self, Ideal(self, gens))


class Poly:
    """Sparse multivariate polynomial over a PolyRing."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: tuple):
        self.ring = ring
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def lead_monomial(self) -> Monomial:
        return self.terms[0][0]

    def lead_coeff(self):
        return self.terms[0][1]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e, _ in self.terms)

    def degree_in(self, idx: int) -> int:
        if not self.terms:
            return -1
        return max(e[idx] for e, _ in self.terms)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e, _ in self.terms)

    def constant_value(self):
        for e, c in self.terms:
            if sum(e) == 0:
                return c
        return self.ring.field.zero

    def _dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other: "Poly") -> "Poly":
        if self.ring != other.ring:
            raise RingMismatch("polynomial rings differ")
        f = self.ring.field
        d = self._dict()
        for e, c in other.terms:
            s = f.add(d.get(e, f.zero), c)
            if s == 0:
                d.pop(e, None)
            else:
                d[e] = s
        return self.ring.from_dict(d)

    def __neg__(self) -> "Poly":
        f = self.ring.field
        return Poly(self.ring, tuple((e, f.neg(c)) for e, c in self.terms))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        if self.ring != other.ring:
            raise RingMismatch("polynomial rings differ")
        f = self.ring.field
        d: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = monomial_mul(e1, e2)
                s = f.add(d.get(e, f.zero), f.mul(c1, c2))
                if s == 0:
                    d.pop(e, None)
                else:
                    d[e] = s
        return self.ring.from_dict(d)

    def scale(self, c) -> "Poly":
        f = self.ring.field
        c = f.from_int(c) if isinstance(c, int) else c
        if c == 0:
            return self.ring.zero()
        return Poly(self.ring, tuple((e, f.mul(cc, c)) for e, cc in self.terms))

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.ring.field.inv(self.lead_coeff()))

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise InputError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def mul_monomial(self, expt: Monomial, coeff) -> "Poly":
        f = self.ring.field
        return Poly(self.ring, tuple((monomial_mul(e, expt), f.mul(c, coeff))
                                     for e, c in self.terms))

    def coeff_of(self, expt: Monomial):
        for e, c in self.terms:
            if e == expt:
                return c
        return self.ring.field.zero

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.ring == other.ring
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, self.terms))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"<{format_poly(self)}>"


# ---------------------------------------------------------------------------
# printing / parsing (the grammar used by reports and model files)
# ---------------------------------------------------------------------------

def format_poly(p: Poly) -> str:
    """Canonical string form: terms in ring order joined by +/-."""
    if p.is_zero():
        return "0"
    field = p.ring.field
    parts: list[str] = []
    for i, (e, c) in enumerate(p.terms):
        neg = False
        if field.kind == "rationals" and c < 0:
            neg, c = True, -c
        mono = "*".join(
            v if k == 1 else f"{v}^{k}"
            for v, k in zip(p.ring.variables, e) if k
        )
        cs = field.coeff_str(c)
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        else:
            body = f"{cs}*{mono}"
        if i == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("-" if neg else "+") + body)
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^]))")


def parse_poly(text: str, ring: PolyRing) -> Poly:
    """Parse the polynomial grammar: sums of `coeff`, `mono`, `coeff*mono`."""
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", col=pos + 1)
        pos = m.end()
        for kind in ("num", "name", "op"):
            if m.group(kind) is not None:
                tokens.append((kind, m.group(kind), m.start()))
                break
    if not tokens:
        raise ParseError("empty polynomial")

    field = ring.field
    result = ring.zero()
    i = 0
    n = len(tokens)

    def parse_factor(i):
        # one factor: integer, integer/integer, or var[^k]
        kind, val, col = tokens[i]
        if kind == "num":
            num = int(val)
            i += 1
            if i + 1 < n and tokens[i][1] == "/" and tokens[i + 1][0] == "num":
                den = int(tokens[i + 1][1])
                i += 2
                return ring.constant(field.from_fraction(num, den)), i
            return ring.constant(field.from_int(num)), i
        if kind == "name":
            if val not in ring._varindex:
                raise ParseError(f"undeclared variable {val!r}", col=col + 1)
            p = ring.var(val)
            i += 1
            if i + 1 < n and tokens[i][1] == "^":
                if tokens[i + 1][0] != "num":
                    raise ParseError("exponent must be an integer", col=tokens[i][2] + 1)
                p = p ** int(tokens[i + 1][1])
                i += 2
            return p, i
        raise ParseError(f"unexpected {val!r}", col=col + 1)

    sign = 1
    first = True
    while i < n:
        kind, val, col = tokens[i]
        if kind == "op" and val in "+-":
            if not first and i > 0 and tokens[i - 1][0] == "op":
                raise ParseError("two consecutive operators", col=col + 1)
            sign = 1 if val == "+" else -1
            i += 1
            if i >= n:
                raise ParseError("dangling sign", col=col + 1)
            kind, val, col = tokens[i]
        term, i = parse_factor(i)
        while i < n and tokens[i][1] == "*":
            factor, i2 = parse_factor(i + 1)
            term = term * factor
            i = i2
        if sign < 0:
            term = -term
        result = result + term
        sign = 1
        first = False
        if i < n and tokens[i][0] != "op":
            raise ParseError(f"expected operator before {tokens[i][1]!r}",
                             col=tokens[i][2] + 1)
        if i < n and tokens[i][1] in "*/^":
            raise ParseError(f"misplaced {tokens[i][1]!r}", col=tokens[i][2] + 1)
    return result


# ---------------------------------------------------------------------------
# division and Buchberger
# ---------------------------------------------------------------------------

def reduce_poly(f: Poly, basis: list[Poly], guard: Optional[int] = None) -> Poly:
    """Full normal form of f modulo basis (every term reduced)."""
    ring = f.ring
    if guard is None:
        guard = ring.degree_guard
    field = ring.field
    remainder: dict = {}
    work = f._dict()
    key = ring._key
    while work:
        m = max(work, key=key)
        c = work[m]
        hit = None
        for g in basis:
            if monomial_divides(g.lead_monomial(), m):
                hit = g
                break
        if hit is None:
            remainder[m] = c
            del work[m]
            continue
        shift = monomial_div(m, hit.lead_monomial())
        factor = field.div(c, hit.lead_coeff())
        for e, cc in hit.terms:
            e2 = monomial_mul(e, shift)
            if sum(e2) > guard:
                raise DegreeGuardExceeded(
                    f"term degree {sum(e2)} exceeds guard {guard} during reduction")
            s = field.sub(work.get(e2, field.zero), field.mul(cc, factor))
            if s == 0:
                work.pop(e2, None)
            else:
                work[e2] = s
    return ring.from_dict(remainder)


def _spoly(f: Poly, g: Poly) -> Poly:
    lcm = monomial_lcm(f.lead_monomial(), g.lead_monomial())
    a = f.mul_monomial(monomial_div(lcm, f.lead_monomial()),
                       f.ring.field.inv(f.lead_coeff()))
    b = g.mul_monomial(monomial_div(lcm, g.lead_monomial()),
                       g.ring.field.inv(g.lead_coeff()))
    return a - b


def groebner_basis(gens: Iterable[Poly], ring: Optional[PolyRing] = None) -> tuple[Poly, ...]:
    """Reduced Groebner basis via Buchberger with the normal selection strategy.

    Output is deterministic: monic, fully auto-reduced, sorted by descending
    leading monomial.
    """
    gens = [g for g in gens if isinstance(g, Poly)]
    if ring is None:
        if not gens:
            raise InputError("cannot infer ring from empty generator list")
        ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RingMismatch("generators in different rings")
    guard = ring.degree_guard
    basis = [g.monic() for g in gens if not g.is_zero()]
    basis.sort(key=lambda p: ring._key(p.lead_monomial()), reverse=True)

    def pair_key(i, j):
        lcm = monomial_lcm(basis[i].lead_monomial(), basis[j].lead_monomial())
        return (sum(lcm), lcm)

    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    while pairs:
        i, j = min(pairs, key=lambda p: pair_key(*p))
        pairs.discard((i, j))
        fi, fj = basis[i], basis[j]
        lmi, lmj = fi.lead_monomial(), fj.lead_monomial()
        if monomial_lcm(lmi, lmj) == monomial_mul(lmi, lmj):
            continue  # coprime leading monomials: S-polynomial reduces to zero
        r = reduce_poly(_spoly(fi, fj), basis, guard)
        if r.is_zero():
            continue
        if r.total_degree() > guard:
            raise DegreeGuardExceeded(
                f"basis element of degree {r.total_degree()} exceeds guard {guard}")
        basis.append(r.monic())
        k = len(basis) - 1
        pairs.update((t, k) for t in range(k))
    return _interreduce(basis, ring)


def _interreduce(basis: list[Poly], ring: PolyRing) -> tuple[Poly, ...]:
    basis = [g for g in basis if not g.is_zero()]
    # minimalize: drop any element whose lead is divisible by another lead
    keep: list[Poly] = []
    for i, g in enumerate(basis):
        lm = g.lead_monomial()
        if any(j != i and monomial_divides(basis[j].lead_monomial(), lm)
               and (basis[j].lead_monomial() != lm or j < i) for j in range(len(basis))):
            continue
        keep.append(g)
    # fully reduce each survivor against all the others
    reduced: list[Poly] = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        r = reduce_poly(g, others) if others else g
        if not r.is_zero():
            reduced.append(r.monic())
    reduced.sort(key=lambda p: ring._key(p.lead_monomial()), reverse=True)
    return tuple(reduced)


# ---------------------------------------------------------------------------
# ideals and quotient rings
# ---------------------------------------------------------------------------

class Ideal:
    """A finitely generated ideal with its reduced Groebner basis cached."""

    __slots__ = ("ring", "generators", "reduced_gb")

    def __init__(self, ring: PolyRing, generators: Iterable[Poly]):
        gens = []
        for g in generators:
            if not isinstance(g, Poly):
                g = ring.poly(g)
            if g.ring != ring:
                raise RingMismatch("ideal generator over a different ring")
            if not g.is_zero():
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)
        self.reduced_gb = groebner_basis(gens, ring) if gens else ()

    def is_zero(self) -> bool:
        return not self.reduced_gb

    def contains(self, f: Poly) -> bool:
        return reduce_poly(f, list(self.reduced_gb)).is_zero()

    def contains_one(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.reduced_gb)

    def __eq__(self, other):
        return (isinstance(other, Ideal) and self.ring == other.ring
                and self.reduced_gb == other.reduced_gb)

    def __hash__(self):
        return hash((self.ring, self.reduced_gb))

    def __repr__(self):
        return "(" + ", ".join(format_poly(g) for g in self.reduced_gb) + ")"


def ideal_membership(f: Poly, ideal: Ideal) -> bool:
    if f.ring != ideal.ring:
        raise RingMismatch("polynomial and ideal over different rings")
    return ideal.contains(f)


class QuotRing:
    """base / modulus; elements are represented by unique normal forms."""

    __slots__ = ("base", "modulus")

    def __init__(self, base: PolyRing, modulus: Ideal):
        if modulus.ring != base:
            raise RingMismatch("modulus over a different ring")
        self.base = base
        self.modulus = modulus

    def nf(self, f: Poly) -> Poly:
        if f.ring != self.base:
            raise RingMismatch("variable mismatch with the base ring")
        if self.modulus.is_zero():
            return f
        return reduce_poly(f, list(self.modulus.reduced_gb))

    def poly(self, text: str) -> Poly:
        return self.nf(self.base.poly(text))

    def zero(self) -> Poly:
        return self.base.zero()

    def one(self) -> Poly:
        return self.nf(self.base.one())

    def add(self, a: Poly, b: Poly) -> Poly:
        return self.nf(a + b)

    def sub(self, a: Poly, b: Poly) -> Poly:
        return self.nf(a - b)

    def mul(self, a: Poly, b: Poly) -> Poly:
        return self.nf(a * b)

    def neg(self, a: Poly) -> Poly:
        return self.nf(-a)

    def is_unit(self, a: Poly) -> bool:
        gens = list(self.modulus.generators) + [a]
        return Ideal(self.base, gens).contains_one()

    def ideal_contains(self, gens: Iterable[Poly], f: Poly) -> bool:
        """Membership of f in the ideal of this quotient generated by gens."""
        all_gens = list(gens) + list(self.modulus.generators)
        return Ideal(self.base, all_gens).contains(f)

    def __eq__(self, other):
        return (isinstance(other, QuotRing) and self.base == other.base
                and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.base, self.modulus))

    def __repr__(self):
        if self.modulus.is_zero():
            return repr(self.base)
        return f"{self.base!r}/{self.modulus!r}"


def normal_form(f: Poly, ring: QuotRing) -> Poly:
    """Unique remainder of f modulo the reduced GB of the quotient's modulus."""
    return ring.nf(f)


def polynomial_ring(field: Field, variables: Iterable[str], order: str = "grevlex",
                    degree_guard: int = DEFAULT_DEGREE_GUARD) -> QuotRing:
    """Convenience: the polynomial ring itself, viewed as a quotient by (0)."""
    base = PolyRing(field, variables, order, degree_guard)
    return QuotRing(base, Ideal(base, []))


def extend_ring(ring: QuotRing, new_var: str) -> QuotRing:
    """Append a fresh variable; the modulus generators carry over unchanged."""
    if new_var in ring.base.variables:
        raise InputError(f"variable {new_var!r} already present")
    big = PolyRing(ring.base.field, ring.base.variables + (new_var,),
                   ring.base.order, ring.base.degree_guard)
    gens = [embed_poly(g, big) for g in ring.modulus.generators]
    return QuotRing(big, Ideal(big, gens))


def embed_poly(p: Poly, big: PolyRing) -> Poly:
    """View p in a ring whose variable list extends p's (a prefix match)."""
    k = len(p.ring.variables)
    if big.variables[:k] != p.ring.variables:
        raise RingMismatch("target ring does not extend the source ring")
    pad = (0,) * (big.nvars - k)
    return big.from_dict({e + pad: c for e, c in p.terms})


def restrict_poly(p: Poly, small: PolyRing) -> Poly:
    """Inverse of embed_poly; fails if p involves the removed variables."""
    k = small.nvars
    for e, _ in p.terms:
        if any(e[k:]):
            raise InputError("polynomial involves removed variables")
    return small.from_dict({e[:k]: c for e, c in p.terms})


def substitute_zero(p: Poly, idx: int) -> Poly:
    """Set variable #idx to zero (terms with that variable vanish)."""
    return p.ring.from_dict({e: c for e, c in p.terms if e[idx] == 0})


def coeffs_by_variable(p: Poly, idx: int) -> dict[int, Poly]:
    """Write p as sum_d (coeff_d) * v^d; coefficients keep v-exponent zero."""
    split: dict[int, dict] = {}
    for e, c in p.terms:
        d = e[idx]
        e0 = e[:idx] + (0,) + e[idx + 1:]
        split.setdefault(d, {})[e0] = c
    return {d: p.ring.from_dict(part) for d, part in split.items()}


def is_monic_in_var(f: Poly, idx: int) -> bool:
    """True when the top coefficient of f, viewed in (other vars)[v], is 1."""
    parts = coeffs_by_variable(f, idx)
    if not parts:
        return False
    k = max(parts)
    return parts[k] == f.ring.one()


def reduce_by_monic_in_var(p: Poly, f: Poly, idx: int) -> Poly:
    """Reduce the degree of p in variable #idx below deg(f) using monic f.

    Valid over any coefficient ring: monicity makes each step drop the
    idx-degree strictly, so this terminates without field divisions.
    """
    ring = p.ring
    if not is_monic_in_var(f, idx):
        raise NotMonic(f"divisor is not monic in {ring.variables[idx]!r}")
    k = f.degree_in(idx)
    while True:
        d = p.degree_in(idx)
        if d < k:
            return p
        q = coeffs_by_variable(p, idx)[d]  # idx-exponent already stripped
        shift = ring.from_dict(
            {tuple(d - k if i == idx else 0 for i in range(ring.nvars)): ring.field.one})
        p = p - q * shift * f
