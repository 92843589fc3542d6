"""Shared oracles for the test suite, deliberately independent of the library
internals: brute-force enumeration over finite rings, a Groebner-free
linear-algebra ideal-membership oracle, and classic integer-matrix oracles.
"""

from __future__ import annotations

from itertools import product
from math import gcd

from gproj import FPModule, QuotRing
from gproj.modules import mat_vec


# ---------------------------------------------------------------------------
# enumeration of finite quotient rings and their modules
# ---------------------------------------------------------------------------

def field_elements(field):
    if field.kind != "prime_field":
        raise ValueError("only prime fields are enumerable")
    return list(range(field.p))


def ring_elements(R: QuotRing):
    """All normal forms of a finite quotient ring, or None if infinite."""
    base = R.base
    n = base.nvars
    gb = R.modulus.reduced_gb
    if base.field.kind != "prime_field":
        return None
    if n == 0:
        return [base.constant(c) for c in field_elements(base.field)]
    bounds = []
    leads = [g.lead_monomial() for g in gb]
    for i in range(n):
        pure = [e[i] for e in leads if all(e[j] == 0 for j in range(n) if j != i)]
        if not pure:
            return None
        bounds.append(min(pure))
    standard = []
    for expt in product(*(range(b) for b in bounds)):
        if not any(all(expt[j] >= lead[j] for j in range(n)) for lead in leads):
            standard.append(expt)
    elements = []
    coeffs = field_elements(base.field)
    for combo in product(coeffs, repeat=len(standard)):
        elements.append(base.from_dict(
            {e: base.field.from_int(c) for e, c in zip(standard, combo) if c}))
    return elements


def vector_space(R, rank, elements):
    """All vectors of R^rank as tuples of normal forms."""
    return [tuple(v) for v in product(elements, repeat=rank)]


def span_of_columns(R, rank, columns, elements):
    """The full element set of the submodule generated by the columns."""
    zero = tuple(R.zero() for _ in range(rank))
    span = {zero}
    frontier = [zero]
    step_vectors = []
    for col in columns:
        for c in elements:
            v = tuple(R.mul(c, p) for p in col)
            step_vectors.append(v)
    while frontier:
        base_vec = frontier.pop()
        for sv in step_vectors:
            w = tuple(R.add(a, b) for a, b in zip(base_vec, sv))
            if w not in span:
                span.add(w)
                frontier.append(w)
    return span


def module_cosets(M: FPModule, elements):
    """Canonical coset representative map for a module over a finite ring."""
    R = M.ring
    span = span_of_columns(R, M.ngens, M.relations, elements)
    reps = {}
    seen = {}
    for v in vector_space(R, M.ngens, elements):
        if v in seen:
            continue
        coset = sorted(
            (tuple(R.add(a, b) for a, b in zip(v, s)) for s in span),
            key=lambda w: tuple(str(p) for p in w))
        rep = coset[0]
        for w in coset:
            seen[w] = rep
        reps[rep] = None
    return seen, list(reps)


def apply_columns(R, columns, vec):
    if not columns:
        return ()
    return mat_vec(R, list(columns), vec)


# ---------------------------------------------------------------------------
# Groebner-free ideal membership (Macaulay-style linear algebra)
# ---------------------------------------------------------------------------

class LinearMembershipOracle:
    """Exact ideal membership over GF(p) without Groebner machinery.

    Builds the row-echelon span of bounded-degree multiples of the
    generators, takes the non-pivot monomials as a candidate quotient basis,
    and certifies it border-basis style: every top-degree monomial must be a
    pivot, the multiplication-by-variable matrices on the candidate basis
    must commute pairwise, and evaluating each generator at those matrices
    must give zero. Under that certificate the evaluation map is a ring
    homomorphism whose kernel is exactly the ideal, so membership queries of
    any degree are decided by matrix evaluation.
    """

    def __init__(self, p, nvars, gens, max_degree=16, min_degree=0):
        self.p = p
        self.nvars = nvars
        self.gens = [dict(g) for g in gens if g]
        self.rows = {}
        self.degree = None
        self.zero_ring = False
        self.basis = []
        if not self.gens:
            self.degree = 0  # zero ideal: membership is literal zero-ness
            self.trivial_ideal = True
            return
        self.trivial_ideal = False
        base_deg = max(self._deg(g) for g in self.gens)
        for D in range(max(base_deg, min_degree, 1), max_degree + 1):
            self._build(D)
            if not self._closed(D):
                continue
            self.degree_candidate = D
            if self._certify():
                self.degree = D
                return

    @staticmethod
    def _deg(poly):
        return max(sum(e) for e in poly)

    def _monomials(self, d):
        def rec(prefix, remaining, slots):
            if slots == 1:
                yield prefix + (remaining,)
                return
            for i in range(remaining + 1):
                yield from rec(prefix + (i,), remaining - i, slots - 1)
        if self.nvars == 0:
            yield ()
            return
        for total in range(d + 1):
            yield from rec((), total, self.nvars)

    def _reduce(self, poly):
        poly = dict(poly)
        out = {}
        while poly:
            lead = max(poly, key=lambda e: (sum(e), e))
            c = poly[lead] % self.p
            if not c:
                del poly[lead]
                continue
            row = self.rows.get(lead)
            if row is None:
                out[lead] = c
                del poly[lead]
                continue
            for e, rc in row.items():
                v = (poly.get(e, 0) - c * rc) % self.p
                if v:
                    poly[e] = v
                else:
                    poly.pop(e, None)
        return out

    def _insert(self, poly):
        r = self._reduce(poly)
        if not r:
            return
        lead = max(r, key=lambda e: (sum(e), e))
        inv = pow(r[lead], self.p - 2, self.p)
        self.rows[lead] = {e: (c * inv) % self.p for e, c in r.items()}

    def _build(self, D):
        self.rows = {}
        for g in self.gens:
            gd = self._deg(g)
            for m in self._monomials(D - gd):
                shifted = {tuple(a + b for a, b in zip(e, m)): c
                           for e, c in g.items()}
                self._insert(shifted)

    def _closed(self, D):
        for m in self._monomials(D):
            if sum(m) == D and m not in self.rows:
                return False
        return True

    def _mat_apply(self, M, v):
        dim = len(v)
        return tuple(sum(M[i][j] * v[j] for j in range(dim)) % self.p
                     for i in range(dim))

    def _certify(self):
        one = (0,) * self.nvars
        if one in self.rows:
            self.zero_ring = True  # 1 lies in the span, so the ideal is (1)
            self.basis = []
            return True
        basis = [m for m in self._monomials(self.degree_candidate)
                 if m not in self.rows]
        index = {m: i for i, m in enumerate(basis)}
        dim = len(basis)
        mats = []
        for i in range(self.nvars):
            M = [[0] * dim for _ in range(dim)]
            for j, w in enumerate(basis):
                shifted = tuple(w[t] + (1 if t == i else 0)
                                for t in range(self.nvars))
                r = self._reduce({shifted: 1})
                for e, c in r.items():
                    if e not in index:
                        return False  # reduction escaped the candidate basis
                    M[index[e]][j] = c
            mats.append(M)
        for i in range(self.nvars):
            for j in range(i + 1, self.nvars):
                for col in range(dim):
                    v = tuple(1 if t == col else 0 for t in range(dim))
                    if self._mat_apply(mats[i], self._mat_apply(mats[j], v)) != \
                            self._mat_apply(mats[j], self._mat_apply(mats[i], v)):
                        return False
        self.basis = basis
        self.index = index
        self.mats = mats
        self.one_vec = tuple(1 if basis[t] == one else 0 for t in range(dim))
        for g in self.gens:
            if any(self._evaluate(g)):
                return False
        return True

    def _evaluate(self, poly):
        dim = len(self.basis)
        out = [0] * dim
        for e, c in poly.items():
            v = self.one_vec
            for i in range(self.nvars):
                for _ in range(e[i]):
                    v = self._mat_apply(self.mats[i], v)
            for t in range(dim):
                out[t] = (out[t] + c * v[t]) % self.p
        return tuple(out)

    @property
    def saturated(self):
        return self.degree is not None

    def quotient_dimension(self):
        if self.trivial_ideal:
            raise ValueError("zero ideal has an infinite quotient")
        return len(self.basis)

    def contains(self, poly):
        poly = {e: c % self.p for e, c in poly.items() if c % self.p}
        if not poly:
            return True
        if self.trivial_ideal:
            return False
        if self.zero_ring:
            return True
        return not any(self._evaluate(poly))


def poly_to_int_dict(p):
    """A gproj Poly over GF(p) as {exponent: int} for the oracle."""
    return {e: int(c) for e, c in p.terms}


# ---------------------------------------------------------------------------
# integer matrix oracles
# ---------------------------------------------------------------------------

def int_determinant(A):
    n = len(A)
    if n == 0:
        return 1
    A = [list(r) for r in A]
    from fractions import Fraction
    B = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for c in range(n):
        pivot = None
        for r in range(c, n):
            if B[r][c]:
                pivot = r
                break
        if pivot is None:
            return 0
        if pivot != c:
            B[c], B[pivot] = B[pivot], B[c]
            det = -det
        det *= B[c][c]
        inv = 1 / B[c][c]
        for r in range(c + 1, n):
            if B[r][c]:
                f = B[r][c] * inv
                B[r] = [a - f * b for a, b in zip(B[r], B[c])]
    assert det.denominator == 1
    return int(det)


def minors_gcd_invariant_factors(A):
    """Invariant factors via gcds of k x k minors (the classic oracle)."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    from itertools import combinations
    previous = 1
    factors = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rsel in combinations(range(rows), k):
            for csel in combinations(range(cols), k):
                minor = int_determinant([[A[i][j] for j in csel] for i in rsel])
                g = gcd(g, minor)
        if g == 0:
            break
        factors.append(g // previous)
        previous = g
    return factors


def univariate_gcd(a, b):
    """Monic gcd in k[x] for Poly values of a single-variable ring."""
    while not b.is_zero():
        r = a
        db = b.degree_in(0)
        lead_b = b.coeff_of((db,))
        while not r.is_zero() and r.degree_in(0) >= db:
            dr = r.degree_in(0)
            c = r.ring.field.div(r.coeff_of((dr,)), lead_b)
            r = r - b * r.ring.from_dict({(dr - db,): c})
        a, b = b, r
    return a.monic() if not a.is_zero() else a
