"""Grothendieck-group machinery: Smith normal form, finitely presented abelian
groups, class decomposition over catalog rings, and the Euler/pushdown maps.

Catalog rings are exactly the families where presentation matrices admit
diagonal canonical forms, making module classes computable: fields, k[x]
(Euclidean reduction), and the chain rings k[x]/(x^n) (valuation reduction).
Class vectors print as formal sums like 2*[R] + 1*[R/(x)].
"""

from __future__ import annotations

from typing import NamedTuple, Optional

from .errors import InputError, PdInfiniteOrUnresolved, RingNotInCatalog
from .modules import (
    FPModule,
    SubmoduleEngine,
    polynomial_extension,
    shrink_ring,
)
from .resolutions import free_resolution, pd_bounded, verify_short_exact
from .rings import Poly, QuotRing, format_poly, restrict_poly, substitute_zero


# ---------------------------------------------------------------------------
# Smith normal form over the integers
# ---------------------------------------------------------------------------

class SNFResult(NamedTuple):
    U: tuple  # rows x rows, unimodular
    S: tuple  # diagonal with divisibility chain, S = U A V
    V: tuple  # cols x cols, unimodular
    diagonal: tuple[int, ...]  # nonzero diagonal entries, in chain order


def _identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def int_mat_mul(A, B):
    if not A or not B:
        return []
    n, k, m = len(A), len(B), len(B[0])
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def smith_normal_form(A) -> SNFResult:
    """U, S, V with S = U*A*V diagonal, nonnegative, and d_1 | d_2 | ... ."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    for row in A:
        if len(row) != cols:
            raise InputError("ragged integer matrix")
    S = [list(map(int, row)) for row in A]
    U = _identity(rows)
    V = _identity(cols)

    def row_sub(i, t, q):
        S[i] = [a - q * b for a, b in zip(S[i], S[t])]
        U[i] = [a - q * b for a, b in zip(U[i], U[t])]

    def row_swap(i, t):
        S[i], S[t] = S[t], S[i]
        U[i], U[t] = U[t], U[i]

    def col_sub(j, t, q):
        for r in S:
            r[j] -= q * r[t]
        for r in V:
            r[j] -= q * r[t]

    def col_swap(j, t):
        for r in S:
            r[j], r[t] = r[t], r[j]
        for r in V:
            r[j], r[t] = r[t], r[j]

    def clear_pivot(t):
        while True:
            for i in range(rows):
                if i != t and S[i][t]:
                    q = S[i][t] // S[t][t]
                    row_sub(i, t, q)
                    if S[i][t]:
                        row_swap(i, t)
            for j in range(cols):
                if j != t and S[t][j]:
                    q = S[t][j] // S[t][t]
                    col_sub(j, t, q)
                    if S[t][j]:
                        col_swap(j, t)
            col_clean = all(S[i][t] == 0 for i in range(rows) if i != t)
            row_clean = all(S[t][j] == 0 for j in range(cols) if j != t)
            if col_clean and row_clean:
                return

    t = 0
    while t < min(rows, cols):
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = abs(S[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
        if pivot is None:
            break
        if pivot[0] != t:
            row_swap(pivot[0], t)
        if pivot[1] != t:
            col_swap(pivot[1], t)
        clear_pivot(t)
        # enforce the divisibility chain into the remaining block
        while True:
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if S[i][j] % S[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            S[t] = [a + b for a, b in zip(S[t], S[offender])]
            U[t] = [a + b for a, b in zip(U[t], U[offender])]
            clear_pivot(t)
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    diagonal = tuple(S[i][i] for i in range(min(rows, cols)) if S[i][i])
    return SNFResult(tuple(map(tuple, U)), tuple(map(tuple, S)),
                     tuple(map(tuple, V)), diagonal)


class AbGroupPresentation(NamedTuple):
    labels: tuple[str, ...]
    relations: tuple  # relation rows, width = len(labels)
    snf: SNFResult
    invariant_factors: tuple[int, ...]  # torsion orders > 1
    free_rank: int

    def element_is_zero(self, vector) -> bool:
        """Does the integer vector lie in the row span of the relations?"""
        if len(vector) != len(self.labels):
            raise InputError("vector width does not match the generators")
        V = self.snf.V
        w = [sum(vector[i] * V[i][j] for i in range(len(vector)))
             for j in range(len(self.labels))]
        S = self.snf.S
        r = len(self.snf.diagonal)
        for j, wj in enumerate(w):
            d = S[j][j] if j < min(len(S), r) else 0
            if d:
                if wj % d:
                    return False
            elif wj:
                return False
        return True

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"


def group_from_relations(labels, relation_rows) -> AbGroupPresentation:
    labels = tuple(labels)
    rows = [tuple(map(int, r)) for r in relation_rows]
    for r in rows:
        if len(r) != len(labels):
            raise InputError("relation width does not match the generators")
    snf = smith_normal_form([list(r) for r in rows]) if rows else \
        smith_normal_form([[0] * len(labels)] if labels else [])
    torsion = tuple(d for d in snf.diagonal if d > 1)
    free_rank = len(labels) - len(snf.diagonal)
    return AbGroupPresentation(labels, tuple(rows), snf, torsion, free_rank)


# ---------------------------------------------------------------------------
# class vectors and catalogs
# ---------------------------------------------------------------------------

class KClass:
    """Integer coordinates against catalog generator labels; prints as a sum."""

    __slots__ = ("coords",)

    def __init__(self, coords=None):
        self.coords = {k: v for k, v in (coords or {}).items() if v}

    def __add__(self, other):
        out = dict(self.coords)
        for k, v in other.coords.items():
            out[k] = out.get(k, 0) + v
        return KClass(out)

    def __sub__(self, other):
        out = dict(self.coords)
        for k, v in other.coords.items():
            out[k] = out.get(k, 0) - v
        return KClass(out)

    def __eq__(self, other):
        return isinstance(other, KClass) and self.coords == other.coords

    def __hash__(self):
        return hash(tuple(sorted(self.coords.items())))

    def is_zero(self) -> bool:
        return not self.coords

    def coefficient(self, label: str) -> int:
        return self.coords.get(label, 0)

    @staticmethod
    def _label_key(label):
        return (label != "[R]" and label != "[k]", label)

    def __str__(self):
        if not self.coords:
            return "0"
        items = sorted(self.coords.items(), key=lambda kv: self._label_key(kv[0]))
        out = []
        for i, (label, c) in enumerate(items):
            if i == 0:
                out.append(f"{c}*{label}")
            elif c < 0:
                out.append(f" - {-c}*{label}")
            else:
                out.append(f" + {c}*{label}")
        return "".join(out)

    def __repr__(self):
        return f"KClass({self})"


def _field_matrix_rank(rows, field) -> int:
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][c] != field.zero:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = field.inv(rows[rank][c])
        rows[rank] = [field.mul(a, inv) for a in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != field.zero:
                factor = rows[r][c]
                rows[r] = [field.sub(a, field.mul(factor, b))
                           for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _poly_divmod_univariate(a: Poly, b: Poly):
    """Quotient and remainder in k[x] (single variable)."""
    ring = a.ring
    q = ring.zero()
    r = a
    db = b.degree_in(0)
    lead_b = b.coeff_of((db,))
    while not r.is_zero() and r.degree_in(0) >= db:
        dr = r.degree_in(0)
        c = ring.field.div(r.coeff_of((dr,)), lead_b)
        t = ring.from_dict({(dr - db,): c})
        q = q + t
        r = r - t * b
    return q, r


def _euclid_diagonalize_poly(rows, ring) -> list[Poly]:
    """Diagonal with divisibility chain over k[x]; returns monic diagonal."""
    S = [list(r) for r in rows]
    nrows = len(S)
    ncols = len(S[0]) if nrows else 0
    diag = []
    t = 0
    while t < min(nrows, ncols):
        pivot = None
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                p = S[i][j]
                if not p.is_zero():
                    d = p.degree_in(0)
                    if best is None or d < best:
                        best, pivot = d, (i, j)
        if pivot is None:
            break
        i0, j0 = pivot
        S[i0], S[t] = S[t], S[i0]
        for r in S:
            r[j0], r[t] = r[t], r[j0]
        while True:
            dirty = False
            for i in range(nrows):
                if i != t and not S[i][t].is_zero():
                    q, rem = _poly_divmod_univariate(S[i][t], S[t][t])
                    S[i] = [a - q * b for a, b in zip(S[i], S[t])]
                    if not S[i][t].is_zero():
                        S[i], S[t] = S[t], S[i]
                        dirty = True
            for j in range(ncols):
                if j != t and not S[t][j].is_zero():
                    q, rem = _poly_divmod_univariate(S[t][j], S[t][t])
                    for r in S:
                        r[j] = r[j] - q * r[t]
                    if not S[t][j].is_zero():
                        for r in S:
                            r[j], r[t] = r[t], r[j]
                        dirty = True
            if not dirty:
                break
        while True:
            offender = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    _, rem = _poly_divmod_univariate(S[i][j], S[t][t])
                    if not rem.is_zero():
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            S[t] = [a + b for a, b in zip(S[t], S[offender])]
            # re-clean the pivot after absorbing the offending row
            while True:
                dirty = False
                for i in range(nrows):
                    if i != t and not S[i][t].is_zero():
                        q, rem = _poly_divmod_univariate(S[i][t], S[t][t])
                        S[i] = [a - q * b for a, b in zip(S[i], S[t])]
                        if not S[i][t].is_zero():
                            S[i], S[t] = S[t], S[i]
                            dirty = True
                for j in range(ncols):
                    if j != t and not S[t][j].is_zero():
                        q, rem = _poly_divmod_univariate(S[t][j], S[t][t])
                        for r in S:
                            r[j] = r[j] - q * r[t]
                        if not S[t][j].is_zero():
                            for r in S:
                                r[j], r[t] = r[t], r[j]
                            dirty = True
                if not dirty:
                    break
        diag.append(S[t][t].monic())
        t += 1
    return diag


def _chain_valuation(p: Poly) -> int:
    return min(e[0] for e, _ in p.terms)


def _chain_unit_inverse(u: Poly, n: int) -> Poly:
    """Inverse of a unit in k[x]/(x^n) by triangular solving."""
    ring = u.ring
    field = ring.field
    coeffs = {e[0]: c for e, c in u.terms}
    u0 = coeffs.get(0)
    if u0 is None:
        raise InputError("not a unit in the chain ring")
    inv0 = field.inv(u0)
    out = {0: inv0}
    for d in range(1, n):
        acc = field.zero
        for j in range(d):
            acc = field.add(acc, field.mul(coeffs.get(d - j, field.zero), out[j]))
        out[d] = field.neg(field.mul(acc, inv0))
    return ring.from_dict({(d,): c for d, c in out.items() if c != 0})


def _chain_diagonalize(rows, ring: QuotRing, n: int) -> list[int]:
    """Diagonal valuations over k[x]/(x^n); every entry is unit * x^v."""
    S = [[ring.nf(p) for p in r] for r in rows]
    nrows = len(S)
    ncols = len(S[0]) if nrows else 0
    base = ring.base
    x = base.var(base.variables[0])
    vals = []
    t = 0
    while t < min(nrows, ncols):
        pivot = None
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                p = S[i][j]
                if not p.is_zero():
                    v = _chain_valuation(p)
                    if best is None or v < best:
                        best, pivot = v, (i, j)
        if pivot is None:
            break
        i0, j0 = pivot
        S[i0], S[t] = S[t], S[i0]
        for r in S:
            r[j0], r[t] = r[t], r[j0]
        v = best
        unit = base.from_dict({(e[0] - v,): c for e, c in S[t][t].terms})
        inv = _chain_unit_inverse(unit, n)
        S[t] = [ring.nf(p * inv) for p in S[t]]  # pivot is now x^v
        for i in range(nrows):
            if i != t and not S[i][t].is_zero():
                w = base.from_dict({(e[0] - v,): c for e, c in S[i][t].terms})
                S[i] = [ring.nf(a - w * b) for a, b in zip(S[i], S[t])]
        for j in range(ncols):
            if j != t and not S[t][j].is_zero():
                w = base.from_dict({(e[0] - v,): c for e, c in S[t][j].terms})
                for r in S:
                    r[j] = ring.nf(r[j] - w * r[t])
        vals.append(v)
        t += 1
    return vals


class Catalog(NamedTuple):
    """A ring family with computable diagonal canonical forms."""

    family: str  # "field" | "poly" | "chain"
    ring: QuotRing
    chain_power: int  # n for k[x]/(x^n), else 0

    @property
    def unit_label(self) -> str:
        return "[k]" if self.family == "field" else "[R]"

    def generator_labels(self) -> tuple[str, ...]:
        if self.family == "field":
            return ("[k]",)
        if self.family == "poly":
            return ("[R]",)
        x = self.ring.base.variables[0]
        labels = ["[R]"]
        for j in range(1, self.chain_power):
            power = format_poly(self.ring.base.var(x) ** j)
            labels.append(f"[R/({power})]")
        return tuple(labels)

    def module_for_label(self, label: str) -> FPModule:
        if label == self.unit_label:
            return FPModule.free(self.ring, 1)
        if label.startswith("[R/(") and label.endswith(")]"):
            f = self.ring.base.poly(label[4:-2])
            return FPModule(self.ring, 1, [(self.ring.nf(f),)])
        raise InputError(f"unknown catalog label {label!r}")

    def group_value(self, cls: KClass) -> int:
        """The image of a class vector in the Grothendieck group (= Z here).

        Fields count dimension, k[x] counts rank ([R/(f)] = 0 in the group),
        chain rings count composition length ([R] has length n).
        """
        total = 0
        for label, c in cls.coords.items():
            if label == self.unit_label:
                total += c * (self.chain_power if self.family == "chain" else 1)
            elif self.family == "poly":
                total += 0
            elif self.family == "chain":
                f = self.ring.base.poly(label[4:-2])
                total += c * f.degree_in(0)
            else:
                raise InputError(f"label {label!r} outside the catalog")
        return total


def catalog_for(R: QuotRing) -> Catalog:
    """Recognize the ring family; reject rings without canonical forms."""
    base = R.base
    if base.nvars == 0 and R.modulus.is_zero():
        return Catalog("field", R, 0)
    if base.nvars == 1 and R.modulus.is_zero():
        return Catalog("poly", R, 0)
    if base.nvars == 1 and not R.modulus.is_zero():
        gb = R.modulus.reduced_gb
        if len(gb) == 1 and len(gb[0].terms) == 1:
            n = gb[0].degree_in(0)
            return Catalog("chain", R, n)
    raise RingNotInCatalog(f"no catalog family for {R!r}")


def class_decompose(M: FPModule, cat: Optional[Catalog] = None) -> KClass:
    """Coordinates of M against the catalog generators, via canonical forms."""
    if cat is None:
        cat = catalog_for(M.ring)
    if M.ring != cat.ring:
        raise RingNotInCatalog("module ring does not match the catalog")
    rows = M.relation_rows()
    n = M.ngens
    coords: dict[str, int] = {}

    def bump(label, amount=1):
        coords[label] = coords.get(label, 0) + amount

    if cat.family == "field":
        value_rows = [[p.constant_value() for p in row] for row in rows]
        rank = _field_matrix_rank(value_rows, M.ring.base.field)
        if n - rank:
            bump("[k]", n - rank)
        return KClass(coords)

    if cat.family == "poly":
        diag = _euclid_diagonalize_poly(rows, M.ring.base)
        for f in diag:
            if f.is_constant():
                continue  # unit relation cancels a generator
            bump(f"[R/({format_poly(f)})]")
        free = n - len(diag)
        if free:
            bump("[R]", free)
        return KClass(coords)

    # chain family
    vals = _chain_diagonalize(rows, M.ring, cat.chain_power)
    x = M.ring.base.var(M.ring.base.variables[0])
    survivors = 0
    for v in vals:
        if v == 0:
            continue  # unit relation
        survivors += 1
        bump(f"[R/({format_poly(x ** v)})]")
    free = n - len(vals)
    if free:
        bump("[R]", free)
    return KClass(coords)


# ---------------------------------------------------------------------------
# the Euler map, the pushdown map, and the extension map
# ---------------------------------------------------------------------------

def euler_class(M: FPModule, depth: int = 8) -> KClass:
    """Alternating sum of free ranks of a finite free resolution, as m*[R].

    Requires a Finite projective-dimension verdict; anything else raises
    PdInfiniteOrUnresolved.
    """
    verdict = pd_bounded(M, depth)
    if verdict.kind != "finite":
        raise PdInfiniteOrUnresolved(f"pd verdict is {verdict}")
    res = free_resolution(M, max(verdict.n + 2, 2))
    if res.maps and res.maps[-1]:
        raise InputError("resolution did not terminate with a free tail")
    ranks = res.ranks[:-1] if res.maps else res.ranks
    total = sum((-1) ** s * r for s, r in enumerate(ranks))
    label = "[k]" if M.ring.base.nvars == 0 else "[R]"
    return KClass({label: total})


def pushdown_class(M: FPModule, var: Optional[str] = None,
                   cat: Optional[Catalog] = None) -> KClass:
    """Class of a module over R[x] pushed down to the base-ring catalog.

    From a free presentation 0 -> A -> P -> M -> 0 over R[x], the result is
    [P/xP] - [A/xA] as catalog coordinates over R.
    """
    S = M.ring
    base = S.base
    if base.nvars == 0:
        raise InputError("no polynomial variable to push down along")
    if var is None:
        var = base.variables[-1]
    if var != base.variables[-1]:
        raise InputError("pushdown variable must be the last ring variable")
    idx = base.nvars - 1
    R = shrink_ring(S)
    if cat is None:
        cat = catalog_for(R)
    free_class = class_decompose(FPModule.free(R, M.ngens), cat)
    a_cols = M.canonical_relations
    if not a_cols:
        return free_class
    a_rels = SubmoduleEngine(S, M.ngens, list(a_cols)).syzygies()
    small = R.base
    reduced_cols = [
        tuple(R.nf(restrict_poly(substitute_zero(p, idx), small)) for p in col)
        for col in a_rels]
    a_bar = FPModule(R, len(a_cols), reduced_cols)
    return free_class - class_decompose(a_bar, cat)


def extension_class(M: FPModule, var: str) -> FPModule:
    """The polynomial extension, tagged as a class representative of [M[x]]."""
    return polynomial_extension(M, var)


class EulerMapReport(NamedTuple):
    status: str  # "ok" | "PropertyCUnverified"
    offending_generator: Optional[str]
    generator_verdicts: tuple
    free_roundtrip_ok: bool
    additivity_results: tuple  # one bool (or None if skipped) per sequence


def euler_map_report(cat: Catalog, sequences=(), depth: int = 8) -> EulerMapReport:
    """Verify the Euler map against the projective-class embedding.

    Checks every declared catalog generator for finite projective dimension,
    the identity on free classes up to rank 4, and additivity of the Euler
    class across each supplied short exact sequence (pairs of maps).
    """
    verdicts = []
    offender = None
    for label in cat.generator_labels():
        module = cat.module_for_label(label)
        v = pd_bounded(module, depth)
        verdicts.append((label, str(v)))
        if v.kind != "finite" and offender is None:
            offender = label
    status = "ok" if offender is None else "PropertyCUnverified"

    free_ok = True
    for r in range(1, 5):
        cls = euler_class(FPModule.free(cat.ring, r), depth)
        if cls != KClass({cat.unit_label: r}):
            free_ok = False

    additivity = []
    for incl, proj in sequences:
        if not verify_short_exact(incl, proj).ok:
            additivity.append(None)
            continue
        try:
            va = euler_class(incl.source, depth)
            vb = euler_class(incl.target, depth)
            vc = euler_class(proj.target, depth)
        except PdInfiniteOrUnresolved:
            additivity.append(None)
            continue
        additivity.append(vb == va + vc)
    return EulerMapReport(status, offender, tuple(verdicts), free_ok,
                          tuple(additivity))
