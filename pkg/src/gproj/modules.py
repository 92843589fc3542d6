"""Finitely presented modules over quotient rings and the syzygy engine.

A module element of the free module P^r is a dict {(position, exponent): coeff}
ordered position-over-term: position i beats position j > i, ties broken by the
ring's monomial order. One graph-basis computation per generating set yields
membership tests, membership witnesses, and syzygies over the quotient ring.

All values are immutable after construction and every operation is a pure
function of its inputs, so concurrent read-only sharing is safe.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

from .errors import (
    DegreeGuardExceeded,
    InputError,
    MapNotWellDefined,
    NotMonic,
    NotRegularOnModule,
    RingMismatch,
    RingNotRecognizedAsDomain,
    UnitElement,
    ZeroDivisorInRing,
)
from .rings import (
    Ideal,
    Poly,
    PolyRing,
    QuotRing,
    coeffs_by_variable,
    embed_poly,
    extend_ring,
    is_monic_in_var,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
    reduce_by_monic_in_var,
    restrict_poly,
)

Vec = dict  # {(pos, expt): coeff}
Column = tuple  # tuple[Poly, ...]


# ---------------------------------------------------------------------------
# free-module Groebner bases over the ambient polynomial ring
# ---------------------------------------------------------------------------

class FreeModuleGB:
    """Reduced Groebner basis of a submodule of P^rank (POT order)."""

    def __init__(self, ring: PolyRing, rank: int, vectors: list[Vec]):
        self.ring = ring
        self.rank = rank
        self._rkey = ring._key
        self.basis = self._buchberger([dict(v) for v in vectors if v])

    def _mkey(self, mono):
        pos, expt = mono
        return (-pos,) + tuple(self._rkey(expt))

    def _lead(self, v: Vec):
        return max(v, key=self._mkey)

    def _monic(self, v: Vec) -> Vec:
        field = self.ring.field
        lead = self._lead(v)
        c = field.inv(v[lead])
        return {m: field.mul(cc, c) for m, cc in v.items()}

    def reduce(self, v: Vec) -> Vec:
        """Full normal form: every term gets reduced, result is unique."""
        field = self.ring.field
        guard = self.ring.degree_guard
        work = dict(v)
        remainder: Vec = {}
        by_pos = self._by_pos
        while work:
            mono = max(work, key=self._mkey)
            pos, expt = mono
            c = work[mono]
            hit = None
            for lead_expt, g in by_pos.get(pos, ()):
                if monomial_divides(lead_expt, expt):
                    hit = (lead_expt, g)
                    break
            if hit is None:
                remainder[mono] = c
                del work[mono]
                continue
            lead_expt, g = hit
            shift = monomial_div(expt, lead_expt)
            for (p2, e2), cc in g.items():
                e3 = monomial_mul(e2, shift)
                if sum(e3) > guard:
                    raise DegreeGuardExceeded(
                        f"module term degree {sum(e3)} exceeds guard {guard}")
                key = (p2, e3)
                s = field.sub(work.get(key, field.zero), field.mul(cc, c))
                if s == 0:
                    work.pop(key, None)
                else:
                    work[key] = s
        return remainder

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def _rebuild_index(self, basis):
        by_pos: dict[int, list] = {}
        for g in basis:
            pos, expt = self._lead(g)
            by_pos.setdefault(pos, []).append((expt, g))
        self._by_pos = by_pos

    def _buchberger(self, vectors: list[Vec]) -> list[Vec]:
        guard = self.ring.degree_guard
        field = self.ring.field
        basis = [self._monic(v) for v in vectors]
        basis.sort(key=lambda g: self._mkey(self._lead(g)), reverse=True)
        self._rebuild_index(basis)
        ring_case = self.rank == 1

        def spair(f, g):
            (pos, a) = self._lead(f)
            (_, b) = self._lead(g)
            lcm = monomial_lcm(a, b)
            sa, sb = monomial_div(lcm, a), monomial_div(lcm, b)
            out: Vec = {}
            for (p, e), c in f.items():
                out[(p, monomial_mul(e, sa))] = c
            for (p, e), c in g.items():
                key = (p, monomial_mul(e, sb))
                s = field.sub(out.get(key, field.zero), c)
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
            return out

        def pair_key(i, j):
            (pos, a) = self._lead(basis[i])
            (_, b) = self._lead(basis[j])
            lcm = monomial_lcm(a, b)
            return (sum(lcm), pos, lcm, i, j)

        pairs = set()
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                if self._lead(basis[i])[0] == self._lead(basis[j])[0]:
                    pairs.add((i, j))
        while pairs:
            i, j = min(pairs, key=lambda p: pair_key(*p))
            pairs.discard((i, j))
            (pos, a) = self._lead(basis[i])
            (_, b) = self._lead(basis[j])
            if ring_case and monomial_lcm(a, b) == monomial_mul(a, b):
                continue  # coprime criterion is only sound in the rank-1 case
            r = self.reduce(spair(basis[i], basis[j]))
            if not r:
                continue
            top_deg = max(sum(e) for (_, e) in r)
            if top_deg > guard:
                raise DegreeGuardExceeded(
                    f"module basis degree {top_deg} exceeds guard {guard}")
            basis.append(self._monic(r))
            k = len(basis) - 1
            self._rebuild_index(basis)
            lead_k = self._lead(basis[k])[0]
            for t in range(k):
                if self._lead(basis[t])[0] == lead_k:
                    pairs.add((t, k))
        return self._interreduce(basis)

    def _interreduce(self, basis: list[Vec]) -> list[Vec]:
        basis = [g for g in basis if g]
        keep = []
        leads = [self._lead(g) for g in basis]
        for i, g in enumerate(basis):
            pos, expt = leads[i]
            redundant = False
            for j in range(len(basis)):
                if j == i:
                    continue
                pj, ej = leads[j]
                if pj == pos and monomial_divides(ej, expt) and (ej != expt or j < i):
                    redundant = True
                    break
            if not redundant:
                keep.append(g)
        reduced = []
        for i, g in enumerate(keep):
            others = keep[:i] + keep[i + 1:]
            self._rebuild_index(others)
            r = self.reduce(g) if others else g
            if r:
                reduced.append(self._monic(r))
        reduced.sort(key=lambda g: self._mkey(self._lead(g)), reverse=True)
        self._rebuild_index(reduced)
        return reduced


def _column_to_vec(col: Column) -> Vec:
    v: Vec = {}
    for pos, p in enumerate(col):
        for e, c in p.terms:
            v[(pos, e)] = c
    return v


def _vec_to_column(v: Vec, rank: int, ring: PolyRing) -> Column:
    per_pos: list[dict] = [dict() for _ in range(rank)]
    for (pos, e), c in v.items():
        per_pos[pos][e] = c
    return tuple(ring.from_dict(d) for d in per_pos)


def _nf_column(R: QuotRing, col) -> Column:
    return tuple(R.nf(p) for p in col)


def _zero_column(R: QuotRing, rank: int) -> Column:
    return tuple(R.zero() for _ in range(rank))


def _unit_column(R: QuotRing, rank: int, i: int) -> Column:
    return tuple(R.one() if j == i else R.zero() for j in range(rank))


def canonical_generators(R: QuotRing, rank: int, columns) -> tuple[Column, ...]:
    """Unique reduced generating set of the R-submodule spanned by columns.

    Computed as the reduced Groebner basis of the preimage submodule of
    P^rank (the given columns plus modulus multiples of the unit vectors),
    with the pure modulus part discarded. Canonical: depends only on the
    submodule, not on the generating set handed in.
    """
    cols = [_nf_column(R, c) for c in columns]
    cols = [c for c in cols if any(not p.is_zero() for p in c)]
    if rank == 0 or (not cols and R.modulus.is_zero()):
        return ()
    vectors = [_column_to_vec(c) for c in cols]
    for g in R.modulus.reduced_gb:
        for i in range(rank):
            vectors.append({(i, e): c for e, c in g.terms})
    gb = FreeModuleGB(R.base, rank, vectors)
    out = []
    for b in gb.basis:
        col = _nf_column(R, _vec_to_column(b, rank, R.base))
        if any(not p.is_zero() for p in col):
            out.append(col)
    return tuple(out)


class SubmoduleEngine:
    """Membership, witnesses, and syzygies for an R-submodule of R^rank.

    One graph basis serves all three queries: generators are tagged with unit
    vectors in an extra block, modulus multiples enter untagged, and the POT
    order eliminates the ambient block first.
    """

    def __init__(self, R: QuotRing, rank: int, columns):
        self.R = R
        self.rank = rank
        self.columns = [_nf_column(R, c) for c in columns]
        m = len(self.columns)
        self.m = m
        vectors = []
        zero_expt = (0,) * R.base.nvars
        for j, col in enumerate(self.columns):
            v = _column_to_vec(col)
            v[(rank + j, zero_expt)] = R.base.field.one
            vectors.append(v)
        for g in R.modulus.reduced_gb:
            for i in range(rank):
                vectors.append({(i, e): c for e, c in g.terms})
        self.gb = FreeModuleGB(R.base, rank + m, vectors)

    def witness(self, column) -> Optional[list[Poly]]:
        """Coefficients expressing the column in the generators, or None."""
        col = _nf_column(self.R, column)
        r = self.gb.reduce(_column_to_vec(col))
        if any(pos < self.rank for (pos, _) in r):
            return None
        parts: list[dict] = [dict() for _ in range(self.m)]
        for (pos, e), c in r.items():
            parts[pos - self.rank][e] = c
        field = self.R.base.field
        out = []
        for d in parts:
            p = self.R.base.from_dict({e: field.neg(c) for e, c in d.items()})
            out.append(self.R.nf(p))
        return out

    def contains(self, column) -> bool:
        return self.witness(column) is not None

    def syzygies(self) -> tuple[Column, ...]:
        """Canonical generating set of the syzygy module of the columns."""
        raw = []
        for b in self.gb.basis:
            if all(pos >= self.rank for (pos, _) in b):
                shifted = {(pos - self.rank, e): c for (pos, e), c in b.items()}
                raw.append(_vec_to_column(shifted, self.m, self.R.base))
        return canonical_generators(self.R, self.m, raw)


def colon_generators(R: QuotRing, rank: int, image_cols, modifier_cols) -> tuple[Column, ...]:
    """Generators of {v : sum v_j * image_j lies in span(modifiers)} in R^len(image)."""
    n = len(image_cols)
    eng = SubmoduleEngine(R, rank, list(image_cols) + list(modifier_cols))
    out = [tuple(s[:n]) for s in eng.syzygies()]
    return canonical_generators(R, n, out)


# ---------------------------------------------------------------------------
# finitely presented modules and maps
# ---------------------------------------------------------------------------

class FPModule:
    """Cokernel of a relation matrix over a QuotRing; columns are relations."""

    __slots__ = ("ring", "ngens", "relations", "canonical_relations", "_engine")

    def __init__(self, ring: QuotRing, ngens: int, relations=()):
        if ngens < 0:
            raise InputError("negative generator count")
        cols = []
        for col in relations:
            if len(col) != ngens:
                raise InputError("relation column length does not match ngens")
            col = _nf_column(ring, col)
            if any(not p.is_zero() for p in col):
                cols.append(col)
        self.ring = ring
        self.ngens = ngens
        self.relations = tuple(cols)
        self.canonical_relations = canonical_generators(ring, ngens, cols)
        self._engine = SubmoduleEngine(ring, ngens, list(self.canonical_relations))

    @classmethod
    def free(cls, ring: QuotRing, n: int) -> "FPModule":
        return cls(ring, n, ())

    @classmethod
    def from_strings(cls, ring: QuotRing, ngens: int, rows) -> "FPModule":
        """Row-major matrix of polynomial strings (ngens rows; [] = none)."""
        if not rows:
            return cls(ring, ngens, ())
        if len(rows) != ngens:
            raise InputError(f"expected {ngens} rows, got {len(rows)}")
        parsed = [[ring.poly(s) if isinstance(s, str) else ring.nf(s) for s in row]
                  for row in rows]
        width = {len(row) for row in parsed}
        if len(width) > 1:
            raise InputError("ragged relation matrix")
        m = width.pop() if width else 0
        cols = [tuple(parsed[i][j] for i in range(ngens)) for j in range(m)]
        return cls(ring, ngens, cols)

    def rel_span_contains(self, column) -> bool:
        return self._engine.contains(column)

    def rel_witness(self, column):
        return self._engine.witness(column)

    def is_zero(self) -> bool:
        if self.ngens == 0:
            return True
        return all(self._engine.contains(_unit_column(self.ring, self.ngens, i))
                   for i in range(self.ngens))

    def is_free_presentation(self) -> bool:
        return not self.canonical_relations

    def direct_sum(self, other: "FPModule") -> "FPModule":
        if self.ring != other.ring:
            raise RingMismatch("direct sum over different rings")
        zero_a = _zero_column(self.ring, self.ngens)
        zero_b = _zero_column(self.ring, other.ngens)
        cols = [col + zero_b for col in self.relations]
        cols += [zero_a + col for col in other.relations]
        return FPModule(self.ring, self.ngens + other.ngens, cols)

    def same_presentation(self, other: "FPModule") -> bool:
        return (self.ring == other.ring and self.ngens == other.ngens
                and self.canonical_relations == other.canonical_relations)

    def relation_rows(self) -> list[list[Poly]]:
        return [[col[i] for col in self.relations] for i in range(self.ngens)]

    def __repr__(self):
        return (f"FPModule({self.ring!r}, gens={self.ngens}, "
                f"rels={len(self.relations)})")


def mat_vec(R: QuotRing, columns, vec) -> Column:
    """Apply the column-major matrix to a coefficient vector."""
    rank = len(columns[0]) if columns else 0
    acc = [R.base.zero() for _ in range(rank)]
    for j, c in enumerate(vec):
        if c.is_zero():
            continue
        col = columns[j]
        for i in range(rank):
            if not col[i].is_zero():
                acc[i] = acc[i] + col[i] * c
    return tuple(R.nf(p) for p in acc)


class ModuleMap:
    """A map of f.p. modules carrying its well-definedness certificate."""

    __slots__ = ("source", "target", "columns")

    def __init__(self, source: FPModule, target: FPModule, columns, check: bool = True):
        if source.ring != target.ring:
            raise RingMismatch("map between modules over different rings")
        columns = tuple(_nf_column(source.ring, c) for c in columns)
        if len(columns) != source.ngens:
            raise InputError("matrix width does not match source generators")
        for c in columns:
            if len(c) != target.ngens:
                raise InputError("matrix height does not match target generators")
        self.source = source
        self.target = target
        self.columns = columns
        if check:
            for rel in source.relations:
                image = self._apply(rel)
                if not target.rel_span_contains(image):
                    raise MapNotWellDefined(
                        "image of a source relation misses the target relation span")

    @classmethod
    def identity(cls, module: FPModule) -> "ModuleMap":
        cols = [_unit_column(module.ring, module.ngens, i) for i in range(module.ngens)]
        return cls(module, module, cols, check=False)

    @classmethod
    def zero(cls, source: FPModule, target: FPModule) -> "ModuleMap":
        cols = [_zero_column(source.ring, target.ngens) for _ in range(source.ngens)]
        return cls(source, target, cols, check=False)

    @classmethod
    def from_strings(cls, source: FPModule, target: FPModule, rows) -> "ModuleMap":
        R = source.ring
        if len(rows) != target.ngens:
            raise InputError(f"expected {target.ngens} rows")
        parsed = [[R.poly(s) if isinstance(s, str) else R.nf(s) for s in row]
                  for row in rows]
        for row in parsed:
            if len(row) != source.ngens:
                raise InputError(f"expected {source.ngens} columns")
        cols = [tuple(parsed[i][j] for i in range(target.ngens))
                for j in range(source.ngens)]
        return cls(source, target, cols)

    def _apply(self, vec) -> Column:
        if not self.columns:
            return _zero_column(self.source.ring, self.target.ngens)
        return mat_vec(self.source.ring, self.columns, vec)

    def apply_to_vector(self, vec) -> Column:
        return self._apply(vec)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self after other (matrix product with re-certification)."""
        if other.target is not self.source and not other.target.same_presentation(self.source):
            raise InputError("composition sources do not line up")
        cols = [self._apply(c) for c in other.columns]
        return ModuleMap(other.source, self.target, cols)

    def rows(self) -> list[list[Poly]]:
        return [[col[i] for col in self.columns] for i in range(self.target.ngens)]

    def kernel_preimage_generators(self) -> tuple[Column, ...]:
        """Generators in R^{source.ngens} of the preimage of the kernel."""
        if self.source.ngens == 0:
            return ()
        if self.target.ngens == 0:
            return tuple(_unit_column(self.source.ring, self.source.ngens, i)
                         for i in range(self.source.ngens))
        return colon_generators(self.source.ring, self.target.ngens,
                                self.columns, self.target.canonical_relations)

    def kernel_is_zero(self) -> bool:
        return all(self.source.rel_span_contains(g)
                   for g in self.kernel_preimage_generators())

    def cokernel_is_zero(self) -> bool:
        if self.target.ngens == 0:
            return True
        eng = SubmoduleEngine(self.target.ring, self.target.ngens,
                              list(self.columns) + list(self.target.canonical_relations))
        return all(eng.contains(_unit_column(self.target.ring, self.target.ngens, i))
                   for i in range(self.target.ngens))

    def is_iso(self) -> bool:
        return self.kernel_is_zero() and self.cokernel_is_zero()

    def __repr__(self):
        return f"ModuleMap({self.source.ngens} gens -> {self.target.ngens} gens)"


def maps_equal(f: ModuleMap, g: ModuleMap) -> bool:
    """Equality as maps: the difference lands in the target relation span."""
    if f.source.ngens != g.source.ngens or f.target.ngens != g.target.ngens:
        return False
    R = f.source.ring
    for cf, cg in zip(f.columns, g.columns):
        diff = tuple(R.sub(a, b) for a, b in zip(cf, cg))
        if not f.target.rel_span_contains(diff):
            return False
    return True


class SubmoduleOfFree:
    """A submodule of R^ambient_rank given by a finite generating set."""

    __slots__ = ("ring", "ambient_rank", "generators", "_engine")

    def __init__(self, ring: QuotRing, ambient_rank: int, generators=()):
        gens = []
        for g in generators:
            if len(g) != ambient_rank:
                raise InputError("generator length does not match ambient rank")
            g = _nf_column(ring, g)
            if any(not p.is_zero() for p in g):
                gens.append(g)
        self.ring = ring
        self.ambient_rank = ambient_rank
        self.generators = tuple(gens)
        self._engine = SubmoduleEngine(ring, ambient_rank, gens)

    def contains_vector(self, column) -> bool:
        return self._engine.contains(column)

    def witness(self, column):
        return self._engine.witness(column)

    def contains_submodule(self, other: "SubmoduleOfFree") -> bool:
        return all(self.contains_vector(g) for g in other.generators)

    def equals(self, other: "SubmoduleOfFree") -> bool:
        return self.contains_submodule(other) and other.contains_submodule(self)

    def is_zero(self) -> bool:
        return not canonical_generators(self.ring, self.ambient_rank, self.generators)

    def syzygies(self) -> tuple[Column, ...]:
        return self._engine.syzygies()

    def as_fpmodule(self) -> FPModule:
        return FPModule(self.ring, len(self.generators), self.syzygies())

    def intersect(self, other: "SubmoduleOfFree") -> "SubmoduleOfFree":
        if self.ring != other.ring or self.ambient_rank != other.ambient_rank:
            raise RingMismatch("intersection needs a common ambient module")
        if not self.generators or not other.generators:
            return SubmoduleOfFree(self.ring, self.ambient_rank, ())
        combined = list(self.generators) + list(other.generators)
        eng = SubmoduleEngine(self.ring, self.ambient_rank, combined)
        n = len(self.generators)
        cols = []
        for s in eng.syzygies():
            combo = mat_vec(self.ring, list(self.generators), s[:n])
            if any(not p.is_zero() for p in combo):
                cols.append(combo)
        cols = canonical_generators(self.ring, self.ambient_rank, cols)
        return SubmoduleOfFree(self.ring, self.ambient_rank, cols)

    def __repr__(self):
        return (f"SubmoduleOfFree(rank {self.ambient_rank}, "
                f"{len(self.generators)} gens)")


# ---------------------------------------------------------------------------
# ring-level operations that need syzygies
# ---------------------------------------------------------------------------

def annihilator_of_element(a: Poly, R: QuotRing) -> Ideal:
    """(0 : a) in R, returned with its canonical generating set."""
    a = R.nf(a)
    syz = SubmoduleEngine(R, 1, [(a,)]).syzygies()
    return Ideal(R.base, [col[0] for col in syz])


def is_regular_element(u: Poly, M: FPModule) -> bool:
    """True iff multiplication by u on M has zero kernel."""
    R = M.ring
    u = R.nf(u)
    n = M.ngens
    if n == 0:
        return True
    mult_cols = [tuple(u if j == i else R.zero() for j in range(n)) for i in range(n)]
    preimage = colon_generators(R, n, mult_cols, M.canonical_relations)
    return all(M.rel_span_contains(g) for g in preimage)


def is_regular_in_ring(u: Poly, R: QuotRing) -> bool:
    return annihilator_of_element(u, R).is_zero()


# ---------------------------------------------------------------------------
# duals and double duality
# ---------------------------------------------------------------------------

class DualModule(NamedTuple):
    module: FPModule
    evaluation: tuple  # one row vector in R^{M.ngens} per dual generator


def dual_module(M: FPModule) -> DualModule:
    """Hom(M, R): kernel of the transposed relation matrix, plus syzygies.

    Each generator of the dual is recorded as a row vector on M's generators,
    which is exactly its evaluation data.
    """
    R = M.ring
    n, cols = M.ngens, M.canonical_relations
    m = len(cols)
    transpose = [tuple(cols[l][j] for l in range(m)) for j in range(n)]
    if m == 0:
        kernel = tuple(_unit_column(R, n, j) for j in range(n))
    else:
        kernel = SubmoduleEngine(R, m, transpose).syzygies()
    rels = SubmoduleEngine(R, n, list(kernel)).syzygies() if kernel else ()
    return DualModule(FPModule(R, len(kernel), rels), kernel)


def dual_map(f: ModuleMap, dual_target: DualModule, dual_source: DualModule) -> ModuleMap:
    """Hom(f, R): from the dual of f's target to the dual of f's source."""
    R = f.source.ring
    n_src = f.source.ngens
    src_engine = SubmoduleEngine(R, n_src, list(dual_source.evaluation))
    cols = []
    for w in dual_target.evaluation:
        # the functional w pulled back along f, as a row on source generators
        row = tuple(
            R.nf(sum((w[i] * f.columns[j][i] for i in range(f.target.ngens)),
                     R.base.zero()))
            for j in range(n_src))
        wit = src_engine.witness(row)
        if wit is None:
            raise MapNotWellDefined("pulled-back functional misses the dual module")
        cols.append(tuple(wit))
    return ModuleMap(dual_target.module, dual_source.module, cols)


class DoubleDualResult(NamedTuple):
    map: ModuleMap  # M -> M**
    verdict: str  # iso | mono_not_iso | not_mono
    dual: DualModule
    double_dual: DualModule


def double_dual_map(M: FPModule) -> DoubleDualResult:
    """The evaluation map into the double dual, built as an explicit matrix."""
    R = M.ring
    D = dual_module(M)
    DD = dual_module(D.module)
    k = D.module.ngens
    engine = SubmoduleEngine(R, k, list(DD.evaluation))
    cols = []
    for a in range(M.ngens):
        u = tuple(D.evaluation[i][a] for i in range(k))
        wit = engine.witness(u)
        if wit is None:
            raise MapNotWellDefined("evaluation vector misses the double dual")
        cols.append(tuple(wit))
    mu = ModuleMap(M, DD.module, cols)
    if mu.kernel_is_zero():
        verdict = "iso" if mu.cokernel_is_zero() else "mono_not_iso"
    else:
        verdict = "not_mono"
    return DoubleDualResult(mu, verdict, D, DD)


# ---------------------------------------------------------------------------
# base-change transports
# ---------------------------------------------------------------------------

def quotient_by_regular_element(M: FPModule, u: Poly) -> FPModule:
    """M/uM over R/(u), for u neither a zero divisor nor a unit, regular on M."""
    R = M.ring
    u = R.nf(u)
    if u.is_zero():
        raise ZeroDivisorInRing("zero is a zero divisor")
    if R.is_unit(u):
        raise UnitElement(f"{u} is a unit")
    if not is_regular_in_ring(u, R):
        raise ZeroDivisorInRing(f"{u} is a zero divisor in the ring")
    if not is_regular_element(u, M):
        raise NotRegularOnModule(f"{u} is not regular on the module")
    quotient = QuotRing(R.base, Ideal(R.base, list(R.modulus.generators) + [u]))
    cols = [tuple(quotient.nf(p) for p in col) for col in M.relations]
    return FPModule(quotient, M.ngens, cols)


def polynomial_extension(M: FPModule, var: str) -> FPModule:
    """M[x]: the same relation matrix over the ring with one fresh variable."""
    big = extend_ring(M.ring, var)
    cols = [tuple(big.nf(embed_poly(p, big.base)) for p in col) for col in M.relations]
    return FPModule(big, M.ngens, cols)


def shrink_ring(S: QuotRing) -> QuotRing:
    """Drop the last variable; modulus generators must not involve it."""
    base = S.base
    if base.nvars == 0:
        raise InputError("no variable to drop")
    idx = base.nvars - 1
    small = PolyRing(base.field, base.variables[:-1], base.order, base.degree_guard)
    gens = []
    for g in S.modulus.generators:
        if g.degree_in(idx) > 0:
            raise InputError("modulus involves the variable being dropped")
        gens.append(restrict_poly(g, small))
    return QuotRing(small, Ideal(small, gens))


def restrict_scalars_monic(N: FPModule, var: str, f: Poly) -> FPModule:
    """View a module over R[x]/(f), f monic of degree k in x, as an R-module.

    Each generator splits into k generators along the basis 1, x, ..., x^{k-1};
    every relation is replaced by its k shifts, rewritten in that basis.
    Generator (i, j) of the result sits at index i*k + j.
    """
    T = N.ring
    base = T.base
    if var not in base.variables:
        raise InputError(f"unknown variable {var!r}")
    idx = base._varindex[var]
    if idx != base.nvars - 1:
        raise InputError("the tower variable must be the last ring variable")
    if isinstance(f, str):
        f = base.poly(f)
    if not is_monic_in_var(f, idx) or f.degree_in(idx) < 1:
        raise NotMonic(f"{f} is not monic of positive degree in {var}")
    if not T.modulus.contains(f):
        raise InputError("the monic polynomial does not lie in the modulus")
    k = f.degree_in(idx)
    small = PolyRing(base.field, base.variables[:-1], base.order, base.degree_guard)
    small_gens = []
    for g in T.modulus.generators:
        if g == f:
            continue
        if g.degree_in(idx) > 0:
            raise InputError("modulus mixes the tower variable into other generators")
        small_gens.append(restrict_poly(g, small))
    R = QuotRing(small, Ideal(small, small_gens))

    n = N.ngens
    var_poly = base.var(var)
    new_cols = []
    for col in N.relations:
        for j in range(k):
            shifted = [T.nf(p * var_poly ** j) for p in col]
            entries = [R.zero() for _ in range(n * k)]
            for i, p in enumerate(shifted):
                p = reduce_by_monic_in_var(p, f, idx)
                for d, q in coeffs_by_variable(p, idx).items():
                    entries[i * k + d] = R.nf(restrict_poly(q, small))
            new_cols.append(tuple(entries))
    return FPModule(R, n * k, new_cols)


def module_over_cover(M: FPModule, cover: QuotRing) -> FPModule:
    """View a module over R/(J) as a module over the larger quotient R/(J').

    cover's modulus must be contained in M's ring modulus; the extra modulus
    generators become relations that kill every generator.
    """
    R = M.ring
    if cover.base != R.base:
        raise RingMismatch("cover over a different base polynomial ring")
    for g in cover.modulus.generators:
        if not R.modulus.contains(g):
            raise InputError("cover modulus is not contained in the module's modulus")
    cols = [tuple(cover.nf(p) for p in col) for col in M.relations]
    for q in R.modulus.generators:
        q2 = cover.nf(q)
        if q2.is_zero():
            continue
        for i in range(M.ngens):
            cols.append(tuple(q2 if j == i else cover.zero() for j in range(M.ngens)))
    return FPModule(cover, M.ngens, cols)


# ---------------------------------------------------------------------------
# kernels, ranks, degree windows
# ---------------------------------------------------------------------------

def kernel_of_map(f: ModuleMap) -> SubmoduleOfFree:
    """Kernel of a map between free modules, as a submodule of the source."""
    if not f.source.is_free_presentation() or not f.target.is_free_presentation():
        raise InputError("kernel_of_map expects free source and target")
    R = f.source.ring
    if f.source.ngens == 0:
        return SubmoduleOfFree(R, 0, ())
    if f.target.ngens == 0:
        gens = [_unit_column(R, f.source.ngens, i) for i in range(f.source.ngens)]
        return SubmoduleOfFree(R, f.source.ngens, gens)
    syz = SubmoduleEngine(R, f.target.ngens, list(f.columns)).syzygies()
    return SubmoduleOfFree(R, f.source.ngens, syz)


def _poly_matrix_rank(columns, nrows: int) -> int:
    """Rank over the fraction field by fraction-free elimination."""
    if not columns or nrows == 0:
        return 0
    ncols = len(columns)
    A = [[columns[j][i] for j in range(ncols)] for i in range(nrows)]
    rank = 0
    for c in range(ncols):
        pivot = None
        for r in range(rank, nrows):
            if not A[r][c].is_zero():
                pivot = r
                break
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        for r in range(rank + 1, nrows):
            if A[r][c].is_zero():
                continue
            head, entry = A[rank][c], A[r][c]
            A[r] = [head * A[r][j] - entry * A[rank][j] for j in range(ncols)]
        rank += 1
        if rank == nrows:
            break
    return rank


def module_rank(M: FPModule) -> int:
    """Generic rank over the fraction field; needs a zero modulus (a domain)."""
    if not M.ring.modulus.is_zero():
        raise RingNotRecognizedAsDomain(
            "rank is only computed over polynomial rings (zero modulus)")
    return M.ngens - _poly_matrix_rank(M.canonical_relations, M.ngens)


def intersect_with_truncation(Msub: SubmoduleOfFree, k: int, var: Optional[str] = None
                              ) -> SubmoduleOfFree:
    """Intersect a submodule of F[x] with F + Fx + ... + Fx^{k-1} over the base.

    The ambient of the result is R^{r*k}; coordinate d*r + i is the degree-d
    slice of ambient coordinate i. Uses the degree-bounded generating set
    {x^j * v : deg_x(x^j * v) <= D + k} with D the top generator x-degree.

    Every returned generator genuinely lies in the intersection. The fixed
    bound can under-approximate when k is far below the generator degrees
    (cofactors of degree > D + k exist over rings with nilpotents); the
    window-sequence builder always chooses k > D, and its exactness
    certificate re-verifies everything downstream.
    """
    S = Msub.ring
    base = S.base
    if base.nvars == 0:
        raise InputError("ambient ring has no polynomial variable")
    if var is None:
        var = base.variables[-1]
    idx = base._varindex[var]
    if idx != base.nvars - 1:
        raise InputError("the truncation variable must be the last ring variable")
    for g in S.modulus.generators:
        if g.degree_in(idx) > 0:
            raise InputError("modulus involves the truncation variable")
    R = shrink_ring(S)
    r = Msub.ambient_rank
    if k <= 0 or r == 0:
        return SubmoduleOfFree(R, max(r * k, 0), ())
    gens = [g for g in Msub.generators]
    if not gens:
        return SubmoduleOfFree(R, r * k, ())
    small = R.base

    def gen_degree(col):
        return max(p.degree_in(idx) for p in col if not p.is_zero())

    D = max(gen_degree(g) for g in gens)
    bound = D + k
    multiples = []
    var_poly = base.var(var)
    for g in gens:
        for j in range(bound - gen_degree(g) + 1):
            multiples.append(tuple(S.nf(p * var_poly ** j) for p in g))

    def coords(col, lo, hi):
        out = [R.zero() for _ in range((hi - lo) * r)]
        for i, p in enumerate(col):
            for d, q in coeffs_by_variable(p, idx).items():
                if lo <= d < hi:
                    out[(d - lo) * r + i] = R.nf(restrict_poly(q, small))
        return tuple(out)

    high = [coords(w, k, bound + 1) for w in multiples]
    syz = SubmoduleEngine(R, (bound + 1 - k) * r, high).syzygies()
    lows = [coords(w, 0, k) for w in multiples]
    cols = []
    for s in syz:
        combo = mat_vec(R, lows, s)
        if any(not p.is_zero() for p in combo):
            cols.append(combo)
    cols = canonical_generators(R, r * k, cols)
    return SubmoduleOfFree(R, r * k, cols)


def window_vector_to_ambient(col, r: int, S: QuotRing, var: str) -> Column:
    """Rebuild an F[x] vector from its (degree d, coordinate i) -> d*r+i slices."""
    base = S.base
    var_poly = base.var(var)
    k = len(col) // r if r else 0
    out = [base.zero() for _ in range(r)]
    for d in range(k):
        for i in range(r):
            p = col[d * r + i]
            if not p.is_zero():
                out[i] = out[i] + embed_poly(p, base) * var_poly ** d
    return tuple(S.nf(p) for p in out)


# ---------------------------------------------------------------------------
# the monomorphism/intersection equivalence
# ---------------------------------------------------------------------------

class IntersectionCriterionResult(NamedTuple):
    h_is_mono: bool
    lower_left_equals_intersection: bool
    induced_map: ModuleMap


def _quotient_presentation(big: SubmoduleOfFree, small: SubmoduleOfFree) -> FPModule:
    """Present big/small: generators of big, relations from small plus syzygies."""
    cols = []
    for g in small.generators:
        wit = big.witness(g)
        if wit is None:
            raise InputError("inclusion certificate fails")
        cols.append(tuple(wit))
    cols += list(big.syzygies())
    return FPModule(big.ring, len(big.generators), cols)


def intersection_criterion_check(A: SubmoduleOfFree, B: SubmoduleOfFree,
                                 B1: SubmoduleOfFree, A1: SubmoduleOfFree
                                 ) -> IntersectionCriterionResult:
    """Check, by two independent routes, whether B/A -> B1/A1 is injective.

    Requires A <= B <= B1 and A <= A1 <= B1. Returns whether the induced map
    on quotients is a monomorphism, and whether A equals A1 intersect B; the
    two booleans agree on every valid input.
    """
    for sub, sup, what in ((A, B, "A in B"), (B, B1, "B in B1"),
                           (A, A1, "A in A1"), (A1, B1, "A1 in B1")):
        if not sup.contains_submodule(sub):
            raise InputError(f"inclusion certificate fails: {what}")
    Q = _quotient_presentation(B, A)
    Q1 = _quotient_presentation(B1, A1)
    cols = []
    for g in B.generators:
        wit = B1.witness(g)
        cols.append(tuple(wit))
    h = ModuleMap(Q, Q1, cols)
    mono = h.kernel_is_zero()
    inter = A1.intersect(B)
    equal = inter.contains_submodule(A) and A.contains_submodule(inter)
    return IntersectionCriterionResult(mono, equal, h)
