"""Free resolutions by iterated syzygies, pd verdicts, and sequence builders.

Resolutions are chains of column-major matrices d_1, d_2, ... with
F_0 = R^{ngens} surjecting onto the module and columns of d_{s+1} generating
the kernel of d_s. Every matrix is the canonical (reduced-basis) generating
set of its syzygy module, so equal presentations repeat verbatim and
periodicity detection is a literal matrix comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import InputError, NotRegularOnQuotient
from .modules import (
    Column,
    FPModule,
    ModuleMap,
    SubmoduleEngine,
    SubmoduleOfFree,
    _unit_column,
    _zero_column,
    annihilator_of_element,
    intersect_with_truncation,
    is_regular_element,
    mat_vec,
    polynomial_extension,
    shrink_ring,
    window_vector_to_ambient,
)
from .rings import Poly, QuotRing, embed_poly, format_poly


@dataclass(frozen=True)
class FreeResolution:
    """F_depth -> ... -> F_1 -> F_0 (->> module), maps as column lists."""

    module: FPModule
    maps: tuple  # maps[s] = d_{s+1}: F_{s+1} -> F_s, a tuple of columns
    verified_depth: int
    periodicity: Optional[tuple[int, int]]  # (start s, period p)

    @property
    def ranks(self) -> list[int]:
        out = [self.module.ngens]
        for m in self.maps:
            out.append(len(m))
        return out

    def syzygy_module(self, n: int) -> FPModule:
        """The n-th syzygy as an abstract f.p. module (n = 0 gives the module)."""
        if n == 0:
            return self.module
        if n > len(self.maps):
            raise InputError(f"resolution too short for syzygy {n}")
        gens = len(self.maps[n - 1])
        rels = self.maps[n] if n < len(self.maps) else \
            _syzygy_columns(self.module.ring, self.ranks[n - 1], self.maps[n - 1])
        return FPModule(self.module.ring, gens, rels)

    def report_lines(self) -> list[str]:
        lines = [f"module gens = {self.module.ngens}"]
        for s, m in enumerate(self.maps):
            rows = self.ranks[s]
            lines.append(f"step {s + 1}: {rows} x {len(m)}")
            for i in range(rows):
                lines.append("  [" + ", ".join(format_poly(col[i]) for col in m) + "]")
        lines.append(f"verified_depth = {self.verified_depth}")
        if self.periodicity:
            lines.append(f"periodicity = (start {self.periodicity[0]}, "
                         f"period {self.periodicity[1]})")
        else:
            lines.append("periodicity = none")
        return lines


def _syzygy_columns(R: QuotRing, rank: int, columns) -> tuple[Column, ...]:
    if not columns:
        return ()
    return SubmoduleEngine(R, rank, list(columns)).syzygies()


def _find_periodicity(maps) -> Optional[tuple[int, int]]:
    n = len(maps)
    for s in range(n):
        for p in range(1, n - s):
            if maps[s] == maps[s + p] and maps[s]:
                return (s, p)
    return None


def free_resolution(M: FPModule, depth: int) -> FreeResolution:
    """Resolve to the requested depth by iterated syzygy computation."""
    if depth < 0:
        raise InputError("negative depth")
    R = M.ring
    maps = [M.canonical_relations]
    rank = M.ngens
    for _ in range(depth):
        current = maps[-1]
        if not current:
            break  # previous kernel was zero; the resolution has terminated
        rank_next = len(current)
        maps.append(_syzygy_columns(R, rank, current))
        rank = rank_next
    maps_t = tuple(maps)
    return FreeResolution(M, maps_t, depth, _find_periodicity(maps_t))


def verify_exactness(res: FreeResolution) -> bool:
    """Independent check: composites vanish and homology is zero at each step.

    Uses membership both ways (image inside kernel and kernel inside image),
    not the construction that produced the maps.
    """
    R = res.module.ring
    ranks = res.ranks
    maps = res.maps
    # kernel of F_0 ->> M equals the relation span
    if maps:
        for col in maps[0]:
            if not res.module.rel_span_contains(col):
                return False
        for col in res.module.relations:
            if not SubmoduleEngine(R, ranks[0], list(maps[0])).contains(col):
                return False
    for s in range(len(maps) - 1):
        d, d_next = maps[s], maps[s + 1]
        if not d:
            continue
        # composite is zero
        for col in d_next:
            image = mat_vec(R, list(d), col)
            if any(not p.is_zero() for p in image):
                return False
        # homology vanishes: every syzygy of d lies in the span of d_next
        eng = SubmoduleEngine(R, ranks[s], list(d_next)) if d_next else None
        for syz in _syzygy_columns(R, ranks[s], d):
            if eng is None or not eng.contains(syz):
                return False
    return True


# ---------------------------------------------------------------------------
# projective-dimension verdicts
# ---------------------------------------------------------------------------

class PdVerdict(NamedTuple):
    kind: str  # "finite" | "at_least" | "infinite_periodic"
    n: Optional[int]  # finite: the dimension; at_least: the checked depth
    start: Optional[int]
    period: Optional[int]
    resolution: FreeResolution
    splitting: Optional[tuple]  # retraction matrix certifying projectivity

    def __str__(self):
        if self.kind == "finite":
            return f"Finite({self.n})"
        if self.kind == "infinite_periodic":
            return f"InfinitePeriodic({self.start},{self.period})"
        return f"AtLeast({self.n})"


def split_surjection_onto_kernel(R: QuotRing, ambient_rank: int, kernel_gens
                                 ) -> Optional[tuple]:
    """Retraction of R^ambient onto the span of kernel_gens, or None.

    Solves U*H*U = U over R; a solution certifies that the cokernel of the
    inclusion is projective (the presenting surjection splits).
    """
    w = len(kernel_gens)
    if w == 0:
        return ()
    q = ambient_rank
    # unknowns H[i][j], i < w, j < q; equation vec(U H U) = vec(U)
    # column (i, j) of the linear system is vec(u_i * U[j, :])
    U_rows = [[kernel_gens[i][a] for i in range(w)] for a in range(q)]
    sys_cols = []
    for i in range(w):
        for j in range(q):
            col = []
            for a in range(q):
                for l in range(w):
                    col.append(R.mul(kernel_gens[i][a], U_rows[j][l]))
            sys_cols.append(tuple(col))
    target = []
    for a in range(q):
        for l in range(w):
            target.append(kernel_gens[l][a])
    eng = SubmoduleEngine(R, q * w, sys_cols)
    wit = eng.witness(tuple(target))
    if wit is None:
        return None
    H = [[wit[i * q + j] for j in range(q)] for i in range(w)]
    return tuple(tuple(row) for row in H)


def pd_bounded(M: FPModule, depth: int) -> PdVerdict:
    """Scan syzygies for a certified splitting; detect periodic repetition.

    Finite(n): the n-th syzygy splits off (explicit retraction found) and no
    earlier one does. InfinitePeriodic(s, p): the canonical presentation
    matrices repeat and the repeating syzygy has no splitting. AtLeast(depth)
    otherwise (a conservative lower bound).
    """
    if depth < 1:
        raise InputError("depth must be at least 1")
    R = M.ring
    res = free_resolution(M, depth + 1)
    maps = res.maps
    ranks = res.ranks
    splittings: dict[int, Optional[tuple]] = {}
    for s in range(min(depth, len(maps) - 1) + 1):
        kernel_gens = maps[s] if s < len(maps) else ()
        ambient = ranks[s]
        H = split_surjection_onto_kernel(R, ambient, list(kernel_gens))
        splittings[s] = H
        if H is not None:
            return PdVerdict("finite", s, None, None, res, H)
    if res.periodicity is not None:
        s, p = res.periodicity
        if splittings.get(s) is None:
            return PdVerdict("infinite_periodic", None, s, p, res, None)
    return PdVerdict("at_least", depth, None, None, res, None)


# ---------------------------------------------------------------------------
# the square-zero self-annihilator detector
# ---------------------------------------------------------------------------

class InfinitePdCertificate(NamedTuple):
    accepted: bool
    failures: tuple[str, ...]
    module: Optional[FPModule]  # the principal ideal, presented as R/(a)
    resolution: Optional[FreeResolution]
    verdict: Optional[PdVerdict]

    @property
    def spd_is_infinite(self) -> bool:
        return self.accepted


def infinite_pd_detector(R: QuotRing, a: Poly, depth: int = 8) -> InfinitePdCertificate:
    """Certify pd = infinity for the principal ideal of a square-zero element.

    Accepts when a != 0, a^2 = 0, and ann(a) = (a) (both inclusions checked by
    ideal membership); the ideal (a) is then R/(a) with the period-1 resolution
    multiplication-by-a forever, and no syzygy is projective.
    """
    a = R.nf(a)
    failures = []
    if a.is_zero():
        failures.append("a = 0")
        return InfinitePdCertificate(False, tuple(failures), None, None, None)
    if not R.mul(a, a).is_zero():
        failures.append("a^2 != 0")
    ann = annihilator_of_element(a, R)
    for g in ann.generators:
        if not R.ideal_contains([a], g):
            failures.append(f"ann(a) reaches outside (a): {format_poly(g)}")
            break
    if not R.ideal_contains(list(ann.generators), a):
        failures.append("a is not in ann(a)")
    if failures:
        return InfinitePdCertificate(False, tuple(failures), None, None, None)
    ideal_module = FPModule(R, 1, [(a,)])
    res = free_resolution(ideal_module, depth)
    verdict = pd_bounded(ideal_module, depth - 1)
    accepted = (verdict.kind == "infinite_periodic" and res.periodicity == (0, 1))
    if not accepted:
        failures.append("periodic certificate did not materialize")
    return InfinitePdCertificate(accepted, tuple(failures), ideal_module, res, verdict)


# ---------------------------------------------------------------------------
# short-exactness checking and the horseshoe construction
# ---------------------------------------------------------------------------

class ShortExactReport(NamedTuple):
    injective: bool
    composite_zero: bool
    kernel_in_image: bool
    surjective: bool

    @property
    def ok(self) -> bool:
        return (self.injective and self.composite_zero
                and self.kernel_in_image and self.surjective)


def verify_short_exact(incl: ModuleMap, proj: ModuleMap) -> ShortExactReport:
    """Membership-based exactness check for 0 -> A -> B -> C -> 0."""
    R = incl.source.ring
    composite = proj.compose(incl)
    composite_zero = all(
        proj.target.rel_span_contains(col) for col in composite.columns)
    injective = incl.kernel_is_zero()
    surjective = proj.cokernel_is_zero()
    # kernel of proj inside the image of incl (plus target relations of B)
    kernel_gens = proj.kernel_preimage_generators()
    eng = SubmoduleEngine(R, incl.target.ngens,
                          list(incl.columns) + list(incl.target.canonical_relations))
    kernel_in_image = all(eng.contains(g) for g in kernel_gens)
    return ShortExactReport(injective, composite_zero, kernel_in_image, surjective)


class HorseshoeResult(NamedTuple):
    resolution: FreeResolution  # of the middle, on the combined generators
    augmentation: ModuleMap  # free module on combined generators ->> middle


def horseshoe_resolution(incl: ModuleMap, proj: ModuleMap, depth: int) -> HorseshoeResult:
    """Resolution of the middle of a short exact sequence from the outer two.

    Builds F^B_s = F^A_s + F^C_s with block differentials [[a, h], [0, c]],
    solving for the correction blocks h level by level through membership
    witnesses. F^B_0 covers the middle through the returned augmentation; the
    chain can be fed to the independent exactness checker.
    """
    report = verify_short_exact(incl, proj)
    if not report.ok:
        raise InputError("the given pair of maps is not a short exact sequence")
    A, B, C = incl.source, incl.target, proj.target
    R = B.ring
    res_a = free_resolution(A, depth)
    res_c = free_resolution(C, depth)

    def a_map(s):
        return res_a.maps[s] if s < len(res_a.maps) else ()

    def c_map(s):
        return res_c.maps[s] if s < len(res_c.maps) else ()

    def a_rank(s):
        return res_a.ranks[s] if s < len(res_a.ranks) else 0

    def c_rank(s):
        return res_c.ranks[s] if s < len(res_c.ranks) else 0

    # lift each C-generator through proj
    proj_engine = SubmoduleEngine(R, C.ngens,
                                  list(proj.columns) + list(C.canonical_relations))
    beta = []
    for i in range(C.ngens):
        wit = proj_engine.witness(_unit_column(R, C.ngens, i))
        beta.append(tuple(wit[:B.ngens]))

    # h_1: correction into F^A_0 for each column of c_1
    incl_engine = SubmoduleEngine(R, B.ngens,
                                  list(incl.columns) + list(B.canonical_relations))
    h_blocks: list[list[Column]] = []
    h1 = []
    for col in c_map(0):
        v = mat_vec(R, beta, col) if beta else _zero_column(R, B.ngens)
        wit = incl_engine.witness(v)
        if wit is None:
            raise InputError("horseshoe lift failed at level 0")
        h1.append(tuple(R.neg(p) for p in wit[:A.ngens]))
    h_blocks.append(h1)

    maps = []
    for s in range(depth):
        a_cols = a_map(s)
        c_cols = c_map(s)
        ra, rc = a_rank(s), c_rank(s)
        h = h_blocks[s]
        block = []
        for col in a_cols:
            block.append(tuple(col) + _zero_column(R, rc))
        for j, col in enumerate(c_cols):
            block.append(tuple(h[j]) + tuple(col))
        maps.append(tuple(block))
        # solve the next correction block: a_s * h_{s+1} = -(h_s * c_{s+1})
        nxt = []
        if c_map(s + 1):
            solver = SubmoduleEngine(R, ra, list(a_cols)) if a_cols else None
            for col in c_map(s + 1):
                rhs = mat_vec(R, h, col) if h else _zero_column(R, ra)
                rhs = tuple(R.neg(p) for p in rhs)
                if all(p.is_zero() for p in rhs):
                    nxt.append(_zero_column(R, len(a_cols)))
                    continue
                if solver is None:
                    raise InputError("horseshoe lift failed: no free cover")
                wit = solver.witness(rhs)
                if wit is None:
                    raise InputError(f"horseshoe lift failed at level {s + 1}")
                nxt.append(tuple(wit))
        h_blocks.append(nxt)
        if not a_map(s + 1) and not c_map(s + 1):
            break
    combined_rank = A.ngens + C.ngens
    middle = FPModule(R, combined_rank, maps[0] if maps else ())
    maps_t = tuple(maps)
    res = FreeResolution(middle, maps_t, depth, _find_periodicity(maps_t))
    aug_cols = [tuple(col) for col in incl.columns] + beta
    aug = ModuleMap(FPModule.free(R, combined_rank), B, aug_cols)
    return HorseshoeResult(res, aug)


# ---------------------------------------------------------------------------
# the degree-window short exact sequence over R[x]
# ---------------------------------------------------------------------------

class TruncationSequence(NamedTuple):
    k: int
    A: FPModule  # over the base ring
    B: FPModule  # over the base ring
    phi: ModuleMap  # A[x] -> B[x]
    psi: ModuleMap  # B[x] -> M
    M: FPModule  # the submodule, presented abstractly over R[x]
    exactness: ShortExactReport


def truncation_sequence(Msub: SubmoduleOfFree, var: Optional[str] = None,
                        check_regular: bool = True) -> TruncationSequence:
    """Resolve a submodule M of F[x] by degree windows over the base ring.

    With k one more than the top generator x-degree, B = M meet F_k and
    A = M meet F_{k-1} are base-ring modules; the connecting maps
    phi(a (x) x^i) = a (x) x^{i+1} - (x a) (x) x^i and
    psi(b (x) x^i) = x^i b assemble into an exact sequence
    0 -> A[x] -> B[x] -> M -> 0, verified by membership computations.
    """
    S = Msub.ring
    base = S.base
    if var is None:
        if base.nvars == 0:
            raise InputError("ambient ring has no polynomial variable")
        var = base.variables[-1]
    idx = base._varindex[var]
    var_poly = base.var(var)
    r = Msub.ambient_rank

    if check_regular:
        N = FPModule(S, r, Msub.generators)
        if not is_regular_element(S.nf(var_poly), N):
            raise NotRegularOnQuotient(
                f"{var} is not regular on the ambient quotient")

    degrees = [max((p.degree_in(idx) for p in g if not p.is_zero()), default=0)
               for g in Msub.generators]
    k = (max(degrees) + 1) if degrees else 1

    B_sub = intersect_with_truncation(Msub, k, var)
    A_sub = intersect_with_truncation(Msub, k - 1, var)
    R = shrink_ring(S)
    B_fp = B_sub.as_fpmodule()
    A_fp = A_sub.as_fpmodule()

    A_ext = polynomial_extension(A_fp, var)
    B_ext = polynomial_extension(B_fp, var)
    M_fp = FPModule(S, len(Msub.generators), Msub.syzygies())

    # phi columns: for each A-generator a, the element a (x) x - (x a) (x) 1
    phi_cols = []
    for a_col in A_sub.generators:
        # embed the F_{k-1} window coordinates into the F_k window
        embedded = tuple(a_col) + tuple(R.zero() for _ in range(r))
        c_wit = B_sub.witness(embedded)
        shifted = tuple(R.zero() for _ in range(r)) + tuple(a_col)
        d_wit = B_sub.witness(shifted)
        if c_wit is None or d_wit is None:
            raise InputError("window intersection witnesses failed")
        col = []
        for i in range(len(B_sub.generators)):
            c_i = embed_poly(c_wit[i], base)
            d_i = embed_poly(d_wit[i], base)
            col.append(S.nf(c_i * var_poly - d_i))
        phi_cols.append(tuple(col))
    phi = ModuleMap(A_ext, B_ext, phi_cols)

    # psi columns: each B-generator, rebuilt as an ambient vector, inside M
    psi_cols = []
    M_engine = SubmoduleEngine(S, r, list(Msub.generators))
    for b_col in B_sub.generators:
        ambient = window_vector_to_ambient(b_col, r, S, var)
        wit = M_engine.witness(ambient)
        if wit is None:
            raise InputError("window generator escaped the submodule")
        psi_cols.append(tuple(wit))
    psi = ModuleMap(B_ext, M_fp, psi_cols)

    exactness = verify_short_exact(phi, psi)
    return TruncationSequence(k, A_fp, B_fp, phi, psi, M_fp, exactness)
