import pytest

from gproj import (
    GF,
    QQ,
    FPModule,
    ModuleMap,
    NotRegularOnQuotient,
    PolyRing,
    SubmoduleOfFree,
    free_resolution,
    horseshoe_resolution,
    infinite_pd_detector,
    module_over_cover,
    pd_bounded,
    polynomial_ring,
    truncation_sequence,
    verify_exactness,
    verify_short_exact,
)
from gproj.modules import mat_vec

from helpers import ring_elements, span_of_columns, vector_space


def R4():
    return PolyRing(GF(2), ("x",)).quotient(["x^2"])


def QxQ():
    return polynomial_ring(QQ, ("x",))


# ----- basic resolutions -----

def test_flagship_periodic_resolution():
    R = R4()
    I = FPModule(R, 1, [(R.poly("x"),)])
    res = free_resolution(I, 6)
    assert all([[str(p) for p in c] for c in m] == [["x"]] for m in res.maps)
    assert res.periodicity == (0, 1)
    assert verify_exactness(res)


def test_free_module_length_zero():
    res = free_resolution(FPModule.free(R4(), 3), 5)
    assert res.ranks == [3, 0]
    assert verify_exactness(res)


def test_koszul_resolution_of_residue_field():
    Qx = QxQ()
    k = FPModule(Qx, 1, [(Qx.poly("x"),)])
    res = free_resolution(k, 5)
    assert res.ranks == [1, 1, 0]
    assert [[str(p) for p in c] for c in res.maps[0]] == [["x"]]
    assert verify_exactness(res)
    assert res.periodicity is None


def test_resolution_homology_cross_checked_by_enumeration():
    R = R4()
    elements = ring_elements(R)
    M = FPModule(R, 2, [(R.poly("x"), R.one()), (R.zero(), R.poly("x"))])
    res = free_resolution(M, 4)
    assert verify_exactness(res)
    ranks = res.ranks
    for s in range(len(res.maps) - 1):
        d, d_next = res.maps[s], res.maps[s + 1]
        if not d or ranks[s + 1] > 5 or ranks[s + 2] > 5:
            continue
        kernel = {v for v in vector_space(R, ranks[s + 1], elements)
                  if all(p.is_zero() for p in mat_vec(R, list(d), v))}
        image = span_of_columns(R, ranks[s + 1], d_next, elements)
        assert kernel == image


# ----- pd verdicts -----

def test_pd_examples():
    R = R4()
    Qx = QxQ()
    assert str(pd_bounded(FPModule.free(R, 1), 4)) == "Finite(0)"
    k = FPModule(Qx, 1, [(Qx.poly("x"),)])
    assert str(pd_bounded(k, 4)) == "Finite(1)"
    I = FPModule(R, 1, [(R.poly("x"),)])
    assert str(pd_bounded(I, 8)) == "InfinitePeriodic(0,1)"


def test_pd_finite_splitting_is_a_real_retraction():
    Qx = QxQ()
    # redundant presentation of a free module: one generator killed by a unit
    M = FPModule.from_strings(Qx, 2, [["1"], ["0"]])
    verdict = pd_bounded(M, 4)
    assert verdict.kind == "finite" and verdict.n == 0
    H = verdict.splitting
    U = M.canonical_relations
    # U*H*U = U certifies the retraction
    R = Qx
    w, q = len(U), M.ngens
    for l in range(w):
        col = U[l]
        hu = [sum((H[i][j] * col[j] for j in range(q)), R.base.zero())
              for i in range(w)]
        uhu = [sum((U[i][a] * hu[i] for i in range(w)), R.base.zero())
               for a in range(q)]
        assert [R.nf(p) for p in uhu] == list(col)


def test_periodicity_soundness_two_extra_periods():
    R = R4()
    I = FPModule(R, 1, [(R.poly("x"),)])
    verdict = pd_bounded(I, 4)
    assert verdict.kind == "infinite_periodic"
    s, p = verdict.start, verdict.period
    longer = free_resolution(I, 4 + 2 * p)
    for step in range(s, s + 2 * p):
        assert longer.maps[step] == longer.maps[step + p]


def test_pd_shift_under_regular_quotient():
    # modules over k[x]/(x) have pd 0; viewed over k[x] they have pd 1
    for field in (QQ, GF(3)):
        Qx = polynomial_ring(field, ("x",))
        k_ring = Qx.base.quotient(["x"])
        instances = [
            FPModule.free(k_ring, 1),
            FPModule.free(k_ring, 2),
            FPModule.from_strings(k_ring, 2, [["1"], ["0"]]),
            FPModule.free(k_ring, 3),
            FPModule.from_strings(k_ring, 1, [[]]),
        ]
        for M in instances:
            below = pd_bounded(M, 3)
            assert below.kind == "finite" and below.n == 0
            lifted = module_over_cover(M, Qx)
            above = pd_bounded(lifted, 3)
            assert above.kind == "finite" and above.n == below.n + 1


# ----- the square-zero detector -----

def test_detector_accepts_flagship():
    R = R4()
    cert = infinite_pd_detector(R, R.poly("x"))
    assert cert.accepted and cert.spd_is_infinite
    assert cert.resolution.periodicity == (0, 1)
    assert str(cert.verdict) == "InfinitePeriodic(0,1)"


def test_detector_rejects_when_square_nonzero():
    R = PolyRing(GF(2), ("x",)).quotient(["x^3"])
    cert = infinite_pd_detector(R, R.poly("x"))
    assert not cert.accepted
    assert any("a^2" in f for f in cert.failures)


def test_detector_rejects_zero():
    cert = infinite_pd_detector(R4(), R4().zero())
    assert not cert.accepted
    assert cert.failures == ("a = 0",)


def test_detector_rejects_when_annihilator_too_big():
    # in GF(2)[x,y]/(x^2, x*y), ann(x) = (x, y) is strictly larger than (x)
    R = PolyRing(GF(2), ("x", "y")).quotient(["x^2", "x*y"])
    cert = infinite_pd_detector(R, R.poly("x"))
    assert not cert.accepted
    assert any("outside" in f for f in cert.failures)


# ----- three-term sequences -----

def test_truncation_sequence_flagship_example():
    S = QxQ()
    M = SubmoduleOfFree(S, 2, [(S.poly("x"), S.one())])
    seq = truncation_sequence(M)
    assert seq.k == 2
    assert seq.A.is_zero()
    assert seq.B.ngens == 1 and not seq.B.relations
    assert seq.exactness.ok
    # psi is an isomorphism here
    assert seq.psi.kernel_is_zero() and seq.psi.cokernel_is_zero()


def test_truncation_sequence_full_module():
    S = QxQ()
    M = SubmoduleOfFree(S, 1, [(S.one(),)])
    seq = truncation_sequence(M)
    assert seq.k == 1
    assert seq.A.is_zero()
    assert seq.B.ngens == 1
    assert seq.exactness.ok


def test_truncation_sequence_rejects_torsion_quotient():
    S = QxQ()
    M = SubmoduleOfFree(S, 1, [(S.poly("x"),)])
    with pytest.raises(NotRegularOnQuotient):
        truncation_sequence(M)


def test_truncation_sequence_nontrivial_A():
    # a redundant degree-3 generator forces k = 4 and a nonzero A
    S = QxQ()
    M = SubmoduleOfFree(S, 2, [(S.poly("x"), S.one()),
                               (S.poly("x^3"), S.poly("x^2"))])
    seq = truncation_sequence(M)
    assert seq.exactness.ok
    assert seq.k == 4
    assert not seq.A.is_zero()
    assert seq.phi.kernel_is_zero()


# ----- horseshoe -----

def _inclusion_of_ideal(R, elem):
    """0 -> (elem) -> R -> R/(elem) -> 0 as certified maps."""
    sub = FPModule(R, 1, list(
        SubmoduleOfFree(R, 1, [(elem,)]).syzygies()))
    mid = FPModule.free(R, 1)
    quo = FPModule(R, 1, [(elem,)])
    incl = ModuleMap(sub, mid, [(elem,)])
    proj = ModuleMap(mid, quo, [(R.one(),)])
    return incl, proj


def test_horseshoe_over_domain():
    Qx = QxQ()
    incl, proj = _inclusion_of_ideal(Qx, Qx.poly("x"))
    assert verify_short_exact(incl, proj).ok
    result = horseshoe_resolution(incl, proj, 4)
    assert verify_exactness(result.resolution)
    assert result.augmentation.cokernel_is_zero()
    # kernel of the augmentation equals the image of the first differential
    kernel_gens = result.augmentation.kernel_preimage_generators()
    first = result.resolution.maps[0]
    from gproj.modules import SubmoduleEngine
    eng = SubmoduleEngine(Qx, result.resolution.module.ngens, list(first))
    assert all(eng.contains(g) for g in kernel_gens)


def test_horseshoe_two_of_three_on_chain_ring():
    R = R4()
    incl, proj = _inclusion_of_ideal(R, R.poly("x"))
    assert verify_short_exact(incl, proj).ok
    result = horseshoe_resolution(incl, proj, 5)
    assert verify_exactness(result.resolution)


def test_horseshoe_split_sequence():
    R = R4()
    A = FPModule(R, 1, [(R.poly("x"),)])
    C = FPModule.free(R, 1)
    B = A.direct_sum(C)
    incl = ModuleMap(A, B, [(R.one(), R.zero())])
    proj = ModuleMap(B, C, [(R.zero(),), (R.one(),)])
    result = horseshoe_resolution(incl, proj, 4)
    assert verify_exactness(result.resolution)
