"""Resolving a submodule of F[x] by degree windows over the base ring.

Given M inside a free module F[x] whose quotient is x-torsion-free, the
intersections B = M meet (F + Fx + ... + Fx^{k-1}) and A = M meet the window
one shorter are modules over the base ring, and they assemble into an exact
sequence 0 -> A[x] -> B[x] -> M -> 0 with explicit matrices.

Run with: python demos/demo_window_sequence.py
"""

from gproj import (
    QQ,
    SubmoduleOfFree,
    intersect_with_truncation,
    module_rank,
    polynomial_ring,
    truncation_sequence,
    verify_short_exact,
)

S = polynomial_ring(QQ, ("x",))
M = SubmoduleOfFree(S, 2, [(S.poly("x"), S.one())])
print("M = the submodule of QQ[x]^2 generated by (x, 1)")

print()
print("== window intersections ==")
one = intersect_with_truncation(M, 1)
print("M meet F_1 is zero:", one.is_zero())
two = intersect_with_truncation(M, 2)
print("M meet F_2 generators (degree-major coordinates):",
      [[str(p) for p in g] for g in two.generators])

print()
print("== the assembled sequence ==")
seq = truncation_sequence(M)
print("window size k =", seq.k)
print("A is zero:", seq.A.is_zero())
print("B has rank", module_rank(seq.B))
print("psi matrix (B[x] -> M):",
      [[str(p) for p in c] for c in seq.psi.columns])
print("exactness report:", seq.exactness)

print()
print("== re-checking from scratch ==")
fresh = verify_short_exact(seq.phi, seq.psi)
print("independent verification:", "exact" if fresh.ok else "NOT exact")

print()
print("== a richer example with a nonzero A ==")
M2 = SubmoduleOfFree(S, 2, [(S.poly("x"), S.one()),
                            (S.poly("x^3"), S.poly("x^2"))])
seq2 = truncation_sequence(M2)
print("k =", seq2.k, "| A generators:", seq2.A.ngens,
      "| B generators:", seq2.B.ngens,
      "| exact:", seq2.exactness.ok)
