"""A walk through the ring layer: Groebner bases, normal forms, membership.

Run with: python demos/demo_ring_basics.py
"""

from gproj import GF, QQ, Ideal, PolyRing, groebner_basis

print("== Groebner bases ==")
P = PolyRing(QQ, ("x",), "lex")
gb = groebner_basis([P.poly("x^2-1"), P.poly("x^3-1")], P)
print("reduced basis of (x^2-1, x^3-1) in QQ[x], lex:", [str(g) for g in gb])
print("  (the univariate case recovers the gcd)")

P2 = PolyRing(QQ, ("x", "y"), "lex")
gb2 = groebner_basis([P2.poly("x^2"), P2.poly("x*y")], P2)
print("reduced basis of (x^2, x*y), lex with x > y:", [str(g) for g in gb2])

print()
print("== Quotient rings and normal forms ==")
R = PolyRing(GF(2), ("x",)).quotient(["x^2"])
print("the ring GF(2)[x]/(x^2) has four elements: 0, 1, x, x+1")
f = R.base.poly("x+1") ** 2
print("(x+1)^2 reduces to:", R.nf(f))
print("x^2 reduces to:", R.nf(R.base.poly("x^2")))

print()
print("== Ideal membership ==")
ideal = Ideal(P, [P.poly("x^2-1"), P.poly("x^3-1")])
for probe in ("x^3", "x-1", "x^2+x-2", "1"):
    verdict = ideal.contains(P.poly(probe))
    print(f"  {probe} in (x^2-1, x^3-1)? {verdict}")

print()
print("== Monomial orders matter ==")
for order in ("grevlex", "lex"):
    ring = PolyRing(QQ, ("x", "y"), order)
    p = ring.poly("x*y^2 + x^2")
    print(f"  leading monomial of x*y^2 + x^2 under {order}: "
          f"exponents {p.lead_monomial()}")
