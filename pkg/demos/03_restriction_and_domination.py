"""The two order relations with their constructive witnesses.

Restriction compares values: m is a restriction of n when they agree on
the support of m.  Domination only compares supports: the witness
s = f(n*n) n* rescales whatever values m carries.  Ball witnesses
strengthen a domination witness into a positive contraction, and the
predomain interpolant squeezes a whole family below a common element.
"""

from twistalg import (
    ball_witness,
    certify_domination,
    cstar_norm,
    dominated_approximation,
    dominates,
    interpolate,
    predomain_interpolant,
    restriction_le,
    standard_contexts,
)

r2 = standard_contexts()["R2"]

print("== restriction compares values ==")
two_point = r2.delta("(1,2)") + r2.delta("(2,1)")
print("d12 below d12 + d21:", restriction_le(r2.delta("(1,2)"), two_point))
print("2 d12 below d12:    ", restriction_le(2 * r2.delta("(1,2)"), r2.delta("(1,2)")))

print()
print("== domination compares supports, with an explicit witness ==")
m = r2.delta("(1,1)")
n = r2.delta("(1,1)") + r2.delta("(2,2)")
w = dominates(m, n)
print("witness s for d11 < d11 + d22:", w.s)
print("certificate residual:", w.residual)
print("2 d12 dominated by d12 (values differ):",
      dominates(2 * r2.delta("(1,2)"), r2.delta("(1,2)")) is not None)

print()
print("== interpolation inserts an intermediate element ==")
w11 = certify_domination(m, r2.delta("(1,1)"), r2.one())
l = interpolate(m, r2.one(), w11)
print("between d11 and the unit:", l, "(the untouched fiber is cut)")

print()
print("== dominated approximation truncates small coefficients ==")
n = r2.element({"(1,2)": 1.0, "(2,1)": 0.3})
result = dominated_approximation(n, 15)
print("element:", n)
print("first truncation:", result.elements[0])
print("stabilizes at index:", result.stabilization_index)

print()
print("== ball witnesses are positive contractions ==")
target = r2.delta("(1,1)") + r2.delta("(2,2)")
t = ball_witness(m, target)
print("t =", t)
print("|t n| =", cstar_norm(t * target), "<= 1")

print()
print("== predomain interpolant for a family ==")
l = predomain_interpolant([r2.delta("(1,1)"), r2.delta("(2,2)")], r2.one())
print("family {d11, d22} below the unit interpolates through:", l)
