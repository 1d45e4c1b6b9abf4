"""Cartan semigroups: the monomial semigroup, a restricted-basis semigroup
that fails summability, and the closure under compatible sums.

The monomial semigroup of R2 is the semigroup of 2x2 matrices with at
most one nonzero entry per row and column.  Restricting supports to a
smaller basis of bisections keeps every Cartan axiom but loses
summability: the off-diagonal permutation matrix is a compatible sum of
two allowed elements yet is not itself allowed.  Closing under compatible
sums recovers the full monomial semigroup.
"""

from twistalg import (
    BisectionBasis,
    SemigroupSpec,
    check_cartan,
    compatible,
    csum_closure,
    membership,
    standard_contexts,
)
from twistalg.seeds import substream

r2 = standard_contexts()["R2"]
rng = substream(0, "demo-cartan")

mono = SemigroupSpec.monomial(r2)
report = check_cartan(mono, rng)
print("monomial semigroup on R2:")
print("  Cartan axioms:", report.cartan, " summable:", report.summable)

units = list(r2.groupoid.units)
basis = BisectionBasis(
    r2.groupoid,
    [[], units, [units[0]], [units[1]], ["(1,2)"], ["(2,1)"]],
)
restricted = SemigroupSpec.basis_restricted(r2, basis)
report = check_cartan(restricted, substream(0, "demo-basis"))
print("basis-restricted semigroup on R2:")
print("  Cartan axioms:", report.cartan, " summable:", report.summable)
print("  failing pair:", report.summable_witness)

offdiag = r2.delta("(1,2)") + r2.delta("(2,1)")
print("off-diagonal permutation element:", offdiag)
print("  monomial member:  ", membership(mono, offdiag))
print("  restricted member:", membership(restricted, offdiag))
print("  the two deltas are compatible:",
      compatible(r2.delta("(1,2)"), r2.delta("(2,1)")))

closed = csum_closure(restricted)
print("after closing under compatible sums:")
print("  member of csum closure:", membership(closed, offdiag))
agree = all(
    membership(closed, elem) == membership(mono, elem)
    for elem in (offdiag, r2.delta("(1,1)"), r2.one(), 2j * r2.delta("(2,1)"))
)
print("  csum closure agrees with the monomial semigroup:", agree)

print()
print("normalizers need not be monomial when there is isotropy:")
z4 = standard_contexts()["Z4"]
fourier = 0.5 * (z4.delta("0") + z4.delta("1") + z4.delta("2") - z4.delta("3"))
normal = SemigroupSpec.normalizers(z4)
print("  constant-modulus-spectrum element:", fourier)
print("  normalizer:", membership(normal, fourier),
      " monomial:", membership(SemigroupSpec.monomial(z4), fourier))
