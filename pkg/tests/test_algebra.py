import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistalg import (
    Cocycle,
    InputError,
    Phase,
    TwistedAlgebra,
    check_reduced_norm_formula,
    cstar_norm,
    diagonal,
    regular_representation,
)
from twistalg.algebra import max_coeff_diff
from twistalg.groupoid import klein_four
from twistalg.seeds import substream
from twistalg.semigroups import random_element


def brute_convolution(ctx, a, b):
    """Independent oracle: the defining double sum, no sparsity tricks."""
    out = {}
    for h in ctx.groupoid.elements:
        for k in ctx.groupoid.elements:
            g = ctx.groupoid.product(h, k)
            if g is None:
                continue
            out[g] = out.get(g, 0j) + ctx.cocycle(h, k).complex * a.coeff(h) * b.coeff(k)
    return ctx.element(out)


def test_unit_delta_idempotent(r2):
    du = r2.delta("(1,1)")
    assert max_coeff_diff(du * du, du) == 0


def test_matrix_unit_product(r2):
    prod = r2.delta("(1,2)") * r2.delta("(2,1)")
    assert prod.coeffs == {"(1,1)": 1 + 0j}
    oracle = brute_convolution(r2, r2.delta("(1,2)"), r2.delta("(2,1)"))
    assert max_coeff_diff(prod, oracle) == 0


def test_pauli_anticommutation(v4_pauli):
    lhs = v4_pauli.delta("01") * v4_pauli.delta("10")
    rhs = v4_pauli.delta("10") * v4_pauli.delta("01")
    assert lhs.coeffs == {"11": -1 + 0j}
    assert rhs.coeffs == {"11": 1 + 0j}


def test_convolution_matches_brute_force(r3, v4_pauli, rng):
    for ctx in (r3, v4_pauli):
        for _ in range(25):
            a, b = random_element(ctx, rng), random_element(ctx, rng)
            assert max_coeff_diff(a * b, brute_convolution(ctx, a, b)) < 1e-12


def test_involution_examples(r2):
    v = (2 - 3j) * r2.delta("(1,1)")
    assert v.star().coeffs == {"(1,1)": 2 + 3j}
    assert r2.delta("(1,2)").star().coeffs == {"(2,1)": 1 + 0j}


def test_involution_involutive_and_antimultiplicative(r3, v4_pauli, rng):
    for ctx in (r3, v4_pauli):
        for _ in range(100):
            a, b = random_element(ctx, rng), random_element(ctx, rng)
            assert max_coeff_diff(a.star().star(), a) < 1e-12
            assert max_coeff_diff((a * b).star(), b.star() * a.star()) < 1e-12


def test_diagonal_examples(z4):
    assert diagonal(z4.delta("0")).coeffs == {"0": 1 + 0j}
    assert diagonal(z4.delta("1")).is_zero()
    a = 3 * z4.delta("0") + 1j * z4.delta("1")
    assert diagonal(a).coeffs == {"0": 3 + 0j}


def test_diagonal_linear_idempotent_positive(r3, rng):
    for _ in range(50):
        a, b = random_element(r3, rng), random_element(r3, rng)
        assert max_coeff_diff(diagonal(a + b), diagonal(a) + diagonal(b)) < 1e-12
        assert max_coeff_diff(diagonal(diagonal(a)), diagonal(a)) < 1e-12
        ea = diagonal(a.star() * a)
        assert all(c.real > -1e-12 and abs(c.imag) < 1e-12 for c in ea.coeffs.values())
        assert cstar_norm(diagonal(a)) <= cstar_norm(a) + 1e-9


def test_regular_representation_projection(r2):
    image = regular_representation(r2.delta("(1,1)"))
    for u, fiber in image.basis.items():
        m = image.blocks[u]
        expected = np.diag([1.0 if r2.groupoid.range[h] == "(1,1)" else 0.0 for h in fiber])
        assert np.abs(m - expected).max() == 0


def test_regular_representation_block_action(r2):
    # in the source fiber of unit (1,1), delta_(2,1) maps xi_(1,1) to xi_(2,1)
    image = regular_representation(r2.delta("(2,1)"))
    fiber = image.basis["(1,1)"]
    m = image.blocks["(1,1)"]
    i_11, i_21 = fiber.index("(1,1)"), fiber.index("(2,1)")
    expected = np.zeros((2, 2))
    expected[i_21, i_11] = 1.0
    assert np.abs(m - expected).max() == 0


def test_pauli_image_is_full_matrix_algebra(v4_pauli):
    """Oracle: the explicit two-dimensional projective representation
    u_(a,b) = X^a Z^b with the same sign rule."""
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    z = np.array([[1, 0], [0, -1]], dtype=complex)
    u = {"00": np.eye(2, dtype=complex), "01": z, "10": x, "11": x @ z}
    for g in v4_pauli.groupoid.elements:
        for h in v4_pauli.groupoid.elements:
            prod = v4_pauli.delta(g) * v4_pauli.delta(h)
            ((gh, coeff),) = prod.coeffs.items()
            assert np.abs(u[g] @ u[h] - coeff * u[gh]).max() < 1e-12
    # the regular image spans a four-dimensional algebra with trivial center
    mats = [regular_representation(v4_pauli.delta(g)).blocks["00"] for g in
            v4_pauli.groupoid.elements]
    stack = np.array([m.ravel() for m in mats])
    assert np.linalg.matrix_rank(stack) == 4
    commutes_with_all = []
    for cand in mats:
        if all(np.abs(cand @ m - m @ cand).max() < 1e-12 for m in mats):
            commutes_with_all.append(cand)
    assert len(commutes_with_all) == 1  # identity only


def test_norm_examples(r2, contexts):
    for name, ctx in contexts.items():
        for g in ctx.groupoid.elements:
            assert abs(cstar_norm(ctx.delta(g)) - 1) < 1e-12, (name, g)
    assert abs(cstar_norm(r2.delta("(1,2)") + r2.delta("(2,1)")) - 1) < 1e-12


def test_norm_is_sup_norm_on_monomials(contexts, rng):
    # on bisection-supported elements the C*-norm is the largest coefficient
    from twistalg.semigroups import random_monomial

    for name, ctx in contexts.items():
        for _ in range(30):
            n = random_monomial(ctx, rng)
            assert abs(cstar_norm(n) - n.sup_coeff()) < 1e-12, name


def test_cstar_identity_random(r3, rng):
    for _ in range(100):
        a = random_element(r3, rng)
        z = complex(rng.normal(), rng.normal())
        assert abs(cstar_norm(a.star() * a) - cstar_norm(a) ** 2) < 1e-9
        assert abs(cstar_norm(z * a) - abs(z) * cstar_norm(a)) < 1e-9


def test_norm_faithful(r3, v4_pauli, rng):
    for ctx in (r3, v4_pauli):
        for g in ctx.groupoid.elements:
            assert cstar_norm(ctx.delta(g)) > 0.5
        for _ in range(25):
            a = random_element(ctx, rng)
            if cstar_norm(a) < 1e-12:
                assert a.is_zero(1e-12)


def test_reduced_norm_formula_unit(r2):
    rep = check_reduced_norm_formula(r2.delta("(1,1)"), trials=50)
    assert abs(rep["monte_carlo_best"] - 1) < 1e-6
    assert rep["upper_bound_ok"]


def test_reduced_norm_formula_zero(r2):
    rep = check_reduced_norm_formula(r2.zero(), trials=10)
    assert rep["operator_norm"] == 0 and rep["monte_carlo_best"] == 0


def test_reduced_norm_formula_gap_r3(r3):
    a = random_element(r3, substream(42, "norm-formula"))
    rep = check_reduced_norm_formula(a, trials=500, rng=substream(42, "norm-mc"))
    assert rep["upper_bound_ok"]
    assert rep["gap"] <= 0.05


def test_exact_star_identity_on_basis(contexts):
    """(delta_g delta_h)* = delta_h* delta_g* with exact phase arithmetic."""
    for ctx in contexts.values():
        gpd = ctx.groupoid
        for g, h in gpd.compose:
            sigma, gh = ctx.delta_product(g, h)
            lhs_phase = sigma.conj() * ctx.delta_star(gh)[0]
            ph, hinv = ctx.delta_star(h)
            pg, ginv = ctx.delta_star(g)
            prod = ctx.delta_product(hinv, ginv)
            assert prod is not None
            rhs_phase = ph * pg * prod[0]
            assert prod[1] == ctx.delta_star(gh)[1]
            assert lhs_phase.turns == rhs_phase.turns


def test_exact_associativity_on_basis(v4_pauli):
    gpd = v4_pauli.groupoid
    for g, h, k in itertools.product(gpd.elements, repeat=3):
        if not (gpd.composable(g, h) and gpd.composable(h, k)):
            continue
        p1, gh = v4_pauli.delta_product(g, h)
        p2, ghk = v4_pauli.delta_product(gh, k)
        q1, hk = v4_pauli.delta_product(h, k)
        q2, ghk2 = v4_pauli.delta_product(g, hk)
        assert ghk == ghk2
        assert (p1 * p2).turns == (q1 * q2).turns


@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                min_size=4, max_size=4),
       st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                min_size=4, max_size=4),
       st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                min_size=4, max_size=4))
@settings(max_examples=60, deadline=None)
def test_associativity_property(xs, ys, zs):
    ctx = TwistedAlgebra(klein_four("V4_prop"), name="V4_prop")
    from twistalg.algebra import pauli_cocycle

    g4 = klein_four("V4_prop_tw")
    tw = TwistedAlgebra(g4, pauli_cocycle(g4), name="V4_prop_tw")
    for c in (ctx, tw):
        elems = c.groupoid.elements
        a = c.element(dict(zip(elems, xs)))
        b = c.element(dict(zip(elems, ys)))
        d = c.element(dict(zip(elems, zs)))
        scale = max(a.sup_coeff() * b.sup_coeff() * d.sup_coeff(), 1.0)
        assert max_coeff_diff((a * b) * d, a * (b * d)) <= 1e-9 * scale


def test_phase_arithmetic_exact():
    i = Phase.of(1, 4)
    assert (i * i).turns.numerator == 1 and (i * i).turns.denominator == 2
    assert (i * i).complex == -1
    assert i.conj().complex == -1j
    assert Phase.from_complex(-1j).turns == Phase.of(3, 4).turns
    with pytest.raises(InputError):
        Phase.from_complex(0.5 + 0j)


def test_cocycle_violations_rejected():
    g4 = klein_four("V4_bad")
    # a single sign entry breaks the cocycle identity
    bad = Cocycle(g4, {("01", "10"): Phase.of(1, 2)})
    assert bad.violations()
    with pytest.raises(InputError):
        TwistedAlgebra(g4, bad)


def test_cocycle_rejects_noncomposable_pairs(r2):
    with pytest.raises(InputError):
        Cocycle(r2.groupoid, {("(1,2)", "(1,2)"): Phase.of(1, 2)})


def test_context_mismatch_rejected(r2, r3):
    with pytest.raises(InputError):
        r2.delta("(1,1)") + r3.delta("(1,1)")


def test_one_is_exact_unit(r3, rng):
    unit = r3.one()
    for _ in range(20):
        a = random_element(r3, rng)
        assert max_coeff_diff(unit * a, a) < 1e-12
        assert max_coeff_diff(a * unit, a) < 1e-12
