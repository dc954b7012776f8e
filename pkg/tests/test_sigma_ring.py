import pytest
from conftest import gaussian
from hypothesis import given
from hypothesis import strategies as st
from oracles import average_on_lattice, difference_on_lattice

from bilattice.classical import PearsonPair, iterated_pair
from bilattice.errors import ContextError
from bilattice.sigma_ring import (SIGMA, LatticeContext, SigmaPoly, SigmaScalar, apply_D,
                                  apply_D_power, apply_S, expansion_coefficients, format_sigma_poly,
                                  leibniz_T, leibniz_T_closed, parse_sigma_poly)

GAMMAS = ["0", "1/3", "1/2i", "7/5", "-2/3+1/4i"]


@st.composite
def sigma_polys(draw, ctx, max_degree=5):
    even = draw(st.lists(gaussian(), max_size=max_degree + 1))
    odd = draw(st.lists(gaussian(), max_size=max_degree + 1))
    return SigmaPoly(even, odd, ctx)


@st.composite
def context_and_poly(draw, max_degree=5):
    ctx = LatticeContext(draw(gaussian()))
    return ctx, draw(sigma_polys(ctx, max_degree))


@pytest.mark.parametrize("g", GAMMAS)
def test_operator_values(g):
    ctx = LatticeContext(g)
    gamma = ctx.gamma
    z = SigmaPoly.z(ctx)
    one = SigmaPoly.constant(1, ctx)
    assert apply_D(one).is_zero()
    assert apply_S(one) == one
    assert apply_D(z * z) == z * 2 - SIGMA * (4 * gamma)
    assert apply_S(z) == z - SIGMA * (2 * gamma)
    assert apply_S(z * z) == z * z - SIGMA * z * (4 * gamma) + SigmaPoly.constant(4 * gamma * gamma + 1, ctx)


@pytest.mark.parametrize("g", GAMMAS)
def test_D_z5_top_coefficients(g):
    ctx = LatticeContext(g)
    d = apply_D(SigmaPoly.monomial(5, ctx))
    c = expansion_coefficients(5, g)
    assert d.coefficient(4) == SigmaScalar(5)
    assert d.coefficient(3) == SigmaScalar(0, -40 * ctx.gamma)
    assert (d.coefficient(2), d.coefficient(1), d.coefficient(0)) == (c["u"], c["v"], c["w"])


def test_expansion_closed_forms_at_gamma_one_third():
    # u_5 = 10 (1 + 12/9), v_5 = -(1/3) 40 (1 + 4/9) sigma, w_5 = 1 + 40/9 + 80/81
    c = expansion_coefficients(5, "1/3")
    assert c["u"] == SigmaScalar("70/3")
    assert c["v"] == SigmaScalar(0, "-520/27")
    assert c["w"] == SigmaScalar("521/81")


@pytest.mark.parametrize("g", ["1/3", "1/2i"])
def test_degree_drop(g):
    ctx = LatticeContext(g)
    for n in range(1, 12):
        d = apply_D(SigmaPoly.monomial(n, ctx))
        assert d.even.degree == n - 1
        s = apply_S(SigmaPoly.monomial(n, ctx))
        assert s.even.degree == n and s.even.lead == 1


@given(context_and_poly(), st.integers(-6, 6))
def test_operators_against_lattice_points(cp, s):
    ctx, f = cp
    g = ctx.gamma
    d, a = apply_D(f), apply_S(f)
    from oracles import value_on_lattice
    assert value_on_lattice(d.even, d.odd, s, g) == difference_on_lattice(f.even, f.odd, s, g)
    assert value_on_lattice(a.even, a.odd, s, g) == average_on_lattice(f.even, f.odd, s, g)


@given(st.data())
def test_product_and_composition_rules(data):
    ctx = LatticeContext(data.draw(gaussian()))
    f = data.draw(sigma_polys(ctx, 4))
    g = data.draw(sigma_polys(ctx, 4))
    Df, Sf, Dg, Sg = apply_D(f), apply_S(f), apply_D(g), apply_S(g)
    assert apply_D(f * g) == Df * Sg + Sf * Dg
    assert apply_S(f * g) == Df * Dg + Sf * Sg
    assert f * Sg == apply_S(g * Sf) - apply_D(g * Df)
    assert f * Dg == apply_D(g * Sf) - apply_S(g * Df)


@given(context_and_poly(), st.integers(0, 4))
def test_commutation(cp, n):
    _, f = cp
    assert apply_S(apply_S(f)) == apply_D(apply_D(f)) + f
    assert apply_S(apply_D(f)) == apply_D(apply_S(f))
    assert apply_D_power(apply_S(f), n) == apply_S(apply_D_power(f, n))


def test_sigma_flips_under_operators():
    ctx = LatticeContext("1/3")
    f = parse_sigma_poly("z^2 + 1", ctx)
    assert apply_D(SIGMA * f) == SIGMA * apply_D(f) * -1
    assert apply_S(SIGMA * f) == SIGMA * apply_S(f) * -1


@pytest.mark.parametrize("g", ["1/3", "1/2i", "0"])
@pytest.mark.parametrize("f_text", ["2z^2-z+3", "z+1/2", "5", "-1/3*z^2+2i*z"])
def test_leibniz_closed_forms(g, f_text):
    ctx = LatticeContext(g)
    f = parse_sigma_poly(f_text, ctx)
    a = f.even.coeff(2)
    assert leibniz_T(0, 0, f) == f
    for n in range(8):
        for k in range(4):
            assert leibniz_T(n, k, f) == leibniz_T_closed(n, k, f)
        assert leibniz_T(n, 2, f) == SigmaPoly.constant(a * n * (n - 1), ctx)
        assert leibniz_T(n, n + 1, f).is_zero() and leibniz_T(n, -1, f).is_zero()


@pytest.mark.parametrize("g", ["1/3", "1/2i"])
def test_T_n1_of_iterated_psi(g):
    p = PearsonPair("z^2/3+z/3+1", "2z-1", g)
    for n in range(7):
        psi_n = iterated_pair(p, n).psi
        assert leibniz_T(n, 1, psi_n) == SigmaPoly.constant(p.d_n(2 * n) * n, p.context)


def test_context_rules():
    a = SigmaPoly.z(LatticeContext("1/3"))
    b = SigmaPoly.z(LatticeContext("1/5"))
    with pytest.raises(ContextError):
        a + b
    with pytest.raises(ContextError):
        apply_D(SigmaPoly([0, 1], []))


@given(context_and_poly())
def test_text_and_json_round_trip(cp):
    ctx, f = cp
    assert parse_sigma_poly(format_sigma_poly(f), ctx) == f
    assert SigmaPoly.from_json(f.to_json()) == f


def test_text_format():
    ctx = LatticeContext("1/3")
    f = parse_sigma_poly("1 + 2*z + s*(3 - z^2)", ctx)
    assert f.even == SigmaPoly([1, 2], [], ctx).even
    assert f.odd == SigmaPoly([3, 0, -1], [], ctx).even
    assert format_sigma_poly(f) == "1 + (2)*z + s*(3 - z^2)"
