from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import gram_schmidt_table

from bilattice.classical import PearsonPair
from bilattice.errors import AdmissibilityError, SigmaResidueError, TruncationError
from bilattice.functional import (MomentFunctional, dual_D, dual_D_power, dual_S, hankel_oracle,
                                  left_mul, pair, solve_pearson_dense, solve_pearson_moments)
from bilattice.scalar import as_scalar
from bilattice.sigma_ring import SIGMA, LatticeContext, SigmaPoly, SigmaScalar, apply_D, apply_S

CTX = LatticeContext("1/3")
Q_PAIR = ("z^2+1/4-1/9-1/25", "z-2/15")


def zk(k, ctx=CTX):
    return SigmaPoly.monomial(k, ctx)


def same_pairings(a, b, top):
    return all(pair(a, zk(k, a.context)) == pair(b, zk(k, b.context)) for k in range(top + 1))


def factorial_functional(n=10):
    return MomentFunctional([factorial(k) for k in range(n + 1)], CTX)


def test_pairing_examples():
    u = factorial_functional()
    assert pair(u, 1) == SigmaScalar(1)
    assert pair(u, SIGMA) == SigmaScalar(0, 1)
    assert pair(u, SigmaPoly([0, 2, 1], [], CTX)) == SigmaScalar(4)


def test_truncation_is_an_error():
    u = factorial_functional(3)
    with pytest.raises(TruncationError):
        pair(u, zk(4))
    with pytest.raises(TruncationError):
        u.moment(4)
    with pytest.raises(TruncationError):
        left_mul(SigmaPoly([0, 0, 0, 0, 1], [], CTX), u)


def test_dual_examples():
    u = factorial_functional()
    assert pair(dual_D(u), 1).is_zero()
    assert pair(dual_S(u), 1) == u.moments[0]
    lhs = dual_D(dual_D(u)) - dual_S(dual_S(u))
    assert same_pairings(lhs, -u, 8)


def test_left_mul_loses_degree_orders():
    u = factorial_functional(10)
    assert left_mul(SigmaPoly([1, 1, 1], [], CTX), u).order == 8


def test_parity_toggles():
    u = factorial_functional()
    assert dual_D(u).parity == -1 and dual_S(u).parity == -1
    assert dual_D(dual_S(u)).parity == 1
    assert left_mul(SIGMA, dual_D(u)).parity == -1


def pearson_functional(phi, psi, g="1/3", n=14):
    return solve_pearson_moments(PearsonPair(phi, psi, g), 1, n)


@pytest.mark.parametrize("phi, psi", [Q_PAIR, ("z-2", "z"), ("z^2/3+z/3+1", "2z-1")])
def test_first_moments_formulas(phi, psi):
    p = PearsonPair(phi, psi, "1/3")
    u = solve_pearson_moments(p, 1, 4)
    a, b, c, d, e = p.a, p.b, p.c, p.d, p.e
    assert u.moments[1] == SigmaScalar(-e / d)
    assert u.moments[2] == SigmaScalar(-(-(b + e) * e / d + c) / (d + a))


# frozen: dense solve of the pairing equations for (z - 2, z) at gamma = 1/3
FROZEN_MOMENTS = [1, 0, 2, -4, 20, -96, 552, -3536, 25104]


def test_moment_table_frozen():
    u = pearson_functional("z-2", "z", n=8)
    assert u.is_sigma_free()
    assert [m.plain for m in u.moments] == [as_scalar(x) for x in FROZEN_MOMENTS]


@pytest.mark.parametrize("g", ["0", "1/3", "1/2i", "7/5"])
@pytest.mark.parametrize("phi, psi", [Q_PAIR, ("z-2", "z"), ("3", "z+2"), ("z^2+7/4", "2z-i")])
def test_forward_solver_matches_dense_solver(phi, psi, g):
    p = PearsonPair(phi, psi, g)
    u = solve_pearson_moments(p, 1, 10)
    assert u == solve_pearson_dense(p, 1, 10)
    assert u.is_sigma_free()


def test_pearson_equation_holds():
    p = PearsonPair(*Q_PAIR, "1/2i")
    u = solve_pearson_moments(p, 1, 14)
    assert same_pairings(dual_D(left_mul(p.phi, u)), dual_S(left_mul(p.psi, u)), 12)


def test_admissibility_failure_reports_index():
    # d_n = -n/3 + 1 vanishes at n = 3
    with pytest.raises(AdmissibilityError) as info:
        solve_pearson_moments(PearsonPair("-z^2/3+1", "z"), 1, 8)
    assert info.value.index == 3


@pytest.mark.parametrize("g", ["1/3", "1/2i"])
def test_duality_identities(g):
    ctx = LatticeContext(g)
    u = pearson_functional(*Q_PAIR, g=g, n=16)
    f = SigmaPoly([3, -1, 2], [-1, 1], ctx)
    Sf, Df = apply_S(f), apply_D(f)
    top = 10
    assert same_pairings(dual_D(left_mul(f, u)), left_mul(Sf, dual_D(u)) + left_mul(Df, dual_S(u)), top)
    assert same_pairings(dual_S(left_mul(f, u)), left_mul(Sf, dual_S(u)) + left_mul(Df, dual_D(u)), top)
    assert same_pairings(left_mul(f, dual_D(u)), dual_D(left_mul(Sf, u)) - dual_S(left_mul(Df, u)), top)
    assert same_pairings(left_mul(f, dual_S(u)), dual_S(left_mul(Sf, u)) - dual_D(left_mul(Df, u)), top)
    for n in range(4):
        assert same_pairings(dual_D_power(dual_S(u), n), dual_S(dual_D_power(u, n)), top)


def test_hankel_examples():
    delta = MomentFunctional([1] + [0] * 8, CTX)
    assert hankel_oracle(delta, 3).regular_up_to == 0
    u = pearson_functional("z-2", "z")
    report = hankel_oracle(u, 6)
    assert report.table.C[0] == 2            # C_1 = -phi(0) = b
    assert list(report.table.B) == [as_scalar(-2 * n) for n in range(7)]
    assert list(report.table.C) == [as_scalar(2 * (n + 1)) for n in range(6)]


def test_hankel_rejects_sigma_moments_and_short_tables():
    u = MomentFunctional([SigmaScalar(1), SigmaScalar(0, 1), SigmaScalar(2)], CTX)
    with pytest.raises(SigmaResidueError):
        hankel_oracle(u, 1)
    with pytest.raises(TruncationError):
        hankel_oracle(factorial_functional(5), 3)


@pytest.mark.parametrize("phi, psi", [Q_PAIR, ("2z+1", "z"), ("z^2/3+z/3+1", "2z-1")])
def test_hankel_agrees_with_gram_schmidt(phi, psi):
    u = pearson_functional(phi, psi, n=13)
    report = hankel_oracle(u, 6)
    B, C = gram_schmidt_table([m.plain for m in u.moments], 5)
    assert list(report.table.B[:6]) == B and list(report.table.C[:5]) == C


@given(st.lists(st.integers(-5, 5), min_size=3, max_size=8))
def test_json_round_trip(values):
    u = MomentFunctional([SigmaScalar(v, v % 3) for v in values], CTX, parity=-1)
    assert MomentFunctional.from_json(u.to_json()) == u


@given(st.lists(st.fractions(-5, 5, max_denominator=4), min_size=6, max_size=6),
       st.lists(st.fractions(-5, 5, max_denominator=4), min_size=6, max_size=6))
def test_pairing_is_linear(a, b):
    u = factorial_functional(6)
    f, g = SigmaPoly(a, b[:3], CTX), SigmaPoly(b, a[:2], CTX)
    assert pair(u, f + g) == pair(u, f) + pair(u, g)
    assert pair(u, f * 3) == pair(u, f) * as_scalar(3)
