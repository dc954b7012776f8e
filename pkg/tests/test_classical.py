import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from oracles import gram_schmidt_table

from bilattice.classical import (PearsonPair, admissible, derivative_ops, derived_functional,
                                 generate_ops, iterated_pair, k_factor, recurrence_coeffs,
                                 regular, rodrigues)
from bilattice.errors import RegularityError, SigmaResidueError
from bilattice.families import H, Q, family_recurrence, pair_from_descriptor
from bilattice.functional import (dual_D, dual_S, hankel_oracle, left_mul, pair,
                                  solve_pearson_dense, solve_pearson_moments)
from bilattice.poly import Poly
from bilattice.scalar import as_scalar, root_of
from bilattice.sigma_ring import SigmaPoly, apply_S
from bilattice.table import RecurrenceTable


def scalars(xs):
    return [as_scalar(x) for x in xs]


def test_admissible_examples():
    assert admissible(PearsonPair("z-2", "z"), 50).ok
    v = admissible(PearsonPair("-z^2/3+1", "z"), 10)
    assert not v.ok and v.failed_at == 3
    # Q-pair with a = 1/2: d_n = n + 1/2
    assert admissible(pair_from_descriptor(Q("1/2", "1/3", "1/5")), 50).ok


def test_regular_examples():
    for b in (2, -1, "1/2i"):
        assert regular(PearsonPair(f"z-({b})", "z", "1/3"), 12).ok
    v = regular(PearsonPair("z", "z", "0"), 3)
    assert not v.ok and v.failed_at == 0 and v.message == "condition 2 fails at n=0"


def test_para_krawtchouk_preimage_regularity():
    # the pair of Q(-2, 1/4, 0) has d = -4 and a = 1, so d_4 = 0 already at step n = 2
    p = pair_from_descriptor(Q(-2, "1/4", 0))
    v = regular(p, 6)
    assert not v.ok and v.failed_at == 2 and v.index == 4
    table = recurrence_coeffs(p, 8, formal=True)
    assert table.checked_to == 5
    assert list(table.B) == scalars([0] * 6)
    assert list(table.C) == scalars(["21/16", "5/2", "9/16", "5/2", "21/16"])
    assert table.same_coefficients(family_recurrence(Q(-2, "1/4", 0), 8))


def test_strict_mode_refuses_irregular_pair():
    with pytest.raises(RegularityError) as info:
        recurrence_coeffs(PearsonPair("2z+6", "z", "1/3"), 5)
    assert info.value.index == 2


# frozen: Gram-Schmidt on dense-solved Pearson moments at gamma = 1/3
FROZEN = {
    ("z-2", "z"): (["0", "-2", "-4", "-6", "-8", "-10"], ["2", "4", "6", "8", "10"]),
    ("2z+1", "z"): (["0", "-4", "-8", "-12", "-16", "-20"], ["-1", "4", "15", "32", "55"]),
    ("3", "z+2"): (["-2"] * 6, ["-3", "-8", "-15", "-24", "-35"]),
    ("z^2+1/4-1/9-1/25", "z-2/15"): (
        ["2/15", "-2/45", "-2/225", "-2/525", "-2/945", "-2/1485"],
        ["-7/120", "-17017/32400", "-15249/10000", "-177859/58800", "-58609/11664"]),
    ("z^2/3+z/3+1", "2z-1"): (
        ["1/2", "0", "-1/5", "-3/10", "-5/14", "-11/28"],
        ["-15/28", "-55/28", "-4459/1100", "-960/143", "-25245/2548"]),
    ("z^2+7/4", "2z-i"): (["1/2i", "0", "0", "0", "0", "0"],
                          ["-1/2", "-5/4", "-5/2", "-17/4", "-13/2"]),
}


@pytest.mark.parametrize("fixture", list(FROZEN))
@pytest.mark.parametrize("g", ["0", "1/3", "1/2i"])
def test_closed_forms_frozen(fixture, g):
    table = recurrence_coeffs(PearsonPair(*fixture, g), 5)
    B, C = FROZEN[fixture]
    assert list(table.B) == scalars(B) and list(table.C) == scalars(C)


def test_c1_formula():
    for phi, psi in FROZEN:
        p = PearsonPair(phi, psi, "1/3")
        assert recurrence_coeffs(p, 1).C[0] == -p.phi_at(-p.e / p.d) / (p.d + p.a)


@pytest.mark.parametrize("a, b", [(3, -1), (0, 2), ("5/4", "2/3"), (1, "1/3"), (-1, "1/2")])
def test_h_pair_closed_forms(a, b):
    p = pair_from_descriptor(H(a, b))
    table = recurrence_coeffs(p, 10)
    root = root_of(as_scalar(a) + 1)
    assert list(table.B) == [root * (-2 * n) for n in range(11)]
    assert list(table.C) == [(as_scalar(a) * n + as_scalar(b)) * (n + 1) for n in range(10)]


@pytest.mark.parametrize("abc", [("1/2", "1/3", "1/5"), ("3/2", "1/2", "1/4"), ("1/3", "1/7", "2/7"),
                                 ("7/3", "i", "1/2")])
def test_q_pair_closed_forms(abc):
    desc = Q(*abc)
    direct = recurrence_coeffs(pair_from_descriptor(desc, "1/3"), 10)
    assert direct.same_coefficients(family_recurrence(desc, 10))


def test_generate_ops():
    charlier = RecurrenceTable.build(scalars([1, 2, 3]), scalars([1, 2]))
    P = generate_ops(charlier)
    assert P[0] == Poly([1]) and P[1] == Poly([-1, 1])
    assert P[2] == Poly([1, -3, 1])


@pytest.mark.parametrize("fixture", list(FROZEN)[:4])
def test_orthogonality_gram_matrix(fixture):
    p = PearsonPair(*fixture, "1/2i")
    table = recurrence_coeffs(p, 6)
    u = solve_pearson_moments(p, 1, 13)
    P = [SigmaPoly(q, (), p.context) for q in generate_ops(table, 6)]
    for m in range(7):
        for n in range(7):
            value = pair(u, P[m] * P[n])
            expected = table.h[n] if m == n else 0
            assert value == expected


def test_derivative_ops_basics():
    p = PearsonPair("2z+1", "z", "1/3")
    table = recurrence_coeffs(p, 8)
    d0 = derivative_ops(table, 0, 5, p.context)
    assert [q.even for q in d0.polys] == generate_ops(table, 5) and d0.sigma_free
    for k in range(1, 4):
        assert derivative_ops(table, k, 3, p.context).polys[0] == SigmaPoly.constant(1, p.context)
    with pytest.raises(SigmaResidueError) as info:
        derivative_ops(table, 1, 4, p.context, strict=True)
    assert info.value.index == 1


# frozen: lattice-point differences of P_{n+1}, interpolated on even and odd s
FROZEN_DERIVATIVES = [
    (["1"], []),
    (["1", "1"], ["-2/3"]),
    (["13/9", "4", "1"], ["-8/3", "-4/3"]),
    (["5", "55/3", "9", "1"], ["-314/27", "-12", "-2"]),
    (["2761/81", "352/3", "230/3", "16", "1"], ["-1856/27", "-2696/27", "-32", "-8/3"]),
    (["25321/81", "81809/81", "2270/3", "1930/9", "25", "1"],
     ["-133250/243", "-25640/27", "-11420/27", "-200/3", "-10/3"]),
]


def test_first_derivative_polynomials_frozen():
    p = PearsonPair("z-2", "z", "1/3")
    d = derivative_ops(recurrence_coeffs(p, 7), 1, 5, p.context)
    for q, (even, odd) in zip(d.polys, FROZEN_DERIVATIVES):
        assert q == SigmaPoly(scalars(even), scalars(odd), p.context)
    assert d.first_residue == 1


@pytest.mark.parametrize("k", [1, 2, 3])
def test_derivative_polynomials_orthogonal_for_derived_functional(k):
    p = PearsonPair("z^2/3+z/3+1", "2z-1", "1/3")
    d = derivative_ops(recurrence_coeffs(p, 8), k, 4, p.context)
    uk = derived_functional(solve_pearson_moments(p, 1, 30), p, k)
    for m in range(5):
        for n in range(5):
            value = pair(uk, d.polys[m] * d.polys[n])
            assert value.is_zero() == (m != n)


def test_second_derivative_polynomials_are_sigma_free():
    p = PearsonPair("z^2/3+z/3+1", "2z-1", "1/3")
    assert derivative_ops(recurrence_coeffs(p, 10), 2, 6, p.context).sigma_free


@pytest.mark.parametrize("g", ["0", "1/3", "1/2i"])
def test_iterated_pairs(g):
    p = PearsonPair("z^2/3+z/3+1", "2z-1", g)
    first = iterated_pair(p, 0)
    assert first.phi == p.phi and first.psi == p.psi
    for k in range(9):
        closed = iterated_pair(p, k)
        assert closed == iterated_pair(p, k, method="recursion")
        assert apply_S(apply_S(closed.psi)) == closed.psi


def test_derived_functional_pearson_identities():
    p = PearsonPair("z^2+1/4-1/9-1/25", "z-2/15", "1/3")
    u = solve_pearson_moments(p, 1, 22)
    assert derived_functional(u, p, 0) == u
    for k in range(3):
        ip = iterated_pair(p, k)
        uk, nxt = derived_functional(u, p, k), derived_functional(u, p, k + 1)
        lhs_d, rhs_d = dual_D(nxt), -left_mul(ip.psi, uk)
        lhs_s, rhs_s = dual_S(nxt), -left_mul(ip.phi, uk)
        for m in range(8):
            zm = SigmaPoly.monomial(m, p.context)
            assert pair(lhs_d, zm) == pair(rhs_d, zm)
            assert pair(lhs_s, zm) == pair(rhs_s, zm)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_derived_functional_solves_shifted_pearson_equation(k):
    p = PearsonPair("2z+1", "z", "1/3")
    uk = derived_functional(solve_pearson_moments(p, 1, 24), p, k)
    ip = iterated_pair(p, k)
    solved = solve_pearson_moments(ip, uk.moments[0], 8, parity=uk.parity, context=p.context)
    assert list(solved.moments) == list(uk.moments[:9])
    assert uk.is_sigma_free() == (k % 2 == 0)


def test_rodrigues_examples():
    p = PearsonPair("z-2", "z", "1/2")
    data = rodrigues(p, 5)
    assert data.a[0] == -p.d and data.s[0] == p.e
    assert data.R[1] == -p.psi.even
    # frozen: t_n evaluated with the sigma-shifted argument, n = 1..4
    assert list(data.t) == scalars([2, 4, 6, 8])
    assert data.monic_match and data.functional_check


@pytest.mark.parametrize("fixture", list(FROZEN)[:4])
@pytest.mark.parametrize("g", ["1/3", "1/2i"])
def test_rodrigues_fixtures(fixture, g):
    data = rodrigues(PearsonPair(*fixture, g), 6, m_max=6)
    assert data.monic_match and data.functional_check, data.failures
    assert data.k[3] == k_factor(PearsonPair(*fixture, g), 3)


def test_rodrigues_requires_regularity():
    with pytest.raises(RegularityError):
        rodrigues(PearsonPair("z", "z", "0"), 3)


def test_e_n_uses_linear_coefficient_of_phi():
    p = PearsonPair("z^2/3+5z+1", "2z-1")
    assert p.e_n(4) == p.phi.even.derivative()(0) * 4 + p.psi.even(0)


coef = st.fractions(-3, 3, max_denominator=3)


@given(coef, coef, coef, coef.filter(lambda x: x != 0), coef,
       st.sampled_from(["0", "1/3", "1/2i"]))
def test_closed_forms_against_hankel_random_pairs(a, b, c, d, e, g):
    p = PearsonPair(Poly([c, b, a]), Poly([e, d]), g)
    N = 4
    assume(admissible(p, 2 * N + 2).ok)
    u = solve_pearson_moments(p, 1, 2 * N + 2)
    report = hankel_oracle(u, N + 1)
    verdict = regular(p, N)
    if verdict.ok:
        assert report.regular_up_to >= N + 1
        assert recurrence_coeffs(p, N).same_coefficients(report.table, N)
    else:
        assert report.regular_up_to == verdict.failed_at
    B, C = gram_schmidt_table([m.plain for m in u.moments], min(N, report.regular_up_to) - 1) \
        if report.regular_up_to >= 1 else ([], [])
    assert list(report.table.B[: len(B)]) == B and list(report.table.C[: len(C)]) == C


def test_gamma_independence_of_closed_forms():
    for fixture in FROZEN:
        tables = {recurrence_coeffs(PearsonPair(*fixture, g), 8) for g in ("0", "1/3", "1/2i")}
        assert len(tables) == 1


def test_table_json_round_trip():
    t = recurrence_coeffs(PearsonPair("z^2+7/4", "2z-i"), 6)
    assert RecurrenceTable.from_json(t.to_json()) == t
    assert RecurrenceTable.from_json(__import__("json").loads(t.dumps())).dumps() == t.dumps()


def test_dense_solver_agrees_for_frozen_fixtures():
    for fixture in FROZEN:
        p = PearsonPair(*fixture, "1/3")
        u = solve_pearson_dense(p, 1, 11)
        B, C = gram_schmidt_table([m.plain for m in u.moments], 5)
        assert (B, C) == (scalars(FROZEN[fixture][0]), scalars(FROZEN[fixture][1]))
