"""The acceptance suite: ten exact checks over the whole pipeline.

Each criterion is a function ``(seed) -> CriterionResult``.  :func:`run_all`
fans the criteria out over threads and reports them in criterion order.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .classical import (PearsonPair, iterated_pair, recurrence_coeffs,
                        regular, rodrigues)
from .classifier import (DEG_PHI0, DEG_PHI1, DEG_PHI2, case3_values, classify,
                         quartic_from_roots, quartic_roots, q_equivalent)
from .families import H, Q, family_recurrence, pair_from_descriptor, verify_identity
from .functional import (dual_D, dual_S, hankel_oracle, left_mul,
                         solve_pearson_moments)
from .poly import Poly
from .scalar import ExactScalar
from .sigma_ring import (LatticeContext, SigmaPoly, SigmaScalar, apply_D, apply_D_power,
                         apply_S, expansion_coefficients, leibniz_T, leibniz_T_closed,
                         parse_sigma_poly)

DEFAULT_SEED = 20240611

# (phi, psi) pairs regular at every gamma used below
REGULAR_PAIRS = (
    ("z-2", "z"),                      # H(0, 2)
    ("2z+1", "z"),                     # H(3, -1)
    ("3", "z+2"),                      # H(-1, -3) shifted
    ("z^2+1/4-1/9-1/25", "z-2/15"),    # Q(1/2, 1/3, 1/5) shifted
    ("z^2/3+z/3+1", "2z-1"),
    ("z^2+7/4", "2z-i"),               # Q(1, 1/2, i)
)

# pairs failing regularity: (phi, psi, gamma, step n where the verdict fails)
SINGULAR_PAIRS = (
    ("z", "z", "0", 0),                # C_1 = -phi(0) = 0
    ("2z+6", "z", "1/3", 2),           # H(3, -6): C_3 = 0
)

GAMMAS = ("0", "1/3", "1/2i")
EXTRA_GAMMAS = ("0", "1/3", "1/2i", "7/5", "-2/3+1/4i")

IDENTITY_POINTS = {
    "meixner-h": ({"beta": 2, "c": "1/2"}, {"beta": "1/3", "c": "1/5"}, {"beta": 3, "c": "5/3"}),
    "charlier-h": ({"a": 1}, {"a": "2/7"}, {"a": "-5/3"}),
    "krawtchouk-h": ({"p": "1/3", "N": 6}, {"p": "1/2", "N": 4}, {"p": "1/5", "N": 12}),
    "hahn-q": ({"alpha": 1, "beta": 2, "N": 4}, {"alpha": "1/2", "beta": "3/2", "N": 10},
               {"alpha": 0, "beta": 0, "N": 7}),
    "para-krawtchouk-q": ({"mu": "1/2", "N": 5}, {"mu": "3/2", "N": 11}, {"mu": "1/3", "N": 3}),
}

ROUND_TRIP = (
    H(-1, 3), H(-1, "1/2"), H(3, -1), H(0, 2), H(1, "1/3"), H(3, -1, branch=-1),
    H("5/4", "2/3"),
    Q("1/2", "1/3", "1/5"), Q(-2, "1/4", 0), Q("3/2", "1/2", "1/4"),
    Q("5/2", "-1/2", "13/2"), Q("1/3", "1/7", "2/7"), Q(1, "1/2", "i"),
)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    checks: int
    failures: tuple = field(default=())

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] criterion {self.number:2d}: {self.title} ({self.checks} checks)"
        if self.failures:
            text += f"; first failure: {self.failures[0]}"
        return text

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "checks": self.checks, "failures": list(self.failures)}


class _Tally:
    def __init__(self):
        self.checks = 0
        self.failures: list[str] = []

    def check(self, ok: bool, what: str) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(what)

    def result(self, number: int, title: str) -> CriterionResult:
        return CriterionResult(number, title, self.checks, tuple(self.failures))


# -- random objects --------------------------------------------------------------

def _rand_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 6))


def random_scalar(rng: random.Random, gaussian: bool = True) -> ExactScalar:
    im = _rand_fraction(rng) if gaussian and rng.random() < 0.5 else 0
    return ExactScalar(_rand_fraction(rng), im)


def random_sigma_poly(rng: random.Random, ctx: LatticeContext, max_degree: int = 8) -> SigmaPoly:
    even = [random_scalar(rng) for _ in range(rng.randint(0, max_degree) + 1)]
    odd = ([random_scalar(rng) for _ in range(rng.randint(0, max_degree) + 1)]
           if rng.random() < 0.7 else [])
    return SigmaPoly(even, odd, ctx)


# -- criteria --------------------------------------------------------------------

def operator_calculus(seed: int, trials: int = 200) -> CriterionResult:
    rng = random.Random(seed)
    t = _Tally()
    for i in range(trials):
        ctx = LatticeContext(random_scalar(rng))
        f, g = random_sigma_poly(rng, ctx), random_sigma_poly(rng, ctx)
        Df, Sf, Dg, Sg = apply_D(f), apply_S(f), apply_D(g), apply_S(g)
        tag = f"trial {i}, gamma={ctx.gamma}"
        t.check(apply_D(f * g) == Df * Sg + Sf * Dg, f"D(fg) product rule, {tag}")
        t.check(apply_S(f * g) == Df * Dg + Sf * Sg, f"S(fg) product rule, {tag}")
        t.check(f * Sg == apply_S(g * Sf) - apply_D(g * Df), f"f S g composition, {tag}")
        t.check(f * Dg == apply_D(g * Sf) - apply_S(g * Df), f"f D g composition, {tag}")
        t.check(apply_S(Sf) == apply_D(Df) + f, f"S^2 f = D^2 f + f, {tag}")
        t.check(apply_S(Df) == apply_D(Sf), f"S D f = D S f, {tag}")
        n = rng.randint(2, 4)
        t.check(apply_D_power(Sf, n) == apply_S(apply_D_power(f, n)), f"D^{n} S f = S D^{n} f, {tag}")
    return t.result(1, "operator calculus identities")


_D_KEYS = (("D0", 1), ("D1", 2), ("u", 3), ("v", 4), ("w", 5))
_S_KEYS = (("S0", 0), ("S1", 1), ("uh", 2), ("vh", 3), ("wh", 4))


def expansion_tables(seed: int) -> CriterionResult:
    t = _Tally()
    for g in EXTRA_GAMMAS:
        ctx = LatticeContext(g)
        for n in range(11):
            zn = SigmaPoly.monomial(n, ctx)
            dz, sz = apply_D(zn), apply_S(zn)
            coeffs = expansion_coefficients(n, g)
            for keys, poly in ((_D_KEYS, dz), (_S_KEYS, sz)):
                for key, drop in keys:
                    k = n - drop
                    got = poly.coefficient(k) if k >= 0 else SigmaScalar()
                    want = coeffs[key] if k >= 0 else SigmaScalar()
                    t.check(got == want, f"{key} for z^{n}, gamma={g}: {got} != {want}")
    return t.result(2, "expansion tables of D z^n and S z^n")


def leibniz(seed: int, n_max: int = 6) -> CriterionResult:
    rng = random.Random(seed)
    t = _Tally()
    for g in ("1/3", "1/2i"):
        ctx = LatticeContext(g)
        u = solve_pearson_moments(PearsonPair("z^2+1/4-1/9-1/25", "z-2/15", g), 1, 16)
        # a second functional with sigma-carrying moments
        w = type(u)([SigmaScalar(_rand_fraction(rng), _rand_fraction(rng)) for _ in range(17)], ctx)
        functionals = [(v, _mixed_duals(v, n_max)) for v in (u, w)]
        for f_text in ("2z^2-z+3", "z+1/2", "5", "-1/3z^2+2i"):
            f = parse_sigma_poly(f_text, ctx)
            for n in range(n_max + 1):
                for k in range(n + 1):
                    t.check(leibniz_T(n, k, f) == leibniz_T_closed(n, k, f),
                            f"T_{n},{k} closed form, f={f_text}, gamma={g}")
            for v, mixed in functionals:
                lhs = left_mul(f, v)
                for n in range(n_max + 1):
                    if n:
                        lhs = dual_D(lhs)
                    rhs = left_mul(leibniz_T(n, 0, f), mixed[n, 0])
                    for k in range(1, n + 1):
                        rhs = rhs + left_mul(leibniz_T(n, k, f), mixed[n - k, k])
                    m = min(lhs.order, rhs.order)
                    t.check(lhs.truncated(m) == rhs.truncated(m),
                            f"Leibniz formula n={n}, f={f_text}, gamma={g}")
    return t.result(3, "Leibniz formula and T_n,k closed forms")


def _mixed_duals(v, n_max: int) -> dict:
    """``D^j S^k v`` for ``j + k <= n_max``."""
    out = {}
    s_pow = v
    for k in range(n_max + 1):
        if k:
            s_pow = dual_S(s_pow)
        x = s_pow
        for j in range(n_max - k + 1):
            if j:
                x = dual_D(x)
            out[j, k] = x
    return out


def closed_forms_vs_hankel(seed: int, N: int = 8) -> CriterionResult:
    t = _Tally()
    for phi, psi in REGULAR_PAIRS:
        for g in ("1/3", "1/2i"):
            p = PearsonPair(phi, psi, g)
            verdict = regular(p, N)
            report = hankel_oracle(solve_pearson_moments(p, 1, 2 * N + 3), N + 1)
            tag = f"({phi}, {psi}) gamma={g}"
            t.check(verdict.ok, f"{tag}: closed-form verdict {verdict.message}")
            t.check(report.regular_up_to >= N + 1, f"{tag}: Hankel regular only to {report.regular_up_to}")
            table = recurrence_coeffs(p, N)
            t.check(table.same_coefficients(report.table, N), f"{tag}: B/C differ from Hankel")
            c1 = -p.phi_at(-p.e / p.d) / (p.d + p.a)
            t.check(table.C[0] == c1 == report.table.C[0], f"{tag}: C_1 formula")
    for phi, psi, g, n_fail in SINGULAR_PAIRS:
        p = PearsonPair(phi, psi, g)
        verdict = regular(p, N)
        report = hankel_oracle(solve_pearson_moments(p, 1, 2 * N + 3), N + 1)
        tag = f"({phi}, {psi}) gamma={g}"
        t.check(not verdict.ok and verdict.failed_at == n_fail,
                f"{tag}: verdict fails at {verdict.failed_at}, expected {n_fail}")
        # C_{n+1} = 0 is Delta_{n+1} = 0 with Delta_0..Delta_n nonzero
        t.check(report.regular_up_to == n_fail, f"{tag}: Hankel regular to {report.regular_up_to}")
        t.check(report.table.same_coefficients(
            recurrence_coeffs(p, n_fail, formal=True), n_fail) if n_fail else True,
            f"{tag}: coefficients before the failure")
    return t.result(4, "closed forms against the Hankel oracle")


def sigma_cancellation(seed: int, N: int = 10) -> CriterionResult:
    t = _Tally()
    for phi, psi in REGULAR_PAIRS:
        for g in EXTRA_GAMMAS:
            p = PearsonPair(phi, psi, g)
            u = solve_pearson_moments(p, 1, 2 * N)
            t.check(u.is_sigma_free(), f"({phi}, {psi}) gamma={g}: m_{u.first_sigma_residue()} has a sigma part")
            try:
                data = rodrigues(p, 5, check_functional=False)
            except Exception as exc:  # a SigmaResidueError is the failure being tested for
                t.check(False, f"({phi}, {psi}) gamma={g}: {exc}")
                continue
            polys = [SigmaPoly(r, (), p.context) * k for r, k in zip(data.R, data.k)]
            t.check(all(q.is_sigma_free() for q in polys), f"({phi}, {psi}) gamma={g}: k_n R_n")
            t.check(data.monic_match, f"({phi}, {psi}) gamma={g}: P_n != k_n R_n")
    return t.result(5, "sigma cancellation in moments and polynomials")


def rodrigues_check(seed: int, N: int = 6) -> CriterionResult:
    t = _Tally()
    for phi, psi in REGULAR_PAIRS[:4]:
        for g in ("1/3", "1/2i"):
            data = rodrigues(PearsonPair(phi, psi, g), N, m_max=N)
            tag = f"({phi}, {psi}) gamma={g}"
            t.check(data.monic_match, f"{tag}: P_n != k_n R_n")
            t.check(bool(data.functional_check), f"{tag}: {data.failures[:1]}")
            # t_n = a_n a_{n-1} C_n
            table = recurrence_coeffs(PearsonPair(phi, psi, g), N)
            t.check(all(data.t[n - 1] == data.a[n] * data.a[n - 1] * table.C[n - 1]
                        for n in range(1, N)), f"{tag}: t_n")
    return t.result(6, "Rodrigues formula")


def iterated_pairs(seed: int, K: int = 8) -> CriterionResult:
    t = _Tally()
    for phi, psi in REGULAR_PAIRS:
        for g in GAMMAS:
            p = PearsonPair(phi, psi, g)
            for k in range(K + 1):
                closed = iterated_pair(p, k)
                t.check(closed == iterated_pair(p, k, method="recursion"),
                        f"({phi}, {psi}) gamma={g}: k={k} closed != recursion")
                t.check(apply_S(apply_S(closed.psi)) == closed.psi,
                        f"({phi}, {psi}) gamma={g}: S^2 psi^[{k}] != psi^[{k}]")
    return t.result(7, "iterated Pearson pairs")


def family_identities(seed: int, N: int = 10) -> CriterionResult:
    t = _Tally()
    for name, points in IDENTITY_POINTS.items():
        for params in points:
            report = verify_identity(name, params, N)
            tag = f"{name} {params}"
            t.check(report.passed, f"{tag}: {report.failures[:1]}")
            if name in ("meixner-h", "krawtchouk-h"):
                t.check(len(report.branches) == 2, f"{tag}: both root signs not reported")
    return t.result(8, "family identities")


def classification_round_trip(seed: int, N: int = 10) -> CriterionResult:
    t = _Tally()
    cases = set()
    for desc in ROUND_TRIP:
        p = pair_from_descriptor(desc, "1/3")
        cl = classify(p)
        cases.add(cl.case)
        original = family_recurrence(desc, N)
        rebuilt = cl.table(N)
        tag = str(desc)
        t.check(original.order == rebuilt.order and original.same_coefficients(rebuilt),
                f"{tag}: rebuilt table differs")
        direct = _closed_form_table(p, N)
        t.check(direct.same_coefficients(rebuilt), f"{tag}: closed forms differ")
        if cl.case == DEG_PHI2:
            t.check(cl.descriptor is None or q_equivalent(desc, cl.descriptor),
                    f"{tag}: classified as {cl.descriptor}")
            vals = [case3_values(p, n) for n in range(direct.order + 1)]
            t.check(all(v[0] == b for v, b in zip(vals, direct.B)), f"{tag}: case 3 B_n")
            t.check(all(v[1] == c for v, c in zip(vals, direct.C)), f"{tag}: case 3 C_n")
            a = p.normalized()[0].a
            t.check(quartic_from_roots(a, quartic_roots(p)) == Poly(list(cl.quartic)),
                    f"{tag}: quartic factorization")
    t.check(cases == {DEG_PHI0, DEG_PHI1, DEG_PHI2}, f"cases covered: {sorted(cases)}")
    return t.result(9, "classification round trip")


def _closed_form_table(p: PearsonPair, N: int):
    if regular(p, N).ok:
        return recurrence_coeffs(p, N)
    return recurrence_coeffs(p, N, formal=True)


def gamma_independence(seed: int, N: int = 8) -> CriterionResult:
    t = _Tally()
    for phi, psi in REGULAR_PAIRS:
        tables = [recurrence_coeffs(PearsonPair(phi, psi, g), N) for g in GAMMAS]
        oracles = [hankel_oracle(solve_pearson_moments(PearsonPair(phi, psi, g), 1, 2 * N + 1), N).table
                   for g in GAMMAS]
        t.check(all(x == tables[0] for x in tables), f"({phi}, {psi}): closed forms vary with gamma")
        t.check(all(x.same_coefficients(tables[0], N) for x in oracles),
                f"({phi}, {psi}): Hankel tables vary with gamma")
    return t.result(10, "gamma independence")


CRITERIA: dict[int, Callable[[int], CriterionResult]] = {
    1: operator_calculus,
    2: expansion_tables,
    3: leibniz,
    4: closed_forms_vs_hankel,
    5: sigma_cancellation,
    6: rodrigues_check,
    7: iterated_pairs,
    8: family_identities,
    9: classification_round_trip,
    10: gamma_independence,
}


def run_criterion(number: int, seed: int = DEFAULT_SEED) -> CriterionResult:
    try:
        return CRITERIA[number](seed)
    except Exception as exc:  # report a crash as a failed criterion
        return CriterionResult(number, CRITERIA[number].__name__, 0,
                               (f"{type(exc).__name__}: {exc}",))


def run_all(seed: int = DEFAULT_SEED, workers: int = 1,
            only: Optional[list] = None) -> list[CriterionResult]:
    numbers = sorted(CRITERIA) if only is None else list(only)
    if workers <= 1:
        return [run_criterion(n, seed) for n in numbers]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda n: run_criterion(n, seed), numbers))
