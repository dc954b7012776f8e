"""Pearson pairs, their regularity, recurrence coefficients and Rodrigues data.

For ``phi = a z^2 + b z + c`` and ``psi = d z + e`` write
``d_n = a n + d`` and ``e_n = b n + e`` (``b`` is phi's linear coefficient).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import factorial
from typing import Optional

from .errors import RegularityError, SigmaResidueError
from .functional import (MomentFunctional, dual_D, dual_D_power, dual_S,
                         left_mul, pair as pair_value, solve_pearson_moments)
from .poly import Poly, limit_at_zero, perturbed
from .scalar import ONE, ZERO, ExactScalar, as_scalar
from .sigma_ring import (SIGMA, LatticeContext, SigmaPoly, SigmaScalar,
                         apply_D, apply_D_power, apply_S, format_sigma_poly,
                         parse_sigma_poly)
from .table import RecurrenceTable

__all__ = [
    "PearsonPair", "Verdict", "RecurrenceTable", "IteratedPair", "RodriguesData",
    "DerivativeOps", "admissible", "regular", "recurrence_coeffs",
    "formal_values", "generate_ops", "derivative_ops", "iterated_pair",
    "derived_functional", "rodrigues", "k_factor",
]


def _as_sigma_poly(x, ctx: LatticeContext) -> SigmaPoly:
    if isinstance(x, SigmaPoly):
        return x.with_context(ctx)
    if isinstance(x, Poly):
        return SigmaPoly(x, (), ctx)
    if isinstance(x, str):
        return parse_sigma_poly(x, ctx)
    if isinstance(x, (list, tuple)):
        return SigmaPoly(list(x), (), ctx)
    return SigmaPoly.constant(x, ctx)


class PearsonPair:
    """The data of ``D_s(phi u) = S_s(psi u)`` on the lattice with parameter gamma."""

    __slots__ = ("phi", "psi", "context")

    def __init__(self, phi, psi, gamma=0):
        ctx = gamma if isinstance(gamma, LatticeContext) else LatticeContext(gamma)
        self.context = ctx
        self.phi = _as_sigma_poly(phi, ctx)
        self.psi = _as_sigma_poly(psi, ctx)
        if not (self.phi.is_sigma_free() and self.psi.is_sigma_free()):
            raise ValueError("phi and psi must not contain (-1)^s")
        if self.phi.degree > 2:
            raise ValueError(f"deg phi = {self.phi.degree} > 2")
        if self.psi.degree > 1:
            raise ValueError(f"deg psi = {self.psi.degree} > 1")
        if self.phi.is_zero() and self.psi.is_zero():
            raise ValueError("(phi, psi) = (0, 0)")

    @property
    def gamma(self) -> ExactScalar:
        return self.context.gamma

    @property
    def a(self) -> ExactScalar:
        return self.phi.even.coeff(2)

    @property
    def b(self) -> ExactScalar:
        return self.phi.even.coeff(1)

    @property
    def c(self) -> ExactScalar:
        return self.phi.even.coeff(0)

    @property
    def d(self) -> ExactScalar:
        return self.psi.even.coeff(1)

    @property
    def e(self) -> ExactScalar:
        return self.psi.even.coeff(0)

    def d_n(self, n: int) -> ExactScalar:
        return self.a * n + self.d

    def e_n(self, n: int) -> ExactScalar:
        return self.b * n + self.e

    def phi_at(self, x) -> ExactScalar:
        return self.phi.even(as_scalar(x))

    def with_gamma(self, gamma) -> "PearsonPair":
        return PearsonPair(self.phi.even, self.psi.even, gamma)

    def normalized(self) -> tuple["PearsonPair", ExactScalar]:
        """The pair divided by ``d`` together with the factor used."""
        if self.d.is_zero():
            raise ValueError("deg psi != 1: cannot normalize to d = 1")
        return PearsonPair(self.phi.even / self.d, self.psi.even / self.d, self.context), self.d

    def __eq__(self, other) -> bool:
        if not isinstance(other, PearsonPair):
            return NotImplemented
        return (self.phi == other.phi and self.psi == other.psi
                and self.context == other.context)

    def __hash__(self) -> int:
        return hash((self.phi, self.psi, self.context))

    def __repr__(self) -> str:
        return (f"PearsonPair(phi={format_sigma_poly(self.phi)!r}, "
                f"psi={format_sigma_poly(self.psi)!r}, gamma={self.gamma})")

    def to_json(self) -> dict:
        return {"phi": format_sigma_poly(self.phi), "psi": format_sigma_poly(self.psi),
                "gamma": str(self.gamma)}


# -- verdicts ----------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    """Outcome of an admissibility or regularity check up to ``horizon``.

    On failure ``failed_at`` is the step n, ``condition`` is ``"d_n != 0"`` or
    ``"phi(-e_n/d_2n) + n d_n != 0"`` and ``index`` the offending subscript.
    """

    ok: bool
    horizon: int
    failed_at: Optional[int] = None
    condition: Optional[str] = None
    index: Optional[int] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked_to": self.horizon, "failed_at": self.failed_at,
                "condition": self.condition, "index": self.index, "message": self.message}


COND_D = "d_n != 0"
COND_PHI = "phi(-e_n/d_2n) + n d_n != 0"


def admissible(p: PearsonPair, N: int) -> Verdict:
    """``d_n = a n + d`` is nonzero for ``0 <= n <= N``."""
    for n in range(N + 1):
        if p.d_n(n).is_zero():
            return Verdict(False, N, n, COND_D, n, f"d_{n} = 0")
    return Verdict(True, N)


def _condition2(p: PearsonPair, n: int) -> ExactScalar:
    return p.phi_at(-p.e_n(n) / p.d_n(2 * n)) + p.d_n(n) * n


def regular(p: PearsonPair, N: int) -> Verdict:
    """Check both regularity conditions for steps ``n = 0..N``.

    Step n needs ``d_k != 0`` for ``k <= 2n + 1`` (every subscript the
    closed forms for B_n and C_{n+1} divide by) and then
    ``phi(-e_n/d_{2n}) + n d_n != 0``, which is ``C_{n+1} != 0``.  Success
    certifies P_0..P_{N+1}.
    """
    checked = -1
    for n in range(N + 1):
        for k in range(checked + 1, 2 * n + 2):
            if p.d_n(k).is_zero():
                return Verdict(False, N, n, COND_D, k, f"d_{k} = 0 (step n={n})")
        checked = 2 * n + 1
        if _condition2(p, n).is_zero():
            return Verdict(False, N, n, COND_PHI, n, f"condition 2 fails at n={n}")
    return Verdict(True, N)


# -- closed forms ------------------------------------------------------------

def _b_value(p: PearsonPair, n: int) -> ExactScalar:
    first = p.e_n(n - 1) * n / p.d_n(2 * n - 2) if n else ZERO
    return first - p.e_n(n) * (n + 1) / p.d_n(2 * n)


def _c_next_value(p: PearsonPair, n: int) -> ExactScalar:
    """C_{n+1}; for n = 0 the factor d_{-1} cancels."""
    if n == 0:
        return -_condition2(p, 0) / p.d_n(1)
    return (-(p.d_n(n - 1) * (n + 1)) / (p.d_n(2 * n - 1) * p.d_n(2 * n + 1))
            * _condition2(p, n))


def recurrence_coeffs(p: PearsonPair, N: int, m0=1, formal: bool = False) -> RecurrenceTable:
    """B_0..B_N and C_1..C_N from the closed forms.

    With ``formal=True`` the closed forms are evaluated as limits (see
    :func:`formal_values`), so removable zeros cancel.  This gives
    the finite tables (e.g. a Q-pair with ``-2a`` a nonnegative integer) that
    the strict regularity test rejects; the table then stops before the first
    vanishing C and ``checked_to`` records where.
    """
    if formal:
        return _formal_table(p, N, m0)
    verdict = regular(p, N)
    if not verdict.ok:
        raise RegularityError(verdict.message, verdict.failed_at)
    B = [_b_value(p, n) for n in range(N + 1)]
    C = [_c_next_value(p, n) for n in range(N)]
    return RecurrenceTable.build(B, C, m0, N)


def formal_values(p: PearsonPair, n: int) -> tuple[ExactScalar, ExactScalar]:
    """``(B_n, C_{n+1})`` with ``d`` replaced by ``d + eps`` and eps -> 0.

    A factor ``d_k`` that vanishes in numerator and denominator at once then
    takes its limiting value instead of stopping the table.
    """
    a, b, c, e = p.a, p.b, p.c, p.e
    d = perturbed(p.d)

    def d_(k):
        return a * k + d

    def e_(k):
        return b * k + e

    def cond(k):
        z = -e_(k) / d_(2 * k)
        return a * z * z + b * z + c + d_(k) * k

    b_n = (e_(n - 1) * n / d_(2 * n - 2) if n else ZERO) - e_(n) * (n + 1) / d_(2 * n)
    c_next = -(d_(n - 1) * (n + 1)) / (d_(2 * n - 1) * d_(2 * n + 1)) * cond(n)
    return limit_at_zero(b_n), limit_at_zero(c_next)


def _formal_table(p: PearsonPair, N: int, m0) -> RecurrenceTable:
    B, C = [], []
    for n in range(N + 1):
        try:
            b_n, c_next = formal_values(p, n)
        except ZeroDivisionError:
            raise RegularityError(f"closed forms are singular at n={n}", n) from None
        B.append(b_n)
        if n == N or c_next.is_zero():
            break
        C.append(c_next)
    return RecurrenceTable.build(B, C, m0, len(B) - 1)


def generate_ops(table: RecurrenceTable, N: Optional[int] = None) -> list:
    """Monic P_0..P_N (as :class:`Poly`) from the three-term recurrence."""
    N = table.order if N is None else N
    if N > table.order:
        raise ValueError(f"table only reaches n={table.order}")
    out = [Poly([1])]
    prev = Poly()
    z = Poly([0, 1])
    for n in range(N):
        nxt = (z - table.B[n]) * out[-1]
        if n >= 1:
            nxt = nxt - prev * table.C[n - 1]
        prev = out[-1]
        out.append(nxt)
    return out


@dataclass(frozen=True)
class DerivativeOps:
    """``P_n^[k] = n!/(n+k)! D_s^k P_{n+k}`` for n = 0..N."""

    k: int
    polys: tuple
    first_residue: Optional[int]

    @property
    def sigma_free(self) -> bool:
        return self.first_residue is None


def derivative_ops(table: RecurrenceTable, k: int, N: int, context: LatticeContext,
                   strict: bool = False) -> DerivativeOps:
    """Normalized k-th differences of the monic sequence.

    On the bi-lattice ``D_s`` does not preserve sigma-freeness (for instance
    ``D_s z^2 = 2z - 4 gamma sigma``), so the result is a SigmaPoly.  The
    first n with a sigma residue is reported; ``strict=True`` raises instead.
    """
    ps = generate_ops(table, N + k)
    out, first = [], None
    for n in range(N + 1):
        q = apply_D_power(SigmaPoly(ps[n + k], (), context), k)
        q = q * (as_scalar(factorial(n)) / factorial(n + k))
        if first is None and not q.is_sigma_free():
            first = n
            if strict:
                raise SigmaResidueError(
                    f"P_{n}^[{k}] = {format_sigma_poly(q)} has a sigma part", n)
        out.append(q)
    return DerivativeOps(k, tuple(out), first)


# -- iterated pairs and derived functionals -----------------------------------

@dataclass(frozen=True)
class IteratedPair:
    k: int
    phi: SigmaPoly
    psi: SigmaPoly

    def __eq__(self, other) -> bool:
        return (isinstance(other, IteratedPair) and self.k == other.k
                and self.phi == other.phi and self.psi == other.psi)

    def to_json(self) -> dict:
        return {"k": self.k, "phi": format_sigma_poly(self.phi),
                "psi": format_sigma_poly(self.psi)}


def iterated_pair(p: PearsonPair, k: int, method: str = "closed") -> IteratedPair:
    """``(phi^[k], psi^[k])`` in closed form or by the recursion.

    Recursion: ``phi^[k+1] = S phi^[k] + D psi^[k]``,
    ``psi^[k+1] = D phi^[k] + S psi^[k]``.
    """
    ctx = p.context
    if method == "recursion":
        phi, psi = p.phi, p.psi
        for _ in range(k):
            phi, psi = apply_S(phi) + apply_D(psi), apply_D(phi) + apply_S(psi)
        return IteratedPair(k, phi, psi)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    w = SigmaPoly.z(ctx) - SIGMA * (p.gamma * (1 - (-1) ** k))
    const = SigmaPoly.constant
    phi = w * w * p.a + w * p.b + const(p.c + p.d_n(k) * k, ctx)
    psi = w * p.d_n(2 * k) + const(p.e_n(k), ctx)
    return IteratedPair(k, phi, psi)


def derived_functional(u: MomentFunctional, p: PearsonPair, k: int) -> MomentFunctional:
    """``u^[k]`` from ``u^[j+1] = D(psi^[j] u^[j]) - S(phi^[j] u^[j])``.

    Each step consumes two orders of the moment table and toggles parity.
    """
    v = u
    for j in range(k):
        ip = iterated_pair(p, j)
        v = dual_D(left_mul(ip.psi, v)) - dual_S(left_mul(ip.phi, v))
    return v


# -- Rodrigues data ------------------------------------------------------------

def k_factor(p: PearsonPair, n: int) -> ExactScalar:
    """``k_n = (-1)^n / prod_{j=1..n} d_{n+j-2}``."""
    prod = ONE
    for j in range(1, n + 1):
        prod = prod * p.d_n(n + j - 2)
    return (ONE if n % 2 == 0 else -ONE) / prod


@dataclass(frozen=True)
class RodriguesData:
    a: tuple
    s: tuple
    t: tuple          # t[0] is t_1
    R: tuple          # R_0..R_N as Poly
    k: tuple
    monic_match: bool
    functional_check: Optional[bool] = None
    checked_m: Optional[int] = None
    failures: tuple = field(default=())

    def to_json(self) -> dict:
        return {
            "a": [str(x) for x in self.a],
            "s": [str(x) for x in self.s],
            "t": [str(x) for x in self.t],
            "k": [str(x) for x in self.k],
            "R": [[str(c) for c in r] for r in self.R],
            "monic_match": self.monic_match,
            "functional_check": self.functional_check,
            "checked_m": self.checked_m,
            "failures": list(self.failures),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _t_value(p: PearsonPair, n: int, an: ExactScalar) -> ExactScalar:
    phi_prev = iterated_pair(p, n - 1).phi
    point = SigmaScalar(-p.e_n(n - 1) / p.d_n(2 * n - 2), p.gamma * (1 + (-1) ** n))
    value = phi_prev(point)
    if not value.is_sigma_free():
        raise SigmaResidueError(f"t_{n}: phi^[{n - 1}] value {value} keeps a sigma part", n)
    return an * (p.d_n(2 * n - 2) * n / p.d_n(2 * n - 1)) * value.plain


def rodrigues(p: PearsonPair, N: int, check_functional: bool = True,
              m_max: Optional[int] = None) -> RodriguesData:
    """R_0..R_N, k_0..k_N and the checks ``P_n = k_n R_n`` and
    ``<P_n u - k_n D^n u^[n], z^m> = 0`` for ``m <= m_max`` (default N).

    ``a_0 = -d``, ``s_0 = e``;
    ``a_n = -d_{2n} d_{2n-1} / d_{n-1}``, ``s_n = a_n B_n`` and ``t_n`` from
    ``phi^[n-1]`` at ``sigma*gamma*(1+(-1)^n) - e_{n-1}/d_{2n-2}``.
    """
    verdict = regular(p, N)
    if not verdict.ok:
        raise RegularityError(verdict.message, verdict.failed_at)
    a_seq, s_seq, t_seq = [-p.d], [p.e], []
    for n in range(1, N):
        an = -(p.d_n(2 * n) * p.d_n(2 * n - 1)) / p.d_n(n - 1)
        a_seq.append(an)
        s_seq.append(an * _b_value(p, n))
        t_seq.append(_t_value(p, n, an))
    z = Poly([0, 1])
    R = [Poly([1])]
    prev = Poly()
    for n in range(N):
        nxt = (z * a_seq[n] - s_seq[n]) * R[-1]
        if n >= 1:
            nxt = nxt - prev * t_seq[n - 1]
        prev = R[-1]
        R.append(nxt)
    ks = [k_factor(p, n) for n in range(N + 1)]
    P = generate_ops(recurrence_coeffs(p, N), N)
    failures = []
    for n in range(N + 1):
        if R[n] * ks[n] != P[n]:
            failures.append(f"P_{n} != k_{n} R_{n}")
    monic_match = not failures
    func_ok = None
    m_max = N if m_max is None else m_max
    if check_functional:
        func_ok = True
        ctx = p.context
        u = solve_pearson_moments(p, 1, m_max + 2 * N)
        derived = u
        for n in range(N + 1):
            if n:
                ip = iterated_pair(p, n - 1)
                derived = dual_D(left_mul(ip.psi, derived)) - dual_S(left_mul(ip.phi, derived))
            lhs = left_mul(SigmaPoly(P[n], (), ctx), u)
            rhs = dual_D_power(derived, n)
            for m in range(m_max + 1):
                zm = SigmaPoly.monomial(m, ctx)
                diff = pair_value(lhs, zm) - pair_value(rhs, zm) * ks[n]
                if not diff.is_zero():
                    func_ok = False
                    failures.append(f"<P_{n} u - k_{n} D^{n} u^[{n}], z^{m}> = {diff}")
    return RodriguesData(tuple(a_seq), tuple(s_seq), tuple(t_seq), tuple(R), tuple(ks),
                         monic_match, func_ok, m_max if check_functional else None,
                         tuple(failures))
