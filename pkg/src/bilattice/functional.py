"""Moment functionals on the twisted ring, their dual operators and oracles.

A functional is stored as its moments ``m_k = <v, z^k>`` for ``k <= N``.  The
moments live in the sigma-scalar ring, and the functional carries a *parity*:

* parity ``+1``: ``<v, sum h_k z^k> = sum h_k m_k``  (sigma passes through),
* parity ``-1``: ``<v, sum h_k z^k> = sum flip(h_k) m_k``.

The parity is forced by the operators: ``D_s(sigma f) = -sigma D_s f``, so the
dual ``<D v, f> := -<v, D_s f>`` satisfies ``<D v, sigma f> = -sigma <D v, f>``.
Duals therefore toggle the parity and multiplication by a polynomial keeps it.
A functional built from the Pearson equation starts with parity ``+1``.

Hankel formulas used by :func:`hankel_oracle` (``Delta_{-1} = 1``)::

    Delta_n  = det(m_{i+j})_{i,j=0..n}
    Delta'_n = same matrix with its last column replaced by m_{i+n+1}
    C_n = Delta_n Delta_{n-2} / Delta_{n-1}^2
    B_n = Delta'_n / Delta_n - Delta'_{n-1} / Delta_{n-1}   (Delta'_{-1} = 0)

``Delta'_n / Delta_n`` is minus the subleading coefficient of the monic
orthogonal polynomial of degree n+1, i.e. ``B_0 + ... + B_n``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import linalg
from .errors import (AdmissibilityError, ContextError, SigmaResidueError,
                     TruncationError)
from .scalar import ONE, ZERO, ExactScalar, as_scalar
from .sigma_ring import (LatticeContext, SigmaPoly, SigmaScalar, D_monomial,
                         S_monomial)
from .table import RecurrenceTable


def _check_parity(parity: int) -> int:
    if parity not in (1, -1):
        raise ValueError("parity must be +1 or -1")
    return parity


class MomentFunctional:
    """Finite moment table ``m_0..m_N`` with a lattice context and a parity."""

    __slots__ = ("moments", "context", "parity")

    def __init__(self, moments: Sequence, context: LatticeContext, parity: int = 1):
        self.moments: tuple = tuple(
            m if isinstance(m, SigmaScalar) else SigmaScalar(as_scalar(m)) for m in moments
        )
        if not self.moments:
            raise ValueError("a functional needs at least m_0")
        self.context = context
        self.parity = _check_parity(parity)

    @property
    def order(self) -> int:
        """The truncation order N."""
        return len(self.moments) - 1

    def moment(self, k: int) -> SigmaScalar:
        if k < 0:
            raise IndexError(k)
        if k > self.order:
            raise TruncationError(f"moment m_{k} requested but truncation order is {self.order}")
        return self.moments[k]

    def is_sigma_free(self) -> bool:
        return all(m.is_sigma_free() for m in self.moments)

    def first_sigma_residue(self) -> Optional[int]:
        return next((k for k, m in enumerate(self.moments) if not m.is_sigma_free()), None)

    def pair(self, f) -> SigmaScalar:
        return pair(self, f)

    def truncated(self, n: int) -> "MomentFunctional":
        if n > self.order:
            raise TruncationError(f"cannot extend order {self.order} to {n}")
        return MomentFunctional(self.moments[: n + 1], self.context, self.parity)

    def _combine(self, other: "MomentFunctional", sign: int) -> "MomentFunctional":
        if self.context != other.context:
            raise ContextError("functionals from different lattices")
        if self.parity != other.parity:
            raise ValueError("cannot add functionals of different parity")
        n = min(self.order, other.order)
        ms = [self.moments[k] + other.moments[k] * sign for k in range(n + 1)]
        return MomentFunctional(ms, self.context, self.parity)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return MomentFunctional([-m for m in self.moments], self.context, self.parity)

    def scaled(self, factor) -> "MomentFunctional":
        """Multiply every moment by a plain scalar."""
        s = as_scalar(factor)
        return MomentFunctional([m * s for m in self.moments], self.context, self.parity)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MomentFunctional):
            return NotImplemented
        return (self.moments == other.moments and self.context == other.context
                and self.parity == other.parity)

    def __repr__(self) -> str:
        body = ", ".join(str(m) for m in self.moments)
        return f"MomentFunctional([{body}], {self.context}, parity={self.parity})"

    def to_json(self) -> dict:
        out = {
            "m": [m.to_json() for m in self.moments],
            "gamma": str(self.context.gamma),
        }
        if self.parity != 1:
            out["parity"] = self.parity
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict) -> "MomentFunctional":
        return cls([SigmaScalar.from_json(m) for m in data["m"]],
                   LatticeContext(data["gamma"]), data.get("parity", 1))


def pair(v: MomentFunctional, f) -> SigmaScalar:
    """``<v, f>`` for a SigmaPoly (or scalar) ``f`` of degree at most N."""
    if not isinstance(f, SigmaPoly):
        f = SigmaPoly.constant(f, v.context)
    if f.context is not None and f.context != v.context:
        raise ContextError("polynomial and functional live on different lattices")
    if f.degree > v.order:
        raise TruncationError(
            f"pairing needs moments up to m_{f.degree}, truncation order is {v.order}")
    if v.parity == -1:
        f = f.flip()
    acc = SigmaScalar()
    for k in range(f.degree + 1):
        c = f.coefficient(k)
        if not c.is_zero():
            acc = acc + c * v.moments[k]
    return acc


def dual_D(v: MomentFunctional) -> MomentFunctional:
    """The functional ``f -> -<v, D_s f>``; keeps the truncation order."""
    ctx = v.context
    ms = [-pair(v, D_monomial(k, ctx)) for k in range(v.order + 1)]
    return MomentFunctional(ms, ctx, -v.parity)


def dual_S(v: MomentFunctional) -> MomentFunctional:
    """The functional ``f -> <v, S_s f>``; keeps the truncation order."""
    ctx = v.context
    ms = [pair(v, S_monomial(k, ctx)) for k in range(v.order + 1)]
    return MomentFunctional(ms, ctx, -v.parity)


def dual_D_power(v: MomentFunctional, n: int) -> MomentFunctional:
    for _ in range(n):
        v = dual_D(v)
    return v


def left_mul(f, v: MomentFunctional) -> MomentFunctional:
    """The functional ``g -> <v, f g>``; loses ``deg f`` orders."""
    if not isinstance(f, SigmaPoly):
        f = SigmaPoly.constant(f, v.context)
    f = f.with_context(v.context) if f.context is None else f
    top = v.order - max(f.degree, 0)
    if top < 0:
        raise TruncationError(
            f"multiplying by a degree-{f.degree} polynomial needs order >= {f.degree}")
    ms = [pair(v, f * SigmaPoly.monomial(k, v.context)) for k in range(top + 1)]
    return MomentFunctional(ms, v.context, v.parity)


# -- Pearson moments ---------------------------------------------------------

def pearson_test_polynomial(phi: SigmaPoly, psi: SigmaPoly, n: int,
                            context: LatticeContext) -> SigmaPoly:
    """``phi * D_s z^n + psi * S_s z^n``; its pairing with a Pearson functional is 0."""
    return phi * D_monomial(n, context) + psi * S_monomial(n, context)


def _pair_parts(phi, psi, context):
    phi = phi.with_context(context) if isinstance(phi, SigmaPoly) else SigmaPoly.constant(phi, context)
    psi = psi.with_context(context) if isinstance(psi, SigmaPoly) else SigmaPoly.constant(psi, context)
    return phi, psi


def solve_pearson_moments(pearson, m0=1, N: int = 8, parity: int = 1,
                          context: Optional[LatticeContext] = None) -> MomentFunctional:
    """Moments ``m_0..m_N`` of the functional solving ``D(phi u) = S(psi u)``.

    ``pearson`` is anything with ``phi``, ``psi`` (SigmaPoly) and ``context``
    attributes.  The relation paired with ``z^n`` involves ``m_0..m_{n+1}``
    and the coefficient of ``m_{n+1}`` is ``d_n``, so the moments follow by
    forward substitution.  Raises :class:`AdmissibilityError` carrying ``n``
    when that coefficient vanishes.
    """
    ctx = context or pearson.context
    phi, psi = _pair_parts(pearson.phi, pearson.psi, ctx)
    parity = _check_parity(parity)
    moments = [SigmaScalar.coerce(m0) if not isinstance(m0, str) else SigmaScalar(m0)]
    for n in range(N):
        t = pearson_test_polynomial(phi, psi, n, ctx)
        if parity == -1:
            t = t.flip()
        lead = t.coefficient(n + 1)
        if lead.is_zero():
            raise AdmissibilityError(f"the coefficient of m_{n + 1} (d_{n}) vanishes", n)
        rest = SigmaScalar()
        for j in range(min(t.degree, n) + 1):
            c = t.coefficient(j)
            if not c.is_zero():
                rest = rest + c * moments[j]
        try:
            moments.append(-rest / lead)
        except ZeroDivisionError:
            raise AdmissibilityError(
                f"the coefficient of m_{n + 1} is a zero divisor ({lead})", n) from None
    return MomentFunctional(moments, ctx, parity)


def solve_pearson_dense(pearson, m0=1, N: int = 8, parity: int = 1,
                        context: Optional[LatticeContext] = None) -> MomentFunctional:
    """Same moments as :func:`solve_pearson_moments` from one dense linear solve.

    All N relations are assembled into an N x N system for ``m_1..m_N``.  The
    sigma-scalar ring splits as two copies of the base field (sigma = +1 and
    sigma = -1), so the system is solved once per component.
    """
    ctx = context or pearson.context
    phi, psi = _pair_parts(pearson.phi, pearson.psi, ctx)
    m0 = SigmaScalar.coerce(m0) if not isinstance(m0, str) else SigmaScalar(m0)
    rows = []
    for n in range(N):
        t = pearson_test_polynomial(phi, psi, n, ctx)
        if parity == -1:
            t = t.flip()
        rows.append([t.coefficient(j) for j in range(N + 1)])
    sols = []
    for sign in (1, -1):
        def comp(x: SigmaScalar) -> ExactScalar:
            return x.plain + x.sigma * sign

        matrix = [[comp(r[j]) for j in range(1, N + 1)] for r in rows]
        rhs = [-(comp(r[0]) * comp(m0)) for r in rows]
        try:
            sols.append(linalg.solve(matrix, rhs) if N else [])
        except ZeroDivisionError:
            raise AdmissibilityError("the Pearson moment system is singular") from None
    half = ONE / 2
    ms = [m0] + [SigmaScalar((p + q) * half, (p - q) * half) for p, q in zip(*sols)]
    return MomentFunctional(ms, ctx, parity)


# -- Hankel oracle -----------------------------------------------------------

@dataclass(frozen=True)
class HankelReport:
    """Output of :func:`hankel_oracle`.

    ``deltas[n]`` is Delta_n for n = 0..N and ``shifted[n]`` is Delta'_n where
    the moments allow it.  ``regular_up_to`` is the largest n with
    Delta_0..Delta_n all nonzero (-1 if m_0 = 0).  ``table`` holds B_n for
    n <= regular_up_to and C_n for 1 <= n <= regular_up_to, restricted to N.
    """

    deltas: tuple
    shifted: tuple
    regular_up_to: int
    table: RecurrenceTable
    first_singular: Optional[int] = None
    horizon: int = 0
    notes: tuple = field(default=())

    def to_json(self) -> dict:
        return {
            "deltas": [str(x) for x in self.deltas],
            "regular_up_to": self.regular_up_to,
            "first_singular": self.first_singular,
            "horizon": self.horizon,
            "table": self.table.to_json(),
        }


def _hankel(ms: Sequence[ExactScalar], n: int, last_shift: int = 0) -> list:
    rows = []
    for i in range(n + 1):
        row = [ms[i + j] for j in range(n)]
        row.append(ms[i + n + last_shift])
        rows.append(row)
    return rows


def hankel_oracle(v: MomentFunctional, N: int) -> HankelReport:
    """Hankel determinants Delta_0..Delta_N and the recurrence they imply.

    Needs ``m_0..m_{2N}``; ``B_N`` additionally uses ``m_{2N+1}`` and is
    omitted when that moment is not stored.  Moments must be sigma-free.
    """
    if 2 * N > v.order:
        raise TruncationError(f"Hankel determinants up to {N} need order {2 * N}, have {v.order}")
    top = min(v.order, 2 * N + 1)
    bad = next((k for k in range(top + 1) if not v.moments[k].is_sigma_free()), None)
    if bad is not None:
        raise SigmaResidueError(f"moment m_{bad} = {v.moments[bad]} carries a sigma part", bad)
    ms = [m.plain for m in v.moments[: top + 1]]
    deltas = [linalg.det(_hankel(ms, n)) for n in range(N + 1)]
    shifted = [linalg.det(_hankel(ms, n, 1)) for n in range(N + 1) if 2 * n + 1 <= top]
    first_singular = next((n for n, d in enumerate(deltas) if d.is_zero()), None)
    regular_up_to = N if first_singular is None else first_singular - 1

    def delta(n: int) -> ExactScalar:
        return ONE if n < 0 else deltas[n]

    def ratio(n: int) -> ExactScalar:
        return ZERO if n < 0 else shifted[n] / deltas[n]

    B, C = [], []
    for n in range(regular_up_to + 1):
        if n < len(shifted):
            B.append(ratio(n) - ratio(n - 1))
        if n >= 1:
            C.append(delta(n) * delta(n - 2) / (delta(n - 1) * delta(n - 1)))
    notes = ()
    if C and len(B) == len(C):
        # B of the top index needs one more moment than is stored
        C.pop()
        notes = (f"B_{len(B)} needs m_{2 * len(B) + 1}; table stops at {len(B) - 1}",)
    table = RecurrenceTable.build(B, C, ms[0] if ms else 1)
    return HankelReport(tuple(deltas), tuple(shifted), regular_up_to, table,
                        first_singular, N, notes)
