"""The twisted ring of polynomials in ``z = x(s)`` and ``sigma = (-1)^s``.

On the bi-lattice ``x(s) = s + gamma*(1 + (-1)^s)`` a function of ``s`` of the
form ``p(x(s)) + (-1)^s q(x(s))`` is stored as a :class:`SigmaPoly` with
``even_part = p`` and ``odd_part = q``.  The variable ``s`` itself never
appears: neighbouring lattice points satisfy

    x(s +/- 1) = z +/- 1 - 2*gamma*sigma,    sigma(s +/- 1) = -sigma,

so a unit shift is "flip the sign of sigma, then substitute
z -> z +/- 1 - 2*gamma*sigma".  ``D`` and ``S`` are half the difference and
half the sum of the two shifts.

Internally shifts are done in the split form ``f(sigma=+1)``, ``f(sigma=-1)``:
the two components are ordinary polynomials and every ring operation acts on
them independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Union

from .errors import ContextError
from .poly import ZERO_DEGREE, Poly
from .scalar import ONE, ZERO, ExactScalar, ScalarLike, as_scalar


@dataclass(frozen=True)
class LatticeContext:
    """The bi-lattice parameter gamma."""

    gamma: ExactScalar

    def __init__(self, gamma: ScalarLike = 0):
        object.__setattr__(self, "gamma", as_scalar(gamma))

    def __str__(self) -> str:
        return f"gamma={self.gamma}"


def _join(a: Optional[LatticeContext], b: Optional[LatticeContext]) -> Optional[LatticeContext]:
    if a is None:
        return b
    if b is None or a == b:
        return a
    raise ContextError(f"cannot combine polynomials from {a} and {b}")


class SigmaScalar:
    """An element ``plain + sigma*sigma_part`` of Q(i)[sigma]/(sigma^2 - 1)."""

    __slots__ = ("plain", "sigma")

    def __init__(self, plain: ScalarLike = 0, sigma: ScalarLike = 0):
        self.plain = as_scalar(plain)
        self.sigma = as_scalar(sigma)

    @classmethod
    def coerce(cls, x) -> "SigmaScalar":
        return x if isinstance(x, SigmaScalar) else cls(x)

    def is_sigma_free(self) -> bool:
        return self.sigma.is_zero()

    def is_zero(self) -> bool:
        return self.plain.is_zero() and self.sigma.is_zero()

    def flip(self) -> "SigmaScalar":
        """Image under sigma -> -sigma."""
        return SigmaScalar(self.plain, -self.sigma)

    def __add__(self, other):
        o = _sigma_coerce(other)
        if o is NotImplemented:
            return o
        return SigmaScalar(self.plain + o.plain, self.sigma + o.sigma)

    __radd__ = __add__

    def __neg__(self):
        return SigmaScalar(-self.plain, -self.sigma)

    def __sub__(self, other):
        o = _sigma_coerce(other)
        if o is NotImplemented:
            return o
        return SigmaScalar(self.plain - o.plain, self.sigma - o.sigma)

    def __rsub__(self, other):
        o = _sigma_coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = _sigma_coerce(other)
        if o is NotImplemented:
            return o
        return SigmaScalar(self.plain * o.plain + self.sigma * o.sigma,
                           self.plain * o.sigma + self.sigma * o.plain)

    __rmul__ = __mul__

    def inverse(self) -> "SigmaScalar":
        norm = self.plain * self.plain - self.sigma * self.sigma
        if norm.is_zero():
            raise ZeroDivisionError(f"{self} is a zero divisor")
        inv = norm.inverse()
        return SigmaScalar(self.plain * inv, -self.sigma * inv)

    def __truediv__(self, other):
        o = _sigma_coerce(other)
        if o is NotImplemented:
            return o
        if o.sigma.is_zero():
            inv = o.plain.inverse()
            return SigmaScalar(self.plain * inv, self.sigma * inv)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _sigma_coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        out = SigmaScalar(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        o = _sigma_coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.plain == o.plain and self.sigma == o.sigma

    def __hash__(self) -> int:
        return hash(self.plain) if self.sigma.is_zero() else hash((self.plain, self.sigma))

    def __str__(self) -> str:
        if self.sigma.is_zero():
            return str(self.plain)
        return f"{self.plain} + s*({self.sigma})"

    def __repr__(self) -> str:
        return f"SigmaScalar('{self.plain}', '{self.sigma}')"

    def to_json(self) -> dict:
        return {"plain": str(self.plain), "sigma": str(self.sigma)}

    @classmethod
    def from_json(cls, data: dict) -> "SigmaScalar":
        return cls(as_scalar(data["plain"]), as_scalar(data["sigma"]))


SIGMA = SigmaScalar(0, 1)


def _sigma_coerce(x):
    if isinstance(x, SigmaScalar):
        return x
    if isinstance(x, (ExactScalar, int)):
        return SigmaScalar(x)
    from fractions import Fraction

    if isinstance(x, Fraction):
        return SigmaScalar(x)
    return NotImplemented


Coefficient = Union[ScalarLike, SigmaScalar]


class SigmaPoly:
    """Element ``p(z) + sigma*q(z)`` of the twisted ring, with sigma^2 = 1."""

    __slots__ = ("even", "odd", "context")

    def __init__(self, even: Iterable = (), odd: Iterable = (),
                 context: Optional[LatticeContext] = None):
        self.even = even if isinstance(even, Poly) else Poly(even)
        self.odd = odd if isinstance(odd, Poly) else Poly(odd)
        self.context = context

    # -- constructors ------------------------------------------------------
    @classmethod
    def constant(cls, value: Coefficient, context=None) -> "SigmaPoly":
        v = SigmaScalar.coerce(value) if not isinstance(value, str) else SigmaScalar(value)
        return cls([v.plain], [v.sigma], context)

    @classmethod
    def z(cls, context=None) -> "SigmaPoly":
        return cls([0, 1], [], context)

    @classmethod
    def monomial(cls, n: int, context=None) -> "SigmaPoly":
        return cls(Poly.monomial(n), Poly(), context)

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[Coefficient], context=None) -> "SigmaPoly":
        """Build from a list of (sigma-)scalar coefficients of z^0, z^1, ..."""
        cs = [SigmaScalar.coerce(as_scalar(c) if isinstance(c, str) else c) for c in coeffs]
        return cls([c.plain for c in cs], [c.sigma for c in cs], context)

    @classmethod
    def _split(cls, plus: Poly, minus: Poly, context) -> "SigmaPoly":
        half = ExactScalar(1, 0) / 2
        return cls((plus + minus) * half, (plus - minus) * half, context)

    # -- structure -------------------------------------------------------
    @property
    def even_part(self) -> Poly:
        return self.even

    @property
    def odd_part(self) -> Poly:
        return self.odd

    @property
    def degree(self) -> int:
        return max(self.even.degree, self.odd.degree)

    def coefficient(self, k: int) -> SigmaScalar:
        return SigmaScalar(self.even.coeff(k), self.odd.coeff(k))

    def coefficients(self) -> list:
        return [self.coefficient(k) for k in range(self.degree + 1)]

    def is_zero(self) -> bool:
        return self.even.is_zero() and self.odd.is_zero()

    def is_sigma_free(self) -> bool:
        return self.odd.is_zero()

    def with_context(self, context: Optional[LatticeContext]) -> "SigmaPoly":
        return SigmaPoly(self.even, self.odd, context)

    def flip(self) -> "SigmaPoly":
        """Image under sigma -> -sigma."""
        return SigmaPoly(self.even, -self.odd, self.context)

    def components(self) -> tuple[Poly, Poly]:
        """``(f at sigma=+1, f at sigma=-1)``."""
        return self.even + self.odd, self.even - self.odd

    # -- ring operations -----------------------------------------------------
    def _coerce(self, other) -> Optional["SigmaPoly"]:
        if isinstance(other, SigmaPoly):
            return other
        if isinstance(other, (ExactScalar, SigmaScalar, int)):
            return SigmaPoly.constant(other, self.context)
        from fractions import Fraction

        if isinstance(other, Fraction):
            return SigmaPoly.constant(other, self.context)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return SigmaPoly(self.even + o.even, self.odd + o.odd, _join(self.context, o.context))

    __radd__ = __add__

    def __neg__(self):
        return SigmaPoly(-self.even, -self.odd, self.context)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return SigmaPoly(self.even - o.even, self.odd - o.odd, _join(self.context, o.context))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (ExactScalar, int)):
            s = as_scalar(other)
            return SigmaPoly(self.even * s, self.odd * s, self.context)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ctx = _join(self.context, o.context)
        p1, q1, p2, q2 = self.even, self.odd, o.even, o.odd
        return SigmaPoly(p1 * p2 + q1 * q2, p1 * q2 + q1 * p2, ctx)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        s = as_scalar(scalar) if not isinstance(scalar, SigmaScalar) else scalar
        if isinstance(s, SigmaScalar):
            return self * s.inverse()
        inv = s.inverse()
        return SigmaPoly(self.even * inv, self.odd * inv, self.context)

    def __pow__(self, k: int):
        out = SigmaPoly.constant(1, self.context)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        _join(self.context, o.context)
        return self.even == o.even and self.odd == o.odd

    def __hash__(self) -> int:
        return hash((self.even, self.odd))

    def __call__(self, point) -> SigmaScalar:
        """Evaluate at ``z = point`` (a sigma-scalar), computing in Q(i)[sigma]."""
        pt = SigmaScalar.coerce(point)
        acc = SigmaScalar()
        for k in range(self.degree, -1, -1):
            acc = acc * pt + self.coefficient(k)
        return acc

    # -- text ------------------------------------------------------------
    def __str__(self) -> str:
        return format_sigma_poly(self)

    def __repr__(self) -> str:
        return f"SigmaPoly('{format_sigma_poly(self)}', {self.context})"

    def to_json(self) -> dict:
        return {
            "even": [str(x) for x in self.even],
            "odd": [str(x) for x in self.odd],
            "gamma": None if self.context is None else str(self.context.gamma),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SigmaPoly":
        gamma = data.get("gamma")
        ctx = None if gamma is None else LatticeContext(gamma)
        return cls([as_scalar(x) for x in data["even"]], [as_scalar(x) for x in data["odd"]], ctx)


def _require_context(f: SigmaPoly) -> LatticeContext:
    if f.context is None:
        raise ContextError("a lattice context (gamma) is required for D_s / S_s")
    return f.context


def _shifts(f: SigmaPoly) -> tuple[tuple[Poly, Poly], tuple[Poly, Poly]]:
    """Components of f(s+1) and f(s-1).

    f(s+1) at sigma = +1 reads f at sigma = -1 with z -> z + 1 - 2 gamma, and
    symmetrically for the other component.
    """
    g = _require_context(f).gamma
    try:
        return _cached_shifts(f.even, f.odd, g)
    except ContextError:
        # a cache probe compared scalars from different extensions
        return _shifts_of(f.even, f.odd, g)


def _shifts_of(even: Poly, odd: Poly, g: ExactScalar):
    plus, minus = even + odd, even - odd
    fwd = (minus.shift(1 - 2 * g), plus.shift(1 + 2 * g))
    bwd = (minus.shift(-1 - 2 * g), plus.shift(-1 + 2 * g))
    return fwd, bwd


_cached_shifts = lru_cache(maxsize=1024)(_shifts_of)


def apply_D(f: SigmaPoly) -> SigmaPoly:
    """``(f(x(s+1)) - f(x(s-1))) / 2`` on the bi-lattice."""
    (fp, fm), (bp, bm) = _shifts(f)
    half = ExactScalar(1) / 2
    return SigmaPoly._split((fp - bp) * half, (fm - bm) * half, f.context)


def apply_S(f: SigmaPoly) -> SigmaPoly:
    """``(f(x(s+1)) + f(x(s-1))) / 2`` on the bi-lattice."""
    (fp, fm), (bp, bm) = _shifts(f)
    half = ExactScalar(1) / 2
    return SigmaPoly._split((fp + bp) * half, (fm + bm) * half, f.context)


def apply_D_power(f: SigmaPoly, n: int) -> SigmaPoly:
    for _ in range(n):
        f = apply_D(f)
    return f


@lru_cache(maxsize=4096)
def D_monomial(n: int, context: LatticeContext) -> SigmaPoly:
    """Cached ``D_s z^n``."""
    return apply_D(SigmaPoly.monomial(n, context))


@lru_cache(maxsize=4096)
def S_monomial(n: int, context: LatticeContext) -> SigmaPoly:
    """Cached ``S_s z^n``."""
    return apply_S(SigmaPoly.monomial(n, context))


def leibniz_T(n: int, k: int, f: SigmaPoly) -> SigmaPoly:
    """``T_{n,k} f`` from ``T_{0,0} f = f`` and ``T_{n,k} = S T_{n-1,k} + D T_{n-1,k-1}``."""
    zero = SigmaPoly([], [], f.context)
    if k < 0 or k > n:
        return zero
    row = [f]
    for m in range(1, n + 1):
        lo = max(0, k - (n - m))
        new = []
        for j in range(m + 1):
            if j < lo or j > k:
                new.append(zero)
                continue
            term = apply_S(row[j]) if j < len(row) and not row[j].is_zero() else zero
            if j >= 1 and not row[j - 1].is_zero():
                term = term + apply_D(row[j - 1])
            new.append(term)
        row = new
    return row[k]


def leibniz_T_closed(n: int, k: int, f: SigmaPoly) -> SigmaPoly:
    """Closed forms of ``T_{n,k} f`` for ``deg f <= 2`` (zero for k > 2)."""
    if f.degree > 2 or not f.is_sigma_free():
        raise ValueError("closed forms need a sigma-free f of degree <= 2")
    ctx = _require_context(f)
    a, b = f.even.coeff(2), f.even.coeff(1)
    g = ctx.gamma
    z = SigmaPoly.z(ctx)
    parity = 1 - (-1) ** n
    w = z - SIGMA * (g * parity)
    fprime = SigmaPoly([b, 2 * a], [], ctx)
    f2 = 2 * a
    if k == 0:
        fw = w * w * a + w * b + SigmaPoly.constant(f.even.coeff(0), ctx)
        return fw + SigmaPoly.constant(a * n, ctx)
    if k == 1:
        return (fprime - SIGMA * (g * parity * f2)) * n
    if k == 2:
        return SigmaPoly.constant(a * (n * (n - 1)), ctx)
    return SigmaPoly([], [], ctx)


def expansion_coefficients(n: int, gamma: ScalarLike) -> dict[str, SigmaScalar]:
    """Top coefficients of ``D_s z^n`` and ``S_s z^n`` by closed formula.

    Keys ``u, v, w`` give the coefficients of z^(n-3), z^(n-4), z^(n-5) in
    ``D_s z^n``; ``uh, vh, wh`` those of z^(n-2), z^(n-3), z^(n-4) in
    ``S_s z^n``.  ``D1, D2`` and ``S1`` are the two leading coefficients.
    """
    g = as_scalar(gamma)
    g2 = g * g
    return {
        "D0": SigmaScalar(n),
        "D1": SigmaScalar(0, -2 * n * (n - 1) * g),
        "u": SigmaScalar(_falling(n, 3) * (1 + 12 * g2) / 6),
        "v": SigmaScalar(0, -g * _falling(n, 4) * (1 + 4 * g2) / 3),
        "w": SigmaScalar(_falling(n, 5) * (1 + 40 * g2 + 80 * g2 * g2) / 120),
        "S0": SigmaScalar(1),
        "S1": SigmaScalar(0, -2 * n * g),
        "uh": SigmaScalar(_falling(n, 2) * (1 + 4 * g2) / 2),
        "vh": SigmaScalar(0, -g * _falling(n, 3) * (4 * g2 + 3) / 3),
        "wh": SigmaScalar(_falling(n, 4) * (1 + 24 * g2 + 16 * g2 * g2) / 24),
    }


def _falling(n: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= n - j
    return out


def format_sigma_poly(f: SigmaPoly) -> str:
    """Text form ``c0 + c1*z + ... + s*(d0 + d1*z + ...)``."""
    even = _format_poly(f.even)
    if f.odd.is_zero():
        return even
    odd = _format_poly(f.odd)
    if f.even.is_zero():
        return f"s*({odd})"
    return f"{even} + s*({odd})"


def _format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    terms = []
    for k, c in enumerate(p):
        if c.is_zero():
            continue
        cs = str(c)
        if k == 0:
            terms.append(cs)
            continue
        mono = "z" if k == 1 else f"z^{k}"
        if cs == "1":
            terms.append(mono)
        elif cs == "-1":
            terms.append(f"-{mono}")
        else:
            terms.append(f"({cs})*{mono}")
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def parse_sigma_poly(text: str, context: Optional[LatticeContext] = None) -> SigmaPoly:
    """Parse text in the format produced by :func:`format_sigma_poly`."""
    from .textformat import evaluate

    value = evaluate(text, context=context)
    if isinstance(value, ExactScalar):
        return SigmaPoly.constant(value, context)
    return value.with_context(context) if value.context is None else value


__all__ = [
    "LatticeContext", "SigmaScalar", "SigmaPoly", "SIGMA", "apply_D", "apply_S",
    "apply_D_power", "D_monomial", "S_monomial", "leibniz_T", "leibniz_T_closed",
    "expansion_coefficients", "format_sigma_poly", "parse_sigma_poly", "ZERO_DEGREE",
    "ONE", "ZERO",
]
