"""Exact complex-rational scalars with an optional single quadratic surd.

An :class:`ExactScalar` represents ``x + y*sqrt(D)`` where ``x`` and ``y`` are
Gaussian rationals (``p + q*i`` with ``p, q`` rational) and ``D`` is a
Gaussian rational fixed by the scalar's :class:`Extension`.  Scalars without
an extension form the base field Q(i); they combine freely with scalars of any
extension.  Two scalars carrying different extensions cannot be combined.

Everything is exact: components are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from numbers import Rational
from typing import Optional, Union

from .errors import ContextError, ParseError

Gauss = tuple  # (Fraction, Fraction): re, im

_ZERO = Fraction(0)
_ONE = Fraction(1)


_F0 = Fraction(0)


def _sum(x: Fraction, y: Fraction) -> Fraction:
    if not y:
        return x
    if not x:
        return y
    return x + y


def _gmul(a: Gauss, b: Gauss) -> Gauss:
    (p, q), (r, t) = a, b
    if not q and not t:
        return (p * r, _F0)
    if not q:
        return (p * r, p * t)
    if not t:
        return (p * r, q * r)
    return (p * r - q * t, p * t + q * r)


def _new(re: Fraction, im: Fraction, sre: Fraction = _F0, sim: Fraction = _F0,
         ext: Optional["Extension"] = None) -> "ExactScalar":
    """Build from Fraction parts without validation (internal fast path)."""
    x = object.__new__(ExactScalar)
    x.re, x.im, x.sre, x.sim, x.ext = re, im, sre, sim, ext
    return x


def _ginv(a: Gauss) -> Gauss:
    n = a[0] * a[0] + a[1] * a[1]
    if n == 0:
        raise ZeroDivisionError("division by zero scalar")
    return (a[0] / n, -a[1] / n)


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _gauss_sqrt(a: Gauss) -> Optional[Gauss]:
    """Principal square root in Q(i): real part > 0, or real part 0 and imag >= 0."""
    p, q = a
    if q == 0:
        if p >= 0:
            r = _rational_sqrt(p)
            return None if r is None else (r, _ZERO)
        r = _rational_sqrt(-p)
        return None if r is None else (_ZERO, r)
    modulus = _rational_sqrt(p * p + q * q)
    if modulus is None:
        return None
    u = _rational_sqrt((p + modulus) / 2)
    v = _rational_sqrt((modulus - p) / 2)
    if u is None or v is None:
        return None
    return (u, v if q > 0 else -v)


class Extension:
    """The quadratic extension Q(i)(sqrt(D)); D must be a non-square in Q(i)."""

    __slots__ = ("disc",)

    def __init__(self, disc):
        d = as_scalar(disc)
        if d.ext is not None and d.has_surd:
            raise ContextError("discriminant must lie in the base field Q(i)")
        g = d.gauss
        if g == (_ZERO, _ZERO):
            raise ValueError("discriminant must be nonzero")
        if _gauss_sqrt(g) is not None:
            raise ValueError(f"{d} is a perfect square in Q(i); no extension needed")
        self.disc: Gauss = g

    @property
    def D(self) -> "ExactScalar":
        return ExactScalar(self.disc[0], self.disc[1])

    @property
    def root(self) -> "ExactScalar":
        """The element sqrt(D) of this extension."""
        return ExactScalar(0, 0, 1, 0, ext=self)

    def lift(self, x) -> "ExactScalar":
        x = as_scalar(x)
        if x.ext is not None and x.ext != self:
            raise ContextError("scalar belongs to a different extension")
        return ExactScalar(x.re, x.im, x.sre, x.sim, ext=self)

    def __eq__(self, other) -> bool:
        return isinstance(other, Extension) and self.disc == other.disc

    def __hash__(self) -> int:
        return hash(("ext",) + self.disc)

    def __repr__(self) -> str:
        return f"Extension({self.D})"


class ExactScalar:
    """Immutable exact value ``(re + im*i) + (sre + sim*i)*sqrt(D)``."""

    __slots__ = ("re", "im", "sre", "sim", "ext")

    def __init__(self, re=0, im=0, sre=0, sim=0, ext: Optional[Extension] = None):
        self.re = Fraction(re)
        self.im = Fraction(im)
        self.sre = Fraction(sre)
        self.sim = Fraction(sim)
        if ext is None and (self.sre or self.sim):
            raise ContextError("surd parts require an extension context")
        self.ext = ext

    # -- structure -------------------------------------------------------
    @property
    def gauss(self) -> Gauss:
        return (self.re, self.im)

    @property
    def surd(self) -> Gauss:
        return (self.sre, self.sim)

    @property
    def has_surd(self) -> bool:
        return bool(self.sre or self.sim)

    @property
    def discriminant(self) -> "ExactScalar":
        """D of the context (zero for the base field)."""
        return ExactScalar() if self.ext is None else self.ext.D

    def is_zero(self) -> bool:
        return not (self.re or self.im or self.sre or self.sim)

    def is_rational(self) -> bool:
        return not (self.im or self.sre or self.sim)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.re

    def conjugate_surd(self) -> "ExactScalar":
        """Image under sqrt(D) -> -sqrt(D)."""
        return ExactScalar(self.re, self.im, -self.sre, -self.sim, ext=self.ext)

    def base_part(self) -> "ExactScalar":
        return ExactScalar(self.re, self.im)

    # -- arithmetic ------------------------------------------------------
    def _join(self, other: "ExactScalar") -> Optional[Extension]:
        a, b = self.ext, other.ext
        if a is None:
            return b
        if b is None or a == b:
            return a
        raise ContextError(f"cannot mix scalars from {a} and {b}")

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        ext = self._join(other) if (self.ext is not other.ext) else self.ext
        return _new(_sum(self.re, other.re), _sum(self.im, other.im),
                    _sum(self.sre, other.sre), _sum(self.sim, other.sim), ext)

    __radd__ = __add__

    def __neg__(self):
        return _new(-self.re, -self.im, -self.sre, -self.sim, self.ext)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        ext = self._join(other) if (self.ext is not other.ext) else self.ext
        x1, x2 = (self.re, self.im), (other.re, other.im)
        if ext is None or not (self.sre or self.sim or other.sre or other.sim):
            re, im = _gmul(x1, x2)
            return _new(re, im, _F0, _F0, ext)
        y1, y2 = self.surd, other.surd
        yy = _gmul(_gmul(y1, y2), ext.disc)
        xx = _gmul(x1, x2)
        xy = _gmul(x1, y2)
        yx = _gmul(y1, x2)
        return ExactScalar(xx[0] + yy[0], xx[1] + yy[1], xy[0] + yx[0], xy[1] + yx[1], ext)

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        if not self.has_surd:
            re, im = _ginv(self.gauss)
            return ExactScalar(re, im, 0, 0, self.ext)
        x, y = self.gauss, self.surd
        y2d = _gmul(_gmul(y, y), self.ext.disc)
        xx = _gmul(x, x)
        norm_inv = _ginv((xx[0] - y2d[0], xx[1] - y2d[1]))
        a = _gmul(x, norm_inv)
        b = _gmul(y, norm_inv)
        return ExactScalar(a[0], a[1], -b[0], -b[1], self.ext)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        self._join(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ExactScalar(1, 0, 0, 0, self.ext)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison --------------------------------------------------------
    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._join(other)
        return (self.re == other.re and self.im == other.im
                and self.sre == other.sre and self.sim == other.sim)

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self) -> int:
        if not (self.im or self.sre or self.sim):
            return hash(self.re)
        return hash((self.re, self.im, self.sre, self.sim))

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- text ------------------------------------------------------------
    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"ExactScalar('{format_scalar(self)}')"


ScalarLike = Union[ExactScalar, int, Fraction, str]

ZERO = ExactScalar()
ONE = ExactScalar(1)
I = ExactScalar(0, 1)


def _coerce(x):
    if type(x) is ExactScalar:
        return x
    if isinstance(x, int):
        return _new(Fraction(x), _F0)
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, Rational):
        return ExactScalar(Fraction(x))
    return NotImplemented


def as_scalar(x: ScalarLike) -> ExactScalar:
    """Coerce ints, Fractions, complex-rational strings and scalars."""
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, (int, Rational)):
        return ExactScalar(Fraction(x))
    raise TypeError(f"cannot interpret {x!r} as an exact scalar")


def sqrt_exact(x: ScalarLike) -> Optional[ExactScalar]:
    """Square root of a base-field scalar when it is a perfect square in Q(i).

    Returns the principal root (positive real part, or zero real part and
    non-negative imaginary part), or ``None`` when no Gaussian-rational root
    exists.
    """
    x = as_scalar(x)
    if x.has_surd:
        raise ValueError("sqrt_exact expects a scalar without surd part")
    r = _gauss_sqrt(x.gauss)
    if r is None:
        return None
    return ExactScalar(r[0], r[1], 0, 0, x.ext)


def sqrt_in(x: ScalarLike, ext: Optional[Extension]) -> Optional[ExactScalar]:
    """Square root of a base-field ``x`` inside Q(i) or Q(i)(sqrt(D)).

    Besides perfect squares, a root exists in the extension exactly when
    ``x/D`` is a square, in which case the result is ``y*sqrt(D)``.
    """
    x = as_scalar(x)
    root = sqrt_exact(x)
    if root is not None or ext is None:
        return root if root is None or ext is None else ext.lift(root)
    y = _gauss_sqrt(_gmul(x.gauss, _ginv(ext.disc)))
    if y is None:
        return None
    return ExactScalar(0, 0, y[0], y[1], ext)


def root_of(x: ScalarLike, ext: Optional[Extension] = None) -> ExactScalar:
    """A square root of ``x``, opening the extension sqrt(x) when needed.

    Raises :class:`NeedsTwoExtensions` when ``ext`` is given and the root
    lies in neither Q(i) nor ``ext``.
    """
    from .errors import NeedsTwoExtensions

    x = as_scalar(x)
    if x.has_surd:
        raise ValueError("root_of expects a scalar without surd part")
    ext = ext or x.ext
    r = sqrt_in(x, ext)
    if r is not None:
        return r
    if ext is not None:
        raise NeedsTwoExtensions([ext.D, x.base_part()])
    return Extension(x).root


# -- text format ------------------------------------------------------------

def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_gauss(g: Gauss) -> str:
    re, im = g
    if not im:
        return _fmt_q(re)
    if im == 1:
        ims = "i"
    elif im == -1:
        ims = "-i"
    else:
        ims = _fmt_q(im) + "i"
    if not re:
        return ims
    return _fmt_q(re) + ("" if ims.startswith("-") else "+") + ims


def format_scalar(x: ExactScalar) -> str:
    """Serialize as ``re+imi`` with an optional ``y*sqrt(D)`` term.

    A complex ``y`` is parenthesized, a rational one is not and a unit
    coefficient is dropped.
    """
    base = _fmt_gauss(x.gauss)
    if not x.has_surd:
        return base
    root = f"sqrt({_fmt_gauss(x.ext.disc)})"
    re, im = x.surd
    if im:
        surd, sign = f"({_fmt_gauss(x.surd)})*{root}", "+"
    else:
        sign = "-" if re < 0 else "+"
        mag = abs(re)
        surd = root if mag == 1 else f"{_fmt_gauss((mag, _ZERO))}*{root}"
    if x.gauss == (_ZERO, _ZERO):
        return surd if sign == "+" else "-" + surd
    return f"{base}{sign}{surd}"


def parse_scalar(text: str, ext: Optional[Extension] = None) -> ExactScalar:
    """Parse text such as ``"3/4-2/5i"`` or ``"1/2+sqrt(2)"``."""
    from .textformat import evaluate

    value = evaluate(text, allow_z=False, allow_s=False, ext=ext)
    if not isinstance(value, ExactScalar):
        raise ParseError("expected a scalar", text)
    return value
