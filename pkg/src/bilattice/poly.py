"""Dense univariate polynomials over :class:`ExactScalar`."""

from __future__ import annotations

from typing import Iterable, Sequence

from .scalar import ONE, ZERO, ExactScalar, as_scalar

#: Degree reported for the zero polynomial.
ZERO_DEGREE = -1


def _strip(coeffs: list) -> tuple:
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Immutable polynomial ``c[0] + c[1] t + ... + c[n] t^n``."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        self.c: tuple = _strip([as_scalar(x) for x in coeffs])

    @classmethod
    def _raw(cls, coeffs: list) -> "Poly":
        p = cls.__new__(cls)
        p.c = _strip(coeffs)
        return p

    @classmethod
    def monomial(cls, k: int, coeff=1) -> "Poly":
        return cls._raw([ZERO] * k + [as_scalar(coeff)])

    @classmethod
    def linear_factors(cls, roots_or_pairs: Sequence) -> "Poly":
        """Product of ``(slope*t + offset)`` for each ``(slope, offset)`` pair."""
        out = cls([1])
        for slope, offset in roots_or_pairs:
            out = out * cls([offset, slope])
        return out

    @property
    def degree(self) -> int:
        return len(self.c) - 1 if self.c else ZERO_DEGREE

    def coeff(self, k: int) -> ExactScalar:
        return self.c[k] if 0 <= k < len(self.c) else ZERO

    @property
    def lead(self) -> ExactScalar:
        return self.c[-1] if self.c else ZERO

    def is_zero(self) -> bool:
        return not self.c

    def __iter__(self):
        return iter(self.c)

    def __len__(self) -> int:
        return len(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, (ExactScalar, int)):
            return self == Poly([other])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.c)

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, x in enumerate(b):
            out[k] = out[k] + x
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw([-x for x in self.c])

    def __sub__(self, other) -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (ExactScalar, int)):
            s = as_scalar(other)
            return Poly._raw([x * s for x in self.c])
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.c or not other.c:
            return Poly()
        out = [ZERO] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x.is_zero():
                continue
            for j, y in enumerate(other.c):
                out[i + j] = out[i + j] + x * y
        return Poly._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Poly":
        inv = as_scalar(scalar).inverse()
        return Poly._raw([x * inv for x in self.c])

    def __pow__(self, k: int) -> "Poly":
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, t) -> ExactScalar:
        """Horner evaluation; ``t`` may be any ring element supporting * and +."""
        acc = ZERO
        for x in reversed(self.c):
            acc = acc * t + x
        return acc

    def shift(self, h) -> "Poly":
        """The polynomial ``t -> self(t + h)`` (Taylor shift)."""
        h = as_scalar(h)
        c = list(self.c)
        n = len(c)
        if h.is_zero() or n < 2:
            return self
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] = c[j] + h * c[j + 1]
        return Poly._raw(c)

    def compose_affine(self, scale, offset) -> "Poly":
        """The polynomial ``t -> self(scale*t + offset)``."""
        scale, offset = as_scalar(scale), as_scalar(offset)
        shifted = self.shift(offset).c
        out, p = [], ONE
        for x in shifted:
            out.append(x * p)
            p = p * scale
        return Poly._raw(out)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        dq = other.degree
        inv = other.lead.inverse()
        quot = [ZERO] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            q = rem[k] * inv
            if q.is_zero():
                continue
            quot[k - dq] = q
            for j, y in enumerate(other.c):
                rem[k - dq + j] = rem[k - dq + j] - q * y
        return Poly._raw(quot), Poly._raw(rem[:dq] if dq > 0 else [])

    def monic(self) -> "Poly":
        return self / self.lead if self.c else self

    def derivative(self) -> "Poly":
        return Poly._raw([x * k for k, x in enumerate(self.c)][1:])

    def __repr__(self) -> str:
        return f"Poly([{', '.join(str(x) for x in self.c)}])"


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly([x])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


class RationalFunction:
    """Quotient of polynomials in one variable, reduced by their gcd.

    Used as a perturbation device: a parameter p is replaced by ``p + eps``
    (:func:`perturbed`), a closed form is evaluated with ordinary arithmetic,
    and :func:`limit_at_zero` returns its value at ``eps = 0``.  A factor that
    vanishes in both numerator and denominator then cancels instead of
    producing 0/0.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        den = Poly([1]) if den is None else den
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = Poly(), Poly([1])
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num.divmod(g)[0], den.divmod(g)[0]
        scale = den.lead
        self.num, self.den = num / scale, den / scale

    @staticmethod
    def _coerce(x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        return RationalFunction(_as_poly(x))

    def __add__(self, other) -> "RationalFunction":
        other = RationalFunction._coerce(other)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-RationalFunction._coerce(other))

    def __rsub__(self, other) -> "RationalFunction":
        return RationalFunction._coerce(other) - self

    def __mul__(self, other) -> "RationalFunction":
        other = RationalFunction._coerce(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = RationalFunction._coerce(other)
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        return RationalFunction._coerce(other) / self

    def __pow__(self, k: int) -> "RationalFunction":
        return RationalFunction(self.num ** k, self.den ** k)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __call__(self, t) -> ExactScalar:
        d = self.den(t)
        if d.is_zero():
            raise ZeroDivisionError(f"denominator vanishes at {t}")
        return self.num(t) / d


def perturbed(value) -> RationalFunction:
    """``value + eps`` as a rational function of eps."""
    return RationalFunction(Poly([as_scalar(value), ONE]))


def limit_at_zero(x) -> ExactScalar:
    """Value at ``eps = 0``; raises ``ZeroDivisionError`` at a genuine pole."""
    if isinstance(x, RationalFunction):
        return x(ZERO)
    return as_scalar(x)
