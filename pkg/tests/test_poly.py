import pytest
from conftest import gaussian
from hypothesis import given
from hypothesis import strategies as st

from bilattice.poly import Poly, RationalFunction, limit_at_zero, perturbed, poly_gcd
from bilattice.scalar import as_scalar

polys = st.lists(gaussian(), min_size=0, max_size=6).map(Poly)


def test_basic_arithmetic():
    z = Poly([0, 1])
    p = (z - 1) * (z + 2)
    assert p == Poly([-2, 1, 1])
    assert p.degree == 2 and p(3) == 10
    assert Poly().degree < 0
    q, r = p.divmod(z - 1)
    assert q == z + 2 and r.is_zero()


@given(polys, gaussian(), gaussian())
def test_shift_is_composition(p, h, t):
    assert p.shift(h)(t) == p(t + h)


@given(polys, gaussian(), gaussian())
def test_compose_affine(p, s, h):
    assert p.compose_affine(s, h)(2) == p(s * 2 + h)


@given(polys, polys)
def test_divmod_identity(a, b):
    if b.is_zero():
        return
    q, r = a.divmod(b)
    assert q * b + r == a and r.degree < b.degree


def test_gcd_and_reduction():
    z = Poly([0, 1])
    a, b = (z - 1) * (z + 3), (z - 1) * (z - 5)
    assert poly_gcd(a, b) == z - 1
    f = RationalFunction(a, b)
    assert f(0) == as_scalar("-3/5")  # (z + 3)/(z - 5) after cancelling z - 1
    assert f.den.lead == 1


def test_rational_function_pole():
    f = RationalFunction(Poly([1]), Poly([0, 1]))
    with pytest.raises(ZeroDivisionError):
        f(0)


def test_limit_resolves_removable_parameter_singularity():
    # (n + 2a - 1) / (2n + 2a - 1) at n = 0, a = 1/2 has the limit 1
    a = perturbed("1/2")
    n = 0
    assert limit_at_zero((n + 2 * a - 1) / (2 * n + 2 * a - 1)) == 1
    assert limit_at_zero(as_scalar(5)) == 5


def test_limit_keeps_genuine_pole():
    a = perturbed(0)
    with pytest.raises(ZeroDivisionError):
        limit_at_zero(1 / (a * a) * a)
