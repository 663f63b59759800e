from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracorbit.algebraic import parse_algebraic
from fracorbit.field import NumberFieldElement, sqrt_in_field

PHI = parse_algebraic([-1, -1, 1])
CUBIC = parse_algebraic([-1, 0, 0, -1, 0, 1])  # x^5 - x^2 - 1


def test_generator_satisfies_minpoly():
    a = NumberFieldElement.generator(PHI)
    assert (a * a - a - 1).is_zero()
    assert (a**-1 - (a - 1)).is_zero()


def test_trace_and_embedding():
    a = NumberFieldElement.generator(PHI)
    assert a.trace() == 1
    assert (a * a).trace() == 3
    enc = (a**10).embed(80)
    # phi^10 = (123 + 55 sqrt5) / 2
    assert enc.hi - enc.lo <= Fraction(1, 1 << 70)
    assert abs(float(enc.mid) - (123 + 55 * 5**0.5) / 2) < 1e-12


def test_sqrt5_in_golden_field():
    s = sqrt_in_field(5, PHI)
    assert (s * s - 5).is_zero()
    assert abs(float(s) - 5**0.5) < 1e-15


def test_conjugate_values_of_generator():
    vals = NumberFieldElement.generator(PHI).conjugate_values(80)
    assert sorted(float(v.real) for v in map(complex, vals)) == pytest.approx([-0.6180339887, 1.6180339887])


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        NumberFieldElement.rational(0, PHI).inverse()


coords = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=5, max_size=5)


@settings(max_examples=40, deadline=None)
@given(coords, coords)
def test_field_ring_laws(x, y):
    a = NumberFieldElement.from_coords(x, CUBIC)
    b = NumberFieldElement.from_coords(y, CUBIC)
    assert ((a + b) * (a - b) - (a * a - b * b)).is_zero()
    if not b.is_zero():
        assert ((a / b) * b - a).is_zero()
    ea, eb = a.embed(100), b.embed(100)
    prod = (a * b).embed(100)
    assert abs(float(prod.mid) - float(ea.mid) * float(eb.mid)) <= 1e-9 * (1 + abs(float(prod.mid)))
