from fractions import Fraction

import pytest

from fracorbit.algebraic import parse_algebraic
from fracorbit.errors import ValidationError
from fracorbit.realspec import (
    KEMPNER,
    LIOUVILLE,
    FieldSpec,
    LacunarySpec,
    RationalSpec,
    dyadic_enclosure,
    parse_realspec,
)

PHI = parse_algebraic([-1, -1, 1])


def test_short_forms():
    assert parse_realspec("1/3") == RationalSpec(Fraction(1, 3))
    assert parse_realspec("lacunary:2^k") == KEMPNER
    assert parse_realspec("lacunary:[1,3,7]").exponents == (1, 3, 7)
    f = parse_realspec("field:[-1/5,2/5]", PHI)
    assert isinstance(f, FieldSpec)
    # (2 phi - 1) / 5 = sqrt5 / 5
    assert abs(float(f.element) - 5**-0.5) < 1e-15
    assert parse_realspec("const:pi").enclosure(64).lo < Fraction(355, 113)


def test_json_round_trip():
    for spec in (RationalSpec(Fraction(-7, 4)), LIOUVILLE, LacunarySpec("list", (2, 5))):
        assert parse_realspec(spec.to_json()) == spec
    f = parse_realspec({"variant": "field", "coords": ["0", "1"]}, PHI)
    assert parse_realspec(f.to_json(), PHI) == f


@pytest.mark.parametrize("bad", ["0", "lacunary:[3,3]", "lacunary:fib", "nope:1", "const:sqrt4", "{\"variant\": \"x\"}"])
def test_rejections(bad):
    with pytest.raises(ValidationError):
        parse_realspec(bad)


def test_field_needs_alpha_and_matching_minpoly():
    with pytest.raises(ValidationError):
        parse_realspec("field:[1,1]")
    with pytest.raises(ValidationError):
        parse_realspec({"variant": "field", "coords": [1, 1], "minpoly": [-3, -1, 1]}, PHI)


def test_kempner_enclosure_and_digits():
    enc = KEMPNER.enclosure(40)
    exact = sum(Fraction(1, 2 ** (2**k)) for k in range(1, 7))
    assert enc.lo <= exact <= enc.hi
    assert enc.hi - enc.lo <= Fraction(1, 1 << 40)
    assert [KEMPNER.digit(i) for i in range(1, 9)] == [0, 1, 0, 1, 0, 0, 0, 1]
    assert LIOUVILLE.exponents_upto(30) == [1, 2, 6, 24, 120]


def test_finite_lacunary_is_exact():
    spec = LacunarySpec("list", (1, 4))
    enc = spec.enclosure(10)
    assert enc.lo == enc.hi == Fraction(9, 16)
    lo, hi = dyadic_enclosure(spec, 10)
    assert lo == hi == 576
