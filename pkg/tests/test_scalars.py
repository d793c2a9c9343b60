from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qgw.scalars import (
    ExactComplex,
    exact,
    exact_from_float,
    format_scalar,
    get_tolerance,
    parse_scalar,
    tolerance,
)

rationals = st.fractions(min_value=-99, max_value=99, max_denominator=50)
gaussians = st.builds(lambda a, b: ExactComplex(a, b), rationals, rationals)


@given(gaussians, gaussians, gaussians)
def test_ring_laws_exact(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()


@given(gaussians)
def test_format_parse_round_trip(z):
    assert parse_scalar(format_scalar(z), exact=True) == z


@given(gaussians.filter(lambda z: z.re or z.im))
def test_division_inverts_multiplication(z):
    assert (ExactComplex(1) / z) * z == ExactComplex(1)


def test_parse_forms():
    assert parse_scalar("i", exact=True) == ExactComplex(0, 1)
    assert parse_scalar("-i", exact=True) == ExactComplex(0, -1)
    assert parse_scalar("1/2+3/4i", exact=True) == ExactComplex(Fraction(1, 2), Fraction(3, 4))
    assert parse_scalar([0.5, -1.0]) == 0.5 - 1j
    with pytest.raises(ValueError):
        parse_scalar("not-a-number", exact=True)
    with pytest.raises(ValueError):
        parse_scalar(0.5, exact=True)


def test_exact_float_agreement():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a, b = (Fraction(int(x), int(y)) for x, y in zip(rng.integers(-20, 20, 2), rng.integers(1, 9, 2)))
        z, w = exact(a), exact(b)
        assert abs(complex(z * w + z) - (float(a) * float(b) + float(a))) < 1e-9


def test_rationalization():
    assert exact_from_float(1 / 3 + 1e-14) == exact(Fraction(1, 3))


def test_tolerance_context():
    base = get_tolerance()
    assert base == 1e-9
    with tolerance(1e-4):
        assert get_tolerance() == 1e-4
    assert get_tolerance() == base
