from fractions import Fraction
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from workbench.errors import InsufficientPrecision, NegativeValuation, NonUnitDivision, PrecisionUnderflow
from workbench.rings import (
    QQ,
    FiniteField,
    LocalRationals,
    PLocalRational,
    PrimeSpec,
    SeriesRing,
    ZmodPk,
    is_pth_power,
)


def test_plocal_sum():
    x = PLocalRational(5, 7, 3) + PLocalRational(5, 1, 2)
    assert (x.num, x.den) == (17, 6)
    assert str(x) == "17/6"


def test_valuations():
    assert PLocalRational(2, 3, 4).valuation() == -2
    assert PLocalRational(2, 0).valuation() == float("inf")
    R = SeriesRing(FiniteField(3), 8)
    assert R.from_coeffs([0, 0, 1, 1]).valuation() == 2


@pytest.mark.parametrize("p,num,den,expected", [(5, 7, 3, 4), (3, 6, 1, 0), (2, 1, 3, 1)])
def test_reduce_mod_m(p, num, den, expected):
    assert int(PLocalRational(p, num, den).reduce_mod_m()) == expected


def test_reduce_outside_ring():
    with pytest.raises(NegativeValuation):
        PLocalRational(2, 3, 4).reduce_mod_m()


def test_division_by_nonunit():
    with pytest.raises(NonUnitDivision):
        PLocalRational(2, 1) / PLocalRational(2, 2)


def test_series_square_char2():
    R = SeriesRing(FiniteField(2), 4)
    x = R.from_coeffs([1, 1])
    assert x * x == R.from_coeffs([1, 0, 1])


def test_series_inverse_f3():
    R = SeriesRing(FiniteField(3), 4)
    x = R.from_coeffs([1, 1])
    inv = x.inv()
    assert inv == R.from_coeffs([1, 2, 1, 2])
    assert inv * x == R.one


def test_laurent_floor():
    L = SeriesRing(FiniteField(2), 4, laurent=True)
    with pytest.raises(PrecisionUnderflow):
        L.monomial(1, -4) * L.monomial(1, -4)


def test_series_text_roundtrip():
    L = SeriesRing(FiniteField(3), 6, laurent=True)
    x = L.parse("2*T^-2 + T - 1 + T^3")
    assert L.parse(str(x)) == x
    assert x.valuation() == -2


def test_is_pth_power_examples():
    F2 = SeriesRing(FiniteField(2), 8)
    assert is_pth_power(F2.from_coeffs([1, 0, 1]))
    assert not is_pth_power(F2.from_coeffs([1, 1]))
    F3 = SeriesRing(FiniteField(3), 12)
    x = F3.from_coeffs([1, 0, 0, 1, 0, 0, 1])
    assert is_pth_power(x)


def test_is_pth_power_cube_search():
    # brute-force: x is the cube of some polynomial of degree <= 2 over F_3
    F3 = SeriesRing(FiniteField(3), 12)
    target = F3.from_coeffs([1, 0, 0, 1, 0, 0, 1])
    cubes = [F3.from_coeffs([a, b, c]) ** 3 for a in range(3) for b in range(3) for c in range(3)]
    assert target in cubes


def test_is_pth_power_needs_window():
    R = SeriesRing(FiniteField(3), 3)
    with pytest.raises(InsufficientPrecision):
        is_pth_power(R.one)


def test_prime_spec_values():
    assert {s.value for s in PrimeSpec} == {"p", "T"}


def test_finite_field_tables():
    for p, s in [(2, 2), (2, 3), (3, 2), (5, 1)]:
        F = FiniteField(p, s)
        q = p**s
        xs = np.arange(q)
        nz = xs[1:]
        assert np.all(F.mul(nz, F.inv(nz)) == 1)
        # distributivity on all triples
        a, b, c = np.meshgrid(xs, xs, xs, indexing="ij")
        assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
        # multiplicative group is cyclic of order q - 1
        g = F.primitive_root()
        assert len({F.power(g, k) for k in range(q - 1)}) == q - 1


def _frac_oracle_add(a, b, c, d):
    n, m = a * d + b * c, b * d
    g = gcd(n, m)
    return n // g, m // g


@settings(max_examples=200, deadline=None)
@given(st.integers(-50, 50), st.integers(1, 40), st.integers(-50, 50), st.integers(1, 40))
def test_plocal_matches_integer_oracle(a, b, c, d):
    p = 7
    if b % p == 0 or d % p == 0:
        return
    x, y = PLocalRational(p, a, b), PLocalRational(p, c, d)
    s = x + y
    assert (s.num, s.den) == _frac_oracle_add(a, b, c, d)
    prod = x * y
    assert Fraction(prod.num, prod.den) == Fraction(a * c, b * d)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 500), st.integers(1, 500), st.sampled_from([2, 3, 5]))
def test_valuation_additive(a, b, p):
    x, y = PLocalRational(p, a), PLocalRational(p, 1, b) if b % p else PLocalRational(p, b)
    assert (x * y).valuation() == x.valuation() + y.valuation()


@settings(max_examples=100, deadline=None)
@given(st.integers(-60, 60), st.integers(1, 30), st.integers(-60, 60), st.integers(1, 30))
def test_reduction_is_homomorphism(a, b, c, d):
    p = 5
    if b % p == 0 or d % p == 0:
        return
    x, y = PLocalRational(p, a, b), PLocalRational(p, c, d)
    assert (x + y).reduce_mod_m() == x.reduce_mod_m() + y.reduce_mod_m()
    assert (x * y).reduce_mod_m() == x.reduce_mod_m() * y.reduce_mod_m()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 8), min_size=1, max_size=6), st.lists(st.integers(0, 8), min_size=1, max_size=6))
def test_series_valuation_and_inverse(c1, c2):
    R = SeriesRing(ZmodPk(3, 2), 8)
    x, y = R.from_coeffs(c1), R.from_coeffs(c2)
    if x.coefficient(0) % 3:
        assert x.inv() * x == R.one
    L = SeriesRing(FiniteField(3), 8, laurent=True)
    u, v = L.from_coeffs([c % 3 for c in c1]), L.from_coeffs([c % 3 for c in c2])
    if not u.is_zero() and not v.is_zero():
        assert (u * v).valuation() == u.valuation() + v.valuation()
        assert u * u.inv() == L.one


def test_zmod_units():
    R = ZmodPk(3, 4)
    assert R.modulus == 81
    for x in range(1, 81):
        if x % 3:
            assert x * R.inv_scalar(x) % 81 == 1
    assert R.valuation(0) == float("inf")
    assert R.valuation(18) == 2


def test_local_rationals_reduce_matrix():
    R = LocalRationals(3)
    A = np.array([[Fraction(1, 2), Fraction(6)], [Fraction(4, 5), Fraction(-1)]], dtype=object)
    assert R.reduce(A).tolist() == [[2, 0], [2, 2]]
    assert QQ.inv_scalar(Fraction(3, 4)) == Fraction(4, 3)
