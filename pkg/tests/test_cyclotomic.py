from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from blockverify.cyclotomic import GF, CycNum, FpEmbedding, cyclotomic_poly, is_p_rational
from blockverify.errors import DomainError


def z(n, k=1):
    return CycNum.root_of_unity(n, k)


def test_cube_roots_sum_to_minus_one():
    assert z(3) + z(3, 2) == -1


def test_gaussian_norm():
    i = z(4)
    assert (1 + i) * (1 - i) == 2


def test_promotion_between_conductors():
    assert z(3) * z(4) == z(12, 7)
    assert z(6, 2) == z(3)


def test_cyclotomic_polynomials():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)


def test_galois_composition():
    a = z(15) + 2 * z(15, 4)
    assert a.galois(2).galois(7) == a.galois(14)
    assert a.galois(1) == a


def test_inverse_and_division():
    a = 2 + z(5)
    assert a * a.inverse() == 1
    assert (a / a) == 1
    with pytest.raises(ZeroDivisionError):
        CycNum.rational(0, 5).inverse()


def test_conjugate_matches_complex():
    a = 3 + z(7, 2)
    assert abs(a.conjugate().to_complex() - a.to_complex().conjugate()) < 1e-12


def test_json_round_trip():
    a = Fraction(1, 3) * z(9) - z(9, 4)
    assert CycNum.from_json(a.to_json()) == a


def test_reduction_examples():
    E2 = FpEmbedding(2, 7)
    assert E2.field.q == 8
    assert E2.field.mult_order(E2.reduce(z(7))) == 7
    E3 = FpEmbedding(3, 3)
    assert E3.reduce(3) == 0
    assert E3.reduce(z(3)) == 1


def test_reduction_of_non_integral_value_fails():
    with pytest.raises(DomainError):
        FpEmbedding(3, 6).reduce(Fraction(1, 3))
    with pytest.raises(DomainError):
        FpEmbedding(2, 4).reduce(z(4) / 2)


def test_p_rationality():
    assert is_p_rational([z(3) + z(3, 2)], 3)
    assert not is_p_rational([z(3)], 3)
    assert is_p_rational([z(3)], 2)


def cyc(e):
    return st.lists(st.integers(-5, 5), min_size=e, max_size=e).map(lambda c: CycNum.from_exponents(e, dict(enumerate(c))))


@settings(max_examples=60, deadline=None)
@given(cyc(12), cyc(12), cyc(12))
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    if not b.is_zero():
        assert (a / b) * b == a


@settings(max_examples=60, deadline=None)
@given(cyc(12), cyc(12), st.sampled_from([1, 5, 7, 11]))
def test_galois_is_a_ring_map(a, b, j):
    assert (a * b).galois(j) == a.galois(j) * b.galois(j)
    assert (a + b).galois(j) == a.galois(j) + b.galois(j)


@settings(max_examples=60, deadline=None)
@given(cyc(12), cyc(12), st.sampled_from([2, 3, 5, 7]))
def test_reduction_is_a_ring_map(a, b, p):
    E = FpEmbedding(p, 12)
    F = E.field
    assert E.reduce(a * b) == F.mul(E.reduce(a), E.reduce(b))
    assert E.reduce(a + b) == F.add(E.reduce(a), E.reduce(b))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([(2, 3), (3, 2), (5, 1), (2, 4)]), st.data())
def test_finite_field_axioms(pk, data):
    F = GF(*pk)
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, F.q - 1) == 1
