from fractions import Fraction

from hypothesis import given, settings, strategies as st

from blockverify.linear import (
    AbelianQuotient,
    LinearCharacter,
    extend_linear_character,
    linear_characters,
    smith_normal_form,
)
from blockverify.perm import direct_product, cyclic_group, mul


def test_snf_example():
    diag, _ = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], 3)
    assert diag == [2, 6, 12]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=4))
def test_snf_divisibility_and_determinant(rows):
    diag, V = smith_normal_form(rows, 3)
    nonzero = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    # V is unimodular
    det = (
        V[0][0] * (V[1][1] * V[2][2] - V[1][2] * V[2][1])
        - V[0][1] * (V[1][0] * V[2][2] - V[1][2] * V[2][0])
        + V[0][2] * (V[1][0] * V[2][1] - V[1][1] * V[2][0])
    )
    assert abs(det) == 1


def test_abelianisation_of_d8(group):
    D8 = group("D8")
    Q = AbelianQuotient(D8, D8.derived)
    assert Q.order == 4
    assert sorted(d for _, d in Q.factors) == [2, 2]


def test_characters_of_c4_x_c2():
    A = direct_product(cyclic_group(4), cyclic_group(2))
    chars = linear_characters(A)
    assert len(chars) == 8
    assert len(set(chars)) == 8
    for chi in chars:
        for x in A.elements:
            for y in A.generators:
                assert chi.angle(mul(x, y)) == (chi.angle(x) + chi.angle(y)) % 1


def test_characters_multiply(group):
    S3 = group("S3")
    sign, triv = sorted(linear_characters(S3), key=lambda c: c.is_trivial())
    assert (sign * sign).is_trivial()
    assert sign.inverse() == sign
    assert triv == LinearCharacter.trivial(S3)


def test_extension_through_a_quotient(group):
    C4 = group("C4")
    Z = C4.subgroup([x for x in C4.elements if mul(x, x) == C4.identity])
    z = next(x for x in Z.elements if x != C4.identity)
    eta = LinearCharacter(Z, {C4.identity: 0, z: Fraction(1, 2)})
    ext = extend_linear_character(C4, C4.trivial, Z, eta)
    assert ext.restrict(Z) == eta
    assert ext.order == 4
    # killing the whole group leaves no extension of a faithful eta
    assert extend_linear_character(C4, C4, Z, eta) is None
