import random

import pytest

import oracles
from blockverify.blocks import blocks_of, principal_block
from blockverify.chains import (
    alternating_sum,
    amk_from_dade_demo,
    brauer_pair_chain,
    dade_check,
    group_chain_family,
    group_chain_kd,
    involution_n,
    lemma5_check,
    normal_chains,
    pair_chain_family,
    pair_chain_kd,
    partition_classes,
    random_pairing_function,
)
from blockverify.errors import InputError, PreconditionError
from blockverify.fusion import FusionSystemData


def orders(classes):
    return sorted(c.orders for c in classes)


def test_a5_mod_2_classes(group):
    fam = group_chain_family(group("A5"), 2)
    assert orders(fam.classes) == [[2], [2, 4], [4]]
    c2 = next(c for c in fam.classes if c.orders == [2])
    assert c2.members == 3


@pytest.mark.parametrize("name,p", [("C3", 3), ("D10", 5), ("S4", 3), ("F21", 7), ("A5", 5)])
def test_defect_group_of_prime_order_has_one_class(group, name, p):
    fam = group_chain_family(group(name), p)
    assert fam.P.order == p
    assert len(fam.classes) == 1 and fam.classes[0].is_top


def test_c4_classes(group):
    fam = group_chain_family(group("C4"), 2)
    assert orders(fam.classes) == [[2], [2, 4], [4]]


@pytest.mark.parametrize(
    "name,p", [("A5", 2), ("S4", 2), ("S4", 3), ("A4", 2), ("C2xA4", 2), ("SL(2,3)", 2), ("D8", 2), ("S5", 2), ("A5", 3)]
)
def test_class_count_matches_brute_force(group, name, p):
    G = group(name)
    fam = group_chain_family(G, p)
    assert len(fam.classes) == oracles.normal_chain_classes(G.generators, G.degree, set(fam.P.elements), p)
    assert sum(c.members for c in fam.classes) == len(normal_chains(fam.P))


def test_involution_examples(group):
    fam = group_chain_family(group("A5"), 2)
    V = fam.P
    C2 = next(c.chain[0] for c in fam.classes if c.orders == [2])
    assert involution_n(fam, (V,)) == (V,)
    assert involution_n(fam, (C2,)) == (C2, V)
    assert involution_n(fam, (C2, V)) == (C2,)


@pytest.mark.parametrize("name,p", [("A5", 2), ("S4", 2), ("S5", 2), ("PSL(2,7)", 2), ("A6", 3), ("C2xA4", 2)])
def test_involution_is_a_pairing(group, name, p):
    G = group(name)
    fam = group_chain_family(G, p)
    for sigma in fam.chains:
        image = involution_n(fam, sigma)
        assert involution_n(fam, image) == sigma
        assert abs(len(image) - len(sigma)) == 1 or sigma == (fam.P,)
    (top,), lower, upper = partition_classes(fam.classes)
    assert top is fam.top
    assert len(lower) == len(upper)
    assert all(fam.classes[c.partner].length == c.length + 1 for c in lower)


def test_representatives_maximise_normaliser(group):
    fam = group_chain_family(group("S4"), 2)
    for c in fam.classes:
        orbit = [s for s, i in fam.class_of.items() if i == c.index]
        assert len(orbit) == c.members
        assert c.N_P.order == max(fam.N_P(s).order for s in orbit)


def test_alternating_sum_constant(group):
    classes = group_chain_family(group("A5"), 2).classes
    assert alternating_sum(classes, lambda c: 1) == 1
    f = {c.index: 7 if c.is_top else 1 for c in classes}
    assert alternating_sum(classes, f) == 7
    assert lemma5_check(classes, f)


@pytest.mark.parametrize("name,p", [("S4", 2), ("A5", 2), ("S5", 2), ("SL(2,3)", 2), ("PSL(2,7)", 2), ("A6", 3)])
def test_lemma5_random(group, name, p):
    G = group(name)
    rng = random.Random(7)
    families = [group_chain_family(G, p), pair_chain_family(FusionSystemData(principal_block(G, p)))]
    for fam in families:
        for _ in range(25):
            f = random_pairing_function(fam.classes, rng)
            assert lemma5_check(fam.classes, f)
            assert alternating_sum(fam.classes, f) == f[fam.top.index]


def test_lemma5_rejects_bad_functions(group):
    classes = group_chain_family(group("A5"), 2).classes
    bad = {c.index: c.length for c in classes}
    with pytest.raises(PreconditionError):
        lemma5_check(classes, bad)
    with pytest.raises(InputError):
        lemma5_check(classes, {})


def test_a5_dade_terms(group):
    G = group("A5")
    B = principal_block(G, 2)
    fam = group_chain_family(G, 2)
    assert [group_chain_kd(B, c, 2) for c in fam.classes] == [4, 4, 4]
    report = dade_check(B)
    rows = {r["d"]: r for r in report["rows"]}
    assert (rows[2]["lhs"], rows[2]["rhs"], rows[2]["rhs_pairs"]) == (4, 4, 4)
    assert (rows[1]["lhs"], rows[1]["rhs"]) == (0, 0)
    assert report["status"] == "pass" and report["n_step_ok"]


def test_s4_mod_3_dade(group):
    B = principal_block(group("S4"), 3)
    report = dade_check(B)
    assert report["status"] == "pass"
    assert [(r["d"], r["lhs"], r["rhs"]) for r in report["rows"]] == [(0, 0, 0), (1, 3, 3)]


def test_dade_skips(group):
    assert dade_check(principal_block(group("S4"), 2))["status"] == "skipped"
    assert dade_check(blocks_of(group("S4"), 3)[1])["status"] == "skipped"


@pytest.mark.parametrize("name,p,index", [("S5", 2, 0), ("PSL(2,7)", 2, 0), ("A6", 3, 0), ("S5", 3, 0), ("A5", 2, 0)])
def test_pair_count_vanishes_below_full_normaliser(group, name, p, index):
    B = blocks_of(group(name), p)[index]
    F = FusionSystemData(B)
    fam = pair_chain_family(F)
    proper = [c for c in fam.classes if c.N_P != F.P]
    for c in proper:
        assert pair_chain_kd(F, c, B.defect)[0] == 0


def test_principal_brauer_pair_chains(group):
    G = group("S5")
    F = FusionSystemData(principal_block(G, 2))
    for c in pair_chain_family(F).classes:
        tau = brauer_pair_chain(F, c.chain)
        assert tau.normalizer == G.stabilizer_of_chain(c.chain)
        assert tau.admissible and tau.blocks[0].is_principal


def test_nonprincipal_brauer_pair_chains(group):
    G = group("S5")
    B = blocks_of(G, 2)[1]
    F = FusionSystemData(B)
    for c in pair_chain_family(F).classes:
        tau = brauer_pair_chain(F, c.chain)
        assert tau.admissible
        assert tau.pairs[-1] is F.pairs[c.chain[-1]]


@pytest.mark.parametrize("name,p", [("A5", 2), ("S5", 2), ("PSL(2,7)", 3), ("A5", 5)])
def test_amk_from_dade(group, name, p):
    for B in blocks_of(group(name), p):
        if B.defect:
            assert amk_from_dade_demo(B)["consistent"]
