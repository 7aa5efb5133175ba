"""Acceptance criteria 1-10.

Each criterion is a function returning ``(ok, message)``.  Under pytest every
criterion prints one ``[criterion N] PASS|FAIL`` line; ``python
tests/test_acceptance.py`` prints the same lines without pytest.
"""

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import oracles as O  # noqa: E402
from blockverify.blocks import (  # noqa: E402
    amk_check,
    blocks_of,
    central_p_subgroup,
    lemma3_check,
    lemma4_check,
)
from blockverify.chains import (  # noqa: E402
    alternating_sum,
    dade_check,
    group_chain_family,
    involution_n,
    lemma5_check,
    pair_chain_family,
    partition_classes,
    random_pairing_function,
)
from blockverify.chartab import character_table  # noqa: E402
from blockverify.corpus import CORPUS_NAMES, build_group  # noqa: E402
from blockverify.errors import PreconditionError  # noqa: E402
from blockverify.fusion import (  # noqa: E402
    FusionSystemData,
    extend_character_focal,
    fusion_stable_characters,
    is_nilpotent_block,
    star_bijection,
    unique_p_rational_height_zero,
)
from blockverify.linear import linear_characters  # noqa: E402
from blockverify.perm import mul  # noqa: E402

PRIMES = (2, 3, 5)
_groups = {}
_fusion = {}


def corpus_group(name):
    if name not in _groups:
        _groups[name] = build_group(name)
    return _groups[name]


def corpus_blocks(positive=True):
    for name in CORPUS_NAMES:
        G = corpus_group(name)
        for p in PRIMES:
            if G.order % p:
                continue
            for B in blocks_of(G, p):
                if B.defect or not positive:
                    yield name, B


def fusion_of(name, B):
    key = (name, B.p, B.index)
    if key not in _fusion:
        _fusion[key] = FusionSystemData(B)
    return _fusion[key]


def brute_derived(P):
    """[P,P] by closing up commutators with plain permutation composition."""
    els = list(P.elements)
    comms = {O.compose(O.compose(O.inverse(x), O.inverse(y)), O.compose(x, y)) for x in els for y in els}
    return O.elements(list(comms), P.degree)


# -- criteria ----------------------------------------------------------------------------


def criterion_1():
    worst = 0.0
    for name in sorted(O.CLASSICAL):
        G = build_group(name)
        start = time.perf_counter()
        T = character_table(G)
        elapsed = time.perf_counter() - start
        worst = max(worst, elapsed)
        labels = [(c.order, c.size) for c in G.classes]
        rows = [[v.to_complex() for v in row] for row in T.chars]
        ref_labels, ref_rows = O.CLASSICAL[name]
        if not O.tables_match(labels, rows, ref_labels, ref_rows):
            return False, f"{name} differs from the classical table"
        cls, num = O.numeric_table(G.generators, G.degree)
        num_labels = [(O.order_of(min(c)), len(c)) for c in cls]
        if not O.tables_match(labels, rows, num_labels, num, tol=1e-6):
            return False, f"{name} differs from the numeric Burnside table"
        if elapsed >= 5:
            return False, f"{name} took {elapsed:.2f}s"
    return True, f"7 tables match both oracles, slowest {worst:.3f}s"


def criterion_2():
    G = build_group("S4")
    Bs = blocks_of(G, 3)
    got = sorted(tuple(sorted(B.degrees)) for B in Bs)
    if got != O.symmetric_block_degrees(4, 3) or got != [(1, 1, 2), (3,), (3,)]:
        return False, f"S4 p=3 blocks {got}"
    B0 = Bs[0]
    if sorted(B0.degrees) != [1, 1, 2] or B0.defect != 1 or B0.defect_group.order != 3:
        return False, "S4 p=3 principal block is wrong"
    if [B.defect for B in Bs[1:]] != [0, 0]:
        return False, "S4 p=3 has a non-principal block of positive defect"
    A = build_group("A5")
    Bs = blocks_of(A, 2)
    got = sorted(tuple(sorted(B.degrees)) for B in Bs)
    cls, rows = O.numeric_table(A.generators, A.degree)
    if got != O.degrees_of_blocks(cls, rows, 2) or got != [(1, 3, 3, 5), (4,)]:
        return False, f"A5 p=2 blocks {got}"
    D = Bs[0].defect_group
    if Bs[0].defect != 2 or D.order != 4 or not D.is_abelian or D.exponent != 2 or Bs[1].defect != 0:
        return False, "A5 p=2 defects or defect group wrong"
    return True, "S4/3 = {1,1,2}+{3}+{3} with D=C3; A5/2 = {1,3,3,5}+{4} with D=V4"


def criterion_3():
    count = 0
    for name, B in corpus_blocks():
        r = amk_check(B)
        count += 1
        if not r["equal"]:
            return False, f"{name} p={B.p} block {B.index}: {r['irr0_G']} != {r['irr0_N']}"
    a5 = amk_check(blocks_of(build_group("A5"), 2)[0])
    s4 = amk_check(blocks_of(build_group("S4"), 2)[0])
    if (a5["irr0_G"], a5["irr0_N"], a5["normalizer_order"]) != (4, 4, 12):
        return False, f"A5 anchor {a5}"
    if (s4["irr0_G"], s4["irr0_N"], s4["normalizer_order"]) != (4, 4, 8):
        return False, f"S4 anchor {s4}"
    return True, f"{count} blocks, anchors A5/2 4=4 (N=A4), S4/2 4=4 (N=D8)"


def criterion_4():
    checked = 0
    for name, B in corpus_blocks():
        if B.group.p_core(B.p).order != 1:
            continue
        r = dade_check(B, fusion_of(name, B))
        checked += 1
        for row in r["rows"]:
            if not (row["lhs"] == row["rhs"] == row["rhs_pairs"]):
                return False, f"{name} p={B.p} block {B.index} d={row['d']}: {row['lhs']} {row['rhs']} {row['rhs_pairs']}"
    r = dade_check(blocks_of(build_group("A5"), 2)[0])
    rows = {row["d"]: row for row in r["rows"]}
    terms = sorted((tuple(t["chain"]), t["sign"] * t["kd_local"]) for t in rows[2]["terms"])
    if terms != [((2,), 4), ((2, 4), -4), ((4,), 4)] or rows[2]["lhs"] != 4:
        return False, f"A5 d=2 anchor {terms}"
    if (rows[1]["lhs"], rows[1]["rhs"]) != (0, 0):
        return False, "A5 d=1 anchor"
    return True, f"{checked} blocks, all d, both chain variants agree; A5/2 d=2: 4 = 4+4-4"


def criterion_5():
    rng = random.Random(20240)
    families = 0
    for name in CORPUS_NAMES:
        G = corpus_group(name)
        for p in PRIMES:
            if G.order % p:
                continue
            fams = [group_chain_family(G, p)]
            for B in blocks_of(G, p):
                if B.defect:
                    fams.append(pair_chain_family(fusion_of(name, B)))
            for fam in fams:
                families += 1
                for sigma in fam.chains:
                    image = involution_n(fam, sigma)
                    if involution_n(fam, image) != sigma:
                        return False, f"{name} p={p}: n is not an involution"
                    if sigma != (fam.P,) and abs(len(image) - len(sigma)) != 1:
                        return False, f"{name} p={p}: n changes length by {len(image) - len(sigma)}"
                tops, lower, _ = partition_classes(fam.classes)
                if 1 + 2 * len(lower) != len(fam.classes):
                    return False, f"{name} p={p}: 1 + 2|B| != {len(fam.classes)}"
                for _ in range(100):
                    f = random_pairing_function(fam.classes, rng)
                    if not lemma5_check(fam.classes, f) or alternating_sum(fam.classes, f) != f[tops[0].index]:
                        return False, f"{name} p={p}: alternating sum differs from f([P])"
    return True, f"{families} chain families, 100 random f each"


def criterion_6():
    checked = 0
    for name, B in corpus_blocks():
        Z = central_p_subgroup(B.group, B.p)
        if Z.order == 1:
            continue
        r = lemma4_check(B, Z)
        checked += 1
        if not r["equal"]:
            return False, f"{name} p={B.p} block {B.index}: {r['irr0']} != {r['irr0_trivial_Z']} x {r['extendable']}"
    r = lemma4_check(blocks_of(build_group("SL(2,3)"), 2)[0])
    if (r["irr0"], r["irr0_trivial_Z"], r["extendable"]) != (4, 4, 1):
        return False, f"SL(2,3) anchor {r}"
    return True, f"{checked} blocks with Z != 1; SL(2,3)/2: 4 = 4 x 1"


def criterion_7():
    checked = 0
    for name, B in corpus_blocks():
        r = lemma3_check(B)
        checked += 1
        if r["counterexamples"]:
            return False, f"{name} p={B.p} block {B.index}: {r['counterexamples']} counterexamples"
    return True, f"{checked} blocks, 0 counterexamples"


def _is_homomorphism(lam, P):
    els = list(P.elements)
    return all((lam.angle(mul(x, y)) - lam.angle(x) - lam.angle(y)) % 1 == 0 for x in els for y in els)


def criterion_8():
    extended = refused = 0
    for name, B in corpus_blocks():
        F = fusion_of(name, B)
        P, foc = F.P, F.focal_subgroup
        derived = brute_derived(P)
        for Z in P.p_subgroups():
            if not Z.is_subgroup_of(F.center):
                continue
            for eta in linear_characters(Z, Z.trivial):
                extends = all(eta.angle(z) == 0 for z in Z.elements if z in derived)
                try:
                    lam = extend_character_focal(P, foc, Z, eta, F)
                except PreconditionError:
                    if extends:
                        return False, f"{name} p={B.p} block {B.index}: extendable eta refused"
                    # no linear character of P restricts to eta
                    if any(chi.restrict(Z) == eta for chi in linear_characters(P, P.trivial)):
                        return False, f"{name} p={B.p}: refused eta has an extension"
                    refused += 1
                    continue
                if not extends:
                    return False, f"{name} p={B.p}: eta nontrivial on Z meet [P,P] was extended"
                if not _is_homomorphism(lam, P):
                    return False, f"{name} p={B.p}: extension is not a character"
                if any(lam.angle(z) != eta.angle(z) for z in Z.elements):
                    return False, f"{name} p={B.p}: extension does not restrict to eta"
                if any(lam.angle(x) != Fraction(0) for x in foc.elements):
                    return False, f"{name} p={B.p}: foc(F) not in the kernel"
                extended += 1
    return True, f"{extended} extensions verified, {refused} non-extendable eta correctly refused"


def criterion_9():
    pairs = 0
    for name, B in corpus_blocks():
        F = fusion_of(name, B)
        Z = central_p_subgroup(B.group, B.p)
        T = B.table
        members = set(B.members)
        for eta_hat in fusion_stable_characters(F):
            mapping = star_bijection(F, Z, eta_hat)
            target = set(B.irr0_given(eta_hat.restrict(Z)))
            if set(mapping.values()) != target or len(set(mapping.values())) != len(mapping):
                return False, f"{name} p={B.p}: not a bijection"
            if not set(mapping.values()) <= members:
                return False, f"{name} p={B.p}: image leaves the block"
            if any(T.degrees[a] != T.degrees[b] for a, b in mapping.items()):
                return False, f"{name} p={B.p}: degrees not preserved"
            pairs += 1
    return True, f"{pairs} (B, eta-hat) pairs give degree-preserving bijections"


def criterion_10():
    nilpotent = rational = 0
    for name, B in corpus_blocks():
        F = fusion_of(name, B)
        if not is_nilpotent_block(F):
            continue
        nilpotent += 1
        P = F.P
        if len(B.irr0) * len(brute_derived(P)) != P.order:
            return False, f"{name} p={B.p}: |Irr_0(B)| = {len(B.irr0)} vs |P:[P,P]|"
        if B.p != 2:
            unique_p_rational_height_zero(F)
            rational += 1
    F = FusionSystemData(blocks_of(build_group("A4"), 3)[0])
    if not is_nilpotent_block(F) or len(F.block.irr0) != 3:
        return False, "A4/3 anchor"
    return True, f"{nilpotent} nilpotent blocks, {rational} unique p-rational characters; A4/3: 3 = 3"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def run_one(n):
    start = time.perf_counter()
    try:
        ok, msg = CRITERIA[n - 1]()
    except Exception as exc:  # report, then let pytest see the failure
        ok, msg = False, f"{type(exc).__name__}: {exc}"
    line = f"[criterion {n}] {'PASS' if ok else 'FAIL'} {msg} ({time.perf_counter() - start:.1f}s)"
    return ok, line


def _check(n, capsys):
    ok, line = run_one(n)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def test_criterion_1(capsys):
    _check(1, capsys)


def test_criterion_2(capsys):
    _check(2, capsys)


def test_criterion_3(capsys):
    _check(3, capsys)


def test_criterion_4(capsys):
    _check(4, capsys)


def test_criterion_5(capsys):
    _check(5, capsys)


def test_criterion_6(capsys):
    _check(6, capsys)


def test_criterion_7(capsys):
    _check(7, capsys)


def test_criterion_8(capsys):
    _check(8, capsys)


def test_criterion_9(capsys):
    _check(9, capsys)


def test_criterion_10(capsys):
    _check(10, capsys)


if __name__ == "__main__":
    results = [run_one(n) for n in range(1, 11)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
