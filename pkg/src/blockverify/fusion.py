"""Brauer pairs and block fusion systems.

Block idempotents are handled through central characters: for a block ``f``
of ``C_G(R)`` and a central idempotent ``e`` of ``kC_G(Q)`` (``Q <= R``),
``Br_R(e) f = f`` iff ``lambda_f(Br_R(e)) = 1``, where ``Br_R`` keeps the
coefficients of ``e`` on ``C_G(R)``.  Conjugating a block by ``g`` permutes
class sums, so block conjugacy is a comparison of central-character tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .blocks import Block, blocks_of, central_p_subgroup
from .chartab import character_table
from .cyclotomic import CycNum, is_p_rational
from .errors import InvariantFailure, PreconditionError
from .linear import AbelianQuotient, LinearCharacter, extend_linear_character, linear_characters
from .perm import Group, Perm, conj, inv, mul, p_part, perm_order, power


@dataclass(eq=False)
class BrauerPair:
    """``(Q, e)`` with ``e`` given as a block of ``C_G(Q)``."""

    Q: Group
    block: Block

    @property
    def idempotent(self):
        return self.block.idempotent

    def __repr__(self) -> str:
        return f"BrauerPair(|Q|={self.Q.order}, block={self.block.index} of C_G(Q) order {self.block.group.order})"


def brauer_value(e: Block, f: Block) -> int:
    """``lambda_f(Br_R(e))`` for ``e`` a block of ``C_G(Q)`` and ``f`` a block of ``C_G(R)``, ``C_G(R) <= C_G(Q)``."""
    CQ = e.group
    CR = f.group
    coeffs = e.idempotent.coeffs
    restricted = [coeffs[CQ.class_of(c.rep)] for c in CR.classes]
    return f.central_value(restricted)


def is_stable(e: Block, R: Group) -> bool:
    """Whether conjugation by ``R`` (normalising ``e.group``) fixes the block ``e``."""
    C = e.group
    for r in R.generators:
        for k, c in enumerate(C.classes):
            if e.central[C.class_of(conj(c.rep, r))] != e.central[k]:
                return False
    return True


def conjugate_central(b: Block, g: Perm) -> tuple[Group, tuple[int, ...]]:
    """``(C^g, lambda_{b^g})`` for a block ``b`` of ``C``."""
    C = b.group
    Cg = C.conjugate(g)
    ginv = inv(g)
    return Cg, tuple(b.central[C.class_of(conj(c.rep, ginv))] for c in Cg.classes)


def conjugate_block(b: Block, g: Perm) -> Block:
    Cg, lam = conjugate_central(b, g)
    for other in blocks_of(Cg, b.p):
        if other.central == lam:
            return other
    raise InvariantFailure("conjugate of a block is not a block")


def normal_pair_below(G: Group, R: Group, f: Block, Q: Group) -> Block:
    """The unique ``R``-stable block ``e`` of ``C_G(Q)`` with ``Br_R(e) f = f``."""
    if not Q.is_normal_in(R) or not Q.is_subgroup_of(R):
        raise PreconditionError("normal_pair_below needs Q normal in R")
    if Q == R:
        return f
    CQ = G.centralizer(Q)
    candidates = [e for e in blocks_of(CQ, f.p) if is_stable(e, R) and brauer_value(e, f) == 1]
    if len(candidates) != 1:
        raise InvariantFailure(f"{len(candidates)} blocks of C_G(Q) lie below the given pair")
    return candidates[0]


def maximal_pairs(B: Block) -> list[BrauerPair]:
    """Maximal ``B``-Brauer pairs on the defect group, one per N_G(P)-orbit."""
    if B.defect == 0:
        raise PreconditionError("a defect-zero block has no nontrivial Brauer pairs")
    G = B.group
    P = B.defect_group
    CP = G.centralizer(P)
    found = [f for f in blocks_of(CP, B.p) if brauer_value_group(B, f) == 1]
    if not found:
        raise InvariantFailure("no block of C_G(P) lies below B")
    N = G.normalizer(P)
    first = found[0]
    for f in found[1:]:
        if not any(conjugate_central(first, g)[1] == f.central for g in N.element_list):
            raise InvariantFailure("maximal Brauer pairs are not conjugate")
    return [BrauerPair(P, first)]


def brauer_value_group(B: Block, f: Block) -> int:
    """``lambda_f(Br_P(e_B))`` for ``f`` a block of ``C_G(P)``."""
    G = B.group
    coeffs = B.idempotent.coeffs
    CP = f.group
    return f.central_value([coeffs[G.class_of(c.rep)] for c in CP.classes])


class FusionSystemData:
    """The fusion system of ``B`` on a defect group ``P`` with respect to a maximal pair.

    ``pairs[Q]`` is the block ``e_Q`` of ``C_G(Q)`` with ``(Q, e_Q) <= (P, e_P)``.
    It is computed from every ``R`` containing ``Q`` as a normal subgroup, and
    any disagreement between those routes raises :class:`InvariantFailure`.
    """

    def __init__(self, B: Block, maximal: Optional[BrauerPair] = None, check_chains: bool = True):
        self.block = B
        self.group = G = B.group
        self.p = B.p
        if maximal is None:
            maximal = maximal_pairs(B)[0]
        self.maximal = maximal
        self.P = P = maximal.Q
        self.subgroups: list[Group] = P.p_subgroups()
        self.pairs: dict[Group, Block] = {}
        self.chain_checks = 0
        ordered = sorted(self.subgroups, key=lambda Q: -Q.order)
        for Q in ordered:
            if Q == P:
                self.pairs[Q] = maximal.block
                continue
            if Q.order == 1:
                continue
            above = [R for R in ordered if R.order > Q.order and R in self.pairs and Q.is_subgroup_of(R) and Q.is_normal_in(R)]
            if not check_chains:
                above = [min(above, key=lambda R: R.order)]
            result = None
            for R in above:
                e = normal_pair_below(G, R, self.pairs[R], Q)
                self.chain_checks += 1
                if result is None:
                    result = e
                elif e is not result:
                    raise InvariantFailure("pair below the maximal pair depends on the chain")
            self.pairs[Q] = result
        self._morphisms()

    # -- morphisms ------------------------------------------------------------------

    def _morphisms(self) -> None:
        G, P = self.group, self.P
        Pset = P.elements
        self.conjugators: dict[Group, list[tuple[Perm, Group]]] = {}
        self.maps: dict[Group, dict[tuple, tuple[Perm, Group]]] = {}
        for Q in self.subgroups:
            if Q.order == 1:
                continue
            eQ = self.pairs[Q]
            conjs = []
            maps: dict[tuple, tuple[Perm, Group]] = {}
            for g in G.element_list:
                images = tuple(conj(x, g) for x in Q.generators)
                if not all(y in Pset for y in images):
                    continue
                if images in maps:
                    conjs.append((g, maps[images][1]))
                    continue
                S = Q.conjugate(g)
                if conjugate_central(eQ, g)[1] != self.pairs[S].central:
                    continue
                maps[images] = (g, S)
                conjs.append((g, S))
            self.conjugators[Q] = conjs
            self.maps[Q] = maps

    def hom(self, Q: Group, R: Group) -> list[Perm]:
        """Conjugating elements, one per morphism ``Q -> R``."""
        return [g for g, S in self.maps[Q].values() if S.is_subgroup_of(R)]

    def hom_counts(self) -> dict[str, int]:
        counts: dict[tuple[int, int], int] = {}
        for Q in self.subgroups:
            if Q.order == 1:
                continue
            for g, S in self.maps[Q].values():
                for R in self.subgroups:
                    if S.is_subgroup_of(R):
                        key = (Q.order, R.order)
                        counts[key] = counts.get(key, 0) + 1
        return {f"{a},{b}": n for (a, b), n in sorted(counts.items())}

    def automizer_order(self, Q: Group) -> int:
        """``|N_G(Q, e_Q) : C_G(Q)|``."""
        return sum(1 for g, S in self.maps[Q].values() if S == Q)

    @cached_property
    def focal_subgroup(self) -> Group:
        P = self.P
        seeds = list(P.derived.generators)
        for Q, maps in self.maps.items():
            for g, _ in maps.values():
                for u in Q.generators:
                    seeds.append(mul(inv(u), conj(u, g)))
        return P.normal_closure(seeds)

    @cached_property
    def center(self) -> Group:
        P = self.P
        fixed = []
        for z in P.center.elements:
            ok = True
            for Q, maps in self.maps.items():
                if z in Q.elements and any(conj(z, g) != z for g, _ in maps.values()):
                    ok = False
                    break
            if ok:
                fixed.append(z)
        return P.subgroup(fixed)

    def quotient_focal(self, Z0: Group) -> Group:
        """Preimage in ``P`` of ``foc(F/Z0)``, from morphisms whose domain contains ``Z0``."""
        P = self.P
        seeds = list(Z0.generators) + list(P.derived.generators)
        for Q, maps in self.maps.items():
            if not Z0.is_subgroup_of(Q):
                continue
            for g, _ in maps.values():
                for u in Q.generators:
                    seeds.append(mul(inv(u), conj(u, g)))
        return P.normal_closure(seeds)

    @cached_property
    def is_nilpotent(self) -> bool:
        return is_nilpotent_block(self)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "block": self.block.index,
            "P_order": self.P.order,
            "foc_order": self.focal_subgroup.order,
            "center_order": self.center.order,
            "nilpotent": self.is_nilpotent,
            "hom_counts": self.hom_counts(),
        }

    # -- Brauer elements --------------------------------------------------------------

    @cached_property
    def _local(self) -> dict:
        return {}

    def brauer_element_data(self, k: int) -> Optional[dict]:
        """Local data for the class ``k`` of ``G``: ``None`` when its p-part is trivial."""
        if k in self._local:
            return self._local[k]
        G, P, p = self.group, self.P, self.p
        x = G.classes[k].rep
        u, s = p_decomposition(x, p)
        if u == G.identity:
            self._local[k] = None
            return None
        H = G.centralizer([u])
        TH = character_table(H)
        hblocks = blocks_of(H, p)
        shifted = [G.class_of(mul(u, c.rep)) for c in H.classes]
        witnesses: dict[Perm, Perm] = {}
        Pset = P.elements
        for g in G.element_list:
            v = conj(u, g)
            if v in Pset and v not in witnesses:
                witnesses[v] = g
        owner: dict[Perm, int] = {}
        for v, g in witnesses.items():
            eV = self.pairs[P.generated([v])]
            back = conjugate_block(eV, inv(g))
            if back.group != H:
                raise InvariantFailure("conjugated centralizer block lives on the wrong group")
            owner[v] = back.index
        data = {
            "u": u,
            "s": s,
            "H": H,
            "table": TH,
            "blocks": hblocks,
            "shifted": shifted,
            "s_class": H.class_of(s),
            "owner": owner,
        }
        self._local[k] = data
        return data


def p_decomposition(x: Perm, p: int) -> tuple[Perm, Perm]:
    """``x = u s`` with ``u`` the p-part and ``s`` the p'-part (commuting powers of ``x``)."""
    o = perm_order(x)
    a = p_part(o, p)
    m = o // a
    if a == 1:
        return tuple(range(len(x))), x
    if m == 1:
        return x, tuple(range(len(x)))
    # u = x^(m t) with m t = 1 mod a; s = x^(a t') with a t' = 1 mod m
    t = pow(m, -1, a)
    t2 = pow(a, -1, m)
    return power(x, m * t), power(x, a * t2)


# -- extending characters trivial on the focal subgroup ----------------------------


def focal_subgroup(F: FusionSystemData) -> Group:
    return F.focal_subgroup


def fusion_center(F: FusionSystemData) -> Group:
    return F.center


def extend_character_focal(
    P: Group, foc: Group, Z: Group, eta: LinearCharacter, F: Optional[FusionSystemData] = None
) -> LinearCharacter:
    """A linear character of ``P`` extending ``eta`` with ``foc`` in its kernel.

    Raises :class:`PreconditionError` when ``Z`` is not in the fusion centre or
    when ``eta`` is nontrivial on ``Z meet [P,P]`` (then no extension to ``P``
    exists at all).  Failure to find an extension otherwise contradicts the
    construction and raises :class:`InvariantFailure`.
    """
    if eta.group != Z:
        raise ValueError("eta must be a character of Z")
    if F is not None and not Z.is_subgroup_of(F.center):
        raise PreconditionError("Z is not contained in the fusion centre")
    if not Z.is_subgroup_of(P.center):
        raise PreconditionError("Z is not central in P")
    derived = P.derived.elements
    if any(eta.angle(z) != 0 for z in Z.elements if z in derived):
        raise PreconditionError("eta is nontrivial on Z meet [P,P]; it does not extend to P")
    Z0 = eta.kernel()
    if any(eta.angle(z) != 0 for z in Z.elements if z in foc.elements):
        raise InvariantFailure("foc(F) meet Z is not in the kernel of eta")
    if F is not None:
        image = F.quotient_focal(Z0)
        joined = P.normal_closure(list(foc.generators) + list(Z0.generators))
        if image != joined:
            raise InvariantFailure("foc(F/Z0) differs from foc(F) Z0 / Z0")
    result = extend_linear_character(P, foc, Z, eta)
    if result is None:
        raise InvariantFailure("no extension of eta trivial on foc(F)")
    if result.restrict(Z) != eta or any(result.angle(x) != 0 for x in foc.elements):
        raise InvariantFailure("extension violates its postconditions")
    return result


# -- the *-construction ------------------------------------------------------------------


def star_construction(F: FusionSystemData, chi: int, eta_hat: LinearCharacter) -> int:
    """Index of ``eta_hat * chi`` in the character table of ``G``.

    On ``x = us`` the value is ``sum_b eta_hat(u_b) d_b(s)``, where ``b`` runs
    over the blocks of ``C_G(u)``, ``d_b`` is the ``b``-component of
    ``h -> chi(uh)`` and ``u_b`` is a conjugate of ``u`` in ``P`` with
    ``(<u>, b)`` conjugate to ``(<u_b>, e_<u_b>)``.  Components for blocks
    not arising this way are checked to vanish, and when ``eta_hat`` is
    constant on the ``G``-conjugates of ``u`` in ``P`` the value is checked
    against ``eta_hat(u') chi(x)``.
    """
    B = F.block
    if chi not in B.members:
        raise ValueError("character is not in the block")
    P = F.P
    if eta_hat.group != P:
        raise ValueError("eta_hat must be a character of the defect group")
    if any(eta_hat.angle(x) != 0 for x in F.focal_subgroup.elements):
        raise PreconditionError("eta_hat is not trivial on the focal subgroup")
    values = _star_values(F, chi, eta_hat)
    T = B.table
    idx = T.find(values)
    if idx is None or idx not in B.members:
        raise InvariantFailure("eta_hat * chi is not an irreducible character of the block")
    if T.degrees[idx] != T.degrees[chi]:
        raise InvariantFailure("eta_hat * chi changed the degree")
    return idx


def _star_values(F: FusionSystemData, chi: int, eta_hat: LinearCharacter) -> tuple[CycNum, ...]:
    G = F.group
    T = F.block.table
    row = T.chars[chi]
    out = []
    for k in range(len(G.classes)):
        data = F.brauer_element_data(k)
        if data is None:
            out.append(row[k])
            continue
        owner = data["owner"]
        if not owner:
            if not row[k].is_zero():
                raise InvariantFailure("character of B is nonzero off the defect group")
            out.append(row[k])
            continue
        by_block: dict[int, Fraction] = {}
        for v, b in owner.items():
            a = eta_hat.angle(v)
            if by_block.setdefault(b, a) != a:
                raise InvariantFailure("eta_hat is not constant on an F-class")
        H, TH = data["H"], data["table"]
        theta = [row[j] for j in data["shifted"]]
        sc = data["s_class"]
        total = CycNum.rational(0, T.e)
        for b in data["blocks"]:
            component = CycNum.rational(0, T.e)
            for psi in b.members:
                m = TH.inner_product(theta, TH.chars[psi])
                if not m.is_zero():
                    component = component + m * TH.chars[psi][sc]
            if b.index in by_block:
                a = by_block[b.index]
                total = total + CycNum.root_of_unity(a.denominator, a.numerator) * component
            elif not component.is_zero():
                raise InvariantFailure("component of a block outside the fusion system is nonzero")
        angles = set(by_block.values())
        if len(angles) == 1:
            a = angles.pop()
            simple = CycNum.root_of_unity(a.denominator, a.numerator) * row[k]
            if simple != total:
                raise InvariantFailure("star value disagrees with eta_hat(u) chi(x)")
        out.append(total.promote(T.e) if T.e % total.e == 0 else total)
    return tuple(out)


def star_bijection(F: FusionSystemData, Z: Group, eta_hat: LinearCharacter) -> dict[int, int]:
    """The map ``Irr_0(B|1_Z) -> Irr_0(B|eta)`` for ``eta = eta_hat|_Z``, checked to be bijective."""
    B = F.block
    source = B.irr0_given(LinearCharacter.trivial(Z))
    target = set(B.irr0_given(eta_hat.restrict(Z)))
    mapping = {chi: star_construction(F, chi, eta_hat) for chi in source}
    images = set(mapping.values())
    if len(images) != len(source) or images != target:
        raise InvariantFailure("star construction is not a bijection onto Irr_0(B|eta)")
    return mapping


def fusion_stable_characters(F: FusionSystemData) -> list[LinearCharacter]:
    """Linear characters of ``P`` trivial on ``foc(F)``."""
    return linear_characters(F.P, F.focal_subgroup)


# -- nilpotent blocks -------------------------------------------------------------------


def is_nilpotent_block(F: FusionSystemData) -> bool:
    """All automizers ``N_G(Q, e_Q)/C_G(Q)`` are p-groups.

    When true, also asserts ``foc(F) = [P,P]`` and ``|Irr_0(B)| = |P:[P,P]|``.
    """
    p = F.p
    for Q in F.subgroups:
        if Q.order == 1:
            continue
        n = F.automizer_order(Q)
        if p_part(n, p) != n:
            return False
    P = F.P
    if F.focal_subgroup != P.derived:
        raise InvariantFailure("nilpotent block with foc(F) != [P,P]")
    if len(F.block.irr0) * P.derived.order != P.order:
        raise InvariantFailure("nilpotent block with |Irr_0(B)| != |P:[P,P]|")
    return True


def unique_p_rational_height_zero(F: FusionSystemData) -> int:
    B = F.block
    if B.p == 2:
        raise PreconditionError("the p-rational uniqueness statement is for odd p")
    if not F.is_nilpotent:
        raise PreconditionError("block is not nilpotent")
    found = [i for i in B.irr0 if is_p_rational(B.table.chars[i], B.p)]
    if len(found) != 1:
        raise InvariantFailure(f"{len(found)} p-rational height-zero characters in a nilpotent block")
    return found[0]


def group_fusion_maps(G: Group, P: Group) -> dict[Group, set[tuple]]:
    """Morphisms of the group fusion system ``F_P(G)`` as generator-image tuples."""
    Pset = P.elements
    out = {}
    for Q in P.p_subgroups():
        if Q.order == 1:
            continue
        maps = set()
        for g in G.element_list:
            images = tuple(conj(x, g) for x in Q.generators)
            if all(y in Pset for y in images):
                maps.add(images)
        out[Q] = maps
    return out


def lemma2_cases(F: FusionSystemData) -> list[tuple[Group, LinearCharacter]]:
    """``(Z, eta)`` for ``Z`` the fusion centre and ``O_p(G) meet Z(G)``, all linear ``eta``."""
    cases = []
    seen = set()
    for Z in (F.center, central_p_subgroup(F.group, F.p)):
        if Z in seen or not Z.is_subgroup_of(F.center):
            continue
        seen.add(Z)
        for eta in linear_characters(Z, Z.trivial):
            cases.append((Z, eta))
    return cases
