"""p-blocks of ordinary characters.

Blocks are the classes of characters whose central characters
``omega_chi(K) = |K| chi(x_K) / chi(1)`` agree after reduction mod p.  All
groups sharing a root permutation group reduce through one
:class:`~blockverify.cyclotomic.FpEmbedding` (built for the root's exponent),
so central characters of a subgroup and of the whole group live in the same
finite field and Brauer correspondence is a comparison of tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .chartab import CharTable, character_table
from .cyclotomic import CycNum, FpEmbedding
from .errors import InvariantFailure, PreconditionError
from .linear import LinearCharacter, linear_characters
from .perm import Group, QuotientMap, inv, nu, p_part, perm_order


def embedding_for(G: Group, p: int) -> FpEmbedding:
    root = G.root
    key = ("embedding", p)
    found = root._cache.get(key)
    if found is None:
        found = FpEmbedding(p, root.exponent)
        root._cache[key] = found
    return found


@dataclass(eq=False)
class Block:
    """A p-block of ``group``: its characters (row indices of ``table``) and central character."""

    group: Group
    table: CharTable
    p: int
    index: int
    members: tuple[int, ...]
    central: tuple[int, ...]
    embedding: FpEmbedding = field(repr=False)

    def __repr__(self) -> str:
        return (
            f"Block(p={self.p}, index={self.index}, degrees={self.degrees}, "
            f"defect={self.defect}, group order={self.group.order})"
        )

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(self.table.degrees[i] for i in self.members)

    @property
    def is_principal(self) -> bool:
        return self.table.trivial_index in self.members

    def character_defect(self, i: int) -> int:
        return nu(self.group.order, self.p) - nu(self.table.degrees[i], self.p)

    @cached_property
    def defect(self) -> int:
        return max(self.character_defect(i) for i in self.members)

    def height(self, i: int) -> int:
        if i not in self.members:
            raise ValueError(f"character {i} is not in this block")
        return self.defect - self.character_defect(i)

    def k_d(self, d: int) -> int:
        return sum(1 for i in self.members if self.character_defect(i) == d)

    @cached_property
    def irr0(self) -> tuple[int, ...]:
        return tuple(i for i in self.members if self.height(i) == 0)

    def irr0_given(self, eta: LinearCharacter) -> tuple[int, ...]:
        """Height-zero members covering the linear character ``eta`` of a central p-subgroup."""
        Z = eta.group
        if not Z.is_p_group(self.p):
            raise PreconditionError("the central subgroup must be a p-group")
        return tuple(i for i in self.irr0 if self.table.covers(i, eta))

    @cached_property
    def idempotent(self) -> "BlockIdempotent":
        return block_idempotent(self)

    @cached_property
    def defect_group(self) -> Group:
        return defect_group(self)

    def central_value(self, coeffs: Sequence[int]) -> int:
        """``lambda_B`` applied to the central element sum a_K K^."""
        F = self.embedding.field
        total = 0
        for a, lam in zip(coeffs, self.central):
            if a and lam:
                total = F.add(total, F.mul(a, lam))
        return total

    def to_json(self) -> dict:
        ks = {}
        for i in self.members:
            d = self.character_defect(i)
            ks[str(d)] = ks.get(str(d), 0) + 1
        return {
            "p": self.p,
            "block": self.index,
            "members": list(self.members),
            "degrees": list(self.degrees),
            "defect": self.defect,
            "defect_group_order": self.defect_group.order,
            "k_d": dict(sorted(ks.items())),
        }


@dataclass(eq=False)
class BlockIdempotent:
    """Coefficients over GF(p^k) of a block idempotent in the class-sum basis."""

    block: Block
    coeffs: tuple[int, ...]


def block_partition(table: CharTable, p: int, embedding: Optional[FpEmbedding] = None) -> list[Block]:
    """p-blocks of ``table.group``, principal block first, then by least member."""
    G = table.group
    E = embedding or embedding_for(G, p)
    key = ("blocks", p, E.e)
    cached = G._cache.get(key)
    if cached is not None and cached[0] is table:
        return cached[1]
    groups: dict[tuple, list[int]] = {}
    for i in range(len(table.chars)):
        lam = tuple(E.reduce(v) for v in table.central_character(i))
        groups.setdefault(lam, []).append(i)
    order = sorted(groups.items(), key=lambda kv: (table.trivial_index not in kv[1], min(kv[1])))
    blocks = [
        Block(G, table, p, idx, tuple(members), lam, E)
        for idx, (lam, members) in enumerate(order)
    ]
    G._cache[key] = (table, blocks)
    return blocks


def blocks_of(G: Group, p: int) -> list[Block]:
    return block_partition(character_table(G), p)


def principal_block(G: Group, p: int) -> Block:
    return blocks_of(G, p)[0]


def block_of_character(G: Group, p: int, i: int) -> Block:
    return next(b for b in blocks_of(G, p) if i in b.members)


# -- group algebra centre over GF(p^k) --------------------------------------------


def block_idempotent(B: Block) -> BlockIdempotent:
    """``e_B = sum_K a_K K^`` with ``a_K = (1/|G|) sum_{chi in B} chi(1) chi(x_K^-1)`` reduced mod p."""
    T = B.table
    G = B.group
    inverse = G.inverse_classes
    coeffs = []
    for k in range(len(G.classes)):
        total = CycNum.rational(0, T.e)
        for i in B.members:
            total = total + T.chars[i][inverse[k]] * T.degrees[i]
        coeffs.append(B.embedding.reduce(total / G.order))
    return BlockIdempotent(B, tuple(coeffs))


def centre_multiply(G: Group, E: FpEmbedding, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    """Product of two class-sum combinations in the centre of GF(p^k)G."""
    from .chartab import class_structure_constants

    a = class_structure_constants(G)
    F = E.field
    r = len(G.classes)
    out = [0] * r
    for i in range(r):
        if not u[i]:
            continue
        for j in range(r):
            if not v[j]:
                continue
            c = F.mul(u[i], v[j])
            row = a[i, j]
            for k in range(r):
                n = int(row[k]) % E.p
                if n:
                    out[k] = F.add(out[k], F.mul(c, F.from_int(n)))
    return tuple(out)


# -- defect groups ------------------------------------------------------------------


def _is_p_regular(order: int, p: int) -> bool:
    return order % p != 0


def defect_group(B: Block) -> Group:
    """Minimal Sylow p-subgroup of C_G(x_K) over p-regular classes with lambda_B(K^) != 0."""
    G = B.group
    p = B.p
    candidates = []
    for k, c in enumerate(G.classes):
        if B.central[k] and _is_p_regular(c.order, p):
            C = G.centralizer([c.rep])
            candidates.append(C.sylow(p))
    if not candidates:
        raise InvariantFailure("no class with nonzero central character")
    smallest = min(D.order for D in candidates)
    minimal = sorted({D for D in candidates if D.order == smallest}, key=lambda D: D.element_list)
    chosen = minimal[0]
    if chosen.order != B.p**B.defect:
        raise InvariantFailure(
            f"defect group order {chosen.order} differs from p^d = {B.p ** B.defect}"
        )
    for other in minimal[1:]:
        if G.transporter(chosen, other) is None:
            raise InvariantFailure("minimal defect-class Sylow subgroups are not conjugate")
    return chosen


# -- Brauer correspondence ------------------------------------------------------------


def induced_central_character(b: Block, G: Group) -> tuple[int, ...]:
    """``lambda_b^G(K^) = lambda_b(sum of K meet H)`` for every class ``K`` of ``G``."""
    H = b.group
    F = b.embedding.field
    values = [0] * len(G.classes)
    for l, c in enumerate(H.classes):
        k = G.class_of(c.rep)
        values[k] = F.add(values[k], b.central[l])
    return tuple(values)


def brauer_correspondent(b: Block, G: Group) -> Optional[Block]:
    """The block ``b^G`` of ``G``, or ``None`` if ``lambda_b^G`` is not a block's central character."""
    if not b.group.is_subgroup_of(G):
        raise ValueError("Brauer correspondence needs H <= G")
    lam = induced_central_character(b, G)
    for B in blocks_of(G, b.p):
        if B.central == lam:
            return B
    return None


def local_blocks_over(H: Group, B: Block) -> list[Block]:
    """Blocks ``b`` of ``H`` with ``b^G = B``."""
    return [b for b in blocks_of(H, B.p) if brauer_correspondent(b, B.group) is B]


# -- central quotients ------------------------------------------------------------


def _kernel_contains(T: CharTable, i: int, Z: Group) -> bool:
    G = T.group
    deg = T.degrees[i]
    return all(T.chars[i][G.class_of(z)] == deg for z in Z.generators)


def dominated_block(B: Block, Z: Group, quotient: Optional[QuotientMap] = None) -> tuple[QuotientMap, Block]:
    """Block of ``H/Z`` formed by the members of ``B`` with ``Z`` in their kernel.

    ``quotient`` may be a map of the root group modulo ``Z``; the image of
    ``B.group`` is then a subgroup of ``quotient.group``, so dominated blocks of
    local subgroups can be compared with those of the whole group.
    """
    H = B.group
    if not Z.elements <= H.center.elements or not Z.is_p_group(B.p):
        raise PreconditionError("domination requires a central p-subgroup")
    if quotient is None:
        quotient = H.root.quotient(Z) if H.root is H else H.quotient(Z)
    if quotient.source is H:
        Hbar = quotient.group
    else:
        Hbar = quotient.image_subgroup(H)
    Tbar = character_table(Hbar)
    T = B.table
    column = [Hbar.class_of(quotient.image(c.rep)) for c in H.classes]
    inflated = []
    for i in B.members:
        if not _kernel_contains(T, i, Z):
            continue
        target = [None] * len(Hbar.classes)
        for k, kbar in enumerate(column):
            target[kbar] = T.chars[i][k]
        j = Tbar.find(tuple(v.promote(Tbar.e) if Tbar.e % v.e == 0 else v for v in target))
        if j is None:
            # values may carry a larger conductor than the quotient's exponent
            j = next((t for t, row in enumerate(Tbar.chars) if all(a == b for a, b in zip(row, target))), None)
        if j is None:
            raise InvariantFailure("inflated character not found in the quotient table")
        inflated.append(j)
    if not inflated:
        raise InvariantFailure("no member of the block has Z in its kernel")
    members = set(inflated)
    for Bbar in blocks_of(Hbar, B.p):
        if set(Bbar.members) == members:
            return quotient, Bbar
    raise InvariantFailure("characters of B trivial on Z do not form a single block of the quotient")


# -- counting checks ----------------------------------------------------------------


def central_p_subgroup(G: Group, p: int) -> Group:
    """``Z = O_p(G) meet Z(G)``."""
    Op = G.p_core(p).elements
    return G.subgroup(x for x in G.center.elements if x in Op)


def amk_check(B: Block) -> dict:
    """|Irr_0(B)| against |Irr_0(b)| for the Brauer correspondent b in N_G(D)."""
    if B.defect == 0:
        raise PreconditionError("Alperin-McKay check needs positive defect")
    G = B.group
    D = B.defect_group
    N = G.normalizer(D)
    corr = local_blocks_over(N, B)
    if len(corr) != 1:
        raise InvariantFailure(f"expected one Brauer correspondent in N_G(D), found {len(corr)}")
    b = corr[0]
    lhs, rhs = len(B.irr0), len(b.irr0)
    return {
        "p": B.p,
        "block": B.index,
        "defect": B.defect,
        "defect_group_order": D.order,
        "normalizer_order": N.order,
        "irr0_G": lhs,
        "irr0_N": rhs,
        "equal": lhs == rhs,
    }


def extendable_characters(B: Block, Z: Group) -> list[LinearCharacter]:
    """Linear characters of the central p-subgroup ``Z`` that extend to the defect group."""
    P = B.defect_group
    PP = P.derived.elements
    inter = [z for z in Z.elements if z in PP]
    return [eta for eta in linear_characters(Z, Z.trivial) if all(eta.angle(z) == 0 for z in inter)]


def lemma4_check(B: Block, Z: Optional[Group] = None) -> dict:
    """|Irr_0(B)| = |Irr_0(B | 1_Z)| * #{eta in Irr(Z) extending to the defect group}."""
    G = B.group
    if Z is None:
        Z = central_p_subgroup(G, B.p)
    if not Z.elements <= B.defect_group.elements:
        raise InvariantFailure("central p-subgroup is not contained in the defect group")
    trivial = LinearCharacter.trivial(Z)
    base = len(B.irr0_given(trivial))
    ext = len(extendable_characters(B, Z))
    lhs = len(B.irr0)
    return {
        "p": B.p,
        "block": B.index,
        "Z_order": Z.order,
        "irr0": lhs,
        "irr0_trivial_Z": base,
        "extendable": ext,
        "equal": lhs == base * ext,
    }


def lemma3_check(B: Block, Z: Optional[Group] = None) -> dict:
    """Every eta with Irr_0(B|eta) nonempty has Z meet [P,P] in its kernel."""
    G = B.group
    if Z is None:
        Z = central_p_subgroup(G, B.p)
    PP = B.defect_group.derived.elements
    inter = [z for z in Z.elements if z in PP]
    counterexamples = []
    per_eta = []
    for eta in linear_characters(Z, Z.trivial):
        n = len(B.irr0_given(eta))
        ext = all(eta.angle(z) == 0 for z in inter)
        per_eta.append({"order": eta.order, "irr0": n, "extends": ext})
        if n and not ext:
            counterexamples.append(eta)
    return {
        "p": B.p,
        "block": B.index,
        "Z_order": Z.order,
        "characters": per_eta,
        "counterexamples": len(counterexamples),
        "ok": not counterexamples,
    }


def central_quotient_check(B: Block) -> dict:
    """Reduction modulo a central p-subgroup: the AM count for B matches iff it matches for B-bar.

    ``Z = O_p(G) meet Z(G)``; B-bar and C-bar are the blocks dominated by B
    and by its Brauer correspondent C in N_G(P), and they are checked to be
    Brauer correspondents in G/Z relative to N_G(P)/Z = N_{G/Z}(P/Z).
    """
    G = B.group
    p = B.p
    Z = central_p_subgroup(G, p)
    P = B.defect_group
    N = G.normalizer(P)
    corr = local_blocks_over(N, B)
    if len(corr) != 1:
        raise InvariantFailure("no unique Brauer correspondent in N_G(P)")
    C = corr[0]
    if G.root is not G:
        raise PreconditionError("central quotient check runs on a root group")
    qm = G.quotient(Z)
    _, Bbar = dominated_block(B, Z, qm)
    _, Cbar = dominated_block(C, Z, qm)
    Gbar = qm.group
    Pbar = qm.image_subgroup(P)
    Nbar = qm.image_subgroup(N)
    if Gbar.normalizer(Pbar) != Nbar:
        raise InvariantFailure("N_{G/Z}(P/Z) differs from N_G(P)/Z")
    if brauer_correspondent(Cbar, Gbar) is not Bbar:
        raise InvariantFailure("dominated blocks are not Brauer correspondents")
    original = len(B.irr0) == len(C.irr0)
    reduced = len(Bbar.irr0) == len(Cbar.irr0)
    return {
        "p": p,
        "block": B.index,
        "Z_order": Z.order,
        "irr0": [len(B.irr0), len(C.irr0)],
        "irr0_quotient": [len(Bbar.irr0), len(Cbar.irr0)],
        "equivalent": original == reduced,
    }
