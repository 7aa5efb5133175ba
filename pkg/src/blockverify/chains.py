"""Normal chains of p-subgroups, the involution n, and Dade's alternating sum.

Two chain families are supported:

* group chains: normal chains inside a Sylow p-subgroup up to G-conjugacy,
  with local counts summed over the blocks of ``N_G(sigma)`` inducing to B;
* Brauer-pair chains: normal chains inside a defect group ``P`` of B up to
  conjugation by elements that also carry the terminal Brauer pair
  ``(Q_m, e_{Q_m})`` to ``(Q_m^g, e_{Q_m^g})``, with local counts taken from
  the block ``e_tau`` of ``N_G(tau)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence, Union

from .blocks import Block, amk_check, blocks_of, brauer_correspondent
from .errors import InputError, InvariantFailure, PreconditionError
from .fusion import FusionSystemData, conjugate_central
from .perm import Group, Perm, conj

Chain = tuple[Group, ...]


@dataclass(eq=False)
class ChainClass:
    """A conjugacy class of normal chains with its chosen representative."""

    index: int
    chain: Chain
    members: int
    N_P: Group
    partner: int = -1
    family: "ChainFamily" = field(default=None, repr=False)

    @property
    def length(self) -> int:
        return len(self.chain) - 1

    @property
    def orders(self) -> list[int]:
        return [Q.order for Q in self.chain]

    @property
    def is_top(self) -> bool:
        return self.length == 0 and self.chain[0] == self.family.P

    def __repr__(self) -> str:
        return f"ChainClass({self.index}, orders={self.orders}, N_P={self.N_P.order})"


def normal_chains(P: Group) -> list[Chain]:
    """All chains ``Q_0 < ... < Q_m`` of nontrivial subgroups of ``P`` with every term normal in ``Q_m``."""
    subs = [Q for Q in P.p_subgroups() if Q.order > 1]
    chains: list[Chain] = []
    for top in subs:
        below = [Q for Q in subs if Q.order < top.order and Q.is_subgroup_of(top) and Q.is_normal_in(top)]
        below.sort(key=lambda Q: Q.order)

        def extend(prefix: tuple, start: int):
            chains.append(prefix + (top,))
            for i in range(start, len(below)):
                Q = below[i]
                if prefix and not (prefix[-1].order < Q.order and prefix[-1].is_subgroup_of(Q)):
                    continue
                extend(prefix + (Q,), i + 1)

        extend((), 0)
    return chains


def chain_normalizer_in(H: Group, chain: Sequence[Group]) -> Group:
    return H.stabilizer_of_chain(chain)


class ChainFamily:
    """Normal chains inside ``P`` up to conjugacy by the allowed conjugating elements.

    ``allowed(Q)`` returns pairs ``(g, Q^g)`` of elements permitted to move the
    top term ``Q``; all other terms follow.  Representatives maximise
    ``(|N_P(Q_0)|, |N_P(Q_0 < Q_1)|, ..., |N_P(sigma)|)``.
    """

    def __init__(self, G: Group, P: Group, allowed: Callable[[Group], Sequence[tuple[Perm, Group]]]):
        self.G = G
        self.P = P
        self._allowed = allowed
        order = {Q: i for i, Q in enumerate(P.p_subgroups())}
        self._position = order
        self._np_cache: dict = {}
        chains = normal_chains(P)
        self.chains = chains
        class_of: dict[Chain, int] = {}
        classes: list[list[Chain]] = []
        for sigma in chains:
            if sigma in class_of:
                continue
            idx = len(classes)
            orbit = []
            for g, S in allowed(sigma[-1]):
                image = tuple(Q.conjugate(g) for Q in sigma[:-1]) + (S,)
                if image not in class_of:
                    class_of[image] = idx
                    orbit.append(image)
            if sigma not in class_of:
                raise InvariantFailure("conjugating elements do not include the identity")
            classes.append(orbit)
        self.class_of = class_of
        built = []
        for idx, orbit in enumerate(classes):
            rep = max(orbit, key=self._rep_key)
            built.append(ChainClass(idx, rep, len(orbit), self.N_P(rep), family=self))
        # order classes canonically: by length, then term orders, then position
        built.sort(key=lambda c: (c.length, c.orders, [order[Q] for Q in c.chain]))
        remap = {c.index: i for i, c in enumerate(built)}
        for c in built:
            c.index = remap[c.index]
        self.class_of = {sigma: remap[i] for sigma, i in class_of.items()}
        self.classes: list[ChainClass] = built
        for c in built:
            c.partner = self.class_of[involution_n(self, c.chain)]

    def N_P(self, chain: Sequence[Group]) -> Group:
        key = tuple(chain)
        found = self._np_cache.get(key)
        if found is None:
            found = self.P.stabilizer_of_chain(chain)
            self._np_cache[key] = found
        return found

    def _rep_key(self, chain: Chain) -> tuple:
        sizes = tuple(self.N_P(chain[: i + 1]).order for i in range(len(chain)))
        return sizes, tuple(-self._position[Q] for Q in chain)

    def class_index(self, chain: Sequence[Group]) -> int:
        return self.class_of[tuple(chain)]

    @property
    def top(self) -> ChainClass:
        return self.classes[self.class_index((self.P,))]


def involution_n(family: ChainFamily, chain: Sequence[Group]) -> Chain:
    """Append ``N_P(sigma)`` as a new top term, or drop the top term when it already equals it."""
    chain = tuple(chain)
    P = family.P
    if chain == (P,):
        return chain
    N = family.N_P(chain)
    if chain[-1] == N:
        return chain[:-1]
    return chain + (N,)


def group_chain_family(G: Group, p: int) -> ChainFamily:
    """Normal p-chains inside a Sylow p-subgroup up to G-conjugacy."""
    S = G.sylow(p)
    if S.order == 1:
        raise PreconditionError("no nontrivial p-subgroups")
    return ChainFamily(G, S, _conjugators_into(G, S))


def _conjugators_into(G: Group, S: Group) -> Callable[[Group], list[tuple[Perm, Group]]]:
    Sset = S.elements
    cache: dict[Group, list] = {}

    def allowed(Q: Group):
        found = cache.get(Q)
        if found is None:
            found = []
            for g in G.element_list:
                if all(conj(x, g) in Sset for x in Q.generators):
                    found.append((g, Q.conjugate(g)))
            cache[Q] = found
        return found

    return allowed


def pair_chain_family(F: FusionSystemData) -> ChainFamily:
    """Normal chains in the defect group up to conjugacy of Brauer-pair chains."""
    return ChainFamily(F.group, F.P, lambda Q: F.conjugators[Q])


def enumerate_chain_classes(G: Group, B: Block, P: Optional[Group] = None, F: Optional[FusionSystemData] = None) -> list[ChainClass]:
    """Chain classes inside ``P``: group chains when ``P`` is a Sylow subgroup and no ``F`` is given."""
    if F is not None:
        return pair_chain_family(F).classes
    if P is None or P == G.sylow(B.p):
        return group_chain_family(G, B.p).classes
    return ChainFamily(G, P, _conjugators_into(G, P)).classes


def partition_classes(classes: Sequence[ChainClass]) -> tuple[list[ChainClass], list[ChainClass], list[ChainClass]]:
    """``({[P]}, B, n(B))`` with ``B`` the classes whose partner is one term longer."""
    tops, lower, upper = [], [], []
    for c in classes:
        partner = classes[c.partner]
        if classes[partner.partner] is not c:
            raise InvariantFailure("n is not an involution on chain classes")
        if partner is c:
            if not c.is_top:
                raise InvariantFailure("a class other than [P] is fixed by n")
            tops.append(c)
        elif partner.length == c.length + 1:
            lower.append(c)
        elif partner.length == c.length - 1:
            upper.append(c)
        else:
            raise InvariantFailure("n changes the chain length by more than one")
    if len(tops) != 1 or len(lower) != len(upper):
        raise InvariantFailure("chain classes do not split as {[P]} + B + n(B)")
    return tops, lower, upper


def alternating_sum(classes: Sequence[ChainClass], f: Union[Mapping[int, int], Callable[[ChainClass], int]]) -> int:
    total = 0
    for c in classes:
        value = _evaluate(f, c)
        total += -value if c.length % 2 else value
    return total


def _evaluate(f, c: ChainClass) -> int:
    if callable(f):
        return f(c)
    try:
        return f[c.index]
    except (KeyError, IndexError):
        raise InputError(f"f is undefined on chain class {c.index}") from None


def lemma5_check(classes: Sequence[ChainClass], f) -> bool:
    """Whether the alternating sum equals ``f([P])`` for an ``f`` constant on n-orbits."""
    for c in classes:
        if _evaluate(f, c) != _evaluate(f, classes[c.partner]):
            raise PreconditionError("f is not constant on the orbits of n")
    (top,), _, _ = partition_classes(classes)
    return alternating_sum(classes, f) == _evaluate(f, top)


def random_pairing_function(classes: Sequence[ChainClass], rng: random.Random, bound: int = 50) -> dict[int, int]:
    """A random integer function on classes constant on each n-orbit."""
    f: dict[int, int] = {}
    for c in classes:
        if c.index in f:
            continue
        value = rng.randint(-bound, bound)
        f[c.index] = value
        f[c.partner] = value
    return f


# -- local block counts ------------------------------------------------------------


def group_chain_kd(B: Block, c: ChainClass, d: int) -> int:
    """Sum of ``k_d(b)`` over blocks ``b`` of ``N_G(sigma)`` with ``b^G = B``."""
    G = B.group
    N = G.stabilizer_of_chain(c.chain)
    return sum(b.k_d(d) for b in blocks_of(N, B.p) if brauer_correspondent(b, G) is B)


@dataclass(eq=False)
class BrauerPairChain:
    chain: Chain
    pairs: tuple[Block, ...]
    normalizer: Group
    blocks: tuple[Block, ...]

    @property
    def admissible(self) -> bool:
        return len(self.blocks) == 1


def brauer_pair_chain(F: FusionSystemData, chain: Sequence[Group]) -> BrauerPairChain:
    """``tau`` over ``sigma``, ``N_G(tau)``, and the blocks of ``N_G(tau)`` covered by ``e_tau``."""
    G = F.group
    chain = tuple(chain)
    pairs = tuple(F.pairs[Q] for Q in chain)
    Nsigma = G.stabilizer_of_chain(chain)
    kept = [
        g
        for g in Nsigma.element_list
        if all(conjugate_central(e, g)[1] == e.central for e in pairs)
    ]
    N = G.subgroup(kept)
    e_tau = pairs[-1]
    C = e_tau.group
    if not C.is_subgroup_of(N) or not C.is_normal_in(N):
        raise InvariantFailure("C_G(Q_m) is not normal in N_G(tau)")
    coeffs = e_tau.idempotent.coeffs
    column = []
    for K in N.classes:
        if K.rep in C.elements:
            values = {coeffs[C.class_of(x)] for x in K.elements}
            if len(values) != 1:
                raise InvariantFailure("e_tau is not N_G(tau)-stable")
            column.append(values.pop())
        else:
            column.append(0)
    covered = []
    for beta in blocks_of(N, F.p):
        v = beta.central_value(column)
        if v not in (0, 1):
            raise InvariantFailure("e_tau is not idempotent modulo a block of N_G(tau)")
        if v == 1:
            covered.append(beta)
    return BrauerPairChain(chain, pairs, N, tuple(covered))


def pair_chain_kd(F: FusionSystemData, c: ChainClass, d: int) -> tuple[int, bool]:
    """``(k_d(N_G(tau), e_tau), admissible)``; inadmissible chains sum over covered blocks."""
    tau = brauer_pair_chain(F, c.chain)
    return sum(b.k_d(d) for b in tau.blocks), tau.admissible


def chain_local_kd(B: Block, c: ChainClass, d: int, F: Optional[FusionSystemData] = None) -> int:
    if F is None:
        return group_chain_kd(B, c, d)
    return pair_chain_kd(F, c, d)[0]


# -- Dade's ordinary conjecture ---------------------------------------------------------


def dade_check(B: Block, F: Optional[FusionSystemData] = None) -> dict:
    """k_d(G,B) against both alternating sums for ``0 <= d <= d(B)``."""
    G, p = B.group, B.p
    base = {"p": p, "block": B.index, "defect": B.defect}
    if B.defect == 0:
        return {**base, "status": "skipped", "reason": "block has defect zero"}
    if G.p_core(p).order != 1:
        return {**base, "status": "skipped", "reason": "O_p(G) is nontrivial"}
    if F is None:
        F = FusionSystemData(B)
    gfam = group_chain_family(G, p)
    pfam = pair_chain_family(F)
    partition_classes(gfam.classes)
    partition_classes(pfam.classes)
    rows = []
    inadmissible = set()
    for d in range(B.defect + 1):
        lhs = B.k_d(d)
        terms = []
        for c in gfam.classes:
            terms.append({"chain": c.orders, "sign": -1 if c.length % 2 else 1, "kd_local": group_chain_kd(B, c, d)})
        rhs = sum(t["sign"] * t["kd_local"] for t in terms)
        pair_terms = []
        for c in pfam.classes:
            value, ok = pair_chain_kd(F, c, d)
            if not ok:
                inadmissible.add(c.index)
            pair_terms.append({"chain": c.orders, "sign": -1 if c.length % 2 else 1, "kd_local": value})
        rhs_pairs = sum(t["sign"] * t["kd_local"] for t in pair_terms)
        rows.append(
            {
                "p": p,
                "block": B.index,
                "d": d,
                "lhs": lhs,
                "terms": terms,
                "rhs": rhs,
                "pair_terms": pair_terms,
                "rhs_pairs": rhs_pairs,
                "equal": lhs == rhs == rhs_pairs,
            }
        )
    full = B.defect
    step = []
    for c in pfam.classes:
        f_c = pair_chain_kd(F, c, full)[0]
        f_n = pair_chain_kd(F, pfam.classes[c.partner], full)[0]
        proper = c.N_P != F.P
        step.append({"chain": c.orders, "f": f_c, "f_n": f_n, "ok": f_c == f_n and (not proper or f_c == 0)})
    return {
        **base,
        "status": "pass" if all(r["equal"] for r in rows) else "fail",
        "rows": rows,
        "group_chain_classes": len(gfam.classes),
        "pair_chain_classes": len(pfam.classes),
        "inadmissible": sorted(inadmissible),
        "n_step": step,
        "n_step_ok": all(s["ok"] for s in step),
    }


def amk_from_dade_demo(B: Block, F: Optional[FusionSystemData] = None) -> dict:
    """Dade at full defect plus cancellation of n-paired chains collapse the sum to f([P]), which is the local AM count."""
    if F is None:
        F = FusionSystemData(B)
    dade = dade_check(B, F)
    amk = amk_check(B)
    pfam = pair_chain_family(F)
    top = pfam.top
    f_top = pair_chain_kd(F, top, B.defect)[0]

    def f(c: ChainClass) -> int:
        return pair_chain_kd(F, c, B.defect)[0]

    collapsed = lemma5_check(pfam.classes, f)
    out = {
        "p": B.p,
        "block": B.index,
        "dade": dade.get("status"),
        "lemma5": collapsed,
        "f_top": f_top,
        "amk": [amk["irr0_G"], amk["irr0_N"]],
    }
    out["consistent"] = (
        dade.get("status") != "pass" or (collapsed and f_top == amk["irr0_N"] == amk["irr0_G"])
    )
    return out
