"""Finite permutation groups.

Permutations are tuples of images on ``0..degree-1``.  Products act on the
right: ``mul(a, b)`` applies ``a`` first, and ``x^g = g^-1 x g``.

Everything here is exhaustive and deterministic: a stabilizer chain gives
group orders and membership, while conjugacy classes, centralizers,
normalizers and Sylow subgroups are computed by walking the element list.
That is the right trade-off for desk-scale groups (orders up to a few
thousand) and is guarded by :data:`blockverify.limits.LIMITS`.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

from .errors import InputError, ResourceLimitError
from .limits import LIMITS

Perm = tuple


def identity(n: int) -> Perm:
    return tuple(range(n))


def mul(a: Perm, b: Perm) -> Perm:
    """Product ``ab``: apply ``a`` then ``b``."""
    return tuple([b[i] for i in a])


def inv(a: Perm) -> Perm:
    r = [0] * len(a)
    for i, x in enumerate(a):
        r[x] = i
    return tuple(r)


def conj(x: Perm, g: Perm) -> Perm:
    """``x^g = g^-1 x g``."""
    r = [0] * len(x)
    for i, xi in enumerate(x):
        r[g[i]] = g[xi]
    return tuple(r)


def power(a: Perm, k: int) -> Perm:
    n = len(a)
    order = perm_order(a)
    k %= order
    result = identity(n)
    base = a
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


def perm_order(a: Perm) -> int:
    seen = [False] * len(a)
    order = 1
    for i in range(len(a)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = a[j]
            length += 1
        order = order * length // math.gcd(order, length)
    return order


def commutator(a: Perm, b: Perm) -> Perm:
    """``[a, b] = a^-1 b^-1 a b``."""
    return mul(mul(inv(a), inv(b)), mul(a, b))


def check_perm(p: Sequence[int], degree: int) -> Perm:
    try:
        p = tuple(int(x) for x in p)
    except (TypeError, ValueError):
        raise InputError(f"permutation entries must be integers: {p!r}") from None
    if len(p) != degree or set(p) != set(range(degree)):
        raise InputError(f"not a permutation of 0..{degree - 1}: {list(p)}")
    return p


def cycles_to_perm(degree: int, cycles: Iterable[Sequence[int]]) -> Perm:
    img = list(range(degree))
    for cyc in cycles:
        for i, x in enumerate(cyc):
            img[x] = cyc[(i + 1) % len(cyc)]
    return check_perm(img, degree)


def p_part(n: int, p: int) -> int:
    """Largest power of ``p`` dividing ``n``."""
    r = 1
    while n % p == 0:
        n //= p
        r *= p
    return r


def nu(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class ConjugacyClass:
    rep: Perm
    size: int
    order: int
    elements: frozenset


class StabilizerChain:
    """Deterministic Schreier-Sims: base, strong generators and transversals.

    ``strong[i]`` holds the generators introduced at level ``i``; the level-``i``
    stabilizer is generated by ``strong[i:]``.
    """

    def __init__(self, degree: int, generators: Sequence[Perm]):
        self.degree = degree
        self.base: list[int] = []
        self.strong: list[list[Perm]] = []
        self.transversals: list[dict[int, Perm]] = []
        e = identity(degree)
        gens = [g for g in generators if g != e]
        if not gens:
            return
        for g in gens:
            if all(g[b] == b for b in self.base):
                self.base.append(next(i for i in range(degree) if g[i] != i))
        self.strong = [list(gens)] + [[] for _ in self.base[1:]]
        self.transversals = [{} for _ in self.base]
        for lv in range(len(self.base)):
            self._orbit(lv)
        level = len(self.base) - 1
        while level >= 0:
            self._orbit(level)
            level = self._check(level)

    def _level_gens(self, level: int) -> list[Perm]:
        return [s for gens in self.strong[level:] for s in gens]

    def _orbit(self, level: int) -> None:
        point = self.base[level]
        trans = {point: identity(self.degree)}
        queue = deque([point])
        gens = self._level_gens(level)
        while queue:
            x = queue.popleft()
            for s in gens:
                y = s[x]
                if y not in trans:
                    trans[y] = mul(trans[x], s)
                    queue.append(y)
        self.transversals[level] = trans

    def _check(self, level: int) -> int:
        """Sift every Schreier generator of ``level``; return the next level to process."""
        e = identity(self.degree)
        trans = self.transversals[level]
        for x, t in list(trans.items()):
            for s in self._level_gens(level):
                h = mul(mul(t, s), inv(trans[s[x]]))
                residue, drop = self.sift(h, level + 1)
                if residue == e:
                    continue
                if drop == len(self.base):
                    self.base.append(next(i for i in range(self.degree) if residue[i] != i))
                    self.strong.append([])
                    self.transversals.append({})
                self.strong[drop].append(residue)
                for lv in range(level + 1, drop + 1):
                    self._orbit(lv)
                return drop
        return level - 1

    def sift(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        for level in range(start, len(self.base)):
            t = self.transversals[level].get(g[self.base[level]])
            if t is None:
                return g, level
            g = mul(g, inv(t))
        return g, len(self.base)

    @property
    def order(self) -> int:
        result = 1
        for t in self.transversals:
            result *= len(t)
        return result

    def contains(self, g: Perm) -> bool:
        residue, _ = self.sift(g)
        return residue == identity(self.degree)


class Group:
    """A permutation group, or a subgroup of one.

    Subgroups share an intern table with their root group, so asking twice for
    the same centralizer returns the same object (and its cached character
    table and blocks).
    """

    def __init__(
        self,
        degree: int,
        generators: Iterable[Sequence[int]] = (),
        name: Optional[str] = None,
        *,
        parent: Optional["Group"] = None,
        elements: Optional[Iterable[Perm]] = None,
    ):
        if degree < 0:
            raise InputError("degree must be non-negative")
        self.degree = int(degree)
        gens = []
        for g in generators:
            g = check_perm(g, self.degree)
            if g not in gens:
                gens.append(g)
        self.name = name
        self.parent = parent.root if parent is not None else None
        self._given = frozenset(elements) if elements is not None else None
        if self._given is not None and not gens:
            gens = _generating_set(self.degree, self._given)
        self.generators: tuple[Perm, ...] = tuple(gens)
        self._subgroups: dict[frozenset, Group] = {}
        self._cache: dict = {}

    def __repr__(self) -> str:
        label = self.name or "Group"
        return f"<{label} degree={self.degree} order={self.order}>"

    @property
    def root(self) -> "Group":
        return self.parent if self.parent is not None else self

    # -- elements -------------------------------------------------------

    @cached_property
    def chain(self) -> StabilizerChain:
        return StabilizerChain(self.degree, self.generators)

    @cached_property
    def order(self) -> int:
        if self._given is not None:
            return len(self._given)
        return self.chain.order

    def __len__(self) -> int:
        return self.order

    @cached_property
    def _bfs(self) -> tuple[frozenset, dict]:
        if self.order > LIMITS.max_group_order:
            raise ResourceLimitError(
                f"group order {self.order} exceeds bound {LIMITS.max_group_order}"
            )
        e = identity(self.degree)
        words = {e: ()}
        queue = deque([e])
        while queue:
            x = queue.popleft()
            w = words[x]
            for i, s in enumerate(self.generators):
                y = mul(x, s)
                if y not in words:
                    words[y] = w + (i,)
                    queue.append(y)
        if len(words) != self.order:
            raise AssertionError("element enumeration disagrees with stabilizer chain")
        return frozenset(words), words

    @cached_property
    def elements(self) -> frozenset:
        if self._given is not None:
            return self._given
        return self._bfs[0]

    @cached_property
    def element_list(self) -> tuple:
        return tuple(sorted(self.elements))

    def word(self, g: Perm) -> tuple[int, ...]:
        """A word in ``self.generators`` evaluating to ``g``."""
        return self._bfs[1][g]

    def evaluate_word(self, word: Sequence[int]) -> Perm:
        x = self.identity
        for i in word:
            x = mul(x, self.generators[i])
        return x

    def __contains__(self, g) -> bool:
        if self._given is not None or "elements" in self.__dict__:
            return g in self.elements
        return self.chain.contains(g)

    def __iter__(self) -> Iterator[Perm]:
        return iter(self.element_list)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Group):
            return NotImplemented
        return self.degree == other.degree and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.degree, self.elements))

    @property
    def identity(self) -> Perm:
        return identity(self.degree)

    @cached_property
    def exponent(self) -> int:
        e = 1
        for c in self.classes:
            e = e * c.order // math.gcd(e, c.order)
        return e

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(mul(a, b) == mul(b, a) for a in gens for b in gens)

    def is_p_group(self, p: int) -> bool:
        return p_part(self.order, p) == self.order

    # -- subgroups --------------------------------------------------------

    def subgroup(self, elements: Iterable[Perm], name: Optional[str] = None) -> "Group":
        """Interned subgroup with the given element set (must be closed)."""
        key = frozenset(elements)
        table = self.root._subgroups
        found = table.get(key)
        if found is None:
            if self.root is self and key == self.elements:
                return self
            found = Group(self.degree, (), name, parent=self.root, elements=key)
            table[key] = found
        return found

    def generated(self, gens: Iterable[Perm], name: Optional[str] = None) -> "Group":
        return self.subgroup(closure(self.degree, gens), name)

    @cached_property
    def trivial(self) -> "Group":
        return self.subgroup([self.identity])

    def is_subgroup_of(self, other: "Group") -> bool:
        return self.elements <= other.elements

    def is_normal_in(self, other: "Group") -> bool:
        return all(conj(h, g) in self.elements for g in other.generators for h in self.generators)

    def conjugate(self, g: Perm) -> "Group":
        return self.root.subgroup(conj(x, g) for x in self.elements)

    def centralizer(self, sub: "Group | Iterable[Perm]") -> "Group":
        gens = sub.generators if isinstance(sub, Group) else tuple(sub)
        return self.subgroup(g for g in self.elements if all(mul(g, s) == mul(s, g) for s in gens))

    def normalizer(self, sub: "Group") -> "Group":
        target = sub.elements
        gens = sub.generators
        return self.subgroup(
            g for g in self.elements if all(conj(s, g) in target for s in gens)
        )

    def stabilizer_of_chain(self, chain: Sequence["Group"]) -> "Group":
        """Simultaneous normalizer of the terms of ``chain``."""
        result = set(self.elements)
        for q in chain:
            target = q.elements
            result = {g for g in result if all(conj(s, g) in target for s in q.generators)}
        return self.subgroup(result)

    @cached_property
    def center(self) -> "Group":
        return self.subgroup(c.rep for c in self.classes if c.size == 1)

    def commutator_subgroup(self, a: "Group", b: "Group") -> "Group":
        """``[a, b]`` for subgroups normalised by ``self`` (normal closure of generator commutators)."""
        seeds = [commutator(x, y) for x in a.generators for y in b.generators]
        return self.normal_closure(seeds)

    @cached_property
    def derived(self) -> "Group":
        return self.commutator_subgroup(self, self)

    def normal_closure(self, seeds: Iterable[Perm]) -> "Group":
        gens = set()
        queue = deque(seeds)
        while queue:
            x = queue.popleft()
            if x in gens or x == self.identity:
                continue
            gens.add(x)
            for g in self.generators:
                queue.append(conj(x, g))
        return self.subgroup(closure(self.degree, gens))

    def sylow(self, p: int) -> "Group":
        key = ("sylow", p)
        if key in self._cache:
            return self._cache[key]
        target = p_part(self.order, p)
        P = self.trivial
        while P.order < target:
            N = self.normalizer(P)
            for x in N.element_list:
                if x not in P.elements and p_part(perm_order(x), p) == perm_order(x):
                    P = self.generated(P.generators + (x,))
                    break
            else:  # pragma: no cover - contradicts Sylow's theorem
                raise AssertionError("no p-element extends a non-Sylow p-subgroup")
        self._cache[key] = P
        return P

    def p_core(self, p: int) -> "Group":
        """O_p: the union of the classes lying entirely inside a Sylow p-subgroup."""
        S = self.sylow(p).elements
        return self.subgroup(
            x for c in self.classes if c.elements <= S for x in c.elements
        )

    def p_subgroups(self) -> list["Group"]:
        """All subgroups of a p-group, trivial group first, by layer."""
        key = "psubgroups"
        if key in self._cache:
            return self._cache[key]
        order = self.order
        primes = {q for q in range(2, order + 1) if order % q == 0 and is_prime(q)}
        if len(primes) > 1:
            raise ValueError("subgroup enumeration requires a p-group")
        if order > LIMITS.max_p_group_order:
            raise ResourceLimitError(
                f"p-group order {order} exceeds bound {LIMITS.max_p_group_order}"
            )
        if order == 1:
            self._cache[key] = [self]
            return [self]
        p = primes.pop()
        layer = [self.trivial]
        found = [self.trivial]
        elements = self.element_list
        while layer:
            nxt: dict[frozenset, None] = {}
            for H in layer:
                hs = H.elements
                for x in elements:
                    if x in hs or power(x, p) not in hs:
                        continue
                    if not all(conj(h, x) in hs for h in H.generators):
                        continue
                    K = set(hs)
                    y = x
                    for _ in range(p - 1):
                        K.update(mul(h, y) for h in hs)
                        y = mul(y, x)
                    nxt.setdefault(frozenset(K))
            layer = [self.subgroup(k) for k in nxt]
            found.extend(layer)
            if len(found) > LIMITS.max_psubgroups:
                raise ResourceLimitError(
                    f"more than {LIMITS.max_psubgroups} subgroups in p-group of order {order}"
                )
        self._cache[key] = found
        return found

    def transporter(self, a: "Group", b: "Group") -> Optional[Perm]:
        """Least ``g`` in ``self`` with ``a^g = b``, or ``None``."""
        if a.order != b.order:
            return None
        if a == b:
            return self.identity
        target = b.elements
        for g in self.element_list:
            if all(conj(s, g) in target for s in a.generators):
                return g
        return None

    # -- conjugacy classes -------------------------------------------------

    @cached_property
    def classes(self) -> tuple[ConjugacyClass, ...]:
        if self.order > LIMITS.max_group_order:
            raise ResourceLimitError(
                f"group order {self.order} exceeds bound {LIMITS.max_group_order}"
            )
        seen: set = set()
        found = []
        for x in self.element_list:
            if x in seen:
                continue
            orbit = {x}
            queue = deque([x])
            while queue:
                y = queue.popleft()
                for g in self.generators:
                    z = conj(y, g)
                    if z not in orbit:
                        orbit.add(z)
                        queue.append(z)
            seen |= orbit
            rep = min(orbit)
            found.append(ConjugacyClass(rep, len(orbit), perm_order(rep), frozenset(orbit)))
        found.sort(key=lambda c: (c.order, c.size, c.rep))
        return tuple(found)

    @cached_property
    def class_index(self) -> dict:
        return {x: i for i, c in enumerate(self.classes) for x in c.elements}

    def class_of(self, x: Perm) -> int:
        return self.class_index[x]

    @cached_property
    def inverse_classes(self) -> tuple[int, ...]:
        return tuple(self.class_index[inv(c.rep)] for c in self.classes)

    def power_class(self, i: int, k: int) -> int:
        key = ("pow", i, k % self.classes[i].order)
        found = self._cache.get(key)
        if found is None:
            found = self.class_index[power(self.classes[i].rep, k)]
            self._cache[key] = found
        return found

    def power_map(self, k: int) -> tuple[int, ...]:
        return tuple(self.power_class(i, k) for i in range(len(self.classes)))

    # -- orbits --------------------------------------------------------------

    def orbit(self, point: int) -> list[int]:
        seen = [point]
        mark = {point}
        for x in seen:
            for g in self.generators:
                y = g[x]
                if y not in mark:
                    mark.add(y)
                    seen.append(y)
        return seen

    def stabilizer(self, point: int) -> "Group":
        return self.subgroup(g for g in self.elements if g[point] == point)

    # -- quotients -----------------------------------------------------------

    def quotient(self, normal: "Group") -> "QuotientMap":
        return QuotientMap(self, normal)


def closure(degree: int, gens: Iterable[Perm]) -> frozenset:
    gens = [g for g in gens]
    e = identity(degree)
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = mul(x, s)
            if y not in seen:
                if len(seen) >= LIMITS.max_group_order:
                    raise ResourceLimitError(
                        f"closure exceeds bound {LIMITS.max_group_order}"
                    )
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def _generating_set(degree: int, elements: frozenset) -> list[Perm]:
    gens: list[Perm] = []
    current = frozenset([identity(degree)])
    for x in sorted(elements, key=lambda g: (-perm_order(g), g)):
        if x not in current:
            gens.append(x)
            current = closure(degree, gens)
            if len(current) == len(elements):
                break
    return gens


class QuotientMap:
    """``G -> G/N`` realised by the right action of ``G`` on the cosets of ``N``.

    The action's kernel is the core of ``N``, which is ``N`` itself, so the image
    is a faithful permutation representation of the quotient.
    """

    def __init__(self, group: Group, normal: Group):
        if not normal.is_normal_in(group) or not normal.is_subgroup_of(group):
            raise ValueError("quotient requires a normal subgroup")
        self.source = group
        self.kernel = normal
        coset_of: dict = {}
        reps: list = []
        for x in group.element_list:
            if x in coset_of:
                continue
            idx = len(reps)
            reps.append(x)
            for n in normal.elements:
                coset_of[mul(n, x)] = idx
        self._coset_of = coset_of
        self._reps = reps
        gens = [self._act(g) for g in group.generators]
        name = f"{group.name}/N" if group.name else None
        self.group = Group(len(reps), gens, name)
        self._images: dict = {}

    def _act(self, g: Perm) -> Perm:
        return tuple(self._coset_of[mul(r, g)] for r in self._reps)

    def image(self, g: Perm) -> Perm:
        found = self._images.get(g)
        if found is None:
            found = self._act(g)
            self._images[g] = found
        return found

    def image_subgroup(self, H: Group) -> Group:
        return self.group.subgroup({self.image(h) for h in H.elements})


def group_from_generators(degree: int, perms: Iterable[Sequence[int]], name: Optional[str] = None) -> Group:
    return Group(degree, perms, name)


# -- named groups used by the corpus and tests ---------------------------------


def symmetric_group(n: int) -> Group:
    if n <= 1:
        return Group(max(n, 1), [], f"S{n}")
    gens = [cycles_to_perm(n, [list(range(n))]), cycles_to_perm(n, [[0, 1]])]
    return Group(n, gens, f"S{n}")


def alternating_group(n: int) -> Group:
    if n <= 2:
        return Group(max(n, 1), [], f"A{n}")
    gens = [cycles_to_perm(n, [[0, 1, 2]])]
    if n > 3:
        if n % 2:
            gens.append(cycles_to_perm(n, [list(range(n))]))
        else:
            gens.append(cycles_to_perm(n, [list(range(1, n))]))
    return Group(n, gens, f"A{n}")


def cyclic_group(n: int) -> Group:
    return Group(n, [cycles_to_perm(n, [list(range(n))])] if n > 1 else [], f"C{n}")


def dihedral_group(n: int) -> Group:
    """Dihedral group of order ``2n`` acting on ``n`` points (``n >= 3``)."""
    rot = cycles_to_perm(n, [list(range(n))])
    ref = tuple((-i) % n for i in range(n))
    return Group(n, [rot, ref], f"D{2 * n}")


def direct_product(a: Group, b: Group, name: Optional[str] = None) -> Group:
    n = a.degree + b.degree
    gens = [tuple(g) + tuple(range(a.degree, n)) for g in a.generators]
    gens += [tuple(range(a.degree)) + tuple(x + a.degree for x in g) for g in b.generators]
    return Group(n, gens, name)
