"""Linear characters of finite abelian groups.

A linear character is stored as its angle table: ``angle[x]`` is a rational in
[0, 1) with ``chi(x) = exp(2 pi i angle[x])``.  Characters of an abelian
quotient ``P/N`` are enumerated in Smith-normal-form coordinates of the
relation lattice of ``P/N`` with respect to the generators of ``P``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from .cyclotomic import CycNum
from .perm import Group, Perm, mul


class LinearCharacter:
    def __init__(self, group: Group, angles: dict):
        self.group = group
        self.angles = {x: Fraction(a) % 1 for x, a in angles.items()}

    @classmethod
    def trivial(cls, group: Group) -> "LinearCharacter":
        return cls(group, {x: Fraction(0) for x in group.elements})

    def __call__(self, x: Perm) -> CycNum:
        a = self.angles[x]
        return CycNum.root_of_unity(a.denominator, a.numerator)

    def angle(self, x: Perm) -> Fraction:
        return self.angles[x]

    def __eq__(self, other):
        if not isinstance(other, LinearCharacter):
            return NotImplemented
        return self.group == other.group and self.angles == other.angles

    def __hash__(self):
        return hash(frozenset(self.angles.items()))

    def __mul__(self, other: "LinearCharacter") -> "LinearCharacter":
        return LinearCharacter(self.group, {x: a + other.angles[x] for x, a in self.angles.items()})

    def inverse(self) -> "LinearCharacter":
        return LinearCharacter(self.group, {x: -a for x, a in self.angles.items()})

    def is_trivial(self) -> bool:
        return not any(self.angles.values())

    @property
    def order(self) -> int:
        n = 1
        for a in self.angles.values():
            d = a.denominator
            n = n * d // _gcd(n, d)
        return n

    def kernel(self) -> Group:
        return self.group.subgroup(x for x, a in self.angles.items() if a == 0)

    def restrict(self, sub: Group) -> "LinearCharacter":
        return LinearCharacter(sub, {x: self.angles[x] for x in sub.elements})

    def is_faithful(self) -> bool:
        return self.kernel().order == 1

    def __repr__(self):
        return f"LinearCharacter(order={self.order}, on group of order {self.group.order})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def smith_normal_form(rows: list[list[int]], ncols: int) -> tuple[list[int], list[list[int]]]:
    """Diagonal of the SNF of an integer matrix and the unimodular column transform ``V``.

    With ``U R V = D``, the abelian group Z^n / rowspace(R) is the direct sum of
    Z/d_i in the coordinates ``x V``.  Row operations are not recorded.
    """
    A = [list(r) for r in rows]
    m, n = len(A), ncols
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_cols(i, j):
        for M in (A, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_col(src, dst, c):
        for M in (A, V):
            for row in M:
                row[dst] += c * row[src]

    diag = []
    for t in range(min(m, n)):
        cells = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not cells:
            break
        _, i, j = min(cells)
        A[t], A[i] = A[i], A[t]
        swap_cols(t, j)
        while True:
            piv = A[t][t]
            for i in range(t + 1, m):
                q = A[i][t] // piv
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
            for j in range(t + 1, n):
                q = A[t][j] // piv
                if q:
                    add_col(t, j, -q)
            line = [(abs(A[i][t]), 0, i) for i in range(t + 1, m) if A[i][t]]
            line += [(abs(A[t][j]), 1, j) for j in range(t + 1, n) if A[t][j]]
            if line:
                _, kind, idx = min(line)
                if kind == 0:
                    A[t], A[idx] = A[idx], A[t]
                else:
                    swap_cols(t, idx)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv), None
            )
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad])]
        diag.append(abs(A[t][t]))
    diag.extend([0] * (n - len(diag)))
    return diag, V


class AbelianQuotient:
    """Coordinates on ``P/N`` for a normal subgroup ``N`` of ``P`` containing ``[P, P]``."""

    def __init__(self, P: Group, N: Optional[Group] = None):
        self.P = P
        self.N = N if N is not None else P.trivial
        gens = list(P.generators)
        self.gens = gens
        n = len(gens)
        Nset = self.N.elements
        # BFS over cosets of N recording exponent vectors; cycle relations generate the lattice
        coset_rep: dict = {}
        coset_of: dict = {}

        def coset_key(x):
            k = coset_of.get(x)
            if k is None:
                k = min(mul(h, x) for h in Nset)
                for h in Nset:
                    coset_of[mul(h, x)] = k
            return k

        e = P.identity
        vec = {coset_key(e): (0,) * n}
        coset_rep[coset_key(e)] = e
        queue = [coset_key(e)]
        relations = []
        for c in queue:
            x = coset_rep[c]
            v = vec[c]
            for i, g in enumerate(gens):
                y = mul(x, g)
                cy = coset_key(y)
                w = tuple(a + (1 if j == i else 0) for j, a in enumerate(v))
                if cy in vec:
                    rel = [a - b for a, b in zip(w, vec[cy])]
                    if any(rel):
                        relations.append(rel)
                else:
                    vec[cy] = w
                    coset_rep[cy] = y
                    queue.append(cy)
        self.order = len(vec)
        diag, V = smith_normal_form(relations, n) if n else ([], [])
        self.invariants = [d for d in diag]
        self.V = V
        self._vec = vec
        self._coset_key = coset_key
        # coordinates of generator i in SNF basis: row i of V
        self.factors = [(idx, d) for idx, d in enumerate(diag) if d != 1]
        if any(d == 0 for _, d in self.factors):
            raise AssertionError("infinite factor in a finite abelian quotient")
        size = 1
        for _, d in self.factors:
            size *= d
        if size != self.order:
            raise AssertionError("Smith normal form disagrees with the quotient order")

    def coordinates(self, x: Perm) -> tuple[int, ...]:
        v = self._vec[self._coset_key(x)]
        out = []
        for idx, d in self.factors:
            out.append(sum(v[i] * self.V[i][idx] for i in range(len(v))) % d)
        return tuple(out)

    def character(self, c: tuple[int, ...]) -> LinearCharacter:
        """The character with ``x -> exp(2 pi i sum_t c_t x_t / d_t)``, inflated to ``P``."""
        angles = {}
        for x in self.P.elements:
            co = self.coordinates(x)
            angles[x] = sum(Fraction(ci * xi, d) for ci, xi, (_, d) in zip(c, co, self.factors))
        return LinearCharacter(self.P, angles)

    def characters(self) -> Iterator[LinearCharacter]:
        for c in itertools.product(*[range(d) for _, d in self.factors]):
            yield self.character(c)


def linear_characters(A: Group, kernel_contains: Optional[Group] = None) -> list[LinearCharacter]:
    """All linear characters of ``A`` trivial on ``kernel_contains`` (default ``[A, A]``)."""
    N = kernel_contains if kernel_contains is not None else A.derived
    if not A.derived.is_subgroup_of(N):
        N = A.normal_closure(list(N.generators) + list(A.derived.generators))
    return list(AbelianQuotient(A, N).characters())


def extend_linear_character(
    P: Group, N: Group, Z: Group, eta: LinearCharacter
) -> Optional[LinearCharacter]:
    """Some linear character of ``P`` trivial on ``N`` restricting to ``eta`` on ``Z``.

    Searches ``Irr(P/N)`` in SNF coordinates in lexicographic order; ``None`` when
    no extension exists.
    """
    quotient = AbelianQuotient(P, N)
    zgens = Z.generators
    zco = [quotient.coordinates(z) for z in zgens]
    targets = [eta.angle(z) for z in zgens]
    for c in itertools.product(*[range(d) for _, d in quotient.factors]):
        ok = True
        for co, t in zip(zco, targets):
            a = sum(Fraction(ci * xi, d) for ci, xi, (_, d) in zip(c, co, quotient.factors))
            if (a - t) % 1:
                ok = False
                break
        if ok:
            return quotient.character(c)
    return None


def angle_of_root(value: CycNum, order_bound: int) -> Optional[Fraction]:
    """The angle ``a`` with ``value = exp(2 pi i a)`` if ``value`` is an ``order_bound``-th root of unity."""
    for k in range(order_bound):
        if CycNum.root_of_unity(order_bound, k) == value:
            return Fraction(k, order_bound) % 1
    return None
