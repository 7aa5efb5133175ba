"""Ordinary character tables.

Tables are computed with the Dixon-Schneider method: the class-multiplication
matrices are simultaneously diagonalised over a prime field GF(q) with
q = 1 mod e and q > 2 sqrt|G|, and each eigenvector is lifted to exact
cyclotomic values through the eigenvalue multiplicities along the power map.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .cyclotomic import CycNum
from .errors import InputError, InvariantFailure, PreconditionError, ResourceLimitError
from .limits import LIMITS
from .linear import LinearCharacter, angle_of_root
from .perm import Group, inv, is_prime, mul, p_part, nu


# -- linear algebra over GF(q) -----------------------------------------------------


def _rref(M: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    M = M.copy() % q
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            M[[r, i]] = M[[i, r]]
        M[r] = M[r] * pow(int(M[r, c]), -1, q) % q
        others = np.nonzero(M[:, c])[0]
        for i in others:
            if i != r:
                M[i] = (M[i] - M[i, c] * M[r]) % q
        pivots.append(c)
        r += 1
    return M[:r], pivots


def _left_nullspace(A: np.ndarray, q: int) -> np.ndarray:
    """Basis (rows) of ``{x : x A = 0}`` over GF(q)."""
    At = A.T % q
    R, pivots = _rref(At, q)
    n = A.shape[0]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for row, pc in zip(R, pivots):
            v[pc] = (-row[f]) % q
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), n)


def _charpoly(A: np.ndarray, q: int) -> list[int]:
    """Characteristic polynomial mod q via Hessenberg reduction (lowest degree first)."""
    n = A.shape[0]
    H = [[int(x) % q for x in row] for row in A]
    for m in range(1, n - 1):
        i = next((i for i in range(m, n) if H[i][m - 1]), None)
        if i is None:
            continue
        if i != m:
            H[i], H[m] = H[m], H[i]
            for row in H:
                row[i], row[m] = row[m], row[i]
        tinv = pow(H[m][m - 1], -1, q)
        for i in range(m + 1, n):
            u = H[i][m - 1] * tinv % q
            if u:
                H[i] = [(a - u * b) % q for a, b in zip(H[i], H[m])]
                for row in H:
                    row[m] = (row[m] + u * row[i]) % q
    polys = [[1]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        # (x - h_mm) * p_{m-1}
        cur = [0] * (m + 1)
        for k, c in enumerate(prev):
            cur[k + 1] = (cur[k + 1] + c) % q
            cur[k] = (cur[k] - H[m - 1][m - 1] * c) % q
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = prod * H[i][i - 1] % q
            coef = H[i - 1][m - 1] * prod % q
            if coef:
                for k, c in enumerate(polys[i - 1]):
                    cur[k] = (cur[k] - coef * c) % q
        polys.append(cur)
    return polys[n]


def _roots(poly: Sequence[int], q: int) -> list[int]:
    xs = np.arange(q, dtype=np.int64)
    acc = np.zeros(q, dtype=np.int64)
    for c in reversed(poly):
        acc = (acc * xs + c) % q
    return [int(x) for x in np.nonzero(acc == 0)[0]]


def _primitive_root(q: int) -> int:
    factors = [f for f in range(2, q) if (q - 1) % f == 0 and is_prime(f)]
    for g in range(2, q):
        if all(pow(g, (q - 1) // f, q) != 1 for f in factors):
            return g
    return 1


def class_structure_constants(G: Group) -> np.ndarray:
    """``a[i, j, k]`` = #{x in C_i : x^-1 z_k in C_j} for the class rep z_k."""
    cached = G._cache.get("structure")
    if cached is not None:
        return cached
    classes = G.classes
    r = len(classes)
    idx = G.class_index
    a = np.zeros((r, r, r), dtype=np.int64)
    elements = G.element_list
    inverses = {x: inv(x) for x in elements}
    cls = [idx[x] for x in elements]
    for k, c in enumerate(classes):
        z = c.rep
        for x, i in zip(elements, cls):
            a[i, idx[mul(inverses[x], z)], k] += 1
    G._cache["structure"] = a
    return a


def dixon_schneider(G: Group) -> list[tuple[CycNum, ...]]:
    classes = G.classes
    r = len(classes)
    if r > LIMITS.max_classes:
        raise ResourceLimitError(f"{r} classes exceeds bound {LIMITS.max_classes}")
    order = G.order
    e = G.exponent
    q = e + 1
    bound = 2 * math.isqrt(order) + 2
    while not (is_prime(q) and q > bound):
        q += e
    a = class_structure_constants(G) % q
    spaces = [np.eye(r, dtype=np.int64)]
    for t in range(1, r):
        if all(s.shape[0] == 1 for s in spaces):
            break
        T = a[t].T % q
        refined = []
        for B in spaces:
            d = B.shape[0]
            if d == 1:
                refined.append(B)
                continue
            _, piv = _rref(B, q)
            A = (B @ T % q)[:, piv]
            found = 0
            for lam in _roots(_charpoly(A, q), q):
                X = _left_nullspace((A - lam * np.eye(d, dtype=np.int64)) % q, q)
                if X.shape[0]:
                    sub, _ = _rref(X @ B % q, q)
                    refined.append(sub)
                    found += sub.shape[0]
            if found != d:
                raise InvariantFailure("class matrices are not simultaneously diagonalisable mod q")
        spaces = refined
    if len(spaces) != r or any(s.shape[0] != 1 for s in spaces):
        raise InvariantFailure("Dixon-Schneider failed to split all eigenspaces")
    sizes = [c.size for c in classes]
    inverse_cls = G.inverse_classes
    z = pow(_primitive_root(q), (q - 1) // e, q)
    rows = []
    for B in spaces:
        w = [int(x) for x in B[0]]
        if w[0] != 1:
            raise InvariantFailure("eigenvector not normalised at the identity class")
        s = sum(w[k] * w[inverse_cls[k]] * pow(sizes[k], -1, q) for k in range(r)) % q
        target = order * pow(s, -1, q) % q
        deg = next(d for d in range(1, math.isqrt(order) + 1) if d * d % q == target)
        chi_q = [w[k] * deg * pow(sizes[k], -1, q) % q for k in range(r)]
        values = []
        for k, c in enumerate(classes):
            o = c.order
            eps = pow(z, e // o, q)
            powers = [chi_q[G.power_class(k, j)] for j in range(o)]
            oinv = pow(o, -1, q)
            counts = {}
            total = 0
            for l in range(o):
                step = pow(eps, (-l) % o, q)
                acc = 0
                x = 1
                for j in range(o):
                    acc += powers[j] * x
                    x = x * step % q
                mult = acc * oinv % q
                if mult > deg:
                    raise InvariantFailure("eigenvalue multiplicity exceeds the degree")
                total += mult
                if mult:
                    counts[l * (e // o)] = mult
            if total != deg:
                raise InvariantFailure("eigenvalue multiplicities do not sum to the degree")
            values.append(CycNum.from_exponents(e, counts))
        rows.append(tuple(values))
    return rows


def _row_key(row: Sequence[CycNum]) -> tuple:
    deg = row[0].to_fraction()
    trivial = all(v == 1 for v in row)
    return (deg, not trivial, tuple(v.sort_key() for v in row))


@dataclass(frozen=True)
class Character:
    table: "CharTable"
    index: int

    @property
    def values(self) -> tuple[CycNum, ...]:
        return self.table.chars[self.index]

    @property
    def degree(self) -> int:
        return self.table.degrees[self.index]

    def __call__(self, x) -> CycNum:
        return self.values[self.table.group.class_of(x)]

    def norm(self) -> Fraction:
        return self.table.inner_product(self.values, self.values).to_fraction()


class CharTable:
    """Irreducible characters of ``group`` as rows indexed by its conjugacy classes."""

    def __init__(self, group: Group, chars: Sequence[Sequence[CycNum]], validate: bool = True):
        self.group = group
        e = group.exponent
        rows = [tuple(v.promote(e) if isinstance(v, CycNum) else CycNum.rational(v, e) for v in row) for row in chars]
        rows.sort(key=_row_key)
        self.chars: tuple[tuple[CycNum, ...], ...] = tuple(rows)
        self.e = e
        if validate:
            self.validate()

    @classmethod
    def compute(cls, group: Group) -> "CharTable":
        return cls(group, dixon_schneider(group))

    @property
    def classes(self):
        return self.group.classes

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(int(row[0].to_fraction()) for row in self.chars)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(c.size for c in self.group.classes)

    def __len__(self) -> int:
        return len(self.chars)

    def character(self, i: int) -> Character:
        return Character(self, i)

    @cached_property
    def trivial_index(self) -> int:
        return next(i for i, row in enumerate(self.chars) if all(v == 1 for v in row))

    def inner_product(self, f: Sequence[CycNum], g: Sequence[CycNum]) -> CycNum:
        total = CycNum.rational(0, self.e)
        for size, a, b in zip(self.sizes, f, g):
            if a.is_zero() or b.is_zero():
                continue
            total = total + a * b.conjugate() * size
        return total / self.group.order

    def validate(self) -> None:
        order = self.group.order
        r = len(self.group.classes)
        if len(self.chars) != r:
            raise InvariantFailure(f"{len(self.chars)} characters for {r} classes")
        if sum(d * d for d in self.degrees) != order:
            raise InvariantFailure("sum of squared degrees differs from the group order")
        if any(order % d for d in self.degrees):
            raise InvariantFailure("a degree does not divide the group order")
        conj = [[v.conjugate() for v in row] for row in self.chars]
        sizes = self.sizes
        for i in range(r):
            for j in range(i, r):
                total = CycNum.rational(0, self.e)
                for k in range(r):
                    a, b = self.chars[i][k], conj[j][k]
                    if not (a.is_zero() or b.is_zero()):
                        total = total + a * b * sizes[k]
                expected = order if i == j else 0
                if total != expected:
                    raise InvariantFailure(f"row orthogonality fails for characters {i}, {j}")
        for k in range(r):
            for l in range(k, r):
                total = CycNum.rational(0, self.e)
                for i in range(r):
                    a, b = self.chars[i][k], conj[i][l]
                    if not (a.is_zero() or b.is_zero()):
                        total = total + a * b
                expected = Fraction(order, sizes[k]) if k == l else 0
                if total != expected:
                    raise InvariantFailure(f"column orthogonality fails for classes {k}, {l}")

    def central_character(self, i: int) -> tuple[CycNum, ...]:
        """``omega_chi(K) = |K| chi(x_K) / chi(1)`` for every class ``K``."""
        row = self.chars[i]
        deg = self.degrees[i]
        return tuple(v * Fraction(size, deg) for v, size in zip(row, self.sizes))

    def find(self, values: Sequence[CycNum]) -> Optional[int]:
        target = tuple(values)
        for i, row in enumerate(self.chars):
            if row == target:
                return i
        return None

    def defect_of_character(self, i: int, p: int) -> int:
        return nu(self.group.order, p) - nu(self.degrees[i], p)

    # -- central subgroups --------------------------------------------------------

    def restrict_to_central(self, i: int, Z: Group) -> LinearCharacter:
        """The linear character ``eta`` of the central subgroup ``Z`` with chi|_Z = chi(1) eta."""
        G = self.group
        centre = G.center.elements
        if not Z.elements <= centre:
            raise PreconditionError("subgroup is not central")
        deg = self.degrees[i]
        angles = {}
        for z in Z.elements:
            value = self.chars[i][G.class_of(z)] / deg
            o = G.classes[G.class_of(z)].order
            a = angle_of_root(value, o)
            if a is None:
                raise InvariantFailure("restriction to a central subgroup is not a multiple of a linear character")
            angles[z] = a
        return LinearCharacter(Z, angles)

    def covers(self, i: int, eta: LinearCharacter) -> bool:
        return self.restrict_to_central(i, eta.group) == eta

    # -- subgroups --------------------------------------------------------------------

    def fusion_from(self, H: Group) -> tuple[int, ...]:
        """Class of ``G`` containing each class of the subgroup ``H``."""
        return tuple(self.group.class_of(c.rep) for c in H.classes)

    def restrict(self, i: int, H: Group) -> tuple[CycNum, ...]:
        return tuple(self.chars[i][k] for k in self.fusion_from(H))

    # -- serialisation ------------------------------------------------------------------

    def to_json(self) -> dict:
        G = self.group
        primes = [q for q in range(2, G.order + 1) if G.order % q == 0 and is_prime(q)]
        return {
            "group": group_to_json(G),
            "e": self.e,
            "classes": [{"rep": list(G.word(c.rep)), "size": c.size} for c in G.classes],
            "powermap": {str(q): list(G.power_map(q)) for q in primes},
            "chars": [[v.to_json() for v in row] for row in self.chars],
        }

    @classmethod
    def from_json(cls, obj: dict, group: Optional[Group] = None) -> "CharTable":
        """Rebuild a table; with ``group`` given, its generators must match the stored ones."""
        try:
            G = group_from_json(obj["group"])
            if group is not None:
                if G.degree != group.degree or G.generators != group.generators:
                    raise InputError("table belongs to a different group")
                G = group
            classes = obj["classes"]
            raw_rows = obj["chars"]
            columns = []
            for c in classes:
                rep = c["rep"]
                if isinstance(rep, dict):
                    x = tuple(rep["perm"])
                else:
                    x = G.evaluate_word([int(i) for i in rep])
                if x not in G:
                    raise InputError("class representative not in the group")
                k = G.class_of(x)
                if G.classes[k].size != int(c["size"]):
                    raise InputError(f"class size mismatch for representative {list(x)}")
                columns.append(k)
            if sorted(columns) != list(range(len(G.classes))):
                raise InputError("class list does not match the group's classes")
            rows = []
            for raw in raw_rows:
                if len(raw) != len(columns):
                    raise InputError("character row has the wrong length")
                row = [None] * len(columns)
                for k, v in zip(columns, raw):
                    row[k] = CycNum.from_json(v) if isinstance(v, dict) else CycNum.rational(Fraction(v))
                rows.append(row)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"table schema violation: {exc}") from exc
        try:
            return cls(G, rows, validate=True)
        except InvariantFailure as exc:
            raise InputError(f"corrupt character table: {exc}") from exc


def character_table(G: Group) -> CharTable:
    found = G._cache.get("table")
    if found is None:
        found = CharTable.compute(G)
        G._cache["table"] = found
    return found


def import_table(path) -> CharTable:
    with open(path) as fh:
        return CharTable.from_json(json.load(fh))


def export_table(table: CharTable, path) -> None:
    with open(path, "w") as fh:
        json.dump(table.to_json(), fh, indent=1, sort_keys=True)
        fh.write("\n")


def group_to_json(G: Group) -> dict:
    return {"degree": G.degree, "generators": [list(g) for g in G.generators], "name": G.name or ""}


def group_from_json(obj: dict) -> Group:
    try:
        degree = int(obj["degree"])
        gens = obj["generators"]
        name = obj.get("name") or None
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"group schema violation: {exc}") from exc
    if not isinstance(gens, list):
        raise InputError("generators must be a list of image lists")
    return Group(degree, gens, name)


def load_group(path) -> Group:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON: {exc}") from exc
    return group_from_json(obj)
