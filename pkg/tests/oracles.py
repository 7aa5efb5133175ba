"""Independent reference computations used to check the engine.

Nothing here calls the engine's group, table or block code: elements are
enumerated by plain closure, character tables come from floating-point
Burnside eigenvectors, and blocks from Osima's p-regular linkage.
"""

from __future__ import annotations

import cmath
import itertools
import math
from collections import Counter

import numpy as np


# -- brute-force groups ---------------------------------------------------------------


def compose(a, b):
    """Apply a, then b."""
    return tuple(b[i] for i in a)


def inverse(a):
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def elements(gens, degree):
    e = tuple(range(degree))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def order_of(x):
    e = tuple(range(len(x)))
    n, y = 1, x
    while y != e:
        y = compose(y, x)
        n += 1
    return n


def classes(elems):
    """Conjugacy classes as frozensets, identity first, then by (order, size, min)."""
    elems = list(elems)
    left = set(elems)
    out = []
    while left:
        x = min(left)
        cls = frozenset(compose(compose(inverse(g), x), g) for g in elems)
        out.append(cls)
        left -= cls
    out.sort(key=lambda c: (order_of(next(iter(c))), len(c), min(c)))
    return out


def subgroups_of_prime_power_order(elems, p):
    """All p-subgroups, by closing up sets of p-elements one generator at a time."""
    degree = len(next(iter(elems)))
    pel = [x for x in elems if _is_power(order_of(x), p)]
    found = {frozenset([tuple(range(degree))])}
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for x in pel:
                if x in H:
                    continue
                K = frozenset(elements(list(_gens(H)) + [x], degree))
                if _is_power(len(K), p) and K not in found:
                    found.add(K)
                    nxt.append(K)
        frontier = nxt
    return found


def _gens(H):
    # every element is a generator; fine for tiny groups
    return H


def _is_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def conjugate_set(H, g):
    return frozenset(compose(compose(inverse(g), h), g) for h in H)


def normalizer(elems, H):
    return {g for g in elems if conjugate_set(H, g) == H}


# -- numeric character tables ------------------------------------------------------------


def numeric_table(gens, degree):
    """Character table as complex rows over the classes of :func:`classes`.

    Rows are right eigenvectors of a random combination of class-multiplication
    matrices, normalised by the degree formula.
    """
    elems = list(elements(gens, degree))
    cls = classes(elems)
    n = len(elems)
    r = len(cls)
    where = {}
    for k, c in enumerate(cls):
        for x in c:
            where[x] = k
    reps = [min(c) for c in cls]
    # c[j][i][l]: K_j K_i = sum_l c K_l, counted at the representative of K_l
    const = np.zeros((r, r, r))
    for j in range(r):
        for i in range(r):
            for x in cls[j]:
                for y in cls[i]:
                    z = compose(x, y)
                    l = where[z]
                    if z == reps[l]:
                        const[j, i, l] += 1
    rng = np.random.default_rng(12345)
    M = sum(rng.standard_normal() * const[j] for j in range(r))
    values, vectors = np.linalg.eig(M)
    sizes = np.array([len(c) for c in cls], dtype=float)
    rows = []
    for t in range(r):
        w = vectors[:, t] / vectors[0, t]
        total = np.sum(np.abs(w) ** 2 / sizes)
        deg = math.sqrt(n / total.real)
        rows.append(w * deg / sizes)
    rows.sort(key=lambda row: (round(row[0].real), [round(v.real, 6) for v in row], [round(v.imag, 6) for v in row]))
    return cls, [np.array(row) for row in rows]


def osima_blocks(cls, rows, p):
    """Blocks as sets of row indices via the p-regular linkage relation."""
    regular = [k for k, c in enumerate(cls) if order_of(next(iter(c))) % p]
    sizes = [len(c) for c in cls]
    r = len(rows)
    parent = list(range(r))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(r):
        for b in range(a + 1, r):
            s = sum(sizes[k] * rows[a][k] * np.conj(rows[b][k]) for k in regular)
            if abs(s) > 1e-6:
                parent[find(a)] = find(b)
    groups = {}
    for a in range(r):
        groups.setdefault(find(a), set()).add(a)
    return list(groups.values())


def degrees_of_blocks(cls, rows, p):
    blocks = osima_blocks(cls, rows, p)
    return sorted(tuple(sorted(round(rows[i][0].real) for i in b)) for b in blocks)


def nu(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


# -- symmetric groups ---------------------------------------------------------------------


def partitions(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def hook_degree(shape):
    n = sum(shape)
    conj = [sum(1 for r in shape if r > j) for j in range(shape[0])] if shape else []
    prod = 1
    for i, row in enumerate(shape):
        for j in range(row):
            prod *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(n) // prod


def p_core(shape, p):
    """Remove p-rim hooks using the abacus on beta-numbers."""
    m = len(shape)
    beta = sorted((shape[i] + (m - 1 - i) for i in range(m)), reverse=True)
    beads = set(beta)
    changed = True
    while changed:
        changed = False
        for b in sorted(beads):
            if b >= p and b - p not in beads:
                beads.remove(b)
                beads.add(b - p)
                changed = True
                break
    beta = sorted(beads, reverse=True)
    core = [beta[i] - (m - 1 - i) for i in range(m)]
    return tuple(x for x in core if x > 0)


def symmetric_block_degrees(n, p):
    """Degree multisets of the p-blocks of S_n by Nakayama's conjecture."""
    groups = {}
    for lam in partitions(n):
        groups.setdefault(p_core(lam, p), []).append(hook_degree(lam))
    return sorted(tuple(sorted(v)) for v in groups.values())


# -- classical tables -----------------------------------------------------------------------

W = cmath.exp(2j * math.pi / 3)
G1 = (1 + math.sqrt(5)) / 2
G2 = (1 - math.sqrt(5)) / 2

# columns labelled by (element order, class size); rows as value lists in that column order
CLASSICAL = {
    "S3": (
        [(1, 1), (2, 3), (3, 2)],
        [[1, 1, 1], [1, -1, 1], [2, 0, -1]],
    ),
    "S4": (
        [(1, 1), (2, 3), (2, 6), (3, 8), (4, 6)],
        [
            [1, 1, 1, 1, 1],
            [1, 1, -1, 1, -1],
            [2, 2, 0, -1, 0],
            [3, -1, 1, 0, -1],
            [3, -1, -1, 0, 1],
        ],
    ),
    "A4": (
        [(1, 1), (2, 3), (3, 4), (3, 4)],
        [[1, 1, 1, 1], [1, 1, W, W * W], [1, 1, W * W, W], [3, -1, 0, 0]],
    ),
    "A5": (
        [(1, 1), (2, 15), (3, 20), (5, 12), (5, 12)],
        [
            [1, 1, 1, 1, 1],
            [3, -1, 0, G1, G2],
            [3, -1, 0, G2, G1],
            [4, 0, 1, -1, -1],
            [5, 1, -1, 0, 0],
        ],
    ),
    "D8": (
        [(1, 1), (2, 1), (2, 2), (2, 2), (4, 2)],
        [
            [1, 1, 1, 1, 1],
            [1, 1, 1, -1, -1],
            [1, 1, -1, 1, -1],
            [1, 1, -1, -1, 1],
            [2, -2, 0, 0, 0],
        ],
    ),
    "Q8": (
        [(1, 1), (2, 1), (4, 2), (4, 2), (4, 2)],
        [
            [1, 1, 1, 1, 1],
            [1, 1, 1, -1, -1],
            [1, 1, -1, 1, -1],
            [1, 1, -1, -1, 1],
            [2, -2, 0, 0, 0],
        ],
    ),
    "SL(2,3)": (
        [(1, 1), (2, 1), (3, 4), (3, 4), (4, 6), (6, 4), (6, 4)],
        [
            [1, 1, 1, 1, 1, 1, 1],
            [1, 1, W, W * W, 1, W, W * W],
            [1, 1, W * W, W, 1, W * W, W],
            [2, -2, -1, -1, 0, 1, 1],
            [2, -2, -W, -W * W, 0, W, W * W],
            [2, -2, -W * W, -W, 0, W * W, W],
            [3, 3, 0, 0, -1, 0, 0],
        ],
    ),
}


def tables_match(labels, rows, other_labels, other_rows, tol=1e-9):
    """Equal up to row order and permutations of columns sharing a label."""
    if Counter(labels) != Counter(other_labels) or len(rows) != len(other_rows):
        return False
    groups = {}
    for k, lab in enumerate(other_labels):
        groups.setdefault(lab, []).append(k)
    keys = list(groups)
    target_cols = [[k for k, lab in enumerate(labels) if lab == key] for key in keys]
    for perms in itertools.product(*[itertools.permutations(groups[key]) for key in keys]):
        column = {}
        for cols, perm in zip(target_cols, perms):
            for a, b in zip(cols, perm):
                column[a] = b
        remaining = [list(r) for r in other_rows]
        ok = True
        for row in rows:
            hit = None
            for idx, cand in enumerate(remaining):
                if all(abs(complex(row[a]) - complex(cand[column[a]])) < tol for a in range(len(row))):
                    hit = idx
                    break
            if hit is None:
                ok = False
                break
            remaining.pop(hit)
        if ok:
            return True
    return False


# -- chains ---------------------------------------------------------------------------------


def normal_chain_classes(gens, degree, sylow, p):
    """Number of G-classes of normal chains of nontrivial subgroups of ``sylow``.

    ``sylow`` is a set of permutations; two chains are identified when some g
    maps one onto the other term by term.
    """
    G = list(elements(gens, degree))
    subs = [H for H in subgroups_of_prime_power_order(sylow, p) if len(H) > 1]
    chains = []

    def grow(prefix):
        top = prefix[-1]
        chains.append(tuple(prefix))
        for H in subs:
            if len(H) > len(top) and top < H:
                chains_ok = all(conjugate_set(Q, h) == Q for Q in prefix for h in H)
                if chains_ok:
                    grow(prefix + [H])

    for H in subs:
        grow([H])
    # a chain is normal when every term is normal in the last one; grow() enforces it
    found = set(chains)
    left = set(found)
    count = 0
    while left:
        c = left.pop()
        count += 1
        for g in G:
            image = tuple(conjugate_set(Q, g) for Q in c)
            left.discard(image)
    return count
