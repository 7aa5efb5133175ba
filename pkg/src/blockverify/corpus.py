"""Named small groups used by the campaign corpus and the tests.

Linear groups act on the nonzero vectors of F_q^2 (or on the projective line),
which keeps every construction a faithful permutation group of small degree.
"""

from __future__ import annotations

import itertools
import json
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .chartab import group_from_json, group_to_json
from .perm import (
    Group,
    alternating_group,
    cyclic_group,
    cycles_to_perm,
    dihedral_group,
    direct_product,
    symmetric_group,
)


def _vector_action(q: int, matrices: Iterable[Sequence[Sequence[int]]]) -> tuple[int, list]:
    vectors = [v for v in itertools.product(range(q), repeat=2) if any(v)]
    index = {v: i for i, v in enumerate(vectors)}
    perms = []
    for M in matrices:
        (a, b), (c, d) = M
        perms.append(tuple(index[((a * x + b * y) % q, (c * x + d * y) % q)] for x, y in vectors))
    return len(vectors), perms


def linear_group(q: int, matrices, name: str) -> Group:
    """Group generated by 2x2 matrices over F_q acting on nonzero column vectors."""
    degree, perms = _vector_action(q, matrices)
    return Group(degree, perms, name)


def projective_line_group(q: int, matrices, name: str) -> Group:
    """Image of 2x2 matrices over F_q acting on the q+1 points of the projective line."""
    points = [(1, x) for x in range(q)] + [(0, 1)]

    def normalise(v):
        x, y = v[0] % q, v[1] % q
        if x:
            inv = pow(x, q - 2, q)
            return (1, y * inv % q)
        return (0, 1)

    index = {v: i for i, v in enumerate(points)}
    perms = []
    for (a, b), (c, d) in matrices:
        perms.append(tuple(index[normalise((a * x + b * y, c * x + d * y))] for x, y in points))
    return Group(len(points), perms, name)


def affine_group(n: int, multiplier: int, name: str) -> Group:
    """``x -> x + 1`` and ``x -> multiplier * x`` on Z/n."""
    shift = tuple((i + 1) % n for i in range(n))
    scale = tuple((multiplier * i) % n for i in range(n))
    return Group(n, [shift, scale], name)


def quaternion_group() -> Group:
    """Q8 as the matrices <[[0,1],[2,0]], [[1,1],[1,2]]> of SL(2,3) acting on F_3^2 minus 0."""
    return linear_group(3, [((0, 2), (1, 0)), ((1, 1), (1, 2))], "Q8")


def dicyclic12() -> Group:
    a = cycles_to_perm(7, [[0, 1, 2]])
    b = cycles_to_perm(7, [[1, 2], [3, 4, 5, 6]])
    return Group(7, [a, b], "C3:C4")


def _named(G: Group, name: str) -> Group:
    G.name = name
    return G


def _builders() -> dict[str, Callable[[], Group]]:
    return {
        "C2": lambda: cyclic_group(2),
        "C3": lambda: cyclic_group(3),
        "C4": lambda: cyclic_group(4),
        "S3": lambda: symmetric_group(3),
        "C9": lambda: cyclic_group(9),
        "C2xC2": lambda: _named(direct_product(cyclic_group(2), cyclic_group(2)), "C2xC2"),
        "D8": lambda: dihedral_group(4),
        "Q8": quaternion_group,
        "C3xC3": lambda: _named(direct_product(cyclic_group(3), cyclic_group(3)), "C3xC3"),
        "D10": lambda: dihedral_group(5),
        "A4": lambda: alternating_group(4),
        "D12": lambda: dihedral_group(6),
        "C3:C4": dicyclic12,
        "C3xS3": lambda: _named(direct_product(cyclic_group(3), symmetric_group(3)), "C3xS3"),
        "F20": lambda: affine_group(5, 2, "F20"),
        "F21": lambda: _named(
            Group(7, [cycles_to_perm(7, [list(range(7))]), tuple((2 * i) % 7 for i in range(7))]), "F21"
        ),
        "S4": lambda: symmetric_group(4),
        "SL(2,3)": lambda: linear_group(3, [((1, 1), (0, 1)), ((1, 0), (1, 1))], "SL(2,3)"),
        "C2xA4": lambda: _named(direct_product(cyclic_group(2), alternating_group(4)), "C2xA4"),
        "S3xS3": lambda: _named(direct_product(symmetric_group(3), symmetric_group(3)), "S3xS3"),
        "GL(2,3)": lambda: linear_group(3, [((1, 1), (0, 1)), ((1, 0), (1, 1)), ((2, 0), (0, 1))], "GL(2,3)"),
        "C2xS4": lambda: _named(direct_product(cyclic_group(2), symmetric_group(4)), "C2xS4"),
        "A5": lambda: alternating_group(5),
        "S5": lambda: symmetric_group(5),
        "SL(2,5)": lambda: linear_group(5, [((1, 1), (0, 1)), ((1, 0), (1, 1))], "SL(2,5)"),
        "C2xA5": lambda: _named(direct_product(cyclic_group(2), alternating_group(5)), "C2xA5"),
        "A6": lambda: alternating_group(6),
        "S6": lambda: symmetric_group(6),
        "PSL(2,7)": lambda: projective_line_group(7, [((1, 1), (0, 1)), ((0, 6), (1, 0))], "PSL(2,7)"),
    }


CORPUS_NAMES: tuple[str, ...] = tuple(_builders())


def build_group(name: str) -> Group:
    try:
        builder = _builders()[name]
    except KeyError:
        raise KeyError(f"unknown corpus group {name!r}") from None
    return builder()


def corpus_dir() -> Path:
    return Path(str(resources.files("blockverify") / "data" / "corpus"))


def file_name(name: str) -> str:
    return name.replace("(", "_").replace(")", "").replace(",", "_").replace(":", "-") + ".json"


def write_corpus(directory: Path | str | None = None) -> list[Path]:
    directory = Path(directory) if directory is not None else corpus_dir()
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name in CORPUS_NAMES:
        G = build_group(name)
        path = directory / file_name(name)
        obj = group_to_json(G)
        obj["order"] = G.order
        path.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")
        written.append(path)
    return written


def load_corpus(directory: Path | str | None = None) -> list[Group]:
    """Groups in ``directory`` (default: the packaged corpus), sorted by order then name."""
    directory = Path(directory) if directory is not None else corpus_dir()
    groups = []
    for path in sorted(directory.glob("*.json")):
        groups.append(group_from_json(json.loads(path.read_text())))
    groups.sort(key=lambda G: (G.order, G.name or ""))
    return groups
