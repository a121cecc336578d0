"""Enumerated state spaces shared by the chains, spectral and command-line code."""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, Generic, List, Tuple, TypeVar

from .errors import TooLarge
from .maps import (PointedQuadrangulation, Quadrangulation, canonical_code,
                   forget_point)
from .schaeffer import SignedTree, phi
from .trees import ColouredTree, count_trees, enumerate_trees

logger = logging.getLogger(__name__)

DEFAULT_CEILING = 30000

S = TypeVar('S')


@dataclass
class StateSpace(Generic[S]):
    """An ordered list of states with their codes and a code -> index lookup."""
    kind: str
    n: int
    r: int
    states: List[S]
    codes: List[str]
    index: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {c: i for i, c in enumerate(self.codes)}

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __contains__(self, code: str) -> bool:
        return code in self.index


def count_labelled(n: int) -> int:
    return count_trees(n, 3)


def count_pointed(n: int) -> int:
    return 2 * count_labelled(n)


def count_quadrangulations(n: int) -> int:
    """2 * 3^n * Cat(n) / (n + 2)."""
    return 2 * 3 ** n * comb(2 * n, n) // ((n + 1) * (n + 2))


def check_ceiling(kind: str, n: int, size: int, ceiling: int) -> None:
    if size > ceiling:
        raise TooLarge(f"{kind} at n={n} has {size} states, above the ceiling {ceiling}")


@lru_cache(maxsize=None)
def _trees(n: int, r: int) -> Tuple[ColouredTree, ...]:
    return tuple(enumerate_trees(n, r))


def tree_space(n: int, r: int, ceiling: int = DEFAULT_CEILING) -> StateSpace[ColouredTree]:
    check_ceiling("trees", n, count_trees(n, r), ceiling)
    states = list(_trees(n, r))
    return StateSpace("trees", n, r, states, [t.code for t in states])


def signed_trees(n: int) -> List[SignedTree]:
    """LT_n x {-1, 1}, trees in code order, -1 before +1."""
    return [SignedTree(t, eps) for t in _trees(n, 3) for eps in (-1, 1)]


def signed_space(n: int, ceiling: int = DEFAULT_CEILING) -> StateSpace[SignedTree]:
    check_ceiling("signed trees", n, count_pointed(n), ceiling)
    states = signed_trees(n)
    return StateSpace("signed", n, 3, states, [s.code for s in states])


@lru_cache(maxsize=None)
def _pointed(n: int) -> Tuple[Tuple[PointedQuadrangulation, str], ...]:
    out = []
    for st in signed_trees(n):
        pq = phi(st)
        out.append((pq, canonical_code(pq)))
    logger.debug(f"built {len(out)} pointed quadrangulations at n={n}")
    return tuple(out)


def pointed_space(n: int, ceiling: int = DEFAULT_CEILING) -> StateSpace[PointedQuadrangulation]:
    """Q*_n through the tree bijection, in signed-tree order."""
    check_ceiling("pointed quadrangulations", n, count_pointed(n), ceiling)
    pairs = _pointed(n)
    return StateSpace("quad-pointed", n, 3, [p for p, _ in pairs], [c for _, c in pairs])


def quad_space(n: int, ceiling: int = DEFAULT_CEILING) -> StateSpace[Quadrangulation]:
    """Q_n: pointed maps with the point forgotten, deduplicated by code, sorted by code."""
    check_ceiling("pointed quadrangulations", n, count_pointed(n), ceiling)
    seen: Dict[str, Quadrangulation] = {}
    for pq, _ in _pointed(n):
        q = forget_point(pq)
        seen.setdefault(canonical_code(q), q)
    codes = sorted(seen)
    return StateSpace("quad", n, 1, [seen[c] for c in codes], codes)


def space_for(kind: str, n: int, r: int = 3, ceiling: int = DEFAULT_CEILING) -> StateSpace:
    """Look up a state space by the names used on the command line."""
    if kind == "trees":
        return tree_space(n, r, ceiling)
    if kind == "labelled":
        return tree_space(n, 3, ceiling)
    if kind == "signed":
        return signed_space(n, ceiling)
    if kind == "quad":
        return quad_space(n, ceiling)
    if kind == "quad-pointed":
        return pointed_space(n, ceiling)
    raise ValueError(f"unknown state space {kind!r}")
