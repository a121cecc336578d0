"""Bijection between signed labelled trees and pointed quadrangulations.

Every corner of the tree is joined to the next corner (clockwise, cyclically) whose
label is one less; corners carrying the minimum label are joined to an extra vertex,
the marked point. The edge drawn from corner c_i (0-based i) is edge ``i`` of the
map, with half ``2i`` at the corner's vertex and half ``2i+1`` at its target.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import NegativeLabel
from .maps import PointedQuadrangulation, Quadrangulation, distances_from
from .trees import (STEP_COLOUR, ColouredTree, rebuild, contour, labels,
                    non_negative)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SignedTree:
    """A labelled tree together with the sign choosing the root orientation."""
    tree: ColouredTree
    eps: int

    def __post_init__(self):
        if self.eps not in (-1, 1):
            raise ValueError(f"eps must be -1 or 1, got {self.eps}")
        if self.tree.r != 3:
            raise ValueError("signed trees carry labelled (r=3) trees")

    @property
    def code(self) -> str:
        return f"{self.tree.code} {'+' if self.eps == 1 else '-'}"


def corner_targets(t: ColouredTree) -> List[Optional[int]]:
    """0-based target corner of each corner, ``None`` for corners joined to the point."""
    lab = labels(t)
    corners = contour(t).corners
    size = len(corners)
    corner_label = [lab[v] for v in corners]
    low = min(corner_label) if corner_label else 0
    targets: List[Optional[int]] = []
    for i, l in enumerate(corner_label):
        if l == low:
            targets.append(None)
            continue
        k = 1
        while corner_label[(i + k) % size] != l - 1:
            k += 1
        targets.append((i + k) % size)
    return targets


def corner_edge(i: int) -> int:
    """Half-edge of phi(t, eps) drawn out of the 1-based corner c_i, for any t and eps.

    It sits at the corner's vertex and points at the target corner (or the point);
    its edge index is ``i - 1``.
    """
    return 2 * (i - 1)


def phi(st: SignedTree) -> PointedQuadrangulation:
    """Build the pointed quadrangulation of a signed labelled tree.

    Tree vertices keep their ids; the marked point gets id n + 1.
    """
    t = st.tree
    n = t.n
    if n < 1:
        raise ValueError("phi needs a tree with at least one edge")
    corners = contour(t).corners
    targets = corner_targets(t)
    size = 2 * n
    point = n + 1
    sigma = [0] * (4 * n)
    vertex = [0] * (4 * n)

    incoming: Dict[int, List[int]] = {}
    to_point: List[int] = []
    for s, target in enumerate(targets):
        vertex[2 * s] = corners[s]
        if target is None:
            vertex[2 * s + 1] = point
            to_point.append(2 * s + 1)
        else:
            vertex[2 * s + 1] = corners[target]
            incoming.setdefault(target, []).append(s)

    corners_of: Dict[int, List[int]] = {}
    for j, v in enumerate(corners):
        corners_of.setdefault(v, []).append(j)

    for v, js in corners_of.items():
        clockwise: List[int] = []
        for j in js:
            sources = sorted(incoming.get(j, []), key=lambda s: (j - s) % size)
            clockwise.extend(2 * s + 1 for s in sources)
            clockwise.append(2 * j)
        for k, h in enumerate(clockwise):
            sigma[h] = clockwise[k - 1]

    for k, h in enumerate(to_point):
        sigma[h] = to_point[(k + 1) % len(to_point)]

    root = 0 if st.eps == -1 else 1
    q = Quadrangulation(tuple(sigma), tuple(vertex), root)
    return PointedQuadrangulation(q, point)


def _down(q: Quadrangulation, dist: Dict[int, int], h: int) -> bool:
    return dist[q.head(h)] < dist[q.origin(h)]


def phi_inverse(pq: PointedQuadrangulation) -> SignedTree:
    """Recover the signed labelled tree of a pointed quadrangulation.

    Each face holds two half-edges stepping down towards the point; the tree edge
    of the face joins their origins. The contour is read off by alternating
    between a down half-edge, its partner in the face on its right, and the first
    down half-edge clockwise after that partner.
    """
    q = pq.quad
    dist = distances_from(q, pq.point)
    sigma_inv = q.sigma_inv()

    h0 = q.root if _down(q, dist, q.root) else q.root ^ 1
    eps = 1 if dist[q.origin(q.root)] < dist[q.head(q.root)] else -1

    walk: List[int] = []
    h = h0
    for _ in range(2 * q.n):
        walk.append(q.origin(h))
        face = [x for x in q.face_of(h) if _down(q, dist, x)]
        mate = face[1] if face[0] == h else face[0]
        x = sigma_inv[mate]
        while not _down(q, dist, x):
            x = sigma_inv[x]
        h = x
    walk.append(walk[0])

    # shifted ids keep the tree root (any map id) out of the signed word
    stack = [walk[0]]
    word: List[int] = []
    colour = [0] * (max(q.vertex) + 2)
    for a, b in zip(walk, walk[1:]):
        if len(stack) >= 2 and stack[-2] == b:
            word.append(-(a + 1))
            stack.pop()
        else:
            word.append(b + 1)
            colour[b + 1] = STEP_COLOUR[dist[b] - dist[a]]
            stack.append(b)
    tree = rebuild(word, colour, 3)
    return SignedTree(tree, eps)


def phi_origin_pointed(t: ColouredTree) -> Quadrangulation:
    """The rooted quadrangulation of a non-negative labelled tree, pointed at its origin.

    Raises:
        NegativeLabel: if some label of ``t`` is negative
    """
    if not non_negative(t):
        raise NegativeLabel(f"{t.code!r} has a negative label")
    pq = phi(SignedTree(t, 1))
    return pq.quad


def origin_pointed_inverse(q: Quadrangulation) -> ColouredTree:
    """Inverse of :func:`phi_origin_pointed`."""
    return phi_inverse(PointedQuadrangulation(q, q.root_vertex)).tree


def label_distance_defects(st: SignedTree) -> List[Tuple[int, int, int]]:
    """Vertices where l(v) differs from d(v, point) - d(point, tree root).

    Returns (vertex, label, distance form) triples; empty when the identity holds.
    """
    pq = phi(st)
    dist = distances_from(pq.quad, pq.point)
    lab = labels(st.tree)
    base = dist[0]
    return [(v, lab[v], dist[v] - base) for v in range(st.tree.n + 1) if lab[v] != dist[v] - base]
