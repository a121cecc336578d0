"""Rooted quadrangulations as rotation systems, with edge flips and metric observables.

Half-edges are numbered 0..4n-1 and paired by ``h ^ 1``. ``sigma[h]`` is the next
half-edge counterclockwise around the origin of ``h`` and ``vertex[h]`` is a stable
vertex id, so that vertices keep their identity across flips. Faces are the orbits
of ``phi(h) = sigma[h ^ 1]``, which walks each face clockwise (face on the right).
"""

import logging
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import InvalidEdge, InvalidMap, MalformedCode

logger = logging.getLogger(__name__)

PLUS = 1
MINUS = -1


@dataclass(frozen=True)
class FlipMove:
    """Flip of ``edge`` clockwise (+1) or counterclockwise (-1)."""
    edge: int
    direction: int = PLUS

    def reverse(self) -> "FlipMove":
        return FlipMove(self.edge, -self.direction)

    def to_dict(self) -> Dict[str, int]:
        return {'edge': self.edge, 'direction': self.direction}

    def __str__(self) -> str:
        return f"{self.edge}{'+' if self.direction == PLUS else '-'}"


@dataclass(frozen=True)
class Quadrangulation:
    """Rooted quadrangulation of the sphere with n faces."""
    sigma: Tuple[int, ...]
    vertex: Tuple[int, ...]
    root: int = 0

    @property
    def n(self) -> int:
        return len(self.sigma) // 4

    @property
    def edge_count(self) -> int:
        return len(self.sigma) // 2

    def origin(self, h: int) -> int:
        return self.vertex[h]

    def head(self, h: int) -> int:
        return self.vertex[h ^ 1]

    def phi(self, h: int) -> int:
        return self.sigma[h ^ 1]

    @property
    def root_vertex(self) -> int:
        """The origin of the map."""
        return self.vertex[self.root]

    def sigma_inv(self) -> List[int]:
        inv = [0] * len(self.sigma)
        for h, s in enumerate(self.sigma):
            inv[s] = h
        return inv

    def vertices(self) -> List[int]:
        return sorted(set(self.vertex))

    def degree(self, v: int) -> int:
        return sum(1 for x in self.vertex if x == v)

    def degrees(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for x in self.vertex:
            counts[x] = counts.get(x, 0) + 1
        return counts

    def half_edges_at(self, v: int) -> List[int]:
        """Half-edges leaving ``v`` in counterclockwise order."""
        start = self.vertex.index(v)
        out = [start]
        h = self.sigma[start]
        while h != start:
            out.append(h)
            h = self.sigma[h]
        return out

    def edge_endpoints(self, e: int) -> Tuple[int, int]:
        return self.vertex[2 * e], self.vertex[2 * e + 1]

    def face_of(self, h: int) -> Tuple[int, ...]:
        """The face to the right of ``h``, as a phi-orbit starting at ``h``."""
        orbit = [h]
        x = self.phi(h)
        while x != h:
            orbit.append(x)
            x = self.phi(x)
        return tuple(orbit)

    def faces(self) -> List[Tuple[int, ...]]:
        seen = [False] * len(self.sigma)
        out = []
        for h in range(len(self.sigma)):
            if not seen[h]:
                orbit = self.face_of(h)
                for x in orbit:
                    seen[x] = True
                out.append(orbit)
        return out

    def is_degenerate_edge(self, e: int) -> bool:
        """True when both halves of ``e`` bound the same face (a double edge)."""
        h = 2 * e
        x = self.phi(h)
        for _ in range(4):
            if x == h ^ 1:
                return True
            x = self.phi(x)
        return False

    def reroot(self, h: int) -> "Quadrangulation":
        return Quadrangulation(self.sigma, self.vertex, h)

    def validate(self) -> None:
        """Check the rotation system is a rooted quadrangulation.

        Raises:
            InvalidMap: on any violated structural property
        """
        size = len(self.sigma)
        if size == 0 or size % 4:
            raise InvalidMap(f"half-edge count {size} is not a positive multiple of 4")
        if len(self.vertex) != size:
            raise InvalidMap("vertex table length differs from sigma")
        if sorted(self.sigma) != list(range(size)):
            raise InvalidMap("sigma is not a permutation")
        if not 0 <= self.root < size:
            raise InvalidMap(f"root {self.root} out of range")
        n = size // 4

        # vertex ids must be constant on sigma orbits and distinct across orbits
        seen = [False] * size
        orbit_ids = set()
        for h in range(size):
            if seen[h]:
                continue
            vid = self.vertex[h]
            if vid in orbit_ids:
                raise InvalidMap(f"vertex id {vid} labels two rotation orbits")
            orbit_ids.add(vid)
            x = h
            while not seen[x]:
                seen[x] = True
                if self.vertex[x] != vid:
                    raise InvalidMap(f"half-edge {x} disagrees with its rotation orbit")
                x = self.sigma[x]
        if len(orbit_ids) != n + 2:
            raise InvalidMap(f"{len(orbit_ids)} vertices, expected {n + 2}")

        faces = self.faces()
        if len(faces) != n:
            raise InvalidMap(f"{len(faces)} faces, expected {n}")
        for f in faces:
            if len(f) != 4:
                raise InvalidMap(f"face {f} has degree {len(f)}")

        colour = {self.vertex[0]: 0}
        queue = deque([self.vertex[0]])
        adj = adjacency(self)
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in colour:
                    colour[w] = 1 - colour[u]
                    queue.append(w)
                elif colour[w] == colour[u]:
                    raise InvalidMap("map is not bipartite")
        if len(colour) != n + 2:
            raise InvalidMap("map is not connected")


@dataclass(frozen=True)
class PointedQuadrangulation:
    """Quadrangulation with a marked vertex ``point``."""
    quad: Quadrangulation
    point: int

    @property
    def n(self) -> int:
        return self.quad.n

    def validate(self) -> None:
        self.quad.validate()
        if self.point not in set(self.quad.vertex):
            raise InvalidMap(f"point {self.point} is not a vertex")


AnyQuad = Union[Quadrangulation, PointedQuadrangulation]


def forget_point(q: AnyQuad) -> Quadrangulation:
    return q.quad if isinstance(q, PointedQuadrangulation) else q


def flip(q: Quadrangulation, move: FlipMove) -> Quadrangulation:
    """Return ``q`` with ``move.edge`` flipped in ``move.direction``.

    Half-edge indices are stable; only sigma entries around the affected faces and
    the vertex ids of the two flipped halves change. The root keeps its index.

    Args:
        q: Quadrangulation to flip in
        move: Edge and direction

    Returns:
        The flipped quadrangulation

    Raises:
        InvalidEdge: if the edge index is out of range
    """
    e = move.edge
    if not 0 <= e < q.edge_count:
        raise InvalidEdge(f"edge {e} out of range for {q.edge_count} edges")
    sigma = list(q.sigma)
    vertex = list(q.vertex)
    h, hb = 2 * e, 2 * e + 1

    if q.is_degenerate_edge(e):
        # k points into the degree-1 endpoint; it moves to the far vertex of the face
        k = h if sigma[hb] == hb else hb
        g = sigma[k]
        g2 = sigma[g ^ 1]
        x = vertex[g2]
        sigma[g2 ^ 1] = g
        sigma[g ^ 1] = k
        sigma[k] = g2
        vertex[k] = x
        return Quadrangulation(tuple(sigma), tuple(vertex), q.root)

    a1 = q.phi(h)
    a2 = q.phi(a1)
    a3 = q.phi(a2)
    b1 = q.phi(hb)
    b2 = q.phi(b1)
    b3 = q.phi(b2)

    sigma[a3 ^ 1] = b1
    sigma[b3 ^ 1] = a1
    if move.direction == PLUS:
        sigma[b1 ^ 1] = h
        sigma[h] = b2
        sigma[a1 ^ 1] = hb
        sigma[hb] = a2
        vertex[h] = q.vertex[b2]
        vertex[hb] = q.vertex[a2]
    else:
        sigma[a2 ^ 1] = h
        sigma[h] = a3
        sigma[b2 ^ 1] = hb
        sigma[hb] = b3
        vertex[h] = q.vertex[a3]
        vertex[hb] = q.vertex[b3]
    return Quadrangulation(tuple(sigma), tuple(vertex), q.root)


def flip_pointed(q: PointedQuadrangulation, move: FlipMove) -> PointedQuadrangulation:
    """Flip keeping the marked vertex (vertex ids survive flips)."""
    return PointedQuadrangulation(flip(q.quad, move), q.point)


def apply_move(q: AnyQuad, move: FlipMove) -> AnyQuad:
    if isinstance(q, PointedQuadrangulation):
        return flip_pointed(q, move)
    return flip(q, move)


def make_q0(n: int, pointed: bool = False) -> AnyQuad:
    """The quadrangulation with n degenerate faces and an origin of degree 2n.

    The origin (vertex 0) is joined to vertex 1 by n parallel edges and carries one
    pendant leaf inside each of the n digons they bound. Root is the half-edge 0 -> 1;
    the pointed variant marks the origin.

    Raises:
        ValueError: if n < 1
    """
    if n < 1:
        raise ValueError(f"q0 needs n >= 1, got {n}")
    sigma = [0] * (4 * n)
    vertex = [0] * (4 * n)
    around_origin = []
    for i in range(n):
        around_origin.extend([2 * i, 2 * (n + i)])
    for k, h in enumerate(around_origin):
        sigma[h] = around_origin[(k + 1) % len(around_origin)]
        vertex[h] = 0
    for i in range(n):
        # counterclockwise around vertex 1 runs through the parallel edges backwards
        sigma[2 * i + 1] = 2 * ((i - 1) % n) + 1
        vertex[2 * i + 1] = 1
        leaf = 2 * (n + i) + 1
        sigma[leaf] = leaf
        vertex[leaf] = 2 + i
    q = Quadrangulation(tuple(sigma), tuple(vertex), 0)
    return PointedQuadrangulation(q, 0) if pointed else q


def adjacency(q: Quadrangulation) -> Dict[int, List[int]]:
    adj: Dict[int, List[int]] = {v: [] for v in set(q.vertex)}
    for h in range(0, len(q.sigma), 2):
        u, w = q.vertex[h], q.vertex[h + 1]
        adj[u].append(w)
        adj[w].append(u)
    return adj


def distances_from(q: AnyQuad, source: int) -> Dict[int, int]:
    """BFS graph distances from ``source`` on the underlying multigraph."""
    q = forget_point(q)
    adj = adjacency(q)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def graph_distance(q: AnyQuad, v: int, w: int) -> int:
    return distances_from(q, v)[w]


def _centre(q: AnyQuad, centre: Optional[int]) -> int:
    return forget_point(q).root_vertex if centre is None else centre


def radius(q: AnyQuad, centre: Optional[int] = None) -> int:
    """Largest distance from the origin (or from ``centre``)."""
    return max(distances_from(q, _centre(q, centre)).values())


def ball_size(q: AnyQuad, r: int, centre: Optional[int] = None) -> int:
    """Number of vertices within distance ``r``, the centre included."""
    return sum(1 for d in distances_from(q, _centre(q, centre)).values() if d <= r)


def far_set_size(q: AnyQuad, centre: Optional[int] = None) -> int:
    """Number of vertices other than the centre at distance >= radius - 1."""
    c = _centre(q, centre)
    dist = distances_from(q, c)
    rad = max(dist.values())
    return sum(1 for v, d in dist.items() if v != c and d >= rad - 1)


def canonical_order(sigma: Sequence[int], root: int) -> List[int]:
    """Half-edges in root-anchored discovery order; returns old index per new label."""
    size = len(sigma)
    label = [-1] * size
    order = [root, root ^ 1]
    label[root], label[root ^ 1] = 0, 1
    queue = deque(order)
    nxt = 2
    while queue:
        h = queue.popleft()
        for x in (sigma[h], h ^ 1):
            if label[x] < 0:
                label[x], label[x ^ 1] = nxt, nxt + 1
                nxt += 2
                order.extend([x, x ^ 1])
                queue.extend([x, x ^ 1])
    return order


def canonical_code(q: AnyQuad) -> str:
    """Isomorphism-invariant text code of a rooted (optionally pointed) map."""
    point = q.point if isinstance(q, PointedQuadrangulation) else None
    quad = forget_point(q)
    order = canonical_order(quad.sigma, quad.root)
    label = [0] * len(order)
    for new, old in enumerate(order):
        label[old] = new
    new_sigma = [label[quad.sigma[old]] for old in order]
    vertex_ids: Dict[int, int] = {}
    for old in order:
        vertex_ids.setdefault(quad.vertex[old], len(vertex_ids))
    point_text = '-' if point is None else str(vertex_ids[point])
    return (f"QM v1 n={quad.n} root=0 point={point_text} "
            f"sigma={','.join(str(s) for s in new_sigma)}")


_CODE_RE = re.compile(r"^QM v1 n=(\d+) root=(\d+) point=(-|\d+) sigma=(\d+(?:,\d+)*)$")


def _vertex_table(sigma: Sequence[int]) -> Tuple[int, ...]:
    vertex = [-1] * len(sigma)
    nxt = 0
    for h in range(len(sigma)):
        if vertex[h] >= 0:
            continue
        x = h
        while vertex[x] < 0:
            vertex[x] = nxt
            x = sigma[x]
        nxt += 1
    return tuple(vertex)


def decode(code: str) -> AnyQuad:
    """Parse a code produced by :func:`canonical_code`.

    Raises:
        MalformedCode: on syntax errors or if the map is not a valid quadrangulation
    """
    match = _CODE_RE.match(code.strip())
    if not match:
        raise MalformedCode(f"not a map code: {code!r}")
    n, root = int(match.group(1)), int(match.group(2))
    sigma = tuple(int(s) for s in match.group(4).split(','))
    if len(sigma) != 4 * n:
        raise MalformedCode(f"sigma has {len(sigma)} entries, expected {4 * n}")
    if sorted(sigma) != list(range(len(sigma))):
        raise MalformedCode("sigma is not a permutation")
    # vertex ids follow first appearance along the code's own half-edge order
    order = canonical_order(sigma, root)
    per_orbit = _vertex_table(sigma)
    renumber: Dict[int, int] = {}
    for h in order:
        renumber.setdefault(per_orbit[h], len(renumber))
    vertex = tuple(renumber[per_orbit[h]] for h in range(len(sigma)))
    quad = Quadrangulation(sigma, vertex, root)
    try:
        quad.validate()
    except InvalidMap as e:
        raise MalformedCode(str(e)) from e
    if match.group(3) == '-':
        return quad
    point = int(match.group(3))
    if point >= n + 2:
        raise MalformedCode(f"point {point} is not a vertex")
    return PointedQuadrangulation(quad, point)


@dataclass(frozen=True)
class FlipPath:
    """A start state and the flips applied to it, in order."""
    start: AnyQuad
    moves: Tuple[FlipMove, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.moves)

    def states(self) -> List[AnyQuad]:
        """All visited states, start and end included."""
        out = [self.start]
        for m in self.moves:
            out.append(apply_move(out[-1], m))
        return out

    def end(self) -> AnyQuad:
        q = self.start
        for m in self.moves:
            q = apply_move(q, m)
        return q

    def steps(self) -> List[Tuple[AnyQuad, FlipMove]]:
        """(state, move) pairs: the triples (q_i, e_i, s_i) of the path."""
        return list(zip(self.states()[:-1], self.moves))

    def then(self, moves: Iterable[FlipMove]) -> "FlipPath":
        return FlipPath(self.start, self.moves + tuple(moves))

    def reversed(self) -> "FlipPath":
        """The path from the end back to the start, with directions negated."""
        return FlipPath(self.end(), tuple(m.reverse() for m in reversed(self.moves)))

    def to_dict(self) -> Dict[str, object]:
        return {
            'start': canonical_code(self.start),
            'moves': [str(m) for m in self.moves],
            'length': len(self.moves),
        }


def _phase_potential(q: Quadrangulation, centre: int, keep_root: bool) -> Tuple[int, int]:
    if keep_root:
        return q.degree(q.root_vertex), q.degree(q.head(q.root))
    return q.degree(centre), 0


def _climb(q: AnyQuad, moves: List[FlipMove], centre: Optional[int], keep_root: bool) -> AnyQuad:
    """Greedy flips strictly increasing the lexicographic degree potential.

    With ``keep_root`` the potential is (deg origin, deg root head) and the root edge
    is never flipped; otherwise it is deg ``centre`` and any edge may flip.
    """
    quad = forget_point(q)
    best = _phase_potential(quad, centre, keep_root)
    while True:
        improved = False
        root_edge = quad.root >> 1
        for e in range(quad.edge_count):
            if keep_root and e == root_edge:
                continue
            for s in (MINUS, PLUS):
                cand = flip(quad, FlipMove(e, s))
                pot = _phase_potential(cand, centre, keep_root)
                if pot > best:
                    quad, best, improved = cand, pot, True
                    moves.append(FlipMove(e, s))
                    break
            if improved:
                break
        if not improved:
            break
    if isinstance(q, PointedQuadrangulation):
        return PointedQuadrangulation(quad, q.point)
    return quad


def root_reversal_moves(q: Quadrangulation) -> List[FlipMove]:
    """Flips turning the root around when its head has degree 2n (n >= 2)."""
    e = q.root >> 1
    if not q.is_degenerate_edge(e):
        return [FlipMove(e, PLUS)] * 3
    h = 2 * e
    k = h if q.sigma[h ^ 1] == h ^ 1 else h ^ 1
    # edge before the root in the clockwise contour of its degenerate face
    before = q.face_of(k)[-1] >> 1
    return [FlipMove(before, PLUS)] + [FlipMove(e, PLUS)] * 3 + [FlipMove(before, MINUS)]


def flips_to_q0(q: AnyQuad) -> FlipPath:
    """Flips taking ``q`` to q0, following the constructive irreducibility argument.

    Unpointed: raise the origin degree to 2n, then the root head degree to n, never
    flipping the root. Pointed: raise the degree of the marked vertex to 2n, turn the
    root so the marked vertex is the origin, then proceed as in the unpointed case.
    """
    moves: List[FlipMove] = []
    if not isinstance(q, PointedQuadrangulation):
        _climb(q, moves, None, keep_root=True)
        logger.debug(f"flips_to_q0: {len(moves)} flips at n={q.n}")
        return FlipPath(q, tuple(moves))

    cur = _climb(q, moves, q.point, keep_root=False)
    if cur.quad.root_vertex != q.point:
        if q.n == 1:
            from .flip_paths import search_path
            target = PointedQuadrangulation(cur.quad.reroot(cur.quad.root ^ 1), q.point)
            turn = list(search_path(cur, canonical_code(target)).moves)
        else:
            turn = root_reversal_moves(cur.quad)
        for m in turn:
            cur = flip_pointed(cur, m)
        moves.extend(turn)
    _climb(cur, moves, None, keep_root=True)
    logger.debug(f"flips_to_q0 (pointed): {len(moves)} flips at n={q.n}")
    return FlipPath(q, tuple(moves))
