"""Explicit flip paths between the pointed quadrangulations of related labelled trees.

Each path starts at phi(t, eps) and ends at a map isomorphic to the image of a
neighbouring tree: the same tree with the root orientation reversed, with one leaf
recoloured, or with one leaf translated. Paths are built from local flips around
the leaf. Bounded breadth-first search is used at n = 1, and to complete a root
rotation whose two edges do not bound three distinct faces (always the case at
n = 2, and near pendant edges), where the five-flip rotation can exchange vertices.

Moves of a path always refer to half-edge indices of the map the path actually
walks through. Legs computed on another (isomorphic) map are carried over with
:func:`correspondence`.
"""

import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import DegenerateRotation, NoPath
from .maps import (MINUS, PLUS, AnyQuad, FlipMove, FlipPath,
                   PointedQuadrangulation, apply_move, canonical_code,
                   canonical_order, forget_point, root_reversal_moves)
from .schaeffer import SignedTree, corner_edge, phi
from .trees import MINUS as MINUS_COLOUR
from .trees import PLUS as PLUS_COLOUR
from .trees import (EQUAL, LABELLED_CHARS, ColouredTree, Direction, contour,
                    enumerate_trees, labels, leaf_corner, leaf_recolour,
                    leaf_translate, leaves, random_tree)

logger = logging.getLogger(__name__)

DEFAULT_SEARCH_STATES = 200000

ROOT_REVERSAL = "root-reversal"
COLOUR_CHANGE = "colour-change"
TRANSLATION = "translation"
FAMILIES = (ROOT_REVERSAL, COLOUR_CHANGE, TRANSLATION)

# occurrences of one transition among all root reversals
ROOT_REVERSAL_CONGESTION = 9


def length_bound(kind: str, n: int) -> int:
    """Longest path allowed for a family at size n."""
    if kind == ROOT_REVERSAL:
        return 5
    if kind == COLOUR_CHANGE:
        return 2 * n + 6
    if kind == TRANSLATION:
        return 6 * n + 17
    raise ValueError(f"unknown path family {kind!r}")


@dataclass(frozen=True)
class PathLabel:
    """Which constructed path: family, tree, sign and (for leaf moves) leaf and target."""
    kind: str
    tree: str
    eps: int = 1
    leaf: Optional[int] = None
    target: Optional[str] = None

    def __str__(self) -> str:
        sign = '+' if self.eps == 1 else '-'
        if self.leaf is None:
            return f"{self.kind} {self.tree} {sign}"
        return f"{self.kind} {self.tree} {sign} leaf={self.leaf} to={self.target}"

    def to_dict(self) -> Dict[str, object]:
        return {'kind': self.kind, 'tree': self.tree, 'eps': self.eps,
                'leaf': self.leaf, 'target': self.target}


def _image(t: ColouredTree, eps: int) -> PointedQuadrangulation:
    return phi(SignedTree(t, eps))


def _empty(start: AnyQuad) -> FlipPath:
    return FlipPath(start, ())


def search_path(start: AnyQuad, target_code: str, edges: Optional[Iterable[int]] = None,
                max_states: int = DEFAULT_SEARCH_STATES) -> FlipPath:
    """Shortest flip path from ``start`` to a map with ``target_code``.

    Args:
        start: Start map
        target_code: Canonical code of the target
        edges: Restrict flips to these edge indices (all edges when omitted)
        max_states: Give up after visiting this many distinct maps

    Raises:
        NoPath: if the target is not reached within the budget
    """
    allowed = sorted(set(edges)) if edges is not None else list(range(forget_point(start).edge_count))
    first = canonical_code(start)
    if first == target_code:
        return _empty(start)
    parent: Dict[str, Tuple[str, FlipMove]] = {}
    seen = {first}
    queue = deque([(start, first)])
    while queue:
        q, code = queue.popleft()
        for e in allowed:
            for s in (PLUS, MINUS):
                move = FlipMove(e, s)
                nxt = apply_move(q, move)
                c = canonical_code(nxt)
                if c in seen:
                    continue
                seen.add(c)
                parent[c] = (code, move)
                if c == target_code:
                    moves: List[FlipMove] = []
                    while c != first:
                        c, m = parent[c]
                        moves.append(m)
                    return FlipPath(start, tuple(reversed(moves)))
                if len(seen) >= max_states:
                    raise NoPath(f"no path within {max_states} maps")
                queue.append((nxt, c))
    raise NoPath("target not reachable with the allowed edges")


def correspondence(a: AnyQuad, b: AnyQuad) -> List[int]:
    """Half-edge map ``a`` -> ``b`` of two isomorphic rooted maps."""
    qa, qb = forget_point(a), forget_point(b)
    oa = canonical_order(qa.sigma, qa.root)
    ob = canonical_order(qb.sigma, qb.root)
    m = [0] * len(oa)
    for x, y in zip(oa, ob):
        m[x] = y
    return m


def glue(start: AnyQuad, legs: Sequence[FlipPath]) -> FlipPath:
    """Concatenate legs, each starting at a map isomorphic to where the last one ended."""
    cur = start
    moves: List[FlipMove] = []
    for leg in legs:
        if not leg.moves:
            continue
        m = correspondence(leg.start, cur)
        for move in leg.moves:
            mapped = FlipMove(m[2 * move.edge] >> 1, move.direction)
            moves.append(mapped)
            cur = apply_move(cur, mapped)
    return FlipPath(start, tuple(moves))


def _rotation_target(q: AnyQuad, pivot: int) -> Tuple[int, int, int]:
    quad = forget_point(q)
    e = quad.root >> 1
    x = 2 * e if quad.vertex[2 * e] == pivot else 2 * e + 1
    if quad.vertex[x] != pivot:
        raise ValueError(f"vertex {pivot} is not an endpoint of the root edge")
    eta_half = quad.sigma_inv()[x]
    if eta_half == x:
        raise DegenerateRotation(f"vertex {pivot} has degree 1")
    new_root = eta_half if quad.root == x else eta_half ^ 1
    return e, eta_half >> 1, new_root


def _rerooted(q: AnyQuad, h: int) -> AnyQuad:
    if isinstance(q, PointedQuadrangulation):
        return PointedQuadrangulation(q.quad.reroot(h), q.point)
    return q.reroot(h)


def _local_edges(q: AnyQuad, edges: Iterable[int]) -> List[int]:
    quad = forget_point(q)
    out = set()
    for e in edges:
        for h in (2 * e, 2 * e + 1):
            out.update(x >> 1 for x in quad.face_of(h))
    return sorted(out)


def path_root_rotation(q: AnyQuad, pivot: Optional[int] = None) -> FlipPath:
    """Flips moving the root to the next edge clockwise around ``pivot``.

    The end map is isomorphic to ``q`` rerooted at that edge, with the same
    orientation relative to the pivot. The pivot defaults to the origin. When the
    five local flips do not reach that map, a breadth-first search over the faces
    around both edges (then over every edge) finishes the job.

    Raises:
        DegenerateRotation: if the pivot has degree 1
    """
    quad = forget_point(q)
    if pivot is None:
        pivot = quad.root_vertex
    e, eta, new_root = _rotation_target(q, pivot)
    target = canonical_code(_rerooted(q, new_root))
    path = FlipPath(q, (FlipMove(eta, PLUS), FlipMove(e, PLUS), FlipMove(eta, PLUS),
                        FlipMove(e, MINUS), FlipMove(eta, MINUS)))
    if canonical_code(path.end()) == target:
        return path
    logger.debug(f"root rotation around {pivot} (degree {quad.degree(pivot)}) by local search")
    try:
        return search_path(q, target, edges=_local_edges(q, (e, eta)))
    except NoPath:
        return search_path(q, target)


def _halves_after(q: AnyQuad, start: int) -> List[int]:
    """Incoming halves met clockwise after ``start`` at the same corner, or around the point."""
    quad = forget_point(q)
    inv = quad.sigma_inv()
    out = []
    x = inv[start]
    while x != start and x & 1:
        out.append(x)
        x = inv[x]
    return out


def _flip_sequence(start: AnyQuad, planned: Sequence[Tuple[int, int]], w: int) -> FlipPath:
    """Flip the planned edges of ``start`` in order, rotating the root off any of them first.

    ``w`` is the vertex the planned edges are attached to; a root rotation turns
    around their other endpoint.
    """
    cur = start
    moves: List[FlipMove] = []
    where = list(range(len(forget_point(start).sigma)))
    for e, s in planned:
        ce = where[2 * e] >> 1
        quad = forget_point(cur)
        if ce == quad.root >> 1:
            a, b = quad.edge_endpoints(ce)
            pivot = b if a == w else a
            _, _, new_root = _rotation_target(cur, pivot)
            rot = path_root_rotation(cur, pivot)
            end = rot.end()
            m = correspondence(_rerooted(cur, new_root), end)
            where = [m[h] for h in where]
            moves.extend(rot.moves)
            cur = end
            ce = where[2 * e] >> 1
        move = FlipMove(ce, s)
        moves.append(move)
        cur = apply_move(cur, move)
    return FlipPath(start, tuple(moves))


def path_root_reversal(t: ColouredTree) -> FlipPath:
    """Flips from phi(t, +1) to phi(t, -1)."""
    start = _image(t, 1)
    if t.n == 1:
        return search_path(start, canonical_code(_image(t, -1)))
    return FlipPath(start, tuple(root_reversal_moves(start.quad)))


def _plus_to_minus(t: ColouredTree, v: int, eps: int) -> FlipPath:
    # edges landing at c's target after c's own edge are redirected to v
    start = _image(t, eps)
    L = corner_edge(leaf_corner(t, v)) >> 1
    c = (L + 1) % (2 * t.n)
    w = start.quad.vertex[2 * c + 1]
    planned = [(h >> 1, MINUS) for h in _halves_after(start, 2 * c + 1)]
    if w == start.point:
        # v becomes the only minimum: c's edge goes too, last, carrying the point over to v
        planned.append((c, MINUS))
    return _flip_sequence(start, planned, w)


def _colour_leg(t: ColouredTree, v: int, a: int, b: int, eps: int) -> FlipPath:
    start = _image(t, eps)
    if a == b:
        return _empty(start)
    if t.n == 1:
        return search_path(start, canonical_code(_image(leaf_recolour(t, v, b), eps)))
    L = corner_edge(leaf_corner(t, v)) >> 1
    if (a, b) == (EQUAL, PLUS_COLOUR):
        return FlipPath(start, (FlipMove(L, PLUS),))
    if (a, b) == (PLUS_COLOUR, EQUAL):
        return FlipPath(start, (FlipMove(L, MINUS),))
    if (a, b) == (PLUS_COLOUR, MINUS_COLOUR):
        return _plus_to_minus(t, v, eps)
    if (a, b) == (MINUS_COLOUR, PLUS_COLOUR):
        back = _plus_to_minus(leaf_recolour(t, v, PLUS_COLOUR), v, eps).reversed()
        return glue(start, [back])
    if (a, b) == (EQUAL, MINUS_COLOUR):
        up = FlipPath(start, (FlipMove(L, PLUS),))
        return glue(start, [up, _plus_to_minus(leaf_recolour(t, v, PLUS_COLOUR), v, eps)])
    # MINUS -> EQUAL
    back = _colour_leg(leaf_recolour(t, v, EQUAL), v, EQUAL, MINUS_COLOUR, eps).reversed()
    return glue(start, [back])


def path_colour_change(t: ColouredTree, v: int, x: int, eps: int) -> FlipPath:
    """Flips from phi(t, eps) to phi(t with leaf ``v`` recoloured ``x``, eps).

    Raises:
        NotALeaf: if ``v`` is not a leaf
        BadColour: if ``x`` is not a labelled colour
    """
    t.check_leaf(v)
    t.check_colour(x)
    return _colour_leg(t, v, t.colour[v], x, eps)


def _translate_equal(t: ColouredTree, v: int, eps: int) -> FlipPath:
    """Right translation of a leaf carrying the same label as its parent."""
    start = _image(t, eps)
    size = 2 * t.n
    L = corner_edge(leaf_corner(t, v)) >> 1
    if L + 1 >= size:
        return _empty(start)
    b, c = L, L + 1
    T = (L + 2) % size
    lab = labels(t)
    w = contour(t).corners[T]
    step = lab[w] - lab[v]
    if step == 0:
        return FlipPath(start, (FlipMove(c, PLUS),))
    if step == 1:
        return FlipPath(start, (FlipMove(c, MINUS), FlipMove(b, PLUS), FlipMove(c, PLUS)))
    planned = [(h >> 1, MINUS) for h in _halves_after(start, 2 * b + 1)]
    planned.append((b, MINUS))
    return _flip_sequence(start, planned, w)


def path_leaf_translation(t: ColouredTree, v: int, direction: Direction, eps: int) -> FlipPath:
    """Flips from phi(t, eps) to phi(t with leaf ``v`` translated, eps).

    A leaf labelled differently from its parent is first recoloured to equal,
    translated, then given its colour back. Left translations run the right
    translation of the translated tree backwards.

    Raises:
        NotALeaf: if ``v`` is not a leaf
    """
    t.check_leaf(v)
    start = _image(t, eps)
    moved = leaf_translate(t, v, direction)
    if moved == t:
        return _empty(start)
    if Direction(direction) is Direction.LEFT:
        back = path_leaf_translation(moved, v, Direction.RIGHT, eps).reversed()
        return glue(start, [back])
    x = t.colour[v]
    if x == EQUAL:
        return _translate_equal(t, v, eps)
    flat = leaf_recolour(t, v, EQUAL)
    legs = [
        _colour_leg(t, v, x, EQUAL, eps),
        _translate_equal(flat, v, eps),
        _colour_leg(leaf_translate(flat, v, Direction.RIGHT), v, EQUAL, x, eps),
    ]
    return glue(start, legs)


def expected_end(label: PathLabel, t: ColouredTree) -> str:
    """Canonical code of the map a labelled path must end at."""
    if label.kind == ROOT_REVERSAL:
        return canonical_code(_image(t, -1))
    if label.kind == COLOUR_CHANGE:
        c = {ch: k for k, ch in LABELLED_CHARS.items()}[label.target]
        return canonical_code(_image(leaf_recolour(t, label.leaf, c), label.eps))
    return canonical_code(_image(leaf_translate(t, label.leaf, Direction(label.target)), label.eps))


def tree_paths(t: ColouredTree, families: Sequence[str] = FAMILIES) -> Iterator[Tuple[PathLabel, FlipPath]]:
    """Every constructed path of the given families out of the images of ``t``."""
    if ROOT_REVERSAL in families:
        yield PathLabel(ROOT_REVERSAL, t.code), path_root_reversal(t)
    for eps in (-1, 1):
        for v in leaves(t):
            if COLOUR_CHANGE in families:
                for x, ch in LABELLED_CHARS.items():
                    if x != t.colour[v]:
                        yield (PathLabel(COLOUR_CHANGE, t.code, eps, v, ch),
                               path_colour_change(t, v, x, eps))
            if TRANSLATION in families:
                for d in Direction:
                    if leaf_translate(t, v, d) != t:
                        yield (PathLabel(TRANSLATION, t.code, eps, v, d.value),
                               path_leaf_translation(t, v, d, eps))


def sample_trees(n: int, count: int, rng) -> List[ColouredTree]:
    return [random_tree(n, 3, rng) for _ in range(count)]


@dataclass
class PathAudit:
    """Endpoint, length and transition-load checks over a set of constructed paths."""
    n: int
    paths: Dict[str, int] = field(default_factory=dict)
    longest: Dict[str, int] = field(default_factory=dict)
    load: Dict[str, Counter] = field(default_factory=dict)
    wrong_end: List[PathLabel] = field(default_factory=list)
    too_long: List[PathLabel] = field(default_factory=list)

    def merge(self, other: "PathAudit") -> "PathAudit":
        """Fold another audit of the same size into this one."""
        for kind, count in other.paths.items():
            self.paths[kind] = self.paths.get(kind, 0) + count
            self.longest[kind] = max(self.longest.get(kind, 0), other.longest[kind])
            self.load.setdefault(kind, Counter()).update(other.load[kind])
        self.wrong_end.extend(other.wrong_end)
        self.too_long.extend(other.too_long)
        return self

    def worst_load(self, kind: str) -> int:
        counts = self.load.get(kind)
        return max(counts.values()) if counts else 0

    @property
    def ok(self) -> bool:
        if self.wrong_end or self.too_long:
            return False
        return self.worst_load(ROOT_REVERSAL) <= ROOT_REVERSAL_CONGESTION

    def to_dict(self) -> Dict[str, object]:
        return {
            'n': self.n,
            'ok': self.ok,
            'paths': dict(self.paths),
            'longest': dict(self.longest),
            'bounds': {k: length_bound(k, self.n) for k in self.paths},
            'worst_load': {k: self.worst_load(k) for k in self.load},
            'wrong_end': [str(label) for label in self.wrong_end],
            'too_long': [str(label) for label in self.too_long],
        }


def transition_key(q: AnyQuad, move: FlipMove) -> Tuple[str, int, int]:
    """Isomorphism-invariant name of the transition (q, e, s)."""
    quad = forget_point(q)
    order = canonical_order(quad.sigma, quad.root)
    label = [0] * len(order)
    for new, old in enumerate(order):
        label[old] = new
    return canonical_code(q), label[2 * move.edge] >> 1, move.direction


def audit_flip_paths(n: int, trees: Optional[Iterable[ColouredTree]] = None,
                     families: Sequence[str] = FAMILIES) -> PathAudit:
    """Check every constructed path out of ``trees`` (all of LT_n by default).

    Each path must end at its expected map and respect its family's length bound;
    transition loads are counted per family.
    """
    if trees is None:
        trees = enumerate_trees(n, 3)
    audit = PathAudit(n)
    for kind in families:
        audit.paths[kind] = 0
        audit.longest[kind] = 0
        audit.load[kind] = Counter()
    for t in trees:
        for label, path in tree_paths(t, families):
            kind = label.kind
            audit.paths[kind] += 1
            audit.longest[kind] = max(audit.longest[kind], len(path))
            if canonical_code(path.end()) != expected_end(label, t):
                audit.wrong_end.append(label)
            if len(path) > length_bound(kind, n):
                audit.too_long.append(label)
            for q, move in path.steps():
                audit.load[kind][transition_key(q, move)] += 1
    if audit.wrong_end:
        logger.warning(f"{len(audit.wrong_end)} paths end at the wrong map at n={n}")
    logger.info(f"audited {sum(audit.paths.values())} flip paths at n={n}")
    return audit
