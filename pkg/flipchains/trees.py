"""Coloured plane trees, labelled trees and the leaf moves acting on them.

A tree is stored as its contour word: ``+v`` when the walk descends to ``v`` and
``-v`` when it climbs back to ``v``'s parent. The root is vertex 0 and never appears
in the word. Leaf moves keep vertex ids, so a moved leaf keeps its identity.

Labelled trees are coloured trees with r = 3, colours 1, 2, 3 standing for the label
increments +1, 0, -1 along the edge from the parent.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (BadColour, BadCorner, EmptyTree, MalformedCode,
                     NegativeLabel, NotALeaf, NotAPeak)

logger = logging.getLogger(__name__)

PLUS, EQUAL, MINUS = 1, 2, 3
LABEL_STEP = {PLUS: 1, EQUAL: 0, MINUS: -1}
STEP_COLOUR = {1: PLUS, 0: EQUAL, -1: MINUS}
LABELLED_CHARS = {PLUS: '+', EQUAL: '=', MINUS: '-'}
LABELLED_COLOURS = {ch: c for c, ch in LABELLED_CHARS.items()}


class Direction(str, Enum):
    RIGHT = 'right'
    LEFT = 'left'


def colour_char(c: int, r: int) -> str:
    return LABELLED_CHARS[c] if r == 3 else str(c)


def parse_colour(ch: str, r: int) -> int:
    if r == 3:
        if ch not in LABELLED_COLOURS:
            raise MalformedCode(f"bad labelled colour {ch!r}")
        return LABELLED_COLOURS[ch]
    if not ch.isdigit() or not 1 <= int(ch) <= r:
        raise MalformedCode(f"bad colour {ch!r} for r={r}")
    return int(ch)


@dataclass(frozen=True, eq=False)
class ColouredTree:
    """Rooted plane tree with edge colours in 1..r.

    ``colour[v]`` is the colour of the edge (p(v), v); ``colour[0]`` is unused.
    Two trees are equal when their codes and colour counts agree.
    """
    word: Tuple[int, ...] = ()
    colour: Tuple[int, ...] = (0,)
    r: int = 1

    @property
    def n(self) -> int:
        return len(self.word) // 2

    @cached_property
    def parent(self) -> Tuple[int, ...]:
        parent = [-1] * (self.n + 1)
        stack = [0]
        for tok in self.word:
            if tok > 0:
                parent[tok] = stack[-1]
                stack.append(tok)
            else:
                stack.pop()
        return tuple(parent)

    @cached_property
    def children(self) -> Tuple[Tuple[int, ...], ...]:
        kids: List[List[int]] = [[] for _ in range(self.n + 1)]
        for tok in self.word:
            if tok > 0:
                kids[self.parent[tok]].append(tok)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def position(self) -> Dict[int, int]:
        """Index of ``+v`` in the word for each non-root vertex."""
        return {tok: i for i, tok in enumerate(self.word) if tok > 0}

    @cached_property
    def code(self) -> str:
        return ''.join(f"({colour_char(self.colour[tok], self.r)}" if tok > 0 else ')'
                       for tok in self.word)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColouredTree):
            return NotImplemented
        return self.r == other.r and self.code == other.code

    def __hash__(self) -> int:
        return hash((self.r, self.code))

    def __repr__(self) -> str:
        return f"ColouredTree({self.code!r}, r={self.r})"

    def is_leaf(self, v: int) -> bool:
        return v != 0 and 0 < v <= self.n and not self.children[v]

    def check_leaf(self, v: int) -> None:
        if not self.is_leaf(v):
            raise NotALeaf(f"vertex {v} is not a leaf of {self.code!r}")

    def check_colour(self, c: int) -> None:
        if not 1 <= c <= self.r:
            raise BadColour(f"colour {c} outside 1..{self.r}")


@dataclass(frozen=True)
class Contour:
    """Vertices at the corners c_1..c_2n, clockwise from the root corner."""
    corners: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.corners)

    def vertex(self, i: int) -> int:
        return self.corners[i - 1]


def from_code(code: str, r: int = 1) -> ColouredTree:
    """Decode a tree code; vertices are numbered in preorder."""
    word: List[int] = []
    colour = [0]
    stack: List[int] = []
    i = 0
    while i < len(code):
        ch = code[i]
        if ch == '(':
            if i + 1 >= len(code):
                raise MalformedCode(f"truncated tree code {code!r}")
            colour.append(parse_colour(code[i + 1], r))
            v = len(colour) - 1
            word.append(v)
            stack.append(v)
            i += 2
        elif ch == ')':
            if not stack:
                raise MalformedCode(f"unbalanced tree code {code!r}")
            word.append(-stack.pop())
            i += 1
        else:
            raise MalformedCode(f"unexpected {ch!r} in tree code {code!r}")
    if stack:
        raise MalformedCode(f"unbalanced tree code {code!r}")
    return ColouredTree(tuple(word), tuple(colour), r)


def rebuild(word: Sequence[int], colour: Sequence[int], r: int) -> ColouredTree:
    """Renumber vertices in preorder."""
    ids = {0: 0}
    new_word = []
    new_colour = [0]
    for tok in word:
        if tok > 0:
            ids[tok] = len(new_colour)
            new_colour.append(colour[tok])
            new_word.append(ids[tok])
        else:
            new_word.append(-ids[-tok])
    return ColouredTree(tuple(new_word), tuple(new_colour), r)


def normalize(t: ColouredTree) -> ColouredTree:
    return rebuild(t.word, t.colour, t.r)


def to_code(t: ColouredTree) -> str:
    return t.code


def star(n: int, colour: int = 1, r: int = 1) -> ColouredTree:
    """The height-1 tree with n leaves hanging off the root."""
    word: List[int] = []
    for v in range(1, n + 1):
        word.extend([v, -v])
    return ColouredTree(tuple(word), (0,) + (colour,) * n, r)


def labels(t: ColouredTree) -> Tuple[int, ...]:
    """Vertex labels of a labelled tree, root labelled 0."""
    if t.r != 3:
        raise ValueError(f"labels need r=3, got r={t.r}")
    lab = [0] * (t.n + 1)
    for tok in t.word:
        if tok > 0:
            lab[tok] = lab[t.parent[tok]] + LABEL_STEP[t.colour[tok]]
    return tuple(lab)


def relabel_from_labels(t: ColouredTree, lab: Sequence[int]) -> ColouredTree:
    """The labelled tree of shape ``t`` whose labels are ``lab`` shifted so the root is 0."""
    colour = [0] * (t.n + 1)
    for v in range(1, t.n + 1):
        step = lab[v] - lab[t.parent[v]]
        if step not in STEP_COLOUR:
            raise ValueError(f"labels of {v} and its parent differ by {step}")
        colour[v] = STEP_COLOUR[step]
    return ColouredTree(t.word, tuple(colour), 3)


def leaves(t: ColouredTree) -> List[int]:
    """Leaves in contour order."""
    return [tok for i, tok in enumerate(t.word)
            if tok > 0 and i + 1 < len(t.word) and t.word[i + 1] == -tok]


def height(t: ColouredTree) -> int:
    best = depth = 0
    for tok in t.word:
        depth += 1 if tok > 0 else -1
        best = max(best, depth)
    return best


def corner_vertex(t: ColouredTree, i: int) -> int:
    """Vertex owning corner c_i (1-based); c_1 is the root corner."""
    if not 1 <= i <= max(1, 2 * t.n):
        raise BadCorner(f"corner {i} outside 1..{2 * t.n}")
    if i == 1:
        return 0
    tok = t.word[i - 2]
    return tok if tok > 0 else t.parent[-tok]


def contour(t: ColouredTree) -> Contour:
    return Contour(tuple(corner_vertex(t, i) for i in range(1, 2 * t.n + 1)))


def leaf_corner(t: ColouredTree, v: int) -> int:
    """Index of the single corner of leaf ``v``."""
    t.check_leaf(v)
    return t.position[v] + 2


def leaf_translate(t: ColouredTree, v: int, direction: Direction) -> ColouredTree:
    """Shift leaf ``v`` one contour step right or left, keeping colours and ids.

    Raises:
        NotALeaf: if ``v`` is not a leaf
    """
    t.check_leaf(v)
    p = t.position[v]
    w = list(t.word)
    if Direction(direction) is Direction.RIGHT:
        if p + 2 >= len(w):
            return t
        new = w[:p] + [w[p + 2], v, -v] + w[p + 3:]
    else:
        if p == 0:
            return t
        new = w[:p - 1] + [v, -v, w[p - 1]] + w[p + 2:]
    return ColouredTree(tuple(new), t.colour, t.r)


def leaf_recolour(t: ColouredTree, v: int, c: int) -> ColouredTree:
    t.check_leaf(v)
    t.check_colour(c)
    colour = list(t.colour)
    colour[v] = c
    return ColouredTree(t.word, tuple(colour), t.r)


def leaf_replant(t: ColouredTree, v: int, k: int, c: int) -> ColouredTree:
    """Detach leaf ``v``, reattach it at corner c_k of the remaining tree with colour ``c``."""
    t.check_leaf(v)
    if not 1 <= k <= 2 * t.n - 1:
        raise BadCorner(f"replant corner {k} outside 1..{2 * t.n - 1}")
    t.check_colour(c)
    rest = [tok for tok in t.word if abs(tok) != v]
    new = rest[:k - 1] + [v, -v] + rest[k - 1:]
    colour = list(t.colour)
    colour[v] = c
    return ColouredTree(tuple(new), tuple(colour), t.r)


def find_translation(t: ColouredTree, other: ColouredTree) -> Optional[Tuple[int, Direction]]:
    """The unique (leaf, direction) with ``leaf_translate(t, leaf, direction) == other``."""
    found = None
    for v in leaves(t):
        for d in Direction:
            moved = leaf_translate(t, v, d)
            if moved != t and moved == other:
                if found is not None:
                    raise ValueError(f"{t!r} reaches {other!r} by two translations")
                found = (v, d)
    return found


def to_dyck(t: ColouredTree) -> str:
    return ''.join('U' if tok > 0 else 'D' for tok in t.word)


def from_dyck(d: str, r: int = 1, colour: int = 1) -> ColouredTree:
    code = ''.join(f"({colour_char(colour, r)}" if s == 'U' else ')' for s in d)
    if set(d) - {'U', 'D'}:
        raise MalformedCode(f"not a Dyck word: {d!r}")
    return from_code(code, r)


def peak_shift(d: str, i: int, direction: Direction) -> str:
    """Move the peak whose up-step is at 1-based position ``i`` one step sideways."""
    if not (1 <= i < len(d) and d[i - 1] == 'U' and d[i] == 'D'):
        raise NotAPeak(f"no peak at position {i} of {d!r}")
    p = i - 1
    if Direction(direction) is Direction.RIGHT:
        if p + 2 >= len(d):
            return d
        return d[:p] + d[p + 2] + 'UD' + d[p + 3:]
    if p == 0:
        return d
    return d[:p - 1] + 'UD' + d[p - 1] + d[p + 2:]


def split_lr(t: ColouredTree) -> Tuple[ColouredTree, ColouredTree, int]:
    """Split at the root edge (root, u): descendants of u, the rest, and u's colour.

    Raises:
        EmptyTree: if ``t`` has no edge
    """
    if t.n == 0:
        raise EmptyTree("cannot split the single-vertex tree")
    u = t.word[0]
    close = t.word.index(-u)
    left = rebuild(t.word[1:close], t.colour, t.r)
    right = rebuild(t.word[close + 1:], t.colour, t.r)
    return left, right, t.colour[u]


def join_lr(left: ColouredTree, right: ColouredTree, c: int) -> ColouredTree:
    return from_code(f"({colour_char(c, left.r)}{left.code}){right.code}", left.r)


def leaf_delete(t: ColouredTree, v: int) -> ColouredTree:
    """Erase leaf ``v``; the result is renumbered in preorder."""
    t.check_leaf(v)
    return rebuild([tok for tok in t.word if abs(tok) != v], t.colour, t.r)


def leaf_deletions(t: ColouredTree) -> Dict[str, ColouredTree]:
    """Distinct trees obtained by deleting one leaf, keyed by code."""
    out: Dict[str, ColouredTree] = {}
    for v in leaves(t):
        smaller = leaf_delete(t, v)
        out.setdefault(smaller.code, smaller)
    return out


def _reroot_word(t: ColouredTree, j: int) -> Tuple[List[int], List[Tuple[int, int]]]:
    """Contour walk started at corner c_j, as a word over old ids shifted by one.

    Returns the word and the (new parent, child) edges it descends, in old ids.
    """
    corners = contour(t).corners
    walk = list(corners[j - 1:]) + list(corners[:j - 1]) + [corners[j - 1]]
    stack = [walk[0]]
    word: List[int] = []
    edges: List[Tuple[int, int]] = []
    for a, b in zip(walk, walk[1:]):
        if len(stack) >= 2 and stack[-2] == b:
            word.append(-(a + 1))
            stack.pop()
        else:
            word.append(b + 1)
            edges.append((a, b))
            stack.append(b)
    return word, edges


def reroot_at_corner(t: ColouredTree, j: int) -> ColouredTree:
    """Reroot ``t`` in corner c_j.

    Edge colours travel with their edges. For labelled trees the labels travel
    instead, shifted so that the new root is labelled 0.
    """
    if t.n == 0:
        return t
    if not 1 <= j <= 2 * t.n:
        raise BadCorner(f"corner {j} outside 1..{2 * t.n}")
    word, edges = _reroot_word(t, j)
    colour = [0] * (t.n + 2)
    if t.r == 3:
        lab = labels(t)
        for a, b in edges:
            colour[b + 1] = STEP_COLOUR[lab[b] - lab[a]]
    else:
        for a, b in edges:
            colour[b + 1] = t.colour[b if t.parent[b] == a else a]
    return rebuild(word, colour, t.r)


def _max_label_corners(t: ColouredTree) -> List[int]:
    lab = labels(t)
    if min(lab) < 0:
        raise NegativeLabel(f"{t.code!r} has a negative label")
    top = max(lab)
    return [i for i, v in enumerate(contour(t).corners, start=1) if lab[v] == top]


def _mirror_labels(t: ColouredTree) -> ColouredTree:
    lab = labels(t)
    top = max(lab)
    return relabel_from_labels(t, [top - x for x in lab])


def reroot_max_label(t: ColouredTree) -> ColouredTree:
    """Reroot a non-negative labelled tree at its leftmost maximum-label corner and
    replace every label l by M - l.

    The map is not injective: the old root corner becomes a corner labelled M,
    but so do the old corners labelled 0 before the chosen corner, and nothing
    records which one it was. ``(+)(=)``, ``(=)(+)`` and ``(=(+))`` all go to ``(+(=))``.

    Raises:
        NegativeLabel: if some label is negative
    """
    if t.n == 0:
        return t
    j = _max_label_corners(t)[0]
    return _mirror_labels(reroot_at_corner(t, j))


def reroot_max_label_inverse(t: ColouredTree) -> ColouredTree:
    """Same relabelling, rerooted at the rightmost maximum-label corner.

    Inverts :func:`reroot_max_label` only on trees whose root corner is the last
    corner labelled 0 in the contour read from the leftmost maximum-label corner.
    """
    if t.n == 0:
        return t
    j = _max_label_corners(t)[-1]
    return _mirror_labels(reroot_at_corner(t, j))


def count_trees(n: int, r: int = 1) -> int:
    """r^n times the n-th Catalan number."""
    return r ** n * comb(2 * n, n) // (n + 1)


def count_dyck_paths(n: int) -> int:
    """Dyck paths of length 2n by dynamic programming over heights."""
    ways = [1] + [0] * n
    for _ in range(2 * n):
        nxt = [0] * (n + 1)
        for h, w in enumerate(ways):
            if w:
                if h + 1 <= n:
                    nxt[h + 1] += w
                if h > 0:
                    nxt[h - 1] += w
        ways = nxt
    return ways[0]


def _codes(n: int, r: int) -> Iterator[str]:
    if n == 0:
        yield ''
        return
    for k in range(n):
        for c in range(1, r + 1):
            head = f"({colour_char(c, r)}"
            for inner in _codes(k, r):
                for rest in _codes(n - 1 - k, r):
                    yield f"{head}{inner}){rest}"


def enumerate_trees(n: int, r: int = 1) -> Iterator[ColouredTree]:
    """All trees with n edges and colours in 1..r, sorted by code."""
    for code in sorted(_codes(n, r)):
        yield from_code(code, r)


def non_negative(t: ColouredTree) -> bool:
    return min(labels(t)) >= 0


def to_json(t: ColouredTree) -> Dict[str, List[int]]:
    """Preorder parent and colour arrays; parent of the root is -1."""
    t = normalize(t)
    return {'parent': list(t.parent), 'colour': list(t.colour), 'r': t.r}


def from_json(data: Dict[str, List[int]]) -> ColouredTree:
    parent = data['parent']
    colour = data['colour']
    r = data.get('r', 3)
    kids: List[List[int]] = [[] for _ in parent]
    for v, p in enumerate(parent):
        if v and p < 0:
            raise MalformedCode(f"vertex {v} has no parent")
        if v:
            kids[p].append(v)
    word: List[int] = []

    def walk(u: int) -> None:
        for c in kids[u]:
            word.append(c)
            walk(c)
            word.append(-c)

    walk(0)
    if len(word) != 2 * (len(parent) - 1):
        raise MalformedCode("parent array does not describe a tree")
    return rebuild(word, colour, r)


def random_tree(n: int, r: int, rng) -> ColouredTree:
    """Uniform tree with n edges and colours in 1..r, drawn with a numpy Generator.

    A shuffled word of n up-steps and n + 1 down-steps has exactly one rotation whose
    proper prefixes stay non-negative; dropping its last down-step gives a uniform Dyck word.
    """
    steps = np.array([1] * n + [-1] * (n + 1))
    rng.shuffle(steps)
    cut = int(np.argmin(np.cumsum(steps))) + 1
    rotated = np.concatenate([steps[cut:], steps[:cut]])[:-1]
    d = ''.join('U' if s > 0 else 'D' for s in rotated)
    t = from_dyck(d, r, 1)
    colour = (0,) + tuple(int(c) for c in rng.integers(1, r + 1, size=n))
    return ColouredTree(t.word, colour, r)
