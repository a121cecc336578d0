"""Random canonical paths for the leaf replanting chain, with exact rational measures.

A path from x to y first dismantles x leaf by leaf into the subtree below the root
edge, meets a middle tree chosen by the fiber map, then rebuilds y the same way
backwards. Leaf-deletion sequences are weighted by a hierarchy of functions f_k
built recursively from the left/right split at the root edge.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from .enumeration import tree_space
from .trees import (ColouredTree, Direction, count_trees, join_lr,
                    leaf_corner, leaf_deletions, leaf_recolour, leaf_replant,
                    leaf_translate, leaves, split_lr, to_dyck)

logger = logging.getLogger(__name__)

# colour of the root edge shared by every interior tree of a replanting path
MIDDLE_COLOUR = 1

HIERARCHY_CACHE = 8


def constants(n: int) -> List[Fraction]:
    """C_i = i(i+1)(3n-2i-1) / ((n-1)n(n+1)) for i = 0..n-1 (n >= 2)."""
    if n < 2:
        return [Fraction(0)] * max(n, 1)
    den = (n - 1) * n * (n + 1)
    return [Fraction(i * (i + 1) * (3 * n - 2 * i - 1), den) for i in range(n)]


class HierarchyWeights:
    """The functions f_k(t, t') for trees with colours in 1..r, memoized by code.

    f_k(t, t') is positive only when t' is t with one leaf deleted; each row sums to
    one and each column of f_k sums to |T_k| / |T_{k-1}|.
    """

    def __init__(self, r: int):
        self.r = r
        self._memo: Dict[Tuple[str, str], Fraction] = {}
        self._constants: Dict[int, List[Fraction]] = {}

    def constant(self, n: int, i: int) -> Fraction:
        if n not in self._constants:
            self._constants[n] = constants(n)
        return self._constants[n][i]

    def f(self, t: ColouredTree, smaller: ColouredTree) -> Fraction:
        key = (t.code, smaller.code)
        if key not in self._memo:
            self._memo[key] = self._compute(t, smaller)
        return self._memo[key]

    def _compute(self, t: ColouredTree, smaller: ColouredTree) -> Fraction:
        n = t.n
        if n == 0 or smaller.n != n - 1:
            return Fraction(0)
        if n == 1:
            return Fraction(1)
        left, right, c = split_lr(t)
        left2, right2, c2 = split_lr(smaller)
        if c2 != c:
            return Fraction(0)
        if left.n > 0 and right2 == right and left2.code in leaf_deletions(left):
            return self.constant(n, left.n) * self.f(left, left2)
        if right.n > 0 and left2 == left and right2.code in leaf_deletions(right):
            return self.constant(n, right.n) * self.f(right, right2)
        return Fraction(0)

    def row(self, t: ColouredTree) -> Dict[str, Tuple[ColouredTree, Fraction]]:
        """Positive entries of f(t, .) keyed by code."""
        out = {}
        for code, smaller in leaf_deletions(t).items():
            w = self.f(t, smaller)
            if w:
                out[code] = (smaller, w)
        return out

    def row_sum(self, t: ColouredTree) -> Fraction:
        return sum((w for _, w in self.row(t).values()), Fraction(0))

    def column_sums(self, n: int) -> Dict[str, Fraction]:
        """Sum over t in T_n of f_n(t, t'), for every t' in T_{n-1}."""
        sums = {t.code: Fraction(0) for t in tree_space(n - 1, self.r).states}
        for t in tree_space(n, self.r).states:
            for code, (_, w) in self.row(t).items():
                sums[code] += w
        return sums


def hierarchy(n: int, r: int) -> HierarchyWeights:
    """Weights for sizes up to n; values are computed lazily."""
    if n < 1:
        raise ValueError(f"hierarchy needs n >= 1, got {n}")
    return _hierarchy(n, r)


# each entry keeps the memo of every size below its own
@lru_cache(maxsize=HIERARCHY_CACHE)
def _hierarchy(n: int, r: int) -> HierarchyWeights:
    return HierarchyWeights(r)


class FiberMap:
    """F(t_a, t_b) = tau_((a + b) mod |T_{n-1}|), indices in code order."""

    def __init__(self, n: int, r: int):
        if n < 1:
            raise ValueError(f"fiber map needs n >= 1, got {n}")
        self.n = n
        self.r = r
        self.trees = tree_space(n, r).states
        self.smaller = tree_space(n - 1, r).states
        self.index = {t.code: i for i, t in enumerate(self.trees)}

    def __call__(self, x: ColouredTree, y: ColouredTree) -> ColouredTree:
        s = (self.index[x.code] + self.index[y.code]) % len(self.smaller)
        return self.smaller[s]

    def fiber_sizes(self) -> Dict[Tuple[str, str], int]:
        """|{y : F(x, y) = tau}| for every x and tau."""
        sizes: Dict[Tuple[str, str], int] = {}
        for x in self.trees:
            for y in self.trees:
                key = (x.code, self(x, y).code)
                sizes[key] = sizes.get(key, 0) + 1
        return sizes


def fiber_map(n: int, r: int) -> FiberMap:
    return FiberMap(n, r)


@dataclass(frozen=True)
class DeletionSequence:
    """Trees t_0 = t, ..., t_n = single vertex, each a leaf deletion of the previous."""
    trees: Tuple[ColouredTree, ...]

    @property
    def start(self) -> ColouredTree:
        return self.trees[0]

    def __getitem__(self, i: int) -> ColouredTree:
        return self.trees[i]

    def __len__(self) -> int:
        return len(self.trees)

    def is_valid(self) -> bool:
        n = self.trees[0].n
        if len(self.trees) != n + 1:
            return False
        return all(b.code in leaf_deletions(a) for a, b in zip(self.trees, self.trees[1:]))


def mass(seq: DeletionSequence, weights: HierarchyWeights) -> Fraction:
    """Q^t of a deletion sequence: the product of f along it."""
    out = Fraction(1)
    for a, b in zip(seq.trees, seq.trees[1:]):
        out *= weights.f(a, b)
    return out


def deletion_sequences(t: ColouredTree, weights: HierarchyWeights) -> Iterator[Tuple[DeletionSequence, Fraction]]:
    """Every deletion sequence of positive mass, with its mass."""
    def walk(prefix: List[ColouredTree], m: Fraction):
        cur = prefix[-1]
        if cur.n == 0:
            yield DeletionSequence(tuple(prefix)), m
            return
        for smaller, w in weights.row(cur).values():
            yield from walk(prefix + [smaller], m * w)

    yield from walk([t], Fraction(1))


def _draw(options: List[Tuple[ColouredTree, Fraction]], rng: np.random.Generator) -> ColouredTree:
    u = Fraction(float(rng.random()))
    acc = Fraction(0)
    for tree, w in options:
        acc += w
        if u < acc:
            return tree
    return options[-1][0]


def sample_deletion(t: ColouredTree, weights: HierarchyWeights, rng: np.random.Generator) -> DeletionSequence:
    """Draw from Q^t by choosing each next tree according to f(t_i, .)."""
    trees = [t]
    while trees[-1].n > 0:
        options = sorted(weights.row(trees[-1]).values(), key=lambda p: p[0].code)
        trees.append(_draw(options, rng))
    return DeletionSequence(tuple(trees))


def marginals(t: ColouredTree, weights: HierarchyWeights) -> List[Dict[str, Fraction]]:
    """Q^t(t_i = .) for i = 0..n, by forward propagation."""
    layers = [{t.code: Fraction(1)}]
    trees = {t.code: t}
    for _ in range(t.n):
        nxt: Dict[str, Fraction] = {}
        for code, m in layers[-1].items():
            for c2, (smaller, w) in weights.row(trees[code]).items():
                trees[c2] = smaller
                nxt[c2] = nxt.get(c2, Fraction(0)) + m * w
        layers.append(nxt)
    return layers


@dataclass(frozen=True)
class ReplantPath:
    """A path t_0 = x, ..., t_2n = y of replanting moves through L(t_n) = F(x, y)."""
    trees: Tuple[ColouredTree, ...]
    r1: DeletionSequence
    r2: DeletionSequence
    l1: DeletionSequence
    l2: DeletionSequence

    def __getitem__(self, i: int) -> ColouredTree:
        return self.trees[i]

    def __len__(self) -> int:
        """Number of transitions."""
        return len(self.trees) - 1

    @property
    def n(self) -> int:
        return self.trees[0].n


def assemble(r1: DeletionSequence, r2: DeletionSequence,
             l1: DeletionSequence, l2: DeletionSequence) -> ReplantPath:
    """Glue deletion sequences of x, y and F(x, y) (twice) into a path from x to y."""
    x, y = r1.start, r2.start
    n = x.n
    trees: List[ColouredTree] = [x]
    for i in range(1, n + 1):
        trees.append(join_lr(l1[n - i], r1[i], MIDDLE_COLOUR))
    for i in range(n + 1, 2 * n):
        j = 2 * n - i
        trees.append(join_lr(l2[n - j], r2[j], MIDDLE_COLOUR))
    trees.append(y)
    return ReplantPath(tuple(trees), r1, r2, l1, l2)


def disassemble(path: ReplantPath) -> Tuple[DeletionSequence, ...]:
    """Recover (R1, R2, L1, L2) from the trees of a path."""
    t = path.trees
    n = path.n
    splits = {i: split_lr(t[i]) for i in range(1, 2 * n)}
    r1 = DeletionSequence((t[0],) + tuple(splits[i][1] for i in range(1, n + 1)))
    r2 = DeletionSequence((t[2 * n],) + tuple(splits[2 * n - j][1] for j in range(1, n + 1)))
    l1 = DeletionSequence(tuple(splits[i][0] for i in range(n, 0, -1)))
    l2 = DeletionSequence(tuple(splits[i][0] for i in range(n, 2 * n)))
    return r1, r2, l1, l2


def path_mass(path: ReplantPath, weights: HierarchyWeights) -> Fraction:
    """P_{x->y}(path) = Q^x(R1) Q^y(R2) Q^F(L1) Q^F(L2)."""
    return (mass(path.r1, weights) * mass(path.r2, weights)
            * mass(path.l1, weights) * mass(path.l2, weights))


def sample_gamma(x: ColouredTree, y: ColouredTree, weights: HierarchyWeights,
                 fibers: FiberMap, rng: np.random.Generator) -> ReplantPath:
    middle = fibers(x, y)
    return assemble(sample_deletion(x, weights, rng), sample_deletion(y, weights, rng),
                    sample_deletion(middle, weights, rng), sample_deletion(middle, weights, rng))


def gamma_paths(x: ColouredTree, y: ColouredTree, weights: HierarchyWeights,
                fibers: FiberMap) -> Iterator[Tuple[ReplantPath, Fraction]]:
    """All paths of positive mass from x to y."""
    middle = fibers(x, y)
    rx = list(deletion_sequences(x, weights))
    ry = list(deletion_sequences(y, weights))
    lm = list(deletion_sequences(middle, weights))
    for (r1, m1), (r2, m2), (l1, m3), (l2, m4) in product(rx, ry, lm, lm):
        yield assemble(r1, r2, l1, l2), m1 * m2 * m3 * m4


def find_replant(t: ColouredTree, target: ColouredTree) -> Optional[Tuple[int, int, int]]:
    """Leftmost leaf v, then smallest k, then colour c with t^{v,k,c} = target."""
    if target.n != t.n or t.n == 0:
        return None
    for v in leaves(t):
        for k in range(1, 2 * t.n):
            for c in range(1, t.r + 1):
                if leaf_replant(t, v, k, c) == target:
                    return v, k, c
    return None


def is_replant_path(path: ReplantPath) -> bool:
    return all(find_replant(a, b) is not None for a, b in zip(path.trees, path.trees[1:]))


def path_defects(path: ReplantPath, x: ColouredTree, y: ColouredTree, fibers: FiberMap) -> List[str]:
    """Ways in which ``path`` breaks the structure of a path from x to y."""
    n = x.n
    out = []
    if len(path) != 2 * n:
        out.append(f"length {len(path)} != {2 * n}")
    if path[0] != x or path[2 * n] != y:
        out.append("wrong endpoints")
    if split_lr(path[n])[0] != fibers(x, y):
        out.append("middle tree does not split to F(x, y)")
    if split_lr(path[1])[0].n != 0 or split_lr(path[2 * n - 1])[0].n != 0:
        out.append("first or last move does not replant onto corner 1")
    if not is_replant_path(path):
        out.append("a step is not a replanting move")
    return out


@dataclass(frozen=True)
class TranslationStep:
    kind: str  # 'right', 'left' or 'recolour'
    leaf: int
    tree: ColouredTree


@dataclass(frozen=True)
class TranslationPath:
    start: ColouredTree
    steps: Tuple[TranslationStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def trees(self) -> List[ColouredTree]:
        return [self.start] + [s.tree for s in self.steps]


def translation_leg(t: ColouredTree, target: ColouredTree) -> List[TranslationStep]:
    """Minimal run of translations of one leaf, then a recolouring, from t to target."""
    found = find_replant(t, target)
    if found is None:
        raise ValueError(f"{target!r} is not a replanting of {t!r}")
    v, k, c = found
    direction = Direction.RIGHT if k >= leaf_corner(t, v) else Direction.LEFT
    steps: List[TranslationStep] = []
    cur = t
    while leaf_recolour(cur, v, c) != target:
        moved = leaf_translate(cur, v, direction)
        if moved == cur:
            raise ValueError(f"translation of leaf {v} stalled before reaching {target!r}")
        cur = moved
        steps.append(TranslationStep(direction.value, v, cur))
    steps.append(TranslationStep('recolour', v, leaf_recolour(cur, v, c)))
    return steps


def expand_translations(path: ReplantPath) -> TranslationPath:
    """Replace every replanting step by leaf translations followed by one recolouring."""
    steps: List[TranslationStep] = []
    for a, b in zip(path.trees, path.trees[1:]):
        steps.extend(translation_leg(a, b))
    return TranslationPath(path.trees[0], tuple(steps))


def contract_translations(tpath: TranslationPath) -> List[ColouredTree]:
    """Recover the replanting trees: keep the trees reached by a colour-only change."""
    trees = tpath.trees()
    out = [trees[0]]
    for a, b in zip(trees, trees[1:]):
        if to_dyck(a) == to_dyck(b):
            out.append(b)
    return out


def congestion_profile(n: int, r: int, i: int) -> Dict[str, Fraction]:
    """Sum over (x, y) of P_{x->y}(gamma(i) = t), for every t in T_n."""
    weights = hierarchy(n, r)
    fibers = fiber_map(n, r)
    trees = fibers.trees
    if i in (0, 2 * n):
        return {t.code: Fraction(len(trees)) for t in trees}

    # F is symmetric, so the y side uses the same fiber counts as the x side
    side = i if i <= n else 2 * n - i
    ends = {x.code: marginals(x, weights)[side] for x in trees}
    middles = {z.code: marginals(z, weights)[n - side] for z in fibers.smaller}
    counts = fibers.fiber_sizes()
    profile = {}
    for t in trees:
        left, right, c = split_lr(t)
        total = Fraction(0)
        if c == MIDDLE_COLOUR:
            for (x_code, z_code), count in counts.items():
                p_r = ends[x_code].get(right.code)
                p_l = middles[z_code].get(left.code)
                if p_r and p_l:
                    total += count * p_r * p_l
        profile[t.code] = total
    return profile


def audit_congestion(n: int, r: int, i: int) -> Tuple[Fraction, str]:
    """Largest routed mass through one tree at position i, and that tree's code."""
    profile = congestion_profile(n, r, i)
    code = max(sorted(profile), key=lambda c: profile[c])
    return profile[code], code


def congestion_bound(n: int, r: int) -> int:
    return 2 * (4 * r) ** (n + 1)


def partial_sum(n: int, r: int, i: int, t: ColouredTree) -> Fraction:
    """Sum over x in T_n of Q^x(R_i = t)."""
    weights = hierarchy(n, r)
    return sum((marginals(x, weights)[i].get(t.code, Fraction(0))
                for x in tree_space(n, r).states), Fraction(0))


def partial_sum_closed_form(n: int, r: int, i: int) -> Fraction:
    out = Fraction(1)
    for j in range(i):
        out *= Fraction(count_trees(n - j, r), count_trees(n - j - 1, r))
    return out


def partial_sums(n: int, r: int) -> List[Dict[str, Fraction]]:
    """partial_sum for every depth i = 0..n and every tree of size n - i, in one pass."""
    weights = hierarchy(n, r)
    totals: List[Dict[str, Fraction]] = [{} for _ in range(n + 1)]
    for x in tree_space(n, r).states:
        for i, layer in enumerate(marginals(x, weights)):
            acc = totals[i]
            for code, p in layer.items():
                acc[code] = acc.get(code, Fraction(0)) + p
    return totals
