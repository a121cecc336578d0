"""Markov chains on quadrangulations and trees: exact kernels, samplers and simulation.

Each chain is described once by two functions of a state: ``moves`` lists every
(probability, next state) outcome of one step exactly, and ``sample`` draws one
outcome from a numpy generator. Kernels over enumerated spaces are assembled from
``moves``; trajectories at any size use ``sample``.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (Callable, Dict, Iterator, List, Optional, Sequence, Tuple)

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from .enumeration import (DEFAULT_CEILING, StateSpace, pointed_space,
                          quad_space, signed_space, tree_space)
from .maps import (MINUS, PLUS, AnyQuad, FlipMove, PointedQuadrangulation,
                   apply_move, ball_size, canonical_code, far_set_size,
                   forget_point, radius)
from .schaeffer import SignedTree
from .trees import (Direction, ColouredTree, height, labels, leaf_corner,
                    leaf_recolour, leaf_replant, leaf_translate, leaves,
                    star)

logger = logging.getLogger(__name__)

CHAINS = ("flip", "flip-pointed", "translate", "replant", "xtilde")

Outcome = Tuple[Fraction, object]


@dataclass(frozen=True)
class Chain:
    """Transition rule of one chain, independent of any enumeration."""
    name: str
    n: int
    r: int
    moves: Callable[[object], List[Outcome]]
    sample: Callable[[object, np.random.Generator], object]
    code: Callable[[object], str]


def _flip_moves(n: int) -> Callable[[AnyQuad], List[Outcome]]:
    w = Fraction(1, 6 * n)

    def moves(q: AnyQuad) -> List[Outcome]:
        out: List[Outcome] = []
        for e in range(2 * n):
            out.append((w, apply_move(q, FlipMove(e, PLUS))))
            out.append((w, apply_move(q, FlipMove(e, MINUS))))
            out.append((w, q))
        return out

    return moves


def _flip_sample(n: int) -> Callable[[AnyQuad, np.random.Generator], AnyQuad]:
    def sample(q: AnyQuad, rng: np.random.Generator) -> AnyQuad:
        # one integer in [0, 6n): edge u // 3, action u % 3 (+, -, hold)
        u = int(rng.integers(6 * n))
        e, action = divmod(u, 3)
        if action == 2:
            return q
        return apply_move(q, FlipMove(e, PLUS if action == 0 else MINUS))

    return sample


def flip_chain(n: int, pointed: bool = False) -> Chain:
    return Chain("flip-pointed" if pointed else "flip", n, 1,
                 _flip_moves(n), _flip_sample(n), canonical_code)


def _leaf_options(t: ColouredTree, v: int, r: int) -> List[ColouredTree]:
    return ([leaf_translate(t, v, Direction.RIGHT), leaf_translate(t, v, Direction.LEFT)]
            + [leaf_recolour(t, v, c) for c in range(1, r + 1)])


def translation_chain(n: int, r: int) -> Chain:
    """Pick an edge (v, p(v)) uniformly; a leaf v moves right, left or takes one of r colours."""
    per_move = Fraction(1, n * (r + 2))
    per_edge = Fraction(1, n)

    def moves(t: ColouredTree) -> List[Outcome]:
        out: List[Outcome] = []
        for v in range(1, n + 1):
            if t.is_leaf(v):
                out.extend((per_move, s) for s in _leaf_options(t, v, r))
            else:
                out.append((per_edge, t))
        return out

    def sample(t: ColouredTree, rng: np.random.Generator) -> ColouredTree:
        v = int(rng.integers(n)) + 1
        if not t.is_leaf(v):
            return t
        return _leaf_options(t, v, r)[int(rng.integers(r + 2))]

    return Chain("translate", n, r, moves, sample, lambda t: t.code)


def replanting_chain(n: int, r: int) -> Chain:
    """Pick an edge (v, p(v)), a corner k in 1..2n-1 and a colour, all uniformly."""
    per_move = Fraction(1, n * (2 * n - 1) * r)
    per_edge = Fraction(1, n)

    def moves(t: ColouredTree) -> List[Outcome]:
        out: List[Outcome] = []
        for v in range(1, n + 1):
            if not t.is_leaf(v):
                out.append((per_edge, t))
                continue
            for k in range(1, 2 * n):
                for c in range(1, r + 1):
                    out.append((per_move, leaf_replant(t, v, k, c)))
        return out

    def sample(t: ColouredTree, rng: np.random.Generator) -> ColouredTree:
        v = int(rng.integers(n)) + 1
        k = int(rng.integers(2 * n - 1)) + 1
        c = int(rng.integers(r)) + 1
        if not t.is_leaf(v):
            return t
        return leaf_replant(t, v, k, c)

    return Chain("replant", n, r, moves, sample, lambda t: t.code)


def xtilde_chain(n: int) -> Chain:
    """Sign change with probability 1/(n+1), otherwise a leaf-translation step with r = 3."""
    flip_sign = Fraction(1, n + 1)
    per_move = Fraction(1, 5 * (n + 1))
    per_edge = Fraction(1, n + 1)

    def moves(st: SignedTree) -> List[Outcome]:
        out: List[Outcome] = [(flip_sign, SignedTree(st.tree, -st.eps))]
        for v in range(1, n + 1):
            if st.tree.is_leaf(v):
                out.extend((per_move, SignedTree(s, st.eps)) for s in _leaf_options(st.tree, v, 3))
            else:
                out.append((per_edge, st))
        return out

    def sample(st: SignedTree, rng: np.random.Generator) -> SignedTree:
        u = int(rng.integers(n + 1))
        if u == n:
            return SignedTree(st.tree, -st.eps)
        v = u + 1
        if not st.tree.is_leaf(v):
            return st
        return SignedTree(_leaf_options(st.tree, v, 3)[int(rng.integers(5))], st.eps)

    return Chain("xtilde", n, 3, moves, sample, lambda st: st.code)


def make_chain(name: str, n: int, r: int = 3) -> Chain:
    if n < 1:
        raise ValueError(f"chains need n >= 1, got {n}")
    if name == "flip":
        return flip_chain(n)
    if name == "flip-pointed":
        return flip_chain(n, pointed=True)
    if name == "translate":
        return translation_chain(n, r)
    if name == "replant":
        return replanting_chain(n, r)
    if name == "xtilde":
        return xtilde_chain(n)
    raise ValueError(f"unknown chain {name!r}, expected one of {', '.join(CHAINS)}")


def state_space(chain: Chain, ceiling: int = DEFAULT_CEILING) -> StateSpace:
    if chain.name == "flip":
        return quad_space(chain.n, ceiling)
    if chain.name == "flip-pointed":
        return pointed_space(chain.n, ceiling)
    if chain.name == "xtilde":
        return signed_space(chain.n, ceiling)
    return tree_space(chain.n, chain.r, ceiling)


@dataclass
class Kernel:
    """Exact transition matrix of a chain over an enumerated state space."""
    chain: Chain
    space: StateSpace
    rows: List[Dict[int, Fraction]]
    _dense: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def name(self) -> str:
        return self.chain.name

    @property
    def n(self) -> int:
        return self.chain.n

    def __len__(self) -> int:
        return len(self.rows)

    def transition_prob(self, a: str, b: str) -> Fraction:
        return self.rows[self.space.index[a]].get(self.space.index[b], Fraction(0))

    def step(self, state, rng: np.random.Generator):
        return self.chain.sample(state, rng)

    def row_sums(self) -> List[Fraction]:
        return [sum(row.values(), Fraction(0)) for row in self.rows]

    def is_stochastic(self) -> bool:
        return all(s == 1 for s in self.row_sums())

    def asymmetric_pairs(self) -> List[Tuple[str, str]]:
        bad = []
        for i, row in enumerate(self.rows):
            for j, p in row.items():
                if self.rows[j].get(i, Fraction(0)) != p:
                    bad.append((self.space.codes[i], self.space.codes[j]))
        return bad

    def is_symmetric(self) -> bool:
        return not self.asymmetric_pairs()

    def off_diagonal(self) -> Iterator[Tuple[int, int, Fraction]]:
        for i, row in enumerate(self.rows):
            for j, p in row.items():
                if i != j:
                    yield i, j, p

    def holding(self) -> List[Fraction]:
        return [row.get(i, Fraction(0)) for i, row in enumerate(self.rows)]

    def to_sparse(self) -> sparse.csr_matrix:
        data, ri, ci = [], [], []
        for i, row in enumerate(self.rows):
            for j, p in row.items():
                ri.append(i)
                ci.append(j)
                data.append(float(p))
        size = len(self.rows)
        return sparse.csr_matrix((data, (ri, ci)), shape=(size, size))

    def to_dense(self) -> np.ndarray:
        if self._dense is None:
            self._dense = self.to_sparse().toarray()
        return self._dense

    def communicating_classes(self) -> int:
        count, _ = connected_components(self.to_sparse(), directed=True, connection='strong')
        return int(count)


def _row(chain: Chain, index: Dict[str, int], state) -> Dict[int, Fraction]:
    row: Dict[int, Fraction] = {}
    for p, nxt in chain.moves(state):
        j = index[chain.code(nxt)]
        row[j] = row.get(j, Fraction(0)) + p
    return row


def build_kernel(chain: Chain, ceiling: int = DEFAULT_CEILING, threads: int = 1) -> Kernel:
    """Assemble the exact kernel of ``chain`` over its enumerated state space.

    Raises:
        TooLarge: if the state space exceeds ``ceiling``
    """
    space = state_space(chain, ceiling)
    logger.debug(f"assembling {chain.name} kernel over {len(space)} states")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda s: _row(chain, space.index, s), space.states))
    else:
        rows = [_row(chain, space.index, s) for s in space.states]
    return Kernel(chain, space, rows)


def kernel_flip(n: int, pointed: bool = False, ceiling: int = DEFAULT_CEILING, threads: int = 1) -> Kernel:
    return build_kernel(flip_chain(n, pointed), ceiling, threads)


def kernel_leaf_translation(n: int, r: int, ceiling: int = DEFAULT_CEILING, threads: int = 1) -> Kernel:
    return build_kernel(translation_chain(n, r), ceiling, threads)


def kernel_leaf_replanting(n: int, r: int, ceiling: int = DEFAULT_CEILING, threads: int = 1) -> Kernel:
    return build_kernel(replanting_chain(n, r), ceiling, threads)


def kernel_xtilde(n: int, ceiling: int = DEFAULT_CEILING, threads: int = 1) -> Kernel:
    return build_kernel(xtilde_chain(n), ceiling, threads)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


def split_rngs(seed: int, count: int) -> List[np.random.Generator]:
    """Independent generators for parallel trajectories from one seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def _tree_of(state) -> ColouredTree:
    return state.tree if isinstance(state, SignedTree) else state


def _max_label(state) -> float:
    t = _tree_of(state)
    return float(max(labels(t))) if t.r == 3 else float('nan')


OBSERVABLES: Dict[str, Callable[[object], float]] = {
    "radius": lambda s: float(radius(s)),
    "root_degree": lambda s: float(forget_point(s).degree(forget_point(s).root_vertex)),
    "far_set": lambda s: float(far_set_size(s)),
    "ball2": lambda s: float(ball_size(s, 2)),
    "point_eccentricity": lambda s: float(radius(s, s.point)),
    "height": lambda s: float(height(_tree_of(s))),
    "leaves": lambda s: float(len(leaves(_tree_of(s)))),
    "max_label": _max_label,
    "sign": lambda s: float(s.eps),
}

MAP_OBSERVABLES = ("radius", "root_degree", "far_set", "ball2")
TREE_OBSERVABLES = ("height", "leaves")


def observables_for(chain_name: str) -> Tuple[str, ...]:
    if chain_name == "flip":
        return MAP_OBSERVABLES
    if chain_name == "flip-pointed":
        return MAP_OBSERVABLES + ("point_eccentricity",)
    if chain_name == "xtilde":
        return TREE_OBSERVABLES + ("max_label", "sign")
    return TREE_OBSERVABLES


@dataclass
class RunningStat:
    """Streaming mean/variance (Welford) with min, max and last value."""
    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    min: float = math.inf
    max: float = -math.inf
    last: float = math.nan

    def push(self, x: float):
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)
        self.min = min(self.min, x)
        self.max = max(self.max, x)
        self.last = x

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0

    def to_dict(self) -> Dict[str, float]:
        return {'mean': self.mean, 'variance': self.variance, 'min': self.min,
                'max': self.max, 'last': self.last}


@dataclass
class SimulationSummary:
    chain: str
    n: int
    steps: int
    seed: Optional[int]
    stats: Dict[str, RunningStat]
    final_code: str
    visits: Optional[Dict[str, int]] = None

    def to_dict(self) -> Dict[str, object]:
        out = {
            'chain': self.chain,
            'n': self.n,
            'steps': self.steps,
            'seed': self.seed,
            'final': self.final_code,
            'observables': {k: v.to_dict() for k, v in self.stats.items()},
        }
        if self.visits is not None:
            out['visits'] = dict(sorted(self.visits.items()))
        return out


def trajectory(chain: Chain, s0, steps: int, rng: np.random.Generator,
               observables: Sequence[str]) -> Iterator[Tuple[int, object, List[float]]]:
    """Yield (step, state, observable values) for steps 0..steps; nothing is retained."""
    for name in observables:
        if name not in OBSERVABLES:
            raise ValueError(f"unknown observable {name!r}")
    state = s0
    yield 0, state, [OBSERVABLES[o](state) for o in observables]
    for k in range(1, steps + 1):
        state = chain.sample(state, rng)
        yield k, state, [OBSERVABLES[o](state) for o in observables]


def simulate(chain: Chain, s0, steps: int, rng: np.random.Generator,
             observables: Optional[Sequence[str]] = None, seed: Optional[int] = None,
             count_visits: bool = False) -> SimulationSummary:
    """Run ``steps`` transitions from ``s0`` and summarize the observables."""
    observables = tuple(observables or observables_for(chain.name))
    stats = {o: RunningStat() for o in observables}
    visits: Optional[Dict[str, int]] = {} if count_visits else None
    state = s0
    for _, state, values in trajectory(chain, s0, steps, rng, observables):
        for o, x in zip(observables, values):
            stats[o].push(x)
        if visits is not None:
            code = chain.code(state)
            visits[code] = visits.get(code, 0) + 1
    logger.debug(f"simulated {steps} steps of {chain.name} at n={chain.n}")
    return SimulationSummary(chain.name, chain.n, steps, seed, stats, chain.code(state), visits)


def start_state(chain: Chain):
    """Default start: q0 for flip chains, the colour-1 star for tree chains."""
    from .maps import make_q0
    if chain.name in ("flip", "flip-pointed"):
        return make_q0(chain.n, pointed=chain.name == "flip-pointed")
    if chain.name == "xtilde":
        return SignedTree(star(chain.n, 2, 3), 1)
    return star(chain.n, 1, chain.r)


def star_path_translation(t: ColouredTree) -> List[ColouredTree]:
    """Leaf translations and recolourings from ``t`` to the colour-1 star.

    The leftmost unfinished leaf is moved left until it hangs from the root next to
    the leaves already placed, then recoloured.
    """
    path = [t]
    cur = t
    done = 0
    while done < cur.n:
        v = next(u for u in leaves(cur) if cur.position[u] >= 2 * done)
        while cur.position[v] > 2 * done:
            cur = leaf_translate(cur, v, Direction.LEFT)
            path.append(cur)
        if cur.colour[v] != 1:
            cur = leaf_recolour(cur, v, 1)
            path.append(cur)
        done += 1
    return path


def star_path_replanting(t: ColouredTree) -> List[ColouredTree]:
    """At most n replanting moves from ``t`` to the colour-1 star."""
    path = [t]
    cur = t
    while True:
        todo = [v for v in leaves(cur) if cur.parent[v] != 0 or cur.colour[v] != 1]
        if not todo:
            return path
        v = todo[0]
        k = 1 if cur.parent[v] != 0 else leaf_corner(cur, v) - 1
        cur = leaf_replant(cur, v, k, 1)
        path.append(cur)


def forgetful_defects(states: Sequence[PointedQuadrangulation]) -> List[int]:
    """Steps of a pointed trajectory whose forgotten image is not a flip-chain step."""
    bad = []
    for k, (a, b) in enumerate(zip(states, states[1:])):
        qa = forget_point(a)
        target = canonical_code(forget_point(b))
        reachable = {canonical_code(qa)}
        for _, nxt in _flip_moves(qa.n)(qa):
            reachable.add(canonical_code(nxt))
        if target not in reachable:
            bad.append(k)
    return bad
