"""Spectral gaps, Dirichlet forms and finite-n checks of the gap inequalities.

All kernels here are symmetric, so their stationary law is uniform and a real
symmetric eigensolver applies. Exact rational kernels are rounded to floats only
when a solver runs.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (Callable, Dict, Iterable, Iterator, List, Optional,
                    Sequence, Tuple, Union)

import numpy as np
from scipy import linalg

from .chains import (OBSERVABLES, Kernel, kernel_flip, kernel_leaf_replanting,
                     kernel_leaf_translation, kernel_xtilde)
from .canonical_paths import fiber_map, gamma_paths, hierarchy
from .enumeration import (DEFAULT_CEILING, check_ceiling, pointed_space,
                          quad_space)
from .errors import ConstantObservable
from .flip_paths import (path_colour_change, path_leaf_translation,
                         path_root_reversal, transition_key)
from .maps import AnyQuad, FlipPath, ball_size, far_set_size, radius
from .trees import Direction, enumerate_trees, height, leaf_translate, leaves

logger = logging.getLogger(__name__)

TOLERANCE = 1e-10
AGREEMENT = 1e-8
POWER_ITERATIONS = 20000
POWER_RESIDUAL = 1e-9

Matrix = Union[Kernel, np.ndarray]
ObservableSpec = Union[str, Callable[[object], float], Sequence[float]]


def _dense(k: Matrix, ceiling: int = DEFAULT_CEILING) -> np.ndarray:
    if isinstance(k, Kernel):
        check_ceiling(k.name, k.n, len(k), ceiling)
        return k.to_dense()
    check_ceiling("matrix", 0, k.shape[0], ceiling)
    return np.asarray(k, dtype=float)


@dataclass
class GapResult:
    """Outcome of one exact gap computation."""
    chain: str
    n: int
    states: int
    gap: float
    lambda2: float
    residual: float
    asymmetry: float
    top_deviation: float
    power_gap: Optional[float] = None
    power_converged: Optional[bool] = None

    @property
    def relaxation_time(self) -> float:
        return relaxation_time(self.gap)

    @property
    def solvers_agree(self) -> Optional[bool]:
        if self.power_gap is None:
            return None
        return abs(self.power_gap - self.gap) <= AGREEMENT

    def to_dict(self) -> Dict[str, object]:
        out = {
            'chain': self.chain,
            'n': self.n,
            'states': self.states,
            'gap': self.gap,
            'lambda2': self.lambda2,
            'relaxation_time': self.relaxation_time,
            'solver_residual': self.residual,
            'asymmetry': self.asymmetry,
            'top_deviation': self.top_deviation,
        }
        if self.power_gap is not None:
            out['power_gap'] = self.power_gap
            out['power_converged'] = self.power_converged
            out['solvers_agree'] = self.solvers_agree
        return out


def gap_report(k: Matrix, ceiling: int = DEFAULT_CEILING, power: bool = False,
               iterations: int = POWER_ITERATIONS, seed: int = 0) -> GapResult:
    """1 - lambda_2 by dense symmetric eigendecomposition, with solver diagnostics.

    Raises:
        TooLarge: if the matrix has more rows than ``ceiling``
    """
    P = _dense(k, ceiling)
    size = P.shape[0]
    name = k.name if isinstance(k, Kernel) else "matrix"
    n = k.n if isinstance(k, Kernel) else 0
    asymmetry = float(np.max(np.abs(P - P.T))) if size else 0.0
    if size < 2:
        return GapResult(name, n, size, 1.0, 0.0, 0.0, asymmetry, 0.0,
                         1.0 if power else None, True if power else None)

    sym = (P + P.T) / 2
    values, vectors = linalg.eigh(sym)
    lam2 = float(values[-2])
    v2 = vectors[:, -2]
    residual = float(np.linalg.norm(sym @ v2 - lam2 * v2))
    top = np.abs(vectors[:, -1])
    top_deviation = float(np.max(np.abs(top - 1 / math.sqrt(size))))
    result = GapResult(name, n, size, 1 - lam2, lam2, residual, asymmetry, top_deviation)
    if power:
        result.power_gap, result.power_converged = power_iteration_gap(P, iterations, seed=seed)
    logger.info(f"{name} n={n}: {size} states, gap {result.gap:.12g}")
    return result


def spectral_gap(k: Matrix, ceiling: int = DEFAULT_CEILING) -> float:
    return gap_report(k, ceiling).gap


def power_iteration_gap(P: np.ndarray, iterations: int = POWER_ITERATIONS,
                        residual: float = POWER_RESIDUAL, seed: int = 0) -> Tuple[float, bool]:
    """Gap by power iteration on the lazy matrix (I + P) / 2 with the uniform vector deflated.

    Returns the gap and whether the residual dropped below ``residual``.
    """
    size = P.shape[0]
    if size < 2:
        return 1.0, True
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    x = rng.standard_normal(size)
    x -= x.mean()
    x /= np.linalg.norm(x)
    mu = 0.0
    converged = False
    for _ in range(iterations):
        y = 0.5 * (P @ x + x)
        y -= y.mean()
        mu = float(x @ y)
        if np.linalg.norm(y - mu * x) < residual:
            converged = True
            break
        norm = np.linalg.norm(y)
        if norm == 0:
            break
        x = y / norm
    if not converged:
        logger.warning(f"power iteration stopped after {iterations} iterations")
    return 1 - (2 * mu - 1), converged


def relaxation_time(gap: float) -> float:
    return math.inf if gap <= 0 else 1 / gap


def observable_values(k: Kernel, f: ObservableSpec) -> np.ndarray:
    """Values of an observable (registered name, callable or explicit list) on the kernel's states."""
    if isinstance(f, str):
        if f not in OBSERVABLES:
            raise ValueError(f"unknown observable {f!r}")
        f = OBSERVABLES[f]
    if callable(f):
        return np.array([float(f(s)) for s in k.space.states])
    values = np.asarray(f, dtype=float)
    if values.shape != (len(k),):
        raise ValueError(f"{values.shape[0]} values for {len(k)} states")
    return values


def scaled_radius(n: int) -> Callable[[AnyQuad], float]:
    """r(q) / n^(1/4)."""
    return lambda q: radius(q) / n ** 0.25


def scaled_height(n: int) -> Callable[[object], float]:
    """H(t) / n^(1/2)."""
    return lambda t: height(getattr(t, 'tree', t)) / n ** 0.5


def dirichlet_form(k: Kernel, f: ObservableSpec) -> float:
    """E(f, f) = 1/2 sum_x,y pi(x) p(x, y) (f(x) - f(y))^2 with pi uniform."""
    values = observable_values(k, f)
    P = k.to_sparse().tocoo()
    diff = values[P.row] - values[P.col]
    return float(0.5 * np.sum(P.data * diff * diff) / len(k))


def dirichlet_form_exact(k: Kernel, values: Sequence[Union[int, Fraction]]) -> Fraction:
    """Term-by-term exact Dirichlet form for rational-valued observables."""
    total = Fraction(0)
    for i, row in enumerate(k.rows):
        for j, p in row.items():
            d = Fraction(values[i]) - Fraction(values[j])
            total += p * d * d
    return total / (2 * len(k))


def variance(values: np.ndarray) -> float:
    return float(np.var(values))


def rayleigh(k: Kernel, f: ObservableSpec) -> float:
    """Dirichlet form over variance.

    Raises:
        ConstantObservable: if ``f`` is constant on the state space
    """
    values = observable_values(k, f)
    var = variance(values)
    if var <= TOLERANCE * max(1.0, float(np.max(np.abs(values)))) ** 2:
        raise ConstantObservable(f"observable is constant on the {k.name} space at n={k.n}")
    return dirichlet_form(k, values) / var


def _histogram(values: Iterable[int]) -> Dict[int, int]:
    return dict(sorted(Counter(values).items()))


@dataclass
class LawReport:
    """Histograms of the far-set size and of |B_2| - 1, around the origin and the point."""
    n: int
    origin_far: Dict[int, int]
    origin_ball: Dict[int, int]
    pointed_far: Dict[int, int]
    pointed_ball: Dict[int, int]

    @property
    def origin_equal(self) -> bool:
        return self.origin_far == self.origin_ball

    @property
    def pointed_equal(self) -> bool:
        return self.pointed_far == self.pointed_ball

    def to_dict(self) -> Dict[str, object]:
        return {
            'n': self.n,
            'origin': {'far_set': self.origin_far, 'ball2_minus_one': self.origin_ball,
                       'equal': self.origin_equal},
            'pointed': {'far_set': self.pointed_far, 'ball2_minus_one': self.pointed_ball,
                        'equal': self.pointed_equal},
        }


def law_identity_check(n: int, ceiling: int = DEFAULT_CEILING) -> LawReport:
    """Exact histograms over uniform Q_n (origin) and uniform pointed maps (marked vertex)."""
    quads = quad_space(n, ceiling)
    pointed = pointed_space(n, ceiling)
    report = LawReport(
        n,
        _histogram(far_set_size(q) for q in quads),
        _histogram(ball_size(q, 2) - 1 for q in quads),
        _histogram(far_set_size(p, p.point) for p in pointed),
        _histogram(ball_size(p, 2, p.point) - 1 for p in pointed),
    )
    logger.info(f"law identity n={n}: origin {report.origin_equal}, pointed {report.pointed_equal}")
    return report


def scaling_slopes(ns: Sequence[int], gaps: Sequence[float]) -> Dict[str, object]:
    """Log-log slopes of gap against n: least squares overall and between neighbours."""
    if len(ns) != len(gaps) or len(ns) < 2:
        raise ValueError("need at least two (n, gap) pairs")
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(gaps, dtype=float))
    overall = float(np.polyfit(x, y, 1)[0])
    pairs = [{'from': int(a), 'to': int(b), 'slope': float((y[i + 1] - y[i]) / (x[i + 1] - x[i]))}
             for i, (a, b) in enumerate(zip(ns, ns[1:]))]
    return {'overall': overall, 'pairs': pairs}


def canonical_path_bound(k: Kernel, flows: Iterable[Tuple[Sequence[str], Fraction]]) -> Fraction:
    """Max over transitions (z, w) of sum(weight * |path|) / (pi(z) p(z, w)).

    ``flows`` holds state-code paths with weight pi(x) pi(y) P(path); holding steps
    are dropped. The reciprocal is a lower bound on the gap.
    """
    load: Dict[Tuple[int, int], Fraction] = {}
    index = k.space.index
    for codes, weight in flows:
        steps = [(index[a], index[b]) for a, b in zip(codes, codes[1:]) if a != b]
        for step in steps:
            load[step] = load.get(step, Fraction(0)) + weight * len(steps)
    pi = Fraction(1, len(k))
    worst = Fraction(0)
    for (i, j), total in load.items():
        p = k.rows[i].get(j)
        if p is None:
            raise ValueError(f"path step {k.space.codes[i]} -> {k.space.codes[j]} is not a {k.name} move")
        worst = max(worst, total / (pi * p))
    return worst


def replant_flows(n: int, r: int) -> Iterator[Tuple[List[str], Fraction]]:
    """The canonical replanting path measures between every pair of trees, uniformly weighted."""
    weights = hierarchy(n, r)
    fibers = fiber_map(n, r)
    trees = list(enumerate_trees(n, r))
    pair = Fraction(1, len(trees) ** 2)
    for x in trees:
        for y in trees:
            for path, m in gamma_paths(x, y, weights, fibers):
                yield [t.code for t in path.trees], pair * m


def _xtilde_paths(n: int) -> Iterator[Tuple[FlipPath, Fraction]]:
    sign = Fraction(1, n + 1)
    per_move = Fraction(1, 5 * (n + 1))
    for t in enumerate_trees(n, 3):
        reversal = path_root_reversal(t)
        yield reversal, sign
        yield reversal.reversed(), sign
        for eps in (-1, 1):
            for v in leaves(t):
                for d in Direction:
                    if leaf_translate(t, v, d) != t:
                        yield path_leaf_translation(t, v, d, eps), per_move
                for x in (1, 2, 3):
                    if x != t.colour[v]:
                        yield path_colour_change(t, v, x, eps), per_move


@dataclass
class ComparisonConstant:
    """Load of the signed-tree chain routed through flip transitions of the pointed chain."""
    n: int
    constant: Fraction
    longest: int
    most_paths: int

    def to_dict(self) -> Dict[str, object]:
        return {'n': self.n, 'constant': float(self.constant), 'longest': self.longest,
                'most_paths': self.most_paths}


def comparison_constant(n: int) -> ComparisonConstant:
    """A = max over (q, e, s) of sum p~(x, y) |path| / (1 / 6n) over the paths using it.

    Both chains are uniform on sets of the same size, so the stationary weights
    cancel and the pointed flip gap is at least the signed-tree gap divided by A.
    """
    load: Dict[Tuple[str, int, int], Fraction] = {}
    uses: Counter = Counter()
    longest = 0
    for path, p in _xtilde_paths(n):
        longest = max(longest, len(path))
        for q, move in path.steps():
            key = transition_key(q, move)
            load[key] = load.get(key, Fraction(0)) + p * len(path)
            uses[key] += 1
    worst = max(load.values(), default=Fraction(0))
    return ComparisonConstant(n, 6 * n * worst, longest, max(uses.values(), default=0))


@dataclass
class Inequality:
    """One finite-n inequality ``lhs <= rhs``."""
    name: str
    lhs: float
    rhs: float
    note: str = "finite-n form"

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + AGREEMENT

    def to_dict(self) -> Dict[str, object]:
        return {'name': self.name, 'lhs': self.lhs, 'rhs': self.rhs,
                'holds': self.holds, 'note': self.note}


@dataclass
class InequalityReport:
    n: int
    values: Dict[str, float] = field(default_factory=dict)
    checks: List[Inequality] = field(default_factory=list)
    comparison: Optional[ComparisonConstant] = None

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.checks)

    def failed(self) -> List[Inequality]:
        return [c for c in self.checks if not c.holds]

    def to_dict(self) -> Dict[str, object]:
        out = {'n': self.n, 'ok': self.ok, 'values': dict(self.values),
               'checks': [c.to_dict() for c in self.checks]}
        if self.comparison is not None:
            out['comparison'] = self.comparison.to_dict()
        return out


def verify_inequalities(n: int, ceiling: int = DEFAULT_CEILING, threads: int = 1,
                        canonical_r: int = 1, compare: bool = True) -> InequalityReport:
    """Compute the gaps at size n and check every comparison between them.

    With ``compare=False`` the flip-path comparison is skipped; it audits every
    flip path at size n.

    Checks: pointed gap <= flip gap; Rayleigh bounds for radius and height; the
    sign-split lower bound on the signed-tree gap; the flip-path comparison with
    measured loads; the canonical replanting path bound.
    """
    report = InequalityReport(n)
    flip_k = kernel_flip(n, False, ceiling, threads)
    pointed_k = kernel_flip(n, True, ceiling, threads)
    trans_k = kernel_leaf_translation(n, 3, ceiling, threads)
    xt_k = kernel_xtilde(n, ceiling, threads)
    replant_k = kernel_leaf_replanting(n, 3, ceiling, threads)

    nu = spectral_gap(flip_k, ceiling)
    nu_pointed = spectral_gap(pointed_k, ceiling)
    gamma_x = spectral_gap(trans_k, ceiling)
    gamma_tilde = spectral_gap(xt_k, ceiling)
    gamma_y = spectral_gap(replant_k, ceiling)
    report.values.update({'nu': nu, 'nu_pointed': nu_pointed, 'gamma_x': gamma_x,
                          'gamma_tilde': gamma_tilde, 'gamma_y': gamma_y})

    checks = report.checks
    checks.append(Inequality("pointed gap <= flip gap", nu_pointed, nu))
    checks.append(Inequality("flip gap <= Rayleigh(radius)", nu, rayleigh(flip_k, scaled_radius(n)),
                             note="variational"))
    checks.append(Inequality("pointed gap <= Rayleigh(radius)", nu_pointed,
                             rayleigh(pointed_k, scaled_radius(n)), note="variational"))
    if n >= 2:
        checks.append(Inequality("translation gap <= Rayleigh(height)", gamma_x,
                                 rayleigh(trans_k, scaled_height(n)), note="variational"))
    split = min(n * gamma_x / (n + 1), 2 / (n + 1))
    checks.append(Inequality("sign-split bound <= signed-tree gap", split, gamma_tilde))

    if compare:
        comparison = comparison_constant(n)
        report.comparison = comparison
        checks.append(Inequality("signed-tree gap <= A * pointed gap", gamma_tilde,
                                 float(comparison.constant) * nu_pointed))

    if n >= 2:
        canon_k = kernel_leaf_replanting(n, canonical_r, ceiling, threads)
        bound = canonical_path_bound(canon_k, replant_flows(n, canonical_r))
        gamma_canon = spectral_gap(canon_k, ceiling)
        report.values['gamma_y_canonical_r'] = gamma_canon
        checks.append(Inequality("1 / canonical path bound <= replanting gap",
                                 float(1 / bound), gamma_canon))

    for c in report.failed():
        logger.error(f"n={n}: {c.name} fails ({c.lhs:.12g} > {c.rhs:.12g})")
    return report
