"""Linear maximization over a structured, saturated energy ball.

Solves

    maximize <Delta, M>  subject to  Delta in H ∩ B_eps

where ``H`` is a :class:`~specradius.perturbation.PerturbationStructure`. At the
optimum every edge is either pinned to one of its bounds or proportional to
``m_ij`` with a common ratio ``theta``. :func:`solve_inner` finds the pinned
(saturated) edges incrementally; :func:`solve_inner_oracle` enumerates all
saturation patterns and is used to cross-check it.
"""
from dataclasses import dataclass
import itertools
import math

import numpy as np

from .errors import DegenerateObjective, FullySaturated, InfeasibleEnergy, TooLarge
from .perturbation import SparsePerturbation

__all__ = [
    "SaturationSets",
    "InnerSolution",
    "OracleSolution",
    "theta",
    "solve_inner",
    "solve_inner_oracle",
    "inner_derivative",
]

MAX_VERTEX_EDGES = 20
MAX_ORACLE_EDGES = 12


@dataclass(frozen=True, eq=False)
class SaturationSets:
    """Boolean masks (in edge order) of the edges pinned at their upper/lower bound."""

    upper: np.ndarray
    lower: np.ndarray

    @classmethod
    def empty(cls, m):
        return cls(np.zeros(m, dtype=bool), np.zeros(m, dtype=bool))

    @classmethod
    def from_edges(cls, structure, upper=(), lower=()):
        up = np.array([e in set(map(tuple, upper)) for e in structure.edges], dtype=bool)
        lo = np.array([e in set(map(tuple, lower)) for e in structure.edges], dtype=bool)
        return cls(up, lo)

    @property
    def free(self):
        return ~(self.upper | self.lower)

    def upper_edges(self, structure):
        return {structure.edges[k] for k in np.flatnonzero(self.upper)}

    def lower_edges(self, structure):
        return {structure.edges[k] for k in np.flatnonzero(self.lower)}


@dataclass(frozen=True, eq=False)
class InnerSolution:
    """Maximizer of the structured linear problem.

    ``theta`` is ``inf`` when every edge is saturated (the optimal value no
    longer grows with the energy budget). ``theta_history`` holds the ratio
    computed at each sweep of the incremental method.
    """

    delta: SparsePerturbation
    theta: float
    sets: SaturationSets
    objective: float
    theta_history: tuple = ()
    fully_saturated: bool = False


@dataclass(frozen=True, eq=False)
class OracleSolution:
    delta: SparsePerturbation
    objective: float
    theta: float
    fully_saturated: bool
    ties: tuple = ()


def _edge_values(M, structure):
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        if M.shape != (len(structure),):
            raise ValueError(f"expected {len(structure)} edge values, got {M.shape}")
        return M
    return structure.gather(M)


def _saturated_energy(structure, upper, lower):
    hi = structure.upper_array
    lo = structure.lower_array
    return float(np.sum(hi[upper] ** 2) + np.sum(lo[lower] ** 2))


def theta(epsilon, M, sets, structure):
    """Ratio between free optimal entries and the matching entries of ``M``.

    ``sqrt((eps^2 - energy on saturated edges) / sum of m_ij^2 over free edges)``
    """
    m = _edge_values(M, structure)
    free = sets.free
    den = float(np.sum(m[free] ** 2))
    if den == 0.0:
        raise DegenerateObjective("objective is zero on every unsaturated edge")
    num = epsilon**2 - _saturated_energy(structure, sets.upper, sets.lower)
    if num < 0:
        # rounding can push an exactly-exhausted budget slightly negative
        if num < -1e-13 * max(epsilon**2, 1.0):
            raise InfeasibleEnergy(f"saturated edges need {epsilon**2 - num:.6g} > eps^2")
        num = 0.0
    return math.sqrt(num / den)


def _vertex_candidates(structure):
    opts = []
    for lo, hi in zip(structure.lower, structure.upper):
        o = [b for b in (lo, hi) if b is not None]
        opts.append(sorted(set(o)))
    return opts


def _best_vertex(epsilon, m, structure):
    # Exhaustive search over bound vertices inside the ball; first maximum in
    # lexicographic (product) order wins.
    opts = _vertex_candidates(structure)
    if any(len(o) == 0 for o in opts):
        return None
    best, best_val = None, -np.inf
    eps2 = epsilon**2 * (1 + 1e-12)
    for combo in itertools.product(*opts):
        v = np.array(combo)
        if v @ v > eps2:
            continue
        val = float(v @ m)
        if val > best_val:
            best, best_val = v, val
    return best


def solve_inner(epsilon, M, structure, fallback=True):
    """Maximize ``<Delta, M>`` over ``H ∩ B_eps`` by growing the saturation sets.

    Starting from empty sets, ``theta`` is evaluated and every free edge with
    ``m_ij * theta >= upper`` (resp. ``<= lower``) is pinned to that bound; the
    sweep repeats until nothing changes. Free edges then take ``m_ij * theta``.

    Parameters
    ----------
    epsilon : float
        Energy budget (Frobenius norm), positive.
    M : array_like
        Dense ``n x n`` objective matrix or its values on the edge set.
    structure : PerturbationStructure
    fallback : bool
        When every edge ends up saturated and there are at most 20 edges,
        return the best bound vertex inside the ball instead of raising.

    Raises
    ------
    FullySaturated
        Every edge is pinned and the fallback is disabled or too expensive.
    DegenerateObjective
        ``M`` vanishes on all free edges.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    m = _edge_values(M, structure)
    hi = structure.upper_array
    lo = structure.lower_array
    up = np.zeros(len(m), dtype=bool)
    dn = np.zeros(len(m), dtype=bool)
    history = []
    while True:
        free = ~(up | dn)
        if not free.any():
            return _fully_saturated(epsilon, m, structure, up, dn, history, fallback)
        th = theta(epsilon, m, SaturationSets(up, dn), structure)
        history.append(th)
        mt = m * th
        new_up = free & (mt >= hi)
        new_dn = free & ~new_up & (mt <= lo)
        if not (new_up.any() or new_dn.any()):
            break
        up |= new_up
        dn |= new_dn
    values = np.where(up, hi, np.where(dn, lo, m * th))
    delta = SparsePerturbation(structure, values)
    return InnerSolution(
        delta, th, SaturationSets(up, dn), float(values @ m), tuple(history), False
    )


def _fully_saturated(epsilon, m, structure, up, dn, history, fallback):
    if not fallback or len(m) > MAX_VERTEX_EDGES:
        raise FullySaturated("the optimizer is fully saturated")
    v = _best_vertex(epsilon, m, structure)
    if v is None:
        raise FullySaturated("the optimizer is fully saturated and no bound vertex exists")
    hi = structure.upper_array
    lo = structure.lower_array
    at_hi = v == hi
    sets = SaturationSets(at_hi, (v == lo) & ~at_hi)
    return InnerSolution(
        SparsePerturbation(structure, v), math.inf, sets, float(v @ m), tuple(history), True
    )


def solve_inner_oracle(epsilon, M, structure, slack=1e-12):
    """Brute-force maximizer: try every saturation pattern and keep the best.

    For each assignment of edges to {free, upper, lower} the closed-form
    ``theta`` is evaluated, the candidate built, and kept only if it is
    feasible and consistent with its pattern (free entries strictly inside
    their bounds, saturated entries at or beyond them, up to ``slack``).
    Fully saturated bound vertices inside the ball are also candidates.
    Distinct candidates attaining the same optimal value are reported in
    ``ties``.
    """
    if len(structure) > MAX_ORACLE_EDGES:
        raise TooLarge(f"{len(structure)} edges exceeds the enumeration limit {MAX_ORACLE_EDGES}")
    m = _edge_values(M, structure)
    hi = structure.upper_array
    lo = structure.lower_array
    k = len(m)
    choices = []
    for e in range(k):
        c = [0]
        if structure.upper[e] is not None:
            c.append(1)
        if structure.lower[e] is not None:
            c.append(2)
        choices.append(c)

    cands = []
    for pattern in itertools.product(*choices):
        p = np.array(pattern, dtype=int)
        up = p == 1
        dn = p == 2
        free = p == 0
        sat_vals = np.where(up, hi, np.where(dn, lo, 0.0))
        used = float(sat_vals @ sat_vals)
        if used > epsilon**2 * (1 + slack) + slack:
            continue
        den = float(np.sum(m[free] ** 2))
        if not free.any() or den == 0.0:
            # no ratio to speak of: free entries carry no objective weight
            cands.append((float(sat_vals @ m), sat_vals, math.inf, True))
            continue
        th = math.sqrt(max(epsilon**2 - used, 0.0) / den)
        mt = m * th
        ok = (
            np.all(mt[free] > lo[free] - slack)
            and np.all(mt[free] < hi[free] + slack)
            and np.all(mt[up] >= hi[up] - slack)
            and np.all(mt[dn] <= lo[dn] + slack)
        )
        if not ok:
            continue
        v = np.where(free, mt, sat_vals)
        cands.append((float(v @ m), v, th, False))

    best_val = max(c[0] for c in cands)
    tol = 1e-12 * max(1.0, abs(best_val))
    winners = [c for c in cands if c[0] >= best_val - tol]
    # prefer a non-degenerate (proportional) optimizer when one exists
    winners.sort(key=lambda c: c[3])
    val, v, th, sat = winners[0]
    ties = []
    for c in winners[1:]:
        if np.linalg.norm(c[1] - v) > 1e-9 and not any(
            np.linalg.norm(c[1] - t) <= 1e-9 for t in ties
        ):
            ties.append(c[1])
    return OracleSolution(
        SparsePerturbation(structure, structure.clip(v)),
        val,
        th,
        sat,
        tuple(SparsePerturbation(structure, structure.clip(t)) for t in ties),
    )


def inner_derivative(epsilon, theta):
    """Derivative of the optimal value with respect to the energy budget, ``eps / theta``."""
    if not theta > 0:
        raise DegenerateObjective(f"theta must be positive, got {theta}")
    return epsilon / theta
