"""Structured stability radius by a floored Newton iteration on the energy.

The structured pseudospectral abscissa ``eps -> alpha(eps)`` is non-decreasing
and its zero crossing is the structured stability radius. Where the rightmost
eigenvalue of the worst-case matrix is simple,

    d alpha / d eps = eps / ((y^* x) * theta)

so a Newton step reads ``eps - (y^*x) theta alpha / eps``; the step is floored at
``zeta * eps`` to keep the energy positive.
"""
from dataclasses import dataclass, field
from typing import NamedTuple
import warnings

import numpy as np

from .abscissa import best_of_starts, multistart_guesses, worst_case_perturbation
from .errors import DegenerateObjective, MaxIterations, SpecRadiusError
from .inner import solve_inner
from .linalg import DEFAULT_TIE_TOL, spectral_abscissa
from .perturbation import SparsePerturbation, project, sample

__all__ = [
    "RadiusStep",
    "RadiusResult",
    "abscissa_derivative",
    "stability_radius",
    "INIT_POLICIES",
]


INIT_POLICIES = ("zero", "random", "warm", "multistart")


class RadiusStep(NamedTuple):
    eps: float
    alpha: float
    derivative: float


@dataclass(eq=False)
class RadiusResult:
    radius: float
    trace: list
    final: object
    converged: bool
    restarts_used: int = 0
    warnings: list = field(default_factory=list)

    @property
    def iterations(self):
        return len(self.trace)


def abscissa_derivative(epsilon, triple, theta):
    """Slope of the structured pseudospectral abscissa in the energy, ``eps / (y^*x * theta)``.

    ``theta = inf`` (every edge saturated) gives slope zero.
    """
    if not triple.inner > 0:
        raise DegenerateObjective(f"y^*x must be positive, got {triple.inner}")
    if not theta > 0:
        raise DegenerateObjective(f"theta must be positive, got {theta}")
    return epsilon / (triple.inner * theta)


def _newton_slope(res):
    # Smallest slope over all rightmost eigenvalues (the minimum-norm
    # subgradient when several eigenvalues share the abscissa).
    slopes = [abscissa_derivative(res.epsilon, res.triple, res.theta)]
    for t in res.triples[1:]:
        try:
            sol = solve_inner(res.epsilon, t.direction, res.delta.structure)
            slopes.append(abscissa_derivative(res.epsilon, t, sol.theta))
        except SpecRadiusError:
            continue
    return min(slopes)


def _starts(policy, structure, eps, prev, n_restarts, seed):
    if policy == "zero" or (policy == "warm" and prev is None):
        return [SparsePerturbation.zeros(structure)], 0
    if policy == "warm":
        return [project(prev, eps)], 0
    if policy == "random":
        return [sample(structure, eps, seed)], 1
    return multistart_guesses(structure, eps, n_restarts, seed), n_restarts


def stability_radius(
    A,
    structure,
    eps0=1.0,
    tol_delta=1e-3,
    tol_alpha=1e-3,
    zeta=0.1,
    init_policy="multistart",
    l_max=100,
    n_restarts=10,
    seed=0,
    tie_tol=DEFAULT_TIE_TOL,
    k_max=1000,
    norm="spectral",
):
    """Smallest structured perturbation energy that makes ``A`` non-Hurwitz.

    Parameters
    ----------
    A : (n, n) array_like
        Real system matrix. A non-Hurwitz matrix has radius 0.
    structure : PerturbationStructure
    eps0 : float
        Initial energy.
    tol_delta, tol_alpha : float
        Inner fixed-point tolerance and the stopping tolerance on ``|alpha|``.
    zeta : float in (0, 1)
        Each new energy is at least ``zeta`` times the previous one.
    init_policy : {"multistart", "zero", "random", "warm"}
        Initial guess for the worst-case iteration at each energy: the best
        of the zero matrix and ``n_restarts`` random samples (default), the
        zero matrix alone, one seeded random sample, or the projection of the
        previous worst case onto the new ball. The iteration only finds local
        maximizers, so single-start policies can overestimate the radius.
    l_max : int
        Cap on Newton iterations.

    Returns
    -------
    RadiusResult
    """
    if not 0 < zeta < 1:
        raise ValueError("zeta must lie in (0, 1)")
    if eps0 <= 0:
        raise ValueError("eps0 must be positive")
    if tol_alpha <= 0 or tol_delta <= 0:
        raise ValueError("tolerances must be positive")
    if init_policy not in INIT_POLICIES:
        raise ValueError(f"unknown init policy {init_policy!r}")
    A = np.asarray(A, dtype=float)
    kw = dict(tol_delta=tol_delta, k_max=k_max, tie_tol=tie_tol, norm=norm)

    if spectral_abscissa(A) >= 0:
        final = worst_case_perturbation(A, 0.0, structure, **kw)
        return RadiusResult(0.0, [], final, True)

    eps = float(eps0)
    trace, notes = [], []
    prev = None
    restarts = 0
    below, above = None, None  # largest eps with alpha < 0, smallest with alpha > 0
    res = None
    converged = False
    for l in range(l_max):
        starts, used = _starts(init_policy, structure, eps, prev, n_restarts, seed + l * max(n_restarts, 1))
        restarts += used
        res = best_of_starts(A, eps, structure, starts, **kw)
        notes.extend(res.warnings)
        alpha = res.alpha
        slope = 0.0 if res.fully_saturated else _newton_slope(res)
        trace.append(RadiusStep(eps, alpha, slope))
        if abs(alpha) <= tol_alpha:
            converged = True
            break
        if alpha < 0:
            below = eps if below is None else max(below, eps)
        else:
            above = eps if above is None else min(above, eps)
        prev = res.delta
        if slope > 0:
            eps = max(eps - alpha / slope, zeta * eps)
        else:
            eps = _saturated_step(eps, alpha, res.delta.norm, below, above, zeta)

    if not converged:
        msg = f"radius iteration did not converge in {l_max} steps"
        notes.append(msg)
        warnings.warn(msg, MaxIterations, stacklevel=2)
    radius = eps
    if res.fully_saturated and alpha >= -tol_alpha:
        # the worst case spends less than the budget; its own energy already suffices
        radius = min(eps, res.delta.norm)
    return RadiusResult(radius, trace, res, converged, restarts, notes)


def _saturated_step(eps, alpha, used, below, above, zeta):
    # Every edge sits at a bound so alpha is locally flat in eps and the
    # Newton slope vanishes; fall back to bisection on the sign bracket.
    if alpha > 0:
        hi = min(eps, used)
        lo = below if below is not None else zeta * hi
        return max(0.5 * (lo + hi), zeta * eps)
    if above is not None:
        return 0.5 * (eps + above)
    return eps / zeta


def radius_upper_check(A, structure, radius, factor=1.05, **kwargs):
    """Abscissa of the worst case found slightly beyond ``radius``; positive when the radius is tight."""
    return worst_case_perturbation(A, radius * factor, structure, **kwargs).alpha
