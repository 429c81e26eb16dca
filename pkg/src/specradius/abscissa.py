"""Worst-case structured perturbation and structured pseudospectral abscissa.

:func:`worst_case_perturbation` runs the fixed-point iteration

    Delta_{k+1} = argmax { <Delta, Re(y_k x_k^*)> : Delta in H ∩ B_eps }

where ``x_k, y_k`` are RP-compatible eigenvectors of a rightmost eigenvalue of
``A + Delta_k``. A fixed point satisfies the first-order optimality condition
for maximizing the spectral abscissa over ``H ∩ B_eps``; convergence is local.
"""
from dataclasses import dataclass, field
import logging
import math
import warnings
from typing import NamedTuple

import numpy as np

from .errors import MaxIterations, SingularShift, SpecRadiusError
from .inner import solve_inner
from .linalg import DEFAULT_TIE_TOL, rightmost_eigentriple, singular_values, spectral_norm
from .perturbation import SparsePerturbation, project, sample

__all__ = [
    "TraceStep",
    "AbscissaResult",
    "SweepResult",
    "worst_case_perturbation",
    "best_of_starts",
    "multistart_guesses",
    "fixed_point_gap",
    "convergence_rate",
    "abscissa_sweep",
]

log = logging.getLogger(__name__)


class TraceStep(NamedTuple):
    step: float  # ||Delta_{k+1} - Delta_k|| in the stopping norm
    alpha: float  # spectral abscissa of A + Delta_{k+1}


@dataclass(eq=False)
class AbscissaResult:
    """Output of :func:`worst_case_perturbation`.

    ``triple`` is the rightmost eigentriple of ``A + delta`` used downstream;
    ``triples`` lists every rightmost eigenvalue within the tie tolerance.
    """

    delta: SparsePerturbation
    alpha: float
    triple: object
    theta: float
    iterations: int
    trace: list
    converged: bool
    epsilon: float
    triples: list = field(default_factory=list)
    fully_saturated: bool = False
    warnings: list = field(default_factory=list)


def _diff_norm(a, b, norm):
    diff = a.values - b.values
    if norm == "fro":
        return float(np.linalg.norm(diff))
    return spectral_norm(a.structure.compact(diff))


def worst_case_perturbation(
    A,
    epsilon,
    structure,
    delta0=None,
    tol_delta=1e-3,
    k_max=1000,
    tie_tol=DEFAULT_TIE_TOL,
    norm="spectral",
):
    """Locally worst-case perturbation of energy ``epsilon`` and the resulting abscissa.

    Parameters
    ----------
    A : (n, n) array_like
        Real system matrix.
    epsilon : float
        Perturbation energy (Frobenius norm budget), non-negative.
    structure : PerturbationStructure
    delta0 : SparsePerturbation, optional
        Initial guess; projected onto ``H ∩ B_eps`` when infeasible. Zero by default.
    tol_delta : float
        Stop once consecutive iterates differ by at most this much.
    k_max : int
        Iteration cap. When reached, the iterate with the largest abscissa is
        returned with ``converged=False``.
    norm : {"spectral", "fro"}
        Norm used in the stopping test. The Frobenius norm is an upper bound
        on the spectral norm and cheaper for large edge sets.

    Returns
    -------
    AbscissaResult
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    if A.shape[0] != structure.n:
        raise ValueError(f"A is {A.shape[0]}x{A.shape[0]} but the structure has n={structure.n}")
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    if tol_delta <= 0:
        raise ValueError("tol_delta must be positive")
    if norm not in ("spectral", "fro"):
        raise ValueError(f"unknown norm {norm!r}")

    delta = SparsePerturbation.zeros(structure) if delta0 is None else delta0
    if epsilon == 0:
        delta = SparsePerturbation.zeros(structure)
    elif not delta.is_feasible(epsilon):
        delta = project(delta, epsilon)

    triples = rightmost_eigentriple(A + delta.to_dense(), tie_tol)
    if epsilon == 0:
        t = triples[0]
        return AbscissaResult(delta, t.lam.real, t, 0.0, 0, [], True, 0.0, triples)

    trace = []
    notes = []
    theta = math.nan
    saturated = False
    best = None
    alpha = triples[0].lam.real
    converged = False
    k = 0
    for k in range(1, k_max + 1):
        sol = solve_inner(epsilon, triples[0].direction, structure)
        step = _diff_norm(sol.delta, delta, norm)
        new_triples = rightmost_eigentriple(A + sol.delta.to_dense(), tie_tol)
        new_alpha = new_triples[0].lam.real
        trace.append(TraceStep(step, new_alpha))
        if new_alpha < alpha - 10 * tol_delta:
            msg = f"abscissa dropped from {alpha:.6g} to {new_alpha:.6g} at iteration {k}"
            notes.append(msg)
            log.debug(msg)
        delta, triples, alpha = sol.delta, new_triples, new_alpha
        theta, saturated = sol.theta, sol.fully_saturated
        if best is None or alpha > best[1]:
            best = (delta, alpha, triples, theta, saturated)
        if step <= tol_delta:
            converged = True
            break

    if not converged:
        msg = f"no convergence after {k_max} iterations (eps={epsilon:.6g})"
        notes.append(msg)
        warnings.warn(msg, MaxIterations, stacklevel=2)
        delta, alpha, triples, theta, saturated = best

    return AbscissaResult(
        delta=delta,
        alpha=alpha,
        triple=triples[0],
        theta=theta,
        iterations=k,
        trace=trace,
        converged=converged,
        epsilon=float(epsilon),
        triples=triples,
        fully_saturated=saturated,
        warnings=notes,
    )


def best_of_starts(A, epsilon, structure, starts, **kwargs):
    """Run :func:`worst_case_perturbation` from each start and keep the largest abscissa.

    Ties keep the earliest start, so the reduction is deterministic. A start
    whose run fails is skipped; the first failure is re-raised only if every
    start fails.
    """
    best, first_error = None, None
    for d0 in starts:
        try:
            res = worst_case_perturbation(A, epsilon, structure, delta0=d0, **kwargs)
        except SpecRadiusError as exc:
            first_error = first_error or exc
            continue
        if best is None or res.alpha > best.alpha:
            best = res
    if best is None:
        raise first_error
    return best


def multistart_guesses(structure, epsilon, n_random, seed):
    """The zero matrix followed by ``n_random`` seeded samples of ``H ∩ B_eps``."""
    starts = [SparsePerturbation.zeros(structure)]
    starts += [sample(structure, epsilon, seed + j) for j in range(n_random)]
    return starts


def fixed_point_gap(result, norm="spectral"):
    """Distance between ``result.delta`` and one more fixed-point step from it.

    A converged run is a first-order stationary point when this is at most the
    stopping tolerance.
    """
    if result.epsilon == 0:
        return 0.0
    sol = solve_inner(result.epsilon, result.triple.direction, result.delta.structure)
    return _diff_norm(sol.delta, result.delta, norm)


def convergence_rate(A, triple, epsilon, ell=1.0):
    """Local contraction factor estimate ``4 sqrt(n) ell eps / (sigma_{n-1}(A - lam I) (y^*x)^2)``.

    Values below one indicate the regime where linear convergence of the
    fixed-point iteration is guaranteed. ``ell`` is the (unknown) Lipschitz
    constant of the inner maximizer and must be supplied by the caller;
    ``convergence_rate(..., ell=1)`` is the rate per unit ``ell``.
    """
    if ell <= 0:
        raise ValueError("ell must be positive")
    A = np.asarray(A)
    n = A.shape[0]
    if n < 2:
        raise SingularShift("second smallest singular value undefined for n < 2")
    sv = singular_values(A - triple.lam * np.eye(n))
    sigma = float(sv[-2])
    if sigma <= 1e-14:
        raise SingularShift(f"sigma_(n-1)(A - lambda I) = {sigma:.3e}")
    return 4.0 * math.sqrt(n) * ell * epsilon / (sigma * triple.inner**2)


@dataclass(eq=False)
class SweepResult:
    eps: np.ndarray
    alpha: np.ndarray
    results: list
    errors: list
    dips: list  # grid indices where alpha decreased relative to the previous point

    def as_pairs(self):
        return list(zip(self.eps.tolist(), self.alpha.tolist()))


def abscissa_sweep(
    A,
    structure,
    eps_grid,
    restart_policy="warm",
    tol_delta=1e-3,
    k_max=1000,
    n_restarts=10,
    seed=0,
    **kwargs,
):
    """Structured pseudospectral abscissa over a grid of energies.

    ``restart_policy`` chooses the initial guess at each grid point:
    ``"warm"`` projects the previous worst case onto the new ball, ``"zero"``
    starts from the zero matrix, and ``"multistart"`` keeps the best of the
    zero matrix and ``n_restarts`` seeded random samples. Failures at a grid
    point are recorded in ``errors`` and leave ``alpha`` as NaN there.
    """
    eps_grid = np.asarray(eps_grid, dtype=float)
    if np.any(np.diff(eps_grid) < 0):
        raise ValueError("eps_grid must be sorted ascending")
    if restart_policy not in ("warm", "zero", "multistart"):
        raise ValueError(f"unknown restart policy {restart_policy!r}")
    alpha = np.full(len(eps_grid), np.nan)
    results, errors, dips = [], [], []
    prev = None
    for idx, eps in enumerate(eps_grid):
        try:
            if restart_policy == "multistart" and eps > 0:
                starts = multistart_guesses(structure, eps, n_restarts, seed + idx * n_restarts)
                res = best_of_starts(A, eps, structure, starts, tol_delta=tol_delta, k_max=k_max, **kwargs)
            else:
                d0 = None
                if restart_policy == "warm" and prev is not None:
                    d0 = project(prev, eps)
                res = worst_case_perturbation(
                    A, eps, structure, delta0=d0, tol_delta=tol_delta, k_max=k_max, **kwargs
                )
        except SpecRadiusError as exc:
            results.append(None)
            errors.append((float(eps), exc))
            continue
        results.append(res)
        alpha[idx] = res.alpha
        prev = res.delta
        if idx > 0 and not np.isnan(alpha[idx - 1]) and res.alpha < alpha[idx - 1] - 1e-9:
            dips.append(idx)
    return SweepResult(eps_grid, alpha, results, errors, dips)
