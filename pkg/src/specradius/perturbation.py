"""Structured perturbation sets.

A :class:`PerturbationStructure` fixes which entries of the system matrix an
adversary may modify (the edge set) and optional per-edge saturation bounds.
Edges use 1-based ``(i, j)`` indices, matching the JSON file format; the
``row_index``/``col_index`` properties give 0-based arrays for numpy indexing.

Absent bounds are stored as ``None``. The ``lower_array``/``upper_array``
views substitute ``-inf``/``+inf`` so comparisons vectorize, but no bound value
ever enters an arithmetic expression unless it is finite.
"""
from dataclasses import dataclass, field
from functools import cached_property
import math

import numpy as np

from .errors import InvalidStructure, ShapeMismatch

__all__ = [
    "PerturbationStructure",
    "SparsePerturbation",
    "validate",
    "project",
    "sample",
]


def _frozen(seq, dtype=float):
    a = np.array(seq, dtype=dtype)
    a.setflags(write=False)
    return a


def _as_bound_list(bound, m, name):
    if bound is None or np.isscalar(bound):
        return (None if bound is None else float(bound),) * m
    out = tuple(None if b is None else float(b) for b in bound)
    if len(out) != m:
        raise InvalidStructure(f"{name} has {len(out)} entries for {m} edges")
    return out


@dataclass(frozen=True)
class PerturbationStructure:
    """Sparsity pattern plus saturation bounds of the admissible perturbations.

    ``lower``/``upper`` accept ``None`` (unbounded), a scalar applied to every
    edge, or one optional value per edge. The structure validates itself on
    construction, so every instance satisfies the invariants checked by
    :func:`validate`.
    """

    n: int
    edges: tuple
    lower: tuple = None
    upper: tuple = None

    def __post_init__(self):
        edges = tuple((int(i), int(j)) for i, j in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "lower", _as_bound_list(self.lower, len(edges), "lower"))
        object.__setattr__(self, "upper", _as_bound_list(self.upper, len(edges), "upper"))
        validate(self)

    @classmethod
    def rows(cls, n, row_indices, lower=None, upper=None):
        """Every entry of the given (1-based) rows is perturbable."""
        edges = [(i, j) for i in row_indices for j in range(1, n + 1)]
        return cls(n, edges, lower, upper)

    @classmethod
    def from_mask(cls, mask, lower=None, upper=None):
        """Edges at the nonzero entries of a boolean ``n x n`` mask (row-major order)."""
        mask = np.asarray(mask, dtype=bool)
        ii, jj = np.nonzero(mask)
        return cls(mask.shape[0], list(zip(ii + 1, jj + 1)), lower, upper)

    def __len__(self):
        return len(self.edges)

    @cached_property
    def row_index(self):
        return _frozen([i - 1 for i, _ in self.edges], dtype=int)

    @cached_property
    def col_index(self):
        return _frozen([j - 1 for _, j in self.edges], dtype=int)

    @cached_property
    def lower_array(self):
        return _frozen([-np.inf if b is None else b for b in self.lower])

    @cached_property
    def upper_array(self):
        return _frozen([np.inf if b is None else b for b in self.upper])

    def gather(self, M):
        """Entries of a dense ``n x n`` matrix on the edge set, in edge order."""
        M = np.asarray(M)
        if M.shape != (self.n, self.n):
            raise ShapeMismatch(f"expected ({self.n}, {self.n}), got {M.shape}")
        return M[self.row_index, self.col_index]

    @cached_property
    def _block(self):
        r, ri = np.unique(self.row_index, return_inverse=True)
        c, ci = np.unique(self.col_index, return_inverse=True)
        return (len(r), len(c)), ri, ci

    def compact(self, values):
        """Edge values packed into the dense block spanned by the touched rows and columns."""
        shape, ri, ci = self._block
        B = np.zeros(shape)
        B[ri, ci] = values
        return B

    def clip(self, values):
        return np.clip(values, self.lower_array, self.upper_array)

    def restrict(self, keep):
        """Sub-structure keeping the edges whose positions in ``keep`` are true."""
        keep = np.asarray(keep, dtype=bool)
        idx = np.flatnonzero(keep)
        return PerturbationStructure(
            self.n,
            [self.edges[k] for k in idx],
            [self.lower[k] for k in idx],
            [self.upper[k] for k in idx],
        )


def validate(structure):
    """Raise :class:`InvalidStructure` naming the first violated invariant."""
    n = structure.n
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidStructure(f"dimension must be a positive integer, got {n!r}")
    seen = set()
    for k, (i, j) in enumerate(structure.edges):
        if not (1 <= i <= n and 1 <= j <= n):
            raise InvalidStructure(f"edge #{k} ({i}, {j}) outside [1, {n}]")
        if (i, j) in seen:
            raise InvalidStructure(f"duplicate edge ({i}, {j})")
        seen.add((i, j))
        lo, hi = structure.lower[k], structure.upper[k]
        if lo is not None and not (math.isfinite(lo) and lo <= 0):
            raise InvalidStructure(f"edge ({i}, {j}): lower bound {lo} must be finite and <= 0")
        if hi is not None and not (math.isfinite(hi) and hi >= 0):
            raise InvalidStructure(f"edge ({i}, {j}): upper bound {hi} must be finite and >= 0")


_BOUND_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class SparsePerturbation:
    """Real perturbation supported on a structure's edge set."""

    structure: PerturbationStructure
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.shape != (len(self.structure),):
            raise ShapeMismatch(f"{values.size} values for {len(self.structure)} edges")
        if not np.all(np.isfinite(values)):
            raise ValueError("perturbation values must be finite")
        lo = self.structure.lower_array
        hi = self.structure.upper_array
        slack = _BOUND_SLACK * (1.0 + np.abs(values))
        if np.any(values < lo - slack) or np.any(values > hi + slack):
            raise ValueError("perturbation violates saturation bounds")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, structure):
        return cls(structure, np.zeros(len(structure)))

    @classmethod
    def from_dense(cls, structure, D):
        return cls(structure, structure.gather(D))

    @property
    def norm(self):
        """Frobenius norm (the perturbation's energy)."""
        return float(np.linalg.norm(self.values))

    def to_dense(self):
        D = np.zeros((self.structure.n, self.structure.n))
        D[self.structure.row_index, self.structure.col_index] = self.values
        return D

    def compact(self):
        """Smallest dense block holding every edge; same singular values as :meth:`to_dense`."""
        return self.structure.compact(self.values)

    def is_feasible(self, epsilon, tol=1e-12):
        s = self.structure
        v = self.values
        return bool(
            np.all(v >= s.lower_array - tol)
            and np.all(v <= s.upper_array + tol)
            and self.norm <= epsilon + tol
        )

    def with_values(self, values):
        return SparsePerturbation(self.structure, values)

    def __sub__(self, other):
        if other.structure is not self.structure and other.structure != self.structure:
            raise ShapeMismatch("perturbations live on different structures")
        return self.values - other.values


def _ball(v, epsilon):
    nv = np.linalg.norm(v)
    return v if nv <= epsilon else v * (epsilon / nv)


def project(delta, epsilon, tol=1e-10, max_sweeps=500):
    """Euclidean projection onto ``H ∩ B_epsilon`` by Dykstra's alternating projections.

    The box (saturation bounds) and the Frobenius ball are projected onto in
    turn, with Dykstra's correction terms, until an iterate moves by less than
    ``tol`` in a sweep. The result is clipped and rescaled once more so it is
    exactly feasible.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    s = delta.structure
    v = np.asarray(delta.values, dtype=float)
    lo, hi = s.lower_array, s.upper_array
    x = v.copy()
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    for _ in range(max_sweeps):
        yb = np.clip(x + p, lo, hi)
        p = x + p - yb
        xn = _ball(yb + q, epsilon)
        q = yb + q - xn
        done = np.linalg.norm(xn - x) <= tol and np.linalg.norm(xn - yb) <= tol
        x = xn
        if done:
            break
    x = _ball(np.clip(x, lo, hi), epsilon)
    return SparsePerturbation(s, x)


def sample(structure, epsilon, seed):
    """Random member of ``H ∩ B_epsilon``, deterministic in ``seed``.

    Each edge is drawn uniformly from its bound interval intersected with
    ``[-epsilon, epsilon]``; if the draw leaves the ball it is rescaled onto the
    sphere and clipped once more. The rescaling biases the law toward the
    sphere, which is acceptable for pseudospectrum estimates.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    rng = np.random.default_rng(seed)
    a = np.maximum(structure.lower_array, -epsilon)
    b = np.minimum(structure.upper_array, epsilon)
    v = rng.uniform(a, b)
    nv = np.linalg.norm(v)
    if nv > epsilon:
        v = structure.clip(v * (epsilon / nv))
    return SparsePerturbation(structure, v)
