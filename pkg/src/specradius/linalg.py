"""Dense eigenvalue and norm helpers.

Everything here works on plain ``numpy`` arrays. Eigenvectors returned by
:func:`rightmost_eigentriple` are RP-compatible: both have unit 2-norm and the
inner product ``y^* x`` is real and positive.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import EigenFailure, IllConditionedEigenpair, ShapeMismatch

__all__ = [
    "EigenTriple",
    "rightmost_eigentriple",
    "rp_scale",
    "frobenius_inner",
    "singular_values",
    "spectral_norm",
    "spectral_abscissa",
    "DEFAULT_TIE_TOL",
]

DEFAULT_TIE_TOL = 1e-8
_ORTHO_TOL = 1e-12
_RESIDUAL_TOL = 1e-8
# eigenvalues closer than this (relative to ||M||_F) share one eigenspace
_CLUSTER_TOL = 1e-10


@dataclass(frozen=True)
class EigenTriple:
    """Eigenvalue with RP-compatible right (``x``) and left (``y``) eigenvectors."""

    lam: complex
    x: np.ndarray
    y: np.ndarray
    inner: float

    @property
    def direction(self):
        """The real matrix ``Re(y x^*)``: gradient of ``Re(lam)`` w.r.t. the matrix entries."""
        return np.real(np.outer(self.y, self.x.conj()))


def rp_scale(x, y):
    """Normalize an eigenvector pair so that ``|x| = |y| = 1`` and ``y^* x > 0``.

    The right vector is only normalized; the phase is absorbed into ``y``.

    Raises
    ------
    IllConditionedEigenpair
        If the normalized vectors are orthogonal to within 1e-12.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    nx = np.linalg.norm(x)
    ny = np.linalg.norm(y)
    if nx == 0 or ny == 0:
        raise IllConditionedEigenpair("zero eigenvector")
    x = x / nx
    y = y / ny
    s = np.vdot(y, x)
    if abs(s) < _ORTHO_TOL:
        raise IllConditionedEigenpair(f"|y*x| = {abs(s):.3e} below {_ORTHO_TOL}")
    y = y * (s / abs(s))
    return x, y


def _left_vector_in_eigenspace(x, left_block):
    # Best left vector for x within a (numerically) multiple eigenvalue's left
    # eigenspace: orthogonal projection of x onto that space.
    if left_block.shape[1] == 1:
        return left_block[:, 0]
    u, s, _ = np.linalg.svd(left_block, full_matrices=False)
    basis = u[:, s > s[0] * 1e-8]
    return basis @ (basis.conj().T @ x)


def rightmost_eigentriple(M, tie_tol=DEFAULT_TIE_TOL):
    """Rightmost eigenvalues of ``M`` with RP-compatible eigenvectors.

    Parameters
    ----------
    M : (n, n) array_like
        Square matrix with finite entries.
    tie_tol : float
        Eigenvalues whose real part is within ``tie_tol * max(1, max|lambda|)``
        of the spectral abscissa are all reported.

    Returns
    -------
    list of EigenTriple
        One entry per distinct rightmost eigenvalue, sorted by descending
        imaginary part. For real ``M`` only the member of each conjugate pair
        with ``Im >= 0`` is kept.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {M.shape}")
    if tie_tol < 0:
        raise ValueError("tie_tol must be non-negative")
    if not np.all(np.isfinite(M)):
        raise EigenFailure("matrix has non-finite entries")
    try:
        w, vl, vr = scipy.linalg.eig(M, left=True, right=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenFailure(str(exc)) from exc
    if not np.all(np.isfinite(w)):
        raise EigenFailure("eigensolver returned non-finite eigenvalues")

    is_real = not np.iscomplexobj(M)
    scale = max(1.0, float(np.max(np.abs(w))))
    norm_f = float(np.linalg.norm(M))
    alpha = float(np.max(w.real))
    candidates = np.flatnonzero(w.real >= alpha - tie_tol * scale)
    if is_real:
        candidates = candidates[w.imag[candidates] >= 0]

    cluster_tol = _CLUSTER_TOL * max(norm_f, np.finfo(float).tiny)
    res_tol = _RESIDUAL_TOL * max(norm_f, np.finfo(float).tiny)
    triples = []
    used = set()
    for k in candidates[np.argsort(-w.imag[candidates], kind="stable")]:
        if k in used:
            continue
        members = np.flatnonzero(np.abs(w - w[k]) <= cluster_tol)
        used.update(int(i) for i in members)
        lam = complex(w[k])
        x = vr[:, k]
        y = _left_vector_in_eigenspace(x / np.linalg.norm(x), vl[:, members])
        ny = np.linalg.norm(y)
        if ny == 0 or abs(np.vdot(y, x)) < _ORTHO_TOL * ny * np.linalg.norm(x):
            raise IllConditionedEigenpair(f"left/right eigenvectors of {lam} are orthogonal")
        x, y = rp_scale(x, y)
        rx = np.linalg.norm(M @ x - lam * x)
        ry = np.linalg.norm(y.conj() @ M - lam * y.conj())
        if rx > res_tol or ry > res_tol:
            raise EigenFailure(
                f"eigenpair residuals {rx:.2e}, {ry:.2e} exceed {res_tol:.2e} for lambda={lam}"
            )
        triples.append(EigenTriple(lam, x, y, float(np.vdot(y, x).real)))
    return triples


def spectral_abscissa(M):
    """Largest real part over the eigenvalues of ``M``."""
    try:
        return float(np.max(scipy.linalg.eigvals(M).real))
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenFailure(str(exc)) from exc


def frobenius_inner(A, B):
    """``<A, B> = Tr(A^* B)``; a float when both inputs are real."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise ShapeMismatch(f"shapes {A.shape} and {B.shape} differ")
    val = np.vdot(A, B)
    if not (np.iscomplexobj(A) or np.iscomplexobj(B)):
        return float(np.real(val))
    return complex(val)


def singular_values(M):
    """Full singular spectrum of ``M`` in descending order."""
    M = np.asarray(M)
    if not np.all(np.isfinite(M)):
        raise EigenFailure("matrix has non-finite entries")
    try:
        return scipy.linalg.svd(np.atleast_2d(M), compute_uv=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenFailure(str(exc)) from exc


def spectral_norm(M):
    M = np.atleast_2d(np.asarray(M))
    if M.size == 0:
        return 0.0
    return float(singular_values(M)[0])
