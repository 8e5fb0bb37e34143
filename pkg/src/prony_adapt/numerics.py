"""Dense linear-algebra and polynomial kernels used by the Prony pipeline.

Matrices and vectors are plain :class:`numpy.ndarray` objects. Every routine
is a pure function of its inputs.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .errors import DegenerateInput, InvalidPolynomial, OrderOutOfRange, TLSNonExistence

__all__ = [
    "LeastSquaresSolution",
    "build_toeplitz",
    "solve_least_squares",
    "solve_total_least_squares",
    "polynomial_roots",
    "companion_matrix",
    "sample_std_complex",
]

REALMAX = np.finfo(float).max

# |v2| below this (relative to the unit-norm singular vector) means no generic TLS solution.
TLS_TOL = 1e-12


@dataclass(frozen=True)
class LeastSquaresSolution:
    """Result of :func:`solve_least_squares`.

    Attributes
    ----------
    x : ndarray
        Minimum-norm least-squares solution.
    rank : int
        Numerical rank of the system matrix.
    rank_deficient : bool
        ``True`` when ``rank < A.shape[1]``.
    singular_values : ndarray
    """

    x: np.ndarray
    rank: int
    rank_deficient: bool
    singular_values: np.ndarray


def build_toeplitz(x, p):
    """Lag matrix of the linear-prediction system.

    Returns the ``(N - p, p)`` Toeplitz matrix with ``T[i, j] = x[p - 1 + i - j]``:
    its first column is ``x[p-1:N-1]`` and its first row is ``x[p-1], ..., x[0]``.

    Parameters
    ----------
    x : array_like, shape (N,)
    p : int
        Model order, ``1 <= p <= N - 1``.
    """
    x = np.asarray(x)
    n = x.shape[0]
    if not 1 <= p <= n - 1:
        raise OrderOutOfRange(f"model order p={p} outside [1, {n - 1}] for N={n}")
    return la.toeplitz(x[p - 1 : n - 1], x[p - 1 :: -1])


def solve_least_squares(A, b):
    """Minimum-norm solution of ``min ||A x - b||_2``.

    Uses the SVD-based LAPACK driver, so rank-deficient systems return the
    minimum-norm solution; the rank is reported instead of raising.
    """
    A = np.asarray(A)
    b = np.asarray(b)
    if A.ndim != 2 or A.shape[0] != b.shape[0]:
        raise ValueError(f"incompatible shapes {A.shape} and {b.shape}")
    if A.shape[0] < A.shape[1]:
        raise ValueError(f"underdetermined system {A.shape}")
    x, _, rank, sv = np.linalg.lstsq(A, b, rcond=None)
    rank = int(rank)
    return LeastSquaresSolution(x=x, rank=rank, rank_deficient=rank < A.shape[1], singular_values=sv)


def solve_total_least_squares(A, b):
    """Classical total least-squares solution of ``A x ~ b``.

    Takes the right singular vector ``v`` of ``[A | b]`` belonging to the
    smallest singular value, splits it as ``[v1; v2]`` with ``v2`` scalar and
    returns ``-v1 / v2``.

    Raises
    ------
    DegenerateInput
        ``A`` or ``b`` contains NaN or Inf.
    TLSNonExistence
        ``|v2|`` is numerically zero (non-generic problem).
    """
    A = np.asarray(A)
    b = np.asarray(b)
    if A.ndim != 2 or A.shape[0] != b.shape[0]:
        raise ValueError(f"incompatible shapes {A.shape} and {b.shape}")
    m, n = A.shape
    if m < n + 1:
        raise ValueError(f"TLS needs at least {n + 1} rows, got {m}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise DegenerateInput("non-finite entries in TLS input")
    C = np.column_stack([A, b])
    _, _, vh = np.linalg.svd(C, full_matrices=False)
    # rows of vh are conjugated right singular vectors
    v = vh[-1].conj()
    v1, v2 = v[:n], v[n]
    if abs(v2) < TLS_TOL:
        raise TLSNonExistence(f"smallest singular vector has |v2|={abs(v2):.3e}; TLS solution does not exist")
    return -v1 / v2


def companion_matrix(coeffs):
    """Companion matrix of a monic-normalised polynomial (descending powers)."""
    c = np.asarray(coeffs)
    c = c[1:] / c[0]
    n = c.shape[0]
    M = np.zeros((n, n), dtype=np.result_type(c, float))
    M[0, :] = -c
    if n > 1:
        M[np.arange(1, n), np.arange(n - 1)] = 1
    return M


def polynomial_roots(coeffs):
    """Roots of ``sum(coeffs[k] * z**(p - k))`` as companion-matrix eigenvalues.

    Leading zeros are stripped; trailing zeros contribute exact zero roots.
    The eigen solver balances the companion matrix before the QR iteration.
    """
    c = np.atleast_1d(np.asarray(coeffs))
    if c.ndim != 1:
        raise InvalidPolynomial("coefficients must be one-dimensional")
    if not np.all(np.isfinite(c)):
        raise InvalidPolynomial("coefficients must be finite")
    nz = np.flatnonzero(c)
    if nz.size == 0:
        raise InvalidPolynomial("all-zero coefficient vector")
    c = c[nz[0] : nz[-1] + 1]
    n_zero_roots = len(coeffs) - 1 - nz[-1]
    if c.shape[0] + n_zero_roots < 2:
        raise InvalidPolynomial("polynomial of degree 0 has no roots")
    if c.shape[0] > 1:
        r = la.eigvals(companion_matrix(c), overwrite_a=True, check_finite=False)
    else:
        r = np.empty(0, dtype=complex)
    return np.concatenate([r.astype(complex), np.zeros(n_zero_roots, dtype=complex)])


def sample_std_complex(v):
    """Sample standard deviation with modulus deviations, ``(n - 1)`` convention.

    Returns 0 for a single value. The result is real even for complex input.
    """
    v = np.atleast_1d(np.asarray(v))
    n = v.shape[0]
    if n == 0:
        raise ValueError("standard deviation of an empty vector")
    if n == 1:
        return 0.0
    d = v - v.mean()
    return float(np.sqrt(np.sum(np.abs(d) ** 2) / (n - 1)))
