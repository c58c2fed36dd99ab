"""Dense symmetric linear-algebra kernels used by every sampler.

All functions are pure; they never mutate their inputs. Matrices are plain
float64 ndarrays; :class:`SpdMatrix` is the validating wrapper used at API
boundaries where positive definiteness is part of the contract.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, IndexOutOfRange, NotPositiveDefinite

SYMMETRY_RTOL = 1e-12


def symmetrize(a):
    """Return (A + A') / 2 as a fresh float64 array.

    Accumulated round-off in cross-product matrices such as
    (R - Z D')' (R - Z D') breaks Cholesky at large sample sizes unless the
    result is re-symmetrized.
    """
    a = np.asarray(a, dtype=np.float64)
    return (a + a.T) / 2.0


class SpdMatrix:
    """Symmetric positive definite matrix, validated on construction.

    Symmetry is enforced by averaging with the transpose; positive
    definiteness is checked by attempting a Cholesky factorization.

    Raises
    ------
    NotPositiveDefinite
        If the (symmetrized) entries admit no Cholesky factor.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        a = np.asarray(entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise NotPositiveDefinite(f"expected a square matrix, got shape {a.shape}")
        sym = symmetrize(a)
        scale = np.abs(a).max()
        if scale > 0 and np.abs(a - a.T).max() > SYMMETRY_RTOL * scale:
            # Tolerated asymmetry is round-off only; anything larger means a
            # broken caller, not noise.
            raise NotPositiveDefinite("matrix is not symmetric")
        cholesky(sym)
        self.entries = sym

    @property
    def dim(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is not None:
            return self.entries.astype(dtype)
        return self.entries


def _as_matrix(a):
    if isinstance(a, SpdMatrix):
        return a.entries
    return np.asarray(a, dtype=np.float64)


def cholesky(a):
    """Lower-triangular L with L L' = A.

    Raises :class:`NotPositiveDefinite` when a pivot fails, which signals a
    broken sampler invariant upstream rather than a condition to recover
    from.
    """
    a = _as_matrix(a)
    try:
        return scipy.linalg.cholesky(a, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as err:
        raise NotPositiveDefinite(str(err)) from err


def spd_solve(a, b):
    """Solve A x = b for symmetric positive definite A."""
    a = _as_matrix(a)
    b = np.asarray(b, dtype=np.float64)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    lower = cholesky(a)
    return scipy.linalg.cho_solve((lower, True), b, check_finite=False)


def spd_inverse(a):
    """Inverse of a symmetric positive definite matrix, symmetrized."""
    a = _as_matrix(a)
    inv = scipy.linalg.cho_solve((cholesky(a), True), np.eye(a.shape[0]),
                             check_finite=False)
    return symmetrize(inv)


def spd_logdet(a):
    """log det A computed in log space as 2 sum(log diag L).

    Direct determinants overflow for exponents like |A|^(T/2) at large T.
    """
    return 2.0 * np.sum(np.log(np.diag(cholesky(a))))


@dataclass
class BlockPartition:
    """A symmetric matrix pair split at one pivot index.

    The pivot row/column is moved to the front by a symmetric permutation;
    ``scalar_diag``/``off_col``/``rest`` are the (1,1) entry, the remaining
    first column, and the trailing block of the permuted first matrix, and
    the ``s_*`` fields are the same split of the second matrix. ``order``
    records the permutation (pivot first, remaining indices in original
    order).
    """

    pivot: int
    scalar_diag: float
    off_col: np.ndarray
    rest: np.ndarray
    s_scalar: float
    s_col: np.ndarray
    s_rest: np.ndarray
    order: np.ndarray

    def reassemble(self):
        """Rebuild the two source matrices exactly (pure index shuffling)."""
        omega = reassemble_at(self.scalar_diag, self.off_col, self.rest, self.pivot)
        s = reassemble_at(self.s_scalar, self.s_col, self.s_rest, self.pivot)
        return omega, s


def partition_at(omega, s, j):
    """Split ``omega`` and ``s`` at pivot ``j``.

    Raises :class:`IndexOutOfRange` for an invalid pivot. Round-tripping
    through :meth:`BlockPartition.reassemble` is exact because only index
    permutations are involved.
    """
    omega = _as_matrix(omega)
    s = _as_matrix(s)
    n = omega.shape[0]
    if s.shape != omega.shape:
        raise IndexOutOfRange(f"matrix shapes differ: {omega.shape} vs {s.shape}")
    if not 0 <= j < n:
        raise IndexOutOfRange(f"pivot {j} outside [0, {n})")
    order = np.concatenate(([j], np.delete(np.arange(n), j)))
    po = omega[np.ix_(order, order)]
    ps = s[np.ix_(order, order)]
    return BlockPartition(
        pivot=j,
        scalar_diag=po[0, 0],
        off_col=po[1:, 0].copy(),
        rest=po[1:, 1:].copy(),
        s_scalar=ps[0, 0],
        s_col=ps[1:, 0].copy(),
        s_rest=ps[1:, 1:].copy(),
        order=order,
    )


def reassemble_at(scalar_diag, off_col, rest, j):
    """Inverse of :func:`partition_at` for one matrix."""
    off_col = np.asarray(off_col, dtype=np.float64)
    rest = np.asarray(rest, dtype=np.float64)
    n = off_col.shape[0] + 1
    if not 0 <= j < n:
        raise IndexOutOfRange(f"pivot {j} outside [0, {n})")
    permuted = np.empty((n, n))
    permuted[0, 0] = scalar_diag
    permuted[1:, 0] = off_col
    permuted[0, 1:] = off_col
    permuted[1:, 1:] = rest
    order = np.concatenate(([j], np.delete(np.arange(n), j)))
    inverse = np.empty(n, dtype=np.intp)
    inverse[order] = np.arange(n)
    return permuted[np.ix_(inverse, inverse)]
