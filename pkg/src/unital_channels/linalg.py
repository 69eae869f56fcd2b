"""Dense complex-matrix primitives and numerical rank decisions.

Matrices are plain two-dimensional ``numpy`` arrays of dtype ``complex128``;
:func:`as_matrix` is the single validation gate used by the rest of the
package.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, ValidationError

__all__ = [
    "RankPolicy",
    "DEFAULT_POLICY",
    "as_matrix",
    "dagger",
    "matmul",
    "kron",
    "trace",
    "direct_sum",
    "frobenius",
    "svd_values",
    "numerical_rank",
    "gram_matrix",
    "linear_independence",
    "linear_independence_stacked",
]


@dataclass(frozen=True)
class RankPolicy:
    """Threshold used to decide which singular values count as non-zero.

    A singular value ``s`` is kept when
    ``s > max(relative_tol * s_max, absolute_floor)``.
    """

    relative_tol: float = 1e-9
    absolute_floor: float = 1e-12

    def __post_init__(self):
        if not 0 < self.relative_tol < 1:
            raise ValidationError(f"relative_tol must lie in (0, 1), got {self.relative_tol}")
        if not self.absolute_floor > 0:
            raise ValidationError(f"absolute_floor must be positive, got {self.absolute_floor}")

    def threshold(self, s_max):
        return max(self.relative_tol * s_max, self.absolute_floor)

    def to_dict(self):
        return {"relative_tol": self.relative_tol, "absolute_floor": self.absolute_floor}


DEFAULT_POLICY = RankPolicy()


def as_matrix(m, name="matrix"):
    """Return ``m`` as a finite, non-empty 2-D complex128 array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionError(f"{name} is empty (shape {arr.shape})")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def dagger(m):
    return as_matrix(m).conj().T


def matmul(a, b):
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b):
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def trace(m):
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"trace needs a square matrix, got {m.shape}")
    return complex(np.trace(m))


def direct_sum(a, b):
    """Block-diagonal matrix ``[[a, 0], [0, b]]``."""
    a, b = as_matrix(a, "a"), as_matrix(b, "b")
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.complex128)
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0] :, a.shape[1] :] = b
    return out


def frobenius(m):
    return float(np.linalg.norm(as_matrix(m)))


def svd_values(m):
    """Singular values of ``m`` in descending order (``min(rows, cols)`` of them)."""
    return np.linalg.svd(as_matrix(m), compute_uv=False)


def _count_above(values, policy):
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0
    return int(np.sum(values > policy.threshold(float(values.max()))))


def numerical_rank(m, policy=DEFAULT_POLICY):
    return _count_above(svd_values(m), policy)


def _checked_set(matrices):
    mats = [as_matrix(a, f"set[{k}]") for k, a in enumerate(matrices)]
    if not mats:
        raise ValidationError("matrix set is empty")
    shape = mats[0].shape
    for k, a in enumerate(mats):
        if a.shape != shape:
            raise DimensionError(f"set[{k}] has shape {a.shape}, expected {shape}")
    return mats


def gram_matrix(matrices):
    """Hermitian Gram matrix ``G[a, b] = trace(A_a^dagger A_b)``."""
    mats = _checked_set(matrices)
    vecs = np.array([a.ravel() for a in mats])
    return vecs.conj() @ vecs.T


def linear_independence(matrices, policy=DEFAULT_POLICY):
    """Decide linear independence of a set of equally-shaped matrices.

    Returns ``(independent, smallest_gram_eigenvalue)``. The smallest Gram
    eigenvalue doubles as a conditioning witness: it is the squared distance
    scale at which the set degenerates.
    """
    gram = gram_matrix(matrices)
    eig = np.linalg.eigvalsh(gram)
    # eigvalsh on a PSD matrix: |eig| are its singular values
    rank = _count_above(np.abs(eig), policy)
    return rank == gram.shape[0], float(eig[0])


def linear_independence_stacked(matrices, policy=DEFAULT_POLICY):
    """Independence by the rank of the stacked vectorisations.

    Same verdict as :func:`linear_independence`; kept as its cross-check.
    """
    mats = _checked_set(matrices)
    stacked = np.array([a.ravel() for a in mats])
    return numerical_rank(stacked, policy) == len(mats)
