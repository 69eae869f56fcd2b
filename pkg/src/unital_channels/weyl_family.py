"""Heisenberg-Weyl Kraus families parametrised by a ``d x d`` coefficient matrix.

The rank-``d`` family has Kraus operators ``K_i = sum_j alpha[i, j] X^i Z^j``
with ``X^i Z^j = sum_k w^(kj) |k+i><k|`` and ``w = exp(2 pi i / d)``; all index
sums are taken modulo ``d``.  For qutrits a rank-4 family splits the two
off-diagonal operators into their strictly-lower, corner and strictly-upper
parts.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .channel import KrausChannel
from .exceptions import ConvergenceError, GaugeDeficientWarning, ValidationError
from .linalg import DEFAULT_POLICY, as_matrix, numerical_rank

__all__ = [
    "CoefficientMatrix",
    "GaugeConvention",
    "ConditionReport",
    "omega_power",
    "phase_table",
    "fourier_rows",
    "weyl",
    "build_rank_d",
    "build_rank4_qutrit",
    "condition_report",
    "gauge_fix",
    "constraint_values",
    "constraint_jacobian",
    "sample_feasible",
    "tangent_dimension",
]

_ZERO_ENTRY = 1e-14


@dataclass(frozen=True)
class GaugeConvention:
    fixed_column: int = 0


@dataclass(frozen=True, eq=False)
class CoefficientMatrix:
    """Coefficients ``alpha[i, j]`` of ``X^i Z^j`` in the i-th Kraus operator.

    ``gauge`` records the convention applied by :func:`gauge_fix`, and
    ``deficient_rows`` lists rows whose phase could not be fixed.
    """

    alpha: np.ndarray
    gauge: GaugeConvention = None
    deficient_rows: tuple = field(default=())

    def __post_init__(self):
        alpha = as_matrix(self.alpha, "alpha").copy()
        if alpha.shape[0] != alpha.shape[1] or alpha.shape[0] < 2:
            raise ValidationError(f"alpha must be d x d with d >= 2, got {alpha.shape}")
        alpha.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)

    @property
    def d(self):
        return self.alpha.shape[0]

    def __repr__(self):
        return f"CoefficientMatrix(d={self.d})"


def _coefficients(c):
    return c if isinstance(c, CoefficientMatrix) else CoefficientMatrix(c)


def omega_power(d, n):
    """``exp(2 pi i n / d)`` with ``n`` reduced modulo ``d`` first."""
    return np.exp(2j * np.pi * (np.asarray(n) % d) / d)


def phase_table(d):
    """``T[k, j] = w^(k j)``."""
    k = np.arange(d)
    return omega_power(d, np.outer(k, k))


def fourier_rows(alpha):
    """``F[i, k] = sum_j alpha[i, j] w^(k j)``, the diagonal of ``Z``-part of ``K_i``."""
    alpha = np.asarray(alpha)
    return alpha @ phase_table(alpha.shape[0]).T


def weyl(d, i, j):
    """``X^i Z^j``: entry ``w^(k j)`` at row ``k + i`` (mod d), column ``k``."""
    if d < 2:
        raise ValidationError(f"dimension must be >= 2, got {d}")
    if not (0 <= i < d and 0 <= j < d):
        raise ValidationError(f"indices ({i}, {j}) out of range for d={d}")
    out = np.zeros((d, d), dtype=np.complex128)
    k = np.arange(d)
    out[(k + i) % d, k] = omega_power(d, k * j)
    return out


def build_rank_d(c):
    c = _coefficients(c)
    d = c.d
    return KrausChannel(
        tuple(sum(c.alpha[i, j] * weyl(d, i, j) for j in range(d)) for i in range(d))
    )


def build_rank4_qutrit(c):
    """Four Kraus operators obtained by splitting the qutrit shift operators.

    ``K_0`` is the diagonal operator of row 0, ``K_1`` the strictly-lower part
    of the row-1 operator, ``K_2`` the two wrap-around corners of the row-1
    and row-2 operators, and ``K_3`` the strictly-upper part of the row-2
    operator.
    """
    c = _coefficients(c)
    if c.d != 3:
        raise ValidationError(f"the rank-4 family is defined for d=3 only, got d={c.d}")
    k0, k1, k2 = build_rank_d(c).kraus
    return KrausChannel(
        (
            k0,
            np.tril(k1, -1),
            np.triu(k1, 1) + np.tril(k2, -1),
            np.triu(k2, 1),
        )
    )


@dataclass(frozen=True)
class ConditionReport:
    """Residuals of the trace-preserving and unital coefficient conditions.

    ``tp_residuals[l-1]`` is ``sum_i beta[i, l]`` and ``unital_residuals[l-1]``
    is ``sum_i beta[i, l] w^(-i l)`` for ``l = 1..d-1``, where
    ``beta[i, l] = sum_j alpha[i, j+l] conj(alpha[i, j])``.  For ``d = 3``,
    ``chained_residuals`` holds ``s_0 - w s_1`` and ``s_0 - w^2 s_2`` with
    ``s_i = beta[i, 1]``.
    """

    norm_residual: float
    tp_residuals: tuple
    unital_residuals: tuple
    beta: np.ndarray
    chained_residuals: tuple = None

    @property
    def max_residual(self):
        return max(
            [self.norm_residual]
            + [abs(z) for z in self.tp_residuals]
            + [abs(z) for z in self.unital_residuals]
        )

    def trace_preserving(self, tol=1e-10):
        return self.norm_residual < tol and all(abs(z) < tol for z in self.tp_residuals)

    def unital(self, tol=1e-10):
        return self.norm_residual < tol and all(abs(z) < tol for z in self.unital_residuals)

    def feasible(self, tol=1e-10):
        return self.max_residual < tol


def _beta(alpha):
    d = alpha.shape[0]
    return np.stack(
        [np.sum(np.roll(alpha, -l, axis=1) * alpha.conj(), axis=1) for l in range(d)], axis=1
    )


def condition_report(c):
    c = _coefficients(c)
    d, alpha = c.d, c.alpha
    beta = _beta(alpha)
    i = np.arange(d)
    tp = tuple(complex(beta[:, l].sum()) for l in range(1, d))
    un = tuple(complex(np.sum(beta[:, l] * omega_power(d, -i * l))) for l in range(1, d))
    chained = None
    if d == 3:
        s = beta[:, 1]
        w = omega_power(3, 1)
        chained = (complex(s[0] - w * s[1]), complex(s[0] - w * w * s[2]))
    return ConditionReport(
        norm_residual=float(abs(beta[:, 0].real.sum() - 1.0)),
        tp_residuals=tp,
        unital_residuals=un,
        beta=beta,
        chained_residuals=chained,
    )


def gauge_fix(c, g=GaugeConvention()):
    """Rotate each row so that column ``g.fixed_column`` is real non-negative.

    Rows whose reference entry vanishes are left unrotated, reported in
    ``deficient_rows`` and signalled with :class:`GaugeDeficientWarning`.
    """
    c = _coefficients(c)
    if not 0 <= g.fixed_column < c.d:
        raise ValidationError(f"fixed_column {g.fixed_column} out of range for d={c.d}")
    alpha = c.alpha.copy()
    col = alpha[:, g.fixed_column]
    mags = np.abs(col)
    deficient = tuple(int(i) for i in np.nonzero(mags <= _ZERO_ENTRY)[0])
    for i in range(c.d):
        if i in deficient:
            continue
        alpha[i] *= np.conj(col[i]) / mags[i]
        alpha[i, g.fixed_column] = mags[i]
    if deficient:
        warnings.warn(
            f"rows {deficient} have a zero entry in column {g.fixed_column}; "
            "their phase is left unfixed",
            GaugeDeficientWarning,
            stacklevel=2,
        )
    return CoefficientMatrix(alpha, gauge=g, deficient_rows=deficient)


def _offsets(d):
    """``(l, complex?)`` for the independent offsets; ``l`` and ``d - l`` are conjugate."""
    out = [(l, True) for l in range(1, (d - 1) // 2 + 1)]
    if d % 2 == 0:
        out.append((d // 2, False))
    return out


def _bilinear(alpha, l, weights):
    """Value and real-coordinate gradient of ``sum_ij w_i alpha[i,j+l] conj(alpha[i,j])``."""
    value = np.sum(weights[:, None] * np.roll(alpha, -l, axis=1) * alpha.conj())
    p = weights[:, None] * np.roll(alpha, l, axis=1).conj()
    q = weights[:, None] * np.roll(alpha, -l, axis=1)
    d_re = (p + q).ravel()
    d_im = (1j * (p - q)).ravel()
    return value, np.concatenate([d_re, d_im])


def _system(alpha, include_norm):
    d = alpha.shape[0]
    ones = np.ones(d)
    i = np.arange(d)
    values, rows = [], []
    if include_norm:
        values.append(float(np.sum(np.abs(alpha) ** 2)) - 1.0)
        rows.append(2.0 * np.concatenate([alpha.real.ravel(), alpha.imag.ravel()]))
    for l, is_complex in _offsets(d):
        for weights in (ones, omega_power(d, -i * l)):
            v, grad = _bilinear(alpha, l, weights)
            values.append(v.real)
            rows.append(grad.real)
            if is_complex:
                values.append(v.imag)
                rows.append(grad.imag)
    return np.array(values), np.array(rows)


def constraint_values(alpha, include_norm=True):
    """Independent real constraint components; zero exactly on feasible points."""
    return _system(np.asarray(alpha, dtype=np.complex128), include_norm)[0]


def constraint_jacobian(alpha, include_norm=True):
    """Jacobian of :func:`constraint_values` over ``(Re alpha, Im alpha)`` (row-major)."""
    return _system(np.asarray(alpha, dtype=np.complex128), include_norm)[1]


def _unpack(x, d):
    n = d * d
    return (x[:n] + 1j * x[n:]).reshape(d, d)


def _newton(alpha, max_iter, target):
    d = alpha.shape[0]
    alpha = alpha / np.linalg.norm(alpha)
    f, jac = _system(alpha, include_norm=False)
    res = np.linalg.norm(f)
    for _ in range(max_iter):
        if res < target:
            break
        step = np.linalg.lstsq(jac, -f, rcond=None)[0]
        x = np.concatenate([alpha.real.ravel(), alpha.imag.ravel()])
        t = 1.0
        while t > 1e-6:
            trial = _unpack(x + t * step, d)
            trial /= np.linalg.norm(trial)
            f_new, jac_new = _system(trial, include_norm=False)
            res_new = np.linalg.norm(f_new)
            if res_new < res:
                alpha, f, jac, res = trial, f_new, jac_new, res_new
                break
            t *= 0.5
        else:
            break
    return alpha, res


def sample_feasible(d, seed, max_iter=50, restarts=10, target=1e-13):
    """Draw a coefficient matrix satisfying every TP and unital condition.

    A complex Gaussian start is normalised and projected onto the constraint
    set by damped Gauss-Newton (minimum-norm steps), renormalising after each
    step.  Deterministic for a fixed ``seed``.
    """
    if d < 2:
        raise ValidationError(f"dimension must be >= 2, got {d}")
    rng = np.random.default_rng(seed)
    best = np.inf
    for _ in range(restarts):
        start = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        alpha, res = _newton(start, max_iter, target)
        best = min(best, res)
        if res < target and condition_report(alpha).feasible(1e-10):
            return CoefficientMatrix(alpha)
    raise ConvergenceError(
        f"no feasible point after {restarts} restarts (best residual {best:.3e})", best
    )


def tangent_dimension(c, policy=DEFAULT_POLICY):
    """Dimension of the feasible set modulo row phases at ``c``.

    ``2 d^2 - rank(J) - d``, with ``J`` the Jacobian of the ``2(d-1)+1``
    real constraints and ``d`` the dimension of the ``U(1)^d`` row-phase orbit.
    """
    c = _coefficients(c)
    if not condition_report(c).feasible(1e-8):
        raise ValidationError("tangent_dimension needs a feasible coefficient matrix")
    jac = constraint_jacobian(c.alpha)
    return 2 * c.d**2 - numerical_rank(jac, policy) - c.d
