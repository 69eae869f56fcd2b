"""Extremality of unital channels in the convex set of UCPT maps.

Two routes are provided.  The general tests decide linear independence of
the Kraus products required by the Choi (UCP), dual Choi (CPT) and
Landau-Streater (UCPT) criteria.  The family tests exploit the offset
structure of the Heisenberg-Weyl families, where the products split into
mutually orthogonal blocks ``(M_l | N_l)`` that must each have full row rank.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .channel import verdict
from .exceptions import ValidationError
from .linalg import (
    DEFAULT_POLICY,
    direct_sum,
    gram_matrix,
    linear_independence,
    numerical_rank,
    svd_values,
)
from .weyl_family import (
    CoefficientMatrix,
    build_rank4_qutrit,
    condition_report,
    fourier_rows,
)

__all__ = [
    "Method",
    "Block",
    "ExtremalityReport",
    "landau_streater_set",
    "extreme_general",
    "extreme_ucp",
    "extreme_cpt",
    "build_M",
    "build_N",
    "build_M4",
    "build_N4",
    "extreme_family_rank_d",
    "extreme_family_rank4",
]

UCPT_TOLERANCE = 1e-9
FEASIBILITY_TOLERANCE = 1e-9


class Method(str, enum.Enum):
    GENERAL_LS = "general_LS"
    GENERAL_UCP = "general_UCP"
    GENERAL_CPT = "general_CPT"
    FAMILY_RANK_D = "family_rank_d"
    FAMILY_RANK4 = "family_rank4"


@dataclass(frozen=True, eq=False)
class Block:
    """One test matrix with its spectrum; ``mirrored`` marks blocks derived by conjugation."""

    label: object
    matrix: np.ndarray
    singular_values: np.ndarray
    rank: int
    full_rank: bool
    mirrored: bool = False


@dataclass(frozen=True, eq=False)
class ExtremalityReport:
    method: Method
    blocks: tuple
    verdict: bool
    policy: object
    witness: float = None
    note: str = None

    def block(self, label):
        for b in self.blocks:
            if b.label == label:
                return b
        raise KeyError(label)


def _block(label, matrix, policy, mirrored=False):
    sv = svd_values(matrix)
    rank = numerical_rank(matrix, policy)
    return Block(label, matrix, sv, rank, rank == matrix.shape[0], mirrored)


def _dependent_operators(ops, policy):
    """Indices of operators lying in the span of the ones before them."""
    dependent, kept = [], []
    for i, k in enumerate(ops):
        stacked = np.array([o.ravel() for o in kept + [k]])
        if numerical_rank(stacked, policy) == len(kept) + 1:
            kept.append(k)
        else:
            dependent.append(i)
    return dependent


def _require_minimal(ch, policy):
    independent, _ = linear_independence(ch.kraus, policy)
    if not independent:
        bad = _dependent_operators(list(ch.kraus), policy)
        raise ValidationError(
            f"Kraus set is not minimal: operators {bad} depend linearly on the others"
        )


def _require(ch, tp, unital):
    v = verdict(ch, UCPT_TOLERANCE)
    if tp and not v.trace_preserving:
        raise ValidationError(f"channel is not trace-preserving (residual {v.tp_residual:.3e})")
    if unital and not v.unital:
        raise ValidationError(f"channel is not unital (residual {v.unital_residual:.3e})")


def _gram_report(method, mats, policy, note=None):
    independent, lam_min = linear_independence(mats, policy)
    gram = gram_matrix(mats)
    spectrum = np.sort(np.abs(np.linalg.eigvalsh(gram)))[::-1]
    rank = numerical_rank(gram, policy)
    block = Block("gram", gram, spectrum, rank, independent)
    return ExtremalityReport(method, (block,), independent, policy, lam_min, note)


def landau_streater_set(ch):
    """The ``r^2`` matrices ``K_i^dagger K_j (+) K_i K_j^dagger``, ``i`` major."""
    return [
        direct_sum(ki.conj().T @ kj, ki @ kj.conj().T) for ki in ch.kraus for kj in ch.kraus
    ]


def extreme_general(ch, policy=DEFAULT_POLICY):
    _require(ch, tp=True, unital=True)
    _require_minimal(ch, policy)
    return _gram_report(Method.GENERAL_LS, landau_streater_set(ch), policy)


def _rank_bound_report(method, r, bound, policy):
    note = f"Kraus rank {r} exceeds {bound}: at most {bound ** 2} products can be independent"
    return ExtremalityReport(method, (), False, policy, None, note)


def extreme_ucp(ch, policy=DEFAULT_POLICY):
    _require(ch, tp=False, unital=True)
    _require_minimal(ch, policy)
    if len(ch) > ch.dim_out:
        return _rank_bound_report(Method.GENERAL_UCP, len(ch), ch.dim_out, policy)
    mats = [ki @ kj.conj().T for ki in ch.kraus for kj in ch.kraus]
    return _gram_report(Method.GENERAL_UCP, mats, policy)


def extreme_cpt(ch, policy=DEFAULT_POLICY):
    _require(ch, tp=True, unital=False)
    _require_minimal(ch, policy)
    if len(ch) > ch.dim_in:
        return _rank_bound_report(Method.GENERAL_CPT, len(ch), ch.dim_in, policy)
    mats = [ki.conj().T @ kj for ki in ch.kraus for kj in ch.kraus]
    return _gram_report(Method.GENERAL_CPT, mats, policy)


def _coefficients(c):
    return c if isinstance(c, CoefficientMatrix) else CoefficientMatrix(c)


def _check_offset(l, period):
    if not 0 <= l < period:
        raise ValidationError(f"offset l={l} out of range 0..{period - 1}")


def _require_feasible(c):
    rep = condition_report(c)
    if not rep.feasible(FEASIBILITY_TOLERANCE):
        raise ValidationError(
            f"coefficients violate the TP/unital conditions (max residual {rep.max_residual:.3e})"
        )


def build_M(c, l):
    """Coefficients of ``K_i^dagger K_{i+l}`` on ``|k><k-l|``: row ``i``, column ``k``."""
    c = _coefficients(c)
    d = c.d
    _check_offset(l, d)
    f = fourier_rows(c.alpha)
    i = np.arange(d)[:, None]
    k = np.arange(d)[None, :]
    return f[(i + l) % d, (k - l) % d] * f[i, k].conj()


def build_N(c, l):
    """Coefficients of ``K_{i+l} K_i^dagger`` on ``|k+l><k|``: row ``i``, column ``k``."""
    c = _coefficients(c)
    d = c.d
    _check_offset(l, d)
    f = fourier_rows(c.alpha)
    i = np.arange(d)[:, None]
    k = np.arange(d)[None, :]
    return f[(i + l) % d, (k - i) % d] * f[i, (k - i) % d].conj()


def _mirror_rank_d(m, n, l):
    """``(M_{d-l}, N_{d-l})`` from ``(M_l, N_l)``: conjugate, shift rows by ``l``."""
    m_mir = np.roll(np.roll(m, l, axis=0), -l, axis=1).conj()
    n_mir = np.roll(np.roll(n, l, axis=0), l, axis=1).conj()
    return m_mir, n_mir


def extreme_family_rank_d(c, policy=DEFAULT_POLICY):
    c = _coefficients(c)
    _require_feasible(c)
    d = c.d
    direct = {l: (build_M(c, l), build_N(c, l)) for l in range(d // 2 + 1)}
    blocks = []
    for l in range(d):
        if l in direct:
            m, n = direct[l]
            blocks.append(_block(l, np.hstack([m, n]), policy))
        else:
            m, n = _mirror_rank_d(*direct[d - l], d - l)
            blocks.append(_block(l, np.hstack([m, n]), policy, mirrored=True))
    return ExtremalityReport(
        Method.FAMILY_RANK_D, tuple(blocks), all(b.full_rank for b in blocks), policy
    )


def _rank4_patterns():
    structural = np.zeros((3, 3))
    structural[:, 0] = 1.0
    return [np.abs(k) > 0 for k in build_rank4_qutrit(structural).kraus]


_PATTERNS = _rank4_patterns()


def _support(l):
    """Structural supports of ``K_i^dagger K_{i+l}`` and ``K_{i+l} K_i^dagger`` over ``i``."""
    sm = np.zeros((3, 3), dtype=bool)
    sn = np.zeros((3, 3), dtype=bool)
    for i in range(4):
        a = _PATTERNS[i].astype(int)
        b = _PATTERNS[(i + l) % 4].astype(int)
        sm |= (a.T @ b) > 0
        sn |= (b @ a.T) > 0
    return sm, sn


def _rank4_products(ops, l):
    pm = [ops[i].conj().T @ ops[(i + l) % 4] for i in range(4)]
    pn = [ops[(i + l) % 4] @ ops[i].conj().T for i in range(4)]
    return pm, pn


def _vectorize(products, mask):
    return np.array([p[mask] for p in products])


def _rank4_block_parts(c, l):
    if c.d != 3:
        raise ValidationError(f"the rank-4 family is defined for d=3 only, got d={c.d}")
    _check_offset(l, 4)
    pm, pn = _rank4_products(build_rank4_qutrit(c).kraus, l)
    sm, sn = _support(l)
    return _vectorize(pm, sm), _vectorize(pn, sn)


def build_M4(c, l):
    """Rows ``i = 0..3``: ``K_i^dagger K_{i+l}`` restricted to its structural support."""
    return _rank4_block_parts(_coefficients(c), l)[0]


def build_N4(c, l):
    """Rows ``i = 0..3``: ``K_{i+l} K_i^dagger`` restricted to its structural support."""
    return _rank4_block_parts(_coefficients(c), l)[1]


def extreme_family_rank4(c, policy=DEFAULT_POLICY):
    c = _coefficients(c)
    if c.d != 3:
        raise ValidationError(f"the rank-4 family is defined for d=3 only, got d={c.d}")
    _require_feasible(c)
    ops = build_rank4_qutrit(c).kraus
    blocks = []
    products = {}
    for l in range(3):
        products[l] = _rank4_products(ops, l)
    # P_{4-l, i+l} = P_{l, i}^dagger
    pm1, pn1 = products[1]
    products[3] = (
        [pm1[(j - 1) % 4].conj().T for j in range(4)],
        [pn1[(j - 1) % 4].conj().T for j in range(4)],
    )
    for l in range(4):
        sm, sn = _support(l)
        pm, pn = products[l]
        matrix = np.hstack([_vectorize(pm, sm), _vectorize(pn, sn)])
        blocks.append(_block(l, matrix, policy, mirrored=(l == 3)))
    return ExtremalityReport(
        Method.FAMILY_RANK4, tuple(blocks), all(b.full_rank for b in blocks), policy
    )
