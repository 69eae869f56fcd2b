"""Unital qutrit/qudit channels from Heisenberg-Weyl Kraus families.

Build channels from coefficient matrices, check trace preservation and
unitality from the coefficients or directly, and decide extremality in the
set of unital channels by either a general Gram-matrix oracle or the
block-structured family tests.
"""

from .channel import (
    ChannelVerdict,
    KrausChannel,
    apply,
    choi_matrix,
    conjugate,
    kraus_rank,
    same_channel,
    verdict,
)
from .exceptions import ConvergenceError, DimensionError, GaugeDeficientWarning, ValidationError
from .extremality import (
    ExtremalityReport,
    Method,
    build_M,
    build_M4,
    build_N,
    build_N4,
    extreme_cpt,
    extreme_family_rank4,
    extreme_family_rank_d,
    extreme_general,
    extreme_ucp,
)
from .linalg import RankPolicy, linear_independence, numerical_rank, svd_values
from .weyl_family import (
    CoefficientMatrix,
    ConditionReport,
    GaugeConvention,
    build_rank4_qutrit,
    build_rank_d,
    condition_report,
    gauge_fix,
    sample_feasible,
    tangent_dimension,
    weyl,
)

__version__ = "0.1.0"
