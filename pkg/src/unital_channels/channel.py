"""Kraus channels: application, TP/unital verdicts, Choi matrix, equality."""

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, ValidationError
from .linalg import DEFAULT_POLICY, as_matrix, numerical_rank

__all__ = [
    "DEFAULT_TOLERANCE",
    "KrausChannel",
    "ChannelVerdict",
    "apply",
    "verdict",
    "choi_matrix",
    "kraus_rank",
    "same_channel",
    "conjugate",
    "partial_trace_output",
    "partial_trace_input",
]

DEFAULT_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Completely positive map ``rho -> sum_i K_i rho K_i^dagger``.

    Every Kraus operator is ``dim_out x dim_in``.
    """

    kraus: tuple

    def __post_init__(self):
        ops = tuple(as_matrix(k, f"kraus[{i}]").copy() for i, k in enumerate(self.kraus))
        if not ops:
            raise ValidationError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        for i, k in enumerate(ops):
            if k.shape != shape:
                raise DimensionError(f"kraus[{i}] has shape {k.shape}, expected {shape}")
            k.setflags(write=False)
        object.__setattr__(self, "kraus", ops)

    @property
    def dim_out(self):
        return self.kraus[0].shape[0]

    @property
    def dim_in(self):
        return self.kraus[0].shape[1]

    def __len__(self):
        return len(self.kraus)

    def __iter__(self):
        return iter(self.kraus)

    def __repr__(self):
        return f"KrausChannel(r={len(self)}, dim_in={self.dim_in}, dim_out={self.dim_out})"


@dataclass(frozen=True)
class ChannelVerdict:
    trace_preserving: bool
    unital: bool
    tp_residual: float
    unital_residual: float

    @property
    def ucpt(self):
        return self.trace_preserving and self.unital


def apply(ch, rho):
    rho = as_matrix(rho, "rho")
    if rho.shape != (ch.dim_in, ch.dim_in):
        raise DimensionError(f"rho must be {ch.dim_in}x{ch.dim_in}, got {rho.shape}")
    return sum(k @ rho @ k.conj().T for k in ch.kraus)


def verdict(ch, tol=DEFAULT_TOLERANCE):
    if not tol > 0:
        raise ValidationError(f"tolerance must be positive, got {tol}")
    tp = sum(k.conj().T @ k for k in ch.kraus) - np.eye(ch.dim_in)
    un = sum(k @ k.conj().T for k in ch.kraus) - np.eye(ch.dim_out)
    tp_res = float(np.linalg.norm(tp))
    un_res = float(np.linalg.norm(un))
    return ChannelVerdict(tp_res <= tol, un_res <= tol, tp_res, un_res)


def choi_matrix(ch):
    """Unnormalised Choi matrix ``sum_ab |a><b| (x) E(|a><b|)``.

    Input factor first, output factor second; the trace equals ``dim_in`` for
    a trace-preserving channel.
    """
    n, m = ch.dim_in, ch.dim_out
    choi = np.zeros((n * m, n * m), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            # E(|a><b|) = sum_i K_i[:, a] K_i[:, b]^dagger
            block = sum(np.outer(k[:, a], k[:, b].conj()) for k in ch.kraus)
            choi[a * m : (a + 1) * m, b * m : (b + 1) * m] = block
    return choi


def partial_trace_output(choi, dim_in, dim_out):
    """Trace out the output factor; equals ``(sum K^dagger K)^T``."""
    return np.einsum("aibi->ab", choi.reshape(dim_in, dim_out, dim_in, dim_out))


def partial_trace_input(choi, dim_in, dim_out):
    """Trace out the input factor; equals ``E(1)``."""
    return np.einsum("aiaj->ij", choi.reshape(dim_in, dim_out, dim_in, dim_out))


def kraus_rank(ch, policy=DEFAULT_POLICY):
    return numerical_rank(choi_matrix(ch), policy)


def same_channel(a, b, tol=DEFAULT_TOLERANCE):
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        raise DimensionError(
            f"channels act between different spaces: "
            f"{a.dim_in}->{a.dim_out} vs {b.dim_in}->{b.dim_out}"
        )
    return float(np.linalg.norm(choi_matrix(a) - choi_matrix(b))) <= tol


def conjugate(ch, u, tol=DEFAULT_TOLERANCE):
    """The channel ``rho -> U E(rho) U^dagger``, with Kraus set ``{U K_i}``."""
    u = as_matrix(u, "u")
    if u.shape != (ch.dim_out, ch.dim_out):
        raise DimensionError(f"u must be {ch.dim_out}x{ch.dim_out}, got {u.shape}")
    defect = float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))
    if defect > tol:
        raise ValidationError(f"u is not unitary: ||u^dagger u - 1||_F = {defect:.3e}")
    return KrausChannel(tuple(u @ k for k in ch.kraus))
