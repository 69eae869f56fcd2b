"""Named examples: the qutrit coefficient matrices and the related channels.

Irrational entries are evaluated from closed forms, never decimal literals.

Two near-miss variants are kept for comparison.  ``a_pi4`` differs from
``a`` only in entry (0, 1), ``6 e^{i pi/4}`` instead of ``6 e^{i pi/2}``, and
violates the trace-preserving conditions.  ``c_symmetric`` is feasible and
has the same singular-value spectra as ``c``, but after the swap its Kraus
operators are symmetric rather than antisymmetric, so it is not a conjugate
of the Werner-Holevo channel.
"""

from dataclasses import dataclass, field

import numpy as np

from .channel import KrausChannel
from .weyl_family import CoefficientMatrix, build_rank4_qutrit, build_rank_d

__all__ = [
    "NamedExample",
    "coeff_a",
    "coeff_b",
    "coeff_c",
    "coeff_a_pi4",
    "coeff_c_symmetric",
    "werner_holevo_antisym3",
    "cyclic_unitaries3",
    "cyclic_mixture3",
    "swap_unitary",
    "e_c_kraus",
    "CATALOG",
    "WORKED_EXAMPLES",
    "get",
    "names",
]


def _e(theta):
    return np.exp(1j * theta)


_S2, _S3, _S5, _PI = np.sqrt(2.0), np.sqrt(3.0), np.sqrt(5.0), np.pi


def _coeff_a(phase01):
    return CoefficientMatrix(
        _S5
        / 30
        * np.array(
            [
                [3 * _S3, 6 * _e(phase01), 3 * _S3],
                [_S3, _S3 * _e(4 * _PI / 3), 4 * _S3 * _e(2 * _PI / 3)],
                [3 * _S2, 3 * _e(5 * _PI / 12), 3 * _e(13 * _PI / 12)],
            ]
        )
    )


def coeff_a():
    return _coeff_a(_PI / 2)


def coeff_a_pi4():
    """``a`` with ``6 e^{i pi/4}`` in entry (0, 1); not trace-preserving."""
    return _coeff_a(_PI / 4)


def coeff_b():
    alpha = np.zeros((3, 3), dtype=np.complex128)
    alpha[:, 0] = 1 / _S3
    return CoefficientMatrix(alpha)


def coeff_c():
    """Coefficients of the Kraus set ``(|0><0| - |1><1|)/sqrt2, ...``.

    ``swap @ K_i`` is antisymmetric for each operator.
    """
    return CoefficientMatrix(
        1
        / np.sqrt(6.0)
        * np.array(
            [
                [0, _e(_PI / 6), _e(-_PI / 6)],
                [0, _e(-_PI / 2), _e(_PI / 2)],
                [0, _e(5 * _PI / 6), _e(-5 * _PI / 6)],
            ]
        )
    )


def coeff_c_symmetric():
    """Feasible, first column ``2 sqrt2 / 6``; ``swap @ K_i`` comes out symmetric."""
    return CoefficientMatrix(
        _S2
        / 6
        * np.array(
            [
                [2, _e(5 * _PI / 3), _e(_PI / 3)],
                [2, _e(_PI), _e(_PI)],
                [2, _e(_PI / 3), _e(5 * _PI / 3)],
            ]
        )
    )


def werner_holevo_antisym3():
    """Kraus operators ``(|i><j| - |j><i|)/sqrt2`` for the pairs (0,1), (0,2), (2,1)."""
    k0 = np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
    k1 = np.array([[0, 0, 1], [0, 0, 0], [-1, 0, 0]])
    k2 = np.array([[0, 0, 0], [0, 0, -1], [0, 1, 0]])
    return KrausChannel(tuple(k / _S2 for k in (k0, k1, k2)))


def e_c_kraus():
    """Kraus set whose conjugate by :func:`swap_unitary` is Werner-Holevo."""
    k0 = np.array([[1, 0, 0], [0, -1, 0], [0, 0, 0]])
    k1 = np.array([[0, 0, -1], [0, 0, 0], [0, 1, 0]])
    k2 = np.array([[0, 0, 0], [0, 0, 1], [-1, 0, 0]])
    return KrausChannel(tuple(k / _S2 for k in (k0, k1, k2)))


def cyclic_unitaries3():
    """``U_0 = 1``, ``U_1 = |k> -> |k+1>``, ``U_2 = U_1^2``."""
    shift = np.roll(np.eye(3, dtype=np.complex128), 1, axis=0)
    return [np.eye(3, dtype=np.complex128), shift, shift @ shift]


def cyclic_mixture3():
    """Uniform mixture of the three cyclic permutations (Kraus operators ``U_i / sqrt3``)."""
    return KrausChannel(tuple(u / _S3 for u in cyclic_unitaries3()))


def swap_unitary():
    """Exchanges the first two basis states."""
    return np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class NamedExample:
    """A catalog entry.

    ``kind`` is ``"coefficients"``, ``"kraus_set"`` or ``"unitary"``; for
    coefficient entries ``family`` names the Kraus construction, and
    ``expected`` records the verdicts (and singular values, where known)
    that the entry must reproduce.
    """

    name: str
    kind: str
    payload: object
    family: str = None
    expected: dict = field(default_factory=dict)

    def __post_init__(self):
        types = {
            "coefficients": CoefficientMatrix,
            "kraus_set": KrausChannel,
            "unitary": np.ndarray,
        }
        if self.kind not in types:
            raise ValueError(f"unknown kind {self.kind!r}")
        if not isinstance(self.payload, types[self.kind]):
            raise TypeError(f"payload of {self.name!r} does not match kind {self.kind!r}")

    def channel(self):
        if self.kind == "kraus_set":
            return self.payload
        if self.kind == "unitary":
            return KrausChannel((self.payload,))
        if self.family == "rank4_qutrit":
            return build_rank4_qutrit(self.payload)
        return build_rank_d(self.payload)


_R2 = 1 / _S2

CATALOG = {
    e.name: e
    for e in [
        NamedExample("a", "coefficients", coeff_a(), "rank_d"),
        NamedExample("b", "coefficients", coeff_b(), "rank_d"),
        NamedExample("c", "coefficients", coeff_c(), "rank_d"),
        NamedExample("a_pi4", "coefficients", coeff_a_pi4(), "rank_d", {"ucpt": False}),
        NamedExample("c_symmetric", "coefficients", coeff_c_symmetric(), "rank_d", {"ucpt": True}),
        NamedExample(
            "E_a",
            "coefficients",
            coeff_a(),
            "rank_d",
            {
                "ucpt": True,
                "extreme": True,
                "singular_values": {0: [1.529, 0.6364, 0.5885], 1: [0.9318, 0.6332, 0.4308]},
            },
        ),
        NamedExample(
            "E_b",
            "coefficients",
            coeff_b(),
            "rank_d",
            {"ucpt": True, "extreme": False, "singular_values": {0: [_S2, 0, 0], 1: [_S2, 0, 0]}},
        ),
        NamedExample(
            "E_c",
            "coefficients",
            coeff_c(),
            "rank_d",
            {
                "ucpt": True,
                "extreme": True,
                "singular_values": {0: [_S2, _R2, _R2], 1: [_R2, _R2, _R2]},
            },
        ),
        NamedExample(
            "F_a",
            "coefficients",
            coeff_a(),
            "rank4_qutrit",
            {
                "ucpt": True,
                "extreme": True,
                "singular_values": {
                    0: [1.475, 0.7347, 0.5996, 0.1229],
                    1: [0.9015, 0.5009, 0.2245, 0.0768],
                    2: [0.6511, 0.3698, 0.3075, 0.1214],
                },
            },
        ),
        NamedExample(
            "F_b",
            "coefficients",
            coeff_b(),
            "rank4_qutrit",
            {
                "ucpt": True,
                "extreme": False,
                "singular_values": {
                    0: [1.247, 0.4714, 0.4714, 0],
                    1: [1.054, 0.4714, 0, 0],
                    2: [1.054, 0.4714, 0, 0],
                },
            },
        ),
        NamedExample(
            "F_c",
            "coefficients",
            coeff_c(),
            "rank4_qutrit",
            {
                "ucpt": True,
                "extreme": False,
                "singular_values": {
                    0: [1.3066, 0.7071, 0.7071, 0.5412],
                    1: [0.5, 0.5, 0.5, 0.5],
                    2: [0.7071, 0.7071, 0, 0],
                },
            },
        ),
        NamedExample(
            "werner_holevo_antisym3",
            "kraus_set",
            werner_holevo_antisym3(),
            None,
            {"ucpt": True, "extreme": True},
        ),
        NamedExample("E_c_kraus", "kraus_set", e_c_kraus(), None, {"ucpt": True, "extreme": True}),
        NamedExample(
            "cyclic_mixture3", "kraus_set", cyclic_mixture3(), None, {"ucpt": True, "extreme": False}
        ),
        NamedExample("swap_unitary", "unitary", swap_unitary(), None, {"ucpt": True, "extreme": True}),
    ]
}

WORKED_EXAMPLES = ("E_a", "E_b", "E_c", "F_a", "F_b", "F_c")


def names():
    return list(CATALOG)


def get(name):
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG)}") from None
