"""JSON input documents (schema version 1) for coefficient matrices and Kraus sets.

Complex numbers are ``[re, im]`` pairs; matrices are lists of rows.  A
coefficient document carries one ``d x d`` matrix in ``data``; a Kraus
document carries a list of equally-shaped matrices.
"""

import json
from dataclasses import dataclass

import numpy as np

from .channel import KrausChannel
from .exceptions import ValidationError
from .weyl_family import CoefficientMatrix, build_rank4_qutrit, build_rank_d

SCHEMA_VERSION = 1
KINDS = ("coefficients", "kraus")
FAMILIES = ("rank_d", "rank4_qutrit")
_FAMILY_ALIASES = {"rank_d": "rank_d", "rank4": "rank4_qutrit", "rank4_qutrit": "rank4_qutrit"}


class DocumentError(ValidationError):
    """The document is malformed or violates the schema."""


def normalize_family(family):
    if family is None:
        return None
    try:
        return _FAMILY_ALIASES[family]
    except KeyError:
        raise DocumentError(f"unknown family {family!r}; expected one of {FAMILIES}") from None


def _num(x):
    # + 0.0 folds negative zero
    return float(x) + 0.0


def matrix_to_json(m):
    return [[[_num(z.real), _num(z.imag)] for z in row] for row in np.asarray(m)]


def matrix_from_json(data, what):
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise DocumentError(f"{what}: expected a non-empty list of rows")
    width = len(data[0])
    rows = []
    for r, row in enumerate(data):
        if len(row) != width or width == 0:
            raise DocumentError(f"{what}: row {r} has {len(row)} entries, expected {width}")
        out = []
        for c, pair in enumerate(row):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
            ):
                raise DocumentError(f"{what}[{r}][{c}]: expected an [re, im] pair of numbers")
            out.append(complex(pair[0], pair[1]))
        rows.append(out)
    m = np.array(rows, dtype=np.complex128)
    if not np.all(np.isfinite(m)):
        raise DocumentError(f"{what}: non-finite entries")
    return m


@dataclass(frozen=True, eq=False)
class InputDocument:
    kind: str
    d: int
    data: object
    family: str = None
    name: str = None
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def from_dict(cls, obj):
        if not isinstance(obj, dict):
            raise DocumentError("document must be a JSON object")
        version = obj.get("schema_version")
        if version != SCHEMA_VERSION:
            raise DocumentError(f"unsupported schema_version {version!r}")
        kind = obj.get("kind")
        if kind not in KINDS:
            raise DocumentError(f"kind must be one of {KINDS}, got {kind!r}")
        d = obj.get("d")
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            raise DocumentError(f"d must be a positive integer, got {d!r}")
        family = normalize_family(obj.get("family"))
        name = obj.get("name")
        if name is not None and not isinstance(name, str):
            raise DocumentError("name must be a string")
        raw = obj.get("data")
        if kind == "coefficients":
            data = matrix_from_json(raw, "data")
            if data.shape != (d, d):
                raise DocumentError(f"coefficient data must be {d}x{d}, got {data.shape}")
        else:
            if not isinstance(raw, list) or not raw:
                raise DocumentError("kraus data must be a non-empty list of matrices")
            data = [matrix_from_json(m, f"data[{i}]") for i, m in enumerate(raw)]
            shape = data[0].shape
            for i, m in enumerate(data):
                if m.shape != shape:
                    raise DocumentError(f"data[{i}] has shape {m.shape}, expected {shape}")
            if shape[0] != d:
                raise DocumentError(f"kraus operators have {shape[0]} rows but d={d}")
        return cls(kind, d, data, family, name, version)

    @classmethod
    def from_coefficients(cls, c, family=None, name=None):
        alpha = c.alpha if isinstance(c, CoefficientMatrix) else np.asarray(c)
        return cls("coefficients", alpha.shape[0], np.array(alpha), normalize_family(family), name)

    @classmethod
    def from_channel(cls, ch, name=None):
        return cls("kraus", ch.dim_out, [np.array(k) for k in ch.kraus], None, name)

    @classmethod
    def from_example(cls, example):
        if example.kind == "coefficients":
            return cls.from_coefficients(example.payload, example.family, example.name)
        return cls.from_channel(example.channel(), example.name)

    def to_dict(self):
        out = {"schema_version": self.schema_version, "kind": self.kind, "d": self.d}
        if self.family is not None:
            out["family"] = self.family
        if self.name is not None:
            out["name"] = self.name
        if self.kind == "coefficients":
            out["data"] = matrix_to_json(self.data)
        else:
            out["data"] = [matrix_to_json(m) for m in self.data]
        return out

    def coefficients(self):
        if self.kind != "coefficients":
            raise DocumentError("document does not hold a coefficient matrix")
        return CoefficientMatrix(self.data)

    def channel(self, family=None):
        """Channel described by the document; ``family`` overrides the stored one."""
        if self.kind == "kraus":
            return KrausChannel(tuple(self.data))
        family = normalize_family(family) or self.family or "rank_d"
        if family == "rank4_qutrit":
            return build_rank4_qutrit(self.coefficients())
        return build_rank_d(self.coefficients())


def dumps(obj):
    """Deterministic serialisation: fixed key order, shortest round-trip floats."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def loads(text, source="<string>"):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            f"{source}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return InputDocument.from_dict(obj)


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, str(path))
