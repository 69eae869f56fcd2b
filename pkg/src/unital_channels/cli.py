"""Command-line front end.

Usage:
    unital-channels check FILE [--family F] [--method general|family|both]
                               [--tolerance TOL] [--digits N] [--same-as FILE] [--out PATH]
    unital-channels sample D [--count N] [--seed S] [--family F] --out DIR
    unital-channels catalog [NAME] [--out PATH]
    unital-channels conjugate FILE UNITARY_FILE [--family F] [--out PATH]

Exit codes:
    0  check: channel is extreme in the unital channel set
    1  sample: the feasibility projection did not converge
    2  input error (unreadable file, malformed JSON, schema violation, bad flags)
    3  check: valid unital channel that is not extreme
    4  check: not trace-preserving or not unital
"""

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, catalog
from .channel import DEFAULT_TOLERANCE, choi_matrix, conjugate, kraus_rank, verdict
from .documents import DocumentError, InputDocument, dumps, load, normalize_family
from .exceptions import ConvergenceError, DimensionError, ValidationError
from .extremality import (
    extreme_cpt,
    extreme_family_rank4,
    extreme_family_rank_d,
    extreme_general,
    extreme_ucp,
)
from .linalg import DEFAULT_POLICY
from .weyl_family import condition_report, sample_feasible

TOOL = "unital-channels"

EXIT_EXTREME = 0
EXIT_SAMPLER = 1
EXIT_INPUT = 2
EXIT_NOT_EXTREME = 3
EXIT_NOT_UCPT = 4

_INPUT_ERRORS = (DocumentError, ValidationError, DimensionError)


class InputError(Exception):
    pass


def _round(x, digits):
    x = float(x) + 0.0
    return x if digits is None else round(x, digits) + 0.0


def _block_json(b, digits):
    return {
        "label": int(b.label) if not isinstance(b.label, str) else b.label,
        "shape": list(b.matrix.shape),
        "singular_values": [_round(s, digits) for s in b.singular_values],
        "rank": int(b.rank),
        "full_rank": bool(b.full_rank),
        "mirrored": bool(b.mirrored),
    }


def extremality_json(rep, digits=None):
    return {
        "method": rep.method.value,
        "verdict": bool(rep.verdict),
        "witness": None if rep.witness is None else _round(rep.witness, digits),
        "deficient_blocks": [_block_json(b, None)["label"] for b in rep.blocks if not b.full_rank],
        "blocks": [_block_json(b, digits) for b in rep.blocks],
        "note": rep.note,
    }


def conditions_json(rep, tol):
    out = {
        "norm_residual": float(rep.norm_residual),
        "tp_residuals": [abs(z) for z in rep.tp_residuals],
        "unital_residuals": [abs(z) for z in rep.unital_residuals],
    }
    if rep.chained_residuals is not None:
        out["chained_residuals"] = [abs(z) for z in rep.chained_residuals]
    out["max_residual"] = float(rep.max_residual)
    out["trace_preserving"] = rep.trace_preserving(tol)
    out["unital"] = rep.unital(tol)
    out["feasible"] = rep.feasible(tol)
    return out


def _residual_table(v, cond):
    rows = [
        ("direct trace-preservation", v.tp_residual),
        ("direct unitality", v.unital_residual),
    ]
    if cond is not None:
        rows.append(("c1 normalisation", cond.norm_residual))
        rows += [(f"c2 l={l}", abs(z)) for l, z in enumerate(cond.tp_residuals, 1)]
        rows += [(f"c3 l={l}", abs(z)) for l, z in enumerate(cond.unital_residuals, 1)]
    return "\n".join(f"{label:<28s}{value:.3e}" for label, value in rows)


def _doc_channel(doc, family):
    try:
        return doc.channel(family)
    except _INPUT_ERRORS as exc:
        raise InputError(str(exc)) from None


def _same_as(ch, path, tol):
    ref_doc = load(path)
    ref = _doc_channel(ref_doc, None)
    out = {"reference": ref_doc.name if ref_doc.name is not None else str(path)}
    if (ref.dim_in, ref.dim_out) != (ch.dim_in, ch.dim_out):
        out.update(equal=False, choi_distance=None)
        return out
    dist = float(np.linalg.norm(choi_matrix(ch) - choi_matrix(ref)))
    out.update(equal=dist < tol, choi_distance=dist)
    return out


def cmd_check(path, family=None, method="both", tolerance=DEFAULT_TOLERANCE, digits=None,
              same_as=None, policy=DEFAULT_POLICY):
    """Return ``(report, exit_code)`` for the document at ``path``."""
    doc = load(path)
    family = normalize_family(family)
    if doc.kind == "kraus" and method == "family":
        raise InputError("the family test needs a coefficient document, got kind=kraus")
    use_family = family or doc.family or "rank_d"
    ch = _doc_channel(doc, use_family)
    v = verdict(ch, tolerance)
    cond = condition_report(doc.coefficients()) if doc.kind == "coefficients" else None
    ucpt = v.ucpt and (cond is None or cond.feasible(tolerance))

    extremality = {}
    agreement = None
    ranks = None
    if ucpt:
        ranks = kraus_rank(ch, policy)
        try:
            if method in ("general", "both"):
                for fn in (extreme_general, extreme_ucp, extreme_cpt):
                    rep = fn(ch, policy)
                    extremality[rep.method.value] = extremality_json(rep, digits)
            if method in ("family", "both") and doc.kind == "coefficients":
                fam = extreme_family_rank4 if use_family == "rank4_qutrit" else extreme_family_rank_d
                rep = fam(doc.coefficients(), policy)
                extremality[rep.method.value] = extremality_json(rep, digits)
        except ValidationError as exc:
            raise InputError(str(exc)) from None
        primary = [
            extremality[k]["verdict"]
            for k in ("general_LS", "family_rank_d", "family_rank4")
            if k in extremality
        ]
        if len(primary) > 1:
            agreement = len(set(primary)) == 1
        extreme = primary[0]
        outcome, code = ("extreme", EXIT_EXTREME) if extreme else ("not_extreme", EXIT_NOT_EXTREME)
    else:
        outcome, code = "not_ucpt", EXIT_NOT_UCPT

    report = {
        "tool": TOOL,
        "tool_version": __version__,
        "schema_version": 1,
        "input": doc.to_dict(),
        "options": {
            "family": use_family if doc.kind == "coefficients" else None,
            "method": method,
            "tolerance": tolerance,
            "digits": digits,
        },
        "policy": policy.to_dict(),
        "verdict": {
            "trace_preserving": v.trace_preserving,
            "unital": v.unital,
            "tp_residual": float(v.tp_residual),
            "unital_residual": float(v.unital_residual),
            "ucpt": v.ucpt,
        },
        "conditions": None if cond is None else conditions_json(cond, tolerance),
        "kraus_operators": len(ch),
        "kraus_rank": ranks,
        "extremality": extremality,
        "agreement": agreement,
    }
    if same_as is not None:
        report["same_channel"] = _same_as(ch, same_as, tolerance)
    report["outcome"] = outcome
    report["exit_code"] = code
    if code == EXIT_NOT_UCPT:
        print(_residual_table(v, cond), file=sys.stderr)
    return report, code


def cmd_sample(d, count, seed, out_dir, family=None):
    """Write ``count`` feasible coefficient documents; one child seed per sample."""
    family = normalize_family(family)
    if family == "rank4_qutrit" and d != 3:
        raise InputError("the rank-4 family is defined for d=3 only")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    children = np.random.SeedSequence(seed).spawn(count)
    files = []
    for k, child in enumerate(children):
        c = sample_feasible(d, child)
        doc = InputDocument.from_coefficients(c, family, f"sample-d{d}-seed{seed}-{k:04d}")
        target = out_dir / f"sample_{k:04d}.json"
        target.write_text(dumps(doc.to_dict()), encoding="utf-8")
        files.append(str(target))
    return files


def cmd_catalog(name=None):
    """One document for ``name``, or a name -> document mapping for the whole catalog."""
    if name is not None:
        try:
            return InputDocument.from_example(catalog.get(name))
        except KeyError:
            raise InputError(f"unknown catalog entry {name!r}; known: {', '.join(catalog.names())}")
    return {n: InputDocument.from_example(catalog.get(n)) for n in catalog.names()}


def cmd_conjugate(path, unitary_path, family=None):
    doc = load(path)
    udoc = load(unitary_path)
    if udoc.kind != "kraus" or len(udoc.data) != 1:
        raise InputError("the unitary document must be kind=kraus with exactly one operator")
    ch = _doc_channel(doc, family)
    try:
        out = conjugate(ch, udoc.data[0])
    except _INPUT_ERRORS as exc:
        raise InputError(str(exc)) from None
    name = None if doc.name is None else f"{doc.name}_conjugated"
    return InputDocument.from_channel(out, name)


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _tolerance(text):
    value = float(text)
    if not value > 0 or not np.isfinite(value):
        raise argparse.ArgumentTypeError("tolerance must be a positive finite number")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog=TOOL, description="Unital channel construction and extremality checks.")
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    families = ["rank_d", "rank4", "rank4_qutrit"]

    p = sub.add_parser("check", help="verdict, coefficient conditions and extremality report")
    p.add_argument("path")
    p.add_argument("--family", choices=families)
    p.add_argument("--method", choices=["general", "family", "both"], default="both")
    p.add_argument("--tolerance", type=_tolerance, default=DEFAULT_TOLERANCE)
    p.add_argument("--digits", type=int)
    p.add_argument("--same-as", dest="same_as", metavar="PATH",
                   help="compare with the channel in another document")
    p.add_argument("--out")

    p = sub.add_parser("sample", help="write seeded feasible coefficient documents")
    p.add_argument("d", type=_positive)
    p.add_argument("--count", type=_positive, default=1)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--family", choices=families)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("catalog", help="dump named catalog entries")
    p.add_argument("name", nargs="?")
    p.add_argument("--out", help="file for one entry, directory for the whole catalog")

    p = sub.add_parser("conjugate", help="Kraus document of U E U^dagger")
    p.add_argument("path")
    p.add_argument("unitary_path")
    p.add_argument("--family", choices=families)
    p.add_argument("--out")
    return parser


def _run(args):
    if args.command == "check":
        report, code = cmd_check(args.path, args.family, args.method, args.tolerance,
                                 args.digits, args.same_as)
        _emit(dumps(report), args.out)
        return code
    if args.command == "sample":
        try:
            files = cmd_sample(args.d, args.count, args.seed, args.out, args.family)
        except ConvergenceError as exc:
            print(f"error: {exc} (best residual {exc.best_residual:.3e})", file=sys.stderr)
            return EXIT_SAMPLER
        sys.stdout.write("".join(f + "\n" for f in files))
        return 0
    if args.command == "catalog":
        result = cmd_catalog(args.name)
        if args.name is not None:
            _emit(dumps(result.to_dict()), args.out)
        elif args.out is not None:
            os.makedirs(args.out, exist_ok=True)
            for n, doc in result.items():
                Path(args.out, f"{n}.json").write_text(dumps(doc.to_dict()), encoding="utf-8")
        else:
            _emit(dumps({n: doc.to_dict() for n, doc in result.items()}), None)
        return 0
    doc = cmd_conjugate(args.path, args.unitary_path, args.family)
    _emit(dumps(doc.to_dict()), args.out)
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (InputError, *_INPUT_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
