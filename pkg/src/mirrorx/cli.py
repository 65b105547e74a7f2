"""Command-line entry point.

Subcommands: branch, fusion, character, appendix, kz, certify. Every
subcommand accepts ``--format {json,csv,text}``, ``--output PATH``,
``--jobs N`` (falls back to MIRRORX_JOBS) and ``--config FILE``.

Config files hold one ``key=value`` per line; ``#`` starts a comment. Keys
are the long option names of the chosen subcommand with dashes or
underscores (``lambda-tilde=0``, ``iso_check=true``). Flags given on the
command line override file values.

Exit codes: 0 success, 1 computation failure or failed check, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Sequence

from .errors import MirrorxError

FORMATS = ("json", "csv", "text")
TRUE = {"1", "true", "yes", "on"}
FALSE = {"0", "false", "no", "off"}


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def read_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")
    common.add_argument("--jobs", type=_positive_int, default=None, help="parallel workers (default: MIRRORX_JOBS or 1)")
    common.add_argument("--config", default=None, help="key=value file; flags override it")

    parser = argparse.ArgumentParser(prog="mirrorx", description="Mirror-extension certificate toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("branch", parents=[common], help="level-rank branching spectrum")
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--lambda-tilde", type=int, default=0)

    p = sub.add_parser("fusion", parents=[common], help="fusion ring or level-rank fusion isomorphism")
    p.add_argument("--algebra", required=True, help="slN")
    p.add_argument("--level", type=_positive_int, required=True)
    p.add_argument("--iso-check", action="store_true")

    p = sub.add_parser("character", parents=[common], help="normalized q-character of an integrable module")
    p.add_argument("--algebra", required=True)
    p.add_argument("--level", type=_positive_int, required=True)
    p.add_argument("--weight", type=_int_list, default=None, help="Dynkin labels, comma separated")
    p.add_argument("--depth", type=int, default=10)

    p = sub.add_parser("appendix", parents=[common], help="lattice vertex-operator certificates")
    p.add_argument("--case", default="all", choices=["all", "D662", "D448", "D444", "D446", "hw"])

    p = sub.add_parser("kz", parents=[common], help="sl(2) four-point braiding report")
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--labels", type=_int_list, required=True)
    p.add_argument("--support", type=_int_list, default=None, help="extension support (default 0,6 when k >= 6)")

    p = sub.add_parser("certify", parents=[common], help="end-to-end certificate for a preset")
    p.add_argument("--preset", required=True, choices=["B2", "G2", "sl10-mirror", "sl28-mirror"])
    return parser


def _config_path(argv: Sequence[str]) -> str | None:
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    return path


def parse_args(argv: Sequence[str] | None) -> argparse.Namespace:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    path = _config_path(argv)
    command = next((tok for tok in argv if tok in COMMANDS), None)
    if path and command:
        # file values become subcommand defaults, so flags still win
        try:
            values = read_config(path)
        except (OSError, UsageError) as exc:
            parser.error(str(exc))
        subparser = parser._subparsers._group_actions[0].choices[command]  # noqa: SLF001
        actions = {a.dest: a for a in subparser._actions}  # noqa: SLF001
        defaults = {}
        for key, value in values.items():
            if key not in actions or key in ("help", "config"):
                parser.error(f"unknown config key {key!r} for {command}")
            action = actions[key]
            if isinstance(action, argparse._StoreTrueAction):  # noqa: SLF001
                if value.lower() not in TRUE | FALSE:
                    parser.error(f"config key {key!r} expects a boolean")
                defaults[key] = value.lower() in TRUE
            else:
                try:
                    defaults[key] = action.type(value) if action.type else value
                except (ValueError, argparse.ArgumentTypeError) as exc:
                    parser.error(f"config key {key!r}: {exc}")
                if action.choices is not None and defaults[key] not in action.choices:
                    parser.error(f"config key {key!r}: invalid choice {value!r}")
            action.required = False
        subparser.set_defaults(**defaults)
    args = parser.parse_args(argv)
    if getattr(args, "jobs", None) is None:
        try:
            args.jobs = max(1, int(os.environ.get("MIRRORX_JOBS", "1")))
        except ValueError:
            parser.error("MIRRORX_JOBS must be an integer")
    return args


# -- emitters ----------------------------------------------------------------


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=str) + "\n"


def _flatten(obj, prefix: str = "") -> list[list]:
    if isinstance(obj, dict):
        rows = []
        for k in sorted(obj):
            rows += _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return rows
    if isinstance(obj, list) and obj and all(isinstance(x, (dict, list)) for x in obj):
        rows = []
        for i, x in enumerate(obj):
            rows += _flatten(x, f"{prefix}[{i}]")
        return rows
    return [[prefix, json.dumps(obj, default=str) if isinstance(obj, (list, dict)) else obj]]


def _generic(report: dict, fmt: str) -> str:
    if fmt == "json":
        return _json(report)
    rows = _flatten(report)
    if fmt == "csv":
        return _csv([["key", "value"]] + rows)
    return "".join(f"{k}: {v}\n" for k, v in rows)


# -- subcommands -------------------------------------------------------------


def cmd_branch(args) -> tuple[str, bool]:
    from .levelrank import branching_spectrum

    spec = branching_spectrum(args.m, args.n, args.lambda_tilde)
    if args.format == "json":
        return _json(spec.to_dict()), True
    rows = [[str(p.lam), str(p.lam_dot), p.mu, str(p.h_lam), str(p.h_lam_dot)] for p in spec.pairs]
    if args.format == "csv":
        return _csv([["lambda", "lambdaDot", "mu", "hLambda", "hLambdaDot"]] + rows), True
    head = f"sl({args.m})_{args.n} x sl({args.n})_{args.m} in sl({args.m * args.n})_1, Lambda_{args.lambda_tilde}\n"
    return head + "".join(f"{r[0]:>12}  <->  {r[1]:<16} mu={r[2]}  h={r[3]} + {r[4]}\n" for r in rows), True


def cmd_fusion(args) -> tuple[str, bool]:
    from .fusion import FusionRing, fusion_iso
    from .levelrank import branching_spectrum
    from .liealg import parse_algebra

    alg = parse_algebra(args.algebra)
    alg.require_a()
    if args.iso_check:
        m, n = sorted((alg.n, args.level))
        rep = fusion_iso(branching_spectrum(m, n))
        return _generic(rep.to_dict(), args.format), rep.passed
    ring = FusionRing.build(alg.n, args.level)
    if args.format == "json":
        return _json(ring.to_dict()), True
    if args.format == "csv":
        size = len(ring.basis)
        rows = [
            [str(ring.basis[a]), str(ring.basis[b]), str(ring.basis[c]), ring.N(a, b, c)]
            for a in range(size)
            for b in range(size)
            for c in range(size)
            if ring.N(a, b, c)
        ]
        return _csv([["a", "b", "c", "N"]] + rows), True
    return ring.format_table() + "\n", True


def cmd_character(args) -> tuple[str, bool]:
    from .affinechar import AffineModuleLabel, affine_graded_dims, character_from_dims, sl2_affine_character
    from .liealg import Weight, parse_algebra

    alg = parse_algebra(args.algebra)
    coords = tuple(args.weight) if args.weight else (0,) * alg.rank
    if args.depth < 0:
        raise UsageError("depth must be non-negative")
    if alg.family == "A" and alg.rank == 1:
        series = sl2_affine_character(args.level, coords[0], args.depth)
    else:
        lbl = AffineModuleLabel(alg, args.level, Weight(coords, alg))
        series = character_from_dims(lbl, affine_graded_dims(lbl, args.depth))
    if args.format == "json":
        return series.to_json() + "\n", True
    if args.format == "csv":
        return series.to_csv(), True
    terms = " + ".join(f"{c}q^{i}" for i, c in enumerate(series.coeffs) if c)
    return f"q^({series.lead_exp}) * ({terms})\n", True


def cmd_appendix(args) -> tuple[str, bool]:
    from . import latticevoa as lv

    certs = []
    if args.case in ("all", "hw"):
        certs += [lv.verify_highest_weight_vector(i) for i in range(1, 6)]
        certs += [lv.verify_highest_weight_vector(i, lowest=True) for i in range(1, 6)]
    if args.case != "hw":
        cases = sorted(lv.CASES) if args.case == "all" else [args.case]
        certs += [lv.verify_d_nonzero(c) for c in cases]
    report = {"certificates": [c.to_dict() for c in certs], "pass": all(c.passed for c in certs)}
    if args.format == "json":
        return _json(report), report["pass"]
    rows = [[c.case, lv.format_exponential(c.target), str(c.coefficient), c.passed] for c in certs]
    if args.format == "csv":
        return _csv([["case", "target", "coefficient", "pass"]] + rows), report["pass"]
    return "".join(f"{r[0]:<8} {'pass' if r[3] else 'FAIL'}  coefficient {r[2]}  {r[1]}\n" for r in rows), report["pass"]


def cmd_kz(args) -> tuple[str, bool]:
    from .kz import kz_report

    if len(args.labels) != 4:
        raise UsageError("--labels needs four integers")
    support = args.support if args.support is not None else ([0, 6] if args.k >= 6 else None)
    report = kz_report(args.k, args.labels, support)
    return _generic(report, args.format), report["pass"]


def cmd_certify(args) -> tuple[str, bool]:
    from .extension import full_certificate

    cert = full_certificate(args.preset, jobs=args.jobs)
    report = cert.to_dict()
    if args.format == "text":
        lines = [f"certificate for {cert.instance}: {'pass' if cert.passed else 'FAIL'}"]
        lines += [f"  {leg.name:<15} {leg.status}" for leg in cert.legs]
        return "\n".join(lines) + "\n", cert.passed
    return _generic(report, args.format), cert.passed


COMMANDS = {
    "branch": cmd_branch,
    "fusion": cmd_fusion,
    "character": cmd_character,
    "appendix": cmd_appendix,
    "kz": cmd_kz,
    "certify": cmd_certify,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    try:
        text, ok = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"mirrorx: usage error: {exc}", file=sys.stderr)
        return 2
    except (MirrorxError, ValueError, ArithmeticError, KeyError) as exc:
        print(f"mirrorx: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
