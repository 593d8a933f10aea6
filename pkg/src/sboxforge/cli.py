"""Command-line front end: analyze S-box files, survey power maps, count
permutation classes, construct repaired S-boxes, and run coefficient
searches.

S-box files are whitespace-separated hexadecimal tokens (exactly 2^n of
them, `#` starts a line comment), or exactly 256 raw bytes for the 8-bit
binary form.  Every command accepts `--json` and then emits a report whose
keys are fixed by REPORT_SCHEMA, so reports from different runs and
implementations stay comparable.

Exit codes: 0 success, 2 usage or input error, 1 internal failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import __version__, construct, metrics, powermap
from .boolfn import VectorialFunction, class_sizes, nonaffine_permutation_bounds
from .gf2n import FieldSpec, default_poly, make_field, poly_degree
from .metrics import (
    differential_uniformity,
    fibre_profile,
    fixed_points,
    is_bijective,
    max_component_degree,
    nonlinearity,
)

MAX_ANALYZE_N = 12
MAX_SURVEY_N = 12
MIN_SURVEY_N = 3

#: Fixed report layout; --json output of every command validates against this.
REPORT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["version"],
    "properties": {
        "version": {"type": "string"},
        "poly": {"type": "string"},
        "input": {
            "type": "object",
            "additionalProperties": False,
            "required": ["path", "sha256", "format", "n", "m"],
            "properties": {
                "path": {"type": "string"},
                "sha256": {"type": "string"},
                "format": {"enum": ["text", "binary"]},
                "n": {"type": "integer"},
                "m": {"type": "integer"},
            },
        },
        "metrics": {
            "type": "object",
            "additionalProperties": False,
            "required": ["du", "nl", "degree", "bijective", "image_size", "fixed_points"],
            "properties": {
                "du": {"type": "integer"},
                "nl": {"type": "integer"},
                "degree": {"type": "integer"},
                "bijective": {"type": "boolean"},
                "image_size": {"type": "integer"},
                "fixed_points": {"type": "integer"},
            },
        },
        "tables": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "ddt": {"type": "array"},
                "walsh": {"type": "array"},
            },
        },
        "outcome": {
            "type": "object",
            "additionalProperties": False,
            "required": ["strategy", "seed", "reassignments"],
            "properties": {
                "strategy": {"type": "string"},
                "seed": {"type": "integer"},
                "reassignments": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "items": {"type": "integer"},
                        "minItems": 3,
                        "maxItems": 3,
                    },
                },
                "d": {"type": "integer"},
                "i": {"type": "integer"},
                "alpha": {"type": "integer"},
                "beta": {"type": "integer"},
                "anneal_budget": {"type": "integer"},
                "out": {"type": "string"},
            },
        },
        "survey": {
            "type": "object",
            "additionalProperties": False,
            "required": ["n", "classes"],
            "properties": {
                "n": {"type": "integer"},
                "du_max": {"type": "integer"},
                "nl_min": {"type": "integer"},
                "bijective_only": {"type": "boolean"},
                "classes": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["representative", "members", "q", "du", "nl", "bijective"],
                        "properties": {
                            "representative": {"type": "integer"},
                            "members": {"type": "array", "items": {"type": "integer"}},
                            "q": {"type": "integer"},
                            "du": {"type": "integer"},
                            "nl": {"type": "integer"},
                            "bijective": {"type": "boolean"},
                        },
                    },
                },
            },
        },
        "counts": {
            "type": "object",
            "additionalProperties": False,
            "required": ["n", "bf", "bt", "bp", "nonaffine_lower", "nonaffine_upper", "approx"],
            "properties": {
                "n": {"type": "integer"},
                "bf": {"type": "integer"},
                "bt": {"type": "integer"},
                "bp": {"type": "integer"},
                "nonaffine_lower": {"type": "integer"},
                "nonaffine_upper": {"type": "integer"},
                "approx": {"type": "object"},
            },
        },
        "search": {
            "type": "object",
            "additionalProperties": False,
            "required": ["n", "d", "i", "strategy", "seed", "candidates", "best",
                         "strong", "target_8_102", "optimum_pairs", "top"],
            "properties": {
                "n": {"type": "integer"},
                "d": {"type": "integer"},
                "i": {"type": "integer"},
                "strategy": {"type": "string"},
                "seed": {"type": "integer"},
                "anneal_budget": {"type": "integer"},
                "candidates": {"type": "integer"},
                "best": {"type": "object"},
                "strong": {"type": "boolean"},
                "target_8_102": {"type": "boolean"},
                "optimum_pairs": {"type": "array"},
                "optimum_tied_three": {"type": "boolean"},
                "binomial_image_sizes": {"type": "array"},
                "top": {"type": "array"},
            },
        },
    },
}


class CliError(Exception):
    """Usage or input error; maps to exit code 2."""


def parse_poly(text: str) -> int:
    t = text.lower().removeprefix("0x")
    try:
        return int(t, 16)
    except ValueError:
        raise CliError(f"cannot parse polynomial {text!r} as a hex bitmask") from None


def parse_int(text: str, what: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise CliError(f"cannot parse {what} {text!r} as an integer") from None


def load_sbox_file(path: str) -> tuple[VectorialFunction, str, str]:
    """Read an S-box file; returns (function, sha256 hex digest, format)."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    digest = hashlib.sha256(raw).hexdigest()

    tokens: list[str] | None = None
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError:
        text = None
    if text is not None:
        tokens = []
        for line in text.splitlines():
            body = line.split("#", 1)[0]
            tokens.extend(body.split())

    if tokens:
        count = len(tokens)
        n = count.bit_length() - 1
        if count != 1 << n or n < 1:
            raise CliError(f"{path}: expected a power-of-two token count, got {count}")
        if n > MAX_ANALYZE_N:
            raise CliError(f"{path}: n={n} exceeds the supported maximum {MAX_ANALYZE_N}")
        table = []
        for idx, tok in enumerate(tokens):
            t = tok.lower().removeprefix("0x")
            try:
                v = int(t, 16)
            except ValueError:
                raise CliError(f"{path}: token {idx} ({tok!r}) is not hexadecimal") from None
            if not 0 <= v < 1 << n:
                raise CliError(
                    f"{path}: token {idx} value 0x{v:x} out of range for m={n}"
                )
            table.append(v)
        return VectorialFunction(n, n, tuple(table)), digest, "text"

    if len(raw) == 256:
        return VectorialFunction(8, 8, tuple(raw)), digest, "binary"
    raise CliError(
        f"{path}: not a text S-box file, and binary form requires exactly 256 bytes "
        f"(got {len(raw)})"
    )


def write_sbox_file(path: str, F: VectorialFunction) -> None:
    digits = max(1, (F.m + 3) // 4)
    lines = []
    row = 1 << max(0, min(4, F.n))
    for start in range(0, 1 << F.n, row):
        lines.append(" ".join(f"{v:0{digits}x}" for v in F.table[start : start + row]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def metrics_block(F: VectorialFunction) -> dict:
    profile = fibre_profile(F)
    return {
        "du": differential_uniformity(F),
        "nl": nonlinearity(F),
        "degree": max_component_degree(F),
        "bijective": F.n == F.m and is_bijective(F),
        "image_size": profile.image_size,
        "fixed_points": fixed_points(F),
    }


def _sci(value: int) -> str:
    s = str(value)
    if len(s) <= 4:
        return s
    return f"{s[0]}.{s[1:4]}e+{len(s) - 1}"


def _emit(report: dict, as_json: bool, human: str) -> None:
    if as_json:
        print(json.dumps(report, indent=2))
    else:
        print(human, end="")


def _resolve_field(poly_arg: str | None, n: int | None = None) -> FieldSpec:
    if poly_arg is not None:
        poly = parse_poly(poly_arg)
        if n is not None and poly_degree(poly) != n:
            raise CliError(f"polynomial 0x{poly:x} has degree {poly_degree(poly)}, expected {n}")
    else:
        if n is None:
            raise CliError("either n or a polynomial must be given")
        poly = default_poly(n)
    try:
        return make_field(poly_degree(poly), poly)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def cmd_analyze(args: argparse.Namespace) -> int:
    F, digest, fmt = load_sbox_file(args.path)
    # the polynomial is report context only; the metrics of a lookup table
    # do not depend on it
    poly = None
    if args.poly is not None:
        poly = _resolve_field(args.poly, F.n).poly
    elif 2 <= F.n <= 16:
        poly = default_poly(F.n)
    block = metrics_block(F)
    report: dict = {"version": __version__}
    if poly is not None:
        report["poly"] = f"0x{poly:x}"
    report["input"] = {
        "path": args.path,
        "sha256": digest,
        "format": fmt,
        "n": F.n,
        "m": F.m,
    }
    report["metrics"] = block
    tables = {}
    if args.ddt:
        tables["ddt"] = metrics.ddt(F).counts.tolist()
    if args.walsh:
        tables["walsh"] = metrics.walsh(F).values.tolist()
    if tables:
        report["tables"] = tables

    lines = [
        f"file            {args.path} ({fmt}, sha256 {digest[:16]}...)",
        f"size            {F.n} -> {F.m}",
        f"du              {block['du']}",
        f"nl              {block['nl']}",
        f"degree          {block['degree']}",
        f"bijective       {block['bijective']}",
        f"image size      {block['image_size']}",
        f"fixed points    {block['fixed_points']}",
    ]
    _emit(report, args.json, "\n".join(lines) + "\n")
    return 0


def cmd_survey(args: argparse.Namespace) -> int:
    if not MIN_SURVEY_N <= args.n <= MAX_SURVEY_N:
        raise CliError(f"survey supports {MIN_SURVEY_N} <= n <= {MAX_SURVEY_N}, got {args.n}")
    spec = _resolve_field(args.poly, args.n)
    du_max = args.du_max if args.du_max is not None else spec.order
    nl_min = args.nl_min if args.nl_min is not None else 0
    classes = powermap.survey(
        args.n, spec, du_max, nl_min, bijective=True if args.bijective_only else None
    )
    report = {
        "version": __version__,
        "poly": f"0x{spec.poly:x}",
        "survey": {
            "n": args.n,
            "du_max": du_max,
            "nl_min": nl_min,
            "bijective_only": bool(args.bijective_only),
            "classes": [
                {
                    "representative": c.representative,
                    "members": sorted(c.members),
                    "q": c.q,
                    "du": c.du,
                    "nl": c.nl,
                    "bijective": c.bijective,
                }
                for c in classes
            ],
        },
    }
    lines = [f"{'rep':>5} {'q':>3} {'du':>5} {'nl':>5}  bij  members"]
    for c in classes:
        members = ",".join(str(v) for v in sorted(c.members))
        lines.append(
            f"{c.representative:>5} {c.q:>3} {c.du:>5} {c.nl:>5}  {'yes' if c.bijective else ' no'}  {{{members}}}"
        )
    lines.append(f"{len(classes)} exponent classes")
    _emit(report, args.json, "\n".join(lines) + "\n")
    return 0


def cmd_count(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise CliError("n must be >= 1")
    bf, bt, bp = class_sizes(args.n, args.n)
    lower, upper = nonaffine_permutation_bounds(args.n)
    approx = {
        "bf": _sci(bf),
        "bt": _sci(bt),
        "bp": _sci(bp),
        "nonaffine_lower": _sci(lower),
        "nonaffine_upper": _sci(upper),
    }
    report = {
        "version": __version__,
        "counts": {
            "n": args.n,
            "bf": bf,
            "bt": bt,
            "bp": bp,
            "nonaffine_lower": lower,
            "nonaffine_upper": upper,
            "approx": approx,
        },
    }
    lines = [
        f"n = {args.n}",
        f"|BF(n,n)|        = {bf}  (~{approx['bf']})",
        f"|BT(n)|          = {bt}  (~{approx['bt']})",
        f"|BP(n)|          = {bp}  (~{approx['bp']})",
        f"non-affine lower = {lower}  (~{approx['nonaffine_lower']})",
        f"non-affine upper = {upper}  (~{approx['nonaffine_upper']})",
    ]
    _emit(report, args.json, "\n".join(lines) + "\n")
    return 0


def cmd_construct(args: argparse.Namespace) -> int:
    spec = _resolve_field(args.poly, None)
    alpha = parse_int(args.alpha, "alpha")
    beta = parse_int(args.beta, "beta")
    try:
        params = construct.BinomialParams(alpha, beta, args.d, args.i, spec)
        base = construct.binomial_table(params)
        outcome = construct.repair(
            base,
            strategy=args.strategy,
            seed=args.seed,
            anneal_budget=args.anneal_budget,
            params=params,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None
    write_sbox_file(args.out, outcome.sbox)
    block = metrics_block(outcome.sbox)
    report = {
        "version": __version__,
        "poly": f"0x{spec.poly:x}",
        "metrics": block,
        "outcome": {
            "strategy": outcome.strategy,
            "seed": outcome.seed,
            "d": args.d,
            "i": args.i,
            "alpha": alpha,
            "beta": beta,
            "anneal_budget": args.anneal_budget if args.strategy == "anneal" else 0,
            "reassignments": [list(r) for r in outcome.reassignments],
            "out": args.out,
        },
    }
    lines = [
        f"base            {alpha}*x^{args.d} + {beta}*x^{1 << args.i}  over 0x{spec.poly:x}",
        f"strategy        {outcome.strategy_id}",
        f"reassignments   {len(outcome.reassignments)}",
        f"du              {block['du']}",
        f"nl              {block['nl']}",
        f"bijective       {block['bijective']}",
        f"wrote           {args.out}",
    ]
    _emit(report, args.json, "\n".join(lines) + "\n")
    return 0


def cmd_search(args: argparse.Namespace) -> int:
    if not 3 <= args.n <= 8:
        raise CliError(f"search supports 3 <= n <= 8, got {args.n}")
    spec = _resolve_field(args.poly, args.n)
    try:
        result = construct.coefficient_search(
            args.d,
            args.i,
            spec,
            strategy=args.strategy,
            seed=args.seed,
            anneal_budget=args.anneal_budget,
            keep=0,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None
    best = result.ranking[0]
    pairs = result.optimum_pairs()
    top = [
        {
            "alpha": int(r["alpha"]),
            "beta": int(r["beta"]),
            "du": int(r["du"]),
            "nl": int(r["nl"]),
            "degenerate": bool(r["degenerate"]),
        }
        for r in result.ranking[: args.top]
    ]
    report = {
        "version": __version__,
        "poly": f"0x{spec.poly:x}",
        "search": {
            "n": args.n,
            "d": args.d,
            "i": args.i,
            "strategy": args.strategy,
            "seed": args.seed,
            "anneal_budget": result.anneal_budget,
            "candidates": result.candidates,
            "best": {
                "alpha": int(best["alpha"]),
                "beta": int(best["beta"]),
                "du": int(best["du"]),
                "nl": int(best["nl"]),
            },
            "strong": result.meets(10, 100),
            "target_8_102": result.meets(8, 102),
            "optimum_pairs": [list(p) for p in pairs],
            "optimum_tied_three": len(pairs) == 3,
            "binomial_image_sizes": sorted(result.binomial_image_sizes()),
            "top": top,
        },
    }
    lines = [f"{'alpha':>6} {'beta':>6} {'du':>4} {'nl':>5}"]
    for r in top:
        flag = " (beta=0)" if r["degenerate"] else ""
        lines.append(f"{r['alpha']:>6} {r['beta']:>6} {r['du']:>4} {r['nl']:>5}{flag}")
    lines.append(
        f"best (du, nl) = ({int(best['du'])}, {int(best['nl'])}) at "
        f"(alpha, beta) = ({int(best['alpha'])}, {int(best['beta'])}) "
        f"over {result.candidates} candidates"
    )
    lines.append(
        f"strong (du<=10, nl>=100): {'yes' if result.meets(10, 100) else 'no'}; "
        f"target (8, 102) met: {'yes' if result.meets(8, 102) else 'no'}"
    )
    lines.append(
        f"{len(pairs)} pair(s) tie at the optimum"
        + (" (exactly three)" if len(pairs) == 3 else "")
    )
    _emit(report, args.json, "\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sboxforge",
        description="Analyze and construct bijective S-boxes over GF(2^n).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="metrics of an S-box file")
    p.add_argument("path")
    p.add_argument("--poly", help="field polynomial as hex bitmask (default per n)")
    p.add_argument("--ddt", action="store_true", help="embed the full DDT in the report")
    p.add_argument("--walsh", action="store_true", help="embed the Walsh table in the report")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("survey", help="classify all power maps x^d")
    p.add_argument("n", type=int)
    p.add_argument("--poly")
    p.add_argument("--du-max", type=int, dest="du_max")
    p.add_argument("--nl-min", type=int, dest="nl_min")
    p.add_argument("--bijective-only", action="store_true", dest="bijective_only")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("count", help="class sizes and non-affine permutation bounds")
    p.add_argument("n", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("construct", help="build one repaired bijective S-box")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--i", type=int, default=2)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--poly", default="0x11B")
    p.add_argument("--strategy", choices=["greedy", "anneal"], default="greedy")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--anneal-budget", type=int, default=construct.DEFAULT_ANNEAL_BUDGET,
                   dest="anneal_budget")
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="exhaustive coefficient search")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--i", type=int, default=2)
    p.add_argument("--poly")
    p.add_argument("--strategy", choices=["greedy", "anneal"], default="greedy")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--anneal-budget", type=int, default=construct.DEFAULT_ANNEAL_BUDGET,
                   dest="anneal_budget")
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_search)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 1
    except Exception as exc:  # pragma: no cover - internal failure path
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
