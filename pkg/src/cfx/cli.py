"""Batch command-line front end.

Subcommands: convergents, eval, diff-table, verify, compare.  Every command
assembles one OutputRecord (schema version 1) and renders it as text, CSV or
JSON with identical numeric content.  Exact rationals are serialized as
"num/den" digit strings (bare integer when the denominator is 1); decimal
strings carry exactly the requested number of significant digits.

Exit status contract: 0 success, 1 verification failure, 2 usage error,
3 domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict
from fractions import Fraction

from mpmath import mp, mpf

from . import engine, families, identities, oracle
from .kernel import ComplexParam, DomainError, NonConvergenceError, ParameterError, to_mp

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3

DEFAULT_DIGITS = 30
DEFAULT_DEPTH = 50

# Constant label per family, used by `compare` to refuse mixed lists.
def _constant_label(family_id: str, params: dict) -> str:
    if family_id in ("e-euler", "e-regular", "e-over", "e-sporadic"):
        return "e"
    if family_id == "exp-n":
        return "e" if params.get("n") == 1 else f"e^{params['n']}"
    if family_id == "e-squared":
        return "e^2"
    if family_id == "e-one-over-M":
        return f"e^(1/{params['M']})"
    if family_id == "exp-inv-n":
        return f"e^(1/{params['n']})"
    if family_id == "rat-exp":
        frac = Fraction(params["l"], params["n"])
        return f"e^({frac.numerator}/{frac.denominator})"
    if family_id in ("confluent-1f1", "m-fraction-diagonal", "inc-gamma"):
        return "1f1-diag"
    if family_id == "m-fraction":
        return f"1f1(b={params['b']})"
    if family_id == "exp-n-shifted":
        return f"shifted({params['n']})"
    return family_id


def fraction_str(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, int):
        return str(v)
    return decimal_str(v, DEFAULT_DIGITS)


def decimal_str(v, digits: int) -> str:
    """Decimal string with exactly ``digits`` significant digits."""
    with mp.workdps(digits + 10):
        x = to_mp(v)
        return mp.nstr(x, digits, strip_zeros=False)


def _oracle_value(family_id: str, params: dict, digits: int):
    """Independent series value of the family's target constant, or None."""
    if family_id in ("e-euler", "e-regular", "e-over", "e-sporadic"):
        return oracle.exp_series(1, digits).value
    if family_id == "exp-n":
        return oracle.exp_series(params["n"], digits).value
    if family_id == "e-squared":
        return oracle.exp_series(2, digits).value
    if family_id == "e-one-over-M":
        return oracle.exp_series(Fraction(1, params["M"]), digits).value
    if family_id == "exp-inv-n":
        return oracle.exp_series(Fraction(1, params["n"]), digits).value
    if family_id == "rat-exp":
        return oracle.exp_series(Fraction(params["l"], params["n"]), digits).value
    if family_id in ("confluent-1f1", "inc-gamma", "m-fraction-diagonal"):
        return oracle.inc_gamma_normalized(params["z"], digits).value
    if family_id == "m-fraction":
        b = ComplexParam.coerce(params["b"])
        return oracle.hyp_1f1(ComplexParam(b.re + 1, b.im), params["z"], digits).value
    return None


def _spec_params(args) -> dict:
    params = {}
    for key in ("n", "l", "M"):
        v = getattr(args, key, None)
        if v is not None:
            params[key] = v
    for key in ("z", "b"):
        v = getattr(args, key, None)
        if v is not None:
            params[key] = ComplexParam.parse(v)
    return params


def _record(command: str, parameters: dict, rows: list, diagnostics: dict) -> dict:
    return {
        "schema": 1,
        "command": command,
        "parameters": parameters,
        "rows": rows,
        "diagnostics": diagnostics,
    }


def _param_repr(params: dict) -> dict:
    return {k: (str(v) if isinstance(v, (ComplexParam, Fraction)) else v) for k, v in params.items()}


def cmd_convergents(args) -> tuple[dict, int]:
    params = _spec_params(args)
    spec = families.make_family(args.expansion, **params)
    convs = engine.convergents(spec, args.depth)
    rows = []
    for c in convs:
        singular = c.value is None
        rows.append(
            {
                "k": c.k,
                "p_raw": fraction_str(c.p_raw) if spec.exact else decimal_str(c.p_raw, args.digits),
                "q_raw": fraction_str(c.q_raw) if spec.exact else decimal_str(c.q_raw, args.digits),
                "value": "singular" if singular else fraction_str(c.value),
                "decimal": "singular" if singular else decimal_str(c.value, args.digits),
            }
        )
    record = _record(
        "convergents",
        {"expansion": args.expansion, **_param_repr(params), "depth": args.depth, "digits": args.digits},
        rows,
        {},
    )
    return record, EXIT_OK


def cmd_eval(args) -> tuple[dict, int]:
    params = _spec_params(args)
    spec = families.make_family(args.expansion, **params)
    value, depth = engine.estimate_limit(spec, args.digits)
    oracle_delta = None
    with mp.workdps(args.digits + 15):
        target = _oracle_value(args.expansion, params, args.digits)
        if target is not None:
            oracle_delta = mp.nstr(abs(to_mp(value) - target), 5)
    rows = [
        {
            "value": decimal_str(value, args.digits),
            "achieved_depth": depth,
            "oracle_delta": oracle_delta,
        }
    ]
    record = _record(
        "eval",
        {"expansion": args.expansion, **_param_repr(params), "digits": args.digits},
        rows,
        {},
    )
    return record, EXIT_OK


def cmd_diff_table(args) -> tuple[dict, int]:
    if args.n < 1:
        raise ParameterError("diff-table requires --n >= 1")
    spec = families.make_exp_n(args.n)
    convs = engine.convergents(spec, args.depth)
    rows = []
    for k in range(1, args.depth + 1):
        direct = convs[k].value - convs[k - 1].value
        formula = identities.difference_formula(args.n, k)
        rows.append(
            {
                "k": k,
                "difference": fraction_str(direct),
                "formula": fraction_str(formula),
                "match": direct == formula,
            }
        )
    record = _record(
        "diff-table",
        {"n": args.n, "depth": args.depth},
        rows,
        {},
    )
    return record, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    selection = "all" if args.suite == "all" else [s.strip() for s in args.suite.split(",")]
    if selection != "all":
        unknown = [s for s in selection if s not in identities.SUITE_IDS]
        if unknown:
            raise ParameterError(f"unknown suite ids: {unknown}")
    reports = identities.run_suite(
        selection, max_n=args.max_n, k_max=args.depth, digits=args.digits
    )
    rows = [asdict(r) for r in reports]
    n_failed = sum(1 for r in reports if not r.passed)
    record = _record(
        "verify",
        {"suite": args.suite, "max_n": args.max_n, "depth": args.depth, "digits": args.digits},
        rows,
        {"total": len(reports), "failed": n_failed},
    )
    return record, EXIT_OK if n_failed == 0 else EXIT_VERIFY_FAIL


def cmd_compare(args) -> tuple[dict, int]:
    ids = [s.strip() for s in args.expansions.split(",") if s.strip()]
    if not ids:
        raise ParameterError("--expansions must list at least one family")
    params = _spec_params(args)
    specs, labels = [], []
    for fid in ids:
        if fid not in families.FAMILY_IDS:
            raise ParameterError(f"unknown family {fid!r}")
        fam_params = {
            k: v for k, v in params.items() if k in _family_param_names(fid)
        }
        specs.append(families.make_family(fid, **fam_params))
        labels.append(_constant_label(fid, fam_params))
    if len(set(labels)) > 1:
        raise ParameterError(
            f"expansions evaluate different constants: {sorted(set(labels))}"
        )
    conv_lists = [engine.convergents(s, args.depth) for s in specs]
    rows = []
    for k in range(args.depth + 1):
        row = {"k": k}
        for s, convs in zip(specs, conv_lists):
            v = convs[k].value
            row[s.name] = "singular" if v is None else fraction_str(v)
        rows.append(row)
    matrix = {}
    for i in range(len(specs)):
        for j in range(i + 1, len(specs)):
            _, idx = families.same_convergents(specs[i], specs[j], args.depth)
            matrix[f"{specs[i].name}|{specs[j].name}"] = idx
    with mp.workdps(args.digits + 15):
        limits = [to_mp(engine.estimate_limit(s, args.digits)[0]) for s in specs]
        agree = all(
            abs(limits[0] - v) <= mpf(10) ** (-(args.digits - 2)) * max(1, abs(limits[0]))
            for v in limits[1:]
        )
    record = _record(
        "compare",
        {
            "value": args.value,
            "expansions": ids,
            **_param_repr(params),
            "depth": args.depth,
            "digits": args.digits,
        },
        rows,
        {"first_differing_index": matrix, "limits_agree": agree},
    )
    return record, EXIT_OK


def _family_param_names(fid: str) -> tuple[str, ...]:
    return {
        "exp-n": ("n",),
        "exp-n-shifted": ("n",),
        "exp-inv-n": ("n",),
        "rat-exp": ("l", "n"),
        "inc-gamma": ("z",),
        "confluent-1f1": ("z",),
        "m-fraction": ("b", "z"),
        "m-fraction-diagonal": ("z",),
        "e-one-over-M": ("M",),
    }.get(fid, ())


# ---------------------------------------------------------------------------
# Rendering


def render_text(record: dict) -> str:
    out = io.StringIO()
    out.write(f"# {record['command']}")
    for key, value in record["parameters"].items():
        out.write(f" {key}={value}")
    out.write("\n")
    rows = record["rows"]
    if rows:
        columns = list(rows[0].keys())
        table = [[_cell(r.get(c)) for c in columns] for r in rows]
        widths = [
            max(len(col), *(len(row[i]) for row in table)) for i, col in enumerate(columns)
        ]
        out.write("  ".join(col.ljust(w) for col, w in zip(columns, widths)).rstrip() + "\n")
        for row in table:
            out.write("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() + "\n")
    for key, value in record["diagnostics"].items():
        if key != "runtime_seconds":
            out.write(f"{key}: {value}\n")
    return out.getvalue()


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def render_csv(record: dict) -> str:
    out = io.StringIO()
    writer = csv.writer(out, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
    rows = record["rows"]
    if rows:
        columns = list(rows[0].keys())
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_cell(r.get(c)) for c in columns])
    return out.getvalue()


def render_json(record: dict) -> str:
    return json.dumps(record, indent=2, sort_keys=True, default=str) + "\n"


def render(record: dict, fmt: str) -> str:
    if fmt == "text":
        return render_text(record)
    if fmt == "csv":
        return render_csv(record)
    return render_json(record)


# ---------------------------------------------------------------------------
# Argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep exit status 2, argparse default
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cfx", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, depth=True):
        p.add_argument("--digits", type=int, default=DEFAULT_DIGITS)
        if depth:
            p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
        p.add_argument("--format", choices=("text", "csv", "json"), default="text")

    def add_family_params(p):
        p.add_argument("--expansion", required=True, choices=families.FAMILY_IDS)
        p.add_argument("--n", type=int)
        p.add_argument("--l", type=int)
        p.add_argument("--M", type=int)
        p.add_argument("--z", type=str)
        p.add_argument("--b", type=str)

    p = sub.add_parser("convergents", help="tabulate raw and reduced convergents")
    add_family_params(p)
    add_common(p)
    p.set_defaults(fn=cmd_convergents)

    p = sub.add_parser("eval", help="evaluate an expansion to a digit target")
    add_family_params(p)
    add_common(p, depth=False)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("diff-table", help="successive differences vs closed form")
    p.add_argument("--n", type=int, required=True)
    add_common(p)
    p.set_defaults(fn=cmd_diff_table)

    p = sub.add_parser("verify", help="run the identity verification suite")
    p.add_argument("--suite", default="all")
    p.add_argument("--max-n", dest="max_n", type=int, default=6)
    p.add_argument("--depth", type=int, default=50)
    p.add_argument("--digits", type=int, default=40)
    p.add_argument("--format", choices=("text", "csv", "json"), default="json")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("compare", help="compare expansions of the same constant")
    p.add_argument("--value", required=True)
    p.add_argument("--expansions", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--z", type=str)
    p.add_argument("--b", type=str)
    add_common(p)
    p.set_defaults(fn=cmd_compare)

    return parser


def _merge_complex_flags(argv: list[str]) -> list[str]:
    """Rewrite `--z -3+0i` as `--z=-3+0i` so argparse does not read the
    negative literal as an option string."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--z", "--b") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _merge_complex_flags(list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    start = time.monotonic()
    try:
        record, status = args.fn(args)
    except ParameterError as exc:
        print(f"cfx: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"cfx: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NonConvergenceError as exc:
        print(f"cfx: depth cap reached before convergence: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAIL
    record["diagnostics"]["runtime_seconds"] = round(time.monotonic() - start, 3)
    sys.stdout.write(render(record, getattr(args, "format", "json")))
    return status


if __name__ == "__main__":
    sys.exit(main())
