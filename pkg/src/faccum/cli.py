"""Command-line entry point: ``faccum <command> [options]``.

Exit status is 0 when every check passes, 2 when a check fails and 1 on
usage or domain errors.  Flags override fields of a ``--config`` JSON file,
and the merged settings are echoed in an ``effective-config`` block.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import __version__
from .exact import DomainError, Rational
from .transforms import KINDS, MomentSequence, OrderError, convert

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- serialization ------------------------------------------------------------

def _to_plain(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Rational) or (hasattr(x, "denominator") and hasattr(x, "numerator")):
        return {"num": str(x.numerator), "den": str(x.denominator)}
    if isinstance(x, float) or hasattr(x, "_mpf_"):
        return float(x)
    if isinstance(x, dict):
        return {str(k): _to_plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_to_plain(v) for v in x]
    if hasattr(x, "item"):
        return _to_plain(x.item())
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _float_text(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj, indent: int = 2) -> str:
    """JSON with rationals as {"num", "den"} strings and 17-digit floats."""

    def emit(x, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(x, dict):
            if not x:
                return "{}"
            items = [f"{pad}{json.dumps(k)}: {emit(v, level + 1)}" for k, v in x.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(x, list):
            if not x:
                return "[]"
            return "[\n" + ",\n".join(pad + emit(v, level + 1) for v in x) + "\n" + end + "]"
        if isinstance(x, float):
            return _float_text(x)
        return json.dumps(x)

    return emit(_to_plain(obj), 0) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_float_text(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _rational_cells(x):
    p = _to_plain(x)
    if isinstance(p, dict):
        return [p["num"], p["den"]]
    return [p, ""]


# -- config handling ---------------------------------------------------------------

DEFAULTS = {
    "identity": {"Jmax": 8, "Imax": 2, "boundary": False},
    "transform": {"input": None, "from_kind": None, "to_kind": "cumulant", "order": None},
    "scheme": {"spec": None, "moments": 4, "decomposition": False, "jtrunc": 10, "dps": 50, "residual_tol": 1e-9},
    "clt-report": {"spec_family": None, "grid": "100,1000,10000,100000", "Jmax": 4, "regime": None, "dps": 50},
    "simulate": {
        "spec": None, "reps": 10000, "seed": 0, "ks": False, "correlations": None, "rmax": None,
        "threads": None, "moments": 3, "ks_max": None, "rho_min": None,
    },
}
COMMON = {"format": "json", "output": None}


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid config JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def effective_config(command: str, args: argparse.Namespace) -> dict:
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    cfg = _load_config(getattr(args, "config", None))
    cfg.pop("command", None)
    out = dict(COMMON)
    out.update(DEFAULTS[command])
    unknown = set(cfg) - set(out)
    if unknown:
        raise UsageError(f"unknown config fields: {', '.join(sorted(unknown))}")
    out.update(cfg)
    out.update(flags)
    if out["format"] not in ("json", "csv"):
        raise UsageError("format must be json or csv")
    return out


def _spec_arg(value):
    from .schemes import SchemeSpec

    if value is None:
        raise UsageError("--spec is required")
    if isinstance(value, dict):
        return SchemeSpec.from_dict(value)
    text = value
    if value.startswith("@"):
        with open(value[1:]) as fh:
            text = fh.read()
    return SchemeSpec.from_json(text)


def _int_list(text):
    if isinstance(text, list):
        return [int(x) for x in text]
    try:
        return [int(float(x)) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"not a list of integers: {text!r}") from None


# -- commands -----------------------------------------------------------------------

def cmd_identity(cfg):
    from .identity import verify_boundary_nonvanishing, verify_vanishing_region

    J, I = int(cfg["Jmax"]), int(cfg["Imax"])
    report = verify_boundary_nonvanishing(J, I) if cfg["boundary"] else verify_vanishing_region(J, I)
    rows = [
        [c.J, c.I, " ".join(map(str, c.s)), c.value_numerator, c.value_denominator, c.in_vanishing_region]
        for c in report.cases
    ]
    return (
        report.ok,
        report.to_json(),
        ("J", "I", "s", "num", "den", "in_vanishing_region"),
        rows,
    )


def _read_moment_file(path):
    if path is None:
        raise UsageError("--input is required")
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read moment file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid moment file: {exc}") from None
    if not isinstance(data, dict) or "values" not in data:
        raise UsageError('moment file must be {"kind": ..., "values": [...]}')
    values = []
    for v in data["values"]:
        if isinstance(v, dict):
            v = f"{v['num']}/{v['den']}"
        values.append(v)
    return data.get("kind"), values


def cmd_transform(cfg):
    kind, values = _read_moment_file(cfg["input"])
    src = cfg["from_kind"] or kind
    if src is None:
        raise UsageError("input kind unknown; pass --from")
    if kind is not None and cfg["from_kind"] is not None and kind != cfg["from_kind"]:
        raise UsageError(f"--from {cfg['from_kind']} contradicts file kind {kind}")
    seq = MomentSequence(src, tuple(values))
    out = convert(seq, cfg["to_kind"], cfg["order"])
    body = {"kind": out.kind, "values": list(out.values)}
    rows = [[k] + _rational_cells(v) for k, v in enumerate(out.values, 1)]
    return True, body, ("k", "num", "den"), rows


def cmd_scheme(cfg):
    from .schemes import decomposition, decomposition_residual, factorial_moments, mean_and_variance

    spec = _spec_arg(cfg["spec"])
    K = int(cfg["moments"])
    dps = int(cfg["dps"])
    exact = spec.is_exact
    c = factorial_moments(spec, K, None if exact else dps)
    mean, var = mean_and_variance(spec, None if exact else dps)
    body = {
        "spec": spec.to_dict(),
        "exact": exact,
        "factorial_moments": list(c),
        "mean": mean,
        "variance": var,
    }
    ok = True
    rows = [[k] + _rational_cells(v) for k, v in enumerate(c, 1)]
    if cfg["decomposition"]:
        jt = int(cfg["jtrunc"])
        data = decomposition(spec, jt, dps)
        res = decomposition_residual(spec, min(K, 4), jt, dps)
        body["decomposition"] = data.to_json()
        body["decomposition"]["j_trunc"] = jt
        body["decomposition"]["residual"] = res
        ok = res < float(cfg["residual_tol"])
    return ok, body, ("k", "num", "den"), rows


def cmd_clt_report(cfg):
    from .diagnostics import condition_report, grid_specs

    fam = cfg["spec_family"]
    if fam is None:
        raise UsageError("--spec-family is required")
    regime = cfg["regime"]
    if isinstance(regime, str):
        try:
            regime = json.loads(regime)
        except json.JSONDecodeError as exc:
            raise UsageError(f"invalid --regime JSON: {exc}") from None
    grid = _int_list(cfg["grid"])
    report = condition_report(grid_specs(fam, grid, regime), int(cfg["Jmax"]), int(cfg["dps"]))
    rows = list(csv.reader(io.StringIO(report.to_csv())))
    return report.ok, report.to_json(), rows[0], rows[1:]


def cmd_simulate(cfg):
    from . import simulate as sim
    from .schemes import mean_and_variance

    spec = _spec_arg(cfg["spec"])
    reps = int(cfg["reps"])
    pairs = []
    if cfg["correlations"]:
        pairs = [tuple(_int_list(p.replace(":", ","))) for p in str(cfg["correlations"]).split(";")]
        if any(len(p) != 2 for p in pairs):
            raise UsageError("--correlations takes r1,r2 pairs separated by ';'")
    rmax = cfg["rmax"]
    need = max([max(p) for p in pairs], default=0)
    rmax = need if rmax is None else max(int(rmax), need)
    batch = sim.simulate(spec, reps, int(cfg["seed"]), rmax=rmax or None, threads=cfg["threads"])
    body = sim.summary(batch, int(cfg["moments"]))
    ok = True
    if cfg["ks"]:
        m, v = mean_and_variance(spec, None if spec.is_exact else 30)
        ks = sim.ks_to_normal(batch, float(m), math.sqrt(float(v)))
        body["ks"] = ks.to_json()
        if cfg["ks_max"] is not None:
            ok &= ks.statistic < float(cfg["ks_max"])
    if pairs:
        body["correlations"] = []
        for r1, r2 in pairs:
            est = sim.empirical_correlation(batch, r1, r2)
            body["correlations"].append({"r1": r1, "r2": r2, **est.to_json()})
            if cfg["rho_min"] is not None:
                ok &= abs(est.value) > float(cfg["rho_min"])
    rows = list(csv.reader(io.StringIO(batch.to_csv())))
    return ok, body, rows[0], rows[1:]


COMMANDS = {
    "identity": cmd_identity,
    "transform": cmd_transform,
    "scheme": cmd_scheme,
    "clt-report": cmd_clt_report,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="faccum", description="Factorial cumulants, partition identities and occupancy schemes.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def command(name, help_):
        sp = sub.add_parser(name, help=help_, argument_default=argparse.SUPPRESS)
        sp.add_argument("--config", default=None, help="JSON file of default settings")
        sp.add_argument("--output", "-o", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"))
        return sp

    sp = command("identity", "verify the partition identity sweep")
    sp.add_argument("--Jmax", type=int)
    sp.add_argument("--Imax", type=int)
    sp.add_argument("--boundary", action="store_true", help="sweep the boundary sum(s) = J + I - 1")

    sp = command("transform", "convert a moment sequence between kinds")
    sp.add_argument("--input", help='JSON file {"kind": ..., "values": [...]}')
    sp.add_argument("--from", dest="from_kind", choices=KINDS)
    sp.add_argument("--to", dest="to_kind", choices=KINDS)
    sp.add_argument("--order", type=int)

    sp = command("scheme", "factorial moments and log decomposition of one scheme")
    sp.add_argument("--spec", help="scheme JSON, or @file")
    sp.add_argument("--moments", type=int, metavar="K")
    sp.add_argument("--decomposition", action="store_true")
    sp.add_argument("--jtrunc", type=int)
    sp.add_argument("--dps", type=int)
    sp.add_argument("--residual-tol", dest="residual_tol", type=float)

    sp = command("clt-report", "CLT condition diagnostics along an n grid")
    sp.add_argument("--spec-family", dest="spec_family")
    sp.add_argument("--grid", help="comma-separated increasing n values")
    sp.add_argument("--Jmax", type=int)
    sp.add_argument("--regime", help="JSON object overriding the family's default regime")
    sp.add_argument("--dps", type=int)

    sp = command("simulate", "Monte Carlo run of one scheme")
    sp.add_argument("--spec", help="scheme JSON, or @file")
    sp.add_argument("--reps", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--ks", action="store_true", help="KS distance to the normal with exact mean and sd")
    sp.add_argument("--correlations", help="r1,r2 pairs separated by ';'")
    sp.add_argument("--rmax", type=int)
    sp.add_argument("--threads", type=int)
    sp.add_argument("--moments", type=int, metavar="K")
    sp.add_argument("--ks-max", dest="ks_max", type=float, help="fail (exit 2) if KS is not below this")
    sp.add_argument("--rho-min", dest="rho_min", type=float, help="fail (exit 2) if |rho| is not above this")
    return p


def _check_output(path):
    if path is None:
        return
    d = os.path.dirname(os.path.abspath(path)) or "."
    if not os.path.isdir(d) or not os.access(d, os.W_OK):
        raise UsageError(f"cannot write to {path}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        cfg = effective_config(args.command, args)
        _check_output(cfg["output"])
        ok, body, header, rows = COMMANDS[args.command](cfg)
    except (UsageError, DomainError, OrderError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg["format"] == "csv":
        text = _csv_text(header, rows)
    else:
        text = dumps({"command": args.command, "ok": ok, "effective-config": cfg, "result": body})
    if cfg["output"] is None:
        sys.stdout.write(text)
    else:
        with open(cfg["output"], "w") as fh:
            fh.write(text)
    return EXIT_OK if ok else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
