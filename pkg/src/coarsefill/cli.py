"""Command-line front end: verification suites and data-emitting experiments.

Exit codes: 0 all checks pass (or are demonstrated), 1 some check failed,
2 usage error, 3 aborted on the time budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from . import __version__
from . import asymptotics as asy
from . import filling as fl
from . import spaces as sp
from . import suites
from . import weyl as wy

SCHEMA = "report-v1"
OUTPUT_DIR_ENV = "COARSEFILL_OUTPUT_DIR"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ABORTED = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    action: str
    params: Dict = field(default_factory=dict)
    format: str = "json"
    output: Optional[str] = None

    def echo(self) -> dict:
        return {"command": self.command, "action": self.action, "format": self.format, **self.params}


# --- argument parsing -------------------------------------------------------

def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"{text} is not a positive integer")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0 or math.isinf(value):
        raise argparse.ArgumentTypeError(f"{text} is not a positive number")
    return value


def _build_parser(suppress: bool = False) -> argparse.ArgumentParser:
    """The parser; with ``suppress`` every default is omitted so that only
    options given explicitly on the command line show up in the namespace.
    """
    kw = {"argument_default": argparse.SUPPRESS} if suppress else {}

    def default(value):
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False, **kw)
    common.add_argument("--format", choices=("json", "csv"), default=default("json"))
    common.add_argument("--output", "-o", default=default(None), help="file to write (default: stdout)")
    common.add_argument("--config", default=default(None), help="JSON file of option values; flags override it")

    parser = argparse.ArgumentParser(prog="coarsefill", description=__doc__.splitlines()[0], **kw)
    parser.add_argument("--version", action="version", version=f"coarsefill {__version__}")
    top = parser.add_subparsers(dest="command", required=True)

    verify = top.add_parser("verify", parents=[common], help="run verification suites", **kw)
    verify.add_argument("suite", choices=suites.SUITES + ("all",))
    verify.add_argument("--seed", type=int, default=default(1))
    verify.add_argument("--trials", type=_positive_int, default=default(200))
    verify.add_argument("--n-max", type=_positive_int, default=default(4))
    verify.add_argument("--p-max", type=_positive_int, default=default(3))
    verify.add_argument("--time-budget", type=_positive_float, default=default(None),
                        help="seconds before the run is aborted")

    spaces = top.add_parser("spaces", help="growth and distortion tables", **kw)
    sp_sub = spaces.add_subparsers(dest="action", required=True)
    growth = sp_sub.add_parser("growth", parents=[common], **kw)
    growth.add_argument("--space", default=default("t3"))
    growth.add_argument("--eps", type=_positive_float, default=default(1.0))
    growth.add_argument("--rmax", type=_positive_int, default=default(10))
    growth.add_argument("--method", choices=("auto", "greedy", "ilp"), default=default("auto"))
    distort = sp_sub.add_parser("distort", parents=[common], **kw)
    distort.add_argument("--map", default=default("horo1"))
    distort.add_argument("--rmax", type=_positive_int, default=default(10_000))
    distort.add_argument("--points", type=_positive_int, default=default(41),
                         help="number of log-spaced radii")

    filling = top.add_parser("filling", help="filling-volume experiments", **kw)
    fl_sub = filling.add_subparsers(dest="action", required=True)
    scale = fl_sub.add_parser("scale", parents=[common], **kw)
    scale.add_argument("--family", choices=("z2-rect", "tree-endpoints"), default=default("z2-rect"))
    scale.add_argument("--lmin", type=_positive_int, default=default(40))
    scale.add_argument("--lmax", type=_positive_int, default=default(400))
    scale.add_argument("--steps", type=_positive_int, default=default(10))

    weyl = top.add_parser("weyl", help="root systems and sector generators", **kw)
    wy_sub = weyl.add_subparsers(dest="action", required=True)
    insp = wy_sub.add_parser("inspect", parents=[common], **kw)
    insp.add_argument("--type", dest="type_label", default=default(None))
    insp.add_argument("--rank", type=_positive_int, default=default(None))
    insp.add_argument("--label", default=default(None), help="product label such as A1xA1")

    asym = top.add_parser("asym", help="exponent sequences", **kw)
    as_sub = asym.add_subparsers(dest="action", required=True)
    beta = as_sub.add_parser("beta", parents=[common], **kw)
    beta.add_argument("--k", type=int, default=default(6))
    phi = as_sub.add_parser("phi", parents=[common], **kw)
    phi.add_argument("--k", type=int, default=default(4))
    phi.add_argument("--grid", default=default("log:1e2:1e6:9"))
    phi.add_argument("--family", choices=("beta", "alpha"), default=default("beta"))
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    """Defaults, then the ``--config`` file, then explicit flags."""
    parser = _build_parser()
    ns = vars(parser.parse_args(argv))
    explicit = vars(_build_parser(suppress=True).parse_args(argv))
    merged = dict(ns)
    if ns.get("config"):
        try:
            with open(ns["config"]) as fh:
                file_values = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config file: {exc}")
        if not isinstance(file_values, dict):
            parser.error("config file must hold a JSON object")
        for key, value in file_values.items():
            dest = key.replace("-", "_")
            if dest not in ns or dest in ("command", "action", "suite", "config"):
                parser.error(f"unknown config key {key!r}")
            if dest not in explicit:
                merged[dest] = value
    command = merged.pop("command")
    action = merged.pop("action", None) or merged.pop("suite")
    merged.pop("suite", None)
    merged.pop("config", None)
    fmt = merged.pop("format")
    output = merged.pop("output")
    if fmt not in ("json", "csv"):
        parser.error(f"invalid format {fmt!r}")
    cfg = RunConfig(command, action, merged, fmt, output)
    try:
        _validate(cfg)
    except UsageError as exc:
        parser.error(str(exc))
    return cfg


def _validate(cfg: RunConfig) -> None:
    p = cfg.params
    for key in ("trials", "n_max", "p_max", "rmax", "lmin", "lmax", "steps", "points"):
        if key in p and (not isinstance(p[key], int) or p[key] <= 0):
            raise UsageError(f"{key} must be a positive integer")
    if cfg.command == "verify":
        if not isinstance(p["seed"], int) or isinstance(p["seed"], bool):
            raise UsageError("--seed must be an integer")
        if p["n_max"] > 6:
            raise UsageError("--n-max above 6 is out of range")
        if p["p_max"] > 6:
            raise UsageError("--p-max above 6 is out of range")
        if p["time_budget"] is not None and not float(p["time_budget"]) > 0:
            raise UsageError("time budget must be positive")
    if cfg.command == "filling" and p["lmin"] > p["lmax"]:
        raise UsageError("--lmin exceeds --lmax")
    if cfg.command == "asym":
        low = 2 if cfg.action == "beta" else 1
        if not low <= p["k"] <= 10:
            raise UsageError(f"--k must lie in {low}..10")
    if cfg.command == "weyl":
        if p["label"] is None and (p["type_label"] is None or p["rank"] is None):
            raise UsageError("give --type and --rank, or --label")
        if p["label"] is not None and p["type_label"] is not None:
            raise UsageError("--label conflicts with --type")


# --- commands ---------------------------------------------------------------

@dataclass
class Result:
    data: dict
    exit_code: int
    rows: Optional[List[List]] = None
    header: Optional[List[str]] = None
    trailer: Optional[List[str]] = None


def _report(cfg: RunConfig, suite: str, records: List[tuple]) -> Result:
    checks = [{"suite": s, **c.to_json()} for s, c in records]
    statuses = [c.status for _, c in records]
    if "aborted" in statuses:
        overall, code = "aborted", EXIT_ABORTED
    elif "fail" in statuses:
        overall, code = "fail", EXIT_FAIL
    else:
        overall, code = "pass", EXIT_OK
    counts = {k: statuses.count(k) for k in ("pass", "demonstrated", "fail", "aborted")}
    data = {
        "schema": SCHEMA,
        "tool": {"name": "coarsefill", "version": __version__},
        "suite": suite,
        "config": cfg.echo(),
        "status": overall,
        "summary": counts,
        "checks": checks,
    }
    rows = [[s, c.name, c.status] for s, c in records]
    return Result(data, code, rows, ["suite", "check", "status"])


def cmd_verify(cfg: RunConfig) -> Result:
    p = cfg.params
    names = suites.SUITES if cfg.action == "all" else (cfg.action,)
    ctx = suites.Context(seed=p["seed"], trials=p["trials"], n_max=p["n_max"], p_max=p["p_max"],
                         time_budget=p["time_budget"])
    return _report(cfg, cfg.action, suites.run_suites(names, ctx))


def cmd_growth(cfg: RunConfig) -> Result:
    p = cfg.params
    space = sp.parse_space(p["space"])
    table = sp.growth_table(space, p["eps"], list(range(0, p["rmax"] + 1)), method=p["method"])
    rows = [[row.r, row.lower, row.upper] for row in table.rows]
    radii = [row.r for row in table.rows if row.r > 0]
    rate = sp.fit_exponential_rate(radii, [row.upper for row in table.rows if row.r > 0]) if len(radii) > 1 else None
    data = {"schema": SCHEMA, "space": space.name, "epsilon": table.epsilon,
            "basepoint": list(table.basepoint), "basepoint_policy": table.basepoint_policy,
            "rows": [{"r": r, "lower": lo, "upper": hi} for r, lo, hi in rows], "exponential_rate": rate}
    return Result(data, EXIT_OK, rows, ["r", "lower", "upper"], [f"exponential_rate={rate}"])


def cmd_distort(cfg: RunConfig) -> Result:
    p = cfg.params
    f = sp.parse_map(p["map"])
    radii = sorted({int(round(r)) for r in _log_radii(p["rmax"], p["points"])})
    pairs = sp.radial_pairs(f.source, radii)
    rows = []
    for r, (x, y) in zip(radii, pairs):
        d = f.image_distance(x, y)
        ref = 2 * math.log(r) if r > 0 else 0.0
        rows.append([r, d, ref, d - ref])
    profile = sp.control_function_profile(f, pairs)
    data = {"schema": SCHEMA, "map": f.name, "flags": list(profile.flags),
            "rows": [dict(zip(("r", "d_image", "2ln_r", "gap"), row)) for row in rows]}
    return Result(data, EXIT_OK, rows, ["r", "d_image", "2ln_r", "gap"], [f"flags={' '.join(profile.flags)}"])


def _log_radii(rmax: int, points: int) -> List[float]:
    if points == 1 or rmax == 1:
        return [float(rmax)]
    return [math.exp(math.log(rmax) * i / (points - 1)) for i in range(points)]


def cmd_scale(cfg: RunConfig) -> Result:
    p = cfg.params
    per = 4 if p["family"] == "z2-rect" else 1
    lo, hi = max(1, -(-p["lmin"] // per)), max(1, p["lmax"] // per)
    steps = min(p["steps"], hi - lo + 1)
    sizes = sorted({round(lo + (hi - lo) * i / (steps - 1)) for i in range(steps)}) if steps > 1 else [lo]
    res = fl.filling_scaling_experiment(p["family"], sizes)
    rows = [[ell, mass] for ell, mass in res.table]
    data = {"schema": SCHEMA, "family": res.family, "rows": [{"ell": e, "fill_mass": m} for e, m in rows],
            "exponent": res.exponent}
    return Result(data, EXIT_OK, rows, ["ell", "fill_mass"], [f"exponent={res.exponent}"])


def cmd_inspect(cfg: RunConfig) -> Result:
    p = cfg.params
    try:
        rs = wy.parse_label(p["label"]) if p["label"] else wy.root_system(p["type_label"], p["rank"])
    except wy.WeylError as exc:
        raise UsageError(str(exc)) from None
    info = wy.inspect(rs)
    header = ["generator"] + [f"<e_i,e_{j}>" for j in range(len(info["generators"]))] + ["coordinates"]
    rows = [[i] + info["generator_gram"][i] + [" ".join(g)] for i, g in enumerate(info["generators"])]
    return Result({"schema": SCHEMA, **info}, EXIT_OK, rows, header)


def cmd_beta(cfg: RunConfig) -> Result:
    seq = asy.beta_sequence(cfg.params["k"])
    checks = asy.verify_beta_conditions(seq)
    ext = asy.extension_impossibility(seq)
    data = {"schema": SCHEMA, **seq.to_json(), "checks": [c.to_json() for c in checks],
            "normalized_checks": [c.to_json() for c in asy.verify_beta_conditions(asy.BetaSequence(seq.normalized))],
            "differences": ext.to_json()}
    code = EXIT_OK if all(c.ok for c in checks) else EXIT_FAIL
    rows = [[n + 1, r, q, s] for n, (r, q, s) in
            enumerate(zip(data["raw"], data["normalized"], data["partial_sums"]))]
    return Result(data, code, rows, ["n", "beta", "normalized", "partial_sum"])


def cmd_phi(cfg: RunConfig) -> Result:
    p = cfg.params
    try:
        grid = asy.parse_grid(p["grid"])
    except asy.AsymptoticsError as exc:
        raise UsageError(str(exc)) from None
    k = p["k"]
    if p["family"] == "beta":
        fam = asy.PhiFamily.from_beta(asy.beta_sequence(max(k, 2)))
    else:
        fam = asy.PhiFamily.harmonic(k)
    rep = asy.phi_family_report(fam, k, grid)
    code = EXIT_OK if all(c.ok for c in rep.checks) else EXIT_FAIL
    header = ["d"] + [f"phi_{i}" for i in rep.phi] + [f"ratio_p{q}" for q in rep.product_ratios]
    rows = [[d] + [rep.phi[i][j] for i in rep.phi] + [rep.product_ratios[q][j] for q in rep.product_ratios]
            for j, d in enumerate(rep.grid)]
    return Result({"schema": SCHEMA, **rep.to_json()}, code, rows, header,
                  [f"{c.name}={c.status}" for c in rep.checks])


COMMANDS = {
    ("spaces", "growth"): cmd_growth,
    ("spaces", "distort"): cmd_distort,
    ("filling", "scale"): cmd_scale,
    ("weyl", "inspect"): cmd_inspect,
    ("asym", "beta"): cmd_beta,
    ("asym", "phi"): cmd_phi,
}


def run(cfg: RunConfig) -> Result:
    if cfg.command == "verify":
        return cmd_verify(cfg)
    return COMMANDS[(cfg.command, cfg.action)](cfg)


# --- output -----------------------------------------------------------------

def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.data, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.header)
    writer.writerows(result.rows)
    for line in result.trailer or ():
        buf.write(f"# {line}\n")
    return buf.getvalue()


def _destination(cfg: RunConfig) -> Optional[str]:
    if cfg.output:
        return cfg.output
    directory = os.environ.get(OUTPUT_DIR_ENV)
    if directory:
        name = f"{cfg.command}-{cfg.action}.{cfg.format}"
        return os.path.join(directory, name)
    return None


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0) and EXIT_USAGE
    try:
        result = run(cfg)
    except (UsageError, sp.SpaceError, fl.FillingError, asy.AsymptoticsError, wy.WeylError) as exc:
        print(f"coarsefill: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(result, cfg.format)
    dest = _destination(cfg)
    if dest is None:
        sys.stdout.write(text)
    else:
        os.makedirs(os.path.dirname(os.path.abspath(dest)), exist_ok=True)
        with open(dest, "w") as fh:
            fh.write(text)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
