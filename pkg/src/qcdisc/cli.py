"""Command-line frontend: ``qcdisc {div,bounds,gad,simulate,check}``.

Exit codes: 0 on success, 1 when a property suite fails, 2 on usage or input
errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import chandiv as cd
from . import checks
from . import divergences as dv
from . import exponents as ex
from . import protosim as ps
from .exceptions import QcdError
from .jsonio import load_channel, load_state, strategy_to_json, write_json

DEFAULT_SEED = 42


class UsageError(Exception):
    pass


def _num(x: float) -> str:
    """Shortest round-trip decimal; infinities as ``inf``/``-inf``."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _fixed(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if abs(x) < 5e-13:
        x = 0.0  # no "-0.000000000000" from rounding noise
    return f"{x:.12f}"


def _search_opts(args) -> cd.SearchOptions:
    kw = {"seed": args.seed}
    if getattr(args, "multistarts", None):
        kw["multistarts"] = args.multistarts
    return cd.SearchOptions(**kw)


# --------------------------------------------------------------------------
# div
# --------------------------------------------------------------------------


def cmd_div(args) -> int:
    kind = dv.parse_kind(args.kind, args.alpha)
    if kind.tag in ("PETZ", "SANDWICHED", "LOG_EUCLIDEAN", "HILBERT") and kind.alpha is None:
        raise UsageError(f"{args.kind} needs --alpha")
    rho, sigma = load_state(args.rho), load_state(args.sigma)
    print(_fixed(dv.divergence(kind, rho, sigma)))
    return 0


# --------------------------------------------------------------------------
# bounds
# --------------------------------------------------------------------------

_SETTINGS = {
    "stein": ex.STEIN,
    "han-kobayashi": ex.HAN_KOBAYASHI,
    "hk": ex.HAN_KOBAYASHI,
    "strong-converse": ex.HAN_KOBAYASHI,
    "hoeffding": ex.HOEFFDING,
    "chernoff": ex.CHERNOFF,
}

BOUNDS_COLUMNS = ["setting", "n", "lower", "lower_rule", "upper", "upper_rule", "tight"]


def _setting(name: str, args) -> ex.Setting:
    tag = _SETTINGS.get(name.lower())
    if tag is None:
        raise UsageError(f"unknown setting {name!r}; choose from {', '.join(sorted(_SETTINGS))}")
    if tag == ex.STEIN:
        return ex.Setting.stein(args.epsilon)
    if tag == ex.CHERNOFF:
        return ex.Setting.chernoff(args.prior)
    if args.rate is None:
        raise UsageError(f"{name} needs --rate")
    return ex.Setting(tag, float(args.rate))


def _table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
    fmt = lambda r: "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
    return "\n".join([fmt(header), fmt(["-" * w for w in widths])] + [fmt(r) for r in rows])


def cmd_bounds(args) -> int:
    setting = _setting(args.setting, args)
    N, M = load_channel(args.N), load_channel(args.M)
    n = math.inf if args.n is None else float(args.n)
    rep = ex.bounds_report(N, M, setting, n, opts=_search_opts(args))
    row = [str(setting), _num(n), _num(rep.lower), rep.lower_tag, _num(rep.upper), rep.upper_tag, str(rep.tight).lower()]
    print(_table(BOUNDS_COLUMNS, [row]))
    if args.out:
        _write_csv(Path(args.out), BOUNDS_COLUMNS, [row])
    return 0


def _csv_text(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write_csv(path: Path, header: list[str], rows: list[list[str]]):
    if path.suffix != ".csv":
        path.mkdir(parents=True, exist_ok=True)
        path = path / "bounds.csv"
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(_csv_text(header, rows))


# --------------------------------------------------------------------------
# gad
# --------------------------------------------------------------------------

PLOT_SCRIPT = '''"""Heat map of the Stein bound difference for a GAD grid; run with matplotlib installed."""
import csv
import sys

import matplotlib.pyplot as plt
import numpy as np

path = sys.argv[1] if len(sys.argv) > 1 else "{csv}"
with open(path) as f:
    rows = list(csv.DictReader(f))
p1 = sorted({{float(r["p1"]) for r in rows}})
p2 = sorted({{float(r["p2"]) for r in rows}})
diff = np.full((len(p2), len(p1)), np.nan)
for r in rows:
    v = float(r["diff"])
    diff[p2.index(float(r["p2"])), p1.index(float(r["p1"]))] = v if np.isfinite(v) else np.nan
fig, ax = plt.subplots(figsize=(5, 4))
im = ax.imshow(diff, origin="lower", extent=(p1[0], p1[-1], p2[0], p2[-1]), aspect="auto", cmap="viridis")
fig.colorbar(im, ax=ax, label="upper - lower (bits)")
ax.set_xlabel("$p_1$")
ax.set_ylabel("$p_2$")
ax.set_title(r"$\\eta_1 = {eta1}$, $\\eta_2 = {eta2}$")
fig.tight_layout()
fig.savefig("{png}", dpi=150)
'''


def cmd_gad(args) -> int:
    steps = args.grid
    if steps < 2:
        raise UsageError("--grid needs at least 2 steps")
    for eta in (args.eta1, args.eta2):
        if not 0 <= eta <= 1:
            raise UsageError("eta must lie in [0, 1]")
    cells = cd.gad_bounds_grid(args.eta1, args.eta2, np.linspace(0.0, 1.0, steps))
    with_env = args.eta1 == args.eta2
    header = ["p1", "p2", "lower", "upper", "diff"] + (["env_upper"] if with_env else [])
    rows = []
    for c in cells:
        r = [_num(c.p1), _num(c.p2), _num(c.lower), _num(c.upper), _num(c.diff)]
        if with_env:
            r.append(_num(c.env_upper))
        rows.append(r)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    stem = f"gad_{_num(args.eta1)}_{_num(args.eta2)}"
    csv_path = out / f"{stem}.csv"
    csv_path.write_text(_csv_text(header, rows))
    (out / f"plot_{stem}.py").write_text(
        PLOT_SCRIPT.format(csv=csv_path.name, png=f"{stem}.png", eta1=_num(args.eta1), eta2=_num(args.eta2))
    )
    finite = [c.diff for c in cells if np.isfinite(c.diff)]
    print(f"wrote {csv_path} ({len(rows)} rows)")
    print(f"min diff {_num(min(finite)) if finite else 'n/a'}, max diff {_num(max(finite)) if finite else 'n/a'}")
    return 0


# --------------------------------------------------------------------------
# simulate
# --------------------------------------------------------------------------


def cmd_simulate(args) -> int:
    N, M = load_channel(args.N), load_channel(args.M)
    if not 1 <= args.n <= ps.MAX_ROUNDS:
        raise UsageError(f"rounds must lie in 1..{ps.MAX_ROUNDS}")
    if not 1 <= args.memory_cap <= 8:
        raise UsageError("--memory-cap must lie in 1..8")
    if args.mode == "stein":
        mode = ex.Setting.stein(args.epsilon)
    else:
        mode = ex.Setting.chernoff(args.prior)
    kw = {"seed": args.seed}
    if args.multistarts:
        kw["multistarts"] = args.multistarts
    strat, res = ps.optimize_strategy(N, M, args.n, mode, args.memory_cap, ps.ProtocolOptions(**kw))
    base = res.extras["baseline"]
    rows = [
        ["adaptive", _num(res.alpha_n), _num(res.beta_n), _num(res.extras["value"])],
        ["non-adaptive", _num(base.alpha_n), _num(base.beta_n), _num(base.extras["value"])],
    ]
    print(f"mode {mode}, n = {args.n}, memory dims {strat.memory_dims}")
    print(_table(["strategy", "alpha_n", "beta_n", "objective"], rows))
    print("meta-converse slack (n * upper - d(1 - alpha_n || beta_n)):")
    uppers = {"DMAX": cd.dmax_channel(N, M)}
    am = cd.amortized_upper(dv.RELATIVE, N, M)
    if am.rule != cd.UNKNOWN:
        uppers[am.rule] = am.value
    for rule, value in uppers.items():
        _, slack = ps.meta_converse_check(res, args.n, dv.RELATIVE, value)
        print(f"  {rule}: {_num(slack)}")
    if args.out:
        write_json(args.out, strategy_to_json(strat))
    return 0


# --------------------------------------------------------------------------
# check
# --------------------------------------------------------------------------


def cmd_check(args) -> int:
    results = checks.run_suite(args.suite, args.seed)
    log = checks.format_log(results, args.seed)
    sys.stdout.write(log)
    if args.out:
        Path(args.out).write_text(log)
    return 0 if all(r.passed for r in results) else 1


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcdisc", description="Quantum state and channel discrimination bounds.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for every randomized step (default 42)")
    common.add_argument("--out", help="output file or directory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("div", parents=[common], help="divergence between two state files")
    p.add_argument("kind", help="relative, max, petz, sandwiched, log_euclidean, chernoff, chernoff_flat, "
                               "hilbert, trace, fidelity, c_dist, bures")
    p.add_argument("rho")
    p.add_argument("sigma")
    p.add_argument("--alpha", type=float)
    p.set_defaults(func=cmd_div)

    p = sub.add_parser("bounds", parents=[common], help="exponent bracket for a channel pair")
    p.add_argument("setting", help="stein, han-kobayashi, hoeffding or chernoff")
    p.add_argument("N")
    p.add_argument("M")
    p.add_argument("--epsilon", type=float, default=0.1, help="type I cap for Stein (default 0.1)")
    p.add_argument("--rate", type=float, help="type II rate for Han-Kobayashi and Hoeffding")
    p.add_argument("--prior", type=float, default=0.5, help="prior of the first channel for Chernoff")
    p.add_argument("--n", type=int, help="number of channel uses (default: asymptotic)")
    p.add_argument("--multistarts", type=int)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("gad", parents=[common], help="Stein bracket grid for two GAD channels")
    p.add_argument("eta1", type=float)
    p.add_argument("eta2", type=float)
    p.add_argument("--grid", type=int, default=21, help="points per axis on [0, 1] (default 21)")
    p.set_defaults(func=cmd_gad)

    p = sub.add_parser("simulate", parents=[common], help="optimize an adaptive protocol")
    p.add_argument("N")
    p.add_argument("M")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--mode", choices=["chernoff", "stein"], default="chernoff")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--prior", type=float, default=0.5)
    p.add_argument("--memory-cap", type=int, default=8)
    p.add_argument("--multistarts", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("check", parents=[common], help="run a property suite")
    p.add_argument("suite", choices=list(checks.SUITES) + ["all"])
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, QcdError, OSError, ValueError, KeyError, json.JSONDecodeError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"qcdisc {args.command}: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
