"""Command-line frontend: thresholds, verification suites, sweeps.

Layout:

    truncert threshold state|ham|energy|tail [flags]
    truncert verify state|ham|tail|trotter|coherent|all [flags]
    truncert sweep --cmd <threshold command> --vary key=v1,v2 [flags]

Every output artifact starts with a header block echoing the parsed
configuration and the tool version; analytic columns are bit-stable
across reruns of the same configuration.  Config files hold key=value
lines matching the long flag names (dashes or underscores); flags given
on the command line win.  Exit codes: 0 success and all reports sound,
1 usage error, 2 resource or guard error, 3 soundness violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .bounds import (
    CapExceededError,
    TailQuery,
    TruncationQuery,
    energy_threshold_hubbard_holstein,
    energy_threshold_single_mode,
    minimal_hamiltonian_threshold,
    minimal_state_threshold,
    tail_threshold,
)
from .fock_algebra import ResourceLimitError
from .models import dicke, hubbard_holstein_1d, single_mode, u1_lgt_1d
from .propagate import ConvergenceError, EvolveConfig
from .trotter import (
    ab_quantities,
    beta_comm,
    empirical_trotter_error,
    error_scaling_slope,
    safe_window,
    summaries_hubbard_holstein,
    summaries_single_mode,
)
from .verify import (
    coherent_oracle_check,
    compare_thresholds,
    engine_slack,
    verify_hamiltonian_truncation,
    verify_state_truncation,
    verify_tail,
)
from .walk_profiles import (
    WalkProfile,
    profile_dicke,
    profile_hubbard_holstein,
    profile_u1,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RESOURCE = 2
EXIT_UNSOUND = 3

OUTDIR_ENV = "TRUNCERT_OUTDIR"


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures remapped from exit code 2 to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip() != ""]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip() != ""]


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------

def _config_echo(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _stringify(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(_stringify(v) for v in value)
    return str(value)


def _csv_cell(value) -> str:
    text = _stringify(value)
    if any(ch in text for ch in (",", '"', "\n")):
        text = '"' + text.replace('"', '""') + '"'
    return text


def _resolve_out(path: str | None) -> str | None:
    if path is None:
        return None
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir and not os.path.isabs(path):
        return os.path.join(outdir, path)
    return path


def write_output(path, fmt, columns, rows, config, meta=None):
    """Emit the table with its config header, atomically when to a file."""
    config = dict(config)
    if meta:
        config.update(meta)
    if fmt == "json":
        payload = {
            "version": __version__,
            "config": {k: _stringify(v) for k, v in sorted(config.items())},
            "columns": list(columns),
            "rows": [[_stringify(v) for v in row] for row in rows],
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        lines = [f"# truncert {__version__}"]
        for k, v in sorted(config.items()):
            lines.append(f"# {k}={_stringify(v)}")
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_csv_cell(v) for v in row))
        text = "\n".join(lines) + "\n"
    path = _resolve_out(path)
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".truncert-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# shared model/profile resolution
# ---------------------------------------------------------------------------

def _profile_for(args) -> WalkProfile:
    if args.model == "single":
        return WalkProfile(chi=2.0 * abs(args.g), r=0.5, label="single_mode")
    if args.model == "hh":
        return profile_hubbard_holstein(abs(args.g))
    if args.model == "dicke":
        return profile_dicke(abs(args.g), args.n)
    if args.model == "u1":
        return profile_u1(abs(args.gb), abs(args.g))
    raise ValueError(f"unknown model {args.model!r}")


def _time_grid(args) -> list[float]:
    if args.t is not None:
        return args.t
    if args.tmax is None:
        raise ValueError("give --t or --tmax")
    n = max(2, args.tpoints)
    return [args.tmax * i / (n - 1) for i in range(n)]


def _build_model(args):
    if args.model == "single":
        return single_mode(args.g, args.omega0, args.n_max)
    if args.model == "hh":
        return hubbard_holstein_1d(
            args.sites,
            hop=args.hop,
            u=args.u,
            mu=args.mu,
            g=args.g,
            omega0=args.omega0,
            n_max=args.n_max,
        )
    if args.model == "dicke":
        return dicke(args.n, args.omega0, args.omega_z, args.g, args.n_max)
    if args.model == "u1":
        return u1_lgt_1d(args.sites, args.gm, args.g, args.ge, args.field_cap)
    raise ValueError(f"unknown model {args.model!r}")


# ---------------------------------------------------------------------------
# threshold commands
# ---------------------------------------------------------------------------

def _cmd_threshold_state(args):
    profile = _profile_for(args)
    columns = ["t", "lambda_ours", "bound", "delta"]
    rows = []
    for t in _time_grid(args):
        if t == 0:
            rows.append([0.0, args.lambda0, 0.0, 0])
            continue
        rep = minimal_state_threshold(
            profile,
            TruncationQuery(lambda0=args.lambda0, time=t, epsilon=args.eps),
            optimize_lambda=args.optimize_lambda,
            delta_max=args.delta_max,
        )
        rows.append([t, rep.lambda_, rep.bound, rep.delta_used])
    return columns, rows, {}, EXIT_OK


def _cmd_threshold_energy(args):
    columns = ["model", "lambda_energy"]
    if args.model == "single":
        lam = energy_threshold_single_mode(args.omega0, args.lambda0, args.eps)
    elif args.model == "hh":
        lam = energy_threshold_hubbard_holstein(
            omega0=args.omega0,
            g=args.g,
            n_sites=args.n,
            lambda0=args.lambda0,
            e_f_ground=args.ef,
            e_total=args.etotal,
            epsilon=args.eps,
        )
    else:
        raise ValueError("energy thresholds cover --model single or hh")
    return columns, [[args.model, lam]], {}, EXIT_OK


def _cmd_threshold_ham(args):
    model = _build_model(args)
    rep = minimal_hamiltonian_threshold(
        model.profile,
        TruncationQuery(lambda0=args.lambda0, time=args.t_single, epsilon=args.eps),
        n_modes=len(model.basis.truncatable_modes),
        comm_norm=model.comm_norm,
        lambda_cap=model.cutoff - 2,
    )
    columns = ["lambda_tilde", "bound", "delta"]
    return columns, [[rep.lambda_, rep.bound, rep.delta_used]], {}, EXIT_OK


def _cmd_threshold_tail(args):
    profile = _profile_for(args)
    if args.lambda_bar is None or args.gap is None:
        raise ValueError("tail thresholds need --lambda-bar and --gap")
    columns = ["eps", "lambda_tail", "delta", "sigma", "t_window", "bound"]
    rows = []
    for eps in args.eps_list:
        rep = tail_threshold(profile, TailQuery(args.lambda_bar, args.gap, eps))
        rows.append(
            [eps, rep.lambda_, rep.delta_used, rep.sigma, rep.t_window, rep.bound]
        )
    return columns, rows, {}, EXIT_OK


def _cmd_compare(args):
    table = compare_thresholds(
        n_modes=args.n,
        epsilon=args.eps,
        lambda0=args.lambda0,
        times=_time_grid(args),
        omega0=args.omega0,
        g=args.g,
    )
    columns = ["t", "lambda_ours", "lambda_energy", "delta"]
    rows = [[r.t, r.lambda_ours, r.lambda_energy, r.delta_used] for r in table.rows]
    meta = {"crossover_t": table.crossover_t}
    return columns, rows, meta, EXIT_OK


# ---------------------------------------------------------------------------
# verify commands
# ---------------------------------------------------------------------------

_REPORT_COLUMNS = [
    "experiment",
    "empirical",
    "analytic",
    "sound",
    "margin",
    "runtime_s",
    "inputs",
    "notes",
]


def _report_row(rep):
    inputs = ";".join(f"{k}={_stringify(v)}" for k, v in sorted(rep.inputs.items()))
    return [
        rep.experiment,
        rep.empirical,
        rep.analytic,
        rep.sound,
        rep.margin,
        round(rep.runtime_s, 6),
        inputs,
        rep.notes,
    ]


def _verify_times(args, fallback):
    if args.t is None and args.tmax is None:
        return fallback
    return _time_grid(args)


def _suite_state(args, cfg):
    model = _build_model(args)
    deltas = args.deltas if args.deltas is not None else [2, 3, 4, 5]
    times = _verify_times(args, [0.25])
    return verify_state_truncation(
        model, args.lambda0, times, mode=args.windows, deltas=deltas, cfg=cfg
    )


def _suite_ham(args, cfg):
    if args.model != "single":
        raise ValueError("the hamiltonian-truncation suite runs on --model single")
    factory = lambda nm: single_mode(args.g, args.omega0, nm)
    reports = []
    for lam in args.lambda_tildes:
        reports.append(
            verify_hamiltonian_truncation(
                factory,
                n_max=args.n_max,
                lambda0=args.lambda0,
                lambda_tilde=lam,
                t=args.t_single,
                cfg=cfg,
                check_padding=args.check_padding,
            )
        )
    return reports


def _suite_tail(args, cfg):
    model = _build_model(args)
    return verify_tail(model, args.eps_list, cfg=cfg)


def _suite_trotter(args, cfg):
    if args.model == "single":
        model = single_mode(args.g, args.omega0, args.n_max)
        summaries = summaries_single_mode(args.g, args.omega0)
        p = args.p if args.p else 1
    elif args.model == "hh":
        model = hubbard_holstein_1d(
            args.sites, hop=args.hop, u=args.u, mu=args.mu,
            g=args.g, omega0=args.omega0, n_max=args.n_max,
        )
        summaries = summaries_hubbard_holstein(
            args.sites, hop=args.hop, u=args.u, mu=args.mu, g=args.g, omega0=args.omega0
        )
        p = args.p if args.p else 2
    else:
        raise ValueError("the trotter suite runs on --model single or hh")
    lambda1 = safe_window(args.lambda0, p)
    budget = ab_quantities(summaries, lambda1, p, model.cutoff)
    points = empirical_trotter_error(
        model, p, args.taus, args.lambda0, budget=budget, cfg=cfg
    )
    slack = engine_slack(cfg)
    columns = ["tau", "error", "bound", "sound"]
    rows = [[pt.tau, pt.error, pt.bound, pt.error <= pt.bound + slack] for pt in points]
    meta = {
        "p": p,
        "beta": beta_comm(budget),
        "slope": error_scaling_slope(points),
    }
    code = EXIT_OK if all(r[3] for r in rows) else EXIT_UNSOUND
    return columns, rows, meta, code


def _cmd_verify(args):
    cfg = EvolveConfig(seed=args.seed)
    if args.suite == "trotter":
        return _suite_trotter(args, cfg)
    if args.suite == "coherent":
        times = _verify_times(args, [0.5, 1.0, 2.0, 3.0])
        reports = [coherent_oracle_check(times, cfg=cfg)]
    elif args.suite == "state":
        reports = _suite_state(args, cfg)
    elif args.suite == "ham":
        reports = _suite_ham(args, cfg)
    elif args.suite == "tail":
        reports = _suite_tail(args, cfg)
    elif args.suite == "all":
        reports = []
        single_args = _reparse(args, ["--model", "single", "--n-max", "48"])
        reports += _suite_state(single_args, cfg)
        reports += _suite_ham(single_args, cfg)
        hh_args = _reparse(
            args, ["--model", "hh", "--sites", "2", "--n-max", "12", "--eps-list", "1e-2,1e-4"]
        )
        reports += _suite_tail(hh_args, cfg)
        reports.append(coherent_oracle_check([0.5, 1.0, 2.0], cfg=cfg))
    else:
        raise ValueError(f"unknown suite {args.suite!r}")
    rows = [_report_row(rep) for rep in reports]
    code = EXIT_OK if all(rep.sound for rep in reports) else EXIT_UNSOUND
    return _REPORT_COLUMNS, rows, {"reports": len(rows)}, code


def _reparse(args, extra_tokens):
    """Clone a verify namespace with overrides applied through the parser."""
    parser = build_parser()
    base = ["verify", args.suite if args.suite != "all" else "state"]
    tokens = base + extra_tokens
    clone = parser.parse_args(tokens)
    for key, value in vars(args).items():
        if not hasattr(clone, key):
            setattr(clone, key, value)
    return clone


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def _cmd_sweep(args):
    if args.cmd not in ("threshold-state", "threshold-energy", "compare"):
        raise ValueError("sweep covers threshold-state, threshold-energy, compare")
    varied: list[tuple[str, list[str]]] = []
    for spec in args.vary or []:
        if "=" not in spec:
            raise ValueError(f"bad --vary {spec!r}; want key=v1,v2")
        key, values = spec.split("=", 1)
        varied.append((key.strip(), [v for v in values.split(",") if v != ""]))
    size = 1
    for _, vals in varied:
        size *= max(1, len(vals))
    if size > args.max_rows:
        raise ResourceLimitError(f"sweep grid of {size} rows exceeds cap {args.max_rows}")

    combos: list[list[tuple[str, str]]] = [[]]
    for key, vals in varied:
        combos = [c + [(key, v)] for c in combos for v in vals]

    base_tokens = args.cmd.split("-") if args.cmd != "compare" else ["compare"]
    set_tokens: list[str] = []
    for spec in args.set or []:
        if "=" not in spec:
            raise ValueError(f"bad --set {spec!r}; want key=value")
        key, value = spec.split("=", 1)
        set_tokens += [f"--{key.strip().replace('_', '-')}", value]

    parser = build_parser()

    def run_point(combo):
        tokens = list(base_tokens) + list(set_tokens)
        for key, value in combo:
            tokens += [f"--{key.replace('_', '-')}", value]
        point_args = parser.parse_args(tokens)
        return point_args.func(point_args)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run_point, combos))
    else:
        results = [run_point(c) for c in combos]

    varied_names = [k for k, _ in varied]
    columns = varied_names + list(results[0][0])
    rows = []
    for combo, (cols, point_rows, _, _) in zip(combos, results):
        prefix = [v for _, v in combo]
        for row in point_rows:
            rows.append(prefix + list(row))
    return columns, rows, {"grid_rows": size}, EXIT_OK


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------

def _add_common(sub):
    sub.add_argument("--out", default=None, help="output file (default stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--config", default=None, help="key=value config file; flags win")
    sub.add_argument("--seed", type=int, default=1123)
    sub.add_argument("--jobs", type=int, default=1)


def _add_model_params(sub, with_cutoff=True):
    sub.add_argument("--model", choices=("single", "hh", "dicke", "u1"), default="single")
    sub.add_argument("--g", type=float, default=0.5, help="coupling (g_GM for u1)")
    sub.add_argument("--gb", type=float, default=0.0, help="magnetic weight for u1")
    sub.add_argument("--gm", type=float, default=1.0, help="staggered mass for u1")
    sub.add_argument("--ge", type=float, default=1.0, help="electric weight for u1")
    sub.add_argument("--omega0", type=float, default=1.0)
    sub.add_argument("--omega-z", dest="omega_z", type=float, default=1.0)
    sub.add_argument("--hop", type=float, default=1.0)
    sub.add_argument("--u", type=float, default=0.0)
    sub.add_argument("--mu", type=float, default=0.0)
    sub.add_argument("--n", type=int, default=100, help="mode/spin/site count for formulas")
    sub.add_argument("--sites", type=int, default=2)
    sub.add_argument("--field-cap", dest="field_cap", type=int, default=1)
    if with_cutoff:
        sub.add_argument("--n-max", dest="n_max", type=int, default=16)


def build_parser() -> _Parser:
    parser = _Parser(prog="truncert", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"truncert {__version__}")
    top = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    thr = top.add_parser("threshold", help="certified truncation thresholds")
    thr_sub = thr.add_subparsers(dest="kind", required=True, parser_class=_Parser)

    t_state = thr_sub.add_parser("state", help="state-truncation window over a time grid")
    _add_model_params(t_state, with_cutoff=False)
    t_state.add_argument("--lambda0", type=int, default=0)
    t_state.add_argument("--eps", type=float, default=1e-2)
    t_state.add_argument("--t", type=_floats, default=None, help="comma list of times")
    t_state.add_argument("--tmax", type=float, default=None)
    t_state.add_argument("--tpoints", type=int, default=21)
    t_state.add_argument("--optimize-lambda", dest="optimize_lambda", action="store_true")
    t_state.add_argument("--delta-max", dest="delta_max", type=int, default=512)
    _add_common(t_state)
    t_state.set_defaults(func=_cmd_threshold_state)

    t_ham = thr_sub.add_parser("ham", help="hamiltonian-truncation window (desk scale)")
    _add_model_params(t_ham)
    t_ham.add_argument("--lambda0", type=int, default=0)
    t_ham.add_argument("--eps", type=float, default=1e-2)
    t_ham.add_argument("--t-single", dest="t_single", type=float, default=1.0)
    _add_common(t_ham)
    t_ham.set_defaults(func=_cmd_threshold_ham)

    t_energy = thr_sub.add_parser("energy", help="energy-conservation competitor window")
    _add_model_params(t_energy, with_cutoff=False)
    t_energy.add_argument("--lambda0", type=int, default=0)
    t_energy.add_argument("--eps", type=float, default=1e-2)
    t_energy.add_argument("--ef", type=float, default=0.0, help="fermionic ground energy")
    t_energy.add_argument("--etotal", type=float, default=None, help="total energy budget")
    _add_common(t_energy)
    t_energy.set_defaults(func=_cmd_threshold_energy)

    t_tail = thr_sub.add_parser("tail", help="eigenstate tail window from (lambda_bar, gap)")
    _add_model_params(t_tail, with_cutoff=False)
    t_tail.add_argument("--lambda-bar", dest="lambda_bar", type=float, default=None)
    t_tail.add_argument("--gap", type=float, default=None)
    t_tail.add_argument(
        "--eps-list", dest="eps_list", type=_floats, default=[1e-2, 1e-4, 1e-6]
    )
    _add_common(t_tail)
    t_tail.set_defaults(func=_cmd_threshold_tail)

    cmp_cmd = top.add_parser("compare", help="walk threshold vs energy threshold curve")
    _add_model_params(cmp_cmd, with_cutoff=False)
    cmp_cmd.add_argument("--lambda0", type=int, default=4)
    cmp_cmd.add_argument("--eps", type=float, default=1e-2)
    cmp_cmd.add_argument("--t", type=_floats, default=None)
    cmp_cmd.add_argument("--tmax", type=float, default=10.0)
    cmp_cmd.add_argument("--tpoints", type=int, default=21)
    _add_common(cmp_cmd)
    cmp_cmd.set_defaults(func=_cmd_compare)

    ver = top.add_parser("verify", help="bound-vs-empirical experiment suites")
    ver_sub = ver.add_subparsers(dest="suite", required=True, parser_class=_Parser)
    for suite in ("state", "ham", "tail", "trotter", "coherent", "all"):
        v = ver_sub.add_parser(suite)
        _add_model_params(v)
        v.add_argument("--lambda0", type=int, default=0)
        v.add_argument("--t", type=_floats, default=None)
        v.add_argument("--tmax", type=float, default=None)
        v.add_argument("--tpoints", type=int, default=9)
        v.add_argument("--t-single", dest="t_single", type=float, default=1.0)
        v.add_argument("--deltas", type=_ints, default=None)
        v.add_argument("--windows", choices=("per_mode", "all"), default="per_mode")
        v.add_argument(
            "--lambda-tildes", dest="lambda_tildes", type=_ints, default=[10]
        )
        v.add_argument("--check-padding", dest="check_padding", action="store_true")
        v.add_argument(
            "--eps-list", dest="eps_list", type=_floats, default=[1e-2, 1e-4, 1e-6]
        )
        v.add_argument("--p", type=int, default=0, help="product-formula order")
        v.add_argument(
            "--taus", type=_floats, default=[0.2, 0.1, 0.05, 0.025]
        )
        _add_common(v)
        v.set_defaults(func=_cmd_verify, suite=suite)

    sweep = top.add_parser("sweep", help="cartesian parameter sweep of a threshold command")
    sweep.add_argument("--cmd", required=True, help="threshold-state, threshold-energy, compare")
    sweep.add_argument("--vary", action="append", default=[], help="key=v1,v2,...")
    sweep.add_argument("--set", action="append", default=[], help="key=value base override")
    sweep.add_argument("--max-rows", dest="max_rows", type=int, default=100_000)
    _add_common(sweep)
    sweep.set_defaults(func=_cmd_sweep)

    return parser


# ---------------------------------------------------------------------------
# config files and entry point
# ---------------------------------------------------------------------------

def load_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line {raw.strip()!r}; want key=value")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()
    return values


def _inject_config(argv: list[str]) -> list[str]:
    """Expand --config FILE into flags placed before the user's own flags."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        return argv
    values = load_config(argv[i + 1])
    extra: list[str] = []
    for key, value in values.items():
        flag = "--" + key.replace("_", "-")
        if value.lower() == "true":
            extra.append(flag)
        elif value.lower() == "false":
            continue
        else:
            extra += [flag, value]
    n_cmd = 1 if argv and argv[0] == "sweep" else 2
    n_cmd = min(n_cmd, len(argv))
    return argv[:n_cmd] + extra + argv[n_cmd:]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        argv = _inject_config(argv)
    except (OSError, ValueError) as exc:
        print(f"truncert: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        columns, rows, meta, code = args.func(args)
    except (ResourceLimitError, CapExceededError, ConvergenceError, MemoryError) as exc:
        print(f"truncert: resource/guard error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"truncert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    write_output(args.out, args.format, columns, rows, _config_echo(args), meta)
    return code


if __name__ == "__main__":
    sys.exit(main())
