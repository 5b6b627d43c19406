"""Command-line entry point.

Exit codes: 0 success, 2 bad configuration or input, 3 solver failure.
"""

import argparse
import csv
import io
import sys

import numpy as np

from . import calibration, roi
from .config import ScenarioConfig, load_config
from .core_model import PARAM_NAMES, breakeven_peril, too_late_impact
from .errors import ConfigError, ConvergenceError, DomainError, HorizonError, NoRootError, PerilsError
from .extinction import adjusted_from_impact, breakeven_lambda, ExtinctionParams, rho_for_lambda
from .tables import TABLE_IDS, build_table
from .variants import scenario_decomposition

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3
PRESET_NAMES = {"superforecasters": "superforecasters", "experts": "domain_experts"}
COMPONENTS = ("pure_peril", "pure_income", "pure_health", "health_income", "total")
SWEEP_EXTRA = ("dx", "lam", "lambda", "W", "h")


def _fmt(x):
    if isinstance(x, (bool, str)):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _kv_text(pairs):
    width = max(len(k) for k, _ in pairs)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in pairs)


def _render_pairs(pairs, fmt):
    if fmt == "csv":
        return _csv(["key", "value"], pairs)
    return _kv_text(pairs)


def _load_model_if_needed(cfg):
    if cfg.variant != "realistic":
        return None
    from .realistic import default_survival_model

    return default_survival_model()


def resolve_config(args):
    """Defaults, then --preset rates, then the config file."""
    cfg = ScenarioConfig()
    preset = getattr(args, "preset", None)
    if preset and preset != "none":
        cal = calibration.calibrate_preset(PRESET_NAMES[preset])
        cfg = cfg.with_(params=cfg.params.with_(d=cal.d_excess), dx=cal.x_annual)
    if getattr(args, "config", None):
        cfg = load_config(args.config, base=cfg)
    return cfg


# ---------------------------------------------------------------------------
# Subcommands


def cmd_table(args):
    cfg = resolve_config(args)
    kwargs = {}
    if args.table_id.upper() not in ("A2", "A3.5", "A3.8"):
        kwargs["params"] = cfg.params
    if args.table_id.upper() in ("8", "11", "13"):
        kwargs["h"] = cfg.h
    table = build_table(args.table_id, **kwargs)
    _emit(table.render(args.format), args.out)


def _decomposition_pairs(dec, prefix=""):
    mult = dec.to_multiples()
    pairs = [(f"{prefix}{name}_utils", _fmt(v)) for name, v in zip(COMPONENTS, dec.as_tuple())]
    pairs += [(f"{prefix}{name}_multiple", _fmt(v)) for name, v in zip(COMPONENTS, mult.as_tuple())]
    return pairs


def cmd_evaluate(args):
    cfg = resolve_config(args)
    model = _load_model_if_needed(cfg)
    params = cfg.params
    dec = scenario_decomposition(params, cfg.variant, model, cfg.h)
    pairs = [("variant", cfg.variant)] + [(k, _fmt(v)) for k, v in params.to_dict().items()]
    pairs += _decomposition_pairs(dec)
    if cfg.variant == "simplified":
        pairs += [("too_late_total_multiple", _fmt(roi.to_op_multiple(too_late_impact(params).total)))]
    if cfg.dx > 0.0:
        ext = ExtinctionParams(dx=cfg.dx, W=cfg.W, lam=cfg.lam)
        net = adjusted_from_impact(dec.total, params.p, ext)
        pairs += [("dx", _fmt(cfg.dx)), ("lambda", _fmt(cfg.lam)), ("net_with_extinction_utils", _fmt(net))]
        pairs += [("net_with_extinction_multiple", _fmt(roi.to_op_multiple(net)))]
    _emit(_render_pairs(pairs, args.format), args.out)


def cmd_breakeven(args):
    cfg = resolve_config(args)
    model = _load_model_if_needed(cfg)
    params = cfg.params
    if args.target == "d":
        variant = "realistic" if cfg.variant == "realistic" else ("immediate_onset" if args.immediate else "baseline")
        d_star = breakeven_peril(params, variant, survival_model=model, h=cfg.h)
        pairs = [("target", "d"), ("variant", variant), ("d_star", _fmt(d_star)), ("d_star_pct", _fmt(100 * d_star))]
    elif args.target == "lambda":
        if cfg.dx <= 0.0:
            raise ConfigError("break-even lambda needs dx > 0 (set dx in the config or use --preset)")
        lam = breakeven_lambda(params, cfg.dx, cfg.W, cfg.variant, model, cfg.h)
        pairs = [("target", "lambda"), ("variant", cfg.variant), ("dx", _fmt(cfg.dx)), ("lambda_star", _fmt(lam))]
    else:
        lam = cfg.lam
        if lam <= 0.0:
            if cfg.dx <= 0.0:
                raise ConfigError("rho target needs lambda > 0 or dx > 0 in the config")
            lam = breakeven_lambda(params, cfg.dx, cfg.W, cfg.variant, model, cfg.h)
        rho = rho_for_lambda(lam, params.G)
        pairs = [("target", "rho"), ("lambda", _fmt(lam)), ("G", _fmt(params.G)), ("rho", _fmt(rho))]
    _emit(_render_pairs(pairs, args.format), args.out)


def cmd_calibrate(args):
    cfg = resolve_config(args)
    if cfg.forecast_file:
        forecasts = calibration.read_forecast_file(cfg.forecast_file)
        cal = calibration.calibrate(forecasts, cfg.onset_year, rounding=args.rounding)
    else:
        name = PRESET_NAMES.get(args.preset or "superforecasters")
        if name is None:
            raise ConfigError("calibrate needs --preset superforecasters|experts or a forecast_file in the config")
        kw = {"rounding": args.rounding}
        if cfg.onset_year is not None:
            kw["onset_year"] = cfg.onset_year
        cal = calibration.calibrate_preset(name, **kw)
    pairs = [("group", cal.group), ("onset_year", str(cal.onset_year)), ("p_regime_annual", _fmt(cal.p_regime_annual))]
    pairs += [(f"conditional_{k}", _fmt(v)) for k, v in cal.conditional.items()]
    pairs += [(k, _fmt(getattr(cal, k))) for k in ("q0", "q1", "q1_formula", "q2", "x_annual", "c", "d_baseline", "d_perils", "d_excess")]
    for regime, buckets in (("baseline", cal.buckets_baseline), ("perils", cal.buckets_perils)):
        pairs += [(f"bucket_{regime}_{lab}", _fmt(b)) for lab, b in zip(calibration.BUCKET_LABELS, buckets)]
    _emit(_render_pairs(pairs, args.format), args.out)


def cmd_fit_survival(args):
    from .realistic import (
        FITTED_MODEL,
        SURVIVAL_CSV,
        data_dir,
        fit_survival,
        read_survival_csv,
        world_life_expectancy,
        life_expectancy,
        write_fitted_model,
    )

    src = args.input or str(data_dir() / SURVIVAL_CSV)
    try:
        rows = read_survival_csv(src)
    except OSError as exc:
        raise ConfigError(f"cannot read actuarial CSV {src}: {exc}") from exc
    model, report = fit_survival(rows)
    target = args.model_out or str(data_dir() / FITTED_MODEL)
    write_fitted_model(target, model, source=f"{src}; logit OLS on {report.n_rows} cells; rmse={report.rmse:.6f}")
    pairs = [
        ("a", _fmt(model.a)),
        ("b", _fmt(model.b)),
        ("c", _fmt(model.c)),
        ("offset", str(model.birth_offset)),
        ("n_rows", str(report.n_rows)),
        ("rmse_share", _fmt(report.rmse)),
        ("rmse_logit", _fmt(report.rmse_logit)),
        ("life_expectancy_2019_cohort", _fmt(life_expectancy(model, 2019))),
        ("world_life_expectancy_2019_cohort", _fmt(world_life_expectancy(model, 2019))),
        ("model_file", target),
    ]
    _emit(_render_pairs(pairs, args.format), args.out)


def _sweep_values(args):
    if args.steps < 2:
        raise ConfigError("steps must be at least 2")
    if not args.start < args.stop:
        raise ConfigError("sweep range must satisfy from < to")
    values = np.linspace(args.start, args.stop, args.steps)
    if args.param in ("T", "t1", "peril_lag"):
        ints = np.round(values)
        if not np.allclose(values, ints):
            raise ConfigError(f"{args.param} is an integer; choose a range and step count that land on integers")
        values = ints.astype(int)
    return values


def cmd_sweep(args):
    cfg = resolve_config(args)
    if args.param not in PARAM_NAMES + SWEEP_EXTRA or args.param == "log_growth":
        raise ConfigError(f"cannot sweep {args.param!r}")
    model = _load_model_if_needed(cfg)
    rows = []
    for v in _sweep_values(args):
        value = v.item()
        try:
            if args.param in PARAM_NAMES:
                point = cfg.with_(params=cfg.params.with_(**{args.param: value}))
            else:
                point = cfg.with_(**{("lam" if args.param == "lambda" else args.param): value})
        except DomainError as exc:
            raise ConfigError(f"sweep point {args.param}={value}: {exc}") from exc
        dec = scenario_decomposition(point.params, point.variant, model, point.h)
        mult = dec.to_multiples()
        row = [repr(value)] + [_fmt(x) for x in dec.as_tuple()] + [_fmt(x) for x in mult.as_tuple()]
        if point.dx > 0.0:
            net = adjusted_from_impact(dec.total, point.params.p, ExtinctionParams(point.dx, point.W, point.lam))
            row.append(_fmt(net))
        else:
            row.append(_fmt(dec.total))
        rows.append(row)
    header = [args.param] + [f"{c}_utils" for c in COMPONENTS] + [f"{c}_multiple" for c in COMPONENTS] + ["net_with_extinction_utils"]
    if args.format == "csv":
        text = _csv(header, rows)
    else:
        widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
        text = "".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) + "\n" for r in [header] + rows)
    _emit(text, args.out)


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario file of key = value lines")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("text", "csv"), default="text")
    common.add_argument("--preset", choices=("superforecasters", "experts", "none"), help="use calibrated d and dx for a forecaster group")

    parser = argparse.ArgumentParser(prog="perils", description="Returns to science under time-of-perils risk.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", parents=[common], help="regenerate a result table")
    p.add_argument("table_id", help=f"one of {', '.join(TABLE_IDS)}")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("evaluate", parents=[common], help="decompose the impact of a year of science")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("breakeven", parents=[common], help="solve for a break-even quantity")
    p.add_argument("--target", choices=("d", "lambda", "rho"), default="d")
    p.add_argument("--immediate", action="store_true", help="time of perils starts next period (target d)")
    p.set_defaults(func=cmd_breakeven)

    p = sub.add_parser("calibrate", parents=[common], help="annual rates from cumulative forecasts")
    p.add_argument("--rounding", choices=("display", "exact"), default="display")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("fit-survival", parents=[common], help="fit the logistic survival curve")
    p.add_argument("--input", help="actuarial CSV (default: data directory)")
    p.add_argument("--model-out", help="fitted model file (default: data directory)")
    p.set_defaults(func=cmd_fit_survival)

    p = sub.add_parser("sweep", parents=[common], help="evaluate over a parameter grid")
    p.add_argument("param")
    p.add_argument("start", type=float, metavar="from")
    p.add_argument("stop", type=float, metavar="to")
    p.add_argument("steps", type=int)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (NoRootError, ConvergenceError, HorizonError) as exc:
        print(f"perils: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (PerilsError, FileNotFoundError) as exc:
        print(f"perils: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
