"""Command-line pipeline: ingest -> surface -> sentiment -> decompose ->
fit -> forecast -> evaluate -> plots.

Every command validates its configuration before touching the output
directory, writes artifacts only under the configured output directory,
and stamps each artifact with the tool version, a config hash, and the
date range it covers. Identical config and seed give byte-identical
artifacts.
"""

from __future__ import annotations

import argparse
import configparser
import datetime as dt
import hashlib
import io
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, decompose, plots, sentiment, surface, synthgen, varfit
from .data_io import (
    TradingCalendar,
    filter_quotes,
    load_option_quotes,
    load_proxies,
    load_rates,
    write_csv,
)
from .errors import ConfigError, DataError, NumericError, VolsentError
from .evaluate import (
    ModelSpec,
    compare_methods,
    rolling_forecast,
    subperiod_robustness,
    variable_bucket,
)
from .sentiment import SentimentSeries, composite_index, load_external_scores, proxy_features
from .varfit import (
    StatePanel,
    build_state_panel,
    coefficient_report,
    fit_var,
    granger,
    irf,
    model_from_json,
    model_to_json,
    select_lag,
    stability_check,
)

DEFAULTS = {
    "inputs": {
        "quotes": "quotes.csv",
        "rates": "rates.csv",
        "proxies": "proxies.csv",
        "external_scores": "",
        "holidays": "",
    },
    "surface": {
        "grid": "default7",
        "curvature": "corrected",
        "min_days_to_expiry": "5",
        "otm_side": "true",
    },
    "decompose": {
        "method": "fft",
        "cutoff_period": "15",
        "window": "22",
        "max_imf": "10",
        "sift_tolerance": "0.2",
        "k": "4",
    },
    "var": {
        "form": "nonparameter",
        "lags": "1",
        "p_max": "8",
        "exog": "none",
        "irf_horizon": "20",
        "granger_cause": "hfs",
        "granger_effect": "",
    },
    "evaluate": {
        "initial_window": "500",
        "min_window": "250",
        "variants": "pca",
        "windows": "",
    },
    "output": {
        "dir": "out",
        "seed": "0",
    },
}


@dataclass
class RunConfig:
    parser: configparser.ConfigParser
    config_hash: str

    def get(self, section: str, key: str) -> str:
        return self.parser.get(section, key)

    def getint(self, section: str, key: str) -> int:
        return self.parser.getint(section, key)

    def getfloat(self, section: str, key: str) -> float:
        return self.parser.getfloat(section, key)

    @property
    def out_dir(self) -> Path:
        return Path(self.get("output", "dir"))

    @property
    def seed(self) -> int:
        return self.getint("output", "seed")


def default_parser() -> configparser.ConfigParser:
    parser = configparser.ConfigParser()
    parser.read_dict(DEFAULTS)
    return parser


def render_config(parser: configparser.ConfigParser) -> str:
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def load_config(path: str | None, overrides: dict[tuple[str, str], str]) -> RunConfig:
    parser = default_parser()
    if path:
        if not Path(path).exists():
            raise ConfigError(f"config file {path} does not exist")
        parser.read(path)
    for (section, key), value in overrides.items():
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key, value)
    # hash the analytical configuration only; where artifacts land must not
    # change their bytes
    hashed = configparser.ConfigParser()
    hashed.read_dict({s: dict(parser.items(s)) for s in parser.sections()})
    hashed.remove_option("output", "dir")
    digest = hashlib.sha256(render_config(hashed).encode("utf-8")).hexdigest()[:16]
    return RunConfig(parser=parser, config_hash=digest)


def _metadata(config: RunConfig, dates) -> dict[str, str]:
    meta = {"tool": f"volsent {__version__}", "config": config.config_hash}
    if dates:
        meta["dates"] = f"{min(dates).isoformat()}..{max(dates).isoformat()}"
    return meta


def _require_inputs(config: RunConfig, keys: list[str]) -> None:
    for key in keys:
        path = config.get("inputs", key)
        if not path:
            raise ConfigError(f"inputs.{key} is not set")
        if not Path(path).exists():
            raise ConfigError(f"inputs.{key} file {path} does not exist")


def _calendar(config: RunConfig) -> TradingCalendar:
    holidays = config.get("inputs", "holidays")
    if holidays:
        if not Path(holidays).exists():
            raise ConfigError(f"holiday file {holidays} does not exist")
        return TradingCalendar.from_holiday_file(holidays)
    return TradingCalendar()


# --- pipeline stages shared by the commands ---

def _build_surfaces(config: RunConfig) -> list[surface.IVSurfaceGrid]:
    _require_inputs(config, ["quotes", "rates"])
    quotes, _rejects = load_option_quotes(config.get("inputs", "quotes"))
    rates, _rate_rejects = load_rates(config.get("inputs", "rates"))
    if not quotes:
        raise DataError("no valid quotes loaded")
    quotes = filter_quotes(
        quotes,
        min_days_to_expiry=config.getint("surface", "min_days_to_expiry"),
        calendar=_calendar(config),
    )
    grid_config = surface.GridConfig.from_name(config.get("surface", "grid"))
    grid_config.curvature_mode = config.get("surface", "curvature")
    grid_config.otm_side_only = config.parser.getboolean("surface", "otm_side")
    rate_by_date = {r.date: r for r in rates}
    by_date: dict[dt.date, list] = {}
    for q in quotes:
        by_date.setdefault(q.trade_date, []).append(q)
    surfaces = []
    for day in sorted(by_date):
        if day not in rate_by_date:
            continue
        surfaces.append(surface.build_grid(by_date[day], rate_by_date[day], grid_config))
    if not surfaces:
        raise DataError("no dates produced a surface")
    return surfaces


def _write_surfaces(config: RunConfig, surfaces: list[surface.IVSurfaceGrid]) -> None:
    meta = _metadata(config, [s.date for s in surfaces])
    rows = []
    for s in surfaces:
        for i, months in enumerate(s.maturities):
            for j, m in enumerate(s.moneyness_levels):
                rows.append([s.date.isoformat(), months, m, float(s.values[i, j])])
    write_csv(config.out_dir / "surface.csv", ["date", "tau_months", "moneyness", "iv"], rows, meta)

    grid_config = surface.GridConfig.from_name(config.get("surface", "grid"))
    names = surface.param_names(grid_config)
    # term slopes are against maturity measured in years
    meta_params = dict(meta, slope_units="per_year")
    param_rows = []
    for s in surfaces:
        vec = surface.surface_params(s, curvature_mode=config.get("surface", "curvature"))
        param_rows.append([s.date.isoformat()] + [float(v) for v in vec.as_vector()])
    write_csv(config.out_dir / "params.csv", ["date"] + names, param_rows, meta_params)


def _sentiment_series(config: RunConfig, variant: str) -> SentimentSeries:
    if variant == "pca":
        _require_inputs(config, ["proxies"])
        panel = proxy_features(load_proxies(config.get("inputs", "proxies")))
        series, _loadings = composite_index(panel)
        return series
    if variant == "external":
        _require_inputs(config, ["external_scores"])
        return load_external_scores(config.get("inputs", "external_scores"))
    raise ConfigError(f"unknown sentiment variant {variant!r}; expected pca or external")


def _decompose_series(config: RunConfig, series: SentimentSeries) -> decompose.DecompositionResult:
    method = config.get("decompose", "method")
    if method == "fft":
        cutoff = config.get("decompose", "cutoff_period")
        return decompose.fft_split(series, "auto" if cutoff == "auto" else float(cutoff))
    if method == "emd":
        modes = decompose.emd(
            series,
            max_imf=config.getint("decompose", "max_imf"),
            sift_tolerance=config.getfloat("decompose", "sift_tolerance"),
        )
        k = config.get("decompose", "k")
        return decompose.emd_split(series, modes, "auto" if k == "auto" else int(k))
    if method == "ma":
        return decompose.ma_split(series, window=config.getint("decompose", "window"))
    raise ConfigError(f"unknown decomposition method {method!r}")


def _restrict(series: SentimentSeries, dates: tuple[dt.date, ...]) -> SentimentSeries:
    lookup = dict(zip(series.dates, series.values))
    missing = [d for d in dates if d not in lookup]
    if missing:
        raise DataError(f"sentiment series missing {len(missing)} surface dates (first: {missing[0]})")
    return SentimentSeries(dates, np.array([lookup[d] for d in dates]), label=series.label)


def _surface_panel(config: RunConfig, surfaces: list[surface.IVSurfaceGrid]) -> StatePanel:
    form = config.get("var", "form")
    if form == "parameter":
        vecs = [surface.surface_params(s, curvature_mode=config.get("surface", "curvature")) for s in surfaces]
        return build_state_panel(params=vecs, form="parameter")
    return build_state_panel(surfaces=surfaces, form="nonparameter")


def _state_panel(config: RunConfig) -> tuple[StatePanel, StatePanel | None]:
    """Full panel (surface + hfs/lfs) plus optional exogenous spot/rate."""
    surfaces = _build_surfaces(config)
    raw = _sentiment_series(config, _variant_names(config)[0] if _variant_names(config) else "pca")
    common = tuple(d for d in (s.date for s in surfaces) if d in set(raw.dates))
    surfaces = [s for s in surfaces if s.date in set(common)]
    if not surfaces:
        raise DataError("surfaces and sentiment share no dates")
    split = _decompose_series(config, _restrict(raw, common))
    panel = _surface_panel(config, surfaces)
    full = StatePanel(
        dates=panel.dates,
        var_names=panel.var_names + ("hfs", "lfs"),
        values=np.column_stack([panel.values, split.hfs.values, split.lfs.values]),
    )
    exog = _exog_panel(config, common)
    return full, exog


def _exog_panel(config: RunConfig, dates: tuple[dt.date, ...]) -> StatePanel | None:
    if config.get("var", "exog") != "spot_rate":
        return None
    quotes, _ = load_option_quotes(config.get("inputs", "quotes"))
    rates, _ = load_rates(config.get("inputs", "rates"))
    spot_by_date: dict[dt.date, float] = {}
    for q in quotes:
        spot_by_date.setdefault(q.trade_date, q.underlying_price)
    rate_by_date = {r.date: r.rate for r in rates}
    missing = [d for d in dates if d not in spot_by_date or d not in rate_by_date]
    if missing:
        raise DataError(f"exogenous spot/rate missing for {len(missing)} dates")
    values = np.array([[spot_by_date[d], rate_by_date[d]] for d in dates])
    return StatePanel(dates=dates, var_names=("spot", "rate"), values=values)


def _variant_names(config: RunConfig) -> list[str]:
    text = config.get("evaluate", "variants").strip()
    return [v.strip() for v in text.split(",") if v.strip() and v.strip() != "none"]


def _lag_spec(config: RunConfig) -> ModelSpec:
    lags = config.get("var", "lags")
    return ModelSpec(p="auto" if lags == "auto" else int(lags), p_max=config.getint("var", "p_max"))


def _fit_from_config(config: RunConfig) -> tuple[varfit.VarModel, StatePanel, StatePanel | None]:
    panel, exog = _state_panel(config)
    spec = _lag_spec(config)
    p = select_lag(panel, p_max=spec.p_max, exog=exog)[0] if spec.p == "auto" else int(spec.p)
    return fit_var(panel, p, exog=exog), panel, exog


# --- commands ---

SCENARIO_PARAMS = {
    "flat": {},
    "smirk": {"vol": "smirk"},
    # moving smirk: common level follows yesterday's sentiment factor, and
    # each grid cell carries its own small AR(1) component
    "dynamic": {"vol": "smirk", "level_vol": 0.01, "sentiment_coupling": 0.01, "cell_vol": 0.008},
}


def cmd_gen_data(config: RunConfig, args) -> None:
    spec = synthgen.ScenarioSpec(
        name=args.scenario,
        horizon=args.horizon,
        seed=config.seed,
        params=dict(SCENARIO_PARAMS[args.scenario]),
    )
    out = config.out_dir
    world = synthgen.gen_option_world(spec)
    synthgen.write_option_world(world, out)
    dates, _factor, columns = synthgen.gen_proxies(spec)
    synthgen.write_proxies(out / "proxies.csv", dates, columns)
    print(f"wrote synthetic world ({args.scenario}, {args.horizon} days) to {out}")


def cmd_build_surface(config: RunConfig, args) -> None:
    surfaces = _build_surfaces(config)
    _write_surfaces(config, surfaces)
    plots.surface_snapshot(surfaces[-1], config.out_dir / "surface_snapshot.svg")
    print(f"built {len(surfaces)} surfaces -> {config.out_dir / 'surface.csv'}")


def cmd_sentiment(config: RunConfig, args) -> None:
    variants = _variant_names(config) or ["pca"]
    variant = variants[0]
    if variant == "pca":
        _require_inputs(config, ["proxies"])
        panel = proxy_features(load_proxies(config.get("inputs", "proxies")))
        series, loadings = composite_index(panel)
        sentiment.write_loadings(config.out_dir / "loadings.csv", loadings, _metadata(config, panel.dates))
    else:
        series = _sentiment_series(config, variant)
    sentiment.write_scores(config.out_dir / "sentiment.csv", series)
    print(f"sentiment series ({series.label}, {len(series)} days) -> {config.out_dir / 'sentiment.csv'}")


def cmd_decompose(config: RunConfig, args) -> None:
    variants = _variant_names(config) or ["pca"]
    series = _sentiment_series(config, variants[0])
    result = _decompose_series(config, series)
    meta = _metadata(config, series.dates)
    meta["method"] = result.method
    meta["params"] = repr(sorted(result.params.items()))
    params_hash = hashlib.sha256(meta["params"].encode("utf-8")).hexdigest()[:12]
    rows = (
        [
            series.dates[i].isoformat(),
            float(series.values[i]),
            float(result.hfs.values[i]),
            float(result.lfs.values[i]),
            result.method,
            params_hash,
        ]
        for i in range(len(series))
    )
    write_csv(
        config.out_dir / "decomposition.csv",
        ["date", "original", "hfs", "lfs", "method", "params_hash"],
        rows,
        meta,
    )
    if result.method == "emd":
        modes = decompose.emd(
            series,
            max_imf=config.getint("decompose", "max_imf"),
            sift_tolerance=config.getfloat("decompose", "sift_tolerance"),
        )
        header = ["date"] + [f"imf{i + 1}" for i in range(len(modes.imfs))] + ["residual"]
        imf_rows = (
            [series.dates[t].isoformat()]
            + [float(m[t]) for m in modes.imfs]
            + [float(modes.residual[t])]
            for t in range(len(series))
        )
        write_csv(config.out_dir / "imfs.csv", header, imf_rows, meta)
        plots.imf_stack(modes, config.out_dir / "imf_stack.svg")
    if result.method == "fft":
        plots.amplitude_frequency(series, config.out_dir / "amplitude_frequency.svg")
    print(f"decomposition ({result.method}) -> {config.out_dir / 'decomposition.csv'}")


def cmd_var_fit(config: RunConfig, args) -> None:
    model, panel, _exog = _fit_from_config(config)
    model_to_json(model, config.out_dir / "model.json")
    report = coefficient_report(model)
    write_csv(
        config.out_dir / "coefficients.csv",
        report.to_rows()[0],
        report.to_rows()[1:],
        _metadata(config, panel.dates),
    )
    (config.out_dir / "coefficients.txt").write_text(report.render_text(), encoding="utf-8")
    stable, modulus = stability_check(model)
    print(f"fit VAR({model.p}) on {model.nobs} obs; stable={stable} (modulus {modulus:.4f})")


def cmd_var_irf(config: RunConfig, args) -> None:
    model_path = config.out_dir / "model.json"
    if model_path.exists():
        model = model_from_json(model_path)
        panel = None
    else:
        model, panel, _ = _fit_from_config(config)
    horizon = config.getint("var", "irf_horizon")
    shocks = [s for s in ("hfs", "lfs") if s in model.var_names] or [model.var_names[0]]
    results = [irf(model, shock, horizon=horizon) for shock in shocks]
    rows = []
    for res in results:
        for h in res.horizons:
            for j, name in enumerate(res.response_names):
                rows.append([res.shock, name, int(h), float(res.values[h, j])])
    write_csv(
        config.out_dir / "irf.csv",
        ["shock", "response", "horizon", "value"],
        rows,
        _metadata(config, panel.dates if panel else None),
    )
    responses = [n for n in model.var_names if variable_bucket(n)][:4] or list(model.var_names[:4])
    plots.irf_grid(results, responses, config.out_dir / "irf_grid.svg")
    print(f"impulse responses for shocks {shocks} -> {config.out_dir / 'irf.csv'}")


def cmd_granger(config: RunConfig, args) -> None:
    panel, exog = _state_panel(config)
    spec = _lag_spec(config)
    p = select_lag(panel, p_max=spec.p_max, exog=exog)[0] if spec.p == "auto" else int(spec.p)
    cause = config.get("var", "granger_cause")
    effects = [config.get("var", "granger_effect")] if config.get("var", "granger_effect") else [
        n for n in panel.var_names if n not in ("hfs", "lfs")
    ]
    rows = []
    for effect in effects:
        f_stat, p_value = granger(panel, cause, effect, p, exog=exog)
        rows.append([cause, effect, p, float(f_stat), float(p_value)])
    write_csv(
        config.out_dir / "granger.csv",
        ["cause", "effect", "lags", "f_stat", "p_value"],
        rows,
        _metadata(config, panel.dates),
    )
    print(f"granger tests ({cause} -> {len(effects)} effects) -> {config.out_dir / 'granger.csv'}")


def cmd_forecast(config: RunConfig, args) -> None:
    model, panel, exog = _fit_from_config(config)
    exog_future = exog.values[-1:] if exog is not None else None
    pred = varfit.forecast(model, panel.values[-model.p:], horizon=1, exog_future=exog_future)[0]
    next_day = panel.dates[-1] + dt.timedelta(days=1)
    rows = [[next_day.isoformat(), name, float(pred[j])] for j, name in enumerate(model.var_names)]
    write_csv(config.out_dir / "forecast.csv", ["date", "variable", "predicted"], rows, _metadata(config, panel.dates))
    print(f"one-day-ahead forecast -> {config.out_dir / 'forecast.csv'}")


def cmd_evaluate(config: RunConfig, args) -> None:
    surfaces = _build_surfaces(config)
    variants = _variant_names(config)
    raw_by_variant = {v: _sentiment_series(config, v) for v in variants}

    date_sets = [set(s.date for s in surfaces)] + [set(s.dates) for s in raw_by_variant.values()]
    common_set = set.intersection(*date_sets) if date_sets else set()
    if not common_set:
        raise DataError("no dates shared by surfaces and all sentiment variants")
    surfaces = [s for s in surfaces if s.date in common_set]
    common = tuple(s.date for s in surfaces)

    panel = _surface_panel(config, surfaces)
    pairs = {}
    for label, raw in raw_by_variant.items():
        split = _decompose_series(config, _restrict(raw, common))
        pairs[label] = (split.hfs, split.lfs)

    exog = _exog_panel(config, common)
    spec = _lag_spec(config)
    initial_window = config.getint("evaluate", "initial_window")
    min_window = config.getint("evaluate", "min_window")
    reports = compare_methods(
        panel,
        pairs,
        baselines=("none", "random_walk"),
        spec=spec,
        initial_window=initial_window,
        min_window=min_window,
        exog=exog,
    )
    meta = _metadata(config, panel.dates)
    meta["initial_window"] = str(initial_window)
    rows = [row for report in reports for row in report.to_rows()]
    write_csv(config.out_dir / "accuracy.csv", ["method", "bucket", "mape", "mspe", "n_days"], rows, meta)

    base = panel.subset([n for n in panel.var_names if n not in ("hfs", "lfs")])
    spec_records = rolling_forecast(base, spec, initial_window, min_window=min_window, exog=exog)
    forecast_rows = [
        [r.date.isoformat(), r.variable, float(r.predicted), float(r.realized)] for r in spec_records
    ]
    write_csv(
        config.out_dir / "forecasts.csv",
        ["date", "variable", "predicted", "realized"],
        forecast_rows,
        meta,
    )

    last_date = max(r.date for r in spec_records)
    last = [r for r in spec_records if r.date == last_date and r.variable.startswith("iv_1m_")]
    if last:
        ms = [float(r.variable.rsplit("_", 1)[1]) / 1000.0 for r in last]
        plots.smirk_comparison(
            ms,
            {"1m": [r.realized for r in last]},
            {"1m": [r.predicted for r in last]},
            config.out_dir / "smirk_comparison.svg",
        )
    print(f"evaluated {len(reports)} methods -> {config.out_dir / 'accuracy.csv'}")


def cmd_robustness(config: RunConfig, args) -> None:
    panel, exog = _state_panel(config)
    text = config.get("evaluate", "windows").strip()
    if text:
        windows = []
        for chunk in text.split(";"):
            start, _, stop = chunk.partition("..")
            windows.append((dt.date.fromisoformat(start.strip()), dt.date.fromisoformat(stop.strip())))
    else:
        mid = len(panel.dates) // 2
        windows = [
            (panel.dates[0], panel.dates[-1]),
            (panel.dates[0], panel.dates[mid]),
            (panel.dates[mid], panel.dates[-1]),
        ]
    deltas = subperiod_robustness(panel, windows, spec=_lag_spec(config), exog=exog)
    rows = [
        [d.window, d.regressor, d.equation, float(d.coef), float(d.se), d.stars, int(d.sign_flip), int(d.significance_change)]
        for d in deltas
    ]
    write_csv(
        config.out_dir / "robustness.csv",
        ["window", "regressor", "equation", "coef", "se", "stars", "sign_flip", "significance_change"],
        rows,
        _metadata(config, panel.dates),
    )
    print(f"robustness over {len(windows)} windows -> {config.out_dir / 'robustness.csv'}")


COMMANDS = {
    "gen-data": cmd_gen_data,
    "build-surface": cmd_build_surface,
    "sentiment": cmd_sentiment,
    "decompose": cmd_decompose,
    "var-fit": cmd_var_fit,
    "var-irf": cmd_var_irf,
    "granger": cmd_granger,
    "forecast": cmd_forecast,
    "evaluate": cmd_evaluate,
    "robustness": cmd_robustness,
}


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="volsent", description=__doc__)
    parser.add_argument("--print-config", action="store_true", help="print the effective configuration and exit")
    sub = parser.add_subparsers(dest="command")
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="INI configuration file")
        p.add_argument("--inputs", default=None, help="directory holding quotes.csv, rates.csv, proxies.csv")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--grid", default=None, choices=["default7", "paper24"])
        p.add_argument("--cutoff-period", default=None, help="fft cutoff in trading days, or 'auto'")
        p.add_argument("--method", default=None, choices=["fft", "emd", "ma"], help="decomposition method")
        p.add_argument("--lags", default=None, help="VAR lag order, or 'auto'")
        p.add_argument("--window", type=int, default=None, help="rolling evaluation window")
        p.add_argument("--variants", default=None, help="comma-separated sentiment variants")
        p.add_argument("--exog", default=None, choices=["none", "spot_rate"])
        if name == "gen-data":
            p.add_argument("--scenario", default="dynamic", choices=["flat", "smirk", "dynamic"])
            p.add_argument("--horizon", type=int, default=100)
    return parser


def _overrides_from_args(args) -> dict[tuple[str, str], str]:
    mapping = {
        "out": ("output", "dir"),
        "seed": ("output", "seed"),
        "grid": ("surface", "grid"),
        "cutoff_period": ("decompose", "cutoff_period"),
        "method": ("decompose", "method"),
        "lags": ("var", "lags"),
        "window": ("evaluate", "initial_window"),
        "variants": ("evaluate", "variants"),
        "exog": ("var", "exog"),
    }
    overrides = {}
    for attr, target in mapping.items():
        value = getattr(args, attr, None)
        if value is not None:
            overrides[target] = str(value)
    inputs_dir = getattr(args, "inputs", None)
    if inputs_dir is not None:
        for key in ("quotes", "rates", "proxies"):
            overrides[("inputs", key)] = str(Path(inputs_dir) / f"{key}.csv")
        external = Path(inputs_dir) / "sentiment.csv"
        if external.exists():
            overrides[("inputs", "external_scores")] = str(external)
    return overrides


def main(argv: list[str] | None = None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    if args.print_config:
        sys.stdout.write(render_config(default_parser()))
        return 0
    if not args.command:
        parser.print_help()
        return 2
    try:
        config = load_config(args.config, _overrides_from_args(args))
        COMMANDS[args.command](config, args)
    except ConfigError as exc:
        print(f"config-error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data-error: {exc}", file=sys.stderr)
        return 3
    except (NumericError, np.linalg.LinAlgError) as exc:
        print(f"numeric-error: {exc}", file=sys.stderr)
        return 4
    except VolsentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
