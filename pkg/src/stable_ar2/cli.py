"""Command-line surface.

Subcommands: measures, asymptotics, ratio, simulate, estimate,
check-theorem1.  A JSON config supplies the model (coefficients, stability
index, spectral-measure atoms) and optional task defaults; command-line flags
override config values.  Outputs are CSV (17 significant digits, LF line
endings) plus an optional minimal SVG chart.
"""

import argparse
import csv
import json
import math
import sys
from importlib import resources

import numpy as np

from . import asymptotics, measures, montecarlo
from .ar_model import CoeffMatrix, StableAR1Model, case_for_lag, eigen_structure
from .errors import ConfigError, StableAR2Error
from .measures import LagSpec
from .stable_core import SpectralMeasure

_MODEL_KEYS = {"a1", "a2", "a3", "a4", "alpha", "atoms"}
_OPTION_KEYS = {
    "hmax", "tol", "seed", "n", "burn_in", "kind", "direction",
    "h_lo", "h_hi", "p", "out",
}
_ALLOWED_KEYS = _MODEL_KEYS | _OPTION_KEYS
_BUNDLED = ("theta1", "theta2")


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def load_config(path_or_name: str) -> dict:
    """Read a JSON run config from a file path or a bundled config name."""
    if path_or_name in _BUNDLED:
        text = (
            resources.files("stable_ar2").joinpath(f"configs/{path_or_name}.json")
            .read_text(encoding="utf-8")
        )
        source = f"bundled:{path_or_name}"
    else:
        try:
            with open(path_or_name, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path_or_name!r}: {exc}") from exc
        source = path_or_name
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{source}: top level must be an object")
    for key in raw:
        if key not in _ALLOWED_KEYS:
            raise ConfigError(f"{source}: unknown key {key!r}")
    return raw


def _build_measure(atom_records) -> SpectralMeasure:
    if not isinstance(atom_records, list) or not atom_records:
        raise ConfigError("'atoms' must be a non-empty list of {s1, s2, w} records")
    atoms = []
    weights = []
    for i, rec in enumerate(atom_records):
        if not isinstance(rec, dict):
            raise ConfigError(f"atom {i}: expected an object")
        extra = set(rec) - {"s1", "s2", "w", "weight"}
        if extra:
            raise ConfigError(f"atom {i}: unknown key {sorted(extra)[0]!r}")
        if "w" in rec and "weight" in rec:
            raise ConfigError(f"atom {i}: give either 'w' or 'weight', not both")
        try:
            atoms.append((float(rec["s1"]), float(rec["s2"])))
            weights.append(float(rec["w"] if "w" in rec else rec["weight"]))
        except KeyError as exc:
            raise ConfigError(f"atom {i}: missing field {exc.args[0]!r}") from exc
    return SpectralMeasure(np.array(atoms), np.array(weights))


def build_model(cfg: dict, alpha_override=None) -> StableAR1Model:
    missing = sorted(k for k in ("a1", "a2", "a3", "a4", "alpha", "atoms") if k not in cfg)
    if alpha_override is not None and missing == ["alpha"]:
        missing = []
    if missing:
        raise ConfigError(f"config missing field(s): {', '.join(missing)}")
    theta = CoeffMatrix(
        float(cfg["a1"]), float(cfg["a2"]), float(cfg["a3"]), float(cfg["a4"])
    )
    alpha = float(alpha_override if alpha_override is not None else cfg["alpha"])
    return StableAR1Model(theta, alpha, _build_measure(cfg["atoms"]))


def _write_csv(out_path, header, rows):
    if out_path is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_svg(out_path, title, xs, named_series):
    """Tiny dependency-free polyline chart next to the CSV output."""
    width, height, pad = 640, 400, 48
    finite = [v for _, ys in named_series for v in ys if v is not None and math.isfinite(v)]
    if not finite:
        return
    ymin, ymax = min(finite), max(finite)
    if ymax == ymin:
        ymax = ymin + 1.0
    xmin, xmax = min(xs), max(xs)
    if xmax == xmin:
        xmax = xmin + 1.0

    def sx(x):
        return pad + (x - xmin) / (xmax - xmin) * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - ymin) / (ymax - ymin) * (height - 2 * pad)

    colors = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{pad}" y="{height - pad + 16}" font-size="11">{_fmt(xmin)}</text>',
        f'<text x="{width - pad}" y="{height - pad + 16}" text-anchor="end" font-size="11">{_fmt(xmax)}</text>',
        f'<text x="{pad - 4}" y="{height - pad}" text-anchor="end" font-size="11">{ymin:.4g}</text>',
        f'<text x="{pad - 4}" y="{pad + 4}" text-anchor="end" font-size="11">{ymax:.4g}</text>',
    ]
    for i, (name, ys) in enumerate(named_series):
        pts = " ".join(
            f"{sx(x):.2f},{sy(y):.2f}"
            for x, y in zip(xs, ys)
            if y is not None and math.isfinite(y)
        )
        color = colors[i % len(colors)]
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{width - pad}" y="{pad + 14 * (i + 1)}" text-anchor="end" '
            f'font-size="12" fill="{color}">{name}</text>'
        )
    parts.append("</svg>")
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(parts) + "\n")


def _svg_path(out):
    if out is None:
        return None
    return str(out) + ".svg" if not str(out).endswith(".csv") else str(out)[:-4] + ".svg"


def _opt(args, cfg, key, default=None, cast=None):
    cli_value = getattr(args, key, None)
    if cli_value is not None:
        return cli_value
    if key in cfg and cfg[key] is not None:
        return cast(cfg[key]) if cast else cfg[key]
    return default


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_measures(args, cfg):
    model = build_model(cfg, args.alpha)
    kind = _opt(args, cfg, "kind", "cd")
    direction = _opt(args, cfg, "direction", "minus")
    h_max = int(_opt(args, cfg, "hmax", 40, int))
    tol = float(_opt(args, cfg, "tol", 1e-10, float))
    series = measures.measure_series(model, kind, direction, h_max, tol)
    rows = [
        (h, _fmt(v), series.truncation_j, _fmt(series.tail_bound))
        for h, v in zip(series.lags, series.values)
    ]
    out = _opt(args, cfg, "out")
    _write_csv(out, ("h", "value", "truncation_j", "tail_bound"), rows)
    if args.svg:
        _write_svg(
            _svg_path(out), f"{kind} ({direction})", list(series.lags),
            [(kind, list(series.values))],
        )
    return 0


def _cmd_asymptotics(args, cfg):
    model = build_model(cfg, args.alpha)
    tol = float(_opt(args, cfg, "tol", 1e-12, float))
    eig = model.eig
    constants = asymptotics.asymptotic_constants(model, tol=tol)
    rows = [
        ("lambda1", _fmt(eig.lambda1)),
        ("lambda2", _fmt(eig.lambda2)),
        ("degenerate", _fmt(eig.degenerate)),
        ("case_even_lag", case_for_lag(eig, 0).value),
        ("case_odd_lag", case_for_lag(eig, 1).value),
    ]
    rows += [(name, _fmt(val)) for name, val in sorted(constants.as_dict().items())]
    rows.append(("tail_bound", _fmt(constants.tail_bound)))
    _write_csv(_opt(args, cfg, "out"), ("name", "value"), rows)
    return 0


def _cmd_ratio(args, cfg):
    model = build_model(cfg, args.alpha)
    h_max = int(_opt(args, cfg, "hmax", 40, int))
    tol = float(_opt(args, cfg, "tol", 1e-10, float))
    series = asymptotics.ratio_series(model, h_max, tol)
    rows = []
    rm_over_alpha = []
    rp = []
    for i, h in enumerate(series.lags):
        rm = series.r_minus[i] / model.alpha if series.minus_defined[i] else None
        rpl = series.r_plus[i] if series.plus_defined[i] else None
        rm_over_alpha.append(rm)
        rp.append(rpl)
        rows.append((h, _fmt(rm), _fmt(rpl)))
    out = _opt(args, cfg, "out")
    _write_csv(out, ("h", "r_minus_over_alpha", "r_plus"), rows)
    if args.svg:
        _write_svg(
            _svg_path(out), "ratio curves", list(series.lags),
            [("r_minus/alpha", rm_over_alpha), ("r_plus", rp)],
        )
    return 0


def _cmd_simulate(args, cfg):
    model = build_model(cfg, args.alpha)
    n = int(_opt(args, cfg, "n", 1000, int))
    seed = int(_opt(args, cfg, "seed", 0, int))
    burn_in = _opt(args, cfg, "burn_in")
    burn_in = int(burn_in) if burn_in is not None else None
    path = montecarlo.PathSample.simulated(model, n, seed, burn_in)
    rows = [(_fmt(x1), _fmt(x2)) for x1, x2 in path.observations]
    _write_csv(_opt(args, cfg, "out"), ("x1", "x2"), rows)
    return 0


def _read_path_csv(source: str) -> montecarlo.PathSample:
    rows = []
    with open(source, "r", encoding="utf-8", newline="") as fh:
        for lineno, rec in enumerate(csv.reader(fh), start=1):
            if not rec or (len(rec) == 1 and not rec[0].strip()):
                continue
            if len(rec) < 2:
                raise ConfigError(f"{source}:{lineno}: expected two columns")
            try:
                rows.append((float(rec[0]), float(rec[1])))
            except ValueError:
                if lineno == 1:
                    continue  # header row
                raise ConfigError(f"{source}:{lineno}: non-numeric row") from None
    if len(rows) < 2:
        raise ConfigError(f"{source}: fewer than two usable rows")
    return montecarlo.PathSample.ingested(np.array(rows), source)


def _cmd_estimate(args, cfg):
    n = int(_opt(args, cfg, "n", 10 ** 5, int))
    seed = int(_opt(args, cfg, "seed", 0, int))
    if args.input is not None:
        path = _read_path_csv(args.input)
    else:
        model = build_model(cfg, args.alpha)
        path = montecarlo.PathSample.simulated(model, n, seed)
    h_lo = int(_opt(args, cfg, "h_lo", 5, int))
    h_hi = int(_opt(args, cfg, "h_hi", 15, int))
    p = _opt(args, cfg, "p")
    p = float(p) if p is not None else None
    est = montecarlo.estimate_alpha(path, (h_lo, h_hi), p=p, seed=seed)
    rows = [(h, _fmt(r), _fmt(s), _fmt(w)) for h, r, s, w in est.per_lag]
    _write_csv(_opt(args, cfg, "out"), ("h", "ratio", "stderr", "weight"), rows)
    print(
        f"alpha_hat={_fmt(est.alpha_hat)} stderr={_fmt(est.stderr)} "
        f"window=[{est.h_window[0]},{est.h_window[1]}] p={_fmt(est.p_used)} "
        f"warning={_fmt(est.warning)}"
    )
    return 0


def _cmd_check_theorem1(args, cfg):
    model = build_model(cfg, args.alpha)
    h_max = int(_opt(args, cfg, "hmax", 40, int))
    tol = float(_opt(args, cfg, "tol", 0.02, float))
    report = asymptotics.theorem1_check(model, h_max, tol)
    rows = [
        ("abs(r_minus/alpha - 1)", _fmt(report.minus_gap), _fmt(tol), _fmt(report.minus_passed)),
        ("abs(r_plus)", _fmt(report.plus_value), _fmt(tol), _fmt(report.plus_passed)),
        ("r_plus decay vs h=1", _fmt(report.plus_decay), "", ""),
    ]
    _write_csv(_opt(args, cfg, "out"), ("metric", "value", "threshold", "passed"), rows)
    print(f"theorem1 {'PASS' if report.passed else 'FAIL'} "
          f"(minus_gap={_fmt(report.minus_gap)}, plus={_fmt(report.plus_value)}, tol={_fmt(tol)})")
    return 0 if report.passed else 1


_HANDLERS = {
    "measures": _cmd_measures,
    "asymptotics": _cmd_asymptotics,
    "ratio": _cmd_ratio,
    "simulate": _cmd_simulate,
    "estimate": _cmd_estimate,
    "check-theorem1": _cmd_check_theorem1,
}


def _add_common(sub):
    sub.add_argument("--config", required=True,
                     help="JSON config path, or a bundled name: theta1, theta2")
    sub.add_argument("--alpha", type=float, default=None, help="override the config alpha")
    sub.add_argument("--hmax", type=int, default=None)
    sub.add_argument("--tol", type=float, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--n", type=int, default=None)
    sub.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    sub.add_argument("--svg", action="store_true",
                     help="also write a minimal SVG chart next to the CSV")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stable-ar2",
        description="Cross-dependence measures for the bivariate AR(1) model "
                    "with symmetric alpha-stable noise",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    for name in _HANDLERS:
        sub = subs.add_parser(name)
        _add_common(sub)
        if name == "measures":
            sub.add_argument("--kind", choices=("cd", "cv"), default=None)
            sub.add_argument("--direction", choices=("minus", "plus"), default=None)
        if name == "simulate":
            sub.add_argument("--burn-in", dest="burn_in", type=int, default=None)
        if name == "estimate":
            sub.add_argument("--h-lo", dest="h_lo", type=int, default=None)
            sub.add_argument("--h-hi", dest="h_hi", type=int, default=None)
            sub.add_argument("--p", type=float, default=None)
            sub.add_argument("--input", default=None,
                             help="two-column CSV path to ingest instead of simulating")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        return _HANDLERS[args.command](args, cfg)
    except StableAR2Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
