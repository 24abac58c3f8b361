"""Command-line front end: JSON configs in, deterministic CSV out.

Subcommands::

    imres run <config.json> [--out <path>] [--threads <n>]
    imres validate <config.json>
    imres list-scenarios

A config names a scenario, an optional detector substrate, one analysis and
its numerics; ``run`` writes the result table as CSV (comment lines start
with '#', floats carry full double precision) and prints a one-line
summary.  Exit codes: 0 success, 2 invalid config (the message names the
offending field), 3 numerical failure.  If IMRES_OUT_DIR is set, relative
output paths are resolved beneath it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from .core import DegenerateImageError, PixelGrid, PovmError
from .fisher import cramer_rao_resolution, fisher_from_images, two_point_resolution
from .scenarios import (
    DoubleSlitSpec,
    GaussianDotSpec,
    LithographySpec,
    double_slit_images,
    gaussian_dot_images,
    lithography_field,
    lithography_images,
)
from .substrates import (
    BOUNDARY_POLICIES,
    BleedingSpec,
    bleeding_counter,
    ideal_counter,
    m_photon_absorber,
    saturating_counter,
)
from .utility import deposition_rate, utility

__all__ = ["ConfigError", "main"]

TOOL_VERSION = "0.1.0"
OUT_DIR_ENV = "IMRES_OUT_DIR"

SCENARIO_KINDS = ("lithography", "gaussian_dot", "double_slit")
SUBSTRATE_KINDS = ("ideal", "m_photon", "saturating", "bleeding")
ANALYSES = ("fisher", "resolution", "two_point", "deposition", "utility", "sweep")

# parameters a sweep may vary, per scenario / substrate kind
SCENARIO_SWEEPABLE = {
    "lithography": {"theta": float, "kappa_ell": float, "efficiency": float,
                    "photon_order": int, "n_pixels": int},
    "gaussian_dot": {"width": float, "peak_amplitude": float, "center": float,
                     "n_pixels": int, "background_mean": float},
    "double_slit": {"slit_separation": float, "wavelength": float,
                    "numerical_aperture": float, "n_samples": int},
}
SUBSTRATE_SWEEPABLE = {
    "ideal": {},
    "m_photon": {"eta": float, "m": int},
    "saturating": {"s": int},
    "bleeding": {"mean_distance": float},
}


class ConfigError(ValueError):
    """Configuration rejected; the message names the offending field."""


# ---------------------------------------------------------------------------
# config access helpers
# ---------------------------------------------------------------------------


def _as_mapping(obj, where: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object (got {type(obj).__name__})")
    return obj


def _get(mapping: dict, key: str, where: str, kind, default=..., choices=None):
    if key not in mapping:
        if default is ...:
            raise ConfigError(f"{where}.{key} is required")
        return default
    value = mapping[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}.{key} must be a number (got {value!r})")
        value = float(value)
    elif kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}.{key} must be an integer (got {value!r})")
    elif kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"{where}.{key} must be a string (got {value!r})")
    if choices is not None and value not in choices:
        raise ConfigError(f"{where}.{key} must be one of {choices} (got {value!r})")
    return value


def _reject_unknown(mapping: dict, allowed, where: str) -> None:
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}.{unknown[0]} is not a recognized field")


def _rebuild(build, where: str):
    """Run a spec constructor, converting its ValueError into a ConfigError."""
    try:
        return build()
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


# ---------------------------------------------------------------------------
# scenario / substrate / plan construction
# ---------------------------------------------------------------------------


def build_scenario(cfg: dict):
    scenario = _as_mapping(cfg.get("scenario"), "scenario")
    kind = _get(scenario, "kind", "scenario", str, choices=SCENARIO_KINDS)
    where = "scenario"
    if kind == "lithography":
        _reject_unknown(scenario, ("kind", "photon_order", "kappa_ell", "n_pixels",
                                   "pixel_width", "origin_index", "efficiency", "theta"), where)
        grid = PixelGrid(
            _get(scenario, "n_pixels", where, int),
            _get(scenario, "pixel_width", where, float, default=1.0),
            _get(scenario, "origin_index", where, int, default=0),
        )
        spec = LithographySpec(
            photon_order=_get(scenario, "photon_order", where, int),
            kappa_ell=_get(scenario, "kappa_ell", where, float),
            grid=grid,
            efficiency=_get(scenario, "efficiency", where, float, default=1.0),
            theta=_get(scenario, "theta", where, float, default=0.0),
        )
        return kind, spec, 0.0
    if kind == "gaussian_dot":
        _reject_unknown(scenario, ("kind", "peak_amplitude", "center", "width", "n_pixels",
                                   "pixel_width", "origin_index", "background_mean"), where)
        n_pixels = _get(scenario, "n_pixels", where, int)
        origin = _get(scenario, "origin_index", where, int, default=-(n_pixels // 2))
        grid = PixelGrid(n_pixels, _get(scenario, "pixel_width", where, float, default=1.0), origin)
        spec = GaussianDotSpec(
            peak_amplitude=_get(scenario, "peak_amplitude", where, float),
            center=_get(scenario, "center", where, float, default=0.0),
            width=_get(scenario, "width", where, float),
            grid=grid,
        )
        background = _get(scenario, "background_mean", where, float, default=0.0)
        if background < 0.0:
            raise ConfigError(f"scenario.background_mean must be non-negative (got {background!r})")
        return kind, spec, background
    _reject_unknown(scenario, ("kind", "slit_separation", "wavelength",
                               "numerical_aperture", "n_samples"), where)
    spec = DoubleSlitSpec(
        slit_separation=_get(scenario, "slit_separation", where, float),
        wavelength=_get(scenario, "wavelength", where, float),
        numerical_aperture=_get(scenario, "numerical_aperture", where, float),
        n_samples=_get(scenario, "n_samples", where, int, default=4096),
    )
    return kind, spec, 0.0


def build_substrate(cfg: dict, scenario_kind: str, scenario_spec):
    substrate = cfg.get("substrate")
    if scenario_kind == "double_slit":
        if substrate is not None:
            raise ConfigError(
                "substrate is not applicable to double_slit (the fringe image is recorded directly)"
            )
        return None
    if substrate is None:
        if scenario_kind == "lithography":
            return m_photon_absorber(scenario_spec.photon_order, scenario_spec.efficiency)
        return ideal_counter()
    substrate = _as_mapping(substrate, "substrate")
    kind = _get(substrate, "kind", "substrate", str, choices=SUBSTRATE_KINDS)
    where = "substrate"
    if kind == "ideal":
        _reject_unknown(substrate, ("kind",), where)
        return ideal_counter()
    if kind == "m_photon":
        _reject_unknown(substrate, ("kind", "m", "eta"), where)
        default_m = scenario_spec.photon_order if scenario_kind == "lithography" else ...
        default_eta = scenario_spec.efficiency if scenario_kind == "lithography" else 1.0
        m = _get(substrate, "m", where, int, default=default_m)
        eta = _get(substrate, "eta", where, float, default=default_eta)
        return m_photon_absorber(m, eta)
    if kind == "saturating":
        _reject_unknown(substrate, ("kind", "s"), where)
        return saturating_counter(_get(substrate, "s", where, int))
    _reject_unknown(substrate, ("kind", "mean_distance", "base", "boundary_policy"), where)
    base_cfg = substrate.get("base")
    if base_cfg is None:
        base = ideal_counter()
    else:
        base = build_substrate({"substrate": base_cfg}, scenario_kind, scenario_spec)
        if not base.is_local:
            raise ConfigError("substrate.base: bleeding cannot wrap another bleeding detector")
    return bleeding_counter(
        BleedingSpec(
            mean_distance=_get(substrate, "mean_distance", where, float),
            base_povm=base,
            boundary_policy=_get(substrate, "boundary_policy", where, str,
                                 default="clamp", choices=BOUNDARY_POLICIES),
        )
    )


def build_numerics(cfg: dict) -> dict:
    numerics = _as_mapping(cfg.get("numerics", {}), "numerics")
    _reject_unknown(numerics, ("floor_scale", "step", "background"), "numerics")
    floor_scale = _get(numerics, "floor_scale", "numerics", float, default=1e-12)
    if floor_scale < 0.0:
        raise ConfigError(f"numerics.floor_scale must be non-negative (got {floor_scale!r})")
    step = numerics.get("step")
    if step is not None:
        step = _get(numerics, "step", "numerics", float)
        if step <= 0.0:
            raise ConfigError(f"numerics.step must be positive (got {step!r})")
    background = _get(numerics, "background", "numerics", float, default=0.0)
    if not (0.0 <= background < 1.0):
        raise ConfigError(f"numerics.background must lie in [0, 1) (got {background!r})")
    return {"floor_scale": floor_scale, "step": step, "background": background}


class RunPlan:
    """Everything a run needs, built and validated before any number crunching."""

    def __init__(self, cfg: dict):
        cfg = _as_mapping(cfg, "config")
        _reject_unknown(cfg, ("scenario", "substrate", "analysis", "sweep", "bracket",
                              "cost_exponent", "numerics", "output"), "config")
        self.config = cfg
        self.scenario_kind, self.scenario, self.background_mean = _rebuild(
            lambda: build_scenario(cfg), "scenario")
        self.analysis = _get(cfg, "analysis", "config", str, choices=ANALYSES)
        self.povm = _rebuild(lambda: build_substrate(cfg, self.scenario_kind, self.scenario),
                             "substrate")
        self.numerics = build_numerics(cfg)
        self.cost_exponent = _get(cfg, "cost_exponent", "config", float, default=1.0)
        if self.cost_exponent <= 0.0:
            raise ConfigError(f"config.cost_exponent must be positive (got {self.cost_exponent!r})")
        self.bracket = self._build_bracket(cfg)
        self.sweep = self._build_sweep(cfg)
        if self.analysis in ("deposition", "utility") and self.scenario_kind == "double_slit":
            raise ConfigError(
                f"analysis '{self.analysis}' needs a photon-field scenario; "
                "double_slit records its fringe image directly"
            )

    # -- validation ---------------------------------------------------------

    def _build_bracket(self, cfg: dict):
        bracket = cfg.get("bracket")
        if bracket is None:
            if self.analysis != "two_point":
                return None
            if self.scenario_kind == "double_slit":
                unit = self.scenario.wavelength / self.scenario.numerical_aperture
                return (0.05 * unit, 0.49 * unit)
            raise ConfigError("config.bracket is required for two_point on this scenario")
        if (not isinstance(bracket, list) or len(bracket) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in bracket)):
            raise ConfigError(f"config.bracket must be a [lo, hi] pair of numbers (got {bracket!r})")
        lo, hi = float(bracket[0]), float(bracket[1])
        if not (0.0 < lo < hi):
            raise ConfigError(f"config.bracket must satisfy 0 < lo < hi (got {bracket!r})")
        return (lo, hi)

    def _build_sweep(self, cfg: dict):
        sweep = cfg.get("sweep")
        if self.analysis != "sweep":
            if sweep is not None:
                raise ConfigError("config.sweep is only used when analysis is 'sweep'")
            return None
        sweep = _as_mapping(sweep, "sweep")
        _reject_unknown(sweep, ("parameter", "start", "stop", "count", "spacing"), "sweep")
        parameter = _get(sweep, "parameter", "sweep", str)
        substrate_kind = (self.config.get("substrate") or {}).get("kind")
        scenario_params = SCENARIO_SWEEPABLE[self.scenario_kind]
        substrate_params = SUBSTRATE_SWEEPABLE.get(substrate_kind, {})
        if parameter in scenario_params:
            target, kind = "scenario", scenario_params[parameter]
        elif parameter in substrate_params:
            target, kind = "substrate", substrate_params[parameter]
        else:
            valid = sorted(set(scenario_params) | set(substrate_params))
            raise ConfigError(
                f"sweep.parameter '{parameter}' is not a parameter of this "
                f"scenario/substrate (valid: {', '.join(valid)})"
            )
        start = _get(sweep, "start", "sweep", float)
        stop = _get(sweep, "stop", "sweep", float)
        count = _get(sweep, "count", "sweep", int)
        spacing = _get(sweep, "spacing", "sweep", str, default="linear",
                       choices=("linear", "log"))
        if count < 2:
            raise ConfigError(f"sweep.count must be at least 2 (got {count})")
        if spacing == "log" and not (0.0 < start and 0.0 < stop):
            raise ConfigError("sweep.start and sweep.stop must be positive for log spacing")
        import numpy as np

        if spacing == "linear":
            values = np.linspace(start, stop, count)
        else:
            values = np.geomspace(start, stop, count)
        if kind is int:
            values = [int(round(v)) for v in values]
        else:
            values = [float(v) for v in values]
        return {"parameter": parameter, "target": target, "values": values}

    # -- evaluation ---------------------------------------------------------

    def _image_family(self, scenario=None, povm=None):
        scenario = self.scenario if scenario is None else scenario
        povm = self.povm if povm is None else povm
        if self.scenario_kind == "lithography":
            return lithography_images(scenario, povm)
        if self.scenario_kind == "gaussian_dot":
            return gaussian_dot_images(scenario, povm, self.background_mean)
        return double_slit_images(scenario)

    def _reference(self, scenario=None) -> float:
        scenario = self.scenario if scenario is None else scenario
        if self.scenario_kind == "lithography":
            return scenario.theta
        if self.scenario_kind == "gaussian_dot":
            return scenario.center
        return scenario.slit_separation

    def _fisher_report(self, scenario=None, povm=None, at=None):
        family = self._image_family(scenario, povm)
        theta = self._reference(scenario) if at is None else at
        return fisher_from_images(
            family,
            theta,
            step=self.numerics["step"],
            floor_scale=self.numerics["floor_scale"],
            background=self.numerics["background"],
        )

    def _field(self, scenario=None):
        scenario = self.scenario if scenario is None else scenario
        if self.scenario_kind == "lithography":
            return lithography_field(scenario)
        if self.scenario_kind == "gaussian_dot":
            from .core import poisson_pixel_field
            from .scenarios import gaussian_dot_means

            means = gaussian_dot_means(scenario) + self.background_mean
            return poisson_pixel_field(scenario.grid, means)
        raise ConfigError("double_slit has no photon-field model")

    def _sweep_point(self, value):
        if self.sweep["target"] == "scenario":
            scenario = replace(self.scenario, **self._scenario_patch(value))
            # defaulted substrates track the scenario (absorber order and
            # efficiency follow a lithography spec), so rebuild per point
            povm = build_substrate(self.config, self.scenario_kind, scenario)
        else:
            scenario = self.scenario
            substrate_cfg = dict(self.config["substrate"])
            substrate_cfg[self.sweep["parameter"]] = value
            povm = build_substrate({"substrate": substrate_cfg}, self.scenario_kind, scenario)
        report = self._fisher_report(scenario, povm)
        row = [value, report.fisher, report.resolution]
        if self.scenario_kind != "double_slit":
            row.append(deposition_rate(self._field(scenario), povm))
        return row

    def _scenario_patch(self, value) -> dict:
        parameter = self.sweep["parameter"]
        if parameter == "background_mean":  # lives beside the dot spec, not in it
            raise ConfigError("sweep.parameter 'background_mean' is not supported yet")
        if parameter == "n_pixels":
            old = self.scenario.grid
            centered = old.origin_index == -(old.n_pixels // 2)
            origin = -(value // 2) if centered else old.origin_index
            return {"grid": PixelGrid(value, old.pixel_width, origin)}
        if parameter == "n_samples":
            return {"n_samples": value}
        return {parameter: value}

    def execute(self, threads: int = 1):
        """Returns (header, rows, summary)."""
        name = self.scenario_kind
        if self.analysis in ("fisher", "resolution"):
            report = self._fisher_report()
            header = ["theta", "fisher", "resolution"]
            rows = [[report.theta, report.fisher, report.resolution]]
            summary = (f"{name} {self.analysis}: theta={report.theta:g} "
                       f"F0={report.fisher:.6g} resolution={report.resolution:.6g}")
            return header, rows, summary
        if self.analysis == "two_point":
            curve = lambda th: self._fisher_report(at=th).fisher  # noqa: E731
            theta_min = two_point_resolution(curve, self.bracket)
            f_at = curve(theta_min)
            header = ["theta_min", "fisher_at_theta_min"]
            rows = [[theta_min, f_at]]
            summary = f"{name} two_point: theta_min={theta_min:.6g} (F={f_at:.6g})"
            return header, rows, summary
        if self.analysis == "deposition":
            field = self._field()
            raw = deposition_rate(field, self.povm)
            per_pixel = raw / field.grid.n_pixels
            header = ["deposition", "deposition_per_pixel"]
            rows = [[raw, per_pixel]]
            summary = f"{name} deposition: D={raw:.6g} ({per_pixel:.6g} per pixel)"
            return header, rows, summary
        if self.analysis == "utility":
            report = self._fisher_report()
            dep = deposition_rate(self._field(), self.povm, normalized=True)
            value = utility(report.fisher, dep, self.cost_exponent)
            header = ["fisher", "deposition", "cost_exponent", "utility"]
            rows = [[report.fisher, dep, self.cost_exponent, value]]
            summary = (f"{name} utility: F0={report.fisher:.6g} D={dep:.6g} "
                       f"c={self.cost_exponent:g} U={value:.6g}")
            return header, rows, summary
        # sweep
        values = self.sweep["values"]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                rows = list(pool.map(self._sweep_point, values))
        else:
            rows = [self._sweep_point(v) for v in values]
        first_fisher = rows[0][1]
        for row in rows:
            row.insert(3, row[1] / first_fisher if first_fisher > 0.0 else float("nan"))
        header = [self.sweep["parameter"], "fisher", "resolution", "fisher_ratio"]
        if self.scenario_kind != "double_slit":
            header.append("deposition")
        summary = (f"{name} sweep({self.sweep['parameter']}): {len(values)} points, "
                   f"F0 {min(r[1] for r in rows):.6g}..{max(r[1] for r in rows):.6g}")
        return header, rows, summary


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return f"{value:.17g}"


def write_csv(path: Path, header, rows, config: dict) -> None:
    lines = [
        f"# imres {TOOL_VERSION}",
        "# config: " + json.dumps(config, sort_keys=True, separators=(",", ":")),
        ",".join(header),
    ]
    lines.extend(",".join(_format_cell(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def resolve_output_path(cli_out: str | None, cfg: dict, analysis: str) -> Path:
    output = cfg.get("output")
    cfg_path = None
    if output is not None:
        output = _as_mapping(output, "output")
        _reject_unknown(output, ("path",), "output")
        cfg_path = _get(output, "path", "output", str, default=None)
    raw = cli_out or cfg_path or f"{analysis}.csv"
    path = Path(raw)
    if not path.is_absolute():
        base = os.environ.get(OUT_DIR_ENV)
        if base:
            path = Path(base) / path
    return path


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

LIST_TEXT = """\
scenarios:
  lithography   photon_order, kappa_ell, n_pixels [, pixel_width, origin_index, efficiency, theta]
                default substrate: m_photon(m=photon_order, eta=efficiency)
  gaussian_dot  peak_amplitude, width, n_pixels [, center, pixel_width, origin_index, background_mean]
                default substrate: ideal
  double_slit   slit_separation, wavelength, numerical_aperture [, n_samples]
                no substrate (fringe image recorded directly)
substrates:
  ideal         -
  m_photon      m, eta
  saturating    s
  bleeding      mean_distance [, base, boundary_policy in {clamp, reflect, discard}]
analyses:
  fisher | resolution | two_point | deposition | utility | sweep
"""


def load_config(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path!r} is not valid JSON: {exc}") from exc
    return _as_mapping(cfg, "config")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="imres",
        description="Fisher-information resolution analysis of pixelated imaging detectors",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run an analysis config and write CSV")
    run_p.add_argument("config", help="path to a JSON config")
    run_p.add_argument("--out", help="output CSV path (overrides config)")
    run_p.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    val_p = sub.add_parser("validate", help="check a config without running it")
    val_p.add_argument("config", help="path to a JSON config")
    sub.add_parser("list-scenarios", help="list scenarios, substrates and analyses")
    args = parser.parse_args(argv)

    if args.command == "list-scenarios":
        print(LIST_TEXT, end="")
        return 0

    try:
        cfg = load_config(args.config)
        plan = RunPlan(cfg)
        if args.command == "validate":
            out = resolve_output_path(None, cfg, plan.analysis)
            print(f"config ok: {plan.scenario_kind}/{plan.analysis} -> {out}")
            return 0
        if args.threads < 1:
            raise ConfigError(f"--threads must be at least 1 (got {args.threads})")
        out = resolve_output_path(args.out, cfg, plan.analysis)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        header, rows, summary = plan.execute(threads=args.threads)
        out.parent.mkdir(parents=True, exist_ok=True)
        write_csv(out, header, rows, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateImageError, PovmError, ValueError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    print(f"{summary} -> {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
