"""Batch driver: single quench runs, 1D/2D parameter sweeps, and the
CSV/JSON/SVG artifacts behind the command-line interface.

Configs are single JSON documents.  Output CSV uses 17 significant digits
and JSON is emitted with sorted keys, so identical configs produce
byte-identical data files.
"""

from __future__ import annotations

import json
import math
import multiprocessing
import os
from dataclasses import dataclass

import numpy as np

from . import bdg, dynamics, models, probes, svgplot
from .errors import ConfigError


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _require(config: dict, key: str, kind=None):
    if key not in config:
        raise ConfigError(f"missing required field '{key}'")
    value = config[key]
    if kind is not None and not isinstance(value, kind):
        raise ConfigError(f"field '{key}' has the wrong type ({type(value).__name__})")
    return value


@dataclass(frozen=True)
class RunSettings:
    beta: float
    step: float
    horizon: float
    sample_every: float
    window: tuple


def _parse_settings(config: dict) -> RunSettings:
    beta = float(config.get("beta", dynamics.DEFAULT_BETA))
    step = float(config.get("step", dynamics.DEFAULT_STEP))
    horizon = float(config.get("horizon", dynamics.DEFAULT_HORIZON))
    sample = float(config.get("sample_every", dynamics.DEFAULT_SAMPLE))
    window = config.get("window", list(dynamics.DEFAULT_WINDOW))
    if (not isinstance(window, (list, tuple)) or len(window) != 2
            or not all(isinstance(v, (int, float)) for v in window)):
        raise ConfigError("'window' must be a [t0, t1] pair")
    t0, t1 = float(window[0]), float(window[1])
    if not 0 <= t0 < t1 <= horizon:
        raise ConfigError(f"window [{t0:g}, {t1:g}] must fit inside [0, horizon={horizon:g}]")
    for name, value in (("beta", beta), ("step", step), ("horizon", horizon),
                        ("sample_every", sample)):
        if not math.isfinite(value) or value < 0:
            raise ConfigError(f"'{name}' must be finite and non-negative")
    if step <= 0 or sample <= 0:
        raise ConfigError("'step' and 'sample_every' must be positive")
    return RunSettings(beta=beta, step=step, horizon=horizon,
                       sample_every=sample, window=(t0, t1))


def _parse_model(config: dict):
    try:
        return models.spec_from_dict(_require(config, "model", dict))
    except ValueError as exc:
        raise ConfigError(f"model: {exc}") from exc


def _parse_probe(config: dict):
    try:
        return probes.probe_from_dict(_require(config, "probe", dict))
    except ValueError as exc:
        raise ConfigError(f"probe: {exc}") from exc


def zero_modes_for_probe(probe_spec: probes.NanowireMzmProbe,
                         model_spec) -> bdg.ZeroModePair:
    """Solve the reference BdG problem that calibrates the wire probe."""
    reference = models.spec_to_dict(model_spec)
    reference.update(dict(probe_spec.reference))
    reference["sites"] = probe_spec.bdg_sites
    ref_spec = models.spec_from_dict(reference)
    return bdg.extract_zero_modes(bdg.build_bdg(ref_spec), probe_spec.edge_fraction)


def _probe_matrix(probe_spec, model_spec, ops, zero_modes=None):
    if isinstance(probe_spec, probes.NanowireMzmProbe) and zero_modes is None:
        zero_modes = zero_modes_for_probe(probe_spec, model_spec)
    return probes.build_probe(probe_spec, ops, zero_modes=zero_modes)


def run_single(model_spec, probe_spec, settings: RunSettings,
               zero_modes=None) -> dynamics.QuenchResult:
    """One quench: build the model and probe, evolve, and average."""
    ops = models.build_modes(model_spec)
    hamiltonian = models.build_hamiltonian(model_spec, ops)
    perturbation = _probe_matrix(probe_spec, model_spec, ops, zero_modes)
    return dynamics.run_echo(hamiltonian, perturbation, beta=settings.beta,
                             step=settings.step, horizon=settings.horizon,
                             sample_every=settings.sample_every,
                             window=settings.window,
                             model=models.spec_to_dict(model_spec),
                             probe=probes.probe_to_dict(probe_spec))


def write_quench_files(result: dynamics.QuenchResult, outdir: str, name: str):
    os.makedirs(outdir, exist_ok=True)
    csv_path = os.path.join(outdir, f"{name}.csv")
    with open(csv_path, "w", encoding="ascii") as handle:
        handle.write("time,le,trace\n")
        for t, le, tr in zip(result.times, result.le_values, result.norm_traces):
            handle.write(f"{_fmt(t)},{_fmt(le)},{_fmt(tr)}\n")
    payload = {
        "model": result.model,
        "probe": result.probe,
        "beta": result.beta,
        "step": result.step,
        "window": list(result.window),
        "steady_average": result.steady_average,
        "times": list(result.times),
        "le": list(result.le_values),
        "traces": list(result.norm_traces),
    }
    with open(os.path.join(outdir, f"{name}.json"), "w", encoding="ascii") as handle:
        json.dump(payload, handle, sort_keys=True, indent=1)
        handle.write("\n")
    svgplot.line_plot(result.times, result.le_values,
                      os.path.join(outdir, f"{name}.svg"),
                      title=f"{result.model.get('model', '?')}: steady average "
                            f"{result.steady_average:.4f}")
    return csv_path


def run_quench(config: dict, outdir: str) -> dynamics.QuenchResult:
    """Config-driven single run; writes <name>.csv/.json/.svg into outdir."""
    model_spec = _parse_model(config)
    probe_spec = _parse_probe(config)
    settings = _parse_settings(config)
    name = config.get("name", "quench")
    result = run_single(model_spec, probe_spec, settings)
    write_quench_files(result, outdir, name)
    return result


@dataclass(frozen=True)
class Axis:
    field: str
    values: tuple


@dataclass(frozen=True)
class PhaseDiagram:
    axis1: Axis
    axis2: Axis | None
    lbar: np.ndarray  # shape (len(axis2.values) or 1, len(axis1.values))
    warnings: tuple
    boundary: tuple  # polyline in (axis1, axis2) coordinates, may be empty


def _parse_axis(config: dict, key: str, required: bool) -> Axis | None:
    if key not in config:
        if required:
            raise ConfigError(f"missing required field '{key}'")
        return None
    raw = _require(config, key, dict)
    field = _require(raw, "field", str)
    values = _require(raw, "values", list)
    if not values or not all(isinstance(v, (int, float)) and math.isfinite(v)
                             for v in values):
        raise ConfigError(f"'{key}.values' must be a non-empty list of finite numbers")
    return Axis(field=field, values=tuple(float(v) for v in values))


def _apply_field(model_dict: dict, probe_dict: dict, field: str, value: float):
    if field in model_dict and field != "model":
        updated = dict(model_dict)
        if field in ("sites", "d"):
            value = int(round(value))
        updated[field] = value
        return updated, probe_dict
    if field in probe_dict and field != "probe":
        updated = dict(probe_dict)
        updated[field] = value
        return model_dict, updated
    raise ConfigError(f"axis field '{field}' is not a field of the model or probe config")


def _boundary_polyline(model_dict: dict, axis1: Axis, axis2: Axis | None):
    """Dashed-overlay points where phase_boundary crosses the swept plane."""
    try:
        base_spec = models.spec_from_dict(model_dict)
        boundary_field = {"kitaev": "mu", "nanowire": "V", "parafermion": "g"}[
            model_dict["model"]]
        models.phase_boundary(base_spec)
    except (KeyError, ValueError):
        return ()

    def critical(other_field=None, other_value=None):
        point = dict(model_dict)
        if other_field is not None:
            point[other_field] = other_value
        return models.phase_boundary(models.spec_from_dict(point))

    if axis2 is None:
        if axis1.field == boundary_field:
            return ((critical(), 0.0),)
        return ()
    if axis1.field == boundary_field:
        ys = np.linspace(min(axis2.values), max(axis2.values), 64)
        return tuple((critical(axis2.field, float(y)), float(y)) for y in ys)
    if axis2.field == boundary_field:
        xs = np.linspace(min(axis1.values), max(axis1.values), 64)
        return tuple((float(x), critical(axis1.field, float(x))) for x in xs)
    return ()


def _sweep_point(task):
    """Worker: one grid point -> (index, lbar, error-string-or-None)."""
    index, model_dict, probe_dict, settings, zero_modes = task
    try:
        model_spec = models.spec_from_dict(model_dict)
        probe_spec = probes.probe_from_dict(probe_dict)
        result = run_single(model_spec, probe_spec, settings, zero_modes=zero_modes)
        return index, result.steady_average, None
    except Exception as exc:  # per-point failures become NaN cells
        return index, float("nan"), f"{type(exc).__name__}: {exc}"


def run_sweep(config: dict, outdir: str, jobs: int = 1) -> PhaseDiagram:
    """Sweep L-bar over one or two axes; writes phase.csv/.json/.svg."""
    model_dict = dict(_require(config, "model", dict))
    probe_dict = dict(_require(config, "probe", dict))
    settings = _parse_settings(config)
    axis1 = _parse_axis(config, "axis1", required=True)
    axis2 = _parse_axis(config, "axis2", required=False)
    base_model = _parse_model(config)
    base_probe = _parse_probe(config)

    # the wire probe is calibrated once at the base/reference point and the
    # same operator is reused at every grid point, as in the phase diagrams
    zero_modes = None
    if isinstance(base_probe, probes.NanowireMzmProbe):
        zero_modes = zero_modes_for_probe(base_probe, base_model)

    rows = axis2.values if axis2 is not None else (None,)
    tasks = []
    index = 0
    for a2 in rows:
        for a1 in axis1.values:
            m_dict, p_dict = _apply_field(model_dict, probe_dict, axis1.field, a1)
            if a2 is not None:
                m_dict, p_dict = _apply_field(m_dict, p_dict, axis2.field, a2)
            tasks.append((index, m_dict, p_dict, settings, zero_modes))
            index += 1

    if jobs > 1:
        with multiprocessing.Pool(processes=jobs) as pool:
            outcomes = pool.map(_sweep_point, tasks)
    else:
        outcomes = [_sweep_point(task) for task in tasks]

    lbar = np.full((len(rows), len(axis1.values)), np.nan)
    warnings = []
    for index, value, error in outcomes:
        i, j = divmod(index, len(axis1.values))
        lbar[i, j] = value
        if error is not None:
            point = {axis1.field: axis1.values[j]}
            if axis2 is not None:
                point[axis2.field] = axis2.values[i]
            warnings.append(f"point {point}: {error}")

    boundary = _boundary_polyline(model_dict, axis1, axis2)
    diagram = PhaseDiagram(axis1=axis1, axis2=axis2, lbar=lbar,
                           warnings=tuple(warnings), boundary=boundary)
    _write_sweep_files(config, diagram, outdir)
    return diagram


def _write_sweep_files(config: dict, diagram: PhaseDiagram, outdir: str):
    os.makedirs(outdir, exist_ok=True)
    axis1, axis2 = diagram.axis1, diagram.axis2
    with open(os.path.join(outdir, "phase.csv"), "w", encoding="ascii") as handle:
        if axis2 is not None:
            handle.write(f"{axis1.field},{axis2.field},lbar\n")
            for i, a2 in enumerate(axis2.values):
                for j, a1 in enumerate(axis1.values):
                    handle.write(f"{_fmt(a1)},{_fmt(a2)},{_fmt(diagram.lbar[i, j])}\n")
        else:
            handle.write(f"{axis1.field},lbar\n")
            for j, a1 in enumerate(axis1.values):
                handle.write(f"{_fmt(a1)},{_fmt(diagram.lbar[0, j])}\n")
    payload = {
        "model": config.get("model"),
        "probe": config.get("probe"),
        "beta": config.get("beta", dynamics.DEFAULT_BETA),
        "step": config.get("step", dynamics.DEFAULT_STEP),
        "horizon": config.get("horizon", dynamics.DEFAULT_HORIZON),
        "window": list(config.get("window", dynamics.DEFAULT_WINDOW)),
        "axis1": {"field": axis1.field, "values": list(axis1.values)},
        "axis2": ({"field": axis2.field, "values": list(axis2.values)}
                  if axis2 is not None else None),
        "lbar": [list(row) for row in diagram.lbar],
        "boundary": [list(p) for p in diagram.boundary],
        "warnings": list(diagram.warnings),
    }
    with open(os.path.join(outdir, "phase.json"), "w", encoding="ascii") as handle:
        json.dump(payload, handle, sort_keys=True, indent=1)
        handle.write("\n")
    svg_path = os.path.join(outdir, "phase.svg")
    if axis2 is not None:
        svgplot.heatmap(axis1.values, axis2.values, diagram.lbar, svg_path,
                        xlabel=axis1.field, ylabel=axis2.field,
                        title="steady-state echo average",
                        boundary=diagram.boundary)
    else:
        svgplot.line_plot(axis1.values, diagram.lbar[0], svg_path,
                          xlabel=axis1.field, ylabel="steady average",
                          title="steady-state echo average")


def render_heatmap(grid, boundary, path, x_values=None, y_values=None,
                   xlabel="", ylabel=""):
    """Standalone heatmap artifact for an L-bar grid in [0, 1]."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 2:
        raise ValueError("grid must be two-dimensional")
    xs = np.arange(grid.shape[1]) if x_values is None else x_values
    ys = np.arange(grid.shape[0]) if y_values is None else y_values
    svgplot.heatmap(xs, ys, grid, path, xlabel=xlabel, ylabel=ylabel,
                    boundary=boundary)


def describe_zero_modes(config: dict) -> dict:
    """JSON-friendly zero-mode report for the CLI."""
    model_spec = _parse_model(config)
    edge_fraction = float(config.get("edge_fraction", 0.1))
    pair = bdg.extract_zero_modes(bdg.build_bdg(model_spec), edge_fraction)
    return {
        "model": models.spec_to_dict(model_spec),
        "edge_fraction": edge_fraction,
        "energies": list(pair.energies),
        "edge_weights": list(pair.edge_weights),
        "phase": pair.phase,
        "fit_residual": pair.fit_residual,
        "gamma": list(pair.gamma),
        "gamma_prime": list(pair.gamma_prime),
    }


def validate_probe(config: dict) -> dict:
    """JSON-friendly Jordan-form report for the CLI."""
    from . import opalg

    model_spec = _parse_model(config)
    probe_spec = _parse_probe(config)
    degeneracy_tol = float(config.get("degeneracy_tol", 1e-6))
    ops = models.build_modes(model_spec)
    hamiltonian = models.build_hamiltonian(model_spec, ops)
    perturbation = _probe_matrix(probe_spec, model_spec, ops)
    parity_op = None
    if isinstance(model_spec, models.KitaevSpec):
        c = opalg.majorana_modes(ops)
        parity_op = opalg.ground_parity_operator(c[0], c[-1])
    report = probes.jordan_form_report(hamiltonian, perturbation,
                                       degeneracy_tol=degeneracy_tol,
                                       parity_op=parity_op)
    restricted = [[[float(z.real), float(z.imag)] for z in row]
                  for row in report.restricted]
    return {
        "model": models.spec_to_dict(model_spec),
        "probe": probes.probe_to_dict(probe_spec),
        "degeneracy_tol": degeneracy_tol,
        "subspace_dim": report.subspace_dim,
        "nilpotency_index": report.nilpotency_index,
        "single_chain": report.single_chain,
        "parity_residual": (None if math.isnan(report.parity_residual)
                            else report.parity_residual),
        "cluster_energies": list(report.cluster_energies),
        "restricted": restricted,
    }
