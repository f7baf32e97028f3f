"""Parameter sweeps: spec parsing, expansion and (optionally parallel) execution.

A sweep spec names axes (lists of values for n_b, n_c, m, coupling, omega),
optional constraints tying one parameter to another axis (m = n_b,
n_c = n_b, m = k * n_c with fixed k, ...), the report fields to emit and an
optional window override.  Points are the Cartesian product of the axes in
canonical order; results keep that order no matter how many workers run,
so output files are byte-identical for any worker count.
"""

from __future__ import annotations

import itertools
import multiprocessing
import os
from dataclasses import dataclass

from .analytics import find_charging_time
from .model import ModelParams

AXIS_ORDER = ("n_b", "n_c", "m", "coupling", "omega")
INT_AXES = {"n_b", "n_c", "m"}

REPORT_FIELDS = (
    "t_charge",
    "delta_e_max",
    "eta_max",
    "p_collective",
    "p_single",
    "p_parallel",
    "gamma",
    "regime",
    "k",
    "analytic_t_charge",
    "t_deviation",
)
DEFAULT_OUTPUTS = ("t_charge", "delta_e_max", "eta_max", "gamma")

JOBS_ENV_VAR = "SPINBATT_JOBS"


@dataclass(frozen=True)
class Constraint:
    """Derived parameter: value = round_if_integer(scale * value_of(source))."""

    source: str
    scale: float = 1.0


@dataclass(frozen=True)
class SweepSpec:
    """Validated sweep description."""

    axes: dict[str, tuple]
    constraints: dict[str, Constraint]
    outputs: tuple[str, ...]
    window: float | None = None
    threshold: float = 10.0


def parse_sweep_spec(doc: dict) -> SweepSpec:
    """Validate a JSON-style sweep document and normalize it."""
    if not isinstance(doc, dict):
        raise ValueError("sweep spec must be a JSON object")
    unknown = set(doc) - {"axes", "constraints", "outputs", "window", "threshold"}
    if unknown:
        raise ValueError(f"unknown sweep spec keys: {sorted(unknown)}")

    raw_axes = doc.get("axes") or {}
    if not isinstance(raw_axes, dict) or not raw_axes:
        raise ValueError("sweep spec needs a non-empty 'axes' object")
    axes: dict[str, tuple] = {}
    for name in raw_axes:
        if name not in AXIS_ORDER:
            raise ValueError(f"unknown axis {name!r}; valid axes: {AXIS_ORDER}")
    for name in AXIS_ORDER:
        if name not in raw_axes:
            continue
        values = raw_axes[name]
        if not isinstance(values, (list, tuple)) or not values:
            raise ValueError(f"axis {name!r} must be a non-empty list")
        if name in INT_AXES:
            axes[name] = tuple(int(v) for v in values)
        else:
            axes[name] = tuple(float(v) for v in values)

    raw_constraints = doc.get("constraints") or {}
    constraints: dict[str, Constraint] = {}
    for name in AXIS_ORDER:
        if name not in raw_constraints:
            continue
        rule = raw_constraints[name]
        if name in axes:
            raise ValueError(f"{name!r} cannot be both an axis and a constraint")
        if isinstance(rule, str):
            rule = {"source": rule}
        if not isinstance(rule, dict) or "source" not in rule:
            raise ValueError(
                f"constraint {name!r} must be an axis name or "
                "{'source': axis, 'scale': factor}"
            )
        source = rule["source"]
        if source not in axes:
            raise ValueError(f"constraint {name!r} references non-axis {source!r}")
        constraints[name] = Constraint(source=source, scale=float(rule.get("scale", 1.0)))
    extra = set(raw_constraints) - set(constraints)
    if extra:
        raise ValueError(f"unknown constraint parameters: {sorted(extra)}")

    missing = {"n_b", "n_c", "m"} - set(axes) - set(constraints)
    if missing:
        raise ValueError(
            f"sweep must define {sorted(missing)} via axes or constraints"
        )

    outputs = tuple(doc.get("outputs") or DEFAULT_OUTPUTS)
    bad = [f for f in outputs if f not in REPORT_FIELDS]
    if bad:
        raise ValueError(f"unknown output fields {bad}; valid fields: {REPORT_FIELDS}")

    window = doc.get("window")
    if window is not None:
        window = float(window)
        if not window > 0:
            raise ValueError(f"window must be positive, got {window}")
    threshold = float(doc.get("threshold", 10.0))

    return SweepSpec(
        axes=axes, constraints=constraints, outputs=outputs,
        window=window, threshold=threshold,
    )


def parameter_columns(spec: SweepSpec) -> list[str]:
    """Axis and constrained-parameter names in canonical order."""
    return [n for n in AXIS_ORDER if n in spec.axes] + [
        n for n in AXIS_ORDER if n in spec.constraints
    ]


def expand_points(spec: SweepSpec) -> list[dict]:
    """Cartesian product of the axes with constraints substituted."""
    names = [n for n in AXIS_ORDER if n in spec.axes]
    points = []
    for combo in itertools.product(*(spec.axes[n] for n in names)):
        point = dict(zip(names, combo))
        for target, rule in spec.constraints.items():
            value = rule.scale * point[rule.source]
            point[target] = round(value) if target in INT_AXES else value
        points.append(point)
    return points


def _report_value(report, field: str):
    if field == "regime":
        return report.prediction.regime.label.value
    if field == "k":
        return report.prediction.regime.k
    if field == "analytic_t_charge":
        return report.prediction.t_charge
    return getattr(report, field)


def evaluate_point(task: tuple) -> dict:
    """Compute one sweep row; failures land in the 'error' cell."""
    point, outputs, window, threshold = task
    row = dict(point)
    row["error"] = None
    try:
        params = ModelParams(
            n_b=point["n_b"],
            n_c=point["n_c"],
            m=point["m"],
            coupling=point.get("coupling", 1.0),
            omega=point.get("omega", 1.0),
        )
        report = find_charging_time(params, window=window, threshold=threshold)
        for field in outputs:
            row[field] = _report_value(report, field)
    except (KeyError, ValueError, RuntimeError) as exc:
        for field in outputs:
            row[field] = None
        reason = "missing required parameter" if isinstance(exc, KeyError) else str(exc)
        row["error"] = f"{type(exc).__name__}: {reason}"
    return row


@dataclass(frozen=True)
class SweepResult:
    """Ordered sweep output: column names plus one dict per point."""

    columns: list[str]
    rows: list[dict]


def default_jobs() -> int:
    """Worker count from SPINBATT_JOBS, defaulting to serial execution."""
    raw = os.environ.get(JOBS_ENV_VAR, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_sweep(spec: SweepSpec, jobs: int | None = None) -> SweepResult:
    """Evaluate every point; results are ordered by point index regardless
    of jobs, so any worker count yields identical output."""
    if jobs is None:
        jobs = default_jobs()
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    points = expand_points(spec)
    tasks = [(p, spec.outputs, spec.window, spec.threshold) for p in points]
    if jobs == 1 or len(tasks) <= 1:
        rows = [evaluate_point(t) for t in tasks]
    else:
        # spawn keeps workers independent of any server threads in the parent
        ctx = multiprocessing.get_context("spawn")
        with ctx.Pool(processes=min(jobs, len(tasks))) as pool:
            rows = pool.map(evaluate_point, tasks, chunksize=1)
    columns = parameter_columns(spec) + list(spec.outputs) + ["error"]
    return SweepResult(columns=columns, rows=rows)
