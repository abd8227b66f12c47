"""Parameter sweeps, figure presets and CSV/config I/O."""
from __future__ import annotations

import csv
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import PhysicalParams
from .nonmarkov import blp_measure, canonical_pair
from .oracle import TimeGrid
from .protocol import (
    InitialPreparation,
    MeasurementStrengths,
    ProtocolConfig,
    coherence_l1,
    coherence_rel_entropy,
    run_protocol,
)

AXIS_NAMES = ("theta", "p1", "p2", "omega", "lambda", "t")
METRICS = ("c_l1", "c_rel", "rho_ee", "N")
# fixed-only knobs with their defaults
EXTRA_DEFAULTS = {"omega0": 100.0, "normalize": 0.0, "steps": 50000.0}
AXIS_DEFAULTS = {
    "theta": math.pi / 2,
    "p1": 0.0,
    "p2": 0.0,
    "omega": 1.0,
    "lambda": 5.0,
    "t": 10.0,
}
NM_HORIZON = 50.0
NM_STEPS = 50000


class SweepError(ValueError):
    """Invalid sweep description; ``field`` names the offending key."""

    def __init__(self, message, field=None, line=None):
        super().__init__(message)
        self.field = field
        self.line = line


def _check_value(name, value):
    if not math.isfinite(value):
        raise SweepError(f"{name}: value must be finite, got {value!r}", field=name)
    if name in ("p1", "p2") and not 0 <= value <= 1:
        raise SweepError(f"{name}: must lie in [0, 1], got {value}", field=name)
    if name == "lambda" and value <= 0:
        raise SweepError(f"lambda: must be positive, got {value}", field=name)
    if name in ("omega", "omega0", "t") and value < 0:
        raise SweepError(f"{name}: must be non-negative, got {value}", field=name)
    if name == "steps" and (value < 1 or value != int(value)):
        raise SweepError(f"steps: must be a positive integer, got {value}", field=name)
    if name == "normalize" and value not in (0, 1):
        raise SweepError(f"normalize: must be 0 or 1, got {value}", field=name)


@dataclass
class SweepSpec:
    axis1: tuple[str, list[float]]
    axis2: tuple[str, list[float]] | None = None
    fixed: dict[str, float] = field(default_factory=dict)
    metric: str = "c_l1"

    def __post_init__(self):
        self.validate()

    def axes(self):
        return [self.axis1] if self.axis2 is None else [self.axis1, self.axis2]

    def validate(self):
        if self.metric not in METRICS:
            raise SweepError(
                f"metric: expected one of {', '.join(METRICS)}, got {self.metric!r}",
                field="metric",
            )
        names = []
        for name, values in self.axes():
            if name not in AXIS_NAMES:
                raise SweepError(f"{name}: not a sweepable parameter", field=name)
            if name in names:
                raise SweepError(f"{name}: axis given twice", field=name)
            if len(values) == 0:
                raise SweepError(f"{name}: axis has no values", field=name)
            for v in values:
                _check_value(name, v)
            names.append(name)
        for name, value in self.fixed.items():
            if name not in AXIS_NAMES and name not in EXTRA_DEFAULTS:
                raise SweepError(f"{name}: unknown parameter", field=name)
            if name in names:
                raise SweepError(f"{name}: given both as axis and fixed value", field=name)
            _check_value(name, value)

    def point_values(self, point: dict[str, float]) -> dict[str, float]:
        values = {**AXIS_DEFAULTS, **EXTRA_DEFAULTS, **self.fixed}
        values.update(point)
        return values


@dataclass
class SeriesTable:
    columns: list[str]
    rows: list[list[float]] = field(default_factory=list)

    def column(self, name) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([row[i] for row in self.rows], dtype=float)

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=float).reshape(len(self.rows), len(self.columns))


def evaluate_point(metric: str, values: dict[str, float]) -> float:
    params = PhysicalParams(
        lambda0=1.0, lam=values["lambda"], omega=values["omega"], omega0=values["omega0"]
    )
    if metric == "N":
        grid = TimeGrid(0.0, values["t"], int(values["steps"]))
        return blp_measure(params, canonical_pair(), grid).n_value
    cfg = ProtocolConfig(
        params=params,
        prep=InitialPreparation(values["theta"]),
        strengths=MeasurementStrengths(values["p1"], values["p2"]),
        normalize=bool(values["normalize"]),
    )
    rho = run_protocol(cfg, values["t"])
    if metric == "c_l1":
        return float(coherence_l1(rho))
    if metric == "c_rel":
        return coherence_rel_entropy(rho)
    return float(np.real(rho[0, 0]))


def run_sweep(spec: SweepSpec, jobs: int = 1) -> SeriesTable:
    """Evaluate ``spec.metric`` on the grid, axis1 outer and axis2 inner.

    Axis values are sorted ascending so the table's leading columns are
    ordered regardless of how the spec listed them.
    """
    spec.validate()
    axes = [(name, sorted(values)) for name, values in spec.axes()]
    points = [{axes[0][0]: v} for v in axes[0][1]]
    if len(axes) == 2:
        points = [{**p, axes[1][0]: v} for p in points for v in axes[1][1]]

    def work(point):
        return evaluate_point(spec.metric, spec.point_values(point))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, points))
    else:
        results = [work(p) for p in points]

    columns = [name for name, _ in axes] + [spec.metric]
    rows = [[p[name] for name, _ in axes] + [r] for p, r in zip(points, results)]
    return SeriesTable(columns=columns, rows=rows)


def _log_range(start, stop, count):
    return list(np.geomspace(start, stop, count))


def _lin_range(start, stop, count):
    return list(np.linspace(start, stop, count))


PRESETS = {
    1: lambda: SweepSpec(
        axis1=("theta", _lin_range(0.0, 2 * math.pi, 201)),
        fixed={"omega": 1.0, "lambda": 5.0, "t": 10.0, "p1": 0.5, "p2": 0.5},
    ),
    2: lambda: SweepSpec(
        axis1=("p1", _lin_range(0.0, 1.0, 51)),
        axis2=("p2", _lin_range(0.0, 1.0, 51)),
        fixed={"omega": 1.0, "lambda": 5.0, "t": 10.0, "theta": math.pi / 2},
    ),
    3: lambda: SweepSpec(
        axis1=("omega", _lin_range(1.0, 40.0, 40)),
        axis2=("t", _lin_range(0.0, 20.0, 201)),
        fixed={"lambda": 3.0, "p1": 0.0, "p2": 0.0, "theta": math.pi / 2},
    ),
    4: lambda: SweepSpec(
        axis1=("omega", [1.0, 10.0, 40.0]),
        axis2=("t", _lin_range(0.0, 1000.0, 2000)),
        fixed={"lambda": 3.0, "p1": 0.0, "p2": 0.0, "theta": math.pi / 2},
    ),
    5: lambda: SweepSpec(
        axis1=("lambda", _log_range(0.01, 3.0, 60)),
        axis2=("t", _lin_range(0.0, 20.0, 201)),
        fixed={"omega": 1.0, "p1": 0.0, "p2": 0.0, "theta": math.pi / 2},
    ),
    6: lambda: SweepSpec(
        axis1=("lambda", [0.01, 0.1, 1.0, 3.0]),
        axis2=("t", _lin_range(0.0, 20.0, 401)),
        fixed={"omega": 1.0, "p1": 0.0, "p2": 0.0, "theta": math.pi / 2},
    ),
    7: lambda: SweepSpec(
        axis1=("lambda", _log_range(0.01, 3.0, 30)),
        fixed={"omega": 1.0, "t": NM_HORIZON, "steps": float(NM_STEPS)},
        metric="N",
    ),
}


def figure_spec(number: int) -> SweepSpec:
    try:
        return PRESETS[number]()
    except KeyError:
        raise SweepError(f"figure: expected 1..7, got {number}", field="figure") from None


def format_number(value: float) -> str:
    """Shortest round-tripping decimal, padded to at least 9 fractional digits."""
    return np.format_float_positional(
        float(value), unique=True, min_digits=9, trim="k"
    )


def write_csv(table: SeriesTable, path) -> None:
    """Write ``table`` as plain CSV; ``path`` may be a filename or a text stream."""
    lines = [",".join(table.columns)]
    lines += [",".join(format_number(v) for v in row) for row in table.rows]
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def read_csv(path) -> SeriesTable:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        columns = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    return SeriesTable(columns=columns, rows=rows)


_KEY_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*?)\s*$")


def _parse_number(text, key, lineno):
    try:
        return float(text)
    except ValueError:
        raise SweepError(
            f"line {lineno}: {key}: cannot parse {text!r} as a number", field=key, line=lineno
        ) from None


def _parse_values(text, key, lineno):
    if ":" in text:
        parts = [p.strip() for p in text.split(":")]
        if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] not in ("lin", "log")):
            raise SweepError(
                f"line {lineno}: {key}: ranges are start:stop:count[:lin|log]",
                field=key,
                line=lineno,
            )
        start = _parse_number(parts[0], key, lineno)
        stop = _parse_number(parts[1], key, lineno)
        count = _parse_number(parts[2], key, lineno)
        if count < 1 or count != int(count):
            raise SweepError(
                f"line {lineno}: {key}: count must be a positive integer", field=key, line=lineno
            )
        if len(parts) == 4 and parts[3] == "log":
            if start <= 0 or stop <= 0:
                raise SweepError(
                    f"line {lineno}: {key}: log ranges need positive bounds",
                    field=key,
                    line=lineno,
                )
            return _log_range(start, stop, int(count))
        return _lin_range(start, stop, int(count))
    return [_parse_number(p.strip(), key, lineno) for p in text.split(",")]


def parse_config(path) -> SweepSpec:
    """Read a ``key = value`` sweep description.

    Parameters with more than one value become axes, in file order; a
    single value is held fixed.  ``metric`` selects the output column.
    """
    text = Path(path).read_text(encoding="utf-8")
    metric = "c_l1"
    seen = set()
    axes = []
    fixed = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _KEY_RE.match(line)
        if not m or not m.group(2):
            raise SweepError(f"line {lineno}: expected 'key = value', got {raw!r}", line=lineno)
        key, value = m.group(1), m.group(2)
        if key in seen:
            raise SweepError(f"line {lineno}: {key}: duplicate key", field=key, line=lineno)
        seen.add(key)
        if key == "metric":
            metric = value
            continue
        if key not in AXIS_NAMES and key not in EXTRA_DEFAULTS:
            raise SweepError(f"line {lineno}: {key}: unknown key", field=key, line=lineno)
        values = _parse_values(value, key, lineno)
        for v in values:
            try:
                _check_value(key, v)
            except SweepError as exc:
                raise SweepError(f"line {lineno}: {exc}", field=key, line=lineno) from None
        if len(values) == 1 and ":" not in value:
            fixed[key] = values[0]
        else:
            if key not in AXIS_NAMES:
                raise SweepError(
                    f"line {lineno}: {key}: cannot be swept", field=key, line=lineno
                )
            axes.append((key, values))
    if not axes:
        raise SweepError("config defines no axis (give some key several values)")
    if len(axes) > 2:
        raise SweepError(f"{axes[2][0]}: at most two axes are supported", field=axes[2][0])
    return SweepSpec(
        axis1=axes[0], axis2=axes[1] if len(axes) > 1 else None, fixed=fixed, metric=metric
    )
