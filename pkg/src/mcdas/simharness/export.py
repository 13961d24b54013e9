"""CSV and JSON writers for tick records and Monte Carlo reports.

CSV floats are written with 9 significant digits; JSON keeps the shortest
exact representation so a re-read reproduces every value.  Missing values
(absent vehicles) are empty CSV cells and JSON ``null``.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import json
from pathlib import Path
from typing import Any, Sequence, Union

from .engine import TickRecord
from .montecarlo import MonteCarloReport

RECORD_COLUMNS = (
    "t",
    "mode",
    "host_x",
    "rear_x",
    "rear_y",
    "rear_est_x",
    "rear_est_y",
    "front_x",
    "front_y",
    "front_est_x",
    "front_est_y",
    "host_speed",
    "host_y",
)

RUN_COLUMNS = (
    "run",
    "seed",
    "ticks",
    "rear_filtered_mse",
    "rear_raw_mse",
    "front_filtered_mse",
    "front_raw_mse",
    "crash_zone_hit",
    "error",
)

FORMATS = ("csv", "json")


class ExportError(OSError):
    pass


def fmt_float(v: float) -> str:
    return f"{v:.9g}"


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _record_rows(records: Sequence[TickRecord]):
    for r in records:
        yield [_cell(getattr(r, c)) for c in RECORD_COLUMNS]


def _run_rows(report: MonteCarloReport):
    for s in report.per_run:
        yield [
            _cell(s.run),
            _cell(s.seed),
            _cell(s.ticks),
            _cell(s.filtered_mse.get("rear")),
            _cell(s.raw_mse.get("rear")),
            _cell(s.filtered_mse.get("front")),
            _cell(s.raw_mse.get("front")),
            _cell(s.crash_zone_hit),
            _cell(s.error),
        ]


def export(obj: Union[Sequence[TickRecord], MonteCarloReport], path, fmt: str = "csv") -> Path:
    """Write records or a report to ``path`` as ``csv`` or ``json``.

    A report exported as CSV becomes one row per run.
    """
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    path = Path(path)
    is_report = isinstance(obj, MonteCarloReport)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            if fmt == "json":
                payload = to_jsonable(obj) if is_report else {"records": to_jsonable(list(obj))}
                json.dump(payload, fh, indent=2)
                fh.write("\n")
            else:
                w = csv.writer(fh, lineterminator="\n")
                if is_report:
                    w.writerow(RUN_COLUMNS)
                    w.writerows(_run_rows(obj))
                else:
                    w.writerow(RECORD_COLUMNS)
                    w.writerows(_record_rows(obj))
    except OSError as exc:
        raise ExportError(f"{path}: {exc.strerror or exc}") from exc
    return path


def read_json(path) -> Any:
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ExportError(f"{path}: {exc.strerror or exc}") from exc
