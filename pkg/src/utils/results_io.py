"""
CSV results and flat key=value plan files.

CSV: UTF-8, LF line endings, header
scheme,ebn0_db,bits,errors,ber,groups,seed,elapsed_s
optionally followed by index_bit_errors,pattern_errors. Floats are written
with repr so they parse back exactly.
"""

import csv
import io
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from dotenv import dotenv_values
from pydantic import ValidationError

from .analysis import PairReport
from .ber_engine import BerRecord, SimulationPlan

logger = logging.getLogger(__name__)

CSV_HEADER = ["scheme", "ebn0_db", "bits", "errors", "ber", "groups", "seed", "elapsed_s"]
BREAKDOWN_COLUMNS = ["index_bit_errors", "pattern_errors"]

# Plan file key -> SimulationPlan field
PLAN_KEYS = {
    "scheme": "scheme",
    "ebn0": "ebn0_db",
    "max_groups": "max_groups",
    "target_errors": "target_errors",
    "seed": "seed",
    "workers": "workers",
    "block_groups": "block_groups",
    "noiseless": "noiseless",
    "timing": "timing",
    "breakdown": "breakdown",
    "out": "out",
}


class ConfigError(ValueError):
    """Raised for malformed plan files, plan values or result files."""
    pass


def write_csv(records: List[BerRecord], path: Union[str, Path], breakdown: bool = False) -> Path:
    """
    Write records to CSV.

    Args:
        records: Records in output order
        path: Output file; parent directories are created
        breakdown: Append index_bit_errors and pattern_errors columns

    Returns:
        The written path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = CSV_HEADER + (BREAKDOWN_COLUMNS if breakdown else [])

    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for r in records:
            row = [
                r.scheme, repr(float(r.ebn0_db)), r.bits, r.errors,
                repr(float(r.ber)), r.groups, r.seed, repr(float(r.elapsed_s)),
            ]
            if breakdown:
                row += [r.index_bit_errors, r.pattern_errors]
            writer.writerow(row)

    logger.info(f"Wrote {len(records)} records to {path}")
    return path


def read_csv(path: Union[str, Path]) -> List[BerRecord]:
    """Parse a results CSV written by write_csv, with or without breakdown columns."""
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header not in (CSV_HEADER, CSV_HEADER + BREAKDOWN_COLUMNS):
            raise ConfigError(f"Unexpected CSV header in {path}: {header}")

        records = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ConfigError(f"{path}:{line_no}: expected {len(header)} fields, got {len(row)}")
            values = dict(zip(header, row))
            try:
                records.append(BerRecord(
                    scheme=values["scheme"],
                    ebn0_db=float(values["ebn0_db"]),
                    bits=int(values["bits"]),
                    errors=int(values["errors"]),
                    ber=float(values["ber"]),
                    groups=int(values["groups"]),
                    seed=int(values["seed"]),
                    elapsed_s=float(values["elapsed_s"]),
                    index_bit_errors=int(values.get("index_bit_errors", 0)),
                    pattern_errors=int(values.get("pattern_errors", 0)),
                ))
            except ValueError as e:
                raise ConfigError(f"{path}:{line_no}: {e}") from e
    return records


def parse_ebn0_grid(text: str) -> Tuple[float, ...]:
    """
    Parse an Eb/N0 grid in dB.

    Accepts "start:step:stop" (stop included when it lies on the grid) or a
    comma-separated list such as "0,5,10".

    Raises:
        ConfigError: If the text is not a valid grid
    """
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ConfigError(f"Grid range must be start:step:stop, got '{text}'")
            start, step, stop = parts
            if step <= 0:
                raise ConfigError(f"Grid step must be positive, got {step}")
            if stop < start:
                raise ConfigError(f"Grid stop {stop} is below start {start}")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            return tuple(round(start + i * step, 10) for i in range(count))
        return tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"Invalid Eb/N0 grid '{text}': {e}") from e


def format_ebn0_grid(grid: Tuple[float, ...]) -> str:
    return ",".join(repr(float(v)) for v in grid)


def make_plan(values: Dict[str, Any]) -> SimulationPlan:
    """Build a SimulationPlan, reporting validation failures as ConfigError."""
    try:
        return SimulationPlan(**values)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'plan'}: {err['msg']}" for err in e.errors()
        )
        raise ConfigError(f"Invalid simulation plan: {problems}") from e


def read_plan_values(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a flat key=value plan file into SimulationPlan field values.

    Raises:
        ConfigError: If the file is missing, a key is unknown or has no value
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}")

    values: Dict[str, Any] = {}
    for key, raw in dotenv_values(path).items():
        if key not in PLAN_KEYS:
            raise ConfigError(f"Unknown config key '{key}' in {path}")
        if raw is None:
            raise ConfigError(f"Config key '{key}' in {path} has no value")
        field = PLAN_KEYS[key]
        if field == "ebn0_db":
            values[field] = parse_ebn0_grid(raw)
        elif field == "out":
            values[field] = raw or None
        else:
            values[field] = raw
    return values


def load_config(path: Union[str, Path], base: Optional[Dict[str, Any]] = None) -> SimulationPlan:
    """
    Load a plan file; keys it contains override `base`.

    Returns:
        SimulationPlan
    """
    merged = dict(base or {})
    merged.update(read_plan_values(path))
    plan = make_plan(merged)
    logger.info(f"Loaded plan from {path}: {plan.scheme}, {len(plan.ebn0_db)} points")
    return plan


def write_config(plan: SimulationPlan, path: Union[str, Path]) -> Path:
    """Write every plan field as key=value, in the same format load_config reads."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for key, field in PLAN_KEYS.items():
        value = getattr(plan, field)
        if value is None:
            continue
        if field == "ebn0_db":
            value = format_ebn0_grid(value)
        elif isinstance(value, bool):
            value = str(value).lower()
        lines.append(f"{key}={value}")

    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")
    return path


REPORT_COLUMNS = [
    "pair", "delta1_factor", "delta2_factor", "eb",
    "normalized_d1", "normalized_d2", "cpep_metric_d1", "cpep_metric_d2",
]


def format_pair_reports(rows: List[Tuple[str, PairReport]]) -> str:
    """(name, PairReport) rows as CSV text, 12 significant digits."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for name, report in rows:
        values = report.to_dict()
        writer.writerow([name] + [f"{values[c]:.12g}" for c in REPORT_COLUMNS[1:]])
    return buffer.getvalue()


def write_pair_reports(rows: List[Tuple[str, PairReport]], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(format_pair_reports(rows))
    return path
