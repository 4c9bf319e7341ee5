"""Reading and writing covariance matrices, reports and tables."""

from __future__ import annotations

import csv
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from ..errors import DomainError
from ..utils.poly_text import parse_rational

LOGGER = logging.getLogger(__name__)

PathLike = Union[str, Path]


def exact_text(value: Fraction) -> str:
    """Finite decimal text when the denominator allows it, ``p/q`` otherwise."""

    value = Fraction(value)
    denominator = value.denominator
    twos = fives = 0
    while denominator % 2 == 0:
        denominator //= 2
        twos += 1
    while denominator % 5 == 0:
        denominator //= 5
        fives += 1
    if denominator != 1:
        return f"{value.numerator}/{value.denominator}"
    places = max(twos, fives)
    scaled = abs(value.numerator) * (10**places // value.denominator)
    digits = str(scaled).rjust(places + 1, "0")
    sign = "-" if value < 0 else ""
    if not places:
        return f"{sign}{digits}"
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _check_square(rows: List[List[Fraction]], source: str) -> List[List[Fraction]]:
    if not rows or any(len(row) != len(rows) for row in rows):
        raise DomainError(f"{source}: covariance matrix must be square and non-empty")
    return rows


def read_covariance(path: PathLike) -> List[List[Fraction]]:
    """CSV of decimals (no header) or JSON of ``p/q`` strings, read exactly."""

    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DomainError(f"cannot read covariance file {path}: {exc}") from exc
    try:
        if path.suffix.lower() == ".json":
            data = json.loads(text)
            if isinstance(data, dict):
                data = data.get("S", data.get("covariance"))
            if not isinstance(data, list):
                raise DomainError(f"{path}: expected a list of rows or an object with key 'S'")
            rows = [[parse_rational(str(entry)) for entry in row] for row in data]
        else:
            rows = [
                [parse_rational(entry) for entry in record if entry.strip()]
                for record in csv.reader(text.splitlines())
                if any(entry.strip() for entry in record)
            ]
    except (ValueError, ZeroDivisionError, json.JSONDecodeError) as exc:
        raise DomainError(f"{path}: {exc}") from exc
    LOGGER.debug("Read %dx%d covariance matrix from %s", len(rows), len(rows), path)
    return _check_square(rows, str(path))


def write_covariance_csv(path: PathLike, S: Sequence[Sequence[Fraction]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        for row in S:
            writer.writerow([exact_text(value) for value in row])


def write_covariance_json(path: PathLike, S: Sequence[Sequence[Fraction]]) -> None:
    Path(path).write_text(
        json.dumps({"S": [[str(Fraction(value)) for value in row] for row in S]}, indent=2) + "\n",
        encoding="utf-8",
    )


def write_covariance(path: PathLike, S: Sequence[Sequence[Fraction]]) -> None:
    if Path(path).suffix.lower() == ".json":
        write_covariance_json(path, S)
    else:
        write_covariance_csv(path, S)


def covariance_from_samples(samples: Any) -> np.ndarray:
    """Sample covariance with ``1/N`` normalization; rows are observations."""

    X = np.asarray(samples, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DomainError("samples must be a 2-D array with at least two observations")
    centered = X - X.mean(axis=0)
    return centered.T @ centered / X.shape[0]


def _default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def dumps_report(data: Dict[str, Any]) -> str:
    return json.dumps(data, indent=2, default=_default, allow_nan=True)


def write_json(data: Dict[str, Any], path: Optional[PathLike] = None) -> None:
    """Write a JSON report to ``path`` or standard output."""

    text = dumps_report(data) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")
    LOGGER.info("Wrote report to %s", path)


def write_table(rows: Iterable[Dict[str, Any]], path: Optional[PathLike], fieldnames: Sequence[str]) -> None:
    """CSV table with a header row; ``path=None`` writes to standard output."""

    if path is None:
        writer = csv.DictWriter(sys.stdout, fieldnames=list(fieldnames), extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(fieldnames), extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)
    LOGGER.info("Wrote table to %s", path)


__all__ = [
    "covariance_from_samples",
    "dumps_report",
    "exact_text",
    "read_covariance",
    "write_covariance",
    "write_covariance_csv",
    "write_covariance_json",
    "write_json",
    "write_table",
]
