"""Sweep configuration parsing and CSV / JSON output.

Configuration documents are flat ``key: value`` (or ``key = value``) lines.
Values are numbers, bare words or bracketed comma lists; ``#`` starts a
comment.  Example::

    kind: lambda_sweep
    gamma: 1
    axis1: [lambda, 0, 10, 201]
    observables: [discord, concurrence]
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .model import ParameterError, QuenchParams
from .sweep import Axis, SpecError, SweepResult, SweepSpec, TimeMode

DEFAULTS = {"N": 1000, "gamma": 1.0, "kT": 0.0, "J0": 1.0, "J1": 1.0, "h0": 1.0, "h1": 1.0}
FLOAT_KEYS = ("J0", "J1", "h0", "h1", "gamma", "kT")
KNOWN_KEYS = (
    "kind", "N", *FLOAT_KEYS, "axis1", "axis2", "time_mode", "observables", "method", "coherence",
)
NA = "NA"
DIGITS = 12


class ConfigError(ValueError):
    """A configuration document could not be turned into a sweep spec."""


def _parse_value(raw: str) -> str | list[str]:
    raw = raw.strip()
    if raw.startswith("["):
        if not raw.endswith("]"):
            raise ValueError("unterminated '[' list")
        body = raw[1:-1].strip()
        return [item.strip() for item in body.split(",")] if body else []
    return raw


def read_pairs(text: str) -> dict[str, tuple[int, str | list[str]]]:
    """Key -> (line number, raw value).  Duplicate and malformed lines are errors."""
    pairs: dict[str, tuple[int, str | list[str]]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        seps = [i for i in (line.find(":"), line.find("=")) if i > 0]
        if not seps:
            raise ConfigError(f"line {lineno}: expected 'key: value', got {line!r}")
        cut = min(seps)
        key, raw = line[:cut].strip(), line[cut + 1 :]
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}; allowed keys are {', '.join(KNOWN_KEYS)}")
        if key in pairs:
            raise ConfigError(f"line {lineno}: key {key!r} repeats line {pairs[key][0]}")
        try:
            pairs[key] = (lineno, _parse_value(raw))
        except ValueError as exc:
            raise ConfigError(f"line {lineno}, key {key!r}: {exc}") from None
    return pairs


def _scalar(key: str, line: int, value) -> str:
    if isinstance(value, list):
        raise ConfigError(f"line {line}, key {key!r}: expected a single value, got a list")
    if not value:
        raise ConfigError(f"line {line}, key {key!r}: empty value")
    return value


def _float(key: str, line: int, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"line {line}, key {key!r}: {text!r} is not a number") from None
    if not math.isfinite(value):
        raise ConfigError(f"line {line}, key {key!r}: value must be finite, got {text!r}")
    return value


def _axis(key: str, line: int, value) -> Axis:
    if not isinstance(value, list) or len(value) != 4:
        raise ConfigError(f"line {line}, key {key!r}: expected [name, start, stop, count]")
    name, start, stop, count = value
    try:
        n = int(count)
    except ValueError:
        raise ConfigError(f"line {line}, key {key!r}: count {count!r} is not an integer") from None
    try:
        return Axis(name, _float(key, line, start), _float(key, line, stop), n)
    except SpecError as exc:
        raise ConfigError(f"line {line}, key {key!r}: {exc}") from None


def parse_config(
    text: str,
    kind: str | None = None,
    n_sites: int | None = None,
    time_mode: str | None = None,
) -> SweepSpec:
    """Build a validated SweepSpec; the keyword overrides take precedence over the document."""
    pairs = read_pairs(text)

    def get(key):
        return pairs[key] if key in pairs else (0, None)

    params = dict(DEFAULTS)
    for key in FLOAT_KEYS:
        line, raw = get(key)
        if raw is not None:
            params[key] = _float(key, line, _scalar(key, line, raw))
    line, raw = get("N")
    if raw is not None:
        text_n = _scalar("N", line, raw)
        try:
            params["N"] = int(text_n)
        except ValueError:
            raise ConfigError(f"line {line}, key 'N': {text_n!r} is not an integer") from None
    if n_sites is not None:
        params["N"] = n_sites
    if params["N"] < 4 or params["N"] % 2:
        where = f"line {line}, key 'N'" if n_sites is None and raw is not None else "key 'N'"
        raise ConfigError(f"{where}: N must be even and >= 4, got {params['N']}")
    try:
        base = QuenchParams(**params)
    except ParameterError as exc:
        raise ConfigError(f"invalid parameters: {exc}") from None

    line, raw = get("kind")
    doc_kind = _scalar("kind", line, raw) if raw is not None else None
    if kind is not None and doc_kind is not None and doc_kind != kind:
        raise ConfigError(f"line {line}, key 'kind': document says {doc_kind!r} but the command runs {kind!r}")
    chosen = doc_kind or kind
    if chosen is None:
        raise ConfigError("key 'kind' is required (time_series, lambda_sweep or grid2d)")

    line, raw = get("axis1")
    if raw is None:
        raise ConfigError("key 'axis1' is required, e.g. axis1: [lambda, 0, 10, 201]")
    axis1 = _axis("axis1", line, raw)
    line, raw = get("axis2")
    axis2 = _axis("axis2", line, raw) if raw is not None else None

    line, raw = get("time_mode")
    mode_text = time_mode if time_mode is not None else (_scalar("time_mode", line, raw) if raw else "asymptotic")
    try:
        mode = TimeMode.parse(mode_text)
    except SpecError as exc:
        raise ConfigError(f"key 'time_mode': {exc}") from None

    extra = {}
    line, raw = get("observables")
    if raw is not None:
        extra["observables"] = tuple(raw) if isinstance(raw, list) else (raw,)
    for key in ("method", "coherence"):
        line, raw = get(key)
        if raw is not None:
            extra[key] = _scalar(key, line, raw)
    try:
        return SweepSpec(kind=chosen, base=base, axis1=axis1, axis2=axis2, time_mode=mode, **extra)
    except SpecError as exc:
        raise ConfigError(str(exc)) from None


def format_number(value: float) -> str:
    return format(float(value), f".{DIGITS}g")


def csv_text(result: SweepResult) -> str:
    spec = result.spec
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([a.name for a in spec.axes] + list(spec.observables) + ["reason"])
    for idx in np.ndindex(*spec.shape):
        coords = [format_number(g[i]) for g, i in zip(result.grids, idx)]
        reason = result.reasons[idx]
        if reason:
            row = coords + [NA] * len(spec.observables) + [reason]
        else:
            row = coords + [format_number(result.values[o][idx]) for o in spec.observables] + [""]
        writer.writerow(row)
    return buf.getvalue()


def write_csv(result: SweepResult, path) -> Path:
    path = Path(path)
    try:
        path.write_text(csv_text(result))
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc
    return path


def write_metadata(result: SweepResult, path) -> Path:
    path = Path(path)
    try:
        path.write_text(json.dumps(result.metadata, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write metadata to {path}: {exc.strerror or exc}") from exc
    return path


def write_outputs(result: SweepResult, prefix) -> tuple[Path, Path]:
    """Write ``prefix.csv`` and ``prefix.meta.json``, creating parent directories."""
    prefix = Path(prefix)
    if prefix.parent != Path(""):
        prefix.parent.mkdir(parents=True, exist_ok=True)
    return (
        write_csv(result, prefix.with_name(prefix.name + ".csv")),
        write_metadata(result, prefix.with_name(prefix.name + ".meta.json")),
    )


def read_csv(path) -> tuple[list[str], dict[str, np.ndarray], list[str]]:
    """Columns of a sweep CSV as float arrays (NA -> nan) plus the reason column."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    cols = {}
    for j, name in enumerate(header[:-1]):
        cols[name] = np.array([math.nan if r[j] == NA else float(r[j]) for r in body])
    return header, cols, [r[-1] for r in body]
