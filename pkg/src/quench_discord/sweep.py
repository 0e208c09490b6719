"""Parameter sweeps of discord and correlators over time, lambda and 2D grids.

Every grid point is evaluated independently and written into a
pre-allocated slot, so the result does not depend on the number of worker
threads or on scheduling order.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .correlators import (
    PairCorrelators,
    asymptotic_correlators,
    nn_correlators,
    window_correlators,
)
from .finite_size import exact_asymptotic_correlators, exact_correlators, exact_window_correlators
from .model import ParameterError, QuenchParams, build_mode_grid
from .qstate import StateError, assemble_rho, concurrence, geometric_discord_xstate

KINDS = ("time_series", "lambda_sweep", "grid2d")
AXIS_NAMES = ("J0", "J1", "h0", "h1", "gamma", "kT", "lambda", "lambda1", "lambda0", "t")
OBSERVABLES = ("discord", "concurrence", "mz", "xx", "yy", "zz", "xy")
METHODS = ("antiperiodic", "paper", "exact")
COHERENCES = ("full", "real")


class SpecError(ValueError):
    """A sweep specification is inconsistent."""


@dataclass(frozen=True)
class TimeMode:
    """How the post-quench time enters: one instant, the infinite-time average, or a window mean."""

    kind: str = "asymptotic"
    t: float = 0.0
    span: float = 0.0
    samples: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ("at", "asymptotic", "window"):
            raise SpecError(f"unknown time mode {self.kind!r}")
        if not (math.isfinite(self.t) and self.t >= 0.0):
            raise SpecError(f"time must be finite and >= 0, got {self.t}")
        if self.kind == "window" and (self.span <= 0.0 or self.samples < 2):
            raise SpecError("window needs a positive span and at least 2 samples")

    @classmethod
    def parse(cls, text: str) -> "TimeMode":
        """Parse ``at:T``, ``asymptotic`` or ``window:T,D,S``."""
        text = text.strip()
        if text == "asymptotic":
            return cls()
        head, _, rest = text.partition(":")
        try:
            if head == "at" and rest:
                return cls("at", t=float(rest))
            if head == "window" and rest:
                start, span, samples = rest.split(",")
                return cls("window", t=float(start), span=float(span), samples=int(samples))
        except ValueError as exc:
            raise SpecError(f"bad time mode {text!r}: {exc}") from None
        raise SpecError(f"bad time mode {text!r}; expected at:T, asymptotic or window:T,D,S")

    def __str__(self) -> str:
        if self.kind == "at":
            return f"at:{self.t!r}"
        if self.kind == "window":
            return f"window:{self.t!r},{self.span!r},{self.samples}"
        return "asymptotic"


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self) -> None:
        if self.name not in AXIS_NAMES:
            raise SpecError(f"unknown axis {self.name!r}; expected one of {', '.join(AXIS_NAMES)}")
        if isinstance(self.count, bool) or int(self.count) != self.count or self.count < 2:
            raise SpecError(f"axis {self.name}: count must be an integer >= 2, got {self.count!r}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop) and self.start < self.stop):
            raise SpecError(f"axis {self.name}: need finite start < stop, got {self.start}, {self.stop}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.count))


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    base: QuenchParams
    axis1: Axis
    axis2: Axis | None = None
    time_mode: TimeMode = field(default_factory=TimeMode)
    observables: tuple[str, ...] = ("discord",)
    method: str = "exact"
    coherence: str = "full"

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise SpecError(f"unknown kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.kind == "grid2d" and self.axis2 is None:
            raise SpecError("grid2d needs axis2")
        if self.kind != "grid2d" and self.axis2 is not None:
            raise SpecError(f"{self.kind} takes a single axis")
        if self.kind == "time_series" and self.axis1.name != "t":
            raise SpecError("time_series needs axis1 = t")
        if self.kind == "lambda_sweep" and self.axis1.name == "t":
            raise SpecError("lambda_sweep cannot sweep t; use time_series")
        if self.axis2 is not None and self.axis2.name == self.axis1.name:
            raise SpecError("axis1 and axis2 must differ")
        if not self.observables:
            raise SpecError("at least one observable is required")
        for name in self.observables:
            if name not in OBSERVABLES:
                raise SpecError(f"unknown observable {name!r}; expected one of {', '.join(OBSERVABLES)}")
        if len(set(self.observables)) != len(self.observables):
            raise SpecError("observables must not repeat")
        if self.method not in METHODS:
            raise SpecError(f"unknown method {self.method!r}; expected one of {', '.join(METHODS)}")
        if self.coherence not in COHERENCES:
            raise SpecError(f"unknown coherence {self.coherence!r}; expected one of {', '.join(COHERENCES)}")

    @property
    def axes(self) -> tuple[Axis, ...]:
        return (self.axis1,) if self.axis2 is None else (self.axis1, self.axis2)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(int(a.count) for a in self.axes)

    @property
    def time_axis(self) -> bool:
        return any(a.name == "t" for a in self.axes)

    def effective_time_mode(self) -> str:
        return "at:axis(t)" if self.time_axis else str(self.time_mode)


@dataclass
class SweepResult:
    spec: SweepSpec
    grids: tuple[np.ndarray, ...]
    values: dict[str, np.ndarray]
    reasons: np.ndarray
    metadata: dict

    @property
    def n_points(self) -> int:
        return int(self.reasons.size)

    @property
    def n_failed(self) -> int:
        return int(np.count_nonzero(self.reasons != ""))

    @property
    def failure_fraction(self) -> float:
        return self.n_failed / self.n_points


def apply_axis(params: QuenchParams, name: str, value: float) -> tuple[QuenchParams, float | None]:
    """Move one sweep coordinate into the parameters; returns the time for the t axis."""
    if name == "t":
        return params, float(value)
    if name == "lambda":
        h = params.h0
        return params.replace(J0=value * h, J1=value * h, h1=h), None
    if name == "lambda1":
        return params.replace(J1=value * params.h1), None
    if name == "lambda0":
        return params.replace(J0=value * params.h0), None
    return params.replace(**{name: float(value)}), None


def point_correlators(params: QuenchParams, mode: TimeMode, method: str = "exact") -> PairCorrelators:
    if method == "exact":
        if mode.kind == "at":
            return exact_correlators(params, mode.t)
        if mode.kind == "window":
            return exact_window_correlators(params, mode.t, mode.span, mode.samples)
        return exact_asymptotic_correlators(params)
    grid = build_mode_grid(params, method)
    if mode.kind == "at":
        return nn_correlators(grid, params, mode.t)
    if mode.kind == "window":
        return window_correlators(grid, params, mode.t, mode.span, mode.samples)
    return asymptotic_correlators(grid, params)


def point_observables(
    params: QuenchParams,
    mode: TimeMode,
    observables: tuple[str, ...] = ("discord",),
    method: str = "exact",
    coherence: str = "full",
) -> dict[str, float]:
    """Requested observables at one parameter point.

    The two-spin state is always assembled, so an unphysical point fails
    even when only correlators are requested.
    """
    c = point_correlators(params, mode, method)
    rho = assemble_rho(c, coherence)
    out = {}
    for name in observables:
        if name == "discord":
            out[name] = geometric_discord_xstate(rho)
        elif name == "concurrence":
            out[name] = concurrence(rho)
        else:
            out[name] = getattr(c, name)
    return out


def point_setup(spec: SweepSpec, coords: tuple[float, ...]) -> tuple[QuenchParams, TimeMode]:
    """Parameters and time mode of the grid point at ``coords``."""
    params = spec.base
    mode = spec.time_mode
    for axis, value in zip(spec.axes, coords):
        params, t = apply_axis(params, axis.name, value)
        if t is not None:
            mode = TimeMode("at", t=t)
    return params, mode


def _evaluate(spec: SweepSpec, coords: tuple[float, ...]) -> tuple[dict[str, float] | None, str]:
    try:
        params, mode = point_setup(spec, coords)
        vals = point_observables(params, mode, spec.observables, spec.method, spec.coherence)
    except ParameterError as exc:
        return None, f"invalid_parameters: {exc}"
    except StateError as exc:
        return None, f"nonphysical_state: {exc}"
    except ArithmeticError as exc:
        return None, f"degenerate_ensemble: {exc}"
    if not all(math.isfinite(v) for v in vals.values()):
        return None, "nonfinite_value"
    return vals, ""


def run_sweep(spec: SweepSpec, threads: int = 1) -> SweepResult:
    """Evaluate every grid point of ``spec`` with ``threads`` workers."""
    if threads < 1:
        raise SpecError(f"threads must be >= 1, got {threads}")
    start = time.perf_counter()
    grids = tuple(a.values() for a in spec.axes)
    shape = spec.shape
    total = int(np.prod(shape))
    values = {name: np.full(total, np.nan) for name in spec.observables}
    reasons = np.full(total, "", dtype=object)

    def work(flat: int) -> None:
        idx = np.unravel_index(flat, shape)
        coords = tuple(float(g[i]) for g, i in zip(grids, idx))
        vals, reason = _evaluate(spec, coords)
        if vals is None:
            reasons[flat] = reason
            return
        for name, v in vals.items():
            values[name][flat] = v

    if threads == 1:
        for flat in range(total):
            work(flat)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, range(total), chunksize=max(1, total // (4 * threads))))

    result = SweepResult(
        spec=spec,
        grids=grids,
        values={k: v.reshape(shape) for k, v in values.items()},
        reasons=reasons.reshape(shape),
        metadata={},
    )
    result.metadata = build_metadata(result, time.perf_counter() - start)
    return result


def build_metadata(result: SweepResult, wall_time: float | None = None) -> dict:
    spec = result.spec
    b = spec.base
    meta = {
        "n_sites": b.N,
        "gamma": b.gamma,
        "kT": b.kT,
        "time_mode": spec.effective_time_mode(),
        "axes": [
            {"name": a.name, "start": a.start, "stop": a.stop, "count": int(a.count)} for a in spec.axes
        ],
        "observables": list(spec.observables),
        "version": __version__,
        "kind": spec.kind,
        "base": {"J0": b.J0, "J1": b.J1, "h0": b.h0, "h1": b.h1},
        "method": spec.method,
        "coherence": spec.coherence,
        "shape": list(spec.shape),
        "failed_points": result.n_failed,
    }
    if wall_time is not None:
        meta["wall_time_s"] = round(wall_time, 3)
    return meta


def lambda_curve(
    gamma: float,
    kT: float,
    h: float,
    lambda_grid,
    N: int = 1000,
    method: str = "exact",
) -> np.ndarray:
    """Asymptotic discord along J0 = J1 = lambda*h, h0 = h1 = h."""
    if not h > 0.0:
        raise ParameterError(f"h must be > 0, got {h}")
    base = QuenchParams(h0=h, h1=h, gamma=gamma, kT=kT, N=N)
    mode = TimeMode()
    out = []
    for lam in np.asarray(lambda_grid, dtype=float):
        params, _ = apply_axis(base, "lambda", float(lam))
        out.append(point_observables(params, mode, ("discord",), method)["discord"])
    return np.array(out)
