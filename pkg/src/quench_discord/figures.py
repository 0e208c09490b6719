"""Preset sweeps behind each published plot, at adjustable resolution.

``figure_specs()`` maps a short label to a SweepSpec.  Labels follow the
pattern ``fig<number><panel>[-variant]``; the variants spell out the curve
family (for example ``-h4`` is the h = 4 curve of a lambda plot).
"""

from __future__ import annotations

from .model import QuenchParams
from .sweep import Axis, SweepSpec, TimeMode

ASYMPTOTIC = TimeMode()


def _series(base: QuenchParams, points: int) -> SweepSpec:
    return SweepSpec("time_series", base, Axis("t", 0.0, 20.0, points))


def _lam(base: QuenchParams, points: int, stop: float = 10.0) -> SweepSpec:
    return SweepSpec("lambda_sweep", base, Axis("lambda", 0.0, stop, points), time_mode=ASYMPTOTIC)


def _grid(base: QuenchParams, a: Axis, b: Axis, mode: TimeMode = ASYMPTOTIC) -> SweepSpec:
    return SweepSpec("grid2d", base, a, b, time_mode=mode)


def figure_specs(N: int = 1000, points: int = 201, grid: int = 101) -> dict[str, SweepSpec]:
    """All preset sweeps; ``points`` sets 1D resolution and ``grid`` each 2D axis."""
    specs: dict[str, SweepSpec] = {}
    p = QuenchParams(N=N)

    for J0, J1 in ((1.0, 2.0), (2.0, 1.0), (1.0, 0.5), (0.5, 1.0)):
        specs[f"fig1a-J{J0:g}-{J1:g}"] = _series(p.replace(J0=J0, J1=J1), points)
    for h0, h1 in ((1.0, 2.0), (2.0, 1.0), (1.0, 0.5), (0.5, 1.0)):
        specs[f"fig1b-h{h0:g}-{h1:g}"] = _series(p.replace(h0=h0, h1=h1), points)

    for J0 in (1.0, 5.0):
        specs[f"fig2-J0{J0:g}"] = _grid(
            p.replace(J0=J0), Axis("lambda1", 0.0, 4.0, grid), Axis("t", 0.0, 20.0, grid)
        )

    for number, gamma in ((3, 1.0), (4, 0.5), (5, 0.0)):
        q = p.replace(gamma=gamma)
        for h in (0.25, 1.0, 4.0):
            specs[f"fig{number}a-h{h:g}"] = _lam(q.replace(h0=h, h1=h), points)
            specs[f"fig{number}b-h{h:g}"] = _lam(q.replace(h0=h, h1=h, kT=1.0), points)
            specs[f"fig{number}d-h{h:g}"] = _lam(q.replace(h0=h, h1=h, kT=3.0), points)

    for number, gamma in ((6, 1.0), (7, 0.5), (8, 0.0)):
        q = p.replace(gamma=gamma)
        specs[f"fig{number}a"] = _grid(q, Axis("J0", 0.0, 5.0, grid), Axis("J1", 0.0, 5.0, grid))
        specs[f"fig{number}b"] = _grid(q, Axis("h0", 0.0, 5.0, grid), Axis("h1", 0.0, 5.0, grid))
        specs[f"fig{number}c"] = _grid(q, Axis("h0", 0.0, 5.0, grid), Axis("J0", 0.0, 5.0, grid))
        specs[f"fig{number}d"] = _grid(q, Axis("h1", 0.0, 5.0, grid), Axis("J1", 0.0, 5.0, grid))

    specs["fig9a"] = _grid(p, Axis("lambda", 0.0, 4.0, grid), Axis("kT", 0.0, 3.0, grid))
    specs["fig9b"] = _grid(p, Axis("lambda1", 0.0, 4.0, grid), Axis("kT", 0.0, 3.0, grid))
    specs["fig9c"] = _grid(p, Axis("lambda0", 0.0, 4.0, grid), Axis("kT", 0.0, 3.0, grid))

    for panel, J0 in (("a", 0.5), ("b", 1.0), ("c", 5.0)):
        specs[f"fig10{panel}"] = _grid(
            p.replace(J0=J0), Axis("lambda1", 0.0, 4.0, grid), Axis("gamma", 0.0, 1.0, grid)
        )
    specs["fig10d"] = _grid(p, Axis("lambda", 0.0, 4.0, grid), Axis("gamma", 0.0, 1.0, grid))
    return specs


def spec_to_config(spec: SweepSpec) -> str:
    """Render a spec as a configuration document that parses back to it."""
    b = spec.base
    lines = [
        f"kind: {spec.kind}",
        f"N: {b.N}",
        f"gamma: {b.gamma!r}",
        f"kT: {b.kT!r}",
        f"J0: {b.J0!r}",
        f"J1: {b.J1!r}",
        f"h0: {b.h0!r}",
        f"h1: {b.h1!r}",
    ]
    for key, axis in zip(("axis1", "axis2"), spec.axes):
        lines.append(f"{key}: [{axis.name}, {axis.start!r}, {axis.stop!r}, {axis.count}]")
    lines.append(f"time_mode: {spec.time_mode}")
    lines.append(f"observables: [{', '.join(spec.observables)}]")
    lines.append(f"method: {spec.method}")
    lines.append(f"coherence: {spec.coherence}")
    return "\n".join(lines) + "\n"
