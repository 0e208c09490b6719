"""Runtime self-checks: the invariant suite and the exact-diagonalisation comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .correlators import asymptotic_correlators, nn_correlators, window_correlators
from .model import QuenchParams, build_mode_grid
from .oracle import EDConfig, ed_discord
from .qstate import (
    StateError,
    TwoQubitXState,
    bloch_decompose,
    bloch_from_matrix,
    concurrence,
    geometric_discord_general,
    geometric_discord_xstate,
)
from .sweep import TimeMode, point_observables


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def random_xstate(rng: np.random.Generator) -> TwoQubitXState:
    """Uniformly weighted populations with coherences inside the positivity blocks."""
    p = rng.dirichlet(np.ones(4))
    r23 = math.sqrt(p[1] * p[2]) * rng.random() * np.exp(1j * rng.uniform(0, 2 * np.pi))
    r14 = math.sqrt(p[0] * p[3]) * rng.random() * np.exp(1j * rng.uniform(0, 2 * np.pi))
    return TwoQubitXState(*p, complex(r23), complex(r14))


def random_qubit(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    v *= rng.random() ** (1 / 3) / np.linalg.norm(v)
    sx = np.array([[0, 1], [1, 0]])
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1.0, -1.0])
    return 0.5 * (np.eye(2) + v[0] * sx + v[1] * sy + v[2] * sz)


def _max_dev(a, b) -> float:
    da, db = a.as_dict(), b.as_dict()
    return max(abs(da[k] - db[k]) for k in da)


def run_invariants(seed: int = 0, N: int = 200) -> list[Check]:
    rng = np.random.default_rng(seed)
    out = []

    p = QuenchParams(J0=0.7, J1=1.4, h0=0.5, h1=1.0, gamma=0.6, N=N, kT=0.3)
    grid = build_mode_grid(p)
    ref = nn_correlators(grid, p, 0.0)
    dev = max(_max_dev(ref, nn_correlators(grid, p, t)) for t in (0.3, 7.1, 55.0))
    dev = max(dev, _max_dev(ref, asymptotic_correlators(grid, p)))
    out.append(Check("no-quench time independence", dev == 0.0, f"max deviation {dev:.1e}"))

    p = QuenchParams(J0=1.0, J1=2.0, h0=1.0, h1=0.5, gamma=0.8, N=N)
    dev = 0.0
    for c in (0.25, 4.0):
        q = p.replace(J0=c * p.J0, J1=c * p.J1, h0=c * p.h0, h1=c * p.h1)
        for t in (0.0, 1.3, 9.0):
            dev = max(dev, _max_dev(nn_correlators(None, p, t), nn_correlators(None, q, t / c)))
    out.append(Check("zero-temperature scale covariance", dev < 1e-12, f"max deviation {dev:.1e}"))

    dev = 0.0
    for J0, h0, J1, h1 in ((1.0, 0.5, 3.0, 2.0), (2.0, 1.0, 0.3, 1.7)):
        p = QuenchParams(J0=J0, J1=J1, h0=h0, h1=h1, gamma=0.0, N=N, kT=0.5)
        ref = nn_correlators(None, p, 0.0)
        dev = max(dev, *(_max_dev(ref, nn_correlators(None, p, t)) for t in (0.7, 12.0, 49.0)))
    out.append(Check("isotropic stasis", dev < 1e-14, f"max deviation {dev:.1e}"))

    p = QuenchParams(J0=1.0, J1=2.0, h0=1.0, h1=1.0, gamma=1.0, N=1000)
    grid = build_mode_grid(p)
    dev = _max_dev(asymptotic_correlators(grid, p), window_correlators(grid, p, 500.0, 100.0, 2001))
    out.append(Check("window average -> asymptotic (T=500, D=100)", dev < 1e-3, f"max deviation {dev:.1e}"))

    worst = 0.0
    for _ in range(1000):
        s = random_xstate(rng)
        worst = max(worst, abs(geometric_discord_xstate(s) - geometric_discord_general(bloch_decompose(s))))
    out.append(Check("X-state discord == general discord", bool(worst < 1e-12), f"max deviation {worst:.1e}"))

    worst = 0.0
    for _ in range(200):
        rho = np.kron(random_qubit(rng), random_qubit(rng))
        worst = max(worst, geometric_discord_general(bloch_from_matrix(rho)))
    out.append(Check("product states have zero discord", worst < 1e-12, f"max discord {worst:.1e}"))

    bell = TwoQubitXState(0.5, 0.0, 0.0, 0.5, 0j, 0.5 + 0j)
    ok = geometric_discord_xstate(bell) == 0.5 and abs(concurrence(bell) - 1.0) < 1e-15
    out.append(Check("Bell state: D = 1/2, C = 1", ok, ""))

    bad = 0
    for _ in range(300):
        p = QuenchParams(
            J0=rng.uniform(0, 4), J1=rng.uniform(0, 4), h0=rng.uniform(0, 4), h1=rng.uniform(0, 4),
            gamma=rng.uniform(0, 1), kT=float(rng.choice([0.0, rng.uniform(0, 3)])), N=N,
        )
        mode = TimeMode("at", t=rng.uniform(0, 20)) if rng.random() < 0.5 else TimeMode()
        try:
            v = point_observables(p, mode, ("discord", "concurrence"))
        except StateError:
            bad += 1
            continue
        if not (0.0 <= v["discord"] <= 0.5 and 0.0 <= v["concurrence"] <= 1.0):
            bad += 1
    out.append(Check("D in [0, 1/2], C in [0, 1] on random parameters", bad == 0, f"{bad} of 300 out of range"))
    return out


@dataclass(frozen=True)
class OracleRow:
    N: int
    t: float
    ed: float
    analytic: dict[str, float]


def oracle_table(
    base: QuenchParams,
    times=(0.5, 1.0, 2.0),
    sizes=(4, 6, 8, 10),
    methods=("exact", "antiperiodic", "paper"),
) -> list[OracleRow]:
    """Discord from exact diagonalisation next to the analytic methods, per N and t."""
    rows = []
    for N in sizes:
        p = base.replace(N=N)
        for t in times:
            ed = ed_discord(EDConfig(p, float(t)))
            vals = {}
            for m in methods:
                try:
                    vals[m] = point_observables(p, TimeMode("at", t=float(t)), ("discord",), m)["discord"]
                except (StateError, ArithmeticError):
                    vals[m] = math.nan
            rows.append(OracleRow(N, float(t), ed, vals))
    return rows


def trend_ok(rows: list[OracleRow], method: str = "exact", from_size: int = 6, floor: float = 1e-12) -> bool:
    """|D_ED - D_analytic| non-increasing in N from ``from_size`` on, for every t.

    Differences below ``floor`` count as equal: they are rounding noise.
    """
    for t in sorted({r.t for r in rows}):
        diffs = [abs(r.ed - r.analytic[method]) for r in sorted(rows, key=lambda r: r.N) if r.t == t and r.N >= from_size]
        if any(math.isnan(d) for d in diffs):
            return False
        if any(b > max(a, floor) for a, b in zip(diffs, diffs[1:])):
            return False
    return True


def format_oracle_table(rows: list[OracleRow]) -> str:
    methods = list(rows[0].analytic) if rows else []
    head = f"{'N':>3} {'t':>6} {'D_ED':>14}" + "".join(f" {'|dD| ' + m:>20}" for m in methods)
    lines = [head]
    for r in rows:
        cells = "".join(f" {abs(r.ed - r.analytic[m]):>20.3e}" for m in methods)
        lines.append(f"{r.N:>3} {r.t:>6.3g} {r.ed:>14.10f}" + cells)
    return "\n".join(lines)
