"""One test per acceptance criterion; each prints a PASS/FAIL line."""

from __future__ import annotations

import subprocess
import sys
import time

import numpy as np
import pytest

from quench_discord.figures import figure_specs, spec_to_config
from quench_discord.model import QuenchParams
from quench_discord.oracle import EDConfig, brute_force_discord, ed_discord
from quench_discord.qstate import (
    TwoQubitXState,
    assemble_rho,
    bloch_decompose,
    bloch_from_matrix,
    geometric_discord_general,
    geometric_discord_xstate,
)
from quench_discord.sweep import (
    Axis,
    SweepSpec,
    TimeMode,
    lambda_curve,
    point_correlators,
    point_observables,
    point_setup,
    run_sweep,
)
from quench_discord.validation import oracle_table, random_qubit, random_xstate, trend_ok

ASYMPTOTIC = TimeMode()
COUPLINGS = (0.25, 0.5, 1.0, 2.0, 4.0)
FIG1_QUENCHES = (
    {"J0": 1.0, "J1": 2.0}, {"J0": 2.0, "J1": 1.0}, {"J0": 1.0, "J1": 0.5}, {"J0": 0.5, "J1": 1.0},
    {"h0": 1.0, "h1": 2.0}, {"h0": 2.0, "h1": 1.0}, {"h0": 1.0, "h1": 0.5}, {"h0": 0.5, "h1": 1.0},
)


def discord(params: QuenchParams, mode: TimeMode = ASYMPTOTIC) -> float:
    return point_observables(params, mode)["discord"]


def test_c01_equilibrium_matches_exact_diagonalisation(record):
    start = time.perf_counter()
    worst = 0.0
    for gamma in (0.0, 0.5, 1.0):
        for kT in (0.0, 1.0):
            for J in COUPLINGS:
                for h in COUPLINGS:
                    p = QuenchParams(J0=J, J1=J, h0=h, h1=h, gamma=gamma, kT=kT, N=8)
                    worst = max(worst, abs(discord(p) - ed_discord(EDConfig(p, 0.0))))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-6 and elapsed < 120.0
    assert record(1, ok, f"max |D - D_ED| = {worst:.2e} over 150 points, {elapsed:.1f} s")


def test_c02_quench_discrepancy_does_not_grow_with_n(record):
    base = QuenchParams(J0=1.0, J1=2.0, h0=1.0, h1=1.0, gamma=1.0, kT=0.0, N=6)
    rows = oracle_table(base, times=(0.5, 1.0, 2.0), sizes=(6, 8, 10), methods=("exact", "paper"))
    ok = trend_ok(rows, "exact")
    exact = max(abs(r.ed - r.analytic["exact"]) for r in rows)
    paper = ", ".join(f"N={r.N} t={r.t:g}: {abs(r.ed - r.analytic['paper']):.1e}" for r in rows)
    assert record(2, ok, f"exact max |dD| = {exact:.1e}; continuum-grid sums |dD|: {paper}")


def test_c03_long_time_state_is_not_thermal(record):
    gaps = []
    for q in FIG1_QUENCHES:
        p = QuenchParams(**q)
        d = discord(p)
        before = discord(p.replace(J1=p.J0, h1=p.h0))
        after = discord(p.replace(J0=p.J1, h0=p.h1))
        gaps.append(min(abs(d - before), abs(d - after)))
    ok = min(gaps) > 1e-3
    assert record(3, ok, f"smallest gap to an equilibrium endpoint = {min(gaps):.3e} over 8 quenches")


def test_c04_zero_temperature_lambda_collapse(record):
    lam = np.linspace(0.0, 10.0, 101)
    worst = 0.0
    for gamma in (0.0, 0.5, 1.0):
        curves = [lambda_curve(gamma, 0.0, h, lam) for h in (0.25, 1.0, 4.0)]
        worst = max(worst, *(np.max(np.abs(c - curves[1])) for c in curves))
    assert record(4, worst < 1e-8, f"max spread between h curves = {worst:.1e}")


def test_c05_temperature_breaks_collapse_and_damps(record):
    lam = np.linspace(0.0, 10.0, 101)
    spread = np.max(np.abs(lambda_curve(1.0, 1.0, 0.25, lam) - lambda_curve(1.0, 1.0, 4.0, lam)))
    peaks = [float(np.max(lambda_curve(1.0, kT, 1.0, lam))) for kT in (0.0, 1.0, 3.0)]
    ok = spread > 1e-3 and peaks[0] > peaks[1] > peaks[2]
    detail = f"kT=1 spread = {spread:.3e}; peaks kT=0,1,3: {peaks[0]:.4f} > {peaks[1]:.4f} > {peaks[2]:.4f}"
    assert record(5, ok, detail)


def test_c06_isotropic_chain_is_frozen(record):
    worst_t = 0.0
    for q in ({"J0": 1.0, "J1": 2.0}, {"h0": 0.5, "h1": 3.0}, {"J0": 3.0, "J1": 0.4, "h0": 2.0, "h1": 0.7}):
        for kT in (0.0, 1.0):
            spec = SweepSpec("time_series", QuenchParams(gamma=0.0, kT=kT, **q), Axis("t", 0.0, 50.0, 101))
            worst_t = max(worst_t, float(np.ptp(run_sweep(spec).values["discord"])))
    worst_c = 0.0
    for J0, h0 in ((0.5, 1.0), (2.0, 1.0)):
        for kT in (0.0, 1.0):
            base = QuenchParams(J0=J0, h0=h0, gamma=0.0, kT=kT)
            spec = SweepSpec("grid2d", base, Axis("J1", 0.0, 5.0, 11), Axis("h1", 0.0, 5.0, 11))
            worst_c = max(worst_c, float(np.ptp(run_sweep(spec).values["discord"])))
    ok = worst_t < 1e-10 and worst_c < 1e-10
    assert record(6, ok, f"time-series spread {worst_t:.1e}, (J1, h1) contour spread {worst_c:.1e}")


def test_c07_isotropic_lambda_curve_saturates(record):
    lam = np.linspace(8.0, 20.0, 121)
    d = lambda_curve(0.0, 0.0, 1.0, lam)
    variation = float(np.ptp(d) / abs(d[-1]))
    assert record(7, variation < 0.01, f"(max - min) / D(20) = {variation:.2%} on lambda in [8, 20]")


def test_c08_discord_measure(record):
    rng = np.random.default_rng(2024)
    brute = 0.0
    for _ in range(100):
        s = random_xstate(rng)
        brute = max(brute, abs(geometric_discord_general(bloch_decompose(s)) - brute_force_discord(s.matrix())))
    fast = 0.0
    for _ in range(1000):
        s = random_xstate(rng)
        fast = max(fast, abs(geometric_discord_xstate(s) - geometric_discord_general(bloch_decompose(s))))
    bell = TwoQubitXState(0.5, 0.0, 0.0, 0.5, 0j, 0.5 + 0j)
    bell_d = (geometric_discord_xstate(bell), geometric_discord_general(bloch_decompose(bell)))
    product = max(
        geometric_discord_general(bloch_from_matrix(np.kron(random_qubit(rng), random_qubit(rng))))
        for _ in range(100)
    )
    product_x = geometric_discord_xstate(TwoQubitXState(0.42, 0.18, 0.28, 0.12))
    ok = brute < 1e-6 and fast < 1e-12 and bell_d == (0.5, 0.5) and product < 1e-12 and product_x == 0.0
    detail = f"brute force {brute:.1e}, fast vs general {fast:.1e}, Bell {bell_d[0]!r}, products {product:.1e}"
    assert record(8, ok, detail)


def test_c09_every_figure_state_is_physical(record):
    count, worst_trace, worst_margin, bad_range, failures = 0, 0.0, np.inf, 0, 0
    for spec in figure_specs(points=41, grid=21).values():
        for idx in np.ndindex(*spec.shape):
            coords = tuple(float(a.values()[i]) for a, i in zip(spec.axes, idx))
            params, mode = point_setup(spec, coords)
            try:
                rho = assemble_rho(point_correlators(params, mode, spec.method), spec.coherence)
            except (ValueError, ArithmeticError):
                failures += 1
                continue
            count += 1
            worst_trace = max(worst_trace, abs(rho.trace() - 1.0))
            worst_margin = min(worst_margin, min(rho.positivity_margins().values()))
            d = geometric_discord_xstate(rho)
            bad_range += not (0.0 <= d <= 0.5)
    ok = failures == 0 and worst_trace <= 1e-10 and worst_margin >= -1e-9 and bad_range == 0
    detail = (
        f"{count} states, {failures} rejected; max |tr - 1| = {worst_trace:.1e}, "
        f"min block margin = {worst_margin:.1e}, D out of range: {bad_range}"
    )
    assert record(9, ok, detail)


def test_c10_size_independence(record):
    lam = np.linspace(0.0, 10.0, 101)
    worst = 0.0
    for gamma in (0.0, 0.5, 1.0):
        for kT in (0.0, 1.0):
            diff = lambda_curve(gamma, kT, 1.0, lam, N=500) - lambda_curve(gamma, kT, 1.0, lam, N=1000)
            worst = max(worst, float(np.max(np.abs(diff))))
    assert record(10, worst < 1e-3, f"max |D(N=500) - D(N=1000)| = {worst:.2e}")


def test_c11_threads_give_identical_bytes(record, tmp_path):
    spec = figure_specs(N=400, grid=15)["fig7a"]
    cfg = tmp_path / "grid.cfg"
    cfg.write_text(spec_to_config(spec).replace("observables: [discord]", "observables: [discord, concurrence, zz]"))
    outputs = []
    for run, threads in enumerate((1, 8, 1, 8)):
        prefix = tmp_path / f"run{run}"
        cmd = [sys.executable, "-m", "quench_discord.cli", "sweep", "--config", str(cfg),
               "--out", str(prefix), "--threads", str(threads)]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        outputs.append(prefix.with_name(prefix.name + ".csv").read_bytes())
    ok = all(o == outputs[0] for o in outputs)
    assert record(11, ok, f"4 runs (threads 1, 8, 1, 8), {len(outputs[0])} bytes each, identical: {ok}")


def test_c12_two_peaks_second_higher(record):
    base = QuenchParams(J0=5.0, h0=1.0, h1=1.0, gamma=1.0, kT=0.0)
    spec = SweepSpec("lambda_sweep", base, Axis("lambda1", 0.0, 4.0, 401))
    d = run_sweep(spec).values["discord"]
    lam = spec.axis1.values()
    peaks = [i for i in range(1, len(d) - 1) if d[i] > d[i - 1] and d[i] >= d[i + 1]]
    ok = len(peaks) >= 2 and d[peaks[1]] > d[peaks[0]]
    shown = ", ".join(f"lambda1={lam[i]:.2f}: {d[i]:.4f}" for i in peaks)
    assert record(12, ok, f"{len(peaks)} local maxima ({shown})")
