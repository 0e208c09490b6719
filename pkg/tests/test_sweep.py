from __future__ import annotations

import numpy as np
import pytest

from quench_discord.model import ParameterError, QuenchParams
from quench_discord.sweep import (
    Axis,
    SpecError,
    SweepSpec,
    TimeMode,
    apply_axis,
    lambda_curve,
    point_observables,
    run_sweep,
)


def test_time_mode_parse_round_trip():
    for text in ("asymptotic", "at:2.5", "window:10.0,5.0,11"):
        assert str(TimeMode.parse(text)) == text
    for bad in ("at:", "at:-1", "window:1,0,5", "window:1,2", "later"):
        with pytest.raises(SpecError):
            TimeMode.parse(bad)


def test_axis_validation():
    with pytest.raises(SpecError):
        Axis("mu", 0, 1, 3)
    with pytest.raises(SpecError):
        Axis("J0", 1, 0, 3)
    with pytest.raises(SpecError):
        Axis("J0", 0, 1, 1)
    assert Axis("J0", 0, 1, 3).values().tolist() == [0.0, 0.5, 1.0]


def test_spec_validation():
    p = QuenchParams()
    with pytest.raises(SpecError):
        SweepSpec("time_series", p, Axis("J0", 0, 1, 3))
    with pytest.raises(SpecError):
        SweepSpec("grid2d", p, Axis("J0", 0, 1, 3))
    with pytest.raises(SpecError):
        SweepSpec("lambda_sweep", p, Axis("lambda", 0, 1, 3), Axis("kT", 0, 1, 3))
    with pytest.raises(SpecError):
        SweepSpec("lambda_sweep", p, Axis("lambda", 0, 1, 3), observables=("entropy",))
    with pytest.raises(SpecError):
        SweepSpec("lambda_sweep", p, Axis("lambda", 0, 1, 3), method="dmrg")


def test_apply_axis_lambda_variants():
    p = QuenchParams(J0=1, J1=1, h0=2, h1=3)
    q, t = apply_axis(p, "lambda", 1.5)
    assert (q.J0, q.J1, q.h0, q.h1, t) == (3.0, 3.0, 2.0, 2.0, None)
    q, _ = apply_axis(p, "lambda1", 2.0)
    assert (q.J0, q.J1) == (1.0, 6.0)
    q, _ = apply_axis(p, "lambda0", 2.0)
    assert (q.J0, q.J1) == (4.0, 1.0)
    assert apply_axis(p, "t", 4.0) == (p, 4.0)


def test_no_quench_time_series_is_flat():
    spec = SweepSpec("time_series", QuenchParams(J0=1.3, J1=1.3, h0=0.7, h1=0.7, N=200), Axis("t", 0, 30, 31))
    d = run_sweep(spec).values["discord"]
    assert np.ptp(d) == 0.0


def test_lambda_curve_collapse_at_zero_temperature():
    lam = np.linspace(0, 5, 26)
    a = lambda_curve(1.0, 0.0, 1.0, lam, N=200)
    b = lambda_curve(1.0, 0.0, 4.0, lam, N=200)
    assert np.max(np.abs(a - b)) < 1e-8


def test_lambda_curve_shape():
    lam = np.linspace(0, 6, 61)
    d = lambda_curve(1.0, 0.0, 1.0, lam, N=400)
    assert d[0] == pytest.approx(0.0, abs=1e-15)
    peak = int(np.argmax(d))
    assert 0 < peak < len(d) - 1
    assert np.all(np.diff(d[: peak + 1]) >= -1e-12)


def test_invalid_points_are_marked_not_raised():
    spec = SweepSpec("lambda_sweep", QuenchParams(N=100), Axis("kT", -1.0, 1.0, 5))
    r = run_sweep(spec)
    assert r.n_failed == 2
    assert all(s.startswith("invalid_parameters") for s in r.reasons[:2])
    assert np.isnan(r.values["discord"][:2]).all()
    assert np.isfinite(r.values["discord"][2:]).all()
    assert r.failure_fraction == pytest.approx(0.4)


def test_threads_do_not_change_values():
    spec = SweepSpec(
        "grid2d", QuenchParams(N=200, gamma=0.5), Axis("J0", 0.2, 3, 9), Axis("J1", 0.2, 3, 9),
        observables=("discord", "concurrence", "zz"),
    )
    a, b = run_sweep(spec, threads=1), run_sweep(spec, threads=6)
    for name in spec.observables:
        assert np.array_equal(a.values[name], b.values[name])


def test_metadata_keys():
    spec = SweepSpec("time_series", QuenchParams(N=100), Axis("t", 0, 1, 3))
    meta = run_sweep(spec).metadata
    assert {"n_sites", "gamma", "kT", "time_mode", "axes", "observables", "version"} <= set(meta)
    assert meta["time_mode"] == "at:axis(t)"


def test_point_observables_methods_agree_at_large_n():
    p = QuenchParams(J0=1, J1=2, N=1000, kT=1.0)
    vals = [point_observables(p, TimeMode(), ("discord",), m)["discord"] for m in ("exact", "antiperiodic")]
    assert vals[0] == pytest.approx(vals[1], abs=1e-6)


def test_lambda_curve_rejects_zero_field():
    with pytest.raises(ParameterError):
        lambda_curve(1.0, 0.0, 0.0, [1.0])
