from __future__ import annotations

import numpy as np
import pytest

from quench_discord.correlators import nn_correlators
from quench_discord.finite_size import (
    exact_asymptotic_correlators,
    exact_correlators,
    exact_window_correlators,
)
from quench_discord.model import QuenchParams
from quench_discord.oracle import EDConfig, ed_correlators


def _close(a, b, tol=1e-12):
    da, db = a.as_dict(), b.as_dict()
    return max(abs(da[k] - db[k]) for k in da) < tol


CASES = [
    QuenchParams(J0=1.0, J1=2.0, h0=1.0, h1=1.0, gamma=1.0, N=6),
    QuenchParams(J0=2.0, J1=0.5, h0=1.0, h1=1.5, gamma=0.5, N=8, kT=0.7),
    QuenchParams(J0=2.0, J1=2.0, h0=1.0, h1=1.0, gamma=0.0, N=6),
    QuenchParams(J0=1.0, J1=1.0, h0=1.0, h1=1.0, gamma=1.0, N=8),
    # gapless initial modes at finite temperature
    QuenchParams(J0=1.0, J1=2.0, h0=0.0, h1=1.0, gamma=0.0, N=6, kT=1.0),
    QuenchParams(J0=1.0, J1=2.0, h0=0.5, h1=1.0, gamma=0.0, N=6, kT=1.0),
    QuenchParams(J0=1.0, J1=2.0, h0=1.0, h1=0.5, gamma=0.3, N=6, kT=0.5),
]


@pytest.mark.parametrize("p", CASES)
def test_matches_exact_diagonalisation(p):
    for t in (0.0, 0.8):
        assert _close(exact_correlators(p, t), ed_correlators(EDConfig(p, t)))


def test_zero_temperature_ferromagnet_matches_ed():
    # ground space spans both fermion parities
    p = QuenchParams(J0=4.0, J1=1.0, h0=0.25, h1=1.0, gamma=1.0, N=8)
    assert _close(exact_correlators(p, 1.1), ed_correlators(EDConfig(p, 1.1)))


def test_agrees_with_even_sector_when_it_holds_the_ground_state():
    p = QuenchParams(J0=1.0, J1=2.0, h0=1.5, h1=1.0, gamma=0.8, N=200)
    assert _close(exact_correlators(p, 2.0), nn_correlators(None, p, 2.0), 1e-10)


def test_large_chain_at_high_temperature_is_finite():
    p = QuenchParams(J0=1.0, J1=2.0, h0=1.0, h1=1.0, gamma=1.0, N=1000, kT=50.0)
    c = exact_asymptotic_correlators(p)
    assert all(np.isfinite(list(c.as_dict().values())))


def test_window_of_stationary_state():
    p = QuenchParams(J0=1.0, J1=1.0, h0=0.5, h1=0.5, gamma=0.5, N=10, kT=0.2)
    assert _close(exact_window_correlators(p, 0.0, 10.0, 5), exact_correlators(p, 0.0), 1e-14)


def test_rejects_negative_time():
    with pytest.raises(ValueError):
        exact_correlators(QuenchParams(N=8), -1.0)
