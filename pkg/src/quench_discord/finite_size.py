"""Exact correlators of a finite periodic chain.

The spin chain with periodic boundaries maps onto fermions whose boundary
condition depends on the fermion parity.  The even sector uses the
antiperiodic momenta (2p - 1) pi / N, the odd sector the periodic momenta
2 pi p / N including the unpaired k = 0 and k = pi.  Projecting each sector's
Gibbs operator onto its parity gives four kinds of terms:

    even sector:  (1/2) [rho_A + (-1)^F rho_A]
    odd sector:   (1/2) [rho_P - (-1)^F rho_P]

(-1)^F rho is again Gaussian: each pair keeps its pseudo-spin direction but
its thermal factor tanh(beta Gamma0) becomes coth(beta Gamma0), and its
weight is multiplied by tanh(beta Gamma0)^2.  Writing every term in ratio
form keeps the arithmetic finite when Gamma0 = 0 or the products underflow.

All of this reproduces exact diagonalisation to rounding error at any N, kT
and time, which the grid-based formulas in ``correlators`` do only in the
even-sector ground state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .correlators import (
    F0,
    FM,
    FP,
    MZ,
    N_CHANNELS,
    XI,
    PairCorrelators,
    asymptotic_factors,
    average_correlators,
    mode_channels,
    time_factors,
    window_times,
)
from .model import ModeGrid, ParameterError, QuenchParams, build_mode_grid, exact_trig

# energies closer than this are treated as degenerate at kT = 0
DEGENERACY_TOL = 1e-10

# quadratic moments: F0*F0, X*X, F1*F-1
_QUAD = ((F0, F0), (XI, XI), (FP, FM))


@dataclass(frozen=True)
class _Term:
    coef: float
    lead: float  # beta-linear part of the log-weight (kT = 0) or full log-weight
    offset: float  # beta-independent part at kT = 0
    norm: float
    linear: np.ndarray
    quad: np.ndarray
    q1: float
    sector: str
    broken_pair: float = math.inf  # energy cost of the lightest pair excitation


@dataclass(frozen=True)
class _Sector:
    name: str
    grid: ModeGrid
    channels: np.ndarray
    q1: float
    x0: np.ndarray


def _unpaired_constants(params: QuenchParams, n0: int, npi: int) -> tuple[np.ndarray, float]:
    """Channel constants and log-weight shift/beta of the k = 0, pi modes."""
    c, _ = exact_trig(np.array([0, 1]), 1)
    n = np.array([n0, npi], dtype=float)
    s = 2.0 * n - 1.0
    N = params.N
    const = np.zeros(N_CHANNELS)
    const[MZ] = math.fsum(0.5 * s / N)
    const[F0] = math.fsum(s / N)
    const[FP] = math.fsum(s * c / N)
    const[FM] = const[FP]
    x = params.J0 * c + params.h0
    return const, 2.0 * math.fsum(x * n)


def _build_sector(params: QuenchParams, boundary: str, factors) -> _Sector:
    grid = build_mode_grid(params, boundary)
    s2, s4 = factors(grid.gamma1)
    channels = mode_channels(grid, params, s2, s4)
    q1 = math.fsum(2.0 * grid.cos) / params.N
    return _Sector(boundary, grid, channels, q1, params.J0 * grid.cos + params.h0)


def _quad_from_linear(lin: np.ndarray) -> np.ndarray:
    return np.array([lin[a] * lin[b] for a, b in _QUAD])


def _fsum_dot(matrix: np.ndarray, vec: np.ndarray) -> np.ndarray:
    return np.array([math.fsum(row) for row in matrix * vec])


def _plain(channels: np.ndarray, const: np.ndarray, t: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    lin = const + _fsum_dot(channels, t)
    return 1.0, lin, _quad_from_linear(lin)


def _twisted(channels: np.ndarray, const: np.ndarray, t: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Norm, linear and quadratic numerators of the parity-twisted term.

    The norm is prod tanh^2; the numerators are that norm times the
    expectation values with coth thermal factors.
    """
    zero = t == 0.0
    nz = int(np.count_nonzero(zero))
    if nz >= 2:
        return 0.0, np.zeros(N_CHANNELS), np.zeros(len(_QUAD))
    logs = np.log(np.where(zero, 1.0, t))
    if nz == 1:
        m = int(np.flatnonzero(zero)[0])
        scale = math.exp(2.0 * math.fsum(logs))
        v = channels[:, m]
        return 0.0, np.zeros(N_CHANNELS), np.array([v[a] * v[b] * scale for a, b in _QUAD])
    half = math.fsum(logs)
    u = np.exp(half - logs)
    lhat = const * math.exp(half) + _fsum_dot(channels, u)
    root = math.exp(half)
    return root * root, root * lhat, _quad_from_linear(lhat)


def _sector_log_weight(sector: _Sector, beta: float) -> float:
    g = sector.grid.gamma0
    return math.fsum(2.0 * beta * sector.x0 + 2.0 * np.logaddexp(beta * g, -beta * g))


def _terms_finite(params: QuenchParams, sa: _Sector, sp: _Sector) -> list[_Term]:
    beta = 1.0 / params.kT
    terms = []
    ta = np.tanh(beta * sa.grid.gamma0)
    lw = _sector_log_weight(sa, beta)
    zero = np.zeros(N_CHANNELS)
    for coef, fn in ((0.5, _plain), (0.5, _twisted)):
        norm, lin, quad = fn(sa.channels, zero, ta)
        terms.append(_Term(coef, lw, 0.0, norm, lin, quad, sa.q1, "A"))
    tp = np.tanh(beta * sp.grid.gamma0)
    lwp = _sector_log_weight(sp, beta)
    for n0 in (0, 1):
        for npi in (0, 1):
            const, shift = _unpaired_constants(params, n0, npi)
            sign = -1.0 if (n0 + npi) % 2 == 0 else 1.0
            for coef, fn in ((0.5, _plain), (0.5 * sign, _twisted)):
                norm, lin, quad = fn(sp.channels, const, tp)
                terms.append(_Term(coef, lwp + beta * shift, 0.0, norm, lin, quad, sp.q1, "P"))
    return terms


def _terms_ground(params: QuenchParams, sa: _Sector, sp: _Sector) -> list[_Term]:
    """Leading kT -> 0 behaviour of every term: weight exp(lead/kT + offset)."""
    terms = []
    zero = np.zeros(N_CHANNELS)
    for sector, label in ((sa, "A"), (sp, "P")):
        g = sector.grid.gamma0
        t = np.where(g > 0.0, 1.0, 0.0)
        lead = math.fsum(2.0 * sector.x0 + 2.0 * g)
        offset = 2.0 * math.log(2.0) * int(np.count_nonzero(g == 0.0))
        gapped = g[g > 0.0]
        cost = 2.0 * float(gapped.min()) if gapped.size else math.inf
        if label == "A":
            for coef, fn in ((0.5, _plain), (0.5, _twisted)):
                norm, lin, quad = fn(sector.channels, zero, t)
                terms.append(_Term(coef, lead, offset, norm, lin, quad, sector.q1, label, cost))
            continue
        for n0 in (0, 1):
            for npi in (0, 1):
                const, shift = _unpaired_constants(params, n0, npi)
                sign = -1.0 if (n0 + npi) % 2 == 0 else 1.0
                for coef, fn in ((0.5, _plain), (0.5 * sign, _twisted)):
                    norm, lin, quad = fn(sector.channels, const, t)
                    terms.append(
                        _Term(coef, lead + shift, offset, norm, lin, quad, sector.q1, f"P{n0}{npi}", cost)
                    )
    return terms


def _combine(terms: list[_Term], weights: np.ndarray) -> PairCorrelators:
    den = math.fsum(w * t.coef * t.norm for w, t in zip(weights, terms))
    if not den > 0.0:
        raise ArithmeticError("projected ensemble has a vanishing partition function")
    lin = np.array([math.fsum(w * t.coef * t.linear[c] for w, t in zip(weights, terms)) for c in range(N_CHANNELS)])
    quad = np.array(
        [math.fsum(w * t.coef * t.quad[j] for w, t in zip(weights, terms)) for j in range(len(_QUAD))]
    )
    qq = math.fsum(w * t.coef * t.norm * t.q1 * t.q1 for w, t in zip(weights, terms))
    lin /= den
    quad /= den
    qq /= den
    f0f0, xx_, fpfm = quad
    return PairCorrelators(
        mz=float(lin[MZ]),
        xx=float(lin[FP] / 4.0),
        yy=float(lin[FM] / 4.0),
        zz=float(0.25 * (f0f0 + qq + xx_ - fpfm)),
        xy=float(lin[XI] / 2.0),
    )


def _select_ground(terms: list[_Term]) -> np.ndarray:
    top = max(t.lead for t in terms)
    tol = DEGENERACY_TOL * max(1.0, abs(top))
    groups: dict[str, float] = {}
    for t in terms:
        if t.lead >= top - tol:
            groups[t.sector] = groups.get(t.sector, 0.0) + t.coef * t.norm
    live = [t for t in terms if t.lead >= top - tol and groups[t.sector] != 0.0]
    if not live:
        raise ArithmeticError("every lowest-energy sector cancels under parity projection")
    for t in terms:
        if t.lead >= top - tol and groups[t.sector] == 0.0 and t.lead - t.broken_pair >= top - tol:
            raise ArithmeticError("ground state lies in a broken-pair state; kT = 0 is ill-defined here")
    return np.array(
        [math.exp(t.offset) if (t.lead >= top - tol and groups[t.sector] != 0.0) else 0.0 for t in terms]
    )


def _evaluate(params: QuenchParams, factors) -> PairCorrelators:
    sa = _build_sector(params, "antiperiodic", factors)
    sp = _build_sector(params, "periodic", factors)
    if params.kT == 0.0:
        terms = _terms_ground(params, sa, sp)
        return _combine(terms, _select_ground(terms))
    terms = _terms_finite(params, sa, sp)
    top = max(t.lead for t in terms)
    return _combine(terms, np.array([math.exp(t.lead - top) for t in terms]))


def exact_correlators(params: QuenchParams, t: float) -> PairCorrelators:
    """Nearest-neighbour correlators of the periodic N-site chain at time t."""
    if not (t >= 0.0 and math.isfinite(t)):
        raise ValueError(f"time must be finite and >= 0, got {t!r}")
    return _evaluate(params, lambda g: time_factors(g, t))


def exact_asymptotic_correlators(params: QuenchParams) -> PairCorrelators:
    """``exact_correlators`` with each mode's time factors replaced by their infinite-time means."""
    return _evaluate(params, asymptotic_factors)


def exact_window_correlators(params: QuenchParams, start: float, span: float, samples: int) -> PairCorrelators:
    return average_correlators([exact_correlators(params, float(t)) for t in window_times(start, span, samples)])


__all__ = [
    "DEGENERACY_TOL",
    "ParameterError",
    "exact_asymptotic_correlators",
    "exact_correlators",
    "exact_window_correlators",
]
