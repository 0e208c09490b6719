"""Closed-form thermal correlators of the quenched chain.

Each (k, -k) pair is a pseudo-spin s = (sx, sy, sz) with sz = n_k + n_-k - 1.
The initial Gibbs state points it along -d0 with length tanh(Gamma0/kT), and
after the quench it precesses about d1 at angular frequency 4*Gamma1, where

    d = (0, J*delta, -2*(J cos k + h)),   |d| = 2*Gamma.

Everything below is linear in the initial pseudo-spin, so each mode is
evolved once with unit length and scaled by its thermal factor afterwards.
That split is what lets ``finite_size`` reuse the same kernels with other
thermal factors.

Two-point contractions for a separation r = m - l (paper index order):

    Q_r = 1/N sum [2 cos(rk) + 2i sin(rk) sx]
    G_r = 1/N sum [-2 cos(rk) + 2i sin(rk) sx]
    F_r = 2/N sum [cos(rk) sz - sin(rk) sy]

and Wick's theorem gives xx = F_1/4, yy = F_-1/4,
zz = (F_0^2 - Q_1 G_1 - F_1 F_-1)/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ModeGrid, QuenchParams, build_mode_grid

# channel rows of the per-mode contribution matrix
MZ, F0, FP, FM, XI = range(5)
N_CHANNELS = 5


@dataclass(frozen=True)
class Contractions:
    Q: complex
    G: complex
    F: complex


@dataclass(frozen=True)
class PairCorrelators:
    """Nearest-neighbour spin-1/2 correlators of a translation-invariant state.

    ``xy`` is <Sx_l Sy_l+1> + <Sy_l Sx_l+1>.  It vanishes in equilibrium and
    after a quench it is the imaginary part of the rho_14 coherence; the
    two-spin state built from the textbook X-state formulas ignores it.
    """

    mz: float
    xx: float
    yy: float
    zz: float
    xy: float = 0.0

    def as_dict(self) -> dict[str, float]:
        return {"mz": self.mz, "xx": self.xx, "yy": self.yy, "zz": self.zz, "xy": self.xy}


def _initial_direction(grid: ModeGrid, params: QuenchParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unit initial pseudo-spin -d0/|d0| as (y, z) components, plus its quench coupling.

    The coupling (d1 x s0)_x / 2 reduces to delta*(J1 h0 - J0 h1)/(2 Gamma0),
    which is exactly zero without an effective quench.  A gapless initial
    mode is given the direction +z.
    """
    g0 = grid.gamma0
    gapped = g0 > 0.0
    safe = np.where(gapped, g0, 1.0)
    x0 = params.J0 * grid.cos + params.h0
    uz = np.where(gapped, x0 / safe, 1.0)
    uy = np.where(gapped, -params.J0 * grid.delta / (2.0 * safe), 0.0)
    w = np.where(gapped, grid.delta * params.quench_strength / (2.0 * safe), 0.5 * params.J1 * grid.delta)
    return uy, uz, w


def time_factors(gamma1: np.ndarray, t: float) -> tuple[np.ndarray, np.ndarray]:
    """sin^2(2 t G)/G^2 and sin(4 t G)/G with their G -> 0 limits."""
    gapped = gamma1 > 0.0
    safe = np.where(gapped, gamma1, 1.0)
    s2 = np.where(gapped, np.sin(2.0 * t * safe) ** 2 / safe**2, (2.0 * t) ** 2)
    s4 = np.where(gapped, np.sin(4.0 * t * safe) / safe, 4.0 * t)
    return s2, s4


def asymptotic_factors(gamma1: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Infinite-time averages of the two factors in ``time_factors``.

    A mode with Gamma1 = 0 has a vanishing quench prefactor (it is unpaired,
    isotropic or field-free), so the value chosen for it never contributes.
    """
    gapped = gamma1 > 0.0
    safe = np.where(gapped, gamma1, 1.0)
    s2 = np.where(gapped, 0.5 / safe**2, 0.0)
    return s2, np.zeros_like(gamma1)


def mode_channels(
    grid: ModeGrid,
    params: QuenchParams,
    s2: np.ndarray,
    s4: np.ndarray,
    multiplicity: np.ndarray | float = 1.0,
) -> np.ndarray:
    """Per-mode contributions (5 x M) to mz, F_0, F_1, F_-1 and Im Q_1 for unit thermal factor."""
    N = params.N
    uy, uz, w = _initial_direction(grid, params)
    x1 = params.J1 * grid.cos + params.h1
    d = grid.delta
    sz = uz - params.J1 * d * w * s2
    sy = uy - 2.0 * x1 * w * s2
    sx = w * s4
    m = np.broadcast_to(np.asarray(multiplicity, dtype=float), sz.shape)
    out = np.empty((N_CHANNELS, sz.shape[0]))
    out[MZ] = m * sz / N
    out[F0] = 2.0 * m * sz / N
    out[FP] = 2.0 * m * (grid.cos * sz - grid.sin * sy) / N
    out[FM] = 2.0 * m * (grid.cos * sz + grid.sin * sy) / N
    out[XI] = 2.0 * m * grid.sin * sx / N
    return out


def cosine_offset(grid: ModeGrid, N: int, multiplicity: np.ndarray | float = 1.0) -> float:
    """Real part of Q_1: (1/N) sum 2 cos k.  Zero for a full Brillouin zone."""
    m = np.broadcast_to(np.asarray(multiplicity, dtype=float), grid.cos.shape)
    return math.fsum(2.0 * m * grid.cos) / N


def channel_sums(channels: np.ndarray, factor: np.ndarray) -> np.ndarray:
    """Compensated mode sums of each channel weighted by ``factor``, in ascending k."""
    weighted = channels * factor
    return np.array([math.fsum(row) for row in weighted])


def correlators_from_sums(sums: np.ndarray, q1: float) -> PairCorrelators:
    f0, fp, fm, xi = sums[F0], sums[FP], sums[FM], sums[XI]
    # -Q_1 G_1 = q1^2 + xi^2: the imaginary parts cancel identically
    zz = 0.25 * (f0 * f0 + q1 * q1 + xi * xi - fp * fm)
    return PairCorrelators(
        mz=float(sums[MZ]), xx=float(fp / 4.0), yy=float(fm / 4.0), zz=float(zz), xy=float(xi / 2.0)
    )


def _grid_for(params: QuenchParams, grid: ModeGrid | None) -> ModeGrid:
    return build_mode_grid(params) if grid is None else grid


def _check_time(t: float) -> None:
    if not (t >= 0.0 and math.isfinite(t)):
        raise ValueError(f"time must be finite and >= 0, got {t!r}")


def magnetization(grid: ModeGrid | None, params: QuenchParams, t: float) -> float:
    """<M^z> = <S^z_j> at time t after the quench."""
    _check_time(t)
    grid = _grid_for(params, grid)
    ch = mode_channels(grid, params, *time_factors(grid.gamma1, t))
    return math.fsum(ch[MZ] * grid.weight)


def contractions(grid: ModeGrid | None, params: QuenchParams, sep: int, t: float) -> Contractions:
    """Q, G and F for sites (l, l + sep), sep in {0, 1}."""
    if sep not in (0, 1):
        raise ValueError(f"sep must be 0 or 1, got {sep!r}")
    _check_time(t)
    grid = _grid_for(params, grid)
    ch = mode_channels(grid, params, *time_factors(grid.gamma1, t))
    sums = channel_sums(ch, grid.weight)
    if sep == 0:
        q = 2.0 * grid.size / params.N
        return Contractions(Q=complex(q, 0.0), G=complex(-q, 0.0), F=complex(sums[F0], 0.0))
    q = cosine_offset(grid, params.N)
    return Contractions(Q=complex(q, sums[XI]), G=complex(-q, sums[XI]), F=complex(sums[FP], 0.0))


def nn_correlators(grid: ModeGrid | None, params: QuenchParams, t: float) -> PairCorrelators:
    _check_time(t)
    grid = _grid_for(params, grid)
    ch = mode_channels(grid, params, *time_factors(grid.gamma1, t))
    return correlators_from_sums(channel_sums(ch, grid.weight), cosine_offset(grid, params.N))


def asymptotic_correlators(grid: ModeGrid | None, params: QuenchParams) -> PairCorrelators:
    """Correlators with sin^2(2 t Gamma1) -> 1/2 and sin(4 t Gamma1) -> 0."""
    grid = _grid_for(params, grid)
    ch = mode_channels(grid, params, *asymptotic_factors(grid.gamma1))
    return correlators_from_sums(channel_sums(ch, grid.weight), cosine_offset(grid, params.N))


def window_times(start: float, span: float, samples: int) -> np.ndarray:
    if samples < 1 or span < 0.0:
        raise ValueError("window needs samples >= 1 and span >= 0")
    return np.linspace(start, start + span, samples)


def average_correlators(items: list[PairCorrelators]) -> PairCorrelators:
    fields = ("mz", "xx", "yy", "zz", "xy")
    return PairCorrelators(**{f: math.fsum(getattr(c, f) for c in items) / len(items) for f in fields})


def window_correlators(
    grid: ModeGrid | None, params: QuenchParams, start: float, span: float, samples: int
) -> PairCorrelators:
    """Mean of ``nn_correlators`` over ``samples`` equally spaced times in [start, start + span]."""
    grid = _grid_for(params, grid)
    return average_correlators([nn_correlators(grid, params, float(t)) for t in window_times(start, span, samples)])
