"""Physical parameters of the quenched XY chain and per-mode dispersion data.

The chain is

    H = -J/2 sum_i [(1+gamma) sx_i sx_{i+1} + (1-gamma) sy_i sy_{i+1}] - h sum_i sz_i

with (J, h) = (J0, h0) for t <= 0 and (J1, h1) for t > 0.  After the
Jordan-Wigner mapping every pair of momenta (k, -k) decouples into a two-level
problem whose gap is 2 * dispersion(h, J, k, gamma).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

Boundary = Literal["paper", "antiperiodic", "periodic"]

BOUNDARIES: tuple[str, ...] = ("paper", "antiperiodic", "periodic")


class ParameterError(ValueError):
    """Raised when a physical configuration violates its invariants."""


@dataclass(frozen=True)
class QuenchParams:
    """Couplings and fields before (0) and after (1) the quench.

    ``kT`` is the temperature of the initial Gibbs state in energy units;
    ``kT == 0`` selects the ground state and is never turned into an
    infinite inverse temperature.
    """

    J0: float = 1.0
    J1: float = 1.0
    h0: float = 1.0
    h1: float = 1.0
    gamma: float = 1.0
    N: int = 1000
    kT: float = 0.0

    def __post_init__(self) -> None:
        for name in ("J0", "J1", "h0", "h1", "gamma", "kT"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
        if isinstance(self.N, bool) or int(self.N) != self.N:
            raise ParameterError(f"N must be an integer, got {self.N!r}")
        if self.N < 4 or self.N % 2:
            raise ParameterError(f"N must be even and >= 4, got {self.N}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ParameterError(f"gamma must lie in [0, 1], got {self.gamma}")
        if self.kT < 0.0:
            raise ParameterError(f"kT must be >= 0, got {self.kT}")

    @property
    def quench_strength(self) -> float:
        """J1*h0 - J0*h1; every time-dependent term carries this factor."""
        return self.J1 * self.h0 - self.J0 * self.h1

    def replace(self, **changes) -> "QuenchParams":
        fields = {k: getattr(self, k) for k in ("J0", "J1", "h0", "h1", "gamma", "N", "kT")}
        fields.update(changes)
        return QuenchParams(**fields)


def dispersion(h, J, phi, gamma):
    """Single-mode quasiparticle energy sqrt((J cos phi + h)^2 + gamma^2 J^2 sin^2 phi).

    Works elementwise on arrays.  ``hypot`` keeps the result exact when one
    of the two terms vanishes.
    """
    return np.hypot(J * np.cos(phi) + h, gamma * J * np.sin(phi))


def exact_trig(numer, denom: int) -> tuple[np.ndarray, np.ndarray]:
    """cos and sin of pi * numer / denom with exact zeros and unit values.

    Plain ``np.sin(np.pi)`` is 1.2e-16; at k = pi that residue would leave a
    spurious pairing term in a mode that has none.
    """
    numer = np.asarray(numer, dtype=np.int64)
    r = np.mod(numer, 2 * denom)
    angle = np.pi * r / denom
    c = np.cos(angle)
    s = np.sin(angle)
    twice = 2 * r
    on_axis = twice % denom == 0
    quarter = np.where(on_axis, twice // denom, -1)  # multiples of pi/2
    c = np.where(quarter == 0, 1.0, c)
    c = np.where(quarter == 2, -1.0, c)
    c = np.where((quarter == 1) | (quarter == 3), 0.0, c)
    s = np.where((quarter == 0) | (quarter == 2), 0.0, s)
    s = np.where(quarter == 1, 1.0, s)
    s = np.where(quarter == 3, -1.0, s)
    return c, s


def momenta(N: int, boundary: str = "antiperiodic") -> tuple[np.ndarray, int]:
    """Momentum numerators p with k = pi * p / denom, for the given mode set.

    ``paper``: k = 2 pi p / N, p = 1..N/2, every entry counted as a (k, -k) pair.
    ``antiperiodic``: k = (2p - 1) pi / N, p = 1..N/2 (even fermion parity sector).
    ``periodic``: k = 2 pi p / N, p = 1..N/2-1, the paired part of the odd
    sector; the unpaired k = 0 and k = pi are handled by the caller.
    """
    half = N // 2
    if boundary == "paper":
        return 2 * np.arange(1, half + 1), N
    if boundary == "antiperiodic":
        return 2 * np.arange(1, half + 1) - 1, N
    if boundary == "periodic":
        return 2 * np.arange(1, half), N
    raise ParameterError(f"unknown boundary {boundary!r}; expected one of {BOUNDARIES}")


@dataclass(frozen=True)
class ModeGrid:
    """Per-mode quantities shared by every correlator.

    ``weight`` is the thermal factor tanh(Gamma0 / kT) of each pair.  At
    kT = 0 it is 1, except for an exactly gapless initial mode, which is an
    equal mixture of its degenerate states and therefore carries 0.
    """

    boundary: str
    phi: np.ndarray
    cos: np.ndarray
    sin: np.ndarray
    delta: np.ndarray
    gamma0: np.ndarray
    gamma1: np.ndarray
    weight: np.ndarray

    @property
    def size(self) -> int:
        return self.phi.shape[0]


def thermal_factor(gap: np.ndarray, kT: float) -> np.ndarray:
    """tanh(gap / kT), with the kT = 0 limit taken at fixed gap."""
    gap = np.asarray(gap, dtype=float)
    if kT == 0.0:
        return np.where(gap > 0.0, 1.0, 0.0)
    return np.tanh(gap / kT)


def build_mode_grid(params: QuenchParams, boundary: str = "antiperiodic") -> ModeGrid:
    numer, denom = momenta(params.N, boundary)
    c, s = exact_trig(numer, denom)
    g = params.gamma
    gamma0 = np.hypot(params.J0 * c + params.h0, g * params.J0 * s)
    gamma1 = np.hypot(params.J1 * c + params.h1, g * params.J1 * s)
    grid = ModeGrid(
        boundary=boundary,
        phi=np.pi * numer / denom,
        cos=c,
        sin=s,
        delta=2.0 * g * s,
        gamma0=gamma0,
        gamma1=gamma1,
        weight=thermal_factor(gamma0, params.kT),
    )
    for arr in (grid.phi, grid.cos, grid.sin, grid.delta, grid.gamma0, grid.gamma1, grid.weight):
        arr.setflags(write=False)
    return grid
