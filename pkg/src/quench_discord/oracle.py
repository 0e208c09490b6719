"""Exact diagonalisation of small periodic chains, used as ground truth.

Everything here is dense linear algebra on the full 2^N Hilbert space, so
N is capped at 10.  Site 0 is the most significant tensor factor and the
reduced state is taken on sites (0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.optimize import minimize

from .correlators import PairCorrelators
from .model import ParameterError, QuenchParams
from .qstate import PAULI, TwoQubitXState, geometric_discord_xstate

MAX_SITES = 10
DEGENERACY_TOL = 1e-10

_ID2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class EDConfig:
    params: QuenchParams
    t: float = 0.0

    def __post_init__(self) -> None:
        if self.params.N > MAX_SITES:
            raise ParameterError(f"exact diagonalisation supports N <= {MAX_SITES}, got {self.params.N}")
        if not self.t >= 0.0:
            raise ParameterError(f"t must be >= 0, got {self.t}")


def _site_ops(ops: dict[int, np.ndarray], N: int) -> np.ndarray:
    return reduce(np.kron, [ops.get(i, _ID2) for i in range(N)])


def hamiltonian(J: float, h: float, gamma: float, N: int) -> np.ndarray:
    """Dense periodic XY Hamiltonian in the sigma basis."""
    sx, sy, sz = PAULI
    dim = 2**N
    H = np.zeros((dim, dim), dtype=complex)
    for i in range(N):
        j = (i + 1) % N
        H -= 0.5 * J * (1.0 + gamma) * _site_ops({i: sx, j: sx}, N)
        H -= 0.5 * J * (1.0 - gamma) * _site_ops({i: sy, j: sy}, N)
        H -= h * _site_ops({i: sz}, N)
    return H


def initial_state(params: QuenchParams) -> np.ndarray:
    """Gibbs state of H(J0, h0); uniform ground-space mixture at kT = 0."""
    e, v = np.linalg.eigh(hamiltonian(params.J0, params.h0, params.gamma, params.N))
    if params.kT == 0.0:
        p = (np.abs(e - e[0]) <= DEGENERACY_TOL * max(1.0, abs(e[0]))).astype(float)
    else:
        p = np.exp(-(e - e[0]) / params.kT)
    p /= p.sum()
    return (v * p) @ v.conj().T


def evolved_state(cfg: EDConfig) -> np.ndarray:
    p = cfg.params
    rho0 = initial_state(p)
    if cfg.t == 0.0:
        return rho0
    e, v = np.linalg.eigh(hamiltonian(p.J1, p.h1, p.gamma, p.N))
    U = (v * np.exp(-1j * e * cfg.t)) @ v.conj().T
    return U @ rho0 @ U.conj().T


def partial_trace_pair(rho: np.ndarray, N: int) -> np.ndarray:
    """Reduced density matrix of sites 0 and 1."""
    rest = 2 ** (N - 2)
    return np.einsum("aibi->ab", rho.reshape(4, rest, 4, rest))


def ed_reduced_matrix(cfg: EDConfig) -> np.ndarray:
    return partial_trace_pair(evolved_state(cfg), cfg.params.N)


def ed_reduced_density(cfg: EDConfig) -> TwoQubitXState:
    return TwoQubitXState.from_matrix(ed_reduced_matrix(cfg))


def ed_discord(cfg: EDConfig) -> float:
    return geometric_discord_xstate(ed_reduced_density(cfg))


def correlators_from_matrix(rho2: np.ndarray) -> PairCorrelators:
    sx, sy, sz = PAULI

    def pair(a, b):
        return float(np.trace(rho2 @ np.kron(a, b)).real) / 4.0

    return PairCorrelators(
        mz=float(np.trace(rho2 @ np.kron(sz, _ID2)).real) / 2.0,
        xx=pair(sx, sx),
        yy=pair(sy, sy),
        zz=pair(sz, sz),
        xy=pair(sx, sy) + pair(sy, sx),
    )


def ed_correlators(cfg: EDConfig) -> PairCorrelators:
    return correlators_from_matrix(ed_reduced_matrix(cfg))


def _measured_norm(rho: np.ndarray, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """||Pi_n(rho)||^2 for projective measurements on qubit A along n(theta, phi)."""
    n = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)
    ndots = np.einsum("...i,ijk->...jk", n, np.stack(PAULI))
    total = np.zeros(theta.shape)
    for sign in (1.0, -1.0):
        P = 0.5 * (_ID2 + sign * ndots)
        PA = np.einsum("...ab,cd->...acbd", P, _ID2).reshape(theta.shape + (4, 4))
        out = PA @ rho @ PA
        total += np.einsum("...ij,...ij->...", out, out.conj()).real
    return total


def brute_force_discord(rho: np.ndarray, grid: int = 400) -> float:
    """min over measurement directions of ||rho - Pi(rho)||^2, by grid search and refinement.

    Pi is an orthogonal projection, so the distance is ||rho||^2 - ||Pi(rho)||^2.
    """
    rho = np.asarray(rho, dtype=complex)
    purity = float(np.einsum("ij,ij->", rho, rho.conj()).real)
    th = np.linspace(0.0, np.pi, grid)
    ph = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    TH, PH = np.meshgrid(th, ph, indexing="ij")
    kept = _measured_norm(rho, TH, PH)
    i, j = np.unravel_index(int(np.argmax(kept)), kept.shape)

    def objective(v):
        return purity - float(_measured_norm(rho, np.array(v[0]), np.array(v[1])))

    res = minimize(objective, x0=[TH[i, j], PH[i, j]], method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 2000})
    return max(0.0, min(float(res.fun), purity - float(kept[i, j])))


def wootters_concurrence(rho: np.ndarray) -> float:
    """Concurrence of an arbitrary two-qubit state from the spectrum of rho * rho_tilde."""
    rho = np.asarray(rho, dtype=complex)
    yy = np.kron(PAULI[1], PAULI[1])
    R = rho @ yy @ rho.conj() @ yy
    lam = np.sqrt(np.clip(np.sort(np.linalg.eigvals(R).real)[::-1], 0.0, None))
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))
