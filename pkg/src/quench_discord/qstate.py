"""Two-qubit X states: assembly from correlators, Bloch form, discord, concurrence.

Basis order is |uu>, |ud>, |du>, |dd> with sigma_z |u> = +|u>.  The
geometric discord is one-sided, with the measurement on qubit A:

    D = (|x|^2 + |T|^2 - k_max) / 4,   K = x x^T + T T^T,

where x is A's Bloch vector, T the correlation tensor and k_max the largest
eigenvalue of K.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .correlators import PairCorrelators

TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-9
SYMMETRY_TOL = 1e-12

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class StateError(ValueError):
    """An assembled two-qubit state is not a valid density matrix."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


@dataclass(frozen=True)
class TwoQubitXState:
    """X-shaped density matrix; the only coherences are r23 and r14."""

    r11: float
    r22: float
    r33: float
    r44: float
    r23: complex = 0j
    r14: complex = 0j

    def __post_init__(self) -> None:
        margins = self.positivity_margins()
        diag = {"trace": self.trace(), **margins}
        if abs(self.trace() - 1.0) > TRACE_TOL:
            raise StateError(f"trace {self.trace()!r} differs from 1", diag)
        worst = min(margins.values())
        if worst < -POSITIVITY_TOL:
            raise StateError(f"state is not positive (margin {worst:.3e})", diag)

    def trace(self) -> float:
        return math.fsum((self.r11, self.r22, self.r33, self.r44))

    def positivity_margins(self) -> dict[str, float]:
        return {
            "min_population": min(self.r11, self.r22, self.r33, self.r44),
            "outer_block": self.r11 * self.r44 - abs(self.r14) ** 2,
            "inner_block": self.r22 * self.r33 - abs(self.r23) ** 2,
        }

    def matrix(self) -> np.ndarray:
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0], m[1, 1], m[2, 2], m[3, 3] = self.r11, self.r22, self.r33, self.r44
        m[1, 2], m[2, 1] = self.r23, np.conj(self.r23)
        m[0, 3], m[3, 0] = self.r14, np.conj(self.r14)
        return m

    @classmethod
    def from_matrix(cls, rho: np.ndarray, tol: float = 1e-9) -> "TwoQubitXState":
        rho = np.asarray(rho, dtype=complex)
        mask = np.ones((4, 4), dtype=bool)
        for i, j in ((0, 0), (1, 1), (2, 2), (3, 3), (1, 2), (2, 1), (0, 3), (3, 0)):
            mask[i, j] = False
        stray = float(np.abs(rho[mask]).max())
        if stray > tol:
            raise StateError(f"matrix is not X-shaped (largest stray entry {stray:.3e})", {"stray": stray})
        return cls(
            float(rho[0, 0].real), float(rho[1, 1].real), float(rho[2, 2].real), float(rho[3, 3].real),
            complex(rho[1, 2]), complex(rho[0, 3]),
        )


@dataclass(frozen=True)
class BlochDecomposition:
    x: np.ndarray
    y: np.ndarray
    T: np.ndarray = field(repr=False)


def assemble_rho(c: PairCorrelators, coherence: str = "full") -> TwoQubitXState:
    """Reduced state of two neighbouring spins.

    ``coherence="full"`` keeps the quench-induced phase of r14,
    r14 = (xx - yy) - i*xy.  ``"real"`` drops it, which is exact in
    equilibrium and for infinite-time averages.  Discord and concurrence
    depend on |r14| only.
    """
    if coherence not in ("full", "real"):
        raise ValueError(f"coherence must be 'full' or 'real', got {coherence!r}")
    inner = 0.25 - c.zz
    r11 = c.mz + c.zz + 0.25
    r44 = -c.mz + c.zz + 0.25
    r14 = complex(c.xx - c.yy, -c.xy if coherence == "full" else 0.0)
    try:
        return TwoQubitXState(r11, inner, inner, r44, complex(c.xx + c.yy, 0.0), r14)
    except StateError as err:
        err.diagnostics["correlators"] = c.as_dict()
        raise


def bloch_decompose(rho: TwoQubitXState) -> BlochDecomposition:
    """Bloch vectors and correlation tensor T_ij = Tr[rho sigma_i x sigma_j]."""
    a, b = rho.r23, rho.r14
    x = np.array([0.0, 0.0, rho.r11 + rho.r22 - rho.r33 - rho.r44])
    y = np.array([0.0, 0.0, rho.r11 - rho.r22 + rho.r33 - rho.r44])
    T = np.zeros((3, 3))
    T[0, 0] = 2.0 * (a.real + b.real)
    T[1, 1] = 2.0 * (a.real - b.real)
    T[0, 1] = 2.0 * (a.imag - b.imag)
    T[1, 0] = -2.0 * (a.imag + b.imag)
    T[2, 2] = rho.r11 - rho.r22 - rho.r33 + rho.r44
    return BlochDecomposition(x=x, y=y, T=T)


def _null_direction(M: np.ndarray) -> np.ndarray:
    """Unit vector annihilated by a rank-2 symmetric matrix (largest row cross product)."""
    cands = (np.cross(M[0], M[1]), np.cross(M[0], M[2]), np.cross(M[1], M[2]))
    best = max(cands, key=lambda v: float(v @ v))
    norm = math.sqrt(float(best @ best))
    return best / norm if norm > 0.0 else np.array([1.0, 0.0, 0.0])


def largest_eig_sym3(K: np.ndarray) -> float:
    """Largest eigenvalue of a real symmetric 3x3 matrix.

    The trigonometric closed form is refined through the eigenvector of
    whichever extreme eigenvalue is better separated: a Rayleigh quotient if
    that is the largest one, otherwise the larger root of the 2x2 block
    orthogonal to the smallest one.  Near-degenerate top pairs would
    otherwise lose half the digits in ``acos``.
    """
    K = np.asarray(K, dtype=float)
    if K.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {K.shape}")
    scale = max(1.0, float(np.abs(K).max()))
    if float(np.abs(K - K.T).max()) > SYMMETRY_TOL * scale:
        raise ValueError("matrix is not symmetric")
    K = 0.5 * (K + K.T)
    p1 = K[0, 1] ** 2 + K[0, 2] ** 2 + K[1, 2] ** 2
    if p1 == 0.0:
        return float(np.diag(K).max())
    q = float(np.trace(K)) / 3.0
    p2 = (K[0, 0] - q) ** 2 + (K[1, 1] - q) ** 2 + (K[2, 2] - q) ** 2 + 2.0 * p1
    p = math.sqrt(p2 / 6.0)
    r = min(1.0, max(-1.0, float(np.linalg.det((K - q * np.eye(3)) / p)) / 2.0))
    phi = math.acos(r) / 3.0
    e1 = q + 2.0 * p * math.cos(phi)
    e3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    e2 = 3.0 * q - e1 - e3
    if e1 - e2 >= e2 - e3:
        v = _null_direction(K - e1 * np.eye(3))
        return float(v @ K @ v)
    u = _null_direction(K - e3 * np.eye(3))
    axis = np.eye(3)[int(np.argmin(np.abs(u)))]
    a = np.cross(u, axis)
    a /= np.linalg.norm(a)
    b = np.cross(u, a)
    kaa, kbb, kab = float(a @ K @ a), float(b @ K @ b), float(a @ K @ b)
    return 0.5 * (kaa + kbb) + math.hypot(0.5 * (kaa - kbb), kab)


def geometric_discord_general(b: BlochDecomposition) -> float:
    x = np.asarray(b.x, dtype=float)
    T = np.asarray(b.T, dtype=float)
    K = np.outer(x, x) + T @ T.T
    total = float(x @ x) + float(np.sum(T * T))
    return max(0.0, 0.25 * (total - largest_eig_sym3(K)))


def geometric_discord_xstate(rho: TwoQubitXState) -> float:
    """Closed-form discord of an X state; phases of r23 and r14 drop out."""
    a, b = abs(rho.r23), abs(rho.r14)
    t1 = 2.0 * (a + b)
    t2 = 2.0 * (a - b)
    t3 = rho.r11 - rho.r22 - rho.r33 + rho.r44
    x3 = rho.r11 + rho.r22 - rho.r33 - rho.r44
    sq = (t1 * t1, t2 * t2, x3 * x3 + t3 * t3)
    return max(0.0, 0.25 * (math.fsum(sq) - max(sq)))


def concurrence(rho: TwoQubitXState) -> float:
    """Wootters concurrence of an X state, with tolerated negative blocks clamped."""
    inner = math.sqrt(max(0.0, rho.r22 * rho.r33))
    outer = math.sqrt(max(0.0, rho.r11 * rho.r44))
    return min(1.0, 2.0 * max(0.0, abs(rho.r14) - inner, abs(rho.r23) - outer))


def coherence_phase(rho: TwoQubitXState) -> float:
    """Argument of r14; zero for equilibrium and time-averaged states."""
    return cmath.phase(rho.r14) if rho.r14 != 0 else 0.0


def bloch_from_matrix(rho: np.ndarray) -> BlochDecomposition:
    """Bloch form of an arbitrary two-qubit density matrix by explicit traces."""
    rho = np.asarray(rho, dtype=complex)
    eye = np.eye(2)
    x = np.array([np.trace(rho @ np.kron(s, eye)).real for s in PAULI])
    y = np.array([np.trace(rho @ np.kron(eye, s)).real for s in PAULI])
    T = np.array([[np.trace(rho @ np.kron(a, b)).real for b in PAULI] for a in PAULI])
    return BlochDecomposition(x=x, y=y, T=T)
