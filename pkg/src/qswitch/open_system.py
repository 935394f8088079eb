"""System-environment evolution with a persistent environment.

Two qubits (system (x) environment, system index slowest) evolve under

    H = h sigma_z (x) I + h I (x) sigma_z + j sigma_x (x) sigma_x

with hbar = 1. Segment unitaries are exact matrix exponentials from the
cached eigendecomposition. The central modeling point is that consecutive
segments act on the same environment, so the reduced segment maps are not
completely positive in general; only the global product state at t = 0 is
assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .channels import DensityMatrix
from .linalg import ID2, PAULI_X, PAULI_Z


@dataclass
class SeHamiltonian:
    """XX-coupled pair Hamiltonian with local sigma_z splittings."""

    h: float
    j: float
    mat: np.ndarray = field(init=False)
    _eig: linalg.EigenDecomposition = field(init=False, repr=False)

    def __post_init__(self):
        if self.h <= 0.0:
            raise ValueError(f"energy unit h must be positive, got {self.h}")
        self.mat = (self.h * np.kron(PAULI_Z, ID2)
                    + self.h * np.kron(ID2, PAULI_Z)
                    + self.j * np.kron(PAULI_X, PAULI_X))
        self._eig = linalg.hermitian_eig(self.mat)


@dataclass
class InteractionSchedule:
    """Contiguous, non-overlapping segments starting at t = 0."""

    segments: tuple

    def __post_init__(self):
        segs = tuple(self.segments)
        cursor = 0.0
        for ham, t_start, t_end in segs:
            if not isinstance(ham, SeHamiltonian):
                raise ValueError("each segment needs an SeHamiltonian")
            if abs(t_start - cursor) > 1e-12 or t_end < t_start:
                raise ValueError(f"segments must tile [0, T] in order; got "
                                 f"({t_start}, {t_end}) after {cursor}")
            cursor = t_end
        self.segments = segs


@dataclass
class FixedInputs:
    """Reference initial states for the two-Hamiltonian experiments."""

    sigma1: DensityMatrix
    sigma2: DensityMatrix
    rho_env: DensityMatrix


def reference_inputs() -> FixedInputs:
    s = 1.0 / np.sqrt(2.0)
    sigma1 = DensityMatrix(np.array([[0.5 * (1 + s), 0.5 * s],
                                     [0.5 * s, 0.5 * (1 - s)]], dtype=complex))
    sigma2 = DensityMatrix(0.5 * np.ones((2, 2), dtype=complex))
    rho_env = DensityMatrix(np.diag([1.0, 0.0]).astype(complex))
    return FixedInputs(sigma1=sigma1, sigma2=sigma2, rho_env=rho_env)


def se_unitary(ham: SeHamiltonian, t_a: float, t_b: float) -> np.ndarray:
    """exp(-i H (t_b - t_a)) from the cached spectrum."""
    if t_b < t_a:
        raise ValueError(f"segment end {t_b} precedes start {t_a}")
    eig = ham._eig
    phases = np.exp(-1.0j * eig.values * (t_b - t_a))
    return (eig.vectors * phases) @ eig.vectors.conj().T


def evolve_reduced(schedule: InteractionSchedule, rho_sys: DensityMatrix,
                   rho_env: DensityMatrix) -> DensityMatrix:
    """Reduced system state after all segments, environment never refreshed."""
    rho = linalg.tensor_product(rho_sys.mat, rho_env.mat)
    for ham, t_a, t_b in schedule.segments:
        u = se_unitary(ham, t_a, t_b)
        rho = u @ rho @ u.conj().T
    return DensityMatrix(linalg.partial_trace(rho, "second", (2, 2)))


def evolve_reduced_refreshed(schedule: InteractionSchedule, rho_sys: DensityMatrix,
                             rho_env: DensityMatrix) -> DensityMatrix:
    """Variant discarding the environment after every segment (for contrast)."""
    state = rho_sys
    for ham, t_a, t_b in schedule.segments:
        u = se_unitary(ham, t_a, t_b)
        big = u @ linalg.tensor_product(state.mat, rho_env.mat) @ u.conj().T
        state = DensityMatrix(linalg.partial_trace(big, "second", (2, 2)))
    return state


def reduced_map_trajectory(ham: SeHamiltonian, rho_env: DensityMatrix,
                           rho_sys: DensityMatrix, times) -> list:
    """From-zero reduced states Tr_E[U(t) (rho_S (x) rho_E) U(t)^dag]."""
    times = [float(t) for t in times]
    if any(t < 0 for t in times) or any(b < a for a, b in zip(times, times[1:])):
        raise ValueError("times must be non-negative and increasing")
    base = linalg.tensor_product(rho_sys.mat, rho_env.mat)
    out = []
    for t in times:
        u = se_unitary(ham, 0.0, t)
        rho = u @ base @ u.conj().T
        out.append(DensityMatrix(linalg.partial_trace(rho, "second", (2, 2))))
    return out
