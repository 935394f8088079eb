"""Qubit states and the damping-channel zoo as Kraus families.

Families are parametrized by a Lindblad coefficient ``gamma`` and emit one
Kraus channel per time interval, depending only on the duration
``dt = t2 - t1``:

* phase damping:  K0 = e^(-g dt / 2) I,  K1 = sqrt(1 - e^(-g dt)) sigma_z
* depolarizing:   K0 = sqrt(1 + 3 e^(-g dt)) / 2 I,
                  K{1,2,3} = sqrt(1 - e^(-g dt)) / 2 sigma_{x,y,z}
* amplitude damping: K0 = diag(1, e^(-g dt / 2)),
                  K1 = [[0, sqrt(1 - e^(-g dt))], [0, 0]]

The noise strength is p = 1 - e^(-g dt) in all three cases. Channels can be
built either from (gamma, interval) or directly from p.

Note the phase-damping family above acts as
rho -> e^(-g t) rho + (1 - e^(-g t)) Z rho Z, whose coherence multiplier
2 e^(-g t) - 1 crosses zero at p = 1/2 and tends to -1. Composing two such
maps therefore does NOT reproduce the map of summed duration (the family is
not a semigroup), unlike the depolarizing and amplitude-damping families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .linalg import ID2, PAULI_X, PAULI_Y, PAULI_Z

DENSITY_TOL = 1e-10
COMPLETENESS_TOL = 1e-10

PHASE_DAMPING = "phase_damping"
DEPOLARIZING = "depolarizing"
AMPLITUDE_DAMPING = "amplitude_damping"
UNITARY = "unitary"
GLOBAL_HAMILTONIAN = "global_hamiltonian"

_DAMPING_KINDS = (PHASE_DAMPING, DEPOLARIZING, AMPLITUDE_DAMPING)


@dataclass
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix."""

    mat: np.ndarray

    def __post_init__(self):
        m = linalg.as_complex_matrix(self.mat)
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > DENSITY_TOL:
            raise ValueError(f"density matrix not Hermitian (defect {herm:.3e})")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > DENSITY_TOL:
            raise ValueError(f"density matrix trace {tr} differs from 1")
        eig = linalg.hermitian_eig(0.5 * (m + m.conj().T))
        if eig.values[-1] < -DENSITY_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {eig.values[-1]:.3e}")
        self.mat = m

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


def ket(amplitudes) -> np.ndarray:
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("zero vector is not a state")
    return v / n


def pure_state(amplitudes) -> DensityMatrix:
    v = ket(amplitudes)
    return DensityMatrix(np.outer(v, v.conj()))


def basis_state(index: int, dim: int = 2) -> DensityMatrix:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return DensityMatrix(np.outer(v, v.conj()))


def plus_state() -> DensityMatrix:
    return pure_state([1.0, 1.0])


def maximally_mixed(dim: int = 2) -> DensityMatrix:
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


def bloch_vector(rho: DensityMatrix) -> np.ndarray:
    """(x, y, z) components of a qubit state."""
    m = rho.mat
    return np.array([np.trace(m @ PAULI_X).real,
                     np.trace(m @ PAULI_Y).real,
                     np.trace(m @ PAULI_Z).real])


@dataclass
class KrausChannel:
    """Finite Kraus family with a completeness certificate."""

    kraus: tuple
    label: str = ""
    interval: tuple = (0.0, 0.0)

    def __post_init__(self):
        ops = tuple(linalg.as_complex_matrix(k) for k in self.kraus)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        if any(k.shape != (dim, dim) for k in ops):
            raise ValueError("Kraus operators must share one square dimension")
        ident = sum(k.conj().T @ k for k in ops)
        defect = float(np.max(np.abs(ident - np.eye(dim))))
        if defect > COMPLETENESS_TOL:
            raise ValueError(f"Kraus completeness violated (defect {defect:.3e})")
        t0, t1 = float(self.interval[0]), float(self.interval[1])
        if t1 < t0:
            raise ValueError(f"interval end {t1} precedes start {t0}")
        self.kraus = ops
        self.interval = (t0, t1)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def stacked(self) -> np.ndarray:
        return np.stack(self.kraus)


@dataclass
class NoiseStrength:
    """Noise parameter p in [0, 1], p = 1 - e^(-gamma dt)."""

    p: float

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise ValueError(f"noise strength {self.p} outside [0, 1]")

    def check_against(self, gamma: float, dt: float, tol: float = 1e-12) -> bool:
        return abs(self.p - noise_from_interval(gamma, dt)) <= tol


def noise_from_interval(gamma: float, dt: float) -> float:
    return 1.0 - math.exp(-gamma * dt)


def duration_from_noise(gamma: float, p: float) -> float:
    """Inverse of the noise relation; infinite at p = 1."""
    if gamma <= 0.0:
        raise ValueError("gamma must be positive to invert the noise relation")
    if p >= 1.0:
        return math.inf
    return -math.log1p(-p) / gamma


@dataclass
class ChannelFamily:
    """Recipe emitting a Kraus channel for any interval.

    ``kind`` selects one of the damping families, a fixed unitary gate
    (``payload`` = the gate, interval-independent), or a system-environment
    Hamiltonian (``payload`` = the 4x4 Hamiltonian; only from-zero maps are
    emitted here, intermediate segments live in :mod:`qswitch.open_system`).
    """

    kind: str
    gamma: float = 0.0
    payload: np.ndarray | None = None
    env_state: np.ndarray | None = None

    def __post_init__(self):
        if self.kind in _DAMPING_KINDS:
            if self.gamma < 0.0:
                raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        elif self.kind == UNITARY:
            u = linalg.as_complex_matrix(self.payload)
            if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > 1e-10:
                raise ValueError("unitary payload is not unitary")
            self.payload = u
        elif self.kind == GLOBAL_HAMILTONIAN:
            h = linalg.as_complex_matrix(self.payload)
            if h.shape[0] != 4 or not linalg.is_hermitian(h):
                raise ValueError("global Hamiltonian payload must be Hermitian, dim 4")
            self.payload = h
            if self.env_state is None:
                self.env_state = np.diag([1.0, 0.0]).astype(complex)
        else:
            raise ValueError(f"unknown channel kind {self.kind!r}")


def phase_damping(gamma: float) -> ChannelFamily:
    return ChannelFamily(PHASE_DAMPING, gamma=gamma)


def depolarizing(gamma: float) -> ChannelFamily:
    return ChannelFamily(DEPOLARIZING, gamma=gamma)


def amplitude_damping(gamma: float) -> ChannelFamily:
    return ChannelFamily(AMPLITUDE_DAMPING, gamma=gamma)


def unitary_family(u) -> ChannelFamily:
    return ChannelFamily(UNITARY, payload=u)


def identity_family() -> ChannelFamily:
    return ChannelFamily(UNITARY, payload=ID2)


def _damping_kraus(kind: str, survival: float) -> tuple:
    """Kraus family at e^(-gamma dt) = survival."""
    e = float(survival)
    if kind == PHASE_DAMPING:
        return (math.sqrt(e) * ID2, math.sqrt(1.0 - e) * PAULI_Z)
    if kind == DEPOLARIZING:
        return (math.sqrt(1.0 + 3.0 * e) / 2.0 * ID2,
                math.sqrt(1.0 - e) / 2.0 * PAULI_X,
                math.sqrt(1.0 - e) / 2.0 * PAULI_Y,
                math.sqrt(1.0 - e) / 2.0 * PAULI_Z)
    if kind == AMPLITUDE_DAMPING:
        k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(e)]], dtype=complex)
        k1 = np.array([[0.0, math.sqrt(1.0 - e)], [0.0, 0.0]], dtype=complex)
        return (k0, k1)
    raise ValueError(f"not a damping kind: {kind!r}")


def make_channel(family: ChannelFamily, t1: float, t2: float) -> KrausChannel:
    """Interval map of a family over [t1, t2]."""
    t1, t2 = float(t1), float(t2)
    if t1 < 0.0 or t2 < t1:
        raise ValueError(f"need 0 <= t1 <= t2, got ({t1}, {t2})")
    if family.kind in _DAMPING_KINDS:
        ops = _damping_kraus(family.kind, math.exp(-family.gamma * (t2 - t1)))
        return KrausChannel(ops, label=family.kind, interval=(t1, t2))
    if family.kind == UNITARY:
        return KrausChannel((family.payload,), label="unitary", interval=(t1, t2))
    if family.kind == GLOBAL_HAMILTONIAN:
        if t1 != 0.0:
            raise ValueError("global-Hamiltonian families emit maps from t = 0 only; "
                             "use qswitch.open_system for intermediate segments")
        return _hamiltonian_channel(family, t2)
    raise ValueError(f"unknown channel kind {family.kind!r}")


def channel_from_noise(family: ChannelFamily, p: float) -> KrausChannel:
    """Damping-family channel at noise strength p (robust at p = 1)."""
    if family.kind not in _DAMPING_KINDS:
        raise ValueError("noise-strength construction applies to damping families only")
    p = NoiseStrength(p).p
    ops = _damping_kraus(family.kind, 1.0 - p)
    dur = duration_from_noise(family.gamma, p) if family.gamma > 0 else math.inf
    return KrausChannel(ops, label=f"{family.kind}(p={p:g})", interval=(0.0, dur))


def _hamiltonian_channel(family: ChannelFamily, t: float) -> KrausChannel:
    """From-zero reduced map of a system-environment Hamiltonian, as Kraus."""
    u = linalg.hermitian_exp(family.payload, -t)
    env = family.env_state

    def act(x):
        big = u @ linalg.tensor_product(x, env) @ u.conj().T
        return linalg.partial_trace(big, "second", (2, 2))

    choi = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            unit = np.zeros((2, 2), dtype=complex)
            unit[i, j] = 1.0
            choi += np.kron(unit, act(unit))
    eig = linalg.hermitian_eig(choi)
    ops = []
    for k in range(4):
        w = eig.values[k]
        if w > 1e-12:
            vec = eig.vectors[:, k].reshape(2, 2).T  # rows: output, cols: input
            ops.append(math.sqrt(w) * vec)
    return KrausChannel(tuple(ops), label="reduced_hamiltonian", interval=(0.0, t))


def apply_channel(ch: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """rho -> sum_i K_i rho K_i^dag, validated as a state."""
    if ch.dim != rho.dim:
        raise ValueError(f"channel dim {ch.dim} does not match state dim {rho.dim}")
    ks = ch.stacked()
    out = np.einsum("kij,jl,kml->im", ks, rho.mat, ks.conj())
    return DensityMatrix(out)


def apply_kraus_matrix(ch: KrausChannel, mat: np.ndarray) -> np.ndarray:
    """Kraus action on a raw matrix, no state validation (operator-basis work)."""
    ks = ch.stacked()
    return np.einsum("kij,jl,kml->im", ks, linalg.as_complex_matrix(mat), ks.conj())


def compose(later: KrausChannel, earlier: KrausChannel) -> KrausChannel:
    """Channel applying ``earlier`` first, then ``later``."""
    if later.dim != earlier.dim:
        raise ValueError(f"dim mismatch in composition: {later.dim} vs {earlier.dim}")
    ops = tuple(l @ e for l in later.kraus for e in earlier.kraus)
    return KrausChannel(ops, label=f"{later.label}*{earlier.label}",
                        interval=(earlier.interval[0], later.interval[1]))


def mix_kraus(ch: KrausChannel, v: np.ndarray) -> KrausChannel:
    """Equivalent Kraus representation K'_a = sum_b V[a, b] K_b, V unitary."""
    v = linalg.as_complex_matrix(v)
    n = len(ch.kraus)
    if v.shape != (n, n):
        raise ValueError(f"mixing matrix must be {n} x {n}")
    if np.max(np.abs(v.conj().T @ v - np.eye(n))) > 1e-10:
        raise ValueError("mixing matrix is not unitary")
    stacked = ch.stacked()
    mixed = np.einsum("ab,bij->aij", v, stacked)
    return KrausChannel(tuple(mixed), label=ch.label + "~", interval=ch.interval)


def choi_matrix(ch: KrausChannel) -> np.ndarray:
    """(id x channel) on the unnormalized maximally entangled matrix.

    Positive semidefinite iff the channel is completely positive; partial
    trace over the output (second) factor equals the identity iff it is
    trace preserving.
    """
    d = ch.dim
    out = np.zeros((d * d, d * d), dtype=complex)
    for k in ch.kraus:
        vec = k.T.reshape(-1)  # index (input * d + output)
        out += np.outer(vec, vec.conj())
    return out


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """D(a, b) = ||a - b||_1 / 2."""
    if a.dim != b.dim:
        raise ValueError(f"dim mismatch: {a.dim} vs {b.dim}")
    return 0.5 * linalg.trace_norm(a.mat - b.mat)


def helstrom_error(p1: float, rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """Minimum discrimination error 1/2 - ||p1 rho1 - p2 rho2||_1 / 2."""
    if not (0.0 <= p1 <= 1.0):
        raise ValueError(f"prior {p1} outside [0, 1]")
    if rho1.dim != rho2.dim:
        raise ValueError(f"dim mismatch: {rho1.dim} vs {rho2.dim}")
    return 0.5 - 0.5 * linalg.trace_norm(p1 * rho1.mat - (1.0 - p1) * rho2.mat)
