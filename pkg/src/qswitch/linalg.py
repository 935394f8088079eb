"""Dense complex linear algebra for small Hilbert spaces.

Everything here is deterministic: the Hermitian eigensolver is a cyclic
Jacobi iteration with a fixed sweep order and a fixed eigenvector phase
convention, so repeated runs on identical input produce bit-identical
output. Matrices are plain ``numpy`` arrays of ``complex128``; dimensions
of interest are 2 and 4 (8 at most, for system-plus-control checks).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-10
OFF_DIAGONAL_TARGET = 1e-14
MAX_SWEEPS = 64

ID2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def as_complex_matrix(a) -> np.ndarray:
    """Coerce input to a square, finite complex128 matrix."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix contains non-finite entries")
    return m


def product(a, b) -> np.ndarray:
    """Matrix product with a conformability check."""
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch in product: {a.shape} x {b.shape}")
    return a @ b


def add(a, b) -> np.ndarray:
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch in sum: {a.shape} vs {b.shape}")
    return a + b


def scale(c: complex, a) -> np.ndarray:
    return complex(c) * as_complex_matrix(a)


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_complex_matrix(a).conj().T


def trace(a) -> complex:
    return complex(np.trace(as_complex_matrix(a)))


def is_hermitian(a, tol: float = HERMITICITY_TOL) -> bool:
    a = as_complex_matrix(a)
    return float(np.max(np.abs(a - a.conj().T))) <= tol


@dataclass
class EigenDecomposition:
    """Spectral data of a Hermitian matrix.

    ``values`` are real and sorted descending; ``vectors[:, k]`` is the
    unit-norm eigenvector for ``values[k]``, with its global phase fixed so
    that the largest-magnitude component is real and non-negative.
    """

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Zero the (p, q) entry of Hermitian ``a`` with a complex Givens rotation."""
    gamma = a[p, q]
    mag = abs(gamma)
    if mag == 0.0:
        return
    phase = gamma / mag
    alpha = a[p, p].real
    beta = a[q, q].real
    tau = (beta - alpha) / (2.0 * mag)
    if tau >= 0.0:
        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # Restricted rotation: diag(1, conj(phase)) followed by a real rotation.
    r = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)
    a[:, [p, q]] = a[:, [p, q]] @ r
    a[[p, q], :] = r.conj().T @ a[[p, q], :]
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    v[:, [p, q]] = v[:, [p, q]] @ r


def _off_diagonal_mass(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def canonical_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude component is real >= 0."""
    k = int(np.argmax(np.abs(vec)))
    pivot = vec[k]
    if abs(pivot) == 0.0:
        return vec
    return vec * (np.conj(pivot) / abs(pivot))


def hermitian_eig(a) -> EigenDecomposition:
    """Deterministic eigendecomposition of a Hermitian matrix.

    Cyclic Jacobi with row-major sweep order and convergence once the
    off-diagonal Frobenius mass drops below 1e-14 (at most 64 sweeps).
    Non-Hermitian input is rejected.
    """
    a = as_complex_matrix(a)
    if not is_hermitian(a):
        raise ValueError("hermitian_eig requires a Hermitian matrix "
                         f"(max |A - A^dag| = {np.max(np.abs(a - a.conj().T)):.3e})")
    n = a.shape[0]
    work = 0.5 * (a + a.conj().T)
    vecs = np.eye(n, dtype=complex)
    for _ in range(MAX_SWEEPS):
        if _off_diagonal_mass(work) < OFF_DIAGONAL_TARGET:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _jacobi_rotate(work, vecs, p, q)
    values = np.diag(work).real.copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vecs = vecs[:, order]
    for k in range(n):
        vecs[:, k] = canonical_phase(vecs[:, k])
    return EigenDecomposition(values=values, vectors=vecs)


def hermitian_exp(h, phase: float) -> np.ndarray:
    """exp(i * phase * h) for Hermitian h, via the Jacobi eigendecomposition."""
    h = as_complex_matrix(h)
    if not is_hermitian(h):
        raise ValueError("hermitian_exp requires a Hermitian matrix")
    eig = hermitian_eig(h)
    phases = np.exp(1.0j * float(phase) * eig.values)
    return (eig.vectors * phases) @ eig.vectors.conj().T


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; the first factor carries the slowest index."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def partial_trace(rho, subsystem: str, dims: tuple[int, int]) -> np.ndarray:
    """Trace out one factor of a bipartite matrix.

    ``dims = (d1, d2)`` with the first factor slowest; ``subsystem`` names
    the factor to remove, ``"first"`` or ``"second"``.
    """
    rho = as_complex_matrix(rho)
    d1, d2 = int(dims[0]), int(dims[1])
    if d1 < 1 or d2 < 1 or rho.shape[0] != d1 * d2:
        raise ValueError(f"matrix of dim {rho.shape[0]} does not factor as {d1} x {d2}")
    r = rho.reshape(d1, d2, d1, d2)
    if subsystem == "first":
        return np.einsum("abac->bc", r)
    if subsystem == "second":
        return np.einsum("abcb->ac", r)
    raise ValueError(f"subsystem must be 'first' or 'second', got {subsystem!r}")


def trace_norm(a) -> float:
    """Sum of singular values, computed from the spectrum of A^dag A."""
    a = as_complex_matrix(a)
    gram = a.conj().T @ a
    eig = hermitian_eig(gram)
    return float(np.sum(np.sqrt(np.clip(eig.values, 0.0, None))))
