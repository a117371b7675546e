"""Pure states, Hermitian operators and the spectral primitives built on them.

Conventions used throughout: hbar = 1, overlaps are clamped into [0, 1]
before inverse trig calls, and eigenvector phases are fixed by making the
largest-magnitude component real and positive (ties broken by lowest index)
so that repeated runs give bit-identical output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

NORM_ATOL = 1e-12
HERMITIAN_ATOL = 1e-12
DEGENERACY_ATOL = 1e-10


def _clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else (1.0 if x > 1.0 else x)


@dataclass(frozen=True)
class PureState:
    """Normalized state vector of a d-level system, d >= 2."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.shape[0] < 2:
            raise ValueError(f"state must be a vector with d >= 2, got shape {amps.shape}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"state norm {norm!r} deviates from 1 beyond {NORM_ATOL}")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def overlap(self, other: "PureState") -> complex:
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "PureState") -> float:
        return _clamp01(abs(self.overlap(other)) ** 2)


def basis_state(dim: int, index: int) -> PureState:
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dim {dim}")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return PureState(v)


@dataclass(frozen=True)
class HermitianOperator:
    """Hermitian matrix acting on a d-level system."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise ValueError(f"operator must be square with d >= 2, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_ATOL:
            raise ValueError("matrix is not Hermitian within tolerance")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return HermitianOperator(self.entries + other.entries)

    def __mul__(self, scalar: float) -> "HermitianOperator":
        if isinstance(scalar, complex) and scalar.imag != 0.0:
            raise ValueError("only real scalars keep the operator Hermitian")
        return HermitianOperator(float(scalar) * self.entries)

    __rmul__ = __mul__


SIGMA_X = HermitianOperator(np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex))
SIGMA_Z = HermitianOperator(np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex))


def zero_operator(dim: int) -> HermitianOperator:
    return HermitianOperator(np.zeros((dim, dim), dtype=complex))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order with phase-fixed orthonormal eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: Tuple[PureState, ...]

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def vector_matrix(self) -> np.ndarray:
        """Eigenvectors as columns, in eigenvalue order."""
        return np.column_stack([s.amplitudes for s in self.eigenvectors])


def _fix_phase(column: np.ndarray) -> np.ndarray:
    # Largest-magnitude entry made real positive; argmax takes the lowest
    # index on ties, which pins the convention deterministically.
    k = int(np.argmax(np.abs(column)))
    pivot = column[k]
    return column * (pivot.conjugate() / abs(pivot))


def spectral(h: HermitianOperator) -> SpectralDecomposition:
    eigvals, vecs = np.linalg.eigh(h.entries)
    states = tuple(PureState(_fix_phase(vecs[:, j])) for j in range(h.dim))
    eigvals = eigvals.copy()
    eigvals.setflags(write=False)
    return SpectralDecomposition(eigenvalues=eigvals, eigenvectors=states)


def ground_state(h: HermitianOperator) -> PureState:
    """Eigenvector of the smallest eigenvalue; rejects a degenerate ground space."""
    dec = spectral(h)
    gap = float(dec.eigenvalues[1] - dec.eigenvalues[0])
    if gap <= DEGENERACY_ATOL:
        raise ValueError(f"ground space degenerate within {DEGENERACY_ATOL} (gap {gap!r})")
    return dec.eigenvectors[0]


def fubini_study_distance(a: PureState, b: PureState) -> float:
    """Geodesic distance 2*arccos(|<a|b>|) on the ray space."""
    return 2.0 * math.acos(_clamp01(abs(a.overlap(b))))


def energy_mean(state: PureState, h: HermitianOperator) -> float:
    if state.dim != h.dim:
        raise ValueError(f"dimension mismatch: {state.dim} vs {h.dim}")
    return float(np.vdot(state.amplitudes, h.entries @ state.amplitudes).real)


def energy_variance(state: PureState, h: HermitianOperator) -> float:
    """Standard deviation sqrt(<h^2> - <h>^2), clamped at zero round-off."""
    if state.dim != h.dim:
        raise ValueError(f"dimension mismatch: {state.dim} vs {h.dim}")
    hpsi = h.entries @ state.amplitudes
    second = float(np.vdot(hpsi, hpsi).real)  # <h^2> for Hermitian h
    mean = float(np.vdot(state.amplitudes, hpsi).real)
    return math.sqrt(max(second - mean * mean, 0.0))


def hs_norm(h: HermitianOperator) -> float:
    """Hilbert-Schmidt norm sqrt(tr(h^2))."""
    return float(np.linalg.norm(h.entries, "fro"))


def unitary_step(h: HermitianOperator, dt: float) -> np.ndarray:
    """Propagator exp(-i*h*dt) computed through the eigendecomposition."""
    if not math.isfinite(dt):
        raise ValueError(f"time step must be finite, got {dt!r}")
    eigvals, vecs = np.linalg.eigh(h.entries)
    phases = np.exp(-1j * eigvals * dt)
    return (vecs * phases) @ vecs.conj().T
