"""Piecewise-constant driven dynamics and trajectory-level inequality checks.

Propagation is exact per segment (spectral exponential of the constant
Hamiltonian), so the only discretization anywhere is the sample grid that
trajectory integrals and finite differences run on.  Segment boundaries are
sampled twice, once with each adjacent amplitude: the drive is discontinuous
there and the duplicated node keeps trapezoid integrals of the energy spread
exact while leaving the states themselves single-valued.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from .quantum import HermitianOperator, PureState, energy_variance

TARGET_FIDELITY_ATOL = 1e-6
_AMPLITUDE_RTOL = 1e-12


@dataclass(frozen=True)
class ControlHamiltonian:
    """H(u) = h0 + u*hc with the admissible drive window |u| <= u_max."""

    h0: HermitianOperator
    hc: HermitianOperator
    u_max: float = math.inf

    def __post_init__(self):
        if self.hc.dim != self.h0.dim:
            raise ValueError(f"dimension mismatch: {self.h0.dim} vs {self.hc.dim}")
        if math.isnan(self.u_max) or self.u_max < 0.0:
            raise ValueError(f"u_max must be >= 0 or +inf, got {self.u_max!r}")

    @property
    def dim(self) -> int:
        return self.h0.dim

    def hamiltonian(self, u: float) -> HermitianOperator:
        if abs(u) > self.u_max + _AMPLITUDE_RTOL * max(1.0, self.u_max):
            raise ValueError(f"amplitude {u!r} exceeds u_max {self.u_max!r}")
        return HermitianOperator(self.h0.entries + u * self.hc.entries)


@dataclass(frozen=True)
class PiecewiseConstantField:
    """Drive u(t) given as (duration, amplitude) segments, durations > 0."""

    segments: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        segs = tuple((float(d), float(a)) for d, a in self.segments)
        if not segs:
            raise ValueError("field needs at least one segment")
        for d, a in segs:
            if not (d > 0.0 and math.isfinite(d)):
                raise ValueError(f"segment duration must be positive and finite, got {d!r}")
            if not math.isfinite(a):
                raise ValueError(f"segment amplitude must be finite, got {a!r}")
        object.__setattr__(self, "segments", segs)

    @property
    def total_duration(self) -> float:
        t = 0.0
        for d, _ in self.segments:
            t += d
        return t

    def amplitude_integral(self) -> float:
        """Time integral of the drive, sum of duration*amplitude."""
        return float(sum(d * a for d, a in self.segments))


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of the driven Schrodinger equation.

    states holds one row per sample; segment_index maps each sample to the
    field segment whose amplitude was in force there (boundary nodes appear
    twice, once per side).
    """

    times: np.ndarray
    states: np.ndarray
    variance_samples: np.ndarray
    survival: np.ndarray
    segment_index: np.ndarray

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def n_samples(self) -> int:
        return self.times.shape[0]

    def state_at(self, k: int) -> PureState:
        return PureState(self.states[k])

    def initial_state(self) -> PureState:
        return self.state_at(0)

    def final_state(self) -> PureState:
        return self.state_at(-1)


def propagate(
    ch: ControlHamiltonian,
    field: PiecewiseConstantField,
    psi0: PureState,
    samples_per_segment: int = 200,
) -> Trajectory:
    """Evolve psi0 under the field, sampling each segment uniformly.

    Each segment is solved with one eigendecomposition and exact phase
    factors, so the endpoint state carries no time-stepping error.
    """
    if psi0.dim != ch.dim:
        raise ValueError(f"dimension mismatch: {psi0.dim} vs {ch.dim}")
    if samples_per_segment < 1:
        raise ValueError("samples_per_segment must be a positive integer")

    times = [0.0]
    seg_idx = [0]
    blocks = [psi0.amplitudes[:, None]]

    psi = psi0.amplitudes
    t_start = 0.0
    for j, (dur, amp) in enumerate(field.segments):
        h = ch.hamiltonian(amp)
        eigvals, vecs = np.linalg.eigh(h.entries)
        if j > 0:
            # duplicate boundary node, this side carrying the new amplitude
            times.append(t_start)
            seg_idx.append(j)
            blocks.append(psi[:, None])
        taus = np.linspace(0.0, dur, samples_per_segment + 1)[1:]
        coeff = vecs.conj().T @ psi
        block = vecs @ (np.exp(-1j * np.outer(eigvals, taus)) * coeff[:, None])
        times.extend(t_start + taus)
        seg_idx.extend([j] * samples_per_segment)
        blocks.append(block)
        psi = block[:, -1]
        t_start += dur

    states = np.hstack(blocks).T
    times_arr = np.asarray(times)
    seg_arr = np.asarray(seg_idx, dtype=int)

    amps = np.array([a for _, a in field.segments])
    variance = np.empty(times_arr.shape[0])
    survival = np.empty(times_arr.shape[0])
    psi0row = psi0.amplitudes
    for j in range(len(field.segments)):
        mask = seg_arr == j
        block = states[mask]
        h = ch.h0.entries + amps[j] * ch.hc.entries
        hpsi = block @ h.T
        second = np.einsum("ij,ij->i", hpsi.conj(), hpsi).real
        mean = np.einsum("ij,ij->i", block.conj(), hpsi).real
        variance[mask] = np.sqrt(np.maximum(second - mean * mean, 0.0))
    survival[:] = np.abs(states @ psi0row.conj()) ** 2
    np.clip(survival, 0.0, 1.0, out=survival)

    return Trajectory(
        times=times_arr,
        states=states,
        variance_samples=variance,
        survival=survival,
        segment_index=seg_arr,
    )


def path_length(traj: Trajectory) -> float:
    """Anandan-Aharonov length 2*integral of the energy spread along the path."""
    if traj.n_samples < 2:
        raise ValueError("need at least two samples to integrate")
    return 2.0 * float(trapezoid(traj.variance_samples, traj.times))


def propagate_refined(
    ch: ControlHamiltonian,
    field: PiecewiseConstantField,
    psi0: PureState,
    samples_per_segment: int = 200,
    tol: float = 1e-8,
    max_doublings: int = 6,
) -> Trajectory:
    """Propagate, doubling the sample grid until path_length stabilizes within tol."""
    traj = propagate(ch, field, psi0, samples_per_segment)
    prev = path_length(traj)
    for _ in range(max_doublings):
        samples_per_segment *= 2
        finer = propagate(ch, field, psi0, samples_per_segment)
        cur = path_length(finer)
        if abs(cur - prev) < tol:
            return finer
        traj, prev = finer, cur
    return traj


def bhattacharyya_check(traj: Trajectory) -> float:
    """Max signed residual of d/dt arccos(sqrt(P_t)) <= deltaE(t).

    The derivative is a central difference taken only at samples interior to
    their segment; endpoints and boundary nodes are excluded because the
    drive (and hence the rate) jumps there.  A non-positive return value, up
    to grid error, certifies the inequality.
    """
    if traj.n_samples < 3:
        raise ValueError("need at least three samples for central differences")
    angle = np.arccos(np.sqrt(np.clip(traj.survival, 0.0, 1.0)))
    seg = traj.segment_index
    k = np.arange(1, traj.n_samples - 1)
    interior = (seg[k - 1] == seg[k]) & (seg[k] == seg[k + 1])
    k = k[interior]
    if k.size == 0:
        raise ValueError("no interior samples; increase samples_per_segment")
    deriv = (angle[k + 1] - angle[k - 1]) / (traj.times[k + 1] - traj.times[k - 1])
    return float(np.max(deriv - traj.variance_samples[k]))


def _anchored_variances(
    ch: ControlHamiltonian,
    field: PiecewiseConstantField,
    chi: PureState,
    traj: Trajectory,
) -> np.ndarray:
    """deltaE of H(u(t)) in the fixed state chi, per trajectory sample."""
    per_segment = np.array(
        [energy_variance(chi, ch.hamiltonian(a)) for _, a in field.segments]
    )
    return per_segment[traj.segment_index]


def pfeifer_envelope(
    traj: Trajectory,
    ch: ControlHamiltonian,
    field: PiecewiseConstantField,
    phi: PureState,
) -> Tuple[np.ndarray, np.ndarray]:
    """Lower and upper bounding envelopes sin*(delta -+ h(t)) for |<phi|psi(t)>|.

    h(t) is the smaller of the accumulated energy spreads anchored at phi and
    at the initial state; both integrands are piecewise constant in time, so
    the cumulative trapezoid below is exact.
    """
    from .bounds import sin_star  # local import, bounds depends on dynamics

    if phi.dim != traj.dim:
        raise ValueError(f"dimension mismatch: {phi.dim} vs {traj.dim}")
    psi0 = traj.initial_state()
    h_phi = cumulative_trapezoid(
        _anchored_variances(ch, field, phi, traj), traj.times, initial=0.0
    )
    h_psi0 = cumulative_trapezoid(
        _anchored_variances(ch, field, psi0, traj), traj.times, initial=0.0
    )
    envelope_angle = np.minimum(h_phi, h_psi0)
    delta = math.asin(min(abs(phi.overlap(psi0)), 1.0))
    lower = np.array([sin_star(delta - h) for h in envelope_angle])
    upper = np.array([sin_star(delta + h) for h in envelope_angle])
    return lower, upper


def pfeifer_envelope_check(
    traj: Trajectory,
    ch: ControlHamiltonian,
    field: PiecewiseConstantField,
    phi: PureState,
) -> float:
    """Largest violation of the overlap envelope; 0 means fully contained."""
    lower, upper = pfeifer_envelope(traj, ch, field, phi)
    overlaps = np.abs(traj.states @ phi.amplitudes.conj())
    worst = max(float(np.max(lower - overlaps)), float(np.max(overlaps - upper)))
    return max(worst, 0.0)


@dataclass(frozen=True)
class TqslEstimate:
    """Speed-limit time extracted from a trajectory.

    on_target records whether the final state actually reached the intended
    target; the time is computed either way.
    """

    time: float
    target_fidelity: float
    on_target: bool


def tqsl_star(traj: Trajectory, psi_g: PureState) -> TqslEstimate:
    """Geodesic-over-mean-spread time arccos(|<psi0|psi(T)>|) / mean(deltaE).

    Equals (geodesic distance / path length) * T whenever the path length is
    nonzero.  A stationary trajectory asked to reach a different target has
    no finite answer and reports +inf.
    """
    if traj.n_samples < 2:
        raise ValueError("need at least two samples")
    duration = float(traj.times[-1])
    fidelity = traj.final_state().fidelity(psi_g)
    on_target = fidelity >= 1.0 - TARGET_FIDELITY_ATOL
    overlap = min(abs(traj.initial_state().overlap(traj.final_state())), 1.0)
    numerator = math.acos(overlap)
    mean_spread = float(trapezoid(traj.variance_samples, traj.times)) / duration
    if numerator == 0.0:
        value = 0.0
    elif mean_spread == 0.0:
        value = math.inf
    else:
        value = numerator / mean_spread
    return TqslEstimate(time=value, target_fidelity=fidelity, on_target=on_target)


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """Dump samples as CSV: t, per-component re/im, deltaE, survival."""
    cols = []
    for c in range(traj.dim):
        cols.extend([f"re_c{c}", f"im_c{c}"])
    header = "t," + ",".join(cols) + ",deltaE,survival"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for k in range(traj.n_samples):
            row = [format(traj.times[k], ".17g")]
            for c in range(traj.dim):
                row.append(format(traj.states[k, c].real, ".17g"))
                row.append(format(traj.states[k, c].imag, ".17g"))
            row.append(format(traj.variance_samples[k], ".17g"))
            row.append(format(traj.survival[k], ".17g"))
            fh.write(",".join(row) + "\n")
