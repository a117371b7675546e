"""Time-optimal driving of a two-level avoided crossing.

The system is H(u) = u*sigma_z + (delta/2)*sigma_x with |u| <= lambda_cap,
steered between the ground states of H at u = -gamma and u = +gamma.  The
mixing angle theta, tan(theta) = delta/(2*gamma), fixes the geometry: the
endpoint overlap is sin(theta) and their geodesic separation pi - 2*theta.
Hegerfeldt's optimal drives come in three regimes set by the cap against the
critical value delta^2/(4*gamma): an unconstrained delta-kick composite,
bang-off-bang above critical, bang-bang below.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .dynamics import ControlHamiltonian, PiecewiseConstantField
from .quantum import SIGMA_X, SIGMA_Z, HermitianOperator, PureState, ground_state

_CONSISTENCY_ATOL = 1e-12
_ASIN_CLAMP_ATOL = 1e-12

REGIME_UNCONSTRAINED = "unconstrained-composite"
REGIME_BANG_OFF_BANG = "bang-off-bang"
REGIME_BANG_BANG = "bang-bang"

DEFAULT_SURROGATE_FACTOR = 1e4


def theta_from_gamma(delta: float, gamma: float) -> float:
    if not delta > 0.0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    if gamma < 0.0:
        raise ValueError(f"gamma must be >= 0, got {gamma!r}")
    return math.atan2(delta, 2.0 * gamma)


def gamma_from_theta(delta: float, theta: float) -> float:
    if not delta > 0.0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    if not 0.0 < theta <= 0.5 * math.pi:
        raise ValueError(f"theta must lie in (0, pi/2], got {theta!r}")
    if theta == 0.5 * math.pi:
        return 0.0
    return delta / (2.0 * math.tan(theta))


@dataclass(frozen=True)
class LandauZenerProblem:
    """Avoided crossing delta, bias reach gamma, mixing angle theta, drive cap."""

    delta: float
    gamma: float
    theta: float
    lambda_cap: float

    def __post_init__(self):
        if not self.delta > 0.0:
            raise ValueError(f"delta must be positive, got {self.delta!r}")
        if self.gamma < 0.0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma!r}")
        if not self.lambda_cap > 0.0:
            raise ValueError(f"lambda_cap must be positive or +inf, got {self.lambda_cap!r}")
        implied = theta_from_gamma(self.delta, self.gamma)
        if abs(self.theta - implied) > _CONSISTENCY_ATOL:
            raise ValueError(
                f"theta {self.theta!r} inconsistent with gamma {self.gamma!r} "
                f"(implied {implied!r})"
            )

    @classmethod
    def from_gamma(cls, delta: float, gamma: float, lambda_cap: float = math.inf):
        return cls(delta, gamma, theta_from_gamma(delta, gamma), lambda_cap)

    @classmethod
    def from_theta(cls, delta: float, theta: float, lambda_cap: float = math.inf):
        return cls(delta, gamma_from_theta(delta, theta), theta, lambda_cap)

    @property
    def critical_cap(self) -> float:
        """Cap value delta^2/(4*gamma) separating the two constrained regimes."""
        if self.gamma == 0.0:
            return math.inf
        return self.delta * self.delta / (4.0 * self.gamma)

    def control_hamiltonian(self) -> ControlHamiltonian:
        return ControlHamiltonian(
            h0=(0.5 * self.delta) * SIGMA_X, hc=SIGMA_Z, u_max=self.lambda_cap
        )


def lz_hamiltonian(problem: LandauZenerProblem, u: float) -> HermitianOperator:
    """H(u) for an admissible drive value."""
    if abs(u) > problem.lambda_cap:
        raise ValueError(f"drive {u!r} exceeds lambda_cap {problem.lambda_cap!r}")
    return u * SIGMA_Z + (0.5 * problem.delta) * SIGMA_X


def _bias_hamiltonian(problem: LandauZenerProblem, bias: float) -> HermitianOperator:
    # endpoint definition, deliberately not windowed by lambda_cap
    return bias * SIGMA_Z + (0.5 * problem.delta) * SIGMA_X


def boundary_states(problem: LandauZenerProblem) -> Tuple[PureState, PureState]:
    """(psi0, psig): ground states at bias -gamma and +gamma."""
    psi0 = ground_state(_bias_hamiltonian(problem, -problem.gamma))
    psig = ground_state(_bias_hamiltonian(problem, +problem.gamma))
    return psi0, psig


@dataclass(frozen=True)
class OptimalProtocol:
    """A time-optimal drive: regime label, the field itself, and its durations.

    t_opt is the total field duration.  For the unconstrained composite the
    two delta-kick surrogates add 2*t0 of drive time that vanishes in the
    ideal limit, reported separately as t_opt_ideal; for the constrained
    regimes t_opt_ideal == t_opt.
    """

    regime: str
    field: PiecewiseConstantField
    t_opt: float
    t_lambda: float
    t_off: float
    t_opt_ideal: float

    def __post_init__(self):
        if abs(self.t_opt - self.field.total_duration) > 1e-12 * max(1.0, self.t_opt):
            raise ValueError("t_opt must equal the total field duration")


def unconstrained_protocol(
    problem: LandauZenerProblem, u0: Optional[float] = None
) -> OptimalProtocol:
    """Kick, free evolution for (pi - 2*theta)/delta, inverse kick.

    Each kick is a finite surrogate for a delta pulse of area pi/4: amplitude
    u0 (default 1e4*delta) held for t0 = pi/(4*u0).  Requires an uncapped
    drive window.
    """
    if not math.isinf(problem.lambda_cap):
        raise ValueError("unconstrained protocol needs lambda_cap = +inf")
    if u0 is None:
        u0 = DEFAULT_SURROGATE_FACTOR * problem.delta
    if not u0 > 0.0:
        raise ValueError(f"surrogate amplitude must be positive, got {u0!r}")
    t0 = math.pi / (4.0 * u0)
    t_free = (math.pi - 2.0 * problem.theta) / problem.delta
    segments = [(t0, +u0)]
    if t_free > 0.0:
        segments.append((t_free, 0.0))
    segments.append((t0, -u0))
    field = PiecewiseConstantField(tuple(segments))
    return OptimalProtocol(
        regime=REGIME_UNCONSTRAINED,
        field=field,
        t_opt=field.total_duration,
        t_lambda=0.0,
        t_off=t_free,
        t_opt_ideal=t_free,
    )


def _clamped_asin(arg: float) -> float:
    if arg > 1.0 + _ASIN_CLAMP_ATOL or arg < -_ASIN_CLAMP_ATOL:
        raise ValueError(f"arcsin argument {arg!r} outside [0, 1]: inconsistent parameters")
    return math.asin(min(max(arg, 0.0), 1.0))


def constrained_protocol(problem: LandauZenerProblem) -> OptimalProtocol:
    """Hegerfeldt's optimum for a finite cap: bang(+cap), off, bang(-cap).

    Above the critical cap the off window is open (bang-off-bang); below it
    the off window closes and the two bangs meet (bang-bang).
    """
    cap = problem.lambda_cap
    gamma = problem.gamma
    delta = problem.delta
    if math.isinf(cap):
        raise ValueError("constrained protocol needs a finite lambda_cap")
    if gamma == 0.0:
        raise ValueError("constrained protocol needs gamma > 0")

    quarter = 0.25 * delta * delta
    rabi_sq = cap * cap + quarter
    rabi = math.sqrt(rabi_sq)
    if cap >= problem.critical_cap:
        regime = REGIME_BANG_OFF_BANG
        t_lambda = _clamped_asin(math.sqrt(rabi_sq / (2.0 * cap * (cap + gamma)))) / rabi
        t_off = (2.0 / delta) * math.atan(
            (cap * gamma - quarter)
            / (0.5 * delta * math.sqrt(cap * cap + 2.0 * cap * gamma - quarter))
        )
    else:
        regime = REGIME_BANG_BANG
        t_lambda = (
            _clamped_asin(math.sqrt(gamma * rabi_sq / (0.5 * delta * delta * (cap + gamma))))
            / rabi
        )
        t_off = 0.0

    segments = [(t_lambda, +cap)]
    if t_off > 0.0:
        segments.append((t_off, 0.0))
    segments.append((t_lambda, -cap))
    field = PiecewiseConstantField(tuple(segments))
    total = field.total_duration
    return OptimalProtocol(
        regime=regime,
        field=field,
        t_opt=total,
        t_lambda=t_lambda,
        t_off=t_off,
        t_opt_ideal=total,
    )


def optimal_protocol(
    problem: LandauZenerProblem, u0: Optional[float] = None
) -> OptimalProtocol:
    """Dispatch on the cap: unconstrained composite or Hegerfeldt's bangs."""
    if math.isinf(problem.lambda_cap):
        return unconstrained_protocol(problem, u0)
    return constrained_protocol(problem)


@dataclass(frozen=True)
class ClosedFormBounds:
    tmin_a: float
    tmin_b: float
    tmin_c1: float
    tmin_c2: float


def closed_form_bounds(problem: LandauZenerProblem) -> ClosedFormBounds:
    """The four bounds evaluated analytically for the avoided-crossing problem.

    The drift-eigenbasis bound vanishes identically here: the endpoint states
    have equal and opposite tilts against the drift eigenbasis, so the
    overlap sum saturates at 1.
    """
    theta = problem.theta
    delta = problem.delta
    cap = problem.lambda_cap
    half_gap = 0.5 * math.pi - theta
    if math.isinf(cap):
        a = 0.0
        b = 0.0
    else:
        a = half_gap / math.sqrt(0.25 * delta * delta + cap * cap)
        b = half_gap / (0.5 * delta * math.cos(theta) + cap * math.sin(theta))
    c1 = (1.0 - math.sin(theta)) / (0.5 * math.sqrt(2.0) * delta)
    return ClosedFormBounds(tmin_a=a, tmin_b=b, tmin_c1=c1, tmin_c2=0.0)


def tqsl_star_closed(problem: LandauZenerProblem, protocol: OptimalProtocol) -> float:
    """Speed-limit time of the optimal trajectory in closed form.

    Ratio of the geodesic separation to the path length swept by the drive,
    times the protocol duration; each regime has an explicit expression.
    """
    theta = problem.theta
    delta = problem.delta
    separation = math.pi - 2.0 * theta
    if separation == 0.0:
        return 0.0
    if protocol.regime == REGIME_UNCONSTRAINED:
        ideal = protocol.t_opt_ideal
        return separation * ideal / (separation + math.pi * math.sin(theta))
    cap = problem.lambda_cap
    spread = cap * math.sin(theta) + 0.5 * delta * math.cos(theta)
    if protocol.regime == REGIME_BANG_OFF_BANG:
        path = 4.0 * spread * protocol.t_lambda + delta * protocol.t_off
        return separation * protocol.t_opt / path
    if protocol.regime == REGIME_BANG_BANG:
        return separation / (2.0 * spread)
    raise ValueError(f"unknown regime {protocol.regime!r}")
