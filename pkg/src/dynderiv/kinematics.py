"""Prescribed harmonic pitch motions for forced-oscillation testing.

Two motion modes are generated on uniform, endpoint-excluded time grids:

* incidence mode (``ALPHA``) -- the body pitches in a fixed freestream, so
  the relative angle of attack and the pitch rate vary together;
* flow-path mode (``Q``) -- body pitch and freestream direction oscillate
  in sync, holding the relative angle of attack constant while the pitch
  rate still varies.  Fitting both modes lets the caller split the damping
  sum C_q + C_alphadot into its two parts.

Conventions fixed here and relied on by the rest of the package:

* every internal angle is radians; degrees appear only at external
  boundaries (configs, CLI flags, report text);
* reduced frequency k = omega * chord / (2 V);
* nondimensional rates are rate * chord / (2 V);
* t = 0 is the ascending zero crossing of the oscillation (phase 0);
* all rates and accelerations are analytic derivatives of the prescribed
  motion, never finite differences.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    DecouplingViolation,
    NonDimensionalizationUndefined,
    ZeroAmplitude,
    ZeroReducedFrequency,
)


class OscillationMode(enum.Enum):
    """Which harmonic forcing pattern a test case applies."""

    ALPHA = "alpha"
    Q = "q"


@dataclass(frozen=True)
class Harmonic:
    """Simple harmonic signal A*sin(omega*t + phase)."""

    amplitude: float            # rad
    angular_frequency: float    # rad/s
    phase: float = 0.0          # rad

    def __post_init__(self) -> None:
        if not (math.isfinite(self.amplitude) and self.amplitude >= 0.0):
            raise ValueError(f"amplitude must be finite and >= 0, got {self.amplitude}")
        if not (math.isfinite(self.angular_frequency) and self.angular_frequency > 0.0):
            raise ValueError(
                f"angular_frequency must be finite and > 0, got {self.angular_frequency}"
            )
        if not math.isfinite(self.phase):
            raise ValueError(f"phase must be finite, got {self.phase}")


def harmonic_eval(h: Harmonic, t):
    """Evaluate A*sin(omega*t + phase) at time(s) t (scalar or array, s)."""
    return h.amplitude * np.sin(h.angular_frequency * np.asarray(t, dtype=float) + h.phase)


@dataclass(frozen=True)
class FlightCondition:
    """Freestream and reference geometry for one test condition.

    ``sound_speed`` is optional; when present it defines the Mach number
    used by compressibility-aware plants.
    """

    freestream_speed: float         # m/s
    density: float                  # kg/m^3
    ref_chord: float                # m
    ref_span: float                 # m
    ref_area: float                 # m^2
    sound_speed: float | None = None  # m/s

    def __post_init__(self) -> None:
        if not (math.isfinite(self.freestream_speed) and self.freestream_speed >= 0.0):
            raise ValueError(f"freestream_speed must be >= 0, got {self.freestream_speed}")
        if not (math.isfinite(self.density) and self.density > 0.0):
            raise ValueError(f"density must be > 0, got {self.density}")
        if not (math.isfinite(self.ref_chord) and self.ref_chord > 0.0):
            raise ValueError(f"ref_chord must be > 0, got {self.ref_chord}")
        if not (math.isfinite(self.ref_span) and self.ref_span > 0.0):
            raise ValueError(f"ref_span must be > 0, got {self.ref_span}")
        if not (math.isfinite(self.ref_area) and self.ref_area > 0.0):
            raise ValueError(f"ref_area must be > 0, got {self.ref_area}")
        if self.sound_speed is not None:
            if not (math.isfinite(self.sound_speed) and self.sound_speed > 0.0):
                raise ValueError(f"sound_speed must be > 0, got {self.sound_speed}")
            if self.mach >= 1.0:
                raise ValueError(f"Mach must be < 1, got {self.mach}")

    @property
    def mach(self) -> float | None:
        """Freestream Mach number, or None when no sound speed is given."""
        if self.sound_speed is None:
            return None
        return self.freestream_speed / self.sound_speed


@dataclass(frozen=True)
class OscillationSpec:
    """One forced-oscillation case: mode, amplitudes, frequency, sampling.

    In flow-path mode the flow amplitude must equal the body amplitude;
    that equality is what keeps the relative incidence constant, so a
    mismatch is rejected at construction (DecouplingViolation).  Leaving
    ``flow_amplitude`` unset in flow-path mode defaults it to the body
    amplitude; in incidence mode it is normalized to None.
    """

    mode: OscillationMode
    mean_incidence: float        # rad
    body_amplitude: float        # rad
    reduced_frequency: float     # k = omega*c/(2V)
    cycles: int = 3
    samples_per_cycle: int = 720
    flow_amplitude: float | None = None   # rad, flow-path mode only

    def __post_init__(self) -> None:
        if not math.isfinite(self.mean_incidence):
            raise ValueError(f"mean_incidence must be finite, got {self.mean_incidence}")
        if self.body_amplitude == 0.0:
            raise ZeroAmplitude("body_amplitude must be > 0; a zero-amplitude case has no motion")
        if not (math.isfinite(self.body_amplitude) and self.body_amplitude > 0.0):
            raise ValueError(f"body_amplitude must be > 0, got {self.body_amplitude}")
        if self.reduced_frequency == 0.0:
            raise ZeroReducedFrequency("reduced_frequency must be > 0; rate scaling undefined at 0")
        if not (math.isfinite(self.reduced_frequency) and self.reduced_frequency > 0.0):
            raise ValueError(f"reduced_frequency must be > 0, got {self.reduced_frequency}")
        if int(self.cycles) != self.cycles or self.cycles < 1:
            raise ValueError(f"cycles must be a positive integer, got {self.cycles}")
        if int(self.samples_per_cycle) != self.samples_per_cycle or self.samples_per_cycle < 8:
            raise ValueError(
                f"samples_per_cycle must be an integer >= 8, got {self.samples_per_cycle}"
            )
        if self.mode is OscillationMode.Q:
            if self.flow_amplitude is None:
                object.__setattr__(self, "flow_amplitude", self.body_amplitude)
            elif self.flow_amplitude != self.body_amplitude:
                raise DecouplingViolation(
                    "flow-path mode requires flow_amplitude == body_amplitude "
                    f"(got {self.flow_amplitude} vs {self.body_amplitude}); unequal "
                    "amplitudes would make the relative incidence vary"
                )
        else:
            object.__setattr__(self, "flow_amplitude", None)

    @classmethod
    def from_degrees(
        cls,
        mode: OscillationMode,
        mean_incidence_deg: float,
        amplitude_deg: float,
        reduced_frequency: float,
        cycles: int = 3,
        samples_per_cycle: int = 720,
    ) -> "OscillationSpec":
        """Build a spec from the degree-denominated external convention."""
        return cls(
            mode=mode,
            mean_incidence=math.radians(mean_incidence_deg),
            body_amplitude=math.radians(amplitude_deg),
            reduced_frequency=reduced_frequency,
            cycles=cycles,
            samples_per_cycle=samples_per_cycle,
        )

    def with_mode(self, mode: OscillationMode) -> "OscillationSpec":
        """Copy of this spec switched to the other oscillation mode."""
        return replace(self, mode=mode, flow_amplitude=None)


@dataclass(frozen=True)
class MotionState:
    """Instantaneous kinematic state of the prescribed motion.

    The relative angle of attack satisfies alpha = body_pitch - flow_angle
    at every instant.  ``pitch_accel`` is the analytic second derivative of
    the body pitch; the time-marching plant needs it for apparent-mass
    terms.
    """

    time: float                 # s
    body_pitch: float           # theta, rad
    relative_aoa: float         # alpha = theta - flow_angle, rad
    pitch_rate: float           # q = d(theta)/dt, rad/s
    nondim_pitch_rate: float    # q * c / (2V)
    aoa_rate: float             # d(alpha)/dt, rad/s
    nondim_aoa_rate: float      # alpha_dot * c / (2V)
    flow_angle: float           # lambda, rad
    pitch_accel: float          # d2(theta)/dt2, rad/s^2


@dataclass(frozen=True, eq=False)
class MotionSchedule:
    """A prescribed motion sampled on a uniform, endpoint-excluded grid.

    Field arrays all share one length: cycles * samples_per_cycle.  Indexing
    returns a scalar MotionState view of one sample.
    """

    spec: OscillationSpec
    omega: float                # rad/s
    time: np.ndarray
    body_pitch: np.ndarray
    relative_aoa: np.ndarray
    pitch_rate: np.ndarray
    nondim_pitch_rate: np.ndarray
    aoa_rate: np.ndarray
    nondim_aoa_rate: np.ndarray
    flow_angle: np.ndarray
    pitch_accel: np.ndarray

    def __len__(self) -> int:
        return len(self.time)

    def __getitem__(self, i: int) -> MotionState:
        return MotionState(
            time=float(self.time[i]),
            body_pitch=float(self.body_pitch[i]),
            relative_aoa=float(self.relative_aoa[i]),
            pitch_rate=float(self.pitch_rate[i]),
            nondim_pitch_rate=float(self.nondim_pitch_rate[i]),
            aoa_rate=float(self.aoa_rate[i]),
            nondim_aoa_rate=float(self.nondim_aoa_rate[i]),
            flow_angle=float(self.flow_angle[i]),
            pitch_accel=float(self.pitch_accel[i]),
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))


def omega_from_k(k: float, cond: FlightCondition) -> float:
    """Angular frequency (rad/s) for reduced frequency k = omega*c/(2V)."""
    if not (math.isfinite(k) and k > 0.0):
        raise ValueError(f"reduced frequency must be > 0, got {k}")
    if cond.freestream_speed == 0.0:
        raise NonDimensionalizationUndefined(
            "freestream speed is zero (hover): reduced frequency does not "
            "define an angular frequency"
        )
    return 2.0 * k * cond.freestream_speed / cond.ref_chord


def sample_grid(spec: OscillationSpec, omega: float) -> np.ndarray:
    """Uniform time stamps spanning ``cycles`` whole periods, endpoint excluded.

    Excluding t = cycles*T keeps the sample set exactly periodic, which in
    turn keeps the harmonic regression basis orthogonal on the grid.
    """
    if not (math.isfinite(omega) and omega > 0.0):
        raise ValueError(f"omega must be > 0, got {omega}")
    period = 2.0 * math.pi / omega
    n = spec.cycles * spec.samples_per_cycle
    return np.arange(n) * period / spec.samples_per_cycle


def alpha_mode_schedule(spec: OscillationSpec, cond: FlightCondition) -> MotionSchedule:
    """Body-pitch oscillation in a fixed freestream.

    theta(t) = alpha0 + A*sin(omega*t), flow angle 0, so the relative
    incidence tracks the body pitch and q = alpha_dot = omega*A*cos(omega*t).
    The out-of-phase coefficient response to this motion carries the damping
    sum C_q + C_alphadot.
    """
    if spec.mode is not OscillationMode.ALPHA:
        raise ValueError(f"spec mode is {spec.mode}, expected ALPHA")
    omega = omega_from_k(spec.reduced_frequency, cond)
    t = sample_grid(spec, omega)
    amp = spec.body_amplitude
    s = np.sin(omega * t)
    c = np.cos(omega * t)
    theta = spec.mean_incidence + amp * s
    q = omega * amp * c
    accel = -omega * omega * amp * s
    rate_scale = cond.ref_chord / (2.0 * cond.freestream_speed)
    qhat = q * rate_scale
    return MotionSchedule(
        spec=spec,
        omega=omega,
        time=t,
        body_pitch=theta,
        relative_aoa=theta.copy(),
        pitch_rate=q,
        nondim_pitch_rate=qhat,
        aoa_rate=q.copy(),
        nondim_aoa_rate=qhat.copy(),
        flow_angle=np.zeros_like(t),
        pitch_accel=accel,
    )


def q_mode_schedule(spec: OscillationSpec, cond: FlightCondition) -> MotionSchedule:
    """Synchronized body-pitch and flow-direction oscillation.

    theta(t) = alpha0 + A*sin(omega*t) and lambda(t) = A*sin(omega*t), so the
    relative incidence is alpha0 for all t while q = omega*A*cos(omega*t).
    The coefficient response isolates the pure pitch-rate derivatives C_q.
    """
    if spec.mode is not OscillationMode.Q:
        raise ValueError(f"spec mode is {spec.mode}, expected Q")
    if spec.flow_amplitude != spec.body_amplitude:
        raise DecouplingViolation(
            f"flow amplitude {spec.flow_amplitude} != body amplitude "
            f"{spec.body_amplitude}"
        )
    omega = omega_from_k(spec.reduced_frequency, cond)
    t = sample_grid(spec, omega)
    amp = spec.body_amplitude
    s = np.sin(omega * t)
    c = np.cos(omega * t)
    lam = amp * s
    theta = spec.mean_incidence + lam
    q = omega * amp * c
    accel = -omega * omega * amp * s
    rate_scale = cond.ref_chord / (2.0 * cond.freestream_speed)
    return MotionSchedule(
        spec=spec,
        omega=omega,
        time=t,
        body_pitch=theta,
        relative_aoa=np.full_like(t, spec.mean_incidence),
        pitch_rate=q,
        nondim_pitch_rate=q * rate_scale,
        aoa_rate=np.zeros_like(t),
        nondim_aoa_rate=np.zeros_like(t),
        flow_angle=lam,
        pitch_accel=accel,
    )


def make_schedule(spec: OscillationSpec, cond: FlightCondition) -> MotionSchedule:
    """Dispatch to the schedule generator matching ``spec.mode``."""
    if spec.mode is OscillationMode.ALPHA:
        return alpha_mode_schedule(spec, cond)
    return q_mode_schedule(spec, cond)
