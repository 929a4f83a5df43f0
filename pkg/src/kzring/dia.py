"""Closed-form register dynamics on a ring of frozen critical domains.

Past the freeze-out instant of a slow ramp the ring is a necklace of n_d
rigid domains, each a collective spin S_d = xi_d/2 pointing along a sampled
initial direction.  Near the critical field the effective domain-domain
coupling is negligible and each domain is driven conditionally on the
register branch: the branch-gamma propagator displaces domain delta by

    Omega_gamma(t) = pi_gamma * f(t),    f(t) = (g/h_t) (e^(i t h_t) - 1),

where t is the elapsed time since the preparation instant t0 and h_t is the
instantaneous field on the quench clock at t0 + t.  The concurrence of the
Bell-state register is

    C(t) = max{0, [prod_delta cos(Theta_delta(t)/2)]^(2 S_d)},

with Theta_delta the angle between the two branch-evolved directions of
domain delta.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .sampler import DomainEnsemble
from .scaling import DomainPartition, QuenchSchedule, field_at, freeze_out_time
from .scs import ScsDirection, apply_displacement, rotation_matrix

__all__ = [
    "DiaConfig",
    "displacement_parameter",
    "branch_direction",
    "evolve_domain",
    "branch_overlap",
    "concurrence",
    "validate_trace_span",
]


@dataclass(frozen=True)
class DiaConfig:
    """Frozen-domain scenario: ring, coupling, ramp, start time, ensemble.

    t0 is absolute on the quench clock and must not precede the freeze-out
    instant; evolution times passed to the dynamics functions are elapsed
    times since t0.  Weak-coupling guards mirror the paramagnetic ones and
    are checked at t0 here and over a whole trace span by
    :func:`validate_trace_span`.
    """

    n: int
    g: float
    schedule: QuenchSchedule
    t0: float
    partition: DomainPartition
    ensemble: DomainEnsemble
    g_max: float = 0.25
    g_to_h_max: float = 0.25
    v_span_max: float = 0.05

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ConfigError(f"ring needs at least 2 spins, got n={self.n}")
        if self.g < 0:
            raise ConfigError(f"coupling must be >= 0, got g={self.g}")
        if self.partition.xi_d * self.partition.n_d != self.n:
            raise ConfigError(
                f"partition {self.partition.n_d} x {self.partition.xi_d} "
                f"does not tile a ring of {self.n} spins"
            )
        if len(self.ensemble.directions) != self.partition.n_d:
            raise ConfigError(
                f"ensemble has {len(self.ensemble.directions)} directions, "
                f"partition expects {self.partition.n_d}"
            )
        t_bar = freeze_out_time(self.schedule)
        if self.t0 < t_bar - 1e-9:
            raise ConfigError(
                f"preparation time t0={self.t0} precedes freeze-out t_bar={t_bar}"
            )
        h_start = field_at(self.schedule, self.t0)
        if h_start < self.schedule.hc - 1e-12:
            raise ConfigError(
                f"field {h_start} at t0 already below the critical value "
                f"{self.schedule.hc}"
            )
        if self.g > self.g_max:
            raise ConfigError(
                f"weak-coupling guard: g={self.g} exceeds g_max={self.g_max}"
            )
        if self.g > self.g_to_h_max * h_start:
            raise ConfigError(
                f"detuning guard: g={self.g} exceeds {self.g_to_h_max} * h(t0)"
            )


def validate_trace_span(cfg: DiaConfig, span: float) -> None:
    """Check that a trace of the given elapsed length stays in the frozen window.

    The domain picture needs an essentially static field (v * span small)
    that has not yet crossed the critical value, and weak coupling relative
    to the field throughout.
    """
    if span < 0:
        raise ConfigError(f"trace span must be >= 0, got {span}")
    drift = cfg.schedule.v * span
    if drift > cfg.v_span_max + 1e-15:
        raise ConfigError(
            f"field drifts by {drift} over the trace, above the "
            f"frozen-window bound {cfg.v_span_max}"
        )
    h_end = field_at(cfg.schedule, cfg.t0 + span)
    if h_end < cfg.schedule.hc - 1e-12:
        raise ConfigError(
            f"field {h_end} at the end of the trace is below the critical "
            f"value {cfg.schedule.hc}"
        )
    if cfg.g > cfg.g_to_h_max * h_end:
        raise ConfigError(
            f"detuning guard: g={cfg.g} exceeds {cfg.g_to_h_max} * h at trace end"
        )


def displacement_parameter(g: float, h_t: float, t: float) -> complex:
    """Accumulated per-domain displacement f(t) = (g/h_t)(e^(i t h_t) - 1).

    Its modulus obeys |f| = (2g/h_t) |sin(t h_t / 2)|.
    """
    if h_t <= 0:
        raise ValueError(f"instantaneous field must be positive, got h_t={h_t}")
    return (g / h_t) * (cmath.exp(1j * t * h_t) - 1.0)


def branch_direction(g: float, h_t: float, branch: int, t: float) -> ScsDirection:
    """Rotor direction Omega_gamma = pi_gamma * f(t) for a parity branch."""
    if branch not in (1, -1):
        raise ValueError(f"branch must be +1 or -1, got {branch}")
    return ScsDirection.from_omega(branch * displacement_parameter(g, h_t, t))


def evolve_domain(initial: ScsDirection, rotor: ScsDirection) -> ScsDirection:
    """Direction of a domain after the displacement labelled by `rotor`."""
    return ScsDirection.from_bloch(apply_displacement(rotor, initial.bloch()))


def _domain_half_angle_cosines(cfg: DiaConfig, t: float) -> np.ndarray:
    """cos(Theta_delta/2) per domain for the +/- branch pair at elapsed t."""
    h_t = field_at(cfg.schedule, cfg.t0 + t)
    rot_plus = rotation_matrix(branch_direction(cfg.g, h_t, 1, t))
    rot_minus = rotation_matrix(branch_direction(cfg.g, h_t, -1, t))
    out = np.empty(len(cfg.ensemble.directions))
    for i, d in enumerate(cfg.ensemble.directions):
        n0 = d.bloch()
        dot = float((rot_plus @ n0) @ (rot_minus @ n0))
        out[i] = math.sqrt(min(1.0, max(0.0, 0.5 * (1.0 + dot))))
    return out


def branch_overlap(cfg: DiaConfig, t: float) -> float:
    """Modulus of the ring overlap between branches, prod_d cos^(2 S_d)(Theta_d/2).

    Swapping the branch labels leaves this unchanged (the two branch states
    trade places, conjugating the overlap).
    """
    cosines = _domain_half_angle_cosines(cfg, t)
    return float(np.prod(cosines ** (2.0 * cfg.partition.s_d)))


def concurrence(cfg: DiaConfig, t: float) -> float:
    """Register concurrence max{0, [prod_d cos(Theta_d/2)]^(2 S_d)} at elapsed t."""
    return max(0.0, branch_overlap(cfg, t))
