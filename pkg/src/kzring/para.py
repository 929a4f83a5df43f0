"""Closed-form register dynamics with the ring deep in the paramagnetic phase.

At constant field h well above the critical value, every ring spin starts
aligned with the field and is driven conditionally on the register parity
branch.  Each branch gamma displaces every spin by

    omega_gamma(t) = pi_gamma * l(t),      l(t) = (g/h) (1 - e^(-i t h)),

with pi_gamma in {+1, 0, 0, -1} across the register basis.  For the Bell
state only the +/- branches matter and the concurrence is the product of
single-spin overlap moduli:

    C(t) = max{0, cos^N(Theta(t)/2)},

Theta(t) the angle between the two branch directions.  The motion is
periodic with period 2*pi/h, so the concurrence revives fully there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError
from .scs import ScsDirection

__all__ = ["ParaConfig", "displacement_parameter", "branch_direction",
           "branch_overlap", "concurrence", "BRANCHES"]

BRANCHES = (1, -1)


@dataclass(frozen=True)
class ParaConfig:
    """Ring size, coupling, and constant field for the paramagnetic regime.

    The closed form is derived for weak coupling far above criticality;
    both conditions are enforced as tunable guards g <= g_max and
    g <= g_to_h_max * h (defaults 0.25 and h/4).
    """

    n: int
    g: float
    h: float
    g_max: float = 0.25
    g_to_h_max: float = 0.25

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigError(f"ring needs at least one spin, got n={self.n}")
        if self.h <= 0:
            raise ConfigError(f"field must be positive, got h={self.h}")
        if self.g < 0:
            raise ConfigError(f"coupling must be >= 0, got g={self.g}")
        if self.g > self.g_max:
            raise ConfigError(
                f"weak-coupling guard: g={self.g} exceeds g_max={self.g_max}"
            )
        if self.g > self.g_to_h_max * self.h:
            raise ConfigError(
                f"detuning guard: g={self.g} exceeds {self.g_to_h_max} * h={self.h}"
            )


def displacement_parameter(cfg: ParaConfig, t: float) -> complex:
    """Accumulated per-spin displacement l(t) = (g/h)(1 - e^(-i t h))."""
    return (cfg.g / cfg.h) * (1.0 - complex(math.cos(cfg.h * t), -math.sin(cfg.h * t)))


def _check_branch(branch: int) -> int:
    if branch not in (1, -1):
        raise ValueError(f"branch must be +1 or -1, got {branch}")
    return branch


def branch_direction(cfg: ParaConfig, branch: int, t: float) -> ScsDirection:
    """Direction of a ring spin on the given register parity branch."""
    _check_branch(branch)
    return ScsDirection.from_omega(branch * displacement_parameter(cfg, t))


def _pair_half_angle_cos(cfg: ParaConfig, t: float) -> float:
    """cos(Theta/2) for the angle Theta between the +/- branch directions."""
    dot = float(branch_direction(cfg, 1, t).bloch() @ branch_direction(cfg, -1, t).bloch())
    return math.sqrt(min(1.0, max(0.0, 0.5 * (1.0 + dot))))


def branch_overlap(cfg: ParaConfig, t: float) -> float:
    """Modulus of the ring-state overlap between the two branches, cos^N(Theta/2)."""
    return _pair_half_angle_cos(cfg, t) ** cfg.n


def concurrence(cfg: ParaConfig, t: float) -> float:
    """Register concurrence max{0, cos^N(Theta(t)/2)} for the Bell state."""
    return max(0.0, branch_overlap(cfg, t))
