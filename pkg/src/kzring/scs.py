"""Spin coherent states: directions, displacements, overlaps, Dicke expansion.

A spin-S coherent state is the displaced highest-weight state

    |Omega> = exp(Omega S- - conj(Omega) S+) |S, S>,   Omega = (theta/2) e^(i phi).

Directions on the unit sphere and displacement parameters are in one-to-one
correspondence; the displacement acts on expectation values as the SO(3)
rotation by theta about the in-plane axis (-sin phi, cos phi, 0), which maps
the north pole onto n(Omega) = (sin theta cos phi, sin theta sin phi,
cos theta).  Overlaps of two coherent states decay with the angle Theta
between their directions as cos^(2S)(Theta/2) in modulus.

The Dicke-basis expansion coefficients are binomially weighted; they are
accumulated in log space so spins in the hundreds stay finite.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import gammaln

__all__ = [
    "ScsDirection",
    "rotation_matrix",
    "apply_displacement",
    "overlap_magnitude",
    "overlap_modulus",
    "dicke_m_values",
    "dicke_coefficient",
    "dicke_vector",
    "overlap_exact",
    "ladder_matrices",
    "displacement_matrix",
    "SPIN_CAP",
]

_TWO_PI = 2.0 * math.pi

# Largest spin accepted by the Dicke-basis routines.  Log-space magnitudes
# stay finite well beyond this, but the summation loses relative accuracy
# once 2S+1 terms with alternating phases span hundreds of orders.
SPIN_CAP = 200.0


@dataclass(frozen=True)
class ScsDirection:
    """Unit-sphere direction, canonicalized to theta in [0, pi], phi in [0, 2pi).

    Out-of-range angles are folded: a negative or reflex polar angle reflects
    through the pole and shifts phi by pi, so the direction (not the raw
    angle pair) is what the instance represents.  At either pole phi is
    gauge and is pinned to 0.
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        theta = float(self.theta)
        phi = float(self.phi)
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise ValueError("direction angles must be finite")
        if theta < 0.0:
            theta, phi = -theta, phi + math.pi
        theta = theta % _TWO_PI
        if theta > math.pi:
            theta = _TWO_PI - theta
            phi = phi + math.pi
        phi = phi % _TWO_PI
        if theta == 0.0 or theta == math.pi:
            phi = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_omega(cls, omega: complex) -> "ScsDirection":
        """Direction of the displacement parameter Omega = (theta/2) e^(i phi)."""
        omega = complex(omega)
        return cls(2.0 * abs(omega), cmath.phase(omega))

    @classmethod
    def from_bloch(cls, vec) -> "ScsDirection":
        """Direction of a (not necessarily normalized) nonzero 3-vector."""
        v = np.asarray(vec, dtype=float)
        if v.shape != (3,):
            raise ValueError(f"expected a 3-vector, got shape {v.shape}")
        norm = float(np.linalg.norm(v))
        if not math.isfinite(norm) or norm == 0.0:
            raise ValueError("cannot orient a zero or non-finite vector")
        v = v / norm
        # atan2 of the transverse radius stays accurate at the poles, where
        # acos(v_z) would round small polar angles to zero
        theta = math.atan2(math.hypot(v[0], v[1]), v[2])
        return cls(theta, math.atan2(v[1], v[0]))

    @property
    def omega(self) -> complex:
        """Complex displacement parameter (theta/2) e^(i phi)."""
        return 0.5 * self.theta * complex(math.cos(self.phi), math.sin(self.phi))

    def bloch(self) -> np.ndarray:
        """Cartesian unit vector (sin t cos p, sin t sin p, cos t)."""
        st = math.sin(self.theta)
        return np.array(
            [st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)]
        )


def rotation_matrix(d: ScsDirection) -> np.ndarray:
    """SO(3) matrix of the displacement exp(Omega S- - conj(Omega) S+).

    Rodrigues rotation by theta about the in-plane axis
    u = (-sin phi, cos phi, 0); its third column is n(Omega), so the north
    pole is carried onto the direction itself.  Composition matches the
    matrix exponential acting on states (adjoint action), which the exact
    cross-check validates to near machine precision.
    """
    c, s = math.cos(d.theta), math.sin(d.theta)
    a, b = math.cos(d.phi), math.sin(d.phi)
    return np.array(
        [
            [c * a * a + b * b, -a * b * (1.0 - c), s * a],
            [-a * b * (1.0 - c), c * b * b + a * a, s * b],
            [-s * a, -s * b, c],
        ]
    )


def apply_displacement(rotor: ScsDirection, target) -> np.ndarray:
    """Rotate a Bloch vector by the displacement labelled by `rotor`."""
    v = np.asarray(target, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    out = rotation_matrix(rotor) @ v
    norm = float(np.linalg.norm(out))
    if norm == 0.0:
        raise ValueError("cannot normalize a zero vector")
    return out / norm


def _check_spin(s: float) -> int:
    """Validate a (half-)integer spin magnitude; return the integer 2S."""
    two_s = 2.0 * float(s)
    n = round(two_s)
    if n < 1 or abs(two_s - n) > 1e-9:
        raise ValueError(f"spin must be a positive multiple of 1/2, got s={s}")
    return int(n)


def overlap_magnitude(d1: ScsDirection, d2: ScsDirection, s: float) -> float:
    """Squared overlap |<Omega1|Omega2>|^2 = ((1 + n1.n2)/2)^(2S) = cos^(4S)(Theta/2)."""
    _check_spin(s)
    x = 0.5 * (1.0 + float(d1.bloch() @ d2.bloch()))
    x = min(1.0, max(0.0, x))
    return x ** (2.0 * s)


def overlap_modulus(d1: ScsDirection, d2: ScsDirection, s: float) -> float:
    """Overlap modulus |<Omega1|Omega2>| = cos^(2S)(Theta/2), the square root
    of :func:`overlap_magnitude`."""
    _check_spin(s)
    x = 0.5 * (1.0 + float(d1.bloch() @ d2.bloch()))
    x = min(1.0, max(0.0, x))
    return x**s


def dicke_m_values(s: float) -> np.ndarray:
    """Magnetic quantum numbers in descending order, S, S-1, ..., -S."""
    n = _check_spin(s)
    return float(s) - np.arange(n + 1)


def dicke_vector(d: ScsDirection, s: float, cap: float = SPIN_CAP) -> np.ndarray:
    """Dicke-basis expansion of |Omega>, ordered |S,S>, |S,S-1>, ..., |S,-S>.

    Component k (with M = S - k) is

        sqrt(C(2S, k)) cos^(2S-k)(theta/2) sin^k(theta/2) e^(i k phi),

    computed in log space.  The vector has unit norm; at theta = 0 it is the
    first basis vector.
    """
    n = _check_spin(s)
    if s > cap:
        raise ValueError(f"spin {s} above the Dicke-path cap {cap}")
    k = np.arange(n + 1)
    ln_binom = 0.5 * (gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0))
    c = math.cos(0.5 * d.theta)
    si = math.sin(0.5 * d.theta)
    ln_mag = ln_binom.copy()
    falls = (n - k) > 0
    if c > 0.0:
        ln_mag[falls] += (n - k)[falls] * math.log(c)
    else:
        ln_mag[falls] = -np.inf
    rises = k > 0
    if si > 0.0:
        ln_mag[rises] += k[rises] * math.log(si)
    else:
        ln_mag[rises] = -np.inf
    return np.exp(ln_mag) * np.exp(1j * k * d.phi)


def dicke_coefficient(d: ScsDirection, s: float, m: float) -> complex:
    """Single Dicke-basis coefficient <S, M|Omega>."""
    n = _check_spin(s)
    k = round(float(s) - float(m))
    if abs((float(s) - float(m)) - k) > 1e-9 or not (0 <= k <= n):
        raise ValueError(f"m={m} is not a magnetic number of spin s={s}")
    return complex(dicke_vector(d, s)[k])


def overlap_exact(
    d1: ScsDirection, d2: ScsDirection, s: float, cap: float = SPIN_CAP
) -> complex:
    """Full complex overlap <Omega1|Omega2> by direct Dicke-basis summation.

    Independent oracle for the closed-form overlap rules: its modulus must
    reproduce cos^(2S)(Theta/2) and its phase is physical (relative) phase.
    """
    v1 = dicke_vector(d1, s, cap=cap)
    v2 = dicke_vector(d2, s, cap=cap)
    return complex(np.vdot(v1, v2))


def ladder_matrices(s: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Dense (S+, S-, M diagonal) in the descending-M Dicke basis."""
    n = _check_spin(s)
    m = float(s) - np.arange(n + 1)
    sm = np.zeros((n + 1, n + 1))
    for k in range(n):
        sm[k + 1, k] = math.sqrt(s * (s + 1.0) - m[k] * (m[k] - 1.0))
    return sm.T.copy(), sm, m


def displacement_matrix(d: ScsDirection, s: float) -> np.ndarray:
    """Unitary exp(Omega S- - conj(Omega) S+) on the (2S+1)-dim Dicke space."""
    n = _check_spin(s)
    if n + 1 > 2001:
        raise ValueError(f"spin {s} too large for a dense displacement matrix")
    sp, sm, _ = ladder_matrices(s)
    omega = d.omega
    return scipy.linalg.expm(omega * sm - np.conj(omega) * sp)
