"""Initial domain orientations constrained by equilibrium magnetization.

Each frozen domain starts as a collective spin pointing at polar angle
theta_delta with azimuth 0 or pi (the ordered axis is x, broken two ways).
The polar cosines are drawn so that their ensemble mean reproduces the
equilibrium magnetization per spin at the preparation field: with
c0 = 2*m0 and half-width D0 = |2*md - 2*m0| (md the magnetization at the
freeze-out field), draw k-th cosine uniformly on [c_k - D_k, c_k + D_k],
recenter c_(k+1) = (n*c0 - sum so far)/(n - k - 1), shrink the width to the
distance to the nearest original endpoint, and set the last cosine
deterministically so the mean is exact.  Every draw is clamped to [-1, 1];
a clamp means the constraint was not exactly satisfiable and is reported
as a warning.

RNG streams: a sampler call derives its generator from
numpy.random.SeedSequence(seed, spawn_key=(realization,)), draws the n-1
free cosines in domain order, then draws all n azimuth bits at once.  Equal
(seed, realization) pairs therefore reproduce ensembles bit for bit.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.sparse.linalg import eigsh

from .errors import ConfigError
from .exact import magnetization_diagonal, ring_hamiltonian
from .scs import ScsDirection

__all__ = [
    "DomainEnsemble",
    "equilibrium_magnetization",
    "sample_initial_directions",
    "ensemble_mean_magnetization",
]


@dataclass(frozen=True)
class DomainEnsemble:
    """Sampled initial directions plus everything needed to replay them."""

    directions: tuple[ScsDirection, ...]
    seed: int
    m0z_target: float
    mdz_target: float
    realization: int = 0
    clamped: bool = False

    def to_json(self) -> str:
        """Serialize as a JSON document (angles as (theta, phi) pairs)."""
        return json.dumps(
            {
                "directions": [[d.theta, d.phi] for d in self.directions],
                "seed": self.seed,
                "realization": self.realization,
                "m0z_target": self.m0z_target,
                "mdz_target": self.mdz_target,
                "clamped": self.clamped,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "DomainEnsemble":
        data = json.loads(text)
        return cls(
            directions=tuple(ScsDirection(t, p) for t, p in data["directions"]),
            seed=int(data["seed"]),
            realization=int(data.get("realization", 0)),
            m0z_target=float(data["m0z_target"]),
            mdz_target=float(data["mdz_target"]),
            clamped=bool(data.get("clamped", False)),
        )


@lru_cache(maxsize=128)
def _ground_state_magnetization(h: float, n_ref: int) -> float:
    ham = ring_hamiltonian(n_ref, h)
    dim = ham.shape[0]
    if dim <= 1024:
        vals, vecs = np.linalg.eigh(ham.toarray())
        vec = vecs[:, 0]
    else:
        # Deterministic start vector keeps repeated runs bit-identical.
        start = np.full(dim, 1.0 / math.sqrt(dim))
        _, vecs = eigsh(ham, k=1, which="SA", v0=start)
        vec = vecs[:, 0]
    mz = magnetization_diagonal(n_ref)
    return float(np.real(vec.conj() @ (mz * vec))) / n_ref


def equilibrium_magnetization(h: float, n_ref: int = 14) -> float:
    """Ground-state z-magnetization per spin of the n_ref-site ring at field h.

    Exact diagonalization, so values land in [0, 1/2]: h = 0 gives 0 by the
    spin-flip symmetry of the bond term, large h saturates to 1/2.
    """
    if not (2 <= n_ref <= 16):
        raise ConfigError(f"reference ring size must be in [2, 16], got {n_ref}")
    if h < 0:
        raise ConfigError(f"field must be >= 0, got h={h}")
    return _ground_state_magnetization(float(h), int(n_ref))


def _clip_unit(x: float) -> tuple[float, bool]:
    if x > 1.0:
        return 1.0, True
    if x < -1.0:
        return -1.0, True
    return x, False


def sample_initial_directions(
    n_d: int, m0z: float, mdz: float, seed: int, realization: int = 0
) -> DomainEnsemble:
    """Draw n_d domain directions whose mean cosine is 2*m0z exactly.

    See the module docstring for the draw order and stream derivation.
    """
    if n_d < 1:
        raise ConfigError(f"need at least one domain, got n_d={n_d}")
    for name, m in (("m0z", m0z), ("mdz", mdz)):
        if abs(m) > 0.5 + 1e-12:
            raise ConfigError(f"{name}={m} outside the per-spin range [-1/2, 1/2]")
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(realization,)))

    center0 = 2.0 * m0z
    width0 = abs(2.0 * mdz - 2.0 * m0z)
    # Original support endpoints; for the physical ordering mdz >= m0z the
    # upper one is exactly 2*mdz.
    lower0 = center0 - width0
    upper0 = center0 + width0

    cosines: list[float] = []
    clamped = False
    center, width = center0, width0
    for k in range(n_d - 1):
        draw = float(rng.uniform(center - width, center + width))
        draw, did = _clip_unit(draw)
        clamped = clamped or did
        cosines.append(draw)
        remaining = n_d - k - 1
        center = (n_d * center0 - math.fsum(cosines)) / remaining
        width = min(abs(upper0 - center), abs(lower0 - center))
    last = n_d * center0 - math.fsum(cosines)
    last, did = _clip_unit(last)
    clamped = clamped or did
    cosines.append(last)
    if clamped:
        warnings.warn(
            "magnetization constraint not exactly satisfiable; "
            "cosines clamped to [-1, 1]",
            stacklevel=2,
        )

    bits = rng.integers(0, 2, size=n_d)
    directions = tuple(
        ScsDirection(math.acos(min(1.0, max(-1.0, c))), math.pi * float(b))
        for c, b in zip(cosines, bits)
    )
    return DomainEnsemble(
        directions=directions,
        seed=int(seed),
        realization=int(realization),
        m0z_target=float(m0z),
        mdz_target=float(mdz),
        clamped=clamped,
    )


def ensemble_mean_magnetization(ensemble: DomainEnsemble) -> float:
    """Per-spin z-magnetization of the ensemble, mean(cos theta)/2."""
    return float(np.mean([math.cos(d.theta) for d in ensemble.directions])) / 2.0
