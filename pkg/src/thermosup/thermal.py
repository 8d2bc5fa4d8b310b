"""Gibbs states, partition functions, and purifications.

Temperatures use k_B = 1, so beta = 1/T; beta = 0 is infinite temperature
and beta = inf (T = 0) is kept as an exact marker rather than a large
float, so zero-temperature cases are reproduced exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qmath import UNITARY_ATOL, is_unitary


@dataclass(frozen=True)
class HamiltonianSpec:
    """Finite energy spectrum; only the energies enter any formula here."""

    energies: tuple[float, ...]

    def __post_init__(self):
        energies = tuple(float(e) for e in self.energies)
        object.__setattr__(self, "energies", energies)
        if len(energies) < 2:
            raise ValueError("need at least two energy levels")
        if any(not math.isfinite(e) for e in energies):
            raise ValueError("energies must be finite")
        if any(b < a for a, b in zip(energies, energies[1:])):
            raise ValueError("energies must be non-decreasing")

    @property
    def dim(self) -> int:
        return len(self.energies)

    @classmethod
    def qubit(cls, delta_e: float = 1.0) -> "HamiltonianSpec":
        return cls((0.0, float(delta_e)))

    @classmethod
    def ladder(cls, dim: int, delta_e: float = 1.0) -> "HamiltonianSpec":
        return cls(tuple(n * float(delta_e) for n in range(dim)))


@dataclass(frozen=True)
class Temperature:
    """Inverse temperature beta >= 0; beta = inf encodes T = 0 exactly."""

    beta: float

    def __post_init__(self):
        beta = float(self.beta)
        object.__setattr__(self, "beta", beta)
        if math.isnan(beta) or beta < 0.0:
            raise ValueError(f"beta must be >= 0, got {beta}")

    @classmethod
    def from_temperature(cls, t: float) -> "Temperature":
        t = float(t)
        if math.isnan(t) or t < 0.0:
            raise ValueError(f"temperature must be >= 0, got {t}")
        if t == 0.0:
            return cls(math.inf)
        if math.isinf(t):
            return cls(0.0)
        return cls(1.0 / t)

    @property
    def temperature(self) -> float:
        if self.beta == 0.0:
            return math.inf
        if math.isinf(self.beta):
            return 0.0
        return 1.0 / self.beta


@dataclass(frozen=True)
class GibbsWeights:
    """Normalized thermal weights and the ground-shifted partition function.

    ``z`` is computed from the spectrum shifted by the ground energy
    (overflow guard), so it is finite and positive for every beta
    including the zero-temperature marker.
    """

    weights: np.ndarray
    z: float


def gibbs_weights(h: HamiltonianSpec, t: Temperature) -> GibbsWeights:
    e = np.array(h.energies)
    if math.isinf(t.beta):
        # exact ground projector, uniform over a degenerate ground block
        ground = e == e[0]
        w = ground / ground.sum()
        return GibbsWeights(weights=w.astype(float), z=float(ground.sum()))
    raw = np.exp(-t.beta * (e - e[0]))
    z = float(raw.sum())
    return GibbsWeights(weights=raw / z, z=z)


def gibbs_state(h: HamiltonianSpec, t: Temperature) -> np.ndarray:
    """Thermal density matrix, diagonal in the energy basis."""
    return np.diag(gibbs_weights(h, t).weights).astype(complex)


def purify(h: HamiltonianSpec, t: Temperature) -> np.ndarray:
    """Canonical purification sum_n sqrt(c_n) |n, n> on bath (x) ancilla.

    Tracing out the ancilla recovers ``gibbs_state(h, t)``.
    """
    d = h.dim
    c = gibbs_weights(h, t).weights
    psi = np.zeros(d * d, dtype=complex)
    psi[np.arange(d) * d + np.arange(d)] = np.sqrt(c)
    return psi


@dataclass(frozen=True)
class PurificationSpec:
    """Two purification branches: temperature, global phase, and ancilla basis.

    ``basis_maps[x]`` is the unitary sending the canonical ancilla basis to
    the branch-x basis, |a(b, x)> = R_x |b>; None means the canonical
    |n, n> pairing.
    """

    temperatures: tuple[Temperature, Temperature]
    phases: tuple[float, float] = (0.0, 0.0)
    basis_maps: tuple[np.ndarray | None, np.ndarray | None] = (None, None)

    def __post_init__(self):
        for r in self.basis_maps:
            if r is not None and not is_unitary(r, UNITARY_ATOL):
                raise ValueError("ancilla basis map is not unitary within 1e-10")

    def basis_map(self, x: int, dim: int) -> np.ndarray:
        r = self.basis_maps[x]
        return np.eye(dim, dtype=complex) if r is None else np.asarray(r, dtype=complex)


def purify_general(h: HamiltonianSpec, spec: PurificationSpec, x: int) -> np.ndarray:
    """Branch-x purification sum_b e^{-i phi_x} sqrt(c_b) |b> (x) R_x|b>.

    Each single branch is normalized to 1; the 1/sqrt(2) of a two-branch
    superposition is applied where the superposition is formed.
    """
    if x not in (0, 1):
        raise ValueError(f"branch must be 0 or 1, got {x}")
    d = h.dim
    c = gibbs_weights(h, spec.temperatures[x]).weights
    r = spec.basis_map(x, d)
    if r.shape != (d, d):
        raise ValueError(f"basis map shape {r.shape} does not match dim {d}")
    phase = np.exp(-1j * spec.phases[x])
    # amplitude at (b, a) is phase * sqrt(c_b) * R[a, b], bath most significant
    return (phase * (r * np.sqrt(c)[None, :]).T).reshape(-1)


def ancilla_overlap_matrix(h: HamiltonianSpec, spec: PurificationSpec) -> np.ndarray:
    """Unitary V with V[b, b'] = <a(b', 1)|a(b, 0)> between branch bases."""
    d = h.dim
    r0 = spec.basis_map(0, d)
    r1 = spec.basis_map(1, d)
    return (r1.conj().T @ r0).T
