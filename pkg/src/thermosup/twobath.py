"""Quantum-controlled thermalisation with two baths.

A probe interacts with one of two thermal baths depending on the state of
a two-level control prepared in |+>. Measuring the control along
|phi> = (|0> + e^{i phi} |1>)/sqrt(2) leaves the unnormalized conditional
probe state

    rho_S(phi) = (1/4) (rho_b0 + rho_b1 + e^{i phi} C + e^{-i phi} C^dag),
    C = rho_b0 u0 rho_S u1^dag rho_b1,

whose trace is the detection probability P(phi) = 1/2 + (V/2) cos(phi + psi).
The global factor order is (bath0, bath1, control, probe); u0, u1 are the
unitaries parametrizing the Kraus-representation freedom of each channel,
realized physically as bath rotations after the swap interaction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channels import swap_thermalizer
from .qmath import (
    UNITARY_ATOL,
    check_density_matrix,
    condition_on_factor,
    embed_operator,
    is_unitary,
    partial_trace,
    random_unitary,
)
from .thermal import HamiltonianSpec, Temperature, gibbs_state, gibbs_weights, purify

# below this visibility the interference phase is undefined; report 0
PHASE_CUTOFF = 1e-12


class VisibilityResult(NamedTuple):
    """Interference contrast in [0, 1] and phase offset in (-pi, pi]."""

    visibility: float
    phase: float


def _wrap_phase(psi: float) -> float:
    psi = math.remainder(psi, 2.0 * math.pi)
    psi = psi if psi > -math.pi else psi + 2.0 * math.pi
    return psi + 0.0  # clears IEEE negative zero


def _result(cross_trace: complex) -> VisibilityResult:
    v = abs(cross_trace)
    if v < PHASE_CUTOFF:
        return VisibilityResult(v, 0.0)
    return VisibilityResult(v, _wrap_phase(float(np.angle(cross_trace))))


@dataclass(frozen=True)
class TwoBathConfig:
    """Shared spectrum, bath temperatures, probe state, and control phase.

    ``u0``/``u1`` select the Kraus representation of each thermalising
    channel (identity when None). ``v``/``w`` are unitaries on an enlarged
    bath-ancilla space of dimension ``enlarged_dim`` realizing general
    isometric dilations; the original d^2-dimensional space is embedded in
    the first components.
    """

    h: HamiltonianSpec
    t0: Temperature
    t1: Temperature
    rho_s: np.ndarray
    phi: float = 0.0
    u0: np.ndarray | None = None
    u1: np.ndarray | None = None
    v: np.ndarray | None = None
    w: np.ndarray | None = None
    enlarged_dim: int | None = None

    def __post_init__(self):
        d = self.h.dim
        rho = check_density_matrix(self.rho_s)
        if rho.shape != (d, d):
            raise ValueError(f"probe dim {rho.shape[0]} does not match spectrum dim {d}")
        for u in (self.u0, self.u1):
            if u is not None:
                u = np.asarray(u)
                if u.shape != (d, d) or not is_unitary(u, UNITARY_ATOL):
                    raise ValueError("representation unitary is invalid")
        if (self.v is None) != (self.w is None):
            raise ValueError("v and w must be supplied together")
        if self.v is not None and (self.u0 is not None or self.u1 is not None):
            raise ValueError("supply either representation unitaries or a dilation, not both")
        if self.v is not None:
            dd = self.enlarged_dim if self.enlarged_dim is not None else d * d
            if dd < d * d:
                raise ValueError(f"enlarged dim {dd} smaller than bath-ancilla dim {d * d}")
            for m in (self.v, self.w):
                m = np.asarray(m)
                if m.shape != (dd, dd) or not is_unitary(m, UNITARY_ATOL):
                    raise ValueError("dilation unitary is invalid on the enlarged space")

    def rep_unitary(self, i: int) -> np.ndarray:
        u = (self.u0, self.u1)[i]
        return np.eye(self.h.dim, dtype=complex) if u is None else np.asarray(u, dtype=complex)


def _pair_unitary(cfg: TwoBathConfig, i: int) -> np.ndarray:
    # bath rotation after the swap; (bath, probe) factor ordering
    d = cfg.h.dim
    swap = swap_thermalizer(d)  # symmetric under factor exchange
    return np.kron(cfg.rep_unitary(i), np.eye(d)) @ swap


def controlled_interaction(u0_bs: np.ndarray, u1_bs: np.ndarray, d: int) -> np.ndarray:
    """Control-selected interaction on (bath0, bath1, control, probe).

    ``ui_bs`` acts on (bath_i, probe); each fires in its own control branch,
    so the result is block diagonal in the control basis.
    """
    dims = (d, d, 2, d)
    for u in (u0_bs, u1_bs):
        if np.asarray(u).shape != (d * d, d * d):
            raise ValueError(f"interaction shape {np.asarray(u).shape} does not match dim {d}")
    p0 = np.diag([1.0, 0.0])
    p1 = np.diag([0.0, 1.0])
    term0 = embed_operator(u0_bs, dims, (0, 3)) @ embed_operator(p0, dims, (2,))
    term1 = embed_operator(u1_bs, dims, (1, 3)) @ embed_operator(p1, dims, (2,))
    return term0 + term1


def controlled_unitary(cfg: TwoBathConfig) -> np.ndarray:
    """Global unitary on (bath0, bath1, control, probe), block diagonal in the control.

    Covers the representation-unitary family; dilations enter only through
    the analytic cross-term route.
    """
    if cfg.v is not None:
        raise ValueError("global simulation supports representation unitaries only")
    return controlled_interaction(_pair_unitary(cfg, 0), _pair_unitary(cfg, 1), cfg.h.dim)


def _control_ket(phi: float) -> np.ndarray:
    return np.array([1.0, np.exp(1j * phi)]) / np.sqrt(2.0)


def _cross_operator(cfg: TwoBathConfig) -> np.ndarray:
    """Coefficient of e^{i phi} in the conditional state."""
    g0 = gibbs_state(cfg.h, cfg.t0)
    g1 = gibbs_state(cfg.h, cfg.t1)
    if cfg.v is not None:
        t0, t1 = _dilated_cross_kraus(cfg)
        return t0 @ cfg.rho_s @ t1.conj().T
    return g0 @ cfg.rep_unitary(0) @ cfg.rho_s @ cfg.rep_unitary(1).conj().T @ g1


def conditional_probe_state(cfg: TwoBathConfig) -> np.ndarray:
    """Unnormalized probe state after detecting the control along |phi>."""
    g0 = gibbs_state(cfg.h, cfg.t0)
    g1 = gibbs_state(cfg.h, cfg.t1)
    c = _cross_operator(cfg)
    return 0.25 * (g0 + g1 + np.exp(1j * cfg.phi) * c + np.exp(-1j * cfg.phi) * c.conj().T)


def conditional_probe_state_global(cfg: TwoBathConfig) -> np.ndarray:
    """Brute-force route: conjugate the full state and project the control."""
    d = cfg.h.dim
    dims = (d, d, 2, d)
    plus = np.full((2, 2), 0.5, dtype=complex)
    rho = np.kron(np.kron(gibbs_state(cfg.h, cfg.t0), gibbs_state(cfg.h, cfg.t1)), np.kron(plus, cfg.rho_s))
    u = controlled_unitary(cfg)
    out = u @ rho @ u.conj().T
    cond = condition_on_factor(out, dims, 2, _control_ket(cfg.phi))
    return partial_trace(cond, (d, d, d), (2,))


def _dilated_cross_kraus(cfg: TwoBathConfig) -> tuple[np.ndarray, np.ndarray]:
    """Cross-term operators T'^i from the dilation unitaries v, w.

    T'^i = (<psi_i| iota^dag v^dag (x) I) (w iota (x) I) (I_A (x) U_swap) (|psi_i> (x) I)
    with iota the embedding of the d^2-dimensional bath-ancilla space into
    the enlarged one.
    """
    d = cfg.h.dim
    dd = cfg.enlarged_dim if cfg.enlarged_dim is not None else d * d
    iota = np.zeros((dd, d * d), dtype=complex)
    iota[: d * d, :] = np.eye(d * d)
    w_emb = np.asarray(cfg.w, dtype=complex) @ iota
    v_emb = np.asarray(cfg.v, dtype=complex) @ iota
    swap_bs = swap_thermalizer(d)
    lift = np.kron(w_emb, np.eye(d)) @ np.kron(np.eye(d), swap_bs)
    out = []
    for t in (cfg.t0, cfg.t1):
        psi = purify(cfg.h, t)  # symmetric in its two factors
        m = lift @ np.kron(psi.reshape(-1, 1), np.eye(d))
        bra = (v_emb @ psi).conj()
        out.append(np.kron(bra.reshape(1, -1), np.eye(d)) @ m)
    return out[0], out[1]


def conditional_probe_state_dilated(cfg: TwoBathConfig) -> np.ndarray:
    """Conditional state for the dilated Kraus representation given by v, w."""
    if cfg.v is None:
        raise ValueError("config carries no dilation unitaries")
    return conditional_probe_state(cfg)


def normalized_state(rho: np.ndarray) -> np.ndarray:
    """Conditional state rescaled to unit trace."""
    tr = np.trace(rho).real
    if tr <= 0.0:
        raise ValueError("cannot normalize a state with non-positive trace")
    return rho / tr


def visibility(cfg: TwoBathConfig) -> VisibilityResult:
    """Interference contrast and phase: P(phi) = 1/2 + (V/2) cos(phi + psi)."""
    return _result(complex(np.trace(_cross_operator(cfg))))


def visibility_from_control(cfg: TwoBathConfig) -> VisibilityResult:
    """Simulation route: twice the control's off-diagonal after the interaction."""
    d = cfg.h.dim
    dims = (d, d, 2, d)
    plus = np.full((2, 2), 0.5, dtype=complex)
    rho = np.kron(np.kron(gibbs_state(cfg.h, cfg.t0), gibbs_state(cfg.h, cfg.t1)), np.kron(plus, cfg.rho_s))
    u = controlled_unitary(cfg)
    rho_c = partial_trace(u @ rho @ u.conj().T, dims, (2,))
    return _result(2.0 * complex(rho_c[0, 1]))


def max_visibility_closed_form(
    h: HamiltonianSpec, t0: Temperature, t1: Temperature, rho_s: np.ndarray
) -> float:
    """Largest visibility over representation unitaries, sum_s p_s c_s^0 c_s^1.

    The probe eigenvalues p_s are sorted decreasingly, pairing the largest
    population with the ground state where the thermal weights peak.
    """
    rho_s = check_density_matrix(rho_s)
    p = np.sort(np.linalg.eigvalsh(rho_s))[::-1]
    c0 = gibbs_weights(h, t0).weights
    c1 = gibbs_weights(h, t1).weights
    return float(np.sum(np.clip(p, 0.0, None) * c0 * c1))


def optimal_representation_unitaries(
    h: HamiltonianSpec, rho_s: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Constructive maximizer: rotate the probe eigenbasis onto the energy basis.

    Eigenvectors are ordered by decreasing population so that with both
    branches using the same rotation the closed-form maximum is attained.
    """
    rho_s = check_density_matrix(rho_s)
    p, vecs = np.linalg.eigh(rho_s)
    order = np.argsort(p)[::-1]
    u = vecs[:, order].conj().T  # maps s-th eigenvector to |s>
    return u, u.copy()


def zero_visibility_unitaries(
    h: HamiltonianSpec, rho_s: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Representation pair giving exactly zero contrast at any temperatures.

    u0 maps each probe eigenvector to an energy eigenstate and u1 adds a
    cyclic shift, so the cross-term is purely off-diagonal and traceless.
    """
    d = h.dim
    u0, _ = optimal_representation_unitaries(h, rho_s)
    shift = np.zeros((d, d), dtype=complex)
    shift[(np.arange(d) + 1) % d, np.arange(d)] = 1.0
    return u0, shift @ u0


def _haar_pair_visibility(g0, g1, rho_s, u0, u1) -> float:
    return abs(np.trace(g0 @ u0 @ rho_s @ u1.conj().T @ g1))


def max_visibility_search(
    h: HamiltonianSpec,
    t0: Temperature,
    t1: Temperature,
    rho_s: np.ndarray,
    trials: int,
    seed: int = 0,
) -> float:
    """Stochastic maximization of the visibility over unitary pairs.

    Haar-samples ``trials`` pairs and then refines the best one by
    multiplicative perturbations with a shrinking step. Serves as a
    numeric check of the closed form.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rho_s = check_density_matrix(rho_s)
    d = h.dim
    g0 = gibbs_state(h, t0)
    g1 = gibbs_state(h, t1)
    rng = np.random.default_rng(seed)

    best_v = -1.0
    best = (np.eye(d, dtype=complex), np.eye(d, dtype=complex))
    for _ in range(trials):
        u0 = random_unitary(d, rng)
        u1 = random_unitary(d, rng)
        v = _haar_pair_visibility(g0, g1, rho_s, u0, u1)
        if v > best_v:
            best_v, best = v, (u0, u1)

    def perturbation(step: float) -> np.ndarray:
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        herm = (a + a.conj().T) / 2.0
        w, vecs = np.linalg.eigh(herm)
        return (vecs * np.exp(1j * step * w)) @ vecs.conj().T

    u0, u1 = best
    step = 0.5
    while step > 1e-6:
        for _ in range(60):
            c0 = u0 @ perturbation(step)
            c1 = u1 @ perturbation(step)
            v = _haar_pair_visibility(g0, g1, rho_s, c0, c1)
            if v > best_v:
                best_v, u0, u1 = v, c0, c1
        step *= 0.5
    return float(best_v)
