"""A single bath in a superposition of purifications.

The bath-ancilla pair is prepared in a control-entangled superposition of
two purifications (temperatures beta_0, beta_1, phases phi_0, phi_1,
possibly different ancilla bases). The probe then swaps with the bath
while branch-dependent unitaries u^x act jointly on ancilla (x) bath, and
the control is detected along |phi_C>. The interference depends on the
combined phase phi_tilde = phi_0 - phi_1 - phi_C, with probability
P(phi) = 1/2 + (V/2) cos(phi_tilde + psi).

Global simulations order the factors (ancilla, bath, control, probe);
``superposed_purification`` alone returns (bath, ancilla, control).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import swap_thermalizer
from .qmath import (
    UNITARY_ATOL,
    check_density_matrix,
    condition_on_factor,
    embed_operator,
    is_unitary,
    partial_trace,
)
from .thermal import (
    HamiltonianSpec,
    PurificationSpec,
    ancilla_overlap_matrix,
    gibbs_state,
    gibbs_weights,
    purify_general,
)
from .twobath import VisibilityResult, _result


@dataclass(frozen=True)
class OneBathConfig:
    """Purification branches, control phase, probe state, and local unitaries.

    ``u0``/``u1`` act on ancilla (x) bath (dimension d^2) and default to
    the identity; they realize the Kraus freedom of the interaction and
    may entangle ancilla and bath.
    """

    h: HamiltonianSpec
    purification: PurificationSpec
    rho_s: np.ndarray
    phi_c: float = 0.0
    u0: np.ndarray | None = None
    u1: np.ndarray | None = None

    def __post_init__(self):
        d = self.h.dim
        rho = check_density_matrix(self.rho_s)
        if rho.shape != (d, d):
            raise ValueError(f"probe dim {rho.shape[0]} does not match spectrum dim {d}")
        for u in (self.u0, self.u1):
            if u is not None:
                u = np.asarray(u)
                if u.shape != (d * d, d * d) or not is_unitary(u, UNITARY_ATOL):
                    raise ValueError("local unitary must be unitary on ancilla (x) bath")
        for r in self.purification.basis_maps:
            if r is not None and np.asarray(r).shape != (d, d):
                raise ValueError("ancilla basis map does not match the spectrum dim")

    @property
    def phi_tilde(self) -> float:
        p = self.purification.phases
        return p[0] - p[1] - self.phi_c

    def local_unitary(self, x: int) -> np.ndarray:
        u = (self.u0, self.u1)[x]
        d = self.h.dim
        return np.eye(d * d, dtype=complex) if u is None else np.asarray(u, dtype=complex)


def superposed_purification(cfg: OneBathConfig) -> np.ndarray:
    """Normalized state (1/sqrt 2) sum_x |theta^{beta_x}(x)> |x>_C.

    Factor order (bath, ancilla, control); each branch reduces the bath to
    its own Gibbs state.
    """
    d = cfg.h.dim
    psi = np.zeros(d * d * 2, dtype=complex)
    for x in (0, 1):
        branch = purify_general(cfg.h, cfg.purification, x)  # (bath, ancilla)
        psi += np.kron(branch, np.eye(2, dtype=complex)[:, x]) / np.sqrt(2.0)
    return psi


def _purification_abc(cfg: OneBathConfig) -> np.ndarray:
    # same state in the (ancilla, bath, control) order used by the simulations
    d = cfg.h.dim
    return superposed_purification(cfg).reshape(d, d, 2).transpose(1, 0, 2).reshape(-1)


def conditional_bath_state(cfg: OneBathConfig) -> np.ndarray:
    """Unnormalized bath state after detecting the control, before the probe.

    (1/4) [rho_b0 + rho_b1 + (e^{-i phi_tilde} sum sqrt(c_b c_b') V_{bb'} |b><b'| + h.c.)]
    """
    g0 = gibbs_state(cfg.h, cfg.purification.temperatures[0])
    g1 = gibbs_state(cfg.h, cfg.purification.temperatures[1])
    c0 = gibbs_weights(cfg.h, cfg.purification.temperatures[0]).weights
    c1 = gibbs_weights(cfg.h, cfg.purification.temperatures[1]).weights
    v01 = ancilla_overlap_matrix(cfg.h, cfg.purification)
    k = np.sqrt(np.outer(c0, c1)) * v01
    cross = np.exp(-1j * cfg.phi_tilde) * k
    return 0.25 * (g0 + g1 + cross + cross.conj().T)


def conditional_bath_state_global(cfg: OneBathConfig) -> np.ndarray:
    """Oracle route: project the control on the purified state directly."""
    d = cfg.h.dim
    psi = superposed_purification(cfg)
    rho = np.outer(psi, psi.conj())
    ket = np.array([1.0, np.exp(1j * cfg.phi_c)]) / np.sqrt(2.0)
    cond = condition_on_factor(rho, (d, d, 2), 2, ket)
    return partial_trace(cond, (d, d), (0,))


def interaction_unitary(cfg: OneBathConfig) -> np.ndarray:
    """Control-selected interaction on (ancilla, bath, control, probe).

    Each control branch applies the bath-probe swap followed by the
    branch's local unitary on ancilla (x) bath.
    """
    d = cfg.h.dim
    dims = (d, d, 2, d)
    swap = swap_thermalizer(d)
    total = np.zeros((2 * d**3, 2 * d**3), dtype=complex)
    for x in (0, 1):
        op = np.kron(cfg.local_unitary(x), np.eye(d)) @ np.kron(np.eye(d), swap)
        proj = np.zeros((2, 2))
        proj[x, x] = 1.0
        total += embed_operator(op, dims, (0, 1, 3)) @ embed_operator(proj, dims, (2,))
    return total


def probe_output(cfg: OneBathConfig) -> np.ndarray:
    """Unnormalized probe state after the interaction and control detection.

    Computed by global simulation, which fixes the meaning of the local
    unitaries unambiguously; the closed form is ``probe_output_analytic``.
    """
    d = cfg.h.dim
    dims = (d, d, 2, d)
    psi = _purification_abc(cfg)
    rho = np.kron(np.outer(psi, psi.conj()), cfg.rho_s)
    u = interaction_unitary(cfg)
    out = u @ rho @ u.conj().T
    ket = np.array([1.0, np.exp(1j * cfg.phi_c)]) / np.sqrt(2.0)
    cond = condition_on_factor(out, dims, 2, ket)
    return partial_trace(cond, (d, d, d), (2,))


def overlap_matrix_w(cfg: OneBathConfig) -> np.ndarray:
    """Which-way overlap matrix W entering the probe cross-term.

    W[b, b'] = <a(b',1)| Tr_2{ u1^dag u0 (I (x) rho_S) } |a(b,0)>, the
    trace taken over the second (bath) slot that carries the probe state
    after the swap. Every entry has modulus at most 1.
    """
    d = cfg.h.dim
    m = (cfg.local_unitary(1).conj().T @ cfg.local_unitary(0)).reshape(d, d, d, d)
    dmat = np.einsum("ibjc,cb->ij", m, cfg.rho_s)
    r0 = cfg.purification.basis_map(0, d)
    r1 = cfg.purification.basis_map(1, d)
    return (r1.conj().T @ dmat @ r0).T


def probe_output_analytic(cfg: OneBathConfig) -> np.ndarray:
    """Closed form of the probe output.

    (1/4) [rho_b0 + rho_b1 + (e^{-i phi_tilde} sum sqrt(c_b c_b') W_{bb'} |b><b'| + h.c.)]
    """
    g0 = gibbs_state(cfg.h, cfg.purification.temperatures[0])
    g1 = gibbs_state(cfg.h, cfg.purification.temperatures[1])
    c0 = gibbs_weights(cfg.h, cfg.purification.temperatures[0]).weights
    c1 = gibbs_weights(cfg.h, cfg.purification.temperatures[1]).weights
    k = np.sqrt(np.outer(c0, c1)) * overlap_matrix_w(cfg)
    cross = np.exp(-1j * cfg.phi_tilde) * k
    return 0.25 * (g0 + g1 + cross + cross.conj().T)


def visibility_onebath(cfg: OneBathConfig) -> VisibilityResult:
    """Contrast and phase of P(phi) = 1/2 + (V/2) cos(phi_tilde + psi)."""
    c0 = gibbs_weights(cfg.h, cfg.purification.temperatures[0]).weights
    c1 = gibbs_weights(cfg.h, cfg.purification.temperatures[1]).weights
    tau = complex(np.sum(np.sqrt(c0 * c1) * np.diagonal(overlap_matrix_w(cfg))))
    # tau multiplies e^{-i phi_tilde}, so the cosine offset is -arg(tau)
    return _result(tau.conjugate())


def visibility_onebath_from_control(cfg: OneBathConfig) -> VisibilityResult:
    """Simulation route: twice the control's off-diagonal after the interaction.

    The phase is reported in the same phi_tilde convention as
    ``visibility_onebath``.
    """
    d = cfg.h.dim
    dims = (d, d, 2, d)
    psi = _purification_abc(cfg)
    rho = np.kron(np.outer(psi, psi.conj()), cfg.rho_s)
    u = interaction_unitary(cfg)
    rho_c = partial_trace(u @ rho @ u.conj().T, dims, (2,))
    # <phi|rho_C|phi> pairs rho_C[0,1] with e^{i phi_C}; rewrite in phi_tilde
    phases = cfg.purification.phases
    tau = 2.0 * complex(rho_c[0, 1]) * np.exp(1j * (phases[0] - phases[1]))
    return _result(tau.conjugate())


def max_visibility_onebath(h: HamiltonianSpec, t0, t1) -> float:
    """Largest contrast over local unitaries, sum_b sqrt(c_b^0 c_b^1).

    Equals the fidelity of the two Gibbs states and reaches 1 exactly when
    the temperatures coincide.
    """
    c0 = gibbs_weights(h, t0).weights
    c1 = gibbs_weights(h, t1).weights
    return float(np.sum(np.sqrt(c0 * c1)))
