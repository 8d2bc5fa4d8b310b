"""Thermalising unitaries, Kraus extraction, and representation freedom.

Two-factor probe-bath unitaries act on probe (x) bath with the probe the
most significant factor. Kraus operators are stored in weighted form,
sqrt(c_l) <k|U|l> taken in the eigenbasis of the bath state, so
completeness is checkable without carrying the bath state alongside.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qmath import UNITARY_ATOL, check_density_matrix, is_unitary

# operators with Frobenius norm below this are dropped from a representation
ZERO_KRAUS_NORM = 1e-14
COMPLETENESS_ATOL = 1e-10


@dataclass(frozen=True)
class KrausSet:
    """Weighted Kraus operators with their (k, l) bath in/out labels."""

    operators: tuple[np.ndarray, ...]
    labels: tuple[tuple[int, int], ...]
    index_dim: int  # range of the k (and l) bath index

    def __post_init__(self):
        if len(self.operators) != len(self.labels):
            raise ValueError("operators and labels differ in length")
        if not self.operators:
            raise ValueError("empty Kraus set")

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def completeness_defect(self) -> float:
        s = sum(k.conj().T @ k for k in self.operators)
        return float(np.max(np.abs(s - np.eye(self.dim))))

    def is_complete(self, atol: float = COMPLETENESS_ATOL) -> bool:
        return self.completeness_defect() < atol


def _pruned(ops: dict[tuple[int, int], np.ndarray], index_dim: int) -> KrausSet:
    kept_ops, kept_labels = [], []
    for label in sorted(ops):
        op = ops[label]
        if np.linalg.norm(op) >= ZERO_KRAUS_NORM:
            kept_ops.append(op)
            kept_labels.append(label)
    return KrausSet(tuple(kept_ops), tuple(kept_labels), index_dim)


def swap_thermalizer(d: int) -> np.ndarray:
    """Swap unitary on probe (x) bath; thermalises the probe in one use."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    u = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            u[j * d + i, i * d + j] = 1.0
    return u


def kraus_from_unitary(u: np.ndarray, bath_state: np.ndarray) -> KrausSet:
    """Weighted Kraus operators sqrt(c_l) <k|U|l> of the induced channel.

    The bath state is diagonalized internally; k, l label its eigenbasis.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, UNITARY_ATOL):
        raise ValueError("interaction is not unitary within 1e-10")
    bath_state = check_density_matrix(bath_state)
    db = bath_state.shape[0]
    if u.shape[0] % db != 0:
        raise ValueError(f"unitary dim {u.shape[0]} not divisible by bath dim {db}")
    ds = u.shape[0] // db
    if np.max(np.abs(bath_state - np.diag(np.diagonal(bath_state)))) < 1e-14:
        # already diagonal: keep the given basis order for the labels
        c = np.diagonal(bath_state).real
        ub = u
    else:
        c, v = np.linalg.eigh(bath_state)
        # rotate the bath factor into the eigenbasis of its state
        ub = np.kron(np.eye(ds), v.conj().T) @ u @ np.kron(np.eye(ds), v)
    blocks = ub.reshape(ds, db, ds, db)
    ops = {}
    for k in range(db):
        for l in range(db):
            ops[(k, l)] = np.sqrt(max(c[l], 0.0)) * blocks[:, k, :, l]
    return _pruned(ops, db)


def apply_kraus(ks: KrausSet, rho: np.ndarray) -> np.ndarray:
    """Channel action sum_j K_j rho K_j^dag; requires a complete set."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ks.dim, ks.dim):
        raise ValueError(f"state shape {rho.shape} does not match Kraus dim {ks.dim}")
    if not ks.is_complete():
        raise ValueError(
            f"Kraus set violates completeness, defect {ks.completeness_defect():.3e}"
        )
    out = np.zeros_like(rho)
    for k in ks.operators:
        out += k @ rho @ k.conj().T
    return out


def transform_representation(ks: KrausSet, u: np.ndarray) -> KrausSet:
    """Equivalent representation K'_{kl} = sum_s u_{ks} K_{sl}.

    The channel is unchanged; quantum-controlled cross-terms built from
    the same operators are not.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (ks.index_dim, ks.index_dim):
        raise ValueError(f"unitary shape {u.shape} does not match index dim {ks.index_dim}")
    if not is_unitary(u, UNITARY_ATOL):
        raise ValueError("representation transform is not unitary within 1e-10")
    by_label = {label: op for label, op in zip(ks.labels, ks.operators)}
    d = ks.dim
    ops = {}
    for l in set(l for _, l in ks.labels):
        for k in range(ks.index_dim):
            new = np.zeros((d, d), dtype=complex)
            for s in range(ks.index_dim):
                old = by_label.get((s, l))
                if old is not None:
                    new += u[k, s] * old
            ops[(k, l)] = new
    return _pruned(ops, ks.index_dim)


def gadc_unitary(eta: float) -> np.ndarray:
    """Partial-thermalisation unitary on probe-qubit (x) bath-qubit.

    eta is the interaction strength; eta = 1 exchanges the excitation in
    one collision and fully thermalises the probe.
    """
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    s, c = np.sqrt(eta), np.sqrt(1.0 - eta)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, c, s, 0.0],
            [0.0, -s, c, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def gadc_on_purified(eta: float) -> np.ndarray:
    """The same interaction on probe (x) bath-qubit (x) purification ancilla."""
    return np.kron(gadc_unitary(eta), np.eye(2))
