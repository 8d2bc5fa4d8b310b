"""Collisional partial thermalisation with purified bath subsystems.

A qubit probe collides once with each of M fresh purified bath qubits
through the partial-swap interaction of strength eta. Control branches are
propagated as pure statevectors over (own bath subsystems (x) probe); the
factor a branch never touches stays in its initial product state, and the
cross-branch overlap factorizes over those untouched factors.

Above M = 6 an exact compaction replaces the dense vectors: each used
subsystem is contracted into an accumulated overlap factor right after its
collision, which is valid because later collisions act as the identity on
it. The dense and compact routes agree to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import reduce

import numpy as np

from .channels import gadc_unitary
from .qmath import check_state_vector, embed_operator, partial_trace, trace_distance
from .thermal import HamiltonianSpec, Temperature, gibbs_state, purify
from .twobath import VisibilityResult, _result

DEFAULT_MAX_AMPLITUDES = 4_194_304
COMPACT_ABOVE = 6  # collisions beyond which the dense vectors are not built

_SCENARIOS = ("plain", "twobath", "onebath")


class MemoryBudgetError(RuntimeError):
    """The requested dense simulation exceeds the statevector budget."""


class ThresholdNotReachedError(RuntimeError):
    """The probe never came within the requested distance of the target."""


@dataclass(frozen=True)
class CollisionConfig:
    """Interaction strength, collision count, temperatures, and probe.

    The probe and every bath subsystem are qubits with level spacing
    ``delta_e``; the probe starts in the pure state ``probe`` (ground
    state when None). ``t1`` defaults to ``t0``.
    """

    eta: float
    m: int
    t0: Temperature
    t1: Temperature | None = None
    probe: np.ndarray | None = None
    threshold: float = 1e-3
    scenario: str = "plain"
    delta_e: float = 1.0

    def __post_init__(self):
        if not 0.0 <= float(self.eta) <= 1.0:
            raise ValueError(f"eta must be in [0, 1], got {self.eta}")
        if int(self.m) < 1:
            raise ValueError(f"need at least one collision, got m={self.m}")
        if float(self.threshold) <= 0.0:
            raise ValueError(f"threshold must be positive, got {self.threshold}")
        if self.scenario not in _SCENARIOS:
            raise ValueError(f"scenario must be one of {_SCENARIOS}, got {self.scenario!r}")
        if self.probe is not None:
            psi = check_state_vector(self.probe)
            if psi.shape[0] != 2:
                raise ValueError("probe must be a qubit state")

    @property
    def hamiltonian(self) -> HamiltonianSpec:
        return HamiltonianSpec.qubit(self.delta_e)

    @property
    def t1_resolved(self) -> Temperature:
        return self.t0 if self.t1 is None else self.t1

    def probe_vector(self) -> np.ndarray:
        if self.probe is None:
            return np.array([1.0, 0.0], dtype=complex)
        return np.asarray(self.probe, dtype=complex)


@dataclass(frozen=True)
class CollisionTrace:
    """Per-collision records; the unused metric is None for a scenario."""

    collisions: np.ndarray
    trace_distance: np.ndarray | None = None
    visibility: np.ndarray | None = None


@dataclass(frozen=True)
class GridSpec:
    """Temperature grid for the heat maps, tmin..tmax per axis."""

    t_min: float = 0.1
    t_max: float = 5.0
    points: int = 25

    def __post_init__(self):
        if self.points < 1 or self.t_min <= 0.0 or self.t_max < self.t_min:
            raise ValueError(f"invalid grid {self}")

    def values(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.points)


@dataclass(frozen=True)
class HeatmapResult:
    """Visibility over a (T0, T1) grid; values[i, j] belongs to (t[i], t[j])."""

    temperatures: np.ndarray
    values: np.ndarray
    scenario: str
    eta: float
    m: int

    def iter_rows(self):
        for i, t0 in enumerate(self.temperatures):
            for j, t1 in enumerate(self.temperatures):
                yield float(t0), float(t1), float(self.values[i, j])


def _collision_unitary(eta: float) -> np.ndarray:
    # interaction in (bath, probe) order; gadc_unitary is (probe, bath)
    u = gadc_unitary(eta).reshape(2, 2, 2, 2)
    return u.transpose(1, 0, 3, 2).reshape(4, 4)


def _theta(t: Temperature, delta_e: float) -> np.ndarray:
    return purify(HamiltonianSpec.qubit(delta_e), t)


def _require_amplitudes(needed: int, max_amplitudes: int | None):
    cap = DEFAULT_MAX_AMPLITUDES if max_amplitudes is None else int(max_amplitudes)
    if needed > cap:
        raise MemoryBudgetError(
            f"simulation needs {needed} amplitudes, budget is {cap}"
        )


def _use_dense(m: int, engine: str, max_amplitudes: int | None) -> bool:
    if engine not in ("auto", "dense", "compact"):
        raise ValueError(f"unknown engine {engine!r}")
    if engine == "compact":
        return False
    if engine == "dense":
        _require_amplitudes(2 * 4**m, max_amplitudes)
        return True
    return m <= COMPACT_ABOVE and 2 * 4**m <= (
        DEFAULT_MAX_AMPLITUDES if max_amplitudes is None else int(max_amplitudes)
    )


def _apply_collision(vec: np.ndarray, m: int, r: int, u4: np.ndarray) -> np.ndarray:
    # qubit axes (b1, a1, ..., bM, aM, probe); u4 acts on (b_r, probe)
    pre = 4 ** (r - 1)
    mid = 2 ** (2 * (m - r) + 1)
    t = vec.reshape(pre, 2, mid, 2)
    return np.einsum("BPbp,abcp->aBcP", u4.reshape(2, 2, 2, 2), t).reshape(-1)


def _probe_density(vec: np.ndarray) -> np.ndarray:
    a = vec.reshape(-1, 2)
    return a.T @ a.conj()


def _initial_branch(theta: np.ndarray, m: int, probe: np.ndarray) -> np.ndarray:
    return reduce(np.kron, [theta] * m + [probe])


def _contract_reference(vec: np.ndarray, theta_ref: np.ndarray, m: int) -> np.ndarray:
    ref = reduce(np.kron, [theta_ref] * m)
    return ref.conj() @ vec.reshape(4**m, 2)


def _step_probe_vector(w: np.ndarray, theta: np.ndarray, u4: np.ndarray) -> np.ndarray:
    # <theta| U (|theta> (x) w): one collision folded into the overlap factor
    t = np.kron(theta, w).reshape(2, 2, 2)
    t = np.einsum("BPbp,bap->BaP", u4.reshape(2, 2, 2, 2), t)
    return np.einsum("ba,bap->p", theta.conj().reshape(2, 2), t)


def _interaction_on_subsystem(eta: float) -> np.ndarray:
    # (bath, ancilla, probe) order, identity on the purification ancilla
    return embed_operator(_collision_unitary(eta), (2, 2, 2), (0, 2))


def _step_density(rho: np.ndarray, theta: np.ndarray, u8: np.ndarray) -> np.ndarray:
    x = np.kron(np.outer(theta, theta.conj()), rho)
    return partial_trace(u8 @ x @ u8.conj().T, (4, 2), (1,))


def _step_cross_operator(omega: np.ndarray, theta0, theta1, u8) -> np.ndarray:
    x = np.kron(np.outer(theta0, theta1.conj()), omega)
    return partial_trace(u8 @ x @ u8.conj().T, (4, 2), (1,))


def thermalization_curve(
    cfg: CollisionConfig, engine: str = "auto", max_amplitudes: int | None = None
) -> CollisionTrace:
    """Trace distance of the probe to the target Gibbs state per collision."""
    if cfg.scenario != "plain":
        raise ValueError("thermalization_curve requires the plain scenario")
    target = gibbs_state(cfg.hamiltonian, cfg.t0)
    theta = _theta(cfg.t0, cfg.delta_e)
    distances = np.empty(cfg.m)
    if _use_dense(cfg.m, engine, max_amplitudes):
        u4 = _collision_unitary(cfg.eta)
        vec = _initial_branch(theta, cfg.m, cfg.probe_vector())
        for r in range(1, cfg.m + 1):
            vec = _apply_collision(vec, cfg.m, r, u4)
            distances[r - 1] = trace_distance(_probe_density(vec), target)
    else:
        u8 = _interaction_on_subsystem(cfg.eta)
        psi = cfg.probe_vector()
        rho = np.outer(psi, psi.conj())
        for r in range(1, cfg.m + 1):
            rho = _step_density(rho, theta, u8)
            distances[r - 1] = trace_distance(rho, target)
    return CollisionTrace(np.arange(1, cfg.m + 1), trace_distance=distances)


def collisions_to_threshold(
    cfg: CollisionConfig, engine: str = "auto", max_amplitudes: int | None = None
) -> int:
    """Least collision number with distance below ``cfg.threshold``."""
    trace = thermalization_curve(cfg, engine=engine, max_amplitudes=max_amplitudes)
    below = np.nonzero(trace.trace_distance < cfg.threshold)[0]
    if below.size == 0:
        raise ThresholdNotReachedError(
            f"distance stayed above {cfg.threshold} for all {cfg.m} collisions"
        )
    return int(trace.collisions[below[0]])


def _twobath_overlaps(cfg, engine, max_amplitudes) -> np.ndarray:
    """Cross-branch overlap <Psi_1|Psi_0> after each collision."""
    temps = (cfg.t0, cfg.t1_resolved)
    thetas = [_theta(t, cfg.delta_e) for t in temps]
    probe = cfg.probe_vector()
    out = np.empty(cfg.m, dtype=complex)
    if _use_dense(cfg.m, engine, max_amplitudes):
        u4 = _collision_unitary(cfg.eta)
        vecs = [_initial_branch(th, cfg.m, probe) for th in thetas]
        for r in range(1, cfg.m + 1):
            vecs = [_apply_collision(v, cfg.m, r, u4) for v in vecs]
            # branch i's untouched factor matches the other branch's theta_i
            a0 = _contract_reference(vecs[0], thetas[0], cfg.m)
            a1 = _contract_reference(vecs[1], thetas[1], cfg.m)
            out[r - 1] = np.vdot(a1, a0)
    else:
        u4 = _collision_unitary(cfg.eta)
        ws = [probe.copy(), probe.copy()]
        for r in range(1, cfg.m + 1):
            ws = [_step_probe_vector(w, th, u4) for w, th in zip(ws, thetas)]
            out[r - 1] = np.vdot(ws[1], ws[0])
    return out


def _onebath_overlaps(cfg, engine, max_amplitudes) -> np.ndarray:
    temps = (cfg.t0, cfg.t1_resolved)
    thetas = [_theta(t, cfg.delta_e) for t in temps]
    probe = cfg.probe_vector()
    out = np.empty(cfg.m, dtype=complex)
    if _use_dense(cfg.m, engine, max_amplitudes):
        u4 = _collision_unitary(cfg.eta)
        vecs = [_initial_branch(th, cfg.m, probe) for th in thetas]
        # each subsystem not yet collided contributes a cross-branch factor
        # <theta_1|theta_0>; dividing it out makes entry r the final
        # visibility of a bath with r subsystems, matching the lazy route
        untouched = complex(np.vdot(thetas[1], thetas[0]))
        for r in range(1, cfg.m + 1):
            vecs = [_apply_collision(v, cfg.m, r, u4) for v in vecs]
            out[r - 1] = np.vdot(vecs[1], vecs[0]) / untouched ** (cfg.m - r)
    else:
        u8 = _interaction_on_subsystem(cfg.eta)
        omega = np.outer(probe, probe.conj())
        for r in range(1, cfg.m + 1):
            omega = _step_cross_operator(omega, thetas[0], thetas[1], u8)
            out[r - 1] = np.trace(omega)
    return out


def twobath_collisional_visibility(
    cfg: CollisionConfig, engine: str = "auto", max_amplitudes: int | None = None
) -> VisibilityResult:
    """Control visibility after all collisions in the two-bath scenario."""
    cross = _twobath_overlaps(cfg, engine, max_amplitudes)[-1]
    return _result(complex(cross))


def onebath_collisional_visibility(
    cfg: CollisionConfig, engine: str = "auto", max_amplitudes: int | None = None
) -> VisibilityResult:
    """Control visibility after all collisions in the one-bath scenario."""
    cross = _onebath_overlaps(cfg, engine, max_amplitudes)[-1]
    return _result(complex(cross).conjugate())


def visibility_trace(
    cfg: CollisionConfig, engine: str = "auto", max_amplitudes: int | None = None
) -> CollisionTrace:
    """Visibility per collision count: entry r is the final visibility of a
    bath with r subsystems, so the trace shows how coherence falls as the
    collision number grows."""
    if cfg.scenario == "twobath":
        cross = _twobath_overlaps(cfg, engine, max_amplitudes)
    elif cfg.scenario == "onebath":
        cross = _onebath_overlaps(cfg, engine, max_amplitudes)
    else:
        raise ValueError("visibility_trace requires the twobath or onebath scenario")
    return CollisionTrace(np.arange(1, cfg.m + 1), visibility=np.abs(cross))


def visibility_heatmap(
    grid: GridSpec,
    cfg: CollisionConfig,
    engine: str = "auto",
    max_amplitudes: int | None = None,
) -> HeatmapResult:
    """Visibility over a (T0, T1) temperature grid for the configured scenario."""
    if cfg.scenario not in ("twobath", "onebath"):
        raise ValueError("heat maps require the twobath or onebath scenario")
    run = (
        twobath_collisional_visibility
        if cfg.scenario == "twobath"
        else onebath_collisional_visibility
    )
    ts = grid.values()
    values = np.empty((ts.size, ts.size))
    for i, t0 in enumerate(ts):
        for j, t1 in enumerate(ts):
            cell = replace(
                cfg,
                t0=Temperature.from_temperature(t0),
                t1=Temperature.from_temperature(t1),
            )
            values[i, j] = run(cell, engine=engine, max_amplitudes=max_amplitudes).visibility
    return HeatmapResult(ts, values, cfg.scenario, float(cfg.eta), int(cfg.m))
