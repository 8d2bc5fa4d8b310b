"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
report. Expected values marked as frozen were computed beforehand with the
independent oracles in ``oracles.py``.
"""

import time

import numpy as np
import pytest

from thermosup.channels import apply_kraus, kraus_from_unitary, swap_thermalizer
from thermosup.cli import main
from thermosup.collision import (
    CollisionConfig,
    GridSpec,
    collisions_to_threshold,
    onebath_collisional_visibility,
    thermalization_curve,
    twobath_collisional_visibility,
    visibility_heatmap,
)
from thermosup.onebath import (
    OneBathConfig,
    probe_output,
    probe_output_analytic,
    visibility_onebath,
    visibility_onebath_from_control,
)
from thermosup.qmath import fidelity, random_unitary, trace_distance
from thermosup.thermal import HamiltonianSpec, PurificationSpec, Temperature, gibbs_state
from thermosup.twobath import (
    TwoBathConfig,
    conditional_probe_state,
    conditional_probe_state_global,
    max_visibility_closed_form,
    max_visibility_search,
    normalized_state,
    visibility,
    visibility_from_control,
    zero_visibility_unitaries,
)

from oracles import random_density

T = Temperature.from_temperature
QUBIT = HamiltonianSpec.qubit()
QUTRIT = HamiltonianSpec.ladder(3)
GROUND = np.diag([1.0, 0.0]).astype(complex)

# frozen oracle values
C1 = 0.2689414213699951
NONTHERMAL_DISTANCE = 0.09367210055115428


class _Budget:
    def __init__(self, seconds):
        self.limit = seconds
        self.start = time.perf_counter()

    @property
    def elapsed(self):
        return time.perf_counter() - self.start


def _report(number, elapsed, message):
    print(f"\ncriterion {number:2d} PASS ({elapsed:6.2f} s): {message}")


def _random_twobath_cfg(h, rng, phi=None):
    d = h.dim
    return TwoBathConfig(
        h=h,
        t0=T(rng.uniform(0.1, 4.0)),
        t1=T(rng.uniform(0.1, 4.0)),
        rho_s=random_density(d, rng),
        phi=rng.uniform(-np.pi, np.pi) if phi is None else phi,
        u0=random_unitary(d, rng),
        u1=random_unitary(d, rng),
    )


def _random_onebath_cfg(h, rng):
    d = h.dim
    pur = PurificationSpec(
        temperatures=(T(rng.uniform(0.1, 4.0)), T(rng.uniform(0.1, 4.0))),
        phases=(rng.uniform(-np.pi, np.pi), rng.uniform(-np.pi, np.pi)),
        basis_maps=(random_unitary(d, rng), random_unitary(d, rng)),
    )
    return OneBathConfig(
        h=h,
        purification=pur,
        rho_s=random_density(d, rng),
        phi_c=rng.uniform(-np.pi, np.pi),
        u0=random_unitary(d * d, rng),
        u1=random_unitary(d * d, rng),
    )


def test_criterion_1_full_thermalisation_fixed_point():
    budget = _Budget(1.0)
    rng = np.random.default_rng(101)
    swap = swap_thermalizer(2)
    worst = 0.0
    for tval in (0.0, 0.5, 1.0, 5.0, np.inf):
        g = gibbs_state(QUBIT, T(tval))
        ks = kraus_from_unitary(swap, g)
        for _ in range(20):
            out = apply_kraus(ks, random_density(2, rng))
            worst = max(worst, trace_distance(out, g))
    assert worst < 1e-12, f"worst distance {worst}"
    assert budget.elapsed < budget.limit, f"runtime {budget.elapsed:.2f} s over budget"
    _report(1, budget.elapsed, f"swap channel reaches the thermal state, worst distance {worst:.2e}")


def test_criterion_2_twobath_oracle_equivalence():
    budget = _Budget(10.0)
    rng = np.random.default_rng(102)
    worst = 0.0
    for h, count in ((QUBIT, 50), (QUTRIT, 20)):
        for _ in range(count):
            cfg = _random_twobath_cfg(h, rng)
            diff = np.max(
                np.abs(conditional_probe_state(cfg) - conditional_probe_state_global(cfg))
            )
            worst = max(worst, diff)
    assert worst < 1e-12, f"worst deviation {worst}"
    assert budget.elapsed < budget.limit
    _report(2, budget.elapsed, f"two-bath closed form matches global simulation, worst {worst:.2e}")


def test_criterion_3_onebath_oracle_equivalence():
    budget = _Budget(10.0)
    rng = np.random.default_rng(103)
    worst = 0.0
    for h, count in ((QUBIT, 50), (QUTRIT, 20)):
        for _ in range(count):
            cfg = _random_onebath_cfg(h, rng)
            diff = np.max(np.abs(probe_output_analytic(cfg) - probe_output(cfg)))
            worst = max(worst, diff)
    assert worst < 1e-12, f"worst deviation {worst}"
    assert budget.elapsed < budget.limit
    _report(3, budget.elapsed, f"one-bath closed form matches global simulation, worst {worst:.2e}")


def test_criterion_4_no_thermalisation_at_equal_temperatures():
    budget = _Budget(10.0)
    cfg = TwoBathConfig(h=QUBIT, t0=T(1.0), t1=T(1.0), rho_s=GROUND, phi=0.0)
    rho = normalized_state(conditional_probe_state(cfg))
    dist = trace_distance(rho, gibbs_state(QUBIT, T(1.0)))
    assert dist > 0.05, f"distance {dist}"
    assert abs(dist - NONTHERMAL_DISTANCE) < 1e-12
    _report(4, budget.elapsed, f"equal-temperature output is not thermal, distance {dist:.6f}")


def test_criterion_5_visibility_closed_forms_match_simulation():
    budget = _Budget(30.0)
    rng = np.random.default_rng(105)
    worst = 0.0
    temps = [0.3, 1.0, 2.0, 5.0]
    for t0 in temps:
        for t1 in temps:
            cfg2 = TwoBathConfig(h=QUBIT, t0=T(t0), t1=T(t1), rho_s=GROUND)
            worst = max(
                worst,
                abs(visibility(cfg2).visibility - visibility_from_control(cfg2).visibility),
            )
            cfg1 = OneBathConfig(
                h=QUBIT,
                purification=PurificationSpec(temperatures=(T(t0), T(t1))),
                rho_s=GROUND,
            )
            worst = max(
                worst,
                abs(
                    visibility_onebath(cfg1).visibility
                    - visibility_onebath_from_control(cfg1).visibility
                ),
            )
    for _ in range(20):
        cfg2 = _random_twobath_cfg(QUBIT, rng)
        worst = max(
            worst, abs(visibility(cfg2).visibility - visibility_from_control(cfg2).visibility)
        )
        cfg1 = _random_onebath_cfg(QUBIT, rng)
        worst = max(
            worst,
            abs(
                visibility_onebath(cfg1).visibility
                - visibility_onebath_from_control(cfg1).visibility
            ),
        )
    assert worst < 1e-10, f"worst deviation {worst}"
    _report(5, budget.elapsed, f"visibility formulas match control off-diagonals, worst {worst:.2e}")


def test_criterion_6_extremal_visibility():
    budget = _Budget(60.0)
    rng = np.random.default_rng(106)
    # (a) the zero-visibility construction
    worst_zero = 0.0
    for rho in (GROUND, random_density(2, rng), random_density(3, rng)):
        h = QUBIT if rho.shape[0] == 2 else QUTRIT
        u0, u1 = zero_visibility_unitaries(h, rho)
        for t0, t1 in ((1.0, 2.0), (0.5, 0.5), (0.0, 3.0)):
            cfg = TwoBathConfig(h=h, t0=T(t0), t1=T(t1), rho_s=rho, u0=u0, u1=u1)
            worst_zero = max(worst_zero, visibility(cfg).visibility)
    assert worst_zero < 1e-12, f"zero construction leaked {worst_zero}"
    # (b) stochastic search against the closed form
    rho = GROUND
    closed = max_visibility_closed_form(QUBIT, T(1.0), T(1.0), rho)
    found = max_visibility_search(QUBIT, T(1.0), T(1.0), rho, trials=20_000, seed=2024)
    assert found <= closed + 1e-9, f"search {found} exceeded bound {closed}"
    assert closed - found < 1e-3, f"search fell short: {closed - found}"
    # (c) the one-bath maximum equals the thermal-state fidelity
    from thermosup.onebath import max_visibility_onebath

    temps = [0.0, 0.5, 1.0, 2.0, np.inf]
    worst_fid = 0.0
    for t0 in temps:
        for t1 in temps:
            vmax = max_visibility_onebath(QUBIT, T(t0), T(t1))
            fid = fidelity(gibbs_state(QUBIT, T(t0)), gibbs_state(QUBIT, T(t1)))
            worst_fid = max(worst_fid, abs(vmax - fid))
            if t0 == t1:
                assert abs(vmax - 1.0) < 1e-12
            else:
                assert vmax < 1.0 - 1e-9
    assert worst_fid < 1e-12
    assert budget.elapsed < budget.limit
    _report(
        6,
        budget.elapsed,
        f"zero construction <= {worst_zero:.1e}, search gap {closed - found:.1e}, "
        f"fidelity identity worst {worst_fid:.1e}",
    )


def test_criterion_7_gadc_thermalisation_curve():
    budget = _Budget(10.0)
    cfg = CollisionConfig(eta=0.8, m=5, t0=T(1.0), threshold=1e-3)
    got = thermalization_curve(cfg).trace_distance
    want = C1 * 0.2 ** np.arange(1, 6)
    worst = np.max(np.abs(got - want))
    assert worst < 1e-12, f"curve deviation {worst}"
    assert collisions_to_threshold(cfg) == 4
    one = thermalization_curve(CollisionConfig(eta=1.0, m=1, t0=T(1.0))).trace_distance[0]
    assert one < 1e-12
    _report(7, budget.elapsed, f"partial-swap curve matches geometric law, worst {worst:.2e}")


def test_criterion_8_heatmap_shape_properties():
    budget = _Budget(120.0)
    grid = GridSpec(t_min=0.1, t_max=5.0, points=25)
    maps = {}
    for scenario in ("onebath", "twobath"):
        for m in (3, 5):
            cfg = CollisionConfig(eta=0.8, m=m, t0=T(1.0), scenario=scenario)
            maps[scenario, m] = visibility_heatmap(grid, cfg).values
    for m in (3, 5):
        one = maps["onebath", m]
        diag = np.diag(one)
        assert np.max(np.abs(diag - 1.0)) < 1e-10, "one-bath diagonal must be unity"
        off = one[~np.eye(25, dtype=bool)]
        assert np.max(off) < 1.0 - 1e-10, "one-bath off-diagonal must stay below 1"
        two_diag = np.diag(maps["twobath", m])
        assert np.max(two_diag) < 1.0, "two-bath diagonal must stay below 1"
        assert np.all(np.diff(two_diag) < 0.0), "two-bath diagonal must fall with T"
    for scenario in ("onebath", "twobath"):
        gap = maps[scenario, 5] - maps[scenario, 3]
        assert np.max(gap) <= 1e-10, f"{scenario}: more collisions must not raise visibility"
    assert budget.elapsed < budget.limit, f"runtime {budget.elapsed:.1f} s over budget"
    _report(8, budget.elapsed, "25x25 heat maps show the published shape features")


def test_criterion_9_collisional_consistency_bridge():
    budget = _Budget(30.0)
    temps = [0.3, 1.0, 2.0, 5.0]
    worst = 0.0
    for t0 in temps:
        for t1 in temps:
            two = twobath_collisional_visibility(
                CollisionConfig(eta=1.0, m=1, t0=T(t0), t1=T(t1), scenario="twobath")
            ).visibility
            closed_two = visibility(
                TwoBathConfig(h=QUBIT, t0=T(t0), t1=T(t1), rho_s=GROUND)
            ).visibility
            one = onebath_collisional_visibility(
                CollisionConfig(eta=1.0, m=1, t0=T(t0), t1=T(t1), scenario="onebath")
            ).visibility
            closed_one = visibility_onebath(
                OneBathConfig(
                    h=QUBIT,
                    purification=PurificationSpec(temperatures=(T(t0), T(t1))),
                    rho_s=GROUND,
                )
            ).visibility
            worst = max(worst, abs(two - closed_two), abs(one - closed_one))
    assert worst < 1e-10, f"worst bridge deviation {worst}"
    _report(9, budget.elapsed, f"one full collision reproduces the closed forms, worst {worst:.2e}")


def test_criterion_10_cli_determinism(tmp_path):
    budget = _Budget(60.0)
    outputs = []
    for fmt in ("csv", "json"):
        pair = []
        for run in (0, 1):
            out = tmp_path / f"maxvis-{fmt}-{run}.{fmt}"
            code = main(
                [
                    "maxvis", "--t0", "1", "--t1", "2", "--trials", "500",
                    "--seed", "7", "--format", fmt, "--out", str(out),
                ]
            )
            assert code == 0
            pair.append(out.read_bytes())
        assert pair[0] == pair[1], f"{fmt} output not reproducible"
        outputs.append(pair[0])
    hm = []
    for run in (0, 1):
        out = tmp_path / f"hm-{run}.csv"
        code = main(
            ["heatmap", "--scenario", "twobath", "--m", "2", "--grid", "5", "--out", str(out)]
        )
        assert code == 0
        hm.append(out.read_bytes())
    assert hm[0] == hm[1]
    _report(10, budget.elapsed, "repeated seeded runs emit byte-identical CSV and JSON")
