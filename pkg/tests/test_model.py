"""Core state model: positions, drain, spawn, drift, localization."""

import math
import random

import pytest

from aquachain import (
    Box,
    ConfigurationError,
    EmptyNetworkError,
    NetworkConfig,
    Position,
    RngStream,
    apply_drift,
    distance,
    drain_energy,
    farthest_node,
    spawn_network,
    update_localization,
)
from helpers import make_node, make_state
from oracles import dist3, farthest_by_scan


def test_distance_identity():
    p = Position(0.0, 0.0, 0.0)
    assert distance(p, p) == 0.0


def test_distance_345_triangle():
    assert distance(Position(0, 0, 0), Position(3, 4, 0)) == 5.0


def test_distance_122_triple():
    assert distance(Position(1, 2, 2), Position(0, 0, 0)) == 3.0


def test_distance_symmetric_and_nonnegative():
    rng = random.Random(42)
    for _ in range(200):
        a = Position(rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(0, 50))
        b = Position(rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(0, 50))
        assert distance(a, b) == distance(b, a)
        assert distance(a, b) >= 0.0
        assert abs(distance(a, b) - dist3(a, b)) < 1e-9


def test_position_copy_is_independent():
    p = Position(1.0, 2.0, 3.0)
    q = p.copy()
    q.x = 9.0
    assert p.x == 1.0


def test_box_contains_boundary():
    box = Box(10.0, 10.0, 5.0)
    assert box.contains(Position(0, 0, 0))
    assert box.contains(Position(10, 10, 5))
    assert not box.contains(Position(10.0001, 5, 1))
    assert not box.contains(Position(5, 5, -0.1))


class TestDrainEnergy:
    def test_partial_drain(self):
        node = make_node(0, (0, 0, 0), energy=0.5)
        assert drain_energy(node, 0.1) == 0.1
        assert node.energy == 0.4
        assert node.alive

    def test_exact_drain_kills(self):
        node = make_node(0, (0, 0, 0), energy=0.25)
        assert drain_energy(node, 0.25) == 0.25
        assert node.energy == 0.0
        assert not node.alive

    def test_overdraw_clamps(self):
        node = make_node(0, (0, 0, 0), energy=0.1)
        assert drain_energy(node, 1.0) == 0.1
        assert node.energy == 0.0
        assert not node.alive

    def test_dead_node_never_drained(self):
        node = make_node(0, (0, 0, 0), energy=0.0, alive=False)
        assert drain_energy(node, 0.5) == 0.0
        assert node.energy == 0.0
        assert not node.alive

    def test_nonpositive_amount_is_noop(self):
        node = make_node(0, (0, 0, 0), energy=0.5)
        assert drain_energy(node, 0.0) == 0.0
        assert drain_energy(node, -1.0) == 0.0
        assert node.energy == 0.5


def test_rng_stream_reproducible():
    a = RngStream(99)
    b = RngStream(99)
    seq_a = [a.uniform(0, 1), a.gauss(2.0), a.random(), float(a.randint(0, 10))]
    seq_b = [b.uniform(0, 1), b.gauss(2.0), b.random(), float(b.randint(0, 10))]
    assert seq_a == seq_b


def test_config_default_bs_is_center_of_surface():
    cfg = NetworkConfig(n=3, area=(100.0, 60.0, 40.0))
    assert cfg.bs_position == Position(50.0, 30.0, 0.0)


def test_config_coerces_area_tuples():
    cfg = NetworkConfig(n=3, area=(10, 20, 30))
    assert isinstance(cfg.area, Box)
    assert cfg.area == Box(10, 20, 30)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n": 0},
        {"area": (-1.0, 10.0, 10.0)},
        {"comm_range": 0.0},
        {"initial_energy": 0.0},
        {"drift_sigma": -0.5},
        {"localization_interval": 0},
        {"adaptive_energy": -1e-9},
        {"congestion_init": (0.5, 0.2)},
        {"failure_prob_init": (0.0, 1.5)},
    ],
)
def test_config_validate_rejects(kwargs):
    base = {"n": 5, "area": (10.0, 10.0, 10.0)}
    base.update(kwargs)
    with pytest.raises(ConfigurationError):
        NetworkConfig(**base).validate()


class TestSpawn:
    def test_single_node(self):
        cfg = NetworkConfig(n=1, area=(10.0, 10.0, 10.0), initial_energy=0.7)
        state = spawn_network(cfg)
        assert len(state.nodes) == 1
        assert state.nodes[0].alive
        assert state.nodes[0].energy == 0.7

    def test_same_seed_same_state(self):
        cfg = NetworkConfig(n=50, area=(100.0, 100.0, 50.0), rng_seed=7)
        assert spawn_network(cfg) == spawn_network(cfg)

    def test_population_within_configured_ranges(self):
        cfg = NetworkConfig(n=50, area=(100.0, 100.0, 50.0), rng_seed=3)
        state = spawn_network(cfg)
        assert len(state.nodes) == 50
        assert [n.id for n in state.nodes] == list(range(50))
        for node in state.nodes:
            assert cfg.area.contains(node.position)
            assert 0.0 <= node.congestion <= 1.0
            lo, hi = cfg.congestion_init
            assert lo <= node.congestion <= hi
            lo, hi = cfg.failure_prob_init
            assert lo <= node.failure_prob <= hi
            assert node.energy == cfg.initial_energy
        # the table starts as a perfect snapshot
        for node in state.nodes:
            assert state.table.position_of(node.id) == node.position
            assert state.table.staleness(node.id, 0) == 0

    def test_table_positions_are_copies(self):
        cfg = NetworkConfig(n=2, area=(10.0, 10.0, 10.0), rng_seed=1)
        state = spawn_network(cfg)
        state.nodes[0].position.x += 5.0
        assert state.table.position_of(0).x != state.nodes[0].position.x


class TestFarthest:
    def test_picks_farthest_from_bs(self):
        nodes = [
            make_node(0, (1, 0, 0)),
            make_node(1, (5, 0, 0)),
            make_node(2, (3, 0, 0)),
        ]
        state = make_state(nodes, bs_position=Position(0, 0, 0))
        assert farthest_node(state) == 1

    def test_tie_breaks_to_lowest_id(self):
        nodes = [
            make_node(3, (5, 0, 0)),
            make_node(7, (0, 5, 0)),
        ]
        state = make_state(nodes, bs_position=Position(0, 0, 0))
        assert farthest_node(state) == 3

    def test_ignores_dead_nodes(self):
        nodes = [
            make_node(0, (9, 0, 0), energy=0.0, alive=False),
            make_node(1, (2, 0, 0)),
        ]
        state = make_state(nodes, bs_position=Position(0, 0, 0))
        assert farthest_node(state) == 1

    def test_matches_scan_oracle(self):
        rng = random.Random(11)
        for _ in range(50):
            nodes = [
                make_node(
                    i,
                    (rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0, 50)),
                )
                for i in range(8)
            ]
            state = make_state(nodes)
            assert farthest_node(state) == farthest_by_scan(state)

    def test_all_dead_raises(self):
        nodes = [make_node(0, (1, 1, 1), energy=0.0, alive=False)]
        state = make_state(nodes)
        with pytest.raises(EmptyNetworkError):
            farthest_node(state)


class TestDrift:
    def test_zero_sigma_is_static(self):
        cfg = NetworkConfig(n=5, area=(50.0, 50.0, 25.0), drift_sigma=0.0, rng_seed=2)
        state = spawn_network(cfg)
        before = [n.position.copy() for n in state.nodes]
        apply_drift(state, RngStream(123))
        for node, old in zip(state.nodes, before):
            assert node.position == old

    def test_positions_stay_in_box(self):
        cfg = NetworkConfig(n=10, area=(20.0, 20.0, 10.0), drift_sigma=5.0, rng_seed=4)
        state = spawn_network(cfg)
        rng = RngStream(77)
        for _ in range(1000):
            apply_drift(state, rng)
            for node in state.nodes:
                assert cfg.area.contains(node.position)

    def test_deterministic(self):
        cfg = NetworkConfig(n=6, area=(30.0, 30.0, 30.0), rng_seed=9)
        s1, s2 = spawn_network(cfg), spawn_network(cfg)
        apply_drift(s1, RngStream(5))
        apply_drift(s2, RngStream(5))
        assert [n.position for n in s1.nodes] == [n.position for n in s2.nodes]

    def test_dead_nodes_drift_too(self):
        node = make_node(0, (10, 10, 5), energy=0.0, alive=False)
        state = make_state([node], drift_sigma=2.0)
        apply_drift(state, RngStream(8))
        assert node.position != Position(10, 10, 5)


class TestLocalization:
    def test_off_cycle_is_noop(self):
        cfg = NetworkConfig(n=4, area=(50.0, 50.0, 25.0), localization_interval=5, rng_seed=6)
        state = spawn_network(cfg)
        apply_drift(state, RngStream(3))
        energy_before = state.total_energy()
        entries_before = dict(state.table.entries)
        update_localization(state, 1)
        assert state.total_energy() == energy_before
        assert state.table.entries == entries_before

    def test_on_cycle_charges_and_refreshes(self):
        node = make_node(0, (10, 10, 5), energy=0.5)
        state = make_state([node], localization_interval=5, adaptive_energy=1e-4)
        node.position = Position(12.0, 10.0, 5.0)  # drifted since the last snapshot
        update_localization(state, 5)
        assert node.energy == 0.4999
        assert state.table.position_of(0) == Position(12.0, 10.0, 5.0)
        assert state.table.staleness(0, 5) == 0

    def test_update_can_kill(self):
        node = make_node(0, (1, 1, 1), energy=5e-5)
        state = make_state([node], localization_interval=1, adaptive_energy=1e-4)
        update_localization(state, 1)
        assert node.energy == 0.0
        assert not node.alive
        # dead nodes fall out of the refreshed table
        assert 0 not in state.table.entries

    def test_ledger_records_actual_deductions(self):
        nodes = [make_node(0, (1, 1, 1), energy=0.5), make_node(1, (2, 2, 2), energy=3e-5)]
        state = make_state(nodes, localization_interval=1, adaptive_energy=1e-4)
        ledger = {}
        update_localization(state, 1, ledger=ledger)
        assert ledger[0] == 1e-4
        assert ledger[1] == 3e-5  # clamped at what the battery held


def test_network_state_node_lookup_with_sparse_ids():
    nodes = [make_node(i, (i, 0, 0)) for i in (0, 2, 4, 6, 8)]
    state = make_state(nodes)
    assert state.node(6).id == 6
    assert state.alive_ids() == [0, 2, 4, 6, 8]


def test_total_energy_sums_everyone():
    nodes = [make_node(0, (0, 0, 0), energy=0.3), make_node(1, (1, 1, 1), energy=0.2)]
    state = make_state(nodes)
    assert math.isclose(state.total_energy(), 0.5)
