"""Network state model: nodes, floating mobility, BS-side localization table.

Nodes live in a 3D box (z = depth); the base station sits on the z = 0 face
and is energy-unconstrained. Because there is no GPS underwater, routing
reads node positions from a periodically refreshed localization table, while
actual transmission costs are paid over true distances. The gap between the
two is the whole point of modelling mobility here.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import ConfigurationError, EmptyNetworkError


@dataclass(slots=True)
class Position:
    """A point in the deployment box, in meters. z is depth (>= 0)."""

    x: float
    y: float
    z: float

    def copy(self) -> "Position":
        return Position(self.x, self.y, self.z)


@dataclass(frozen=True, slots=True)
class Box:
    """Axis-aligned deployment volume [0, x] x [0, y] x [0, z]."""

    x: float
    y: float
    z: float

    def contains(self, p: Position) -> bool:
        return 0.0 <= p.x <= self.x and 0.0 <= p.y <= self.y and 0.0 <= p.z <= self.z


def distance(a: Position, b: Position) -> float:
    """Euclidean distance between two positions, meters."""
    return math.dist((a.x, a.y, a.z), (b.x, b.y, b.z))


@dataclass(slots=True)
class NodeState:
    """One sensor node.

    alive flips to False exactly when energy reaches 0 and never flips back.
    congestion and failure_prob stay clamped to [0, 1].
    """

    id: int
    position: Position
    energy: float
    congestion: float
    failure_prob: float
    alive: bool = True


def drain_energy(node: NodeState, joules: float) -> float:
    """Deduct up to `joules` from a node, clamping at zero.

    Returns the amount actually drained. Marks the node dead when the
    battery hits zero; a dead node is never drained again.
    """
    if not node.alive or joules <= 0.0:
        return 0.0
    spent = min(joules, node.energy)
    node.energy -= spent
    if node.energy <= 0.0:
        node.energy = 0.0
        node.alive = False
    return spent


class RngStream:
    """Deterministic pseudo-random stream.

    Same seed + same call sequence -> same outputs, on any platform
    (backed by the Mersenne Twister in the stdlib).
    """

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)

    def uniform(self, lo: float, hi: float) -> float:
        return self._rng.uniform(lo, hi)

    def gauss(self, sigma: float) -> float:
        return self._rng.gauss(0.0, sigma)

    def random(self) -> float:
        return self._rng.random()

    def randint(self, lo: int, hi: int) -> int:
        return self._rng.randint(lo, hi)


@dataclass(frozen=True, slots=True)
class NetworkConfig:
    """Static deployment parameters.

    bs_position defaults to the center of the z = 0 face of the box.
    congestion_init / failure_prob_init are uniform sampling ranges used
    at spawn to make the population heterogeneous.
    """

    n: int
    area: Box | tuple[float, float, float]
    bs_position: Position | None = None
    comm_range: float = 100.0
    initial_energy: float = 0.5
    drift_sigma: float = 1.0
    localization_interval: int = 10
    adaptive_energy: float = 1e-4
    rng_seed: int = 1
    congestion_init: tuple[float, float] = (0.0, 0.2)
    failure_prob_init: tuple[float, float] = (0.0, 0.1)

    def __post_init__(self):
        if not isinstance(self.area, Box):
            object.__setattr__(self, "area", Box(*self.area))
        for name in ("congestion_init", "failure_prob_init"):
            value = getattr(self, name)
            if not isinstance(value, tuple):
                object.__setattr__(self, name, tuple(value))
        if self.bs_position is None:
            object.__setattr__(
                self, "bs_position", Position(self.area.x / 2.0, self.area.y / 2.0, 0.0)
            )

    def validate(self, prefix: str = "") -> None:
        def bad(msg: str):
            raise ConfigurationError(prefix + msg)

        if self.n < 1:
            bad(f"n must be >= 1 (got {self.n})")
        if self.area.x < 0 or self.area.y < 0 or self.area.z < 0:
            bad(f"area extents must be >= 0 (got {self.area})")
        if self.comm_range <= 0:
            bad(f"comm_range must be > 0 (got {self.comm_range})")
        if self.initial_energy <= 0:
            bad(f"initial_energy must be > 0 (got {self.initial_energy})")
        if self.drift_sigma < 0:
            bad(f"drift_sigma must be >= 0 (got {self.drift_sigma})")
        if self.localization_interval < 1:
            bad(f"localization_interval must be >= 1 (got {self.localization_interval})")
        if self.adaptive_energy < 0:
            bad(f"adaptive_energy must be >= 0 (got {self.adaptive_energy})")
        for name, rng in (("congestion_init", self.congestion_init),
                          ("failure_prob_init", self.failure_prob_init)):
            lo, hi = rng
            if not (0.0 <= lo <= hi <= 1.0):
                bad(f"{name} must satisfy 0 <= lo <= hi <= 1 (got {rng})")


@dataclass(slots=True)
class LocEntry:
    """Last-known position snapshot for one node."""

    position: Position
    last_update_round: int


@dataclass(slots=True)
class LocalizationTable:
    """BS-maintained map of last-known node positions.

    Refreshed every localization_interval rounds at adaptive-energy cost;
    between refreshes the entries go stale while the nodes keep drifting.
    """

    entries: dict[int, LocEntry] = field(default_factory=dict)

    def refresh(self, nodes: list[NodeState], round_no: int) -> None:
        """Snapshot the true positions of all alive nodes."""
        self.entries = {
            n.id: LocEntry(n.position.copy(), round_no) for n in nodes if n.alive
        }

    def position_of(self, node_id: int) -> Position:
        return self.entries[node_id].position

    def staleness(self, node_id: int, current_round: int) -> int:
        return current_round - self.entries[node_id].last_update_round


@dataclass(slots=True)
class NetworkState:
    """Full mutable network state: population + localization table.

    transient_failed holds the ids sampled as unavailable in the current
    round; the chain builder skips them as candidates.
    """

    config: NetworkConfig
    nodes: list[NodeState]
    table: LocalizationTable
    transient_failed: set[int] = field(default_factory=set)
    _index: dict[int, NodeState] | None = field(
        default=None, compare=False, repr=False
    )

    def node(self, node_id: int) -> NodeState:
        if self._index is None:
            self._index = {n.id: n for n in self.nodes}
        return self._index[node_id]

    def alive_nodes(self) -> list[NodeState]:
        return [n for n in self.nodes if n.alive]

    def alive_ids(self) -> list[int]:
        return [n.id for n in self.nodes if n.alive]

    def total_energy(self) -> float:
        # fsum: keeps the total exact enough to audit per-round spend against
        return math.fsum(n.energy for n in self.nodes)


def spawn_network(config: NetworkConfig, rng: RngStream | None = None) -> NetworkState:
    """Create the initial population.

    Positions are sampled uniformly in the box, congestion / failure factors
    from their configured ranges; the localization table is seeded with the
    true positions at round 0. Passing an RngStream lets the caller keep
    drawing from the same stream afterwards (the engine does).
    """
    config.validate()
    if rng is None:
        rng = RngStream(config.rng_seed)
    nodes = []
    for node_id in range(config.n):
        pos = Position(
            rng.uniform(0.0, config.area.x),
            rng.uniform(0.0, config.area.y),
            rng.uniform(0.0, config.area.z),
        )
        congestion = rng.uniform(*config.congestion_init)
        failure_prob = rng.uniform(*config.failure_prob_init)
        nodes.append(
            NodeState(
                id=node_id,
                position=pos,
                energy=config.initial_energy,
                congestion=congestion,
                failure_prob=failure_prob,
            )
        )
    table = LocalizationTable()
    table.refresh(nodes, 0)
    return NetworkState(config=config, nodes=nodes, table=table)


def farthest_node(state: NetworkState) -> int:
    """Id of the alive node farthest from the BS by last-known position.

    Ties break toward the lowest id. This is the chain's source node.
    """
    bs = state.config.bs_position
    best_id = None
    best_d = -1.0
    for node in state.nodes:
        if not node.alive:
            continue
        d = distance(state.table.position_of(node.id), bs)
        if d > best_d:
            best_d = d
            best_id = node.id
    if best_id is None:
        raise EmptyNetworkError("no alive node to select as source")
    return best_id


def _fold(v: float, extent: float) -> float:
    """Reflect a coordinate back into [0, extent] (triangle fold)."""
    if extent <= 0.0:
        return 0.0
    v = v % (2.0 * extent)
    if v > extent:
        v = 2.0 * extent - v
    return v


def apply_drift(state: NetworkState, rng: RngStream) -> NetworkState:
    """One floating-motion step: independent Gaussian drift per axis.

    Dead nodes float too. Positions reflect at the box boundaries, so the
    containment invariant holds after every step.
    """
    sigma = state.config.drift_sigma
    box = state.config.area
    for node in state.nodes:
        p = node.position
        p.x = _fold(p.x + rng.gauss(sigma), box.x)
        p.y = _fold(p.y + rng.gauss(sigma), box.y)
        p.z = _fold(p.z + rng.gauss(sigma), box.z)
    return state


def update_localization(
    state: NetworkState, round_no: int, ledger: dict[int, float] | None = None
) -> NetworkState:
    """Periodic localization refresh.

    On rounds divisible by localization_interval, every alive node pays the
    flat adaptive-energy cost (and may die of it) and the table is rebuilt
    from true positions. Off-cycle rounds are a no-op. When a ledger dict is
    given, the actual per-node deductions are accumulated into it so the
    caller's energy accounting stays exact.
    """
    cfg = state.config
    if round_no % cfg.localization_interval != 0:
        return state
    for node in state.nodes:
        if not node.alive:
            continue
        spent = drain_energy(node, cfg.adaptive_energy)
        if ledger is not None and spent > 0.0:
            ledger[node.id] = ledger.get(node.id, 0.0) + spent
    state.table.refresh(state.nodes, round_no)
    return state
