"""Round-driven protocol execution.

One round = one full gather-and-deliver cycle: the chain splits at the
round's leader, both arms drain toward it with hop-by-hop fusion, and the
leader transmits one fixed-length packet to the BS. Leadership rotates
round-robin over the sorted alive set. After delivery the round handles
congestion dynamics, deaths, drift, localization refresh and any chain
rebuild, in that order.

Routing decisions were made on table positions; transmission costs here are
paid over true distances. Control tokens are free; only data packets cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .chain import Chain, reconstruct_chain
from .energy import EnergyParams, rx_energy, tx_energy
from .errors import ConfigurationError, EmptyNetworkError, ProtocolError, SimulationComplete
from .model import (
    NetworkConfig,
    NetworkState,
    NodeState,
    RngStream,
    apply_drift,
    distance,
    drain_energy,
    spawn_network,
    update_localization,
)

MODES = ("parametric", "baseline")


@dataclass(frozen=True, slots=True)
class Packet:
    """A data packet; only its bit length is modeled, payloads are opaque."""

    bits: int


def aggregate_fuse(incoming: list[Packet], own: Packet) -> Packet:
    """Fuse any number of incoming packets with the node's own reading.

    Output length equals the input length regardless of how many packets
    went in; mismatched lengths are a protocol error.
    """
    for p in incoming:
        if p.bits != own.bits:
            raise ProtocolError(
                f"cannot fuse packets of different lengths ({p.bits} vs {own.bits})"
            )
    return Packet(own.bits)


@dataclass(frozen=True, slots=True)
class RoundReport:
    """Per-round ledger.

    alive_count is the population entering the round (the chain in use is
    a permutation of exactly that set). deaths lists the ids that died at
    any point during the round, including adaptive-energy casualties.
    """

    round: int
    leader: int
    energy_spent: float
    per_node_spent: dict[int, float]
    deaths: tuple[int, ...]
    delivered_bits: int
    long_link_events: int
    transient_failures: tuple[int, ...]
    alive_count: int


@dataclass(slots=True)
class SimState:
    """Everything the loop carries between rounds."""

    round: int
    network: NetworkState
    chain: Chain
    params: EnergyParams
    mode: str
    rng: RngStream
    congestion_delta: float = 0.1
    congestion_decay: float = 0.9
    pending_long_links: int = 0  # events from a build not yet reported


@dataclass(frozen=True, slots=True)
class TraceEntry:
    """The chain and leader actually used in one round."""

    round: int
    chain: tuple[int, ...]
    leader: int


@dataclass(slots=True)
class SimResult:
    """Complete outcome of one simulation: per-round series plus final state."""

    config: NetworkConfig
    params: EnergyParams
    mode: str
    seed: int
    reports: list[RoundReport]
    trace: list[TraceEntry]
    final_network: NetworkState


def leader_for_round(round_no: int, state: NetworkState) -> int:
    """Round-robin leader: alive ids sorted ascending, index round mod count.

    Indexing the sorted alive set (rather than raw ids) keeps the rotation
    total after deaths.
    """
    alive = state.alive_ids()
    if not alive:
        raise EmptyNetworkError("no alive node to lead the round")
    return alive[round_no % len(alive)]


def sample_transient_failures(state: SimState) -> set[int]:
    """Bernoulli-sample this round's transiently unavailable nodes.

    Failed nodes still relay at normal cost but skip fusion, and the next
    chain rebuild avoids them as candidates. Permanent death happens only
    through energy exhaustion.
    """
    failed = set()
    for node in state.network.nodes:
        if not node.alive:
            continue
        if state.rng.random() < node.failure_prob:
            failed.add(node.id)
    state.network.transient_failed = failed
    return failed


def _relay_counts(order: tuple[int, ...], leader: int) -> dict[int, int]:
    """Packets received per node given the chain split at the leader.

    Arm endpoints originate only (0 received); interior arm nodes receive 1;
    the leader receives one per non-empty arm.
    """
    k = len(order)
    j = order.index(leader)
    counts: dict[int, int] = {}
    for i, nid in enumerate(order):
        if i == j:
            counts[nid] = (1 if j > 0 else 0) + (1 if j < k - 1 else 0)
        elif i < j:
            counts[nid] = 0 if i == 0 else 1
        else:
            counts[nid] = 0 if i == k - 1 else 1
    return counts


def _apply_congestion(
    network: NetworkState,
    order: tuple[int, ...],
    leader: int,
    delta: float,
    decay: float,
) -> None:
    """Bump relaying nodes by delta per packet received, then decay everyone.

    delta = 0 with decay = 1 freezes congestion at its sampled values.
    Values stay clamped to [0, 1].
    """
    counts = _relay_counts(order, leader)
    for node in network.nodes:
        if not node.alive:
            continue
        relayed = counts.get(node.id, 0)
        c = node.congestion
        if relayed > 0:
            c = min(1.0, c + delta * relayed)
        node.congestion = min(1.0, max(0.0, decay * c))


def update_congestion(state: SimState, report: RoundReport) -> SimState:
    """Apply one round of congestion dynamics given that round's report."""
    _apply_congestion(
        state.network,
        state.chain.order,
        report.leader,
        state.congestion_delta,
        state.congestion_decay,
    )
    return state


def run_round(state: SimState) -> tuple[SimState, RoundReport]:
    """Execute one full round; mutates and returns the state plus its report."""
    net = state.network
    params = state.params
    alive_start = net.alive_ids()
    if not alive_start:
        raise SimulationComplete(f"all nodes dead before round {state.round}")

    r = state.round
    bits = params.packet_bits
    rx_cost = rx_energy(bits, params)
    per_spent: dict[int, float] = {nid: 0.0 for nid in alive_start}

    def pay(node: NodeState, amount: float) -> bool:
        spent = drain_energy(node, amount)
        per_spent[node.id] += spent
        return spent == amount

    # (1) transient failures, (2) leader
    failures = sample_transient_failures(state)
    leader = leader_for_round(r, net)

    # (3) both chain arms drain toward the leader; tx is paid over true distances
    order = state.chain.order
    k = len(order)
    j = order.index(leader)

    def drain_arm(indices, toward: int) -> Packet | None:
        packet: Packet | None = None
        for i in indices:
            node = net.node(order[i])
            if packet is not None:
                pay(node, rx_cost)
            own = Packet(bits)
            if packet is None:
                out = own
            elif node.id in failures:
                out = packet  # pass through without fusing
            else:
                out = aggregate_fuse([packet], own)
            nxt = net.node(order[i + toward])
            pay(node, tx_energy(bits, distance(node.position, nxt.position), params))
            packet = out
        return packet

    left = drain_arm(range(0, j), +1) if j > 0 else None
    right = drain_arm(range(k - 1, j, -1), -1) if j < k - 1 else None

    # (4) leader receives the arm packets, fuses, transmits to the BS
    leader_node = net.node(leader)
    incoming = [p for p in (left, right) if p is not None]
    for _ in incoming:
        pay(leader_node, rx_cost)
    if leader in failures and incoming:
        fused = incoming[0]
    elif leader in failures:
        fused = Packet(bits)
    else:
        fused = aggregate_fuse(incoming, Packet(bits))
    bs_dist = distance(leader_node.position, net.config.bs_position)
    paid_full = pay(leader_node, tx_energy(bits, bs_dist, params))
    delivered = fused.bits if paid_full else 0

    # (5) congestion dynamics over the chain just used
    _apply_congestion(net, order, leader, state.congestion_delta, state.congestion_decay)

    # (6) deaths from the data flow
    deaths = [nid for nid in alive_start if not net.node(nid).alive]

    # (7) mobility, (8) localization refresh for the upcoming round
    apply_drift(net, state.rng)
    localized = (r + 1) % net.config.localization_interval == 0
    update_localization(net, r + 1, ledger=per_spent)
    if localized:
        deaths = [nid for nid in alive_start if not net.node(nid).alive]

    # (9) rebuild on death or on the localization schedule
    long_links = state.pending_long_links
    state.pending_long_links = 0
    if net.alive_ids():
        if deaths or localized:
            state.chain = reconstruct_chain(net, params, r + 1, state.mode)
            long_links += len(state.chain.long_links)
    else:
        state.chain = Chain(order=(), built_at_round=r + 1)

    # (10) advance
    state.round = r + 1

    report = RoundReport(
        round=r,
        leader=leader,
        energy_spent=math.fsum(per_spent.values()),
        per_node_spent=per_spent,
        deaths=tuple(sorted(deaths)),
        delivered_bits=delivered,
        long_link_events=long_links,
        transient_failures=tuple(sorted(failures)),
        alive_count=len(alive_start),
    )
    return state, report


def run_simulation(
    config: NetworkConfig,
    params: EnergyParams,
    mode: str = "parametric",
    max_rounds: int = 1000,
    congestion_delta: float = 0.1,
    congestion_decay: float = 0.9,
) -> SimResult:
    """Spawn, build the initial chain, and iterate rounds.

    Stops when every node is dead or max_rounds is reached. The whole run
    is a pure function of (config, params, mode, max_rounds, dynamics):
    same inputs, bit-identical result.
    """
    if max_rounds < 1:
        raise ValueError(f"max_rounds must be >= 1 (got {max_rounds})")
    if mode not in MODES:
        raise ConfigurationError(f"mode must be one of {MODES} (got {mode!r})")
    config.validate()
    params.validate()

    rng = RngStream(config.rng_seed)
    net = spawn_network(config, rng)
    chain = reconstruct_chain(net, params, 0, mode)
    state = SimState(
        round=0,
        network=net,
        chain=chain,
        params=params,
        mode=mode,
        rng=rng,
        congestion_delta=congestion_delta,
        congestion_decay=congestion_decay,
        pending_long_links=len(chain.long_links),
    )

    reports: list[RoundReport] = []
    trace: list[TraceEntry] = []
    for _ in range(max_rounds):
        if not net.alive_ids():
            break
        chain_used = state.chain.order
        state, report = run_round(state)
        reports.append(report)
        trace.append(TraceEntry(round=report.round, chain=chain_used, leader=report.leader))
    return SimResult(
        config=config,
        params=params,
        mode=mode,
        seed=config.rng_seed,
        reports=reports,
        trace=trace,
        final_network=net,
    )
