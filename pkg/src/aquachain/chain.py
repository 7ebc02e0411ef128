"""Aggregative chain construction.

The chain is an ordered simple path over every alive node, starting at the
node farthest from the BS. Two builders are provided:

* build_chain — the parametric cascade. At each step the eligible
  neighbors of the chain tail are scored (hop energy, projected residual,
  distance, congestion) and the next node is chosen by a four-tier
  preference cascade; see select_next.
* build_greedy_baseline — plain nearest-neighbor extension, the classic
  chain-gathering baseline, with no eligibility filtering at all.

Both read positions from the localization table, never the true ones:
routing only knows what the BS knows.
"""

from __future__ import annotations

from dataclasses import dataclass

from .energy import EnergyParams, passes_threshold, residual_after_hop, tx_energy
from .errors import EmptyNetworkError
from .model import NetworkState, distance, farthest_node


@dataclass(frozen=True, slots=True)
class CandidateScore:
    """Selection inputs for one neighbor, all from the same table snapshot.

    hop_energy is the transmit cost from the current chain tail at the
    table distance; residual_after is the candidate's own projected energy
    after relaying once over that distance.
    """

    node_id: int
    hop_energy: float
    residual_after: float
    dist: float
    congestion: float
    failure_prob: float


@dataclass(frozen=True, slots=True)
class LongLinkEvent:
    """Audit record for a fallback hop taken when no neighbor qualified."""

    from_id: int
    to_id: int
    dist: float
    in_range: bool
    passed_threshold: bool
    transient_failed: bool


@dataclass(frozen=True, slots=True)
class Chain:
    """An ordered simple path over all alive node ids.

    order[0] is the farthest alive node from the BS at build time; every
    alive id appears exactly once (the loop-back guarantee). long_links
    records any fallback hops taken to keep that guarantee.
    """

    order: tuple[int, ...]
    built_at_round: int = 0
    long_links: tuple[LongLinkEvent, ...] = ()


def eligible_neighbors(
    current: int,
    visited: set[int],
    state: NetworkState,
    params: EnergyParams,
) -> list[CandidateScore]:
    """Score every node eligible to extend the chain from `current`.

    Eligible means: alive, not already on the chain (loop-back discard),
    within comm_range by table distance, retains more than the threshold
    after a projected relay, and not transiently failed this round.
    Congestion and failure probability are read live from node state.
    """
    cur_pos = state.table.position_of(current)
    comm_range = state.config.comm_range
    bits = params.packet_bits
    scores = []
    for node in state.nodes:
        if not node.alive or node.id in visited or node.id in state.transient_failed:
            continue
        d = distance(cur_pos, state.table.position_of(node.id))
        if d > comm_range:
            continue
        if not passes_threshold(node, d, params):
            continue
        scores.append(
            CandidateScore(
                node_id=node.id,
                hop_energy=tx_energy(bits, d, params),
                residual_after=residual_after_hop(node, d, params),
                dist=d,
                congestion=node.congestion,
                failure_prob=node.failure_prob,
            )
        )
    return scores


def select_next(current: int, candidates: list[CandidateScore]) -> int | None:
    """Pick the next chain node by the four-tier preference cascade.

    With MinEnergy / MaxResidual / MinDist / MinCongestion taken over the
    candidate list:

      tier 1: min hop energy AND max residual AND min distance AND min congestion
      tier 2: min hop energy AND max residual
      tier 3: min hop energy AND min distance
      tier 4: min hop energy

    The first non-empty tier wins; ties inside it break by lowest failure
    probability, then lowest id. Returns None iff there are no candidates.
    (Tier 4 is always non-empty, so a candidate list never comes up empty-handed.)
    """
    if not candidates:
        return None
    min_energy = min(c.hop_energy for c in candidates)
    max_residual = max(c.residual_after for c in candidates)
    min_dist = min(c.dist for c in candidates)
    min_congestion = min(c.congestion for c in candidates)

    tiers = (
        lambda c: (
            c.hop_energy == min_energy
            and c.residual_after == max_residual
            and c.dist == min_dist
            and c.congestion == min_congestion
        ),
        lambda c: c.hop_energy == min_energy and c.residual_after == max_residual,
        lambda c: c.hop_energy == min_energy and c.dist == min_dist,
        lambda c: c.hop_energy == min_energy,
    )
    for tier in tiers:
        winners = [c for c in candidates if tier(c)]
        if winners:
            best = min(winners, key=lambda c: (c.failure_prob, c.node_id))
            return best.node_id
    return None  # unreachable: tier 4 always matches


def _long_link_fallback(
    current: int,
    visited: set[int],
    state: NetworkState,
    params: EnergyParams,
) -> tuple[int, LongLinkEvent]:
    """Dead-end escape: jump to the unvisited alive node with the best residual.

    Range, threshold and transient-failure filters are ignored here; the
    chain must cover every alive node, so a long link is taken and logged.
    Ties break by lowest id.
    """
    cur_pos = state.table.position_of(current)
    best = None
    best_res = None
    best_d = 0.0
    for node in state.nodes:
        if not node.alive or node.id in visited:
            continue
        d = distance(cur_pos, state.table.position_of(node.id))
        res = residual_after_hop(node, d, params)
        if best_res is None or res > best_res:
            best, best_res, best_d = node, res, d
    assert best is not None, "fallback called with no unvisited alive nodes"
    event = LongLinkEvent(
        from_id=current,
        to_id=best.id,
        dist=best_d,
        in_range=best_d <= state.config.comm_range,
        passed_threshold=passes_threshold(best, best_d, params),
        transient_failed=best.id in state.transient_failed,
    )
    return best.id, event


def build_chain(
    state: NetworkState, params: EnergyParams, round_no: int = 0
) -> Chain:
    """Build the parametric chain over all alive nodes.

    Starts at the farthest node from the BS and extends one hop at a time
    via eligible_neighbors + select_next. When no neighbor qualifies but
    unvisited alive nodes remain, the long-link fallback keeps the chain
    complete and the event is recorded.
    """
    n_alive = len(state.alive_ids())
    if n_alive == 0:
        raise EmptyNetworkError("cannot build a chain over an empty network")
    current = farthest_node(state)
    order = [current]
    visited = {current}
    events: list[LongLinkEvent] = []
    while len(order) < n_alive:
        candidates = eligible_neighbors(current, visited, state, params)
        nxt = select_next(current, candidates)
        if nxt is None:
            nxt, event = _long_link_fallback(current, visited, state, params)
            events.append(event)
        order.append(nxt)
        visited.add(nxt)
        current = nxt
    return Chain(order=tuple(order), built_at_round=round_no, long_links=tuple(events))


def build_greedy_baseline(state: NetworkState, round_no: int = 0) -> Chain:
    """Greedy baseline: always hop to the nearest unvisited alive node.

    No threshold, congestion or failure inputs; ties break by lowest id.
    """
    n_alive = len(state.alive_ids())
    if n_alive == 0:
        raise EmptyNetworkError("cannot build a chain over an empty network")
    current = farthest_node(state)
    order = [current]
    visited = {current}
    while len(order) < n_alive:
        cur_pos = state.table.position_of(current)
        best = None
        best_d = None
        for node in state.nodes:
            if not node.alive or node.id in visited:
                continue
            d = distance(cur_pos, state.table.position_of(node.id))
            if best_d is None or d < best_d:
                best, best_d = node.id, d
        order.append(best)
        visited.add(best)
        current = best
    return Chain(order=tuple(order), built_at_round=round_no)


def reconstruct_chain(
    state: NetworkState,
    params: EnergyParams,
    round_no: int = 0,
    mode: str = "parametric",
) -> Chain:
    """Full rebuild over the currently-alive nodes (after deaths or on schedule)."""
    if mode == "baseline":
        return build_greedy_baseline(state, round_no)
    return build_chain(state, params, round_no)
