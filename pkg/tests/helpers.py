"""State builders shared across the test modules."""

from aquachain import LocalizationTable, NetworkConfig, NetworkState, NodeState, Position


def make_node(node_id, xyz, energy=0.5, congestion=0.0, failure_prob=0.0, alive=True):
    return NodeState(
        id=node_id,
        position=Position(*xyz),
        energy=energy,
        congestion=congestion,
        failure_prob=failure_prob,
        alive=alive,
    )


def make_state(nodes, **config_kwargs):
    """Wrap hand-built nodes in a NetworkState with a fresh table."""
    kwargs = {"n": len(nodes), "area": (100.0, 100.0, 50.0)}
    kwargs.update(config_kwargs)
    config = NetworkConfig(**kwargs)
    table = LocalizationTable()
    table.refresh(nodes, 0)
    return NetworkState(config=config, nodes=nodes, table=table)


def random_state(rng, n, box=(100.0, 100.0, 50.0), comm_range=60.0,
                 energy_lo=0.002, energy_hi=0.5, fail_some=True):
    """A randomized population exercising every selection input.

    Energies reach down to near-exhaustion so threshold filtering and the
    fallback path both fire; a random subset is marked transiently failed.
    """
    nodes = []
    for i in range(n):
        nodes.append(
            NodeState(
                id=i,
                position=Position(
                    rng.uniform(0.0, box[0]),
                    rng.uniform(0.0, box[1]),
                    rng.uniform(0.0, box[2]),
                ),
                energy=rng.uniform(energy_lo, energy_hi),
                congestion=rng.random(),
                failure_prob=rng.random(),
            )
        )
    state = make_state(nodes, area=box, comm_range=comm_range)
    if fail_some:
        state.transient_failed = {i for i in range(n) if rng.random() < 0.15}
    return state
