"""Radio energy accounting and the threshold eligibility test.

Uses the first-order radio model standard in chain-routing work:
transmitting k bits over d meters costs k*e_elec + k*e_amp*d^alpha,
receiving costs k*e_elec. alpha = 1 reproduces the plain linear
distance*coefficient form; alpha = 2 is the free-space default.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError
from .model import NodeState


@dataclass(frozen=True, slots=True)
class EnergyParams:
    """Radio coefficients, threshold and packet size.

    Args:
        e_elec: electronics cost, joules/bit (paid on both tx and rx)
        e_amp: amplifier cost, joules/bit/m^alpha
        alpha: path-loss exponent (>= 1; 2 by default)
        threshold: minimum energy a candidate must retain after a projected
            relay to stay chain-eligible, joules. 0 disables the check;
            see default_threshold() for the recommended setting.
        packet_bits: fixed data packet length, bits
    """

    e_elec: float = 5e-8
    e_amp: float = 1e-10
    alpha: float = 2.0
    threshold: float = 0.0
    packet_bits: int = 2000

    def validate(self, prefix: str = "") -> None:
        def bad(msg: str):
            raise ConfigurationError(prefix + msg)

        if self.e_elec <= 0:
            bad(f"e_elec must be > 0 (got {self.e_elec})")
        if self.e_amp <= 0:
            bad(f"e_amp must be > 0 (got {self.e_amp})")
        if self.alpha < 1:
            bad(f"alpha must be >= 1 (got {self.alpha})")
        if self.threshold < 0:
            bad(f"threshold must be >= 0 (got {self.threshold})")
        if self.packet_bits < 1:
            bad(f"packet_bits must be >= 1 (got {self.packet_bits})")


def tx_energy(bits: int, d: float, params: EnergyParams) -> float:
    """Energy to transmit `bits` over distance `d` meters.

    Strictly increasing in d for d > 0 and linear in bits.
    """
    if bits <= 0:
        raise ValueError(f"bits must be > 0 (got {bits})")
    if d < 0:
        raise ValueError(f"distance must be >= 0 (got {d})")
    return bits * params.e_elec + bits * params.e_amp * d**params.alpha


def rx_energy(bits: int, params: EnergyParams) -> float:
    """Energy to receive `bits`; distance-independent electronics cost."""
    if bits <= 0:
        raise ValueError(f"bits must be > 0 (got {bits})")
    return bits * params.e_elec


def hop_cost(d: float, params: EnergyParams) -> float:
    """Full relay cost at distance d: one receive plus one transmit."""
    return rx_energy(params.packet_bits, params) + tx_energy(
        params.packet_bits, d, params
    )


def residual_after_hop(node: NodeState, d: float, params: EnergyParams) -> float:
    """Projected energy left after the node relays one packet over d meters.

    Charges one receive and one transmit at the candidate hop distance
    (the candidate's eventual onward distance is unknown at selection
    time). May be negative; the caller interprets.
    """
    return node.energy - hop_cost(d, params)


def passes_threshold(node: NodeState, d: float, params: EnergyParams) -> bool:
    """True iff the node would retain more than `threshold` joules post-relay."""
    return residual_after_hop(node, d, params) > params.threshold


def default_threshold(params: EnergyParams, comm_range: float) -> float:
    """Recommended eligibility threshold: twice the worst-case in-range relay cost.

    A node admitted with this margin can always complete at least one more
    full relay at maximum range. Thresholding is notoriously touchy in
    chain protocols, so it stays a first-class config knob; this is only
    the default.
    """
    return 2.0 * hop_cost(comm_range, params)
