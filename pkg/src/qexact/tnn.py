"""The tunable network: a set of active monomial gates on a read-out register.

Each active gate XORs its monomial onto the read-out bit, so the network
expresses the XOR of the active monomials.  A gate update is a membership
toggle, which makes updating with the same mask twice a no-op.
"""

from __future__ import annotations

from dataclasses import dataclass

from .boolfun import Anf, BooleanFunction, Mask, function_of


@dataclass(frozen=True, slots=True)
class Network:
    n: int
    active_gates: frozenset[Mask]

    def __post_init__(self) -> None:
        for u in self.active_gates:
            if u.n != self.n:
                raise ValueError("gate mask width does not match network dimension")

    @classmethod
    def empty(cls, n: int) -> "Network":
        return cls(n, frozenset())

    def sorted_gate_ints(self) -> list[int]:
        """Active gate masks as sorted integers, for run logs."""
        return sorted(u.bits for u in self.active_gates)


def toggle_gate(net: Network, u: Mask) -> Network:
    """Flip u's membership in the active gate set."""
    if u.n != net.n:
        raise ValueError(f"dimension mismatch: {u.n} != {net.n}")
    return Network(net.n, net.active_gates ^ {u})


def hypothesis(net: Network) -> BooleanFunction:
    """Truth table of the XOR of all active monomials (empty set: zero)."""
    return function_of(Anf(net.n, net.active_gates))
