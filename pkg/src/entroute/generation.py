"""Topology generators and probabilistic entanglement generation.

Random topologies are Erdos-Renyi G(n, p) with p = min(1, 2 ln n / n),
redrawn until connected (bounded retries).  Link distances are uniform on
[0.5, 1.5] times the requested average; node capacities are uniform integers
on [1, round(2 * avg - 1)] so their mean tracks the requested average while
staying >= 1.

Entanglement generation budgets each node's qubits across its incident
links in synchronized rounds.  In every round each link, visited in
ascending (u, v) order (which walks each node's neighbors in ascending id
order), claims one qubit-slot pair while both endpoints still have free
qubits; rounds repeat until no link can pair.  Each claimed slot pair makes
exactly one Bell-pair attempt, succeeding independently with probability
exp(-alpha * distance); failed attempts release their qubits but are not
retried.  One uniform draw per attempt, taken from a per-link substream, is
compared against that threshold, so lowering alpha never shrinks the
generated edge set for a fixed seed.
"""

from __future__ import annotations

import math

from .errors import GenerationFailureError, InvalidParameterError
from .network import (
    EntangledGraph,
    EntangledLink,
    PhysicalLink,
    PhysicalNetwork,
    QuantumNode,
)
from .rng import RngStream

CONNECTIVITY_RETRY_BUDGET = 100


def entanglement_probability(distance_km: float, alpha: float) -> float:
    """Per-attempt success probability exp(-alpha * distance)."""
    if distance_km < 0:
        raise InvalidParameterError(f"distance must be >= 0, got {distance_km}")
    if alpha < 0:
        raise InvalidParameterError(f"alpha must be >= 0, got {alpha}")
    return math.exp(-alpha * distance_km)


def _is_connected(node_count: int, edges: list[tuple[int, int]]) -> bool:
    if node_count == 0:
        return True
    adjacency: list[list[int]] = [[] for _ in range(node_count)]
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    seen = [False] * node_count
    seen[0] = True
    stack = [0]
    reached = 1
    while stack:
        x = stack.pop()
        for y in adjacency[x]:
            if not seen[y]:
                seen[y] = True
                reached += 1
                stack.append(y)
    return reached == node_count


def generate_topology(
    node_count: int,
    avg_distance_km: float,
    avg_capacity: float,
    rng: RngStream,
) -> PhysicalNetwork:
    """Connected random network with the requested average distance/capacity."""
    if node_count < 2:
        raise InvalidParameterError(f"need at least 2 nodes, got {node_count}")
    if avg_distance_km <= 0:
        raise InvalidParameterError("average distance must be positive")
    if avg_capacity < 1:
        raise InvalidParameterError("average capacity must be >= 1")

    p = min(1.0, 2.0 * math.log(node_count) / node_count)
    edges: list[tuple[int, int]] | None = None
    for _ in range(CONNECTIVITY_RETRY_BUDGET):
        candidate = [
            (u, v)
            for u in range(node_count)
            for v in range(u + 1, node_count)
            if rng.random() < p
        ]
        if _is_connected(node_count, candidate):
            edges = candidate
            break
    if edges is None:
        raise GenerationFailureError(
            f"no connected graph on {node_count} nodes within "
            f"{CONNECTIVITY_RETRY_BUDGET} attempts"
        )

    # Distances and capacities are monotone transforms of raw uniforms so
    # that sweeping the averages preserves per-seed orderings.
    links = tuple(
        PhysicalLink(u, v, (0.5 + rng.random()) * avg_distance_km)
        for u, v in edges
    )
    cap_max = max(1, round(2.0 * avg_capacity - 1.0))
    nodes = tuple(
        QuantumNode(i, 1 + min(int(rng.random() * cap_max), cap_max - 1))
        for i in range(node_count)
    )
    return PhysicalNetwork(nodes, links)


def generate_grid(
    rows: int, cols: int, distance_km: float, capacity: int
) -> PhysicalNetwork:
    """rows x cols grid with uniform link distance and node capacity."""
    if rows < 2 or cols < 2:
        raise InvalidParameterError(f"grid needs rows, cols >= 2, got {rows}x{cols}")
    if capacity < 1:
        raise InvalidParameterError(f"capacity must be >= 1, got {capacity}")
    if distance_km <= 0:
        raise InvalidParameterError("distance must be positive")

    nodes = tuple(QuantumNode(i, capacity) for i in range(rows * cols))
    links = []
    for r in range(rows):
        for c in range(cols):
            here = r * cols + c
            if c + 1 < cols:
                links.append(PhysicalLink(here, here + 1, distance_km))
            if r + 1 < rows:
                links.append(PhysicalLink(here, here + cols, distance_km))
    return PhysicalNetwork(nodes, tuple(links))


def _slot_pair_counts(net: PhysicalNetwork) -> list[int]:
    """Attempts per link from the synchronized-round slot pairing."""
    free = [node.capacity for node in net.nodes]
    attempts = [0] * len(net.links)
    paired = True
    while paired:
        paired = False
        for index, link in enumerate(net.links):
            if free[link.u] > 0 and free[link.v] > 0:
                free[link.u] -= 1
                free[link.v] -= 1
                attempts[index] += 1
                paired = True
    return attempts


def generate_entanglement(
    net: PhysicalNetwork, alpha: float, rng: RngStream
) -> EntangledGraph:
    """One synchronized generation run over every physical link.

    Attempt counts per link come from the round-based slot pairing, which
    never exceeds either endpoint's qubit budget; failed attempts release
    their qubits and are not retried.
    """
    if alpha < 0:
        raise InvalidParameterError(f"alpha must be >= 0, got {alpha}")

    links: list[EntangledLink] = []
    next_id = 0
    for link_index, (plink, attempts) in enumerate(
        zip(net.links, _slot_pair_counts(net))
    ):
        if attempts == 0:
            continue
        p_success = entanglement_probability(plink.distance_km, alpha)
        link_rng = rng.substream(link_index)
        for _ in range(attempts):
            if link_rng.random() < p_success:
                links.append(
                    EntangledLink(next_id, plink.u, plink.v, plink.distance_km)
                )
                next_id += 1
    return EntangledGraph(net.nodes, links, net)
