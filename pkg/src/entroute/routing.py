"""Path search, s-t min-cut, and the four demand-scheduling algorithms.

All searches operate on the unallocated portion of an entangled multigraph.
Scheduling never mutates the caller's graph: each scheduler works on a
private copy and records allocations in the returned schedule.

Determinism rules used throughout:
  * shortest paths break ties toward the lexicographically smallest node-id
    sequence, and toward the smallest link id among parallel edges;
  * equal path flexibilities resolve to the smallest demand id;
  * the randomized scheduler draws from substreams keyed by demand id.
"""

from __future__ import annotations

import heapq
import json
from collections import deque
from dataclasses import dataclass, field

from .errors import InvalidParameterError, InvariantViolationError
from .network import Demand, EntangledGraph
from .rng import RngStream


@dataclass(frozen=True, slots=True)
class Path:
    """A simple path of entangled links allocated to one demand."""

    demand_id: int
    nodes: tuple[int, ...]
    edges: tuple[int, ...]

    def __post_init__(self):
        if len(self.nodes) < 2 or len(self.edges) != len(self.nodes) - 1:
            raise InvalidParameterError(
                f"malformed path: {len(self.nodes)} nodes, {len(self.edges)} edges"
            )
        if len(set(self.nodes)) != len(self.nodes):
            raise InvalidParameterError(f"path repeats a node: {self.nodes}")

    @property
    def hop_count(self) -> int:
        return len(self.edges)


@dataclass(slots=True)
class CutResult:
    """A minimum s-t disconnecting set over unallocated entangled links."""

    demand_id: int
    cut_edge_ids: frozenset[int]
    flexibility: int


@dataclass(slots=True)
class RoutingSchedule:
    """Edge-disjoint path sets per demand plus the resulting traffic floor k."""

    demand_ids: tuple[int, ...]
    paths: dict[int, list[Path]] = field(default_factory=dict)
    k: int = 0
    consumed_edge_ids: set[int] = field(default_factory=set)
    allocation_sequence: list[int] = field(default_factory=list)

    def __post_init__(self):
        for did in self.demand_ids:
            self.paths.setdefault(did, [])

    @property
    def total_paths(self) -> int:
        return sum(len(ps) for ps in self.paths.values())

    @property
    def total_hops(self) -> int:
        return sum(p.hop_count for ps in self.paths.values() for p in ps)

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "demands": [
                {
                    "id": did,
                    "paths": [
                        {"nodes": list(p.nodes), "edges": list(p.edges)}
                        for p in self.paths[did]
                    ],
                }
                for did in self.demand_ids
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))


def _check_endpoints(g: EntangledGraph, src: int, dst: int) -> None:
    if src == dst:
        raise InvalidParameterError(f"src and dst must differ, got {src}")
    n = g.node_count
    if not (0 <= src < n and 0 <= dst < n):
        raise InvalidParameterError(f"endpoint outside graph: src={src} dst={dst}")


def shortest_entangled_path(
    g: EntangledGraph, src: int, dst: int, demand_id: int = -1
) -> Path | None:
    """Minimum-hop simple path over unallocated links, or None if disconnected.

    Among all minimum-hop paths the lexicographically smallest node sequence
    is returned; parallel links resolve to the smallest link id.
    """
    _check_endpoints(g, src, dst)
    links = g.links

    # Hop distances to dst restricted to unallocated links.
    dist = {dst: 0}
    queue = deque([dst])
    while queue:
        x = queue.popleft()
        if x == src:
            break
        d_next = dist[x] + 1
        for y, lid in g.incident(x):
            if y not in dist and not links[lid].allocated:
                dist[y] = d_next
                queue.append(y)
    if src not in dist:
        return None

    # Greedy descent: the smallest feasible next node is always extendable
    # to a minimum-hop completion, which yields the lexicographic minimum.
    nodes = [src]
    edges = []
    here = src
    while here != dst:
        step = None
        want = dist[here] - 1
        for y, lid in g.incident(here):
            if links[lid].allocated or dist.get(y) != want:
                continue
            if step is None or (y, lid) < step:
                step = (y, lid)
        if step is None:  # unreachable given the BFS above
            raise InvariantViolationError("shortest-path descent lost its frontier")
        nodes.append(step[0])
        edges.append(step[1])
        here = step[0]
    return Path(demand_id, tuple(nodes), tuple(edges))


def st_min_cut(
    g: EntangledGraph, src: int, dst: int, demand_id: int = -1
) -> CutResult:
    """Exact minimum s-t cut of the unallocated multigraph.

    Computed by BFS augmentation on unit capacities; by Menger's theorem the
    cut size equals the maximum number of edge-disjoint s-t paths.
    """
    _check_endpoints(g, src, dst)
    links = g.links
    usable = [not l.allocated for l in links]
    # Net flow per link, oriented from link.u to link.v.
    flow = [0] * len(links)

    def residual_ok(x: int, lid: int) -> bool:
        oriented = flow[lid] if x == links[lid].u else -flow[lid]
        return oriented < 1

    value = 0
    while True:
        parents: dict[int, tuple[int, int] | None] = {src: None}
        queue = deque([src])
        found = False
        while queue and not found:
            x = queue.popleft()
            for y, lid in g.incident(x):
                if y in parents or not usable[lid] or not residual_ok(x, lid):
                    continue
                parents[y] = (x, lid)
                if y == dst:
                    found = True
                    break
                queue.append(y)
        if not found:
            break
        node = dst
        while node != src:
            x, lid = parents[node]  # type: ignore[misc]
            flow[lid] += 1 if x == links[lid].u else -1
            node = x
        value += 1

    reachable = {src}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        for y, lid in g.incident(x):
            if y not in reachable and usable[lid] and residual_ok(x, lid):
                reachable.add(y)
                queue.append(y)
    cut = frozenset(
        l.id
        for l in links
        if usable[l.id] and ((l.u in reachable) != (l.v in reachable))
    )
    if len(cut) != value:
        raise InvariantViolationError(
            f"max-flow/min-cut mismatch: flow {value}, cut size {len(cut)}"
        )
    return CutResult(demand_id, cut, value)


def path_flexibility(g: EntangledGraph, d: Demand) -> int:
    """Size of the minimum cut separating the demand's endpoints."""
    return st_min_cut(g, d.src, d.dst, d.id).flexibility


def allocate_path(schedule: RoutingSchedule, g: EntangledGraph, p: Path) -> None:
    """Claim a path's links and append it to its demand's path set."""
    links = g.links
    for lid in p.edges:
        if links[lid].allocated:
            raise InvariantViolationError(
                f"double allocation of entangled link {lid}"
            )
    for lid in p.edges:
        links[lid].allocated = True
        schedule.consumed_edge_ids.add(lid)
    schedule.paths.setdefault(p.demand_id, []).append(p)
    schedule.allocation_sequence.append(p.demand_id)


def _finalize(schedule: RoutingSchedule, demands: tuple[Demand, ...]) -> RoutingSchedule:
    schedule.k = min(len(schedule.paths[d.id]) for d in demands)
    return schedule


def _validate_demands(g: EntangledGraph, demands) -> tuple[Demand, ...]:
    demands = tuple(demands)
    if not demands:
        raise InvalidParameterError("demand set must be nonempty")
    seen = set()
    for d in demands:
        _check_endpoints(g, d.src, d.dst)
        if d.id in seen:
            raise InvalidParameterError(f"duplicate demand id {d.id}")
        seen.add(d.id)
    return demands


def _fcfs_schedule(g: EntangledGraph, demands, find_path) -> RoutingSchedule:
    """Queue discipline shared by the sequential-style schedulers.

    Pop the front demand and seek a path: on success allocate it and requeue
    the demand at the rear; on failure drop the demand for good (keeping any
    paths it already holds).
    """
    demands = _validate_demands(g, demands)
    work = g.copy()
    schedule = RoutingSchedule(tuple(d.id for d in demands))
    queue = deque(demands)
    while queue:
        d = queue.popleft()
        p = find_path(work, d)
        if p is not None:
            allocate_path(schedule, work, p)
            queue.append(d)
    return _finalize(schedule, demands)


def smpsa_schedule(g: EntangledGraph, demands) -> RoutingSchedule:
    """Sequential scheduler: FCFS round-robin over minimum-hop paths."""
    return _fcfs_schedule(
        g, demands, lambda work, d: shortest_entangled_path(work, d.src, d.dst, d.id)
    )


def rmpsa_schedule(g: EntangledGraph, demands, rng: RngStream) -> RoutingSchedule:
    """FCFS round-robin baseline that picks a random simple path per service."""
    demand_rngs: dict[int, RngStream] = {}

    def find_random(work: EntangledGraph, d: Demand) -> Path | None:
        sub = demand_rngs.setdefault(d.id, rng.substream(d.id))
        return _random_simple_path(work, d.src, d.dst, sub, d.id)

    return _fcfs_schedule(g, demands, find_random)


def dmpsa_schedule(g: EntangledGraph, demands) -> RoutingSchedule:
    """FCFS round-robin baseline minimizing total physical distance."""
    return _fcfs_schedule(
        g, demands, lambda work, d: _min_distance_path(work, d.src, d.dst, d.id)
    )


def mcsa_schedule(
    g: EntangledGraph, demands, per_demand_cap: int | None = None
) -> RoutingSchedule:
    """Min-cut-prioritized scheduler.

    Repeatedly recompute every remaining demand's path flexibility on the
    current graph, serve the demand with the smallest value (ties to the
    smallest id), and give it shortest paths until its budget
    min(C_src, C_dst) runs out or the graph has none left.

    ``per_demand_cap`` overrides the capacity-derived budget; the grid
    feasibility check uses it to probe 1-path-per-demand schedules.
    """
    demands = _validate_demands(g, demands)
    work = g.copy()
    schedule = RoutingSchedule(tuple(d.id for d in demands))
    remaining = list(demands)
    while remaining:
        best_index = 0
        best_key = None
        for index, d in enumerate(remaining):
            key = (st_min_cut(work, d.src, d.dst, d.id).flexibility, d.id)
            if best_key is None or key < best_key:
                best_key = key
                best_index = index
        d = remaining.pop(best_index)
        budget = (
            per_demand_cap
            if per_demand_cap is not None
            else min(work.capacity_of(d.src), work.capacity_of(d.dst))
        )
        while budget > 0:
            p = shortest_entangled_path(work, d.src, d.dst, d.id)
            if p is None:
                break
            allocate_path(schedule, work, p)
            budget -= 1
    return _finalize(schedule, demands)


def _random_simple_path(
    g: EntangledGraph, src: int, dst: int, rng: RngStream, demand_id: int
) -> Path | None:
    """Depth-first search with per-node shuffled neighbor order.

    Returns the DFS tree path to dst, which is simple by construction and an
    exact function of the stream state.
    """
    _check_endpoints(g, src, dst)
    links = g.links
    parents: dict[int, tuple[int, int] | None] = {src: None}
    stack = [src]
    while stack:
        x = stack.pop()
        if x == dst:
            break
        candidates = [
            (y, lid)
            for y, lid in g.incident(x)
            if y not in parents and not links[lid].allocated
        ]
        rng.shuffle(candidates)
        for y, lid in candidates:
            if y not in parents:
                parents[y] = (x, lid)
                stack.append(y)
    if dst not in parents:
        return None
    nodes = [dst]
    edges = []
    node = dst
    while node != src:
        x, lid = parents[node]  # type: ignore[misc]
        edges.append(lid)
        nodes.append(x)
        node = x
    return Path(demand_id, tuple(reversed(nodes)), tuple(reversed(edges)))


def _min_distance_path(
    g: EntangledGraph, src: int, dst: int, demand_id: int
) -> Path | None:
    """Minimum total physical distance path over unallocated links."""
    _check_endpoints(g, src, dst)
    links = g.links

    # Dijkstra labels toward dst; weights are strictly positive.
    dist: dict[int, float] = {}
    heap: list[tuple[float, int]] = [(0.0, dst)]
    while heap:
        d_x, x = heapq.heappop(heap)
        if x in dist:
            continue
        dist[x] = d_x
        for y, lid in g.incident(x):
            if y not in dist and not links[lid].allocated:
                heapq.heappush(heap, (d_x + links[lid].physical_distance_km, y))
    if src not in dist:
        return None

    nodes = [src]
    edges = []
    here = src
    seen = {src}
    while here != dst:
        step = None
        for y, lid in g.incident(here):
            if links[lid].allocated or y not in dist or y in seen:
                continue
            key = (links[lid].physical_distance_km + dist[y], y, lid)
            if step is None or key < step:
                step = key
        if step is None:
            raise InvariantViolationError("distance descent lost its frontier")
        _, y, lid = step
        nodes.append(y)
        edges.append(lid)
        seen.add(y)
        here = y
    return Path(demand_id, tuple(nodes), tuple(edges))
