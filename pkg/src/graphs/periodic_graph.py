"""The infinite extension graph of a realization, explored through its
connection patterns over one fundamental domain of the translation lattice."""
from collections import deque
from functools import lru_cache
from typing import Dict, List, NamedTuple, Optional, Tuple
import logging

import networkx as nx

from src.groups.grid_algebra import GridAutomorphism, Vector, unit_vectors
from src.groups.lattice import Lattice
from src.realizations.realization import (
    ConnectionPattern,
    ExtVertex,
    RealizationSpec,
    coset_neighbors,
    is_connected,
    origin_twist,
    periodic_pattern,
)

logger = logging.getLogger(__name__)

GROWTH_RADII = 10


class GrowthVector(NamedTuple):
    counts: Tuple[int, ...]
    connected: bool = True

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.counts) + ("\tC" if self.connected else "\tD")


class PeriodicityWitness(NamedTuple):
    """Axis periods with their translation witnesses.

    Each witness acts on blocks as v -> v + p_i e_i and keeps labels, except
    that with ``origin_twist`` set it swaps labels on the origin block and on
    the block it comes from.
    """
    p: Tuple[int, ...]
    witnesses: Tuple[GridAutomorphism, ...]
    origin_twist: bool = False


class PeriodicGraph:
    """Adjacency of the extension graph from a pattern table indexed by
    lattice residues and directions.

    The table is kept in the periodic labeling (least movers everywhere);
    ``neighbors`` speaks the anchor labeling, which differs from it only by
    the origin twist.
    """

    def __init__(self, spec: RealizationSpec):
        self.spec = spec
        self.dim = spec.dim
        self.lattice: Lattice = spec.group.lattice
        self.directions = unit_vectors(self.dim)
        self.twist = origin_twist(spec)
        self._patterns: Dict[Tuple[Vector, Vector], ConnectionPattern] = {}

    def pattern(self, v: Vector, e: Vector) -> ConnectionPattern:
        rep = self.lattice.reduce(v)
        key = (rep, e)
        pattern = self._patterns.get(key)
        if pattern is None:
            pattern = periodic_pattern(self.spec, rep, e)
            self._patterns[key] = pattern
        return pattern

    def relabel(self, u: ExtVertex) -> ExtVertex:
        """Switch between anchor and periodic labels (an involution)."""
        if self.twist and not any(u.v):
            return ExtVertex(u.v, 1 - u.eps)
        return u

    def periodic_neighbors(self, u: ExtVertex) -> List[ExtVertex]:
        out = []
        if self.spec.saturated:
            out.append(ExtVertex(u.v, 1 - u.eps))
        for e in self.directions:
            target = tuple(a + b for a, b in zip(u.v, e))
            for near, far in self.pattern(u.v, e).bits:
                if near == u.eps:
                    out.append(ExtVertex(target, far))
        return out

    def neighbors(self, u: ExtVertex) -> List[ExtVertex]:
        return [self.relabel(w) for w in self.periodic_neighbors(self.relabel(u))]

    def degree(self) -> int:
        return len(self.neighbors(ExtVertex((0,) * self.dim, 0)))

    def distances(self, root: ExtVertex, radius: int) -> Dict[ExtVertex, int]:
        dist = {root: 0}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if dist[u] == radius:
                continue
            for w in self.neighbors(u):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist


@lru_cache(maxsize=1024)
def graph_for(spec: RealizationSpec) -> PeriodicGraph:
    return PeriodicGraph(spec)


def origin(spec: RealizationSpec) -> ExtVertex:
    return ExtVertex((0,) * spec.dim, 0)


def neighbors(spec: RealizationSpec, u: ExtVertex) -> List[ExtVertex]:
    """Neighbors of u computed directly on cosets of L."""
    return coset_neighbors(spec, ExtVertex(tuple(u.v), u.eps))


def _ball_orders(graph: PeriodicGraph, root: ExtVertex, radii: int) -> Tuple[int, ...]:
    dist = graph.distances(root, radii)
    counts = [0] * (radii + 1)
    for d in dist.values():
        counts[d] += 1
    orders = []
    total = counts[0]
    for r in range(1, radii + 1):
        total += counts[r]
        orders.append(total)
    return tuple(orders)


@lru_cache(maxsize=8192)
def growth(spec: RealizationSpec, radii: int = GROWTH_RADII) -> GrowthVector:
    """Orders of balls of radius 1..radii, checked from two base vertices."""
    graph = graph_for(spec)
    counts = _ball_orders(graph, origin(spec), radii)
    other = ExtVertex(unit_vectors(spec.dim)[0], 1)
    if _ball_orders(graph, other, radii) != counts:
        raise RuntimeError(f"{spec.group_id}: growth depends on the base vertex")
    return GrowthVector(counts, is_connected(spec))


def voltage_graph(spec: RealizationSpec) -> Tuple[nx.MultiDiGraph, Lattice]:
    """Finite quotient on residues x periodic labels; each edge carries its
    voltage."""
    graph = graph_for(spec)
    lattice = graph.lattice
    quotient = nx.MultiDiGraph()
    for rep in lattice.fundamental_domain():
        for eps in (0, 1):
            quotient.add_node(ExtVertex(rep, eps))
    for rep in lattice.fundamental_domain():
        for e in graph.directions[::2]:
            target = tuple(a + b for a, b in zip(rep, e))
            target_rep = lattice.reduce(target)
            voltage = tuple(a - b for a, b in zip(target, target_rep))
            for near, far in graph.pattern(rep, e).bits:
                quotient.add_edge(ExtVertex(rep, near), ExtVertex(target_rep, far), voltage=voltage)
        if spec.saturated:
            quotient.add_edge(ExtVertex(rep, 0), ExtVertex(rep, 1), voltage=(0,) * spec.dim)
    return quotient, lattice


def voltage_connectivity(spec: RealizationSpec) -> bool:
    """Connectivity of the infinite lift: the quotient is connected and the
    cycle voltages span the whole translation lattice."""
    quotient, lattice = voltage_graph(spec)
    undirected = quotient.to_undirected(as_view=True)
    if not nx.is_connected(undirected):
        return False
    root = next(iter(quotient.nodes))
    potential = {root: (0,) * spec.dim}
    for u, w in nx.bfs_edges(undirected, root):
        if quotient.has_edge(u, w):
            voltage = next(iter(quotient.get_edge_data(u, w).values()))["voltage"]
            potential[w] = tuple(a + b for a, b in zip(potential[u], voltage))
        else:
            voltage = next(iter(quotient.get_edge_data(w, u).values()))["voltage"]
            potential[w] = tuple(a - b for a, b in zip(potential[u], voltage))
    cycles = []
    for u, w, data in quotient.edges(data=True):
        cycle = tuple(a + b - c for a, b, c in zip(potential[u], data["voltage"], potential[w]))
        if any(cycle):
            cycles.append(cycle)
    return Lattice.from_vectors(cycles, spec.dim) == lattice


def ball(spec: RealizationSpec, radius: int, root: Optional[ExtVertex] = None,
         block_colors: bool = False, cap: int = 8) -> nx.Graph:
    """Induced subgraph on vertices within ``radius`` of ``root``.

    Edges carry ``kind``: ``edge`` for connections, ``block`` for in-block
    edges when ``block_colors`` is set, and ``pair`` for the block relation of
    non-saturated realizations in that mode.
    """
    if radius > cap:
        raise ValueError(f"Radius {radius} exceeds the configured cap {cap}")
    graph = graph_for(spec)
    root = root or origin(spec)
    dist = graph.distances(root, radius)
    result = nx.Graph(root=root)
    for u, d in dist.items():
        result.add_node(u, block=u.v, eps=u.eps, root=(u == root), dist=d)
    for u in dist:
        for w in graph.neighbors(u):
            if w in dist:
                in_block = w.v == u.v
                result.add_edge(u, w, kind="block" if (in_block and block_colors) else "edge")
        if block_colors and not spec.saturated:
            partner = ExtVertex(u.v, 1 - u.eps)
            if partner in dist:
                result.add_edge(u, partner, kind="pair")
    return result


def periodicity(spec: RealizationSpec) -> PeriodicityWitness:
    """Least p_i with p_i·e_i in the lattice; each shift is checked against
    the coset model on one fundamental domain."""
    graph = graph_for(spec)
    periods = spec.group.lattice.axis_periods()
    witnesses = []
    for i, p in enumerate(periods):
        shift = tuple(p if k == i else 0 for k in range(spec.dim))
        _check_shift(graph, shift)
        witnesses.append(GridAutomorphism.translation(shift))
    return PeriodicityWitness(tuple(periods), tuple(witnesses), bool(graph.twist))


def _check_shift(graph: PeriodicGraph, shift: Vector) -> None:
    def moved(u: ExtVertex) -> ExtVertex:
        return ExtVertex(tuple(a + b for a, b in zip(u.v, shift)), u.eps)

    spec = graph.spec
    for rep in graph.lattice.fundamental_domain():
        for eps in (0, 1):
            u = ExtVertex(rep, eps)
            expected = sorted(moved(w) for w in graph.periodic_neighbors(u))
            direct = sorted(graph.relabel(w) for w in coset_neighbors(spec, graph.relabel(moved(u))))
            if expected != direct:
                raise RuntimeError(f"{spec.group_id}: shift {shift} is not an automorphism")
