"""Canonical certificates of finite rooted graphs by individualization and
refinement, with pruning by automorphisms found along the way."""
from typing import Dict, Hashable, List, Optional, Sequence, Tuple
import hashlib

import networkx as nx

Cells = List[List[int]]

EDGE_CODES = {"edge": 0, "block": 1, "pair": 2}


class _Search:
    def __init__(self, adjacency: List[List[Tuple[int, int]]]):
        self.adjacency = adjacency
        self.n = len(adjacency)
        self.best_code: Optional[tuple] = None
        self.best_order: Optional[List[int]] = None
        self.automorphisms: List[List[int]] = []

    def refine(self, cells: Cells) -> Cells:
        while True:
            cell_of = [0] * self.n
            for index, cell in enumerate(cells):
                for v in cell:
                    cell_of[v] = index
            refined: Cells = []
            for cell in cells:
                if len(cell) == 1:
                    refined.append(cell)
                    continue
                groups: Dict[tuple, List[int]] = {}
                for v in cell:
                    signature = tuple(sorted((cell_of[w], c) for w, c in self.adjacency[v]))
                    groups.setdefault(signature, []).append(v)
                refined.extend(groups[key] for key in sorted(groups))
            if len(refined) == len(cells):
                return refined
            cells = refined

    def leaf(self, cells: Cells) -> None:
        order = [cell[0] for cell in cells]
        position = {v: k for k, v in enumerate(order)}
        edges = sorted(
            (min(position[v], position[w]), max(position[v], position[w]), c)
            for v in range(self.n) for w, c in self.adjacency[v] if v < w
        )
        code = (self.n, tuple(edges))
        if self.best_code is None or code < self.best_code:
            self.best_code = code
            self.best_order = order
        elif code == self.best_code:
            gamma = [0] * self.n
            for k, v in enumerate(order):
                gamma[v] = self.best_order[k]
            if any(gamma[v] != v for v in range(self.n)):
                self.automorphisms.append(gamma)

    def _orbit_roots(self, prefix: Sequence[int], cell: Sequence[int]) -> Dict[int, int]:
        parent = {v: v for v in cell}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for gamma in self.automorphisms:
            if all(gamma[p] == p for p in prefix):
                for v in cell:
                    w = gamma[v]
                    if w in parent:
                        a, b = find(v), find(w)
                        if a != b:
                            parent[max(a, b)] = min(a, b)
        return {v: find(v) for v in cell}

    def run(self, cells: Cells, prefix: List[int]) -> None:
        cells = self.refine(cells)
        target = None
        for index, cell in enumerate(cells):
            if len(cell) > 1 and (target is None or len(cell) < len(cells[target])):
                target = index
        if target is None:
            self.leaf(cells)
            return
        explored: List[int] = []
        for v in sorted(cells[target]):
            if explored:
                roots = self._orbit_roots(prefix, cells[target])
                if any(roots[v] == roots[u] for u in explored):
                    continue
            explored.append(v)
            rest = [w for w in cells[target] if w != v]
            child = cells[:target] + [[v], rest] + cells[target + 1:]
            self.run(child, prefix + [v])


def canonical_certificate(graph: nx.Graph, root: Hashable, edge_colors: bool = False) -> tuple:
    """Isomorphism-invariant code of a rooted graph.

    With ``edge_colors`` the ``kind`` edge attribute takes part, so only
    isomorphisms respecting edge kinds give equal codes.
    """
    nodes = sorted(graph.nodes)
    index = {v: i for i, v in enumerate(nodes)}
    adjacency: List[List[Tuple[int, int]]] = [[] for _ in nodes]
    for u, w, data in graph.edges(data=True):
        color = EDGE_CODES[data.get("kind", "edge")] if edge_colors else 0
        adjacency[index[u]].append((index[w], color))
        adjacency[index[w]].append((index[u], color))
    root_index = index[root]
    cells: Cells = [[root_index]]
    others = [i for i in range(len(nodes)) if i != root_index]
    if others:
        cells.append(others)
    search = _Search(adjacency)
    search.run(cells, [root_index])
    return search.best_code


def certificate_digest(code: tuple) -> str:
    return hashlib.sha256(repr(code).encode()).hexdigest()
