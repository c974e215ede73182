"""Equivalence of realizations and thinning to one representative per class.

An equivalence may be normalized to fix the origin block, so it is a point
map a of the grid together with a label flip f(v) per block:
(v, eps) -> (v·a, eps xor f(v)). The flips are solved in the periodic
labeling on a torus twice the common period q of both pattern tables. When
that torus has no solution but the same box without wrap-around edges does,
tori of 4q and 8q are tried before the map a is rejected.
"""
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple
import itertools
import logging
import math

from src.graphs.periodic_graph import graph_for, growth
from src.groups.grid_algebra import GridAutomorphism, SignedPermutation, hyperoctahedral
from src.groups.space_group import stabilizer_origin
from src.realizations.realization import (
    ConnectionPattern,
    RealizationSpec,
    combination_string,
    degree,
    origin_twist,
)

logger = logging.getLogger(__name__)

TORUS_SCALES = (2, 4, 8)


class EquivalenceWitness(NamedTuple):
    """Block-preserving isomorphism fixing the origin block.

    ``flips`` are in the periodic labeling over one torus of ``period``;
    ``twist`` is the difference of the two origin twists and turns them into
    flips of the anchor labels. ``k`` is the stabilizer element of the second
    group that realizes the flip on the origin block (m or the identity).
    """
    a: GridAutomorphism
    period: Tuple[int, ...]
    flips: Tuple[int, ...]
    twist: int = 0
    k: Optional[GridAutomorphism] = None

    @property
    def blockflip(self) -> bool:
        return bool(self.flips[0] ^ self.twist)

    def flip(self, v) -> int:
        """Label flip of the block over v, in anchor labels."""
        index = 0
        for c, q in zip(v, self.period):
            index = index * q + c % q
        return self.flips[index] ^ (self.twist if not any(v) else 0)


def invariants(spec: RealizationSpec) -> tuple:
    return (spec.dim, spec.saturated, degree(spec), combination_string(spec))


def _allowed(p1: ConnectionPattern, p2: ConnectionPattern) -> List[Tuple[int, int]]:
    if len(p1) != len(p2):
        return []
    return [(a, b) for a in (0, 1) for b in (0, 1) if p1.flipped(a, b) == p2]


def _solve(count: int, constraints: List[Tuple[int, int, List[Tuple[int, int]]]]) -> Optional[List[int]]:
    """Backtracking with forced-value propagation over binary variables."""
    adjacency: List[List[Tuple[int, frozenset]]] = [[] for _ in range(count)]
    for i, k, allowed in constraints:
        adjacency[i].append((k, frozenset(allowed)))
        adjacency[k].append((i, frozenset((b, a) for a, b in allowed)))
    value: List[Optional[int]] = [None] * count

    def assign(var: int, val: int, trail: List[int]) -> bool:
        stack = [(var, val)]
        while stack:
            v, x = stack.pop()
            if value[v] is not None:
                if value[v] != x:
                    return False
                continue
            value[v] = x
            trail.append(v)
            for k, allowed in adjacency[v]:
                options = {b for a, b in allowed if a == x}
                if not options:
                    return False
                if value[k] is not None:
                    if value[k] not in options:
                        return False
                elif len(options) == 1:
                    stack.append((k, next(iter(options))))
        return True

    # Frames: (variable, next value to try, trail of that attempt).
    frames: List[List] = []
    var = 0
    while True:
        while var < count and value[var] is not None:
            var += 1
        if var == count:
            return [int(x) for x in value]
        frames.append([var, 0, []])
        while frames:
            frame = frames[-1]
            for v in frame[2]:
                value[v] = None
            frame[2] = []
            if frame[1] > 1:
                frames.pop()
                continue
            x = frame[1]
            frame[1] += 1
            if assign(frame[0], x, frame[2]):
                break
        else:
            return None
        var = frame[0] + 1


def _common_period(first: RealizationSpec, second: RealizationSpec, a: SignedPermutation) -> Tuple[int, ...]:
    pulled_back = second.group.lattice.transform(a.inverse())
    return tuple(
        math.lcm(p1, p2)
        for p1, p2 in zip(first.group.lattice.axis_periods(), pulled_back.axis_periods())
    )


def _constraints(first: RealizationSpec, second: RealizationSpec, a: SignedPermutation,
                 period: Tuple[int, ...], wrap: bool):
    """Sites of the box and the flip constraints between neighboring sites;
    None when some pattern pair admits no flip at all."""
    dim = first.dim
    sites = list(itertools.product(*(range(q) for q in period)))
    index = {v: i for i, v in enumerate(sites)}
    graph1, graph2 = graph_for(first), graph_for(second)
    constraints = []
    for v in sites:
        image = a.apply(v)
        for j in range(dim):
            e = tuple(int(k == j) for k in range(dim))
            allowed = _allowed(graph1.pattern(v, e), graph2.pattern(image, a.apply(e)))
            if not allowed:
                return None
            if not wrap and v[j] == period[j] - 1:
                continue
            w = tuple((c + (k == j)) % q for k, (c, q) in enumerate(zip(v, period)))
            constraints.append((index[v], index[w], allowed))
    return sites, constraints


def _flips_for(first: RealizationSpec, second: RealizationSpec,
               a: SignedPermutation) -> Optional[Tuple[Tuple[int, ...], List[int]]]:
    base = _common_period(first, second, a)
    for scale in TORUS_SCALES:
        period = tuple(scale * q for q in base)
        system = _constraints(first, second, a, period, wrap=True)
        if system is None:
            return None
        sites, constraints = system
        flips = _solve(len(sites), constraints)
        if flips is not None:
            return period, flips
        if scale == TORUS_SCALES[0]:
            sites, open_constraints = _constraints(first, second, a, period, wrap=False)
            if _solve(len(sites), open_constraints) is None:
                return None
        logger.debug(f"{first.group_id} -> {second.group_id} under {a.to_text()}: no flips on torus {period}")
    logger.warning(f"{first.group_id} -> {second.group_id} under {a.to_text()}: "
                   f"flips solvable on boxes but on no torus up to {TORUS_SCALES[-1]}q")
    return None


def are_equivalent(first: RealizationSpec, second: RealizationSpec) -> Optional[EquivalenceWitness]:
    """A block-preserving isomorphism between the two graphs, or None."""
    if invariants(first) != invariants(second):
        return None
    dim = first.dim
    identity = SignedPermutation.identity(dim)
    candidates = [identity] + [w for w in hyperoctahedral(dim) if w != identity]
    twist = origin_twist(first) ^ origin_twist(second)
    for a in candidates:
        solved = _flips_for(first, second, a)
        if solved is not None:
            period, flips = solved
            witness = EquivalenceWitness(GridAutomorphism(a, (0,) * dim), period, tuple(flips), twist)
            k = second.m if witness.blockflip else GridAutomorphism.identity(dim)
            return witness._replace(k=k)
    return None


def _preference(spec: RealizationSpec) -> tuple:
    return (-len(stabilizer_origin(spec.group)), spec.to_text())


def _bucket_key(spec: RealizationSpec) -> tuple:
    return invariants(spec) + (growth(spec).counts,)


def equivalence_classes_in_bucket(specs: Sequence[RealizationSpec]) -> List[List[RealizationSpec]]:
    """Classes of one invariant bucket, each led by its preferred member."""
    classes: List[List[RealizationSpec]] = []
    for spec in sorted(set(specs), key=_preference):
        for cls in classes:
            if are_equivalent(cls[0], spec) is not None:
                cls.append(spec)
                break
        else:
            classes.append([spec])
    return classes


def equivalence_classes(specs: Sequence[RealizationSpec],
                        runner: Optional[Callable] = None) -> List[List[RealizationSpec]]:
    buckets: Dict[tuple, List[RealizationSpec]] = {}
    for spec in specs:
        buckets.setdefault(_bucket_key(spec), []).append(spec)
    keys = sorted(buckets)
    if runner is None:
        partitions = [equivalence_classes_in_bucket(buckets[key]) for key in keys]
    else:
        partitions = runner(equivalence_classes_in_bucket, [buckets[key] for key in keys])
    classes = [cls for partition in partitions for cls in partition]
    classes.sort(key=lambda cls: (combination_string(cls[0]), growth(cls[0]).counts, cls[0].to_text()))
    return classes


def thin(specs: Sequence[RealizationSpec], runner: Optional[Callable] = None) -> List[RealizationSpec]:
    """One representative per equivalence class: the member whose group has
    the largest origin stabilizer, ties broken by serialization."""
    representatives = [cls[0] for cls in equivalence_classes(specs, runner)]
    logger.info(f"Thinned {len(specs)} realizations to {len(representatives)}")
    return representatives
