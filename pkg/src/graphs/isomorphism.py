"""Isomorphism classes of extension graphs: ball certificates to separate,
extension of ball isomorphisms by periodicity to merge."""
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple
import itertools
import logging
import math

from networkx.algorithms.isomorphism import GraphMatcher
from sympy import ImmutableMatrix, Rational

from src.core.error_handler import NeedsLargerRadius
from src.graphs.certificate import canonical_certificate
from src.graphs.periodic_graph import PeriodicGraph, ball, graph_for, origin
from src.groups.grid_algebra import Vector
from src.groups.lattice import Lattice
from src.realizations.realization import ExtVertex, RealizationSpec

logger = logging.getLogger(__name__)


class BallIsomorphism(NamedTuple):
    """Root-preserving isomorphism of two balls.

    ``M`` is filled in once the map extends: row i is the image of the period
    vector P_i·e_i divided by P_i.
    """
    radius: int
    mapping: Dict[ExtVertex, ExtVertex]
    M: Optional[ImmutableMatrix] = None


class GlobalIsomorphism(NamedTuple):
    """psi(b + sum n_i P_i e_i, eps) = box_images[(b, eps)] + sum n_i period_images[i].

    Box and images are in the periodic labeling; ``apply`` takes and returns
    anchor labels, converting through the origin twists of both graphs.
    """
    period: Tuple[int, ...]
    period_images: Tuple[Vector, ...]
    box_images: Dict[ExtVertex, ExtVertex]
    twists: Tuple[int, int] = (0, 0)
    ball: Optional[BallIsomorphism] = None

    def apply(self, u: ExtVertex) -> ExtVertex:
        if self.twists[0] and not any(u.v):
            u = ExtVertex(u.v, 1 - u.eps)
        steps = [c // p for c, p in zip(u.v, self.period)]
        base = tuple(c % p for c, p in zip(u.v, self.period))
        image = self.box_images[ExtVertex(base, u.eps)]
        v = list(image.v)
        for n, row in zip(steps, self.period_images):
            for k in range(len(v)):
                v[k] += n * row[k]
        if self.twists[1] and not any(v):
            return ExtVertex(tuple(v), 1 - image.eps)
        return ExtVertex(tuple(v), image.eps)


class IsoPartition(NamedTuple):
    classes: Tuple[Tuple[str, ...], ...]
    undecided: Tuple[Tuple[str, str], ...]

    def non_singleton(self) -> List[Tuple[str, ...]]:
        return [cls for cls in self.classes if len(cls) > 1]

    def saturated_classes(self) -> List[Tuple[str, ...]]:
        """Classes holding at least one saturated realization."""
        return [cls for cls in self.classes if any(not m.endswith("*") for m in cls)]

    def non_saturated_classes(self) -> List[Tuple[str, ...]]:
        """Classes holding at least one non-saturated (starred) realization."""
        return [cls for cls in self.classes if any(m.endswith("*") for m in cls)]


def _root_match(a: dict, b: dict) -> bool:
    return a["root"] == b["root"]


def ball_isomorphisms(first: RealizationSpec, second: RealizationSpec, radius: int,
                      limit: int = 64, cap: int = 8) -> Iterator[BallIsomorphism]:
    """Root-preserving isomorphisms between the balls of two realizations."""
    b1 = ball(first, radius, cap=cap)
    b2 = ball(second, radius, cap=cap)
    if b1.number_of_nodes() != b2.number_of_nodes() or b1.number_of_edges() != b2.number_of_edges():
        return
    matcher = GraphMatcher(b1, b2, node_match=_root_match)
    for mapping in itertools.islice(matcher.isomorphisms_iter(), limit):
        yield BallIsomorphism(radius, mapping)


def _image(phi: BallIsomorphism, graph1: PeriodicGraph, graph2: PeriodicGraph, u: ExtVertex) -> ExtVertex:
    """phi in periodic labels on both sides."""
    key = graph1.relabel(u)
    if key not in phi.mapping:
        raise NeedsLargerRadius(phi.radius)
    return graph2.relabel(phi.mapping[key])


def _period_images(phi: BallIsomorphism, graph1: PeriodicGraph, graph2: PeriodicGraph,
                   period: Tuple[int, ...]) -> Optional[Tuple[Vector, ...]]:
    """Images of the corners P_i·e_i when they are label-preserving lattice
    shifts of the root image in the second graph."""
    dim = graph1.dim
    root = _image(phi, graph1, graph2, graph1.relabel(origin(graph1.spec)))
    rows = []
    for i, p in enumerate(period):
        corner = ExtVertex(tuple(p if k == i else 0 for k in range(dim)), graph1.twist)
        image = _image(phi, graph1, graph2, corner)
        shift = tuple(a - b for a, b in zip(image.v, root.v))
        if image.eps != root.eps or not graph2.lattice.contains(shift):
            return None
        rows.append(shift)
    return tuple(rows)


def _verified(psi: GlobalIsomorphism, phi: BallIsomorphism,
              graph1: PeriodicGraph, graph2: PeriodicGraph) -> bool:
    images = Lattice.from_vectors(psi.period_images, graph1.dim)
    if images.determinant() != math.prod(psi.period):
        return False
    residues = {(images.reduce(w.v), w.eps) for w in psi.box_images.values()}
    if len(residues) != len(psi.box_images):
        return False
    for u in psi.box_images:
        u = graph1.relabel(u)
        targets = set(graph2.neighbors(psi.apply(u)))
        if any(psi.apply(x) not in targets for x in graph1.neighbors(u)):
            return False
    return all(psi.apply(u) == w for u, w in phi.mapping.items())


def extend_isomorphism(first: RealizationSpec, second: RealizationSpec,
                       phi: BallIsomorphism) -> Optional[GlobalIsomorphism]:
    """Extend a ball isomorphism to the whole graph; None when no period
    box works.

    Periods are multiples k·p of the axis periods p of ``first``, k running
    up to twice the index of the second lattice, so the corner images can
    land in the second lattice. Raises NeedsLargerRadius as soon as a box or
    corner leaves the ball.
    """
    graph1, graph2 = graph_for(first), graph_for(second)
    if graph1.degree() != graph2.degree():
        return None
    base = first.group.lattice.axis_periods()
    for k in range(1, 2 * second.group.lattice.determinant() + 1):
        period = tuple(k * p for p in base)
        rows = _period_images(phi, graph1, graph2, period)
        if rows is None:
            continue
        box = {}
        for b in itertools.product(*(range(p) for p in period)):
            for eps in (0, 1):
                u = ExtVertex(tuple(b), eps)
                box[u] = _image(phi, graph1, graph2, u)
        psi = GlobalIsomorphism(period, rows, box, (graph1.twist, graph2.twist))
        if _verified(psi, phi, graph1, graph2):
            M = ImmutableMatrix([[Rational(c, p) for c in row] for row, p in zip(rows, period)])
            return psi._replace(ball=phi._replace(M=M))
        logger.debug(f"{first.group_id} -> {second.group_id}: period {period} fails verification")
    return None


class _Classifier:
    def __init__(self, specs: Sequence[Tuple[str, RealizationSpec]], radius: int,
                 max_radius: int, match_limit: int):
        self.specs = dict(specs)
        self.radius = radius
        self.max_radius = max_radius
        self.match_limit = match_limit
        self._certificates: Dict[Tuple[str, int], tuple] = {}

    def certificate(self, spec_id: str, radius: int) -> tuple:
        key = (spec_id, radius)
        if key not in self._certificates:
            spec = self.specs[spec_id]
            self._certificates[key] = canonical_certificate(
                ball(spec, radius, cap=self.max_radius), origin(spec))
        return self._certificates[key]

    def decide(self, a: str, b: str) -> Optional[bool]:
        first, second = self.specs[a], self.specs[b]
        if first == second:
            return True
        for radius in range(self.radius, self.max_radius + 1):
            if self.certificate(a, radius) != self.certificate(b, radius):
                return False
            short = 0
            for phi in ball_isomorphisms(first, second, radius, self.match_limit, self.max_radius):
                try:
                    if extend_isomorphism(first, second, phi) is not None:
                        return True
                except NeedsLargerRadius:
                    short += 1
            if short:
                logger.debug(f"{a} ~ {b}: {short} ball maps need a radius above {radius}")
        return None


def iso_classes(specs: Sequence[Tuple[str, RealizationSpec]], radius: int = 4,
                max_radius: int = 8, match_limit: int = 64) -> IsoPartition:
    """Partition realizations by isomorphism of their graphs.

    Pairs neither separated by certificates nor joined by an extended
    isomorphism up to ``max_radius`` are reported as undecided.
    """
    classifier = _Classifier(specs, radius, max_radius, match_limit)
    buckets: Dict[tuple, List[str]] = {}
    for spec_id, spec in specs:
        key = (graph_for(spec).degree(), classifier.certificate(spec_id, radius))
        buckets.setdefault(key, []).append(spec_id)
    classes: List[List[str]] = []
    undecided: List[Tuple[str, str]] = []
    for members in buckets.values():
        local: List[List[str]] = []
        for spec_id in members:
            pending = []
            for cls in local:
                verdict = classifier.decide(cls[0], spec_id)
                if verdict:
                    cls.append(spec_id)
                    break
                if verdict is None:
                    pending.append((cls[0], spec_id))
            else:
                local.append([spec_id])
                undecided.extend(pending)
        classes.extend(local)
    ordered = sorted((tuple(cls) for cls in classes), key=lambda cls: (-len(cls), cls))
    logger.info(f"{len(ordered)} isomorphism classes, {len(undecided)} undecided pairs")
    return IsoPartition(tuple(ordered), tuple(undecided))
