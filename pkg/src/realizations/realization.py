"""The (H, L, X) coordinatization of symmetrical 2-extensions of the grid.

Vertices of the extension are right cosets L·h of L in H. Cosets La and Lb
are adjacent iff b·a^-1 lies in the connection set D = L(X ∪ X^-1)L, extended
by S \\ L = mL when the realization is saturated. The block over a grid vertex
v holds L·g_v (label 0) and L·m·g_v (label 1), where g_v is the anchor element
of H moving the origin to v: the identity at the origin, elsewhere the least
element of H sending the origin to v.
"""
from enum import Enum
from functools import lru_cache
from typing import FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple
import logging

from src.core.error_handler import (
    InvalidGeneratorError,
    InvalidSubgroupError,
    MisuseError,
    NoConnectionError,
    QuotientNotGridError,
)
from src.groups.grid_algebra import GridAutomorphism, Vector, is_unit_vector, unit_vectors
from src.groups.space_group import (
    SpaceGroupNF,
    closure,
    least_mover,
    member,
    origin_mover,
    stabilizer_origin,
)

logger = logging.getLogger(__name__)


class ExtVertex(NamedTuple):
    v: Vector
    eps: int


class ConnectionType(Enum):
    ONE = "1"
    PARALLEL = "2p"
    VEE = "2v"
    THREE = "3"
    FOUR = "4"

    @property
    def rank(self) -> int:
        return _TYPE_ORDER.index(self)


_TYPE_ORDER = [ConnectionType.ONE, ConnectionType.PARALLEL, ConnectionType.VEE,
               ConnectionType.THREE, ConnectionType.FOUR]

CLASS_II_TYPES = frozenset({ConnectionType.PARALLEL, ConnectionType.FOUR})


class ConnectionPattern(NamedTuple):
    """Edges between two adjacent blocks as pairs (eps, eps') of labels."""
    bits: Tuple[Tuple[int, int], ...]

    @classmethod
    def of(cls, bits: Iterable[Tuple[int, int]]) -> "ConnectionPattern":
        return cls(tuple(sorted(set(bits))))

    def transpose(self) -> "ConnectionPattern":
        return ConnectionPattern.of((b, a) for a, b in self.bits)

    def flipped(self, near: int, far: int) -> "ConnectionPattern":
        return ConnectionPattern.of((a ^ near, b ^ far) for a, b in self.bits)

    def __len__(self) -> int:
        return len(self.bits)


class RealizationSpec(NamedTuple):
    group_id: str
    group: SpaceGroupNF
    L: Tuple[GridAutomorphism, ...]
    m: GridAutomorphism
    X: Tuple[GridAutomorphism, ...]
    saturated: bool

    @property
    def dim(self) -> int:
        return self.group.dim

    def to_text(self) -> str:
        return "\t".join([
            self.group_id,
            " ".join(g.to_text() for g in self.L),
            self.m.to_text(),
            " ".join(x.to_text() for x in self.X),
            "S" if self.saturated else "N",
        ])


def double_coset(L: Sequence[GridAutomorphism], x: GridAutomorphism) -> FrozenSet[GridAutomorphism]:
    return frozenset(a.then(x).then(b) for a in L for b in L)


def canonical_connection(L: Sequence[GridAutomorphism], x: GridAutomorphism) -> GridAutomorphism:
    """Least element of LxL ∪ Lx^-1L."""
    return min(double_coset(L, x) | double_coset(L, x.inverse()))


@lru_cache(maxsize=4096)
def connection_set(spec: RealizationSpec) -> FrozenSet[GridAutomorphism]:
    elements = set()
    for x in spec.X:
        elements |= double_coset(spec.L, x)
        elements |= double_coset(spec.L, x.inverse())
    if spec.saturated:
        elements.update(spec.m.then(l) for l in spec.L)
    return frozenset(elements)


@lru_cache(maxsize=65536)
def anchor(spec: RealizationSpec, v: Vector) -> GridAutomorphism:
    g = origin_mover(spec.group, v)
    if g is None:
        raise MisuseError(f"Vertex {v} is not in the orbit of the origin")
    return g


@lru_cache(maxsize=65536)
def periodic_anchor(spec: RealizationSpec, v: Vector) -> GridAutomorphism:
    """Least mover to v, origin included; constant in its point part modulo
    the lattice, so labels built on it repeat under lattice translations."""
    g = least_mover(spec.group, v)
    if g is None:
        raise MisuseError(f"Vertex {v} is not in the orbit of the origin")
    return g


@lru_cache(maxsize=4096)
def _l_points(spec: RealizationSpec) -> FrozenSet:
    return frozenset(l.point for l in spec.L)


@lru_cache(maxsize=4096)
def origin_twist(spec: RealizationSpec) -> int:
    """1 when the least stabilizer element lies outside L.

    The periodic labeling then swaps the two labels of the origin block and
    agrees with the anchor labeling everywhere else.
    """
    return 0 if periodic_anchor(spec, (0,) * spec.dim).point in _l_points(spec) else 1


def locate(spec: RealizationSpec, h: GridAutomorphism) -> ExtVertex:
    """Block vertex of the coset L·h."""
    v = h.trans
    rest = h.then(anchor(spec, v).inverse())
    return ExtVertex(v, 0 if rest.point in _l_points(spec) else 1)


def element_of(spec: RealizationSpec, u: ExtVertex) -> GridAutomorphism:
    g = anchor(spec, tuple(u.v))
    return spec.m.then(g) if u.eps else g


def coset_neighbors(spec: RealizationSpec, u: ExtVertex) -> List[ExtVertex]:
    a = element_of(spec, u)
    return sorted({locate(spec, d.then(a)) for d in connection_set(spec)})


def _pattern(spec: RealizationSpec, near: GridAutomorphism, far: GridAutomorphism) -> ConnectionPattern:
    D = connection_set(spec)
    bits = []
    for eps, a in ((0, near), (1, spec.m.then(near))):
        a_inv = a.inverse()
        for eps2, b in ((0, far), (1, spec.m.then(far))):
            if b.then(a_inv) in D:
                bits.append((eps, eps2))
    return ConnectionPattern.of(bits)


@lru_cache(maxsize=65536)
def pattern_between(spec: RealizationSpec, u: Vector, e: Vector) -> ConnectionPattern:
    """Connection from the block over u to the block over u + e."""
    target = tuple(a + b for a, b in zip(u, e))
    return _pattern(spec, anchor(spec, tuple(u)), anchor(spec, target))


@lru_cache(maxsize=65536)
def periodic_pattern(spec: RealizationSpec, u: Vector, e: Vector) -> ConnectionPattern:
    """``pattern_between`` in the periodic labeling; depends on u only modulo
    the lattice."""
    target = tuple(a + b for a, b in zip(u, e))
    return _pattern(spec, periodic_anchor(spec, tuple(u)), periodic_anchor(spec, target))


def connection_pattern(spec: RealizationSpec, e: Sequence[int]) -> ConnectionPattern:
    return pattern_between(spec, (0,) * spec.dim, tuple(e))


def connection_type(pattern: ConnectionPattern) -> ConnectionType:
    bits = pattern.bits
    if not bits:
        raise NoConnectionError("Connection pattern without edges")
    if len(bits) == 1:
        return ConnectionType.ONE
    if len(bits) == 2:
        (a, b), (c, d) = bits
        return ConnectionType.VEE if a == c or b == d else ConnectionType.PARALLEL
    if len(bits) == 3:
        return ConnectionType.THREE
    return ConnectionType.FOUR


def connection_types(spec: RealizationSpec) -> Tuple[ConnectionType, ...]:
    """Types toward +e1, -e1, +e2, ... from the origin block."""
    return tuple(connection_type(connection_pattern(spec, e)) for e in unit_vectors(spec.dim))


def is_class_I(spec: RealizationSpec) -> bool:
    return any(t not in CLASS_II_TYPES for t in connection_types(spec))


def realization_class(spec: RealizationSpec) -> str:
    return "I" if is_class_I(spec) else "II"


def combination_string(spec: RealizationSpec) -> str:
    """Least type token over axis renumberings and swaps within an axis."""
    types = connection_types(spec)
    axes = []
    for k in range(spec.dim):
        pair = sorted((types[2 * k], types[2 * k + 1]), key=lambda t: t.rank)
        axes.append(tuple(pair))
    axes.sort(key=lambda pair: tuple(t.rank for t in pair))
    return "_".join("".join(t.value for t in pair) for pair in axes)


def degree(spec: RealizationSpec) -> int:
    return len(coset_neighbors(spec, ExtVertex((0,) * spec.dim, 0)))


def validate(spec: RealizationSpec) -> RealizationSpec:
    """Check a raw triple and return it in canonical form."""
    group = spec.group
    stabilizer = set(stabilizer_origin(group))
    L = set(spec.L)
    identity = GridAutomorphism.identity(group.dim)
    if (identity not in L or not L <= stabilizer or 2 * len(L) != len(stabilizer)
            or any(a.then(b) not in L for a in L for b in L)):
        raise InvalidSubgroupError(f"{spec.group_id}: L is not an index-2 subgroup of the stabilizer")
    if spec.m not in stabilizer or spec.m in L:
        raise InvalidSubgroupError(f"{spec.group_id}: m must lie in the stabilizer outside L")
    for x in spec.X:
        if not member(group, x) or not is_unit_vector(x.trans):
            raise InvalidGeneratorError(f"{spec.group_id}: {x.to_text()} does not move the origin to a neighbor")
    directions = {x.trans for x in spec.X} | {x.inverse().trans for x in spec.X}
    reached = {s.point.apply(v) for s in stabilizer for v in directions}
    if reached != set(unit_vectors(group.dim)):
        raise QuotientNotGridError(f"{spec.group_id}: connections do not cover every grid direction")
    L_sorted = tuple(sorted(L))
    X = tuple(sorted({canonical_connection(L_sorted, x) for x in spec.X}))
    return spec._replace(L=L_sorted, m=min(stabilizer - L), X=X)


def is_connected(spec: RealizationSpec) -> bool:
    gens = list(spec.L) + list(spec.X)
    if spec.saturated:
        gens.append(spec.m)
    return closure(gens, spec.dim) == spec.group


def desaturate(spec: RealizationSpec) -> Optional[RealizationSpec]:
    """Drop the in-block edges; None when the graph falls apart."""
    if not spec.saturated:
        raise MisuseError(f"{spec.group_id}: realization is already non-saturated")
    thinner = spec._replace(saturated=False)
    return thinner if is_connected(thinner) else None
