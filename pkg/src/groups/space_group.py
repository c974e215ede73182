"""Normal form and decision procedures for subgroups of Aut(Λ^d).

A subgroup H is stored as its point group P, its translation lattice T and a
vector system assigning to every w in P the reduced translation tau_w, so that
(w, t) lies in H iff w in P and t == tau_w modulo T.
"""
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple
import logging

from src.core.error_handler import DimensionMismatchError, MisuseError
from src.groups.finite_group import small_generating_set
from src.groups.grid_algebra import (
    GridAutomorphism,
    SignedPermutation,
    Vector,
    format_vector,
    hyperoctahedral,
    unit_vectors,
)
from src.groups.lattice import Lattice

logger = logging.getLogger(__name__)


class SpaceGroupNF(NamedTuple):
    dim: int
    point: Tuple[SignedPermutation, ...]
    lattice: Lattice
    vsys: Tuple[Vector, ...]

    def tau(self, w: SignedPermutation) -> Vector:
        return self.vsys[self.point.index(w)]

    def items(self) -> Iterable[Tuple[SignedPermutation, Vector]]:
        return zip(self.point, self.vsys)

    def coset_representatives(self) -> List[GridAutomorphism]:
        return [GridAutomorphism(w, t) for w, t in self.items()]

    def orbit_residues(self) -> frozenset:
        """Residues modulo the lattice of the origin's orbit."""
        return frozenset(self.vsys)

    def reaches(self, v: Sequence[int]) -> bool:
        return self.lattice.reduce(v) in self.orbit_residues()

    def to_text(self) -> str:
        parts = [f"{w.to_text()};{format_vector(t)}" for w, t in self.items()]
        return f"{self.lattice.to_text()}\t" + " ".join(parts)


def _normal_form(dim: int, reps: Dict[SignedPermutation, Vector], lattice: Lattice) -> SpaceGroupNF:
    point = tuple(sorted(reps))
    return SpaceGroupNF(dim, point, lattice, tuple(lattice.reduce(reps[w]) for w in point))


def closure(gens: Sequence[GridAutomorphism], dim: Optional[int] = None) -> SpaceGroupNF:
    """Normal form of the group generated by ``gens``.

    Right-multiplies coset representatives by generators until stable; two
    translations found for one point element contribute their difference to
    the lattice, which is kept closed under the point images.
    """
    gens = list(gens)
    if dim is None:
        if not gens:
            raise ValueError("Dimension required for the trivial group")
        dim = gens[0].dim
    if any(g.dim != dim for g in gens):
        raise DimensionMismatchError("Generators of different dimensions")
    lattice = Lattice.zero(dim)
    reps: Dict[SignedPermutation, Vector] = {SignedPermutation.identity(dim): (0,) * dim}
    changed = True
    while changed:
        changed = False
        new_vectors: List[Vector] = []
        for w, t in list(reps.items()):
            for g in gens:
                h = GridAutomorphism(w, t).then(g)
                trans = lattice.reduce(h.trans)
                known = reps.get(h.point)
                if known is None:
                    reps[h.point] = trans
                    changed = True
                elif known != trans:
                    new_vectors.append(tuple(a - b for a, b in zip(trans, known)))
        if new_vectors:
            lattice = _point_closed(lattice.extended(new_vectors), reps)
            reps = {w: lattice.reduce(t) for w, t in reps.items()}
            changed = True
        else:
            closed = _point_closed(lattice, reps)
            if closed != lattice:
                lattice = closed
                reps = {w: lattice.reduce(t) for w, t in reps.items()}
                changed = True
    return _normal_form(dim, reps, lattice)


def _point_closed(lattice: Lattice, points: Iterable[SignedPermutation]) -> Lattice:
    points = list(points)
    while True:
        bigger = lattice.extended(w.apply(row) for w in points for row in lattice.basis)
        if bigger == lattice:
            return lattice
        lattice = bigger


def trivial_group(dim: int) -> SpaceGroupNF:
    return closure([], dim)


def member(group: SpaceGroupNF, g: GridAutomorphism) -> bool:
    if g.dim != group.dim:
        raise DimensionMismatchError(f"{g.to_text()} is not of dimension {group.dim}")
    if g.point not in group.point:
        return False
    return group.lattice.reduce(g.trans) == group.tau(g.point)


def stabilizer_origin(group: SpaceGroupNF) -> Tuple[GridAutomorphism, ...]:
    zero = (0,) * group.dim
    return tuple(GridAutomorphism(w, zero) for w, t in group.items() if not any(t))


def is_vertex_transitive(group: SpaceGroupNF) -> bool:
    if not group.lattice.is_full_rank():
        return False
    return len(group.orbit_residues()) == group.lattice.determinant()


def group_descriptors(group: SpaceGroupNF) -> Tuple[Tuple[SignedPermutation, ...], Tuple[Vector, ...]]:
    return group.point, group.lattice.basis


def generators(group: SpaceGroupNF) -> List[GridAutomorphism]:
    """Lattice translations followed by one coset element per point generator."""
    gens = [GridAutomorphism.translation(row) for row in group.lattice.basis]
    gens.extend(GridAutomorphism(w, group.tau(w)) for w in small_generating_set(group.point))
    return gens


def conjugate(group: SpaceGroupNF, a: GridAutomorphism) -> SpaceGroupNF:
    """Normal form of a^-1 · group · a."""
    if a.dim != group.dim:
        raise DimensionMismatchError(f"{a.to_text()} is not of dimension {group.dim}")
    lattice = group.lattice.transform(a.point)
    reps = {}
    for w, t in group.items():
        c = GridAutomorphism(w, t).conjugate_by(a)
        reps[c.point] = c.trans
    return _normal_form(group.dim, reps, lattice)


def are_conjugate(first: SpaceGroupNF, second: SpaceGroupNF) -> Optional[GridAutomorphism]:
    """Witness a with conjugate(first, a) == second, or None."""
    if first.dim != second.dim:
        raise DimensionMismatchError("Groups of different dimensions")
    if not (first.lattice.is_full_rank() and second.lattice.is_full_rank()):
        raise MisuseError("Conjugacy is decided for groups with full-rank lattices only")
    if (len(first.point) != len(second.point)
            or first.lattice.determinant() != second.lattice.determinant()
            or len(stabilizer_origin(first)) != len(stabilizer_origin(second))):
        return None
    for u in hyperoctahedral(first.dim):
        if first.lattice.transform(u) != second.lattice:
            continue
        inv = u.inverse()
        if tuple(sorted(inv.then(w).then(u) for w in first.point)) != second.point:
            continue
        for s in second.lattice.fundamental_domain():
            a = GridAutomorphism(u, tuple(s))
            if _conjugates_onto(first, a, second):
                return a
    return None


def _conjugates_onto(first: SpaceGroupNF, a: GridAutomorphism, second: SpaceGroupNF) -> bool:
    for w, t in first.items():
        c = GridAutomorphism(w, t).conjugate_by(a)
        if second.lattice.reduce(c.trans) != second.tau(c.point):
            return False
    return True


def movers(group: SpaceGroupNF, v: Sequence[int]) -> List[GridAutomorphism]:
    """All elements of the group sending the origin to v, in canonical order."""
    v = tuple(v)
    residue = group.lattice.reduce(v)
    return [GridAutomorphism(w, v) for w, t in group.items() if t == residue]


def least_mover(group: SpaceGroupNF, v: Sequence[int]) -> Optional[GridAutomorphism]:
    candidates = movers(group, v)
    return candidates[0] if candidates else None


def origin_mover(group: SpaceGroupNF, v: Sequence[int]) -> Optional[GridAutomorphism]:
    """Anchor element g_v: the identity at the origin, elsewhere the least
    element sending the origin to v.

    Unlike ``least_mover`` this is not constant along lattice translates: the
    origin keeps the identity even when the least stabilizer element differs.
    """
    v = tuple(v)
    if not any(v):
        return GridAutomorphism.identity(group.dim)
    return least_mover(group, v)


def first_unreached_direction(group: SpaceGroupNF) -> Optional[Vector]:
    for e in unit_vectors(group.dim):
        if not group.reaches(e):
            return e
    return None


def cocycle_defect(group: SpaceGroupNF) -> List[Tuple[SignedPermutation, SignedPermutation]]:
    """Pairs (w1, w2) violating tau_{w1 w2} == tau_{w1}·w2 + tau_{w2}."""
    bad = []
    for w1, t1 in group.items():
        for w2, t2 in group.items():
            lhs = group.tau(w1.then(w2))
            moved = w2.apply(t1)
            rhs = group.lattice.reduce(tuple(a + b for a, b in zip(moved, t2)))
            if lhs != rhs:
                bad.append((w1, w2))
    return bad


def axis_period_signature(group: SpaceGroupNF) -> Tuple[int, ...]:
    return tuple(sorted(group.lattice.axis_periods()))
