"""Vertex-transitive subgroups of Aut(Λ^d) up to conjugacy."""
from functools import partial
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple
import itertools
import logging

from src.groups.finite_group import (
    identify_structure,
    normalizer,
    small_generating_set,
    subgroup_class_of,
    subgroup_classes,
)
from src.groups.grid_algebra import (
    GridAutomorphism,
    SignedPermutation,
    Vector,
    check_dimension,
    hyperoctahedral,
)
from src.groups.lattice import divisors, sublattices
from src.groups.space_group import (
    SpaceGroupNF,
    are_conjugate,
    axis_period_signature,
    closure,
    first_unreached_direction,
    generators,
    is_vertex_transitive,
    stabilizer_origin,
)

logger = logging.getLogger(__name__)

Runner = Callable[[Callable, Sequence], List]


class GroupEntry(NamedTuple):
    id: str
    group: SpaceGroupNF
    generators: Tuple[GridAutomorphism, ...]
    stabilizer_class: int
    point_class: int


class GroupCatalog(NamedTuple):
    dim: int
    entries: Tuple[GroupEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def by_id(self, entry_id: str) -> GroupEntry:
        for entry in self.entries:
            if entry.id == entry_id:
                return entry
        raise KeyError(entry_id)


def serial_runner(fn: Callable, items: Sequence) -> List:
    return [fn(item) for item in items]


def _candidate_points(stabilizer: Sequence[SignedPermutation], e: Vector,
                      normalizing: Optional[Sequence[SignedPermutation]],
                      dim: int) -> List[SignedPermutation]:
    """Point parts w of candidates (w, e), one per orbit of
    w -> s · u^-1 w u · s' with s in S, s' fixing e, u normalizing S and fixing e."""
    fixing_e = [s for s in stabilizer if s.apply(e) == e]
    conjugators = [u for u in (normalizing or [SignedPermutation.identity(dim)]) if u.apply(e) == e]
    seen = set()
    result = []
    for w in hyperoctahedral(dim):
        if w in seen:
            continue
        result.append(w)
        for u in conjugators:
            wu = u.inverse().then(w).then(u)
            for s in stabilizer:
                left = s.then(wu)
                for s2 in fixing_e:
                    seen.add(left.then(s2))
    return result


def search_stabilizer_class(dim: int, class_index: int) -> List[SpaceGroupNF]:
    """Vertex-transitive groups whose origin stabilizer is exactly the
    representative of one subgroup class."""
    cls = subgroup_classes(dim)[class_index - 1]
    stabilizer = cls.representative
    zero = (0,) * dim
    base = [GridAutomorphism(w, zero) for w in small_generating_set(stabilizer)]
    normal = normalizer(stabilizer, dim)
    visited = set()
    found: Dict[SpaceGroupNF, None] = {}

    def explore(gens: List[GridAutomorphism], top: bool):
        group = closure(gens, dim)
        if group in visited:
            return
        visited.add(group)
        if len(stabilizer_origin(group)) != len(stabilizer):
            return
        if is_vertex_transitive(group):
            found[group] = None
            return
        e = first_unreached_direction(group)
        for w in _candidate_points(stabilizer, e, normal if top else None, dim):
            explore(gens + [GridAutomorphism(w, e)], False)

    explore(base, True)
    logger.debug(f"Stabilizer class {class_index} ({cls.structure}): "
                 f"{len(visited)} groups visited, {len(found)} vertex-transitive")
    return sorted(found, key=_sort_key)


def _sort_key(group: SpaceGroupNF):
    return (len(stabilizer_origin(group)), group.lattice.determinant(), len(group.point), group.to_text())


def _bucket_key(group: SpaceGroupNF):
    stabilizer = stabilizer_origin(group)
    return (
        group.lattice.determinant(),
        len(group.point),
        len(stabilizer),
        identify_structure(stabilizer),
        axis_period_signature(group),
    )


def deduplicate(groups: Iterable[SpaceGroupNF]) -> List[SpaceGroupNF]:
    """One representative per conjugacy class, least in canonical order."""
    buckets: Dict[tuple, List[SpaceGroupNF]] = {}
    kept = []
    for group in sorted(set(groups), key=_sort_key):
        bucket = buckets.setdefault(_bucket_key(group), [])
        if any(are_conjugate(group, other) is not None for other in bucket):
            continue
        bucket.append(group)
        kept.append(group)
    return kept


def build_catalog(dim: int, groups: Iterable[SpaceGroupNF]) -> GroupCatalog:
    entries = []
    for group in deduplicate(groups):
        stabilizer = [g.point for g in stabilizer_origin(group)]
        entries.append((
            subgroup_class_of(stabilizer, dim).index,
            subgroup_class_of(group.point, dim).index,
            group,
        ))
    entries.sort(key=lambda item: (item[0],) + _sort_key(item[2]))
    return GroupCatalog(dim, tuple(
        GroupEntry(f"H{i + 1}", group, tuple(generators(group)), stab_class, point_class)
        for i, (stab_class, point_class, group) in enumerate(entries)
    ))


def enumerate_vertex_transitive(dim: int, runner: Optional[Runner] = None,
                                max_dimension: int = 3) -> GroupCatalog:
    """Catalog of all vertex-transitive subgroups of Aut(Λ^dim) up to conjugacy.

    The search runs once per subgroup class of the point stabilizer;
    ``runner`` maps the per-class search over class indices and must return
    results in input order.
    """
    check_dimension(dim, max_dimension)
    runner = runner or serial_runner
    indices = [cls.index for cls in subgroup_classes(dim)]
    batches = runner(partial(search_stabilizer_class, dim), indices)
    catalog = build_catalog(dim, itertools.chain.from_iterable(batches))
    logger.info(f"Dimension {dim}: {len(catalog)} classes of vertex-transitive groups")
    return catalog


def search_point_class(dim: int, class_index: int) -> List[SpaceGroupNF]:
    """Vertex-transitive groups with a given point group, built from
    invariant lattices and vector systems on the point generators."""
    point = subgroup_classes(dim)[class_index - 1].representative
    gens = small_generating_set(point)
    found = []
    for n in divisors(len(point)):
        for lattice in sublattices(dim, n):
            if not lattice.is_invariant(point):
                continue
            translations = [GridAutomorphism.translation(row) for row in lattice.basis]
            box = list(lattice.fundamental_domain())
            for taus in itertools.product(box, repeat=len(gens)):
                candidate = translations + [GridAutomorphism(w, t) for w, t in zip(gens, taus)]
                group = closure(candidate, dim)
                if group.lattice == lattice and is_vertex_transitive(group):
                    found.append(group)
    return found


def enumerate_by_space_groups(dim: int, runner: Optional[Runner] = None,
                              max_dimension: int = 2) -> GroupCatalog:
    """Independent second strategy, practical for small dimensions."""
    check_dimension(dim, max_dimension)
    runner = runner or serial_runner
    indices = [cls.index for cls in subgroup_classes(dim)]
    batches = runner(partial(search_point_class, dim), indices)
    return build_catalog(dim, itertools.chain.from_iterable(batches))


def match_catalogs(first: GroupCatalog, second: GroupCatalog) -> Tuple[List[str], List[str]]:
    """Ids left unmatched on either side by a conjugacy bijection."""
    remaining = list(second.entries)
    unmatched = []
    for entry in first.entries:
        partner = next((other for other in remaining
                        if are_conjugate(entry.group, other.group) is not None), None)
        if partner is None:
            unmatched.append(entry.id)
        else:
            remaining.remove(partner)
    return unmatched, [entry.id for entry in remaining]
