"""Finite groups of signed permutations: generation, index-2 subgroups,
structure names, and subgroup classes of the hyperoctahedral group."""
from collections import Counter, deque
from functools import lru_cache
from typing import Dict, Iterable, List, NamedTuple, Sequence, Tuple, TypeVar
import itertools
import logging

from sympy.combinatorics import Permutation, PermutationGroup

from src.groups.grid_algebra import GridAutomorphism, SignedPermutation, hyperoctahedral

logger = logging.getLogger(__name__)

# Works for both SignedPermutation and origin-fixing GridAutomorphism.
E = TypeVar("E", SignedPermutation, GridAutomorphism)

UNRECOGNIZED = "unrecognized"

_ABELIAN_NAMES: Dict[Tuple[int, ...], str] = {
    (): "1",
    (2,): "C2",
    (3,): "C3",
    (2, 2): "C2xC2",
    (4,): "C4",
    (2, 3): "C6",
    (2, 2, 2): "C2xC2xC2",
    (2, 4): "C4xC2",
}

# Non-abelian groups by (order, element-order histogram).
_NON_ABELIAN_NAMES: Dict[Tuple[int, Tuple[Tuple[int, int], ...]], str] = {
    (6, ((1, 1), (2, 3), (3, 2))): "S3",
    (8, ((1, 1), (2, 5), (4, 2))): "D8",
    (12, ((1, 1), (2, 3), (3, 8))): "A4",
    (12, ((1, 1), (2, 7), (3, 2), (6, 2))): "D12",
    (16, ((1, 1), (2, 11), (4, 4))): "C2xD8",
    (24, ((1, 1), (2, 7), (3, 8), (6, 8))): "C2xA4",
    (24, ((1, 1), (2, 9), (3, 8), (4, 6))): "S4",
    (48, ((1, 1), (2, 19), (3, 8), (4, 12), (6, 8))): "C2xS4",
}


def generate(gens: Iterable[E], identity: E) -> Tuple[E, ...]:
    """Sorted elements of the finite group generated by ``gens``."""
    gens = list(gens)
    seen = {identity}
    queue = deque([identity])
    while queue:
        e = queue.popleft()
        for g in gens:
            h = e.then(g)
            if h not in seen:
                seen.add(h)
                queue.append(h)
    return tuple(sorted(seen))


def _identity_like(element: E) -> E:
    if isinstance(element, GridAutomorphism):
        return GridAutomorphism.identity(element.dim)
    return SignedPermutation.identity(element.dim)


def small_generating_set(elements: Sequence[E]) -> List[E]:
    """Greedy generating set: scan in canonical order, keep what is new."""
    elements = sorted(elements)
    if not elements:
        return []
    identity = _identity_like(elements[0])
    gens: List[E] = []
    reached = {identity}
    for e in elements:
        if e not in reached:
            gens.append(e)
            reached = set(generate(gens, identity))
            if len(reached) == len(elements):
                break
    return gens


def index_two_subgroups(elements: Sequence[E]) -> List[Tuple[E, ...]]:
    """Kernels of all surjective homomorphisms onto the group of order two."""
    elements = sorted(elements)
    if len(elements) % 2:
        return []
    identity = _identity_like(elements[0])
    gens = small_generating_set(elements)
    kernels = set()
    for signs in itertools.product((0, 1), repeat=len(gens)):
        if not any(signs):
            continue
        sign_of = _extend_signs(gens, signs, identity)
        if sign_of is None:
            continue
        kernels.add(tuple(e for e in elements if sign_of[e] == 0))
    return sorted(kernels)


def _extend_signs(gens: List[E], signs: Sequence[int], identity: E):
    sign_of = {identity: 0}
    queue = deque([identity])
    while queue:
        e = queue.popleft()
        for g, s in zip(gens, signs):
            h = e.then(g)
            value = sign_of[e] ^ s
            known = sign_of.get(h)
            if known is None:
                sign_of[h] = value
                queue.append(h)
            elif known != value:
                return None
    return sign_of


def as_points(elements: Iterable) -> List[SignedPermutation]:
    return [e.point if isinstance(e, GridAutomorphism) else e for e in elements]


def to_sympy(elements: Iterable) -> PermutationGroup:
    """Permutation group on the 2d signed directions (+e_k at 2k, -e_k at 2k+1)."""
    perms = []
    for w in as_points(elements):
        size = 2 * w.dim
        image = [0] * size
        for k, s in enumerate(w.images):
            j = abs(s) - 1
            plus, minus = (2 * j, 2 * j + 1) if s > 0 else (2 * j + 1, 2 * j)
            image[2 * k] = plus
            image[2 * k + 1] = minus
        perms.append(Permutation(image, size=size))
    return PermutationGroup(perms)


def identify_structure(elements: Sequence) -> str:
    """Name of a point-stabilizer subgroup, or ``"unrecognized"``."""
    points = as_points(elements)
    if len(points) <= 1:
        return "1"
    group = to_sympy(points)
    if group.is_abelian:
        invariants = tuple(sorted(group.abelian_invariants()))
        return _ABELIAN_NAMES.get(invariants, UNRECOGNIZED)
    histogram = Counter(p.order() for p in group.generate())
    key = (group.order(), tuple(sorted(histogram.items())))
    return _NON_ABELIAN_NAMES.get(key, UNRECOGNIZED)


def canonical_subgroup_key(points: Iterable[SignedPermutation], dim: int) -> Tuple[SignedPermutation, ...]:
    """Least sorted element tuple over all conjugates in the hyperoctahedral group."""
    points = list(points)
    best = None
    for u in hyperoctahedral(dim):
        inv = u.inverse()
        conj = tuple(sorted(inv.then(w).then(u) for w in points))
        if best is None or conj < best:
            best = conj
    return best


def normalizer(points: Iterable[SignedPermutation], dim: int) -> Tuple[SignedPermutation, ...]:
    members = frozenset(points)
    return tuple(
        u for u in hyperoctahedral(dim)
        if all(u.inverse().then(w).then(u) in members for w in members)
    )


class SubgroupClass(NamedTuple):
    """Conjugacy class of subgroups of the hyperoctahedral group."""
    index: int
    representative: Tuple[SignedPermutation, ...]
    conjugates: int
    structure: str

    @property
    def order(self) -> int:
        return len(self.representative)


@lru_cache(maxsize=None)
def subgroup_classes(dim: int) -> Tuple[SubgroupClass, ...]:
    """All subgroups of the hyperoctahedral group up to conjugacy.

    Classes are ordered by group order, then by canonical key, and numbered
    from 1 in that order.
    """
    identity = SignedPermutation.identity(dim)
    elements = hyperoctahedral(dim)
    trivial = (identity,)
    found = {trivial}
    queue = deque([trivial])
    while queue:
        group = queue.popleft()
        members = set(group)
        gens = small_generating_set(group)
        for g in elements:
            if g in members:
                continue
            bigger = generate(gens + [g], identity)
            if bigger not in found:
                found.add(bigger)
                queue.append(bigger)
    classes: Dict[Tuple[SignedPermutation, ...], int] = Counter(
        canonical_subgroup_key(group, dim) for group in found
    )
    ordered = sorted(classes, key=lambda key: (len(key), key))
    result = tuple(
        SubgroupClass(i + 1, key, classes[key], identify_structure(key))
        for i, key in enumerate(ordered)
    )
    logger.debug(f"{len(found)} subgroups in {len(result)} classes for dimension {dim}")
    return result


def subgroup_class_of(points: Iterable[SignedPermutation], dim: int) -> SubgroupClass:
    key = canonical_subgroup_key(points, dim)
    for cls in subgroup_classes(dim):
        if cls.representative == key:
            return cls
    raise ValueError("Element set is not a subgroup of the hyperoctahedral group")
