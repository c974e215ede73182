from itertools import combinations
from typing import List, Sequence
import logging

from src.core.error_handler import QuotientNotGridError
from src.groups.enumeration import GroupEntry
from src.groups.finite_group import index_two_subgroups
from src.groups.grid_algebra import GridAutomorphism, unit_vectors
from src.groups.space_group import SpaceGroupNF, movers, stabilizer_origin
from src.realizations.realization import (
    RealizationSpec,
    canonical_connection,
    is_class_I,
    is_connected,
    validate,
)

logger = logging.getLogger(__name__)


def neighbor_movers(group: SpaceGroupNF) -> List[GridAutomorphism]:
    """Elements of the group moving the origin to a grid neighbor."""
    result = []
    for e in unit_vectors(group.dim):
        result.extend(movers(group, e))
    return result


def connection_units(L: Sequence[GridAutomorphism], candidates: Sequence[GridAutomorphism]) -> List[GridAutomorphism]:
    """Double cosets LxL paired with their inverses, each by its least element."""
    return sorted({canonical_connection(L, x) for x in candidates})


def generate_saturated(group_id: str, group: SpaceGroupNF) -> List[RealizationSpec]:
    """All saturated class-I realizations over a vertex-transitive group,
    one per choice of L and set of connection units."""
    stabilizer = stabilizer_origin(group)
    candidates = neighbor_movers(group)
    found = []
    for L in index_two_subgroups(stabilizer):
        m = min(set(stabilizer) - set(L))
        units = connection_units(L, candidates)
        for size in range(1, len(units) + 1):
            for subset in combinations(units, size):
                raw = RealizationSpec(group_id, group, tuple(L), m, subset, True)
                try:
                    spec = validate(raw)
                except QuotientNotGridError:
                    continue
                if is_class_I(spec) and is_connected(spec):
                    found.append(spec)
    logger.debug(f"{group_id}: {len(found)} saturated class-I realizations")
    return found


def generate_for_entry(entry: GroupEntry) -> List[RealizationSpec]:
    return generate_saturated(entry.id, entry.group)
