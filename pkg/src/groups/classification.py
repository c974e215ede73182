from typing import Dict, List, NamedTuple, Tuple

from src.groups.enumeration import GroupCatalog
from src.groups.finite_group import small_generating_set, subgroup_classes
from src.groups.grid_algebra import SignedPermutation


class ClassRow(NamedTuple):
    class_id: int
    structure: str
    generators: Tuple[SignedPermutation, ...]
    members: Tuple[str, ...]


class StabilizerClassification(NamedTuple):
    dim: int
    stabilizer_rows: Tuple[ClassRow, ...]
    point_rows: Tuple[ClassRow, ...]

    def classes_coincide(self) -> bool:
        """Whether the stabilizer classes and the point-group classes are the same set."""
        return ({row.class_id for row in self.stabilizer_rows}
                == {row.class_id for row in self.point_rows})


def _rows(dim: int, membership: Dict[int, List[str]]) -> Tuple[ClassRow, ...]:
    classes = subgroup_classes(dim)
    rows = []
    for class_id in sorted(membership):
        cls = classes[class_id - 1]
        rows.append(ClassRow(
            class_id,
            cls.structure,
            tuple(small_generating_set(cls.representative)),
            tuple(membership[class_id]),
        ))
    return tuple(rows)


def classify_stabilizers(catalog: GroupCatalog) -> StabilizerClassification:
    """Group catalog entries by the conjugacy class of their origin
    stabilizer, and separately by that of their point group."""
    by_stabilizer: Dict[int, List[str]] = {}
    by_point: Dict[int, List[str]] = {}
    for entry in catalog.entries:
        by_stabilizer.setdefault(entry.stabilizer_class, []).append(entry.id)
        by_point.setdefault(entry.point_class, []).append(entry.id)
    return StabilizerClassification(
        catalog.dim,
        _rows(catalog.dim, by_stabilizer),
        _rows(catalog.dim, by_point),
    )
