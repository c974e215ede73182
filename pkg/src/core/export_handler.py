from typing import Any, Dict, List, Optional, Sequence, Tuple
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
import logging

from src.core.error_handler import MisuseError
from src.groups.classification import StabilizerClassification
from src.realizations.realization import RealizationSpec, combination_string


class TableKind(Enum):
    """Tables the pipeline can emit."""
    STABILIZERS = "stabilizers"
    COMBINATIONS = "combinations"
    ISO_CLASSES = "iso-classes"


@dataclass
class TableInputs:
    classification: Optional[StabilizerClassification] = None
    realizations: Optional[Dict[str, RealizationSpec]] = None
    classes: Optional[Sequence[Tuple[str, ...]]] = None


class ExportHandler:
    """Renders catalogs as deterministic tab-separated tables."""

    def __init__(self):
        self.logger = logging.getLogger("grid2x.export")
        self.headers = {
            TableKind.STABILIZERS: ["class", "structure", "generators", "groups"],
            TableKind.COMBINATIONS: ["combination", "realizations"],
            TableKind.ISO_CLASSES: ["class", "size", "kind", "saturated", "non-saturated"],
        }

    def emit_table(self, which: TableKind, inputs: TableInputs) -> str:
        which = TableKind(which)
        if which is TableKind.STABILIZERS:
            rows = self._stabilizer_rows(self._require(inputs.classification, which, "group catalog"))
        elif which is TableKind.COMBINATIONS:
            rows = self._combination_rows(self._require(inputs.realizations, which, "realization catalog"))
        else:
            rows = self._iso_rows(self._require(inputs.classes, which, "isomorphism classes"))
        lines = ["\t".join(self.headers[which])] + ["\t".join(str(cell) for cell in row) for row in rows]
        self.logger.info(f"Emitted {which.value} table with {len(rows)} rows")
        return "\n".join(lines) + "\n"

    def write_table(self, which: TableKind, inputs: TableInputs, output_path: Path) -> int:
        text = self.emit_table(which, inputs)
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(text)
        return text.count("\n") - 1

    def _require(self, value: Any, which: TableKind, what: str) -> Any:
        if value is None:
            raise MisuseError(f"{which.value} table needs a {what}")
        return value

    def _stabilizer_rows(self, classification: StabilizerClassification) -> List[list]:
        return [
            [row.class_id, row.structure,
             " ".join(w.to_text() for w in row.generators) or "-",
             ",".join(row.members)]
            for row in classification.stabilizer_rows
        ]

    def _combination_rows(self, realizations: Dict[str, RealizationSpec]) -> List[list]:
        census = Counter(combination_string(spec) for spec in realizations.values())
        return [[string, census[string]] for string in sorted(census)]

    def _iso_rows(self, classes: Sequence[Tuple[str, ...]]) -> List[list]:
        # Larger classes first; non-saturated ids carry a trailing star.
        # kind: S saturated only, N non-saturated only, SN mixed.
        ordered = sorted(classes, key=lambda cls: (-len(cls), cls))
        rows = []
        for number, members in enumerate(ordered, 1):
            saturated = [m for m in members if not m.endswith("*")]
            unsaturated = [m for m in members if m.endswith("*")]
            kind = ("S" if saturated else "") + ("N" if unsaturated else "")
            rows.append([number, len(members), kind, ",".join(saturated) or "-", ",".join(unsaturated) or "-"])
        return rows
