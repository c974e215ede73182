"""Line-oriented text catalogs exchanged between pipeline stages.

A catalog starts with a header::

    # grid2x-catalog v1
    # dim=3
    # stage=thin
    # digest=<config digest>

followed by one tab-separated record per line. The first field names the
record kind:

    G  id  stabilizer-class  point-class  generators  lattice  vector-system
    R  id  group-id  L  m  X  S|N
    W  id  growth counts  C|D
    C  class-number  member ids
    U  id  id
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple
import hashlib
import logging

from src.core.config.config_validator import STAGES
from src.core.error_handler import (
    CatalogParseError,
    InvalidRealizationError,
    StaleInputError,
    UnknownStageError,
)
from src.graphs.periodic_graph import GrowthVector
from src.groups.enumeration import GroupEntry
from src.groups.grid_algebra import (
    GridAutomorphism,
    parse_automorphism,
    parse_vector,
)
from src.groups.lattice import Lattice
from src.groups.space_group import SpaceGroupNF, closure
from src.realizations.realization import RealizationSpec, validate

logger = logging.getLogger(__name__)

FORMAT_VERSION = "v1"
MAGIC = f"# grid2x-catalog {FORMAT_VERSION}"


@dataclass
class CatalogFile:
    dim: int
    stage: str
    digest: str
    groups: Dict[str, GroupEntry] = field(default_factory=dict)
    realizations: Dict[str, RealizationSpec] = field(default_factory=dict)
    growth: Dict[str, GrowthVector] = field(default_factory=dict)
    classes: List[Tuple[str, ...]] = field(default_factory=list)
    undecided: List[Tuple[str, str]] = field(default_factory=list)

    def __post_init__(self):
        if self.stage not in STAGES:
            raise UnknownStageError(f"unknown stage {self.stage!r}", line=3)

    def add_realization(self, spec_id: str, spec: RealizationSpec, group: GroupEntry) -> None:
        self.groups.setdefault(group.id, group)
        self.realizations[spec_id] = spec

    def serialize(self) -> str:
        lines = [MAGIC, f"# dim={self.dim}", f"# stage={self.stage}", f"# digest={self.digest}"]
        lines.extend(format_group(entry) for entry in self.groups.values())
        lines.extend(f"R\t{spec_id}\t{spec.to_text()}" for spec_id, spec in self.realizations.items())
        lines.extend(f"W\t{spec_id}\t{vector.to_text()}" for spec_id, vector in self.growth.items())
        lines.extend(f"C\t{n}\t" + " ".join(members) for n, members in enumerate(self.classes, 1))
        lines.extend(f"U\t{a}\t{b}" for a, b in self.undecided)
        return "\n".join(lines) + "\n"

    def content_digest(self) -> str:
        return hashlib.sha256(self.serialize().encode()).hexdigest()

    def check_digest(self, expected: str) -> None:
        if self.digest != expected:
            raise StaleInputError(
                f"catalog from stage {self.stage} has digest {self.digest}, active configuration is {expected}")

    def write(self, path: str) -> None:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        tmp = target.with_suffix(target.suffix + ".tmp")
        tmp.write_text(self.serialize())
        tmp.replace(target)
        logger.info(f"Wrote {target} ({len(self.groups)} groups, {len(self.realizations)} realizations)")

    @classmethod
    def read(cls, path: str) -> "CatalogFile":
        return cls.parse(Path(path).read_text())

    @classmethod
    def parse(cls, text: str) -> "CatalogFile":
        lines = text.splitlines()
        header = _parse_header(lines)
        catalog = cls(**header)
        for number, line in enumerate(lines[4:], 5):
            if not line.strip():
                continue
            fields = _Fields(line, number)
            kind = fields.next()
            if kind == "G":
                entry = parse_group(fields, catalog.dim)
                catalog.groups[entry.id] = entry
            elif kind == "R":
                spec_id = fields.next()
                catalog.realizations[spec_id] = parse_realization(fields, catalog.groups)
            elif kind == "W":
                spec_id = fields.next()
                counts = fields.ints(fields.next(), ",")
                flag = fields.next()
                if flag not in ("C", "D"):
                    fields.fail(f"connectivity flag must be C or D, got {flag!r}")
                catalog.growth[spec_id] = GrowthVector(counts, flag == "C")
            elif kind == "C":
                fields.next()
                catalog.classes.append(tuple(fields.next().split()))
            elif kind == "U":
                catalog.undecided.append((fields.next(), fields.next()))
            else:
                fields.fail(f"unknown record kind {kind!r}", 0)
            fields.done()
        return catalog


def _parse_header(lines: List[str]) -> dict:
    if not lines or lines[0].strip() != MAGIC:
        raise CatalogParseError(f"expected {MAGIC!r}", line=1)
    values = {}
    for number, key in ((2, "dim"), (3, "stage"), (4, "digest")):
        prefix = f"# {key}="
        if len(lines) < number or not lines[number - 1].startswith(prefix):
            raise CatalogParseError(f"expected header field {key}", line=number)
        values[key] = lines[number - 1][len(prefix):].strip()
    try:
        values["dim"] = int(values["dim"])
    except ValueError:
        raise CatalogParseError(f"dimension {values['dim']!r} is not an integer", line=2, column=7) from None
    if values["stage"] not in STAGES:
        raise UnknownStageError(f"unknown stage {values['stage']!r}", line=3, column=9)
    return values


class _Fields:
    """Cursor over the tab-separated fields of one line."""

    def __init__(self, line: str, number: int):
        self.parts = line.split("\t")
        self.number = number
        self.index = 0
        starts, pos = [], 0
        for part in self.parts:
            starts.append(pos + 1)
            pos += len(part) + 1
        self.starts = starts

    def fail(self, message: str, index: Optional[int] = None):
        index = self.index - 1 if index is None else index
        column = self.starts[min(max(index, 0), len(self.starts) - 1)]
        raise CatalogParseError(message, line=self.number, column=column)

    def next(self) -> str:
        if self.index >= len(self.parts):
            self.fail("missing field", len(self.parts) - 1)
        self.index += 1
        return self.parts[self.index - 1]

    def done(self) -> None:
        if self.index != len(self.parts):
            self.fail("unexpected trailing field", self.index)

    def integer(self, text: str) -> int:
        try:
            return int(text)
        except ValueError:
            self.fail(f"expected an integer, got {text!r}")

    def ints(self, text: str, sep: str) -> Tuple[int, ...]:
        try:
            return tuple(int(part) for part in text.split(sep))
        except ValueError:
            self.fail(f"expected integers, got {text!r}")

    def automorphisms(self, text: str, dim: int) -> Tuple[GridAutomorphism, ...]:
        try:
            elements = tuple(parse_automorphism(part) for part in text.split())
        except ValueError as e:
            self.fail(str(e))
        if any(g.dim != dim for g in elements):
            self.fail(f"element of wrong dimension in {text!r}")
        return elements


def format_group(entry: GroupEntry) -> str:
    return "\t".join([
        "G",
        entry.id,
        str(entry.stabilizer_class),
        str(entry.point_class),
        " ".join(g.to_text() for g in entry.generators),
        entry.group.to_text(),
    ])


def parse_group(fields: _Fields, dim: int) -> GroupEntry:
    entry_id = fields.next()
    stabilizer_class = fields.integer(fields.next())
    point_class = fields.integer(fields.next())
    generators = fields.automorphisms(fields.next(), dim)
    lattice_text = fields.next()
    try:
        rows = [] if lattice_text == "-" else [parse_vector(row) for row in lattice_text.split("|")]
    except ValueError as e:
        fields.fail(str(e))
    lattice = Lattice.from_vectors(rows, dim)
    if list(lattice.basis) != rows:
        fields.fail("lattice basis is not in Hermite normal form")
    reps = {}
    for part in fields.automorphisms(fields.next(), dim):
        reps[part.point] = part.trans
    point = tuple(sorted(reps))
    group = SpaceGroupNF(dim, point, lattice, tuple(reps[w] for w in point))
    if closure(generators, dim) != group:
        fields.fail(f"generators of {entry_id} do not generate the recorded group", 4)
    return GroupEntry(entry_id, group, generators, stabilizer_class, point_class)


def parse_realization(fields: _Fields, groups: Dict[str, GroupEntry]) -> RealizationSpec:
    group_id = fields.next()
    if group_id not in groups:
        fields.fail(f"unknown group {group_id!r}")
    group = groups[group_id].group
    L = fields.automorphisms(fields.next(), group.dim)
    m_text = fields.next()
    m = fields.automorphisms(m_text, group.dim)
    if len(m) != 1:
        fields.fail(f"expected one element, got {m_text!r}")
    X = fields.automorphisms(fields.next(), group.dim)
    flag = fields.next()
    if flag not in ("S", "N"):
        fields.fail(f"saturation flag must be S or N, got {flag!r}")
    spec = RealizationSpec(group_id, group, L, m[0], X, flag == "S")
    try:
        canonical = validate(spec)
    except InvalidRealizationError as e:
        fields.fail(str(e), 2)
    if canonical != spec:
        fields.fail("realization is not in canonical form", 2)
    return spec
