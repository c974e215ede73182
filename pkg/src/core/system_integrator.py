from typing import Callable, Optional, Tuple
from functools import partial
from pathlib import Path
import itertools
import logging
import time

from pydantic import BaseModel

from src.core.catalog_file import CatalogFile
from src.core.config.system_config import PipelineConfig
from src.core.error_handler import Grid2xError, MisuseError, StaleInputError
from src.core.export_handler import ExportHandler, TableInputs, TableKind
from src.core.logging_manager import LoggingManager
from src.core.state_manager import StateManager
from src.core.task_scheduler import TaskScheduler
from src.graphs.isomorphism import IsoPartition, iso_classes as partition_by_isomorphism
from src.graphs.periodic_graph import growth as growth_vector
from src.groups.classification import StabilizerClassification, classify_stabilizers
from src.groups.enumeration import GroupCatalog, enumerate_vertex_transitive
from src.realizations.equivalence import thin as thin_specs
from src.realizations.generator import generate_for_entry
from src.realizations.realization import combination_string, desaturate as desaturate_spec

OUTPUT_FILES = {
    "groups": "groups.cat",
    "stabilizers": "stabilizers.tsv",
    "realizations": "realizations.cat",
    "thinned": "thinned.cat",
    "combinations": "combinations.tsv",
    "desaturated": "desaturated.cat",
    "disconnected": "disconnected.cat",
    "growth": "growth.cat",
    "iso-classes": "iso-classes.tsv",
    "undecided": "undecided.tsv",
    "summary": "summary.json",
}


class PipelineSummary(BaseModel):
    """Headline counts of a pipeline run."""

    dimension: int
    config_digest: str
    groups: Optional[int] = None
    stabilizer_classes: Optional[int] = None
    saturated_generated: Optional[int] = None
    saturated_representatives: Optional[int] = None
    non_saturated: Optional[int] = None
    disconnected: Optional[int] = None
    class_I_total: Optional[int] = None
    combinations: Optional[int] = None
    iso_classes: Optional[int] = None
    iso_classes_saturated: Optional[int] = None
    iso_classes_non_saturated: Optional[int] = None
    non_singleton_classes: Optional[int] = None
    undecided_pairs: Optional[int] = None


class SystemIntegrator:
    """Runs pipeline stages over text catalogs with checkpoint/resume."""

    def __init__(self, config: PipelineConfig, logging_manager: Optional[LoggingManager] = None):
        self.logger = logging.getLogger(__name__)
        self.config = config
        self.digest = config.digest()
        self.logging_manager = logging_manager
        self.state_manager = StateManager(
            str(Path(config.checkpoint_directory) / f"dim{config.dimension}"), self.digest)
        self.task_scheduler = TaskScheduler(config.jobs, config.stage_budget_seconds, self.state_manager)
        self.export_handler = ExportHandler()
        self.output_dir = Path(config.output_directory)

    def path(self, name: str) -> Path:
        return self.output_dir / OUTPUT_FILES[name]

    def _metric(self, name: str, value, started: Optional[float] = None):
        if self.logging_manager is None:
            return
        context = {"dimension": self.config.dimension}
        if started is not None:
            context["seconds"] = round(time.monotonic() - started, 3)
        self.logging_manager.log_performance_metric(name, value, context)

    def _catalog(self, stage: str) -> CatalogFile:
        return CatalogFile(self.config.dimension, stage, self.digest)

    def read_catalog(self, path: Path) -> CatalogFile:
        if not Path(path).exists():
            raise MisuseError(f"required catalog {path} is missing")
        catalog = CatalogFile.read(str(path))
        catalog.check_digest(self.digest)
        return catalog

    # Stages

    def enum_groups(self) -> CatalogFile:
        started = time.monotonic()
        catalog = enumerate_vertex_transitive(
            self.config.dimension,
            runner=self.task_scheduler.runner("enum-groups"),
            max_dimension=self.config.max_dimension,
        )
        result = self._catalog("enum-groups")
        for entry in catalog.entries:
            result.groups[entry.id] = entry
        self._metric("groups", len(catalog), started)
        return result

    def classify(self, groups: CatalogFile) -> StabilizerClassification:
        return classify_stabilizers(GroupCatalog(groups.dim, tuple(groups.groups.values())))

    def generate(self, groups: CatalogFile) -> CatalogFile:
        started = time.monotonic()
        entries = list(groups.groups.values())
        batches = self.task_scheduler.runner("gen-realizations")(generate_for_entry, entries)
        result = self._catalog("gen-realizations")
        counter = itertools.count(1)
        for entry, specs in zip(entries, batches):
            for spec in specs:
                result.add_realization(f"R{next(counter)}", spec, entry)
        self._metric("saturated_generated", len(result.realizations), started)
        return result

    def thin(self, realizations: CatalogFile) -> CatalogFile:
        started = time.monotonic()
        ids = {spec: spec_id for spec_id, spec in realizations.realizations.items()}
        kept = thin_specs(list(realizations.realizations.values()), self.task_scheduler.runner("thin"))
        result = self._catalog("thin")
        for spec in kept:
            result.add_realization(ids[spec], spec, realizations.groups[spec.group_id])
        self._metric("saturated_representatives", len(kept), started)
        return result

    def desaturate(self, thinned: CatalogFile) -> Tuple[CatalogFile, CatalogFile]:
        """Surviving non-saturated realizations (ids starred) and the
        saturated ones whose desaturation is disconnected."""
        survivors = self._catalog("desaturate")
        disconnected = self._catalog("desaturate")
        for spec_id, spec in thinned.realizations.items():
            group = thinned.groups[spec.group_id]
            thinner = desaturate_spec(spec)
            if thinner is None:
                disconnected.add_realization(spec_id, spec, group)
            else:
                survivors.add_realization(f"{spec_id}*", thinner, group)
        self._metric("disconnected", len(disconnected.realizations))
        return survivors, disconnected

    def growth(self, *catalogs: CatalogFile) -> CatalogFile:
        started = time.monotonic()
        result = self._catalog("growth")
        for catalog in catalogs:
            for spec_id, spec in catalog.realizations.items():
                result.add_realization(spec_id, spec, catalog.groups[spec.group_id])
        ids = list(result.realizations)
        vectors = self.task_scheduler.runner("growth")(
            partial(growth_vector, radii=self.config.growth_radii),
            [result.realizations[spec_id] for spec_id in ids])
        result.growth = dict(zip(ids, vectors))
        self._metric("growth_vectors", len(ids), started)
        return result

    def iso_classes(self, *catalogs: CatalogFile) -> IsoPartition:
        started = time.monotonic()
        specs = [(spec_id, spec) for catalog in catalogs for spec_id, spec in catalog.realizations.items()]
        partition = partition_by_isomorphism(specs, self.config.radius, self.config.radius_cap, self.config.match_limit)
        self._metric("iso_classes", len(partition.classes), started)
        return partition

    def write_undecided(self, partition: IsoPartition, path: Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("".join(f"{a}\t{b}\n" for a, b in partition.undecided))

    # Orchestration

    def run_pipeline(self) -> PipelineSummary:
        cfg = self.config
        summary = PipelineSummary(dimension=cfg.dimension, config_digest=self.digest)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        stages = set(cfg.stages)
        self.logger.info(f"Running stages {', '.join(cfg.stages)} for dimension {cfg.dimension}")

        groups = self._produce("groups", "enum-groups" in stages, self.enum_groups)
        summary.groups = len(groups.groups)

        if "classify-stabilizers" in stages:
            classification = self.classify(groups)
            self.export_handler.write_table(
                TableKind.STABILIZERS, TableInputs(classification=classification), self.path("stabilizers"))
            summary.stabilizer_classes = len(classification.stabilizer_rows)

        if not stages & {"gen-realizations", "thin", "desaturate", "growth", "iso-classes"}:
            return self._finish(summary)

        generated = self._produce(
            "realizations", "gen-realizations" in stages, lambda: self.generate(groups),
            lambda catalog: all(groups.groups.get(i) == entry for i, entry in catalog.groups.items()))
        summary.saturated_generated = len(generated.realizations)

        thinned = self._produce(
            "thinned", "thin" in stages, lambda: self.thin(generated),
            lambda catalog: all(generated.realizations.get(i) == s for i, s in catalog.realizations.items()))
        summary.saturated_representatives = len(thinned.realizations)
        self.export_handler.write_table(
            TableKind.COMBINATIONS, TableInputs(realizations=thinned.realizations), self.path("combinations"))
        summary.combinations = len({combination_string(s) for s in thinned.realizations.values()})

        if not stages & {"desaturate", "growth", "iso-classes"}:
            return self._finish(summary)

        if "desaturate" in stages:
            survivors, disconnected = self.desaturate(thinned)
            survivors.write(str(self.path("desaturated")))
            disconnected.write(str(self.path("disconnected")))
        else:
            survivors = self.read_catalog(self.path("desaturated"))
            disconnected = self.read_catalog(self.path("disconnected"))
        summary.non_saturated = len(survivors.realizations)
        summary.disconnected = len(disconnected.realizations)
        summary.class_I_total = summary.saturated_representatives + summary.non_saturated

        if "growth" in stages:
            self._produce(
                "growth", True, lambda: self.growth(thinned, survivors),
                lambda catalog: catalog.realizations == {**thinned.realizations, **survivors.realizations})

        if "iso-classes" in stages:
            partition = self.iso_classes(thinned, survivors)
            self.export_handler.write_table(
                TableKind.ISO_CLASSES, TableInputs(classes=partition.classes), self.path("iso-classes"))
            self.write_undecided(partition, self.path("undecided"))
            summary.iso_classes = len(partition.classes)
            summary.iso_classes_saturated = len(partition.saturated_classes())
            summary.iso_classes_non_saturated = len(partition.non_saturated_classes())
            summary.non_singleton_classes = len(partition.non_singleton())
            summary.undecided_pairs = len(partition.undecided)

        return self._finish(summary)

    def _produce(self, name: str, run: bool, build,
                 inputs: Optional[Callable[[CatalogFile], bool]] = None) -> CatalogFile:
        """Reuse a catalog written under the same digest whose content still
        matches its stage input, else build it."""
        path = self.path(name)
        if path.exists():
            try:
                catalog = self.read_catalog(path)
                if inputs is not None and not inputs(catalog):
                    raise StaleInputError(f"{path} was built from other input catalogs")
                self.logger.info(f"Reusing {path}")
                return catalog
            except (Grid2xError, OSError, UnicodeDecodeError) as e:
                if not run:
                    raise
                self.logger.warning(f"Rebuilding {path}: {e}")
        if not run:
            raise MisuseError(f"required catalog {path} is missing and its stage is not selected")
        catalog = build()
        catalog.write(str(path))
        return catalog

    def _finish(self, summary: PipelineSummary) -> PipelineSummary:
        self.path("summary").write_text(summary.model_dump_json(indent=2) + "\n")
        for name, value in summary.model_dump().items():
            if isinstance(value, int) and name != "dimension":
                self._metric(name, value)
        return summary


def run_pipeline(cfg: PipelineConfig, logging_manager: Optional[LoggingManager] = None) -> PipelineSummary:
    return SystemIntegrator(cfg, logging_manager).run_pipeline()
