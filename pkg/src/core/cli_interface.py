from typing import Any, Callable, Optional, Tuple
import logging

import click

from src.core.catalog_file import CatalogFile
from src.core.config.system_config import load_pipeline_config
from src.core.error_handler import DimensionMismatchError, ErrorHandler, ExitCode
from src.core.export_handler import TableInputs, TableKind
from src.core.logging_manager import LoggingManager
from src.core.system_integrator import SystemIntegrator

logger = logging.getLogger(__name__)


class CLIInterface:
    """Command-line interface of the grid 2-extension toolkit."""

    def __init__(self):
        self.error_handler = ErrorHandler()
        self.setup_cli()

    def _integrator(self, ctx: click.Context, **overrides: Any) -> SystemIntegrator:
        config = load_pipeline_config(ctx.obj["config_dir"], **overrides)
        logging_manager = LoggingManager(config.log_directory, config.log_level, console=ctx.obj["verbose"])
        return SystemIntegrator(config, logging_manager)

    def _open(self, ctx: click.Context, path: str, **overrides: Any) -> Tuple[CatalogFile, SystemIntegrator]:
        """Read an input catalog and set up for its dimension."""
        catalog = CatalogFile.read(path)
        integrator = self._integrator(ctx, dimension=catalog.dim, **overrides)
        catalog.check_digest(integrator.digest)
        return catalog, integrator

    def _guard(self, ctx: click.Context, operation: str, action: Callable[[], Optional[ExitCode]]):
        try:
            code = action() or ExitCode.SUCCESS
        except Exception as e:
            code = self.error_handler.handle_error(e, "cli", operation)
            click.echo(f"Error: {e}", err=True)
        ctx.exit(int(code))

    def setup_cli(self):
        """Set up CLI commands."""

        @click.group()
        @click.option("--config", "config_dir", default="config", show_default=True,
                      help="Directory holding pipeline.yaml")
        @click.option("--verbose", is_flag=True, help="Log to the console as well")
        @click.pass_context
        def cli(ctx: click.Context, config_dir: str, verbose: bool):
            """Symmetrical 2-extensions of the d-dimensional grid."""
            ctx.ensure_object(dict)
            ctx.obj["config_dir"] = config_dir
            ctx.obj["verbose"] = verbose

        @cli.command("enum-groups")
        @click.option("--dim", type=int, required=True, help="Grid dimension")
        @click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
        @click.option("--jobs", type=int, default=None, help="Worker processes (default: GRID2X_JOBS or config)")
        @click.option("--checkpoint", "checkpoint_dir", type=click.Path(file_okay=False), default=None)
        @click.pass_context
        def enum_groups(ctx, dim: int, out_path: str, jobs: Optional[int], checkpoint_dir: Optional[str]):
            """Enumerate vertex-transitive groups up to conjugacy."""
            def action():
                integrator = self._integrator(ctx, dimension=dim, jobs=jobs, checkpoint_directory=checkpoint_dir)
                catalog = integrator.enum_groups()
                catalog.write(out_path)
                click.echo(f"{len(catalog.groups)} groups")
            self._guard(ctx, "enum-groups", action)

        @cli.command("classify-stabilizers")
        @click.option("--groups", "groups_path", type=click.Path(exists=True, dir_okay=False), required=True)
        @click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
        @click.pass_context
        def classify_stabilizers(ctx, groups_path: str, out_path: str):
            """Tabulate origin stabilizers by conjugacy class."""
            def action():
                groups, integrator = self._open(ctx, groups_path)
                classification = integrator.classify(groups)
                rows = integrator.export_handler.write_table(
                    TableKind.STABILIZERS, TableInputs(classification=classification), out_path)
                click.echo(f"{rows} stabilizer classes")
            self._guard(ctx, "classify-stabilizers", action)

        @cli.command("gen-realizations")
        @click.option("--groups", "groups_path", type=click.Path(exists=True, dir_okay=False), required=True)
        @click.option("--dim", type=int, required=True)
        @click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
        @click.option("--jobs", type=int, default=None)
        @click.pass_context
        def gen_realizations(ctx, groups_path: str, dim: int, out_path: str, jobs: Optional[int]):
            """Generate saturated class-I realizations over every group."""
            def action():
                groups, integrator = self._open(ctx, groups_path, jobs=jobs)
                if groups.dim != dim:
                    raise DimensionMismatchError(f"--dim {dim} but {groups_path} has dimension {groups.dim}")
                catalog = integrator.generate(groups)
                catalog.write(out_path)
                click.echo(f"{len(catalog.realizations)} saturated realizations")
            self._guard(ctx, "gen-realizations", action)

        @cli.command("thin")
        @click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False), required=True)
        @click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
        @click.option("--combinations", "combinations_path", type=click.Path(dir_okay=False), default=None,
                      help="Also write the combination-string census")
        @click.option("--jobs", type=int, default=None)
        @click.pass_context
        def thin(ctx, in_path: str, out_path: str, combinations_path: Optional[str], jobs: Optional[int]):
            """Keep one realization per equivalence class."""
            def action():
                catalog, integrator = self._open(ctx, in_path, jobs=jobs)
                thinned = integrator.thin(catalog)
                thinned.write(out_path)
                if combinations_path:
                    integrator.export_handler.write_table(
                        TableKind.COMBINATIONS, TableInputs(realizations=thinned.realizations), combinations_path)
                click.echo(f"{len(thinned.realizations)} representatives")
            self._guard(ctx, "thin", action)

        @cli.command("desaturate")
        @click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False), required=True)
        @click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
        @click.option("--report-disconnected", "report_path", type=click.Path(dir_okay=False), required=True)
        @click.pass_context
        def desaturate(ctx, in_path: str, out_path: str, report_path: str):
            """Remove in-block edges, keeping the connected results."""
            def action():
                catalog, integrator = self._open(ctx, in_path)
                survivors, disconnected = integrator.desaturate(catalog)
                survivors.write(out_path)
                disconnected.write(report_path)
                click.echo(f"{len(survivors.realizations)} non-saturated, "
                           f"{len(disconnected.realizations)} disconnected")
            self._guard(ctx, "desaturate", action)

        @cli.command("growth")
        @click.option("--in", "in_paths", type=click.Path(exists=True, dir_okay=False), required=True, multiple=True)
        @click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
        @click.option("--jobs", type=int, default=None)
        @click.pass_context
        def growth(ctx, in_paths: Tuple[str, ...], out_path: str, jobs: Optional[int]):
            """Ball orders for radii 1..10 around a vertex."""
            def action():
                first, integrator = self._open(ctx, in_paths[0], jobs=jobs)
                catalogs = [first] + [integrator.read_catalog(path) for path in in_paths[1:]]
                result = integrator.growth(*catalogs)
                result.write(out_path)
                click.echo(f"{len(result.growth)} growth vectors")
            self._guard(ctx, "growth", action)

        @cli.command("iso-classes")
        @click.option("--in", "in_paths", type=click.Path(exists=True, dir_okay=False), required=True, multiple=True)
        @click.option("--radius", type=int, default=None)
        @click.option("--max-radius", type=int, default=None)
        @click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
        @click.option("--undecided", "undecided_path", type=click.Path(dir_okay=False), required=True)
        @click.pass_context
        def iso_classes(ctx, in_paths: Tuple[str, ...], radius: Optional[int], max_radius: Optional[int],
                        out_path: str, undecided_path: str):
            """Partition realizations by isomorphism of their graphs."""
            def action():
                first, integrator = self._open(ctx, in_paths[0], radius=radius, radius_cap=max_radius)
                catalogs = [first] + [integrator.read_catalog(path) for path in in_paths[1:]]
                partition = integrator.iso_classes(*catalogs)
                integrator.export_handler.write_table(
                    TableKind.ISO_CLASSES, TableInputs(classes=partition.classes), out_path)
                integrator.write_undecided(partition, undecided_path)
                click.echo(f"{len(partition.classes)} classes ({len(partition.saturated_classes())} saturated, "
                           f"{len(partition.non_saturated_classes())} non-saturated), "
                           f"{len(partition.non_singleton())} non-singleton, {len(partition.undecided)} undecided pairs")
                return ExitCode.UNDECIDED if partition.undecided else ExitCode.SUCCESS
            self._guard(ctx, "iso-classes", action)

        @cli.command("run")
        @click.option("--dim", type=int, default=None)
        @click.option("--jobs", type=int, default=None)
        @click.option("--checkpoint", "checkpoint_dir", type=click.Path(file_okay=False), default=None)
        @click.option("--out-dir", "output_dir", type=click.Path(file_okay=False), default=None)
        @click.option("--stage", "stages", multiple=True, help="Restrict to these stages (repeatable)")
        @click.pass_context
        def run(ctx, dim: Optional[int], jobs: Optional[int], checkpoint_dir: Optional[str],
                output_dir: Optional[str], stages: Tuple[str, ...]):
            """Run the configured pipeline end to end."""
            def action():
                integrator = self._integrator(
                    ctx, dimension=dim, jobs=jobs, checkpoint_directory=checkpoint_dir,
                    output_directory=output_dir, stages=list(stages) or None)
                summary = integrator.run_pipeline()
                click.echo(summary.model_dump_json(indent=2))
                return ExitCode.UNDECIDED if summary.undecided_pairs else ExitCode.SUCCESS
            self._guard(ctx, "run", action)

        self.cli = cli

    def run(self, args=None):
        """Run the CLI."""
        self.cli(args=args, obj={})


def main():
    CLIInterface().run()
