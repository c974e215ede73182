import json

import pytest

from src.core.catalog_file import CatalogFile
from src.core.config.system_config import PipelineConfig
from src.core.error_handler import MisuseError
from src.core.system_integrator import SystemIntegrator, run_pipeline


def pipeline_config(tmp_path, dimension=1, **overrides) -> PipelineConfig:
    return PipelineConfig(
        dimension=dimension,
        output_directory=str(tmp_path / "catalogs"),
        checkpoint_directory=str(tmp_path / "checkpoints"),
        log_directory=str(tmp_path / "logs"),
        **overrides,
    )


class TestSystemIntegration:
    """End-to-end pipeline tests."""

    @pytest.fixture
    def integrator(self, tmp_path):
        return SystemIntegrator(pipeline_config(tmp_path))

    def test_line_pipeline(self, integrator):
        """Test headline counts of the one-dimensional pipeline."""
        summary = integrator.run_pipeline()
        assert summary.groups == 3
        assert summary.stabilizer_classes == 2
        assert summary.saturated_generated == 4
        assert summary.saturated_representatives == 2
        assert summary.non_saturated == 1
        assert summary.disconnected == 1
        assert summary.class_I_total == 3
        assert summary.combinations == 2
        assert summary.iso_classes == 3
        assert summary.iso_classes_saturated == 2
        assert summary.iso_classes_non_saturated == 1
        assert summary.undecided_pairs == 0

    def test_outputs_written(self, integrator):
        """Test the catalogs, tables and summary of a run."""
        integrator.run_pipeline()
        for name in ("groups", "stabilizers", "realizations", "thinned", "combinations",
                     "desaturated", "disconnected", "growth", "iso-classes", "undecided", "summary"):
            assert integrator.path(name).exists(), name
        summary = json.loads(integrator.path("summary").read_text())
        assert summary["config_digest"] == integrator.digest
        survivors = CatalogFile.read(str(integrator.path("desaturated")))
        assert all(spec_id.endswith("*") for spec_id in survivors.realizations)
        assert all(not spec.saturated for spec in survivors.realizations.values())

    def test_rerun_is_deterministic(self, tmp_path):
        """Test that a second run reuses catalogs and reproduces the summary."""
        config = pipeline_config(tmp_path)
        first = run_pipeline(config)
        groups_text = (tmp_path / "catalogs" / "groups.cat").read_text()
        second = run_pipeline(config)
        assert first == second
        assert (tmp_path / "catalogs" / "groups.cat").read_text() == groups_text

    def test_fresh_runs_agree(self, tmp_path):
        """Test byte-identical catalogs from independent runs."""
        run_pipeline(pipeline_config(tmp_path / "a"))
        run_pipeline(pipeline_config(tmp_path / "b"))
        for name in ("groups.cat", "thinned.cat", "growth.cat", "iso-classes.tsv"):
            assert (tmp_path / "a" / "catalogs" / name).read_bytes() == \
                (tmp_path / "b" / "catalogs" / name).read_bytes()

    def test_stage_selection(self, tmp_path):
        """Test that a later stage needs the catalogs of earlier ones."""
        config = pipeline_config(tmp_path, stages=["thin"])
        with pytest.raises(MisuseError):
            run_pipeline(config)

    def test_stages_resume_from_files(self, tmp_path):
        """Test running the pipeline in two halves."""
        run_pipeline(pipeline_config(tmp_path, stages=["enum-groups", "gen-realizations", "thin"]))
        summary = run_pipeline(pipeline_config(tmp_path, stages=["desaturate", "growth", "iso-classes"]))
        assert summary.saturated_representatives == 2
        assert summary.iso_classes == 3

    def test_changed_input_rebuilds_growth(self, tmp_path):
        """Test that growth is recomputed when its input catalog changed."""
        run_pipeline(pipeline_config(tmp_path, stages=["enum-groups", "gen-realizations", "thin"]))
        run_pipeline(pipeline_config(tmp_path, stages=["desaturate", "growth"]))
        thinned_path = tmp_path / "catalogs" / "thinned.cat"
        lines = thinned_path.read_text().splitlines()
        kept = [line for line in lines if not line.startswith("R\t")]
        dropped = [line for line in lines if line.startswith("R\t")]
        thinned_path.write_text("\n".join(kept + dropped[:1]) + "\n")
        run_pipeline(pipeline_config(tmp_path, stages=["desaturate", "growth"]))
        growth = CatalogFile.read(str(tmp_path / "catalogs" / "growth.cat"))
        thinned = CatalogFile.read(str(thinned_path))
        survivors = CatalogFile.read(str(tmp_path / "catalogs" / "desaturated.cat"))
        assert len(thinned.realizations) == 1
        assert set(growth.growth) == set(thinned.realizations) | set(survivors.realizations)

    def test_unexpected_errors_propagate(self, tmp_path, monkeypatch):
        """Test that only catalog errors trigger a rebuild of an existing catalog."""
        run_pipeline(pipeline_config(tmp_path, stages=["enum-groups"]))

        def broken(self, path):
            raise TypeError("not a catalog problem")

        monkeypatch.setattr(SystemIntegrator, "read_catalog", broken)
        with pytest.raises(TypeError):
            run_pipeline(pipeline_config(tmp_path, stages=["enum-groups"]))


@pytest.mark.slow
class TestPlaneCensus:
    """Two-dimensional census."""

    def test_class_one_total(self, tmp_path):
        """Test the number of class-I realizations of the square grid."""
        summary = run_pipeline(pipeline_config(tmp_path, dimension=2))
        assert summary.class_I_total == 87

    def test_isomorphism_fully_decided(self, tmp_path):
        """Test that common-multiple period boxes join the pairs certificates cannot separate."""
        summary = run_pipeline(pipeline_config(tmp_path, dimension=2))
        assert summary.undecided_pairs == 0
        table = (tmp_path / "catalogs" / "iso-classes.tsv").read_text().splitlines()[1:]
        class_of = {}
        for line in table:
            number, _, _, saturated, unsaturated = line.split("\t")
            for member in (saturated + "," + unsaturated).split(","):
                if member != "-":
                    class_of[member] = number
        assert class_of["R379"] == class_of["R159*"] == class_of["R401*"]
        assert class_of["R377"] == class_of["R23*"]
        assert class_of["R115"] == class_of["R159"]
        assert summary.iso_classes == len(table)


@pytest.mark.extended
class TestSpaceCensus:
    """Three-dimensional census."""

    def test_realization_counts(self, tmp_path):
        """Test saturated, non-saturated and disconnected counts of the cubic grid."""
        summary = run_pipeline(pipeline_config(tmp_path, dimension=3, jobs=4,
                                               stages=["enum-groups", "classify-stabilizers",
                                                       "gen-realizations", "thin", "desaturate"]))
        assert summary.groups == 786
        assert summary.stabilizer_classes == 33
        assert summary.saturated_representatives == 2872
        assert summary.non_saturated == 2701
        assert summary.disconnected == 171
        assert summary.combinations == 59
