import pytest

from src.core.error_handler import UnsupportedDimensionError
from src.groups.classification import classify_stabilizers
from src.groups.enumeration import (
    deduplicate,
    enumerate_by_space_groups,
    enumerate_vertex_transitive,
    match_catalogs,
    search_stabilizer_class,
)
from src.groups.grid_algebra import GridAutomorphism, SignedPermutation
from src.groups.space_group import closure, conjugate, is_vertex_transitive, stabilizer_origin


@pytest.fixture(scope="module")
def line_catalog():
    return enumerate_vertex_transitive(1)


class TestLineGroups:
    """Tests for the one-dimensional census."""

    def test_three_classes(self, line_catalog):
        """Test the translation, glide and reflection groups of the line."""
        assert len(line_catalog) == 3
        assert [entry.id for entry in line_catalog.entries] == ["H1", "H2", "H3"]
        determinants = [entry.group.lattice.determinant() for entry in line_catalog.entries]
        stabilizers = [len(stabilizer_origin(entry.group)) for entry in line_catalog.entries]
        assert determinants == [1, 2, 1]
        assert stabilizers == [1, 1, 2]

    def test_entries_are_vertex_transitive(self, line_catalog):
        """Test every entry and its stored generators."""
        for entry in line_catalog.entries:
            assert is_vertex_transitive(entry.group)
            assert closure(entry.generators, 1) == entry.group

    def test_oracle_agrees(self, line_catalog):
        """Test the point-group strategy on the line."""
        oracle = enumerate_by_space_groups(1)
        assert len(oracle) == 3
        assert match_catalogs(line_catalog, oracle) == ([], [])

    def test_classification(self, line_catalog):
        """Test stabilizer and point-group rows on the line."""
        classification = classify_stabilizers(line_catalog)
        assert [row.members for row in classification.stabilizer_rows] == [("H1", "H2"), ("H3",)]
        assert [row.structure for row in classification.stabilizer_rows] == ["1", "C2"]
        assert classification.classes_coincide()

    def test_custom_runner(self):
        """Test that the runner sees one unit per stabilizer class."""
        seen = []

        def runner(fn, items):
            seen.extend(items)
            return [fn(item) for item in items]

        catalog = enumerate_vertex_transitive(1, runner=runner)
        assert seen == [1, 2]
        assert len(catalog) == 3

    def test_unsupported_dimension(self):
        """Test dimensions beyond the configured maximum."""
        with pytest.raises(UnsupportedDimensionError):
            enumerate_vertex_transitive(4)
        with pytest.raises(UnsupportedDimensionError):
            enumerate_by_space_groups(3)


class TestDeduplicate:
    """Tests for conjugacy deduplication."""

    def test_conjugates_collapse(self):
        """Test that a group and its conjugates keep one representative."""
        group = closure([GridAutomorphism.translation((2, 0)), GridAutomorphism.translation((0, 1))])
        swapped = conjugate(group, GridAutomorphism.linear((2, 1)))
        shifted = conjugate(group, GridAutomorphism.translation((1, 1)))
        assert len(deduplicate([group, swapped, shifted])) == 1

    def test_search_respects_stabilizer_class(self):
        """Test that each searched group has the requested stabilizer size."""
        found = search_stabilizer_class(2, 2)
        assert found
        for group in found:
            assert len(stabilizer_origin(group)) == 2
            assert is_vertex_transitive(group)


@pytest.mark.slow
class TestPlaneGroups:
    """Tests for the two-dimensional census."""

    def test_strategies_agree(self):
        """Test the stabilizer search against the point-group oracle."""
        main = enumerate_vertex_transitive(2)
        oracle = enumerate_by_space_groups(2)
        assert len(main) == len(oracle)
        assert match_catalogs(main, oracle) == ([], [])

    def test_stabilizer_rows(self):
        """Test that every stabilizer class of the square grid occurs."""
        classification = classify_stabilizers(enumerate_vertex_transitive(2))
        assert len(classification.stabilizer_rows) == 8
        assert classification.classes_coincide()


@pytest.mark.extended
class TestSpaceGroups:
    """Tests for the three-dimensional census."""

    def test_census(self):
        """Test the count of vertex-transitive classes and stabilizer rows."""
        catalog = enumerate_vertex_transitive(3)
        assert len(catalog) == 786
        classification = classify_stabilizers(catalog)
        assert len(classification.stabilizer_rows) == 33
        assert classification.classes_coincide()
