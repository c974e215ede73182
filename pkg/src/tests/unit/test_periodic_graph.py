import pytest

from src.graphs.periodic_graph import (
    ball,
    graph_for,
    growth,
    neighbors,
    origin,
    periodicity,
    voltage_connectivity,
    voltage_graph,
)
from src.groups.grid_algebra import GridAutomorphism
from src.realizations.realization import ExtVertex, locate


class TestNeighbors:
    """Tests for adjacency of the extension graph."""

    def test_pattern_table_matches_cosets(self, parallel_along_x):
        """Test the pattern table against direct coset computation."""
        graph = graph_for(parallel_along_x)
        for u in [origin(parallel_along_x), ExtVertex((1, -2, 0), 1), ExtVertex((3, 1, -1), 0)]:
            assert sorted(graph.neighbors(u)) == neighbors(parallel_along_x, u)

    def test_single_edges(self, all_type_one):
        """Test neighbors of the origin with one edge per direction."""
        expected = sorted([
            ExtVertex((0, 0, 0), 1),
            ExtVertex((1, 0, 0), 0),
            ExtVertex((0, 1, 0), 0),
            ExtVertex((0, 0, 1), 0),
        ])
        assert neighbors(all_type_one, origin(all_type_one)) == expected
        assert sorted(graph_for(all_type_one).neighbors(origin(all_type_one))) == expected
        assert graph_for(all_type_one).degree() == 4

    def test_single_edges_off_origin(self, all_type_one):
        """Test that away from the origin edges leave label 1 forward and label 0 backward."""
        assert neighbors(all_type_one, ExtVertex((1, 0, 0), 0)) == sorted([
            ExtVertex((0, 0, 0), 0),
            ExtVertex((1, 0, 0), 1),
            ExtVertex((1, -1, 0), 1),
            ExtVertex((1, 0, -1), 1),
        ])
        assert neighbors(all_type_one, ExtVertex((1, 0, 0), 1)) == sorted([
            ExtVertex((1, 0, 0), 0),
            ExtVertex((2, 0, 0), 0),
            ExtVertex((1, 1, 0), 0),
            ExtVertex((1, 0, 1), 0),
        ])

    def test_table_matches_cosets_around_origin(self, all_type_one):
        """Test the relabeled pattern table on the origin block and its neighbors."""
        graph = graph_for(all_type_one)
        assert graph.twist == 1
        for v in [(0, 0, 0), (-1, 0, 0), (1, 0, 0), (0, -1, 1), (2, 0, 0)]:
            for eps in (0, 1):
                u = ExtVertex(v, eps)
                assert sorted(graph.neighbors(u)) == neighbors(all_type_one, u)

    def test_relabel_is_involution(self, all_type_one):
        """Test that only the origin block changes labels."""
        graph = graph_for(all_type_one)
        assert graph.relabel(origin(all_type_one)) == ExtVertex((0, 0, 0), 1)
        assert graph.relabel(ExtVertex((1, 0, 0), 0)) == ExtVertex((1, 0, 0), 0)
        for u in [ExtVertex((0, 0, 0), 0), ExtVertex((0, 0, 0), 1), ExtVertex((0, 2, 0), 1)]:
            assert graph.relabel(graph.relabel(u)) == u


class TestGrowth:
    """Tests for ball orders."""

    def test_full_connection(self, full_connection):
        """Test growth of the graph with every possible edge."""
        vector = growth(full_connection)
        assert vector.counts == (14, 50, 126, 258, 462, 754, 1150, 1666, 2318, 3122)
        assert vector.connected
        assert vector.to_text().startswith("14,50,126")
        assert vector.to_text().endswith("\tC")

    def test_shorter_radius(self, all_type_one):
        """Test growth truncated to three radii."""
        vector = growth(all_type_one, radii=3)
        assert len(vector.counts) == 3
        assert vector.counts[0] == 5


class TestVoltageConnectivity:
    """Tests for connectivity through the quotient graph."""

    def test_saturated_single_edges(self, all_type_one):
        """Test that in-block edges connect the single-edge graph."""
        assert voltage_connectivity(all_type_one)

    def test_desaturated_single_edges(self, all_type_one):
        """Test that the single-edge graph falls apart without in-block edges."""
        assert not voltage_connectivity(all_type_one._replace(saturated=False))

    def test_quotient_size(self, full_connection):
        """Test the quotient has two vertices per lattice residue."""
        quotient, lattice = voltage_graph(full_connection)
        assert lattice.determinant() == 1
        assert quotient.number_of_nodes() == 2
        assert quotient.number_of_edges() == 13


class TestBallAndPeriodicity:
    """Tests for finite balls and axis periods."""

    def test_ball_radius_one(self, all_type_one):
        """Test the radius-one ball and its root marker."""
        graph = ball(all_type_one, 1)
        assert graph.number_of_nodes() == 5
        assert graph.nodes[origin(all_type_one)]["root"]
        assert sum(1 for _, data in graph.nodes(data=True) if data["root"]) == 1

    def test_ball_colors(self, all_type_one):
        """Test in-block edges are marked when requested."""
        graph = ball(all_type_one, 1, block_colors=True)
        kinds = {data["kind"] for _, _, data in graph.edges(data=True)}
        assert kinds == {"edge", "block"}

    def test_radius_cap(self, all_type_one):
        """Test the configured cap on ball radii."""
        with pytest.raises(ValueError):
            ball(all_type_one, 9)

    def test_periodicity(self, all_type_one):
        """Test unit periods of the single-edge graph and its origin twist."""
        witness = periodicity(all_type_one)
        assert witness.p == (1, 1, 1)
        assert len(witness.witnesses) == 3
        assert witness.origin_twist
        assert all(a.then(b) == b.then(a) for a in witness.witnesses for b in witness.witnesses)

    def test_unit_shift_action(self, all_type_one):
        """Test the unit shift: labels kept off the origin block, swapped on it."""
        graph = graph_for(all_type_one)

        def shifted(u):
            return ExtVertex((u.v[0] + 1, u.v[1], u.v[2]), u.eps)

        def act(u):
            return graph.relabel(shifted(graph.relabel(u)))

        assert act(origin(all_type_one)) == ExtVertex((1, 0, 0), 1)
        assert act(ExtVertex((-1, 0, 0), 0)) == ExtVertex((0, 0, 0), 1)
        assert act(ExtVertex((3, 2, 1), 0)) == shifted(ExtVertex((3, 2, 1), 0))
        for v in [(0, 0, 0), (-1, 0, 0), (-1, 1, 0), (3, 2, 1)]:
            for eps in (0, 1):
                u = ExtVertex(v, eps)
                assert sorted(act(w) for w in graph.neighbors(u)) == sorted(graph.neighbors(act(u)))

    def test_no_doubling_removes_origin_swap(self, all_type_one):
        """Test that t_x and t_2x both send the coset {1} to a label-1 vertex."""
        assert locate(all_type_one, GridAutomorphism.translation((1, 0, 0))) == ExtVertex((1, 0, 0), 1)
        assert locate(all_type_one, GridAutomorphism.translation((2, 0, 0))) == ExtVertex((2, 0, 0), 1)
