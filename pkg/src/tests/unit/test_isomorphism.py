import networkx as nx
import pytest
from sympy import ImmutableMatrix

from src.core.error_handler import NeedsLargerRadius
from src.graphs.certificate import canonical_certificate, certificate_digest
from src.graphs.isomorphism import BallIsomorphism, extend_isomorphism, iso_classes
from src.graphs.periodic_graph import ball, origin
from src.realizations.realization import ExtVertex


def flip_odd_x(u):
    return ExtVertex(u.v, u.eps ^ (u.v[0] % 2))


class TestCertificate:
    """Tests for rooted canonical certificates."""

    def test_relabeling_invariance(self):
        """Test that a permuted copy gets the same certificate."""
        graph = nx.petersen_graph()
        mapping = {v: (7 * v + 3) % 10 for v in graph.nodes}
        relabeled = nx.relabel_nodes(graph, mapping)
        assert canonical_certificate(graph, 0) == canonical_certificate(relabeled, mapping[0])

    def test_root_matters(self):
        """Test that a path rooted at an end differs from one rooted in the middle."""
        path = nx.path_graph(5)
        assert canonical_certificate(path, 0) == canonical_certificate(path, 4)
        assert canonical_certificate(path, 0) != canonical_certificate(path, 2)

    def test_separates_graphs(self):
        """Test a cycle against a path of the same order."""
        assert canonical_certificate(nx.cycle_graph(6), 0) != canonical_certificate(nx.path_graph(6), 0)

    def test_edge_colors(self):
        """Test that edge kinds take part only when requested."""
        first = nx.Graph()
        first.add_edge(0, 1, kind="edge")
        first.add_edge(1, 2, kind="block")
        second = nx.Graph()
        second.add_edge(0, 1, kind="block")
        second.add_edge(1, 2, kind="edge")
        assert canonical_certificate(first, 0) == canonical_certificate(second, 0)
        assert canonical_certificate(first, 0, edge_colors=True) != canonical_certificate(second, 0, edge_colors=True)

    def test_digest(self):
        """Test the hex digest of a certificate."""
        digest = certificate_digest(canonical_certificate(nx.cycle_graph(4), 0))
        assert len(digest) == 64


class TestExtension:
    """Tests for extending ball isomorphisms by periodicity."""

    def test_identity_extends(self, full_connection):
        """Test that the identity on a ball extends to the whole graph."""
        nodes = ball(full_connection, 2).nodes
        phi = BallIsomorphism(2, {u: u for u in nodes})
        psi = extend_isomorphism(full_connection, full_connection, phi)
        assert psi is not None
        assert psi.period == (1, 1, 1)
        assert psi.apply(origin(full_connection)) == origin(full_connection)
        assert psi.ball.M == ImmutableMatrix.eye(3)

    def test_ball_too_small(self, all_type_one):
        """Test that a radius-zero ball cannot cover the period box."""
        phi = BallIsomorphism(0, {origin(all_type_one): origin(all_type_one)})
        with pytest.raises(NeedsLargerRadius):
            extend_isomorphism(all_type_one, all_type_one, phi)

    def test_common_multiple_period(self, full_connection):
        """Test a map that only extends once the x period is doubled."""
        nodes = ball(full_connection, 3).nodes
        phi = BallIsomorphism(3, {u: flip_odd_x(u) for u in nodes})
        psi = extend_isomorphism(full_connection, full_connection, phi)
        assert psi is not None
        assert psi.period == (2, 2, 2)
        assert psi.period_images == ((2, 0, 0), (0, 2, 0), (0, 0, 2))
        for u in [ExtVertex((5, -3, 2), 0), ExtVertex((-7, 4, 1), 1), ExtVertex((0, 0, 0), 1)]:
            assert psi.apply(u) == flip_odd_x(u)
        assert psi.ball.M == ImmutableMatrix.eye(3)

    def test_doubled_box_needs_radius(self, full_connection):
        """Test that the doubled box asks for a larger ball instead of failing."""
        nodes = ball(full_connection, 2).nodes
        phi = BallIsomorphism(2, {u: flip_odd_x(u) for u in nodes})
        with pytest.raises(NeedsLargerRadius):
            extend_isomorphism(full_connection, full_connection, phi)

    def test_wrong_map_rejected(self, full_connection):
        """Test that a map disagreeing with every periodic extension is refused."""
        nodes = ball(full_connection, 3).nodes
        mapping = {u: u for u in nodes}
        a, b = ExtVertex((1, 1, 1), 0), ExtVertex((1, 1, 1), 1)
        mapping[a], mapping[b] = b, a
        phi = BallIsomorphism(3, mapping)
        assert extend_isomorphism(full_connection, full_connection, phi) is None


class TestIsoClasses:
    """Tests for the isomorphism partition."""

    def test_identical_realizations_merge(self, all_type_one):
        """Test that two copies of one realization form a single class."""
        partition = iso_classes([("R1", all_type_one), ("R2", all_type_one)], radius=2, max_radius=3)
        assert partition.classes == (("R1", "R2"),)
        assert partition.non_singleton() == [("R1", "R2")]
        assert not partition.undecided

    def test_different_degrees_separate(self, all_type_one, full_connection):
        """Test that graphs of different degree land in different classes."""
        partition = iso_classes([("R1", all_type_one), ("R2", full_connection)], radius=2, max_radius=3)
        assert sorted(partition.classes) == [("R1",), ("R2",)]
        assert not partition.undecided
