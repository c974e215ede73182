import itertools

import pytest

from src.core.error_handler import MisuseError
from src.groups.grid_algebra import GridAutomorphism, SignedPermutation, compose, hyperoctahedral
from src.groups.lattice import Lattice
from src.groups.space_group import (
    are_conjugate,
    closure,
    cocycle_defect,
    conjugate,
    first_unreached_direction,
    generators,
    group_descriptors,
    is_vertex_transitive,
    least_mover,
    member,
    movers,
    origin_mover,
    stabilizer_origin,
)
from src.tests.conftest import g


def translation(*v):
    return GridAutomorphism.translation(v)


class TestClosure:
    """Tests for the space-group normal form."""

    def test_screw_axis(self):
        """Test the group of a single screw (r_z, e_x)."""
        screw = GridAutomorphism(g("r_z").point, (1, 0, 0))
        group = closure([screw])
        assert len(group.point) == 4
        assert group.lattice.rank == 0
        assert group.tau(SignedPermutation((-1, -2, 3))) == (1, -1, 0)

    def test_descriptors_of_glide_group(self):
        """Test point group and lattice of <(i, e_x), t_x^2, t_y, t_z>."""
        shifted_inversion = GridAutomorphism(g("i").point, (1, 0, 0))
        group = closure([shifted_inversion, translation(2, 0, 0), g("t_y"), g("t_z")])
        point, basis = group_descriptors(group)
        assert point == (g("i").point, SignedPermutation.identity(3))
        assert basis == ((2, 0, 0), (0, 1, 0), (0, 0, 1))
        assert is_vertex_transitive(group)
        assert stabilizer_origin(group) == (GridAutomorphism.identity(3),)

    def test_trivial_stabilizer(self):
        """Test the stabilizer of <(r_z^2, e_x), t_x^2, t_y, t_z>."""
        half_turn = GridAutomorphism(compose(g("r_z"), g("r_z")).point, (1, 0, 0))
        group = closure([half_turn, translation(2, 0, 0), g("t_y"), g("t_z")])
        assert stabilizer_origin(group) == (GridAutomorphism.identity(3),)

    def test_not_vertex_transitive(self):
        """Test a group whose lattice has rank two."""
        half_turn = GridAutomorphism(compose(g("r_z"), g("r_z")).point, (1, 0, 0))
        group = closure([half_turn, g("t_y"), g("t_z")])
        assert not is_vertex_transitive(group)

    def test_closure_is_idempotent(self):
        """Test that a group is regenerated by its own generators."""
        group = closure([g("r_z"), g("t_x"), g("i")])
        assert closure(generators(group)) == group
        assert not cocycle_defect(group)

    def test_trivial_group_needs_dimension(self):
        """Test the dimension requirement for empty generator lists."""
        with pytest.raises(ValueError):
            closure([])
        assert closure([], 2).point == (SignedPermutation.identity(2),)


class TestMembership:
    """Tests for membership decisions."""

    @pytest.fixture
    def generating_set(self):
        return [GridAutomorphism(g("r_z").point, (1, 0, 0)), translation(0, 0, 2), g("m_z")]

    def test_words_are_members(self, generating_set):
        """Test every short word in the generators and their inverses."""
        group = closure(generating_set)
        letters = generating_set + [x.inverse() for x in generating_set]
        for length in range(1, 4):
            for word in itertools.product(letters, repeat=length):
                element = GridAutomorphism.identity(3)
                for letter in word:
                    element = compose(element, letter)
                assert member(group, element)

    def test_non_members(self, generating_set):
        """Test elements outside the group."""
        group = closure(generating_set)
        assert not member(group, g("m_x"))
        assert not member(group, translation(0, 0, 1))

    def test_origin_mover(self, inversion_group):
        """Test anchors: identity at the origin, least mover elsewhere."""
        identity = GridAutomorphism.identity(3)
        assert origin_mover(inversion_group, (0, 0, 0)) == identity
        assert origin_mover(inversion_group, (1, 0, 0)) == GridAutomorphism(g("i").point, (1, 0, 0))
        assert origin_mover(inversion_group, (2, 0, 0)) == GridAutomorphism(g("i").point, (2, 0, 0))
        assert least_mover(inversion_group, (0, 0, 0)) == g("i")
        assert movers(inversion_group, (1, 0, 0)) == [GridAutomorphism(g("i").point, (1, 0, 0)), g("t_x")]
        assert first_unreached_direction(inversion_group) is None


class TestConjugacy:
    """Tests for conjugation and the conjugacy decision."""

    def test_conjugate_translation(self):
        """Test <t_x> conjugated by r_z."""
        group = conjugate(closure([g("t_x")]), g("r_z"))
        assert group.lattice.basis == ((0, 1, 0),)

    def test_axis_swap_witness(self):
        """Test conjugacy of lattices stretched along different axes."""
        first = closure([translation(2, 0, 0), g("t_y"), g("t_z")])
        second = closure([g("t_x"), translation(0, 2, 0), g("t_z")])
        witness = are_conjugate(first, second)
        assert witness is not None
        assert conjugate(first, witness) == second
        assert abs(witness.point.images[0]) == 2

    def test_not_conjugate(self):
        """Test groups of different index."""
        first = closure([translation(2, 0, 0), g("t_y"), g("t_z")])
        second = closure([g("t_x"), g("t_y"), g("t_z")])
        assert are_conjugate(first, second) is None

    def test_conjugacy_invariant_under_random_conjugators(self):
        """Test that conjugates are recognized with a valid witness."""
        group = closure([GridAutomorphism(g("i").point, (1, 0, 0)), translation(2, 0, 0), g("t_y"), g("t_z")])
        for w in hyperoctahedral(3)[::7]:
            image = conjugate(group, GridAutomorphism(w, (1, 1, 0)))
            witness = are_conjugate(group, image)
            assert witness is not None
            assert conjugate(group, witness) == image

    def test_deficient_rank_rejected(self):
        """Test that conjugacy is refused for non-full-rank lattices."""
        group = closure([g("t_x")])
        with pytest.raises(MisuseError):
            are_conjugate(group, group)

    def test_lattice_of_conjugate(self):
        """Test the lattice transforms by the linear part."""
        group = closure([translation(2, 0, 0), g("t_y"), g("t_z")])
        image = conjugate(group, g("r_z"))
        assert image.lattice == Lattice.from_vectors([(1, 0, 0), (0, 2, 0), (0, 0, 1)], 3)
