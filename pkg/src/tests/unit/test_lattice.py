import pytest

from src.groups.grid_algebra import SignedPermutation
from src.groups.lattice import Lattice, hermite_normal_form, sublattices


class TestHermiteNormalForm:
    """Tests for lattice normal forms."""

    def test_small_example(self):
        """Test HNF of a two-dimensional index-2 lattice."""
        assert hermite_normal_form([(2, 0), (1, 1)], 2) == ((1, 1), (0, 2))

    def test_basis_independent(self):
        """Test that different bases of one lattice agree."""
        first = Lattice.from_vectors([(2, 0, 0), (0, 1, 0), (0, 0, 1)], 3)
        second = Lattice.from_vectors([(2, 1, 0), (0, 1, 1), (0, 0, 1), (4, 0, 0)], 3)
        assert first == second

    def test_wrong_dimension(self):
        """Test vectors of the wrong length."""
        with pytest.raises(ValueError):
            hermite_normal_form([(1, 0)], 3)


class TestLattice:
    """Tests for lattice arithmetic."""

    @pytest.fixture
    def checkerboard(self):
        return Lattice.from_vectors([(2, 0), (1, 1)], 2)

    def test_determinant_and_rank(self, checkerboard):
        """Test index and rank."""
        assert checkerboard.rank == 2
        assert checkerboard.determinant() == 2
        assert Lattice.from_vectors([(1, 0, 0)], 3).determinant() == 0

    def test_axis_periods(self, checkerboard):
        """Test the least multiple of each axis in the lattice."""
        assert checkerboard.axis_periods() == (2, 2)
        with pytest.raises(ValueError):
            Lattice.zero(2).axis_periods()

    def test_reduce(self, checkerboard):
        """Test canonical residues."""
        assert checkerboard.contains((3, 1))
        assert not checkerboard.contains((1, 0))
        assert checkerboard.reduce((5, 2)) == checkerboard.reduce((0, 1))
        residues = {checkerboard.reduce(v) for v in checkerboard.fundamental_domain()}
        assert len(residues) == 2

    def test_transform(self):
        """Test the image of a lattice under an axis swap."""
        lattice = Lattice.from_vectors([(2, 0), (0, 1)], 2)
        swapped = lattice.transform(SignedPermutation((2, 1)))
        assert swapped == Lattice.from_vectors([(1, 0), (0, 2)], 2)
        assert not lattice.is_invariant([SignedPermutation((2, 1))])
        assert lattice.is_invariant([SignedPermutation((-1, -2))])

    def test_to_text(self, checkerboard):
        """Test the text form."""
        assert checkerboard.to_text() == "[1,1]|[0,2]"
        assert Lattice.zero(3).to_text() == "-"


class TestSublattices:
    """Tests for sublattice enumeration."""

    @pytest.mark.parametrize("dim,index,count", [(1, 3, 1), (2, 2, 3), (2, 4, 7), (3, 2, 7)])
    def test_counts(self, dim, index, count):
        """Test the number of sublattices of given index."""
        found = list(sublattices(dim, index))
        assert len(found) == count
        assert len(set(found)) == count
        assert all(lattice.determinant() == index for lattice in found)
