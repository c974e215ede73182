from collections import Counter

import pytest

from src.groups.finite_group import (
    UNRECOGNIZED,
    generate,
    identify_structure,
    index_two_subgroups,
    small_generating_set,
    subgroup_class_of,
    subgroup_classes,
)
from src.groups.grid_algebra import SignedPermutation, hyperoctahedral, parse_word

IDENTITY = SignedPermutation.identity(3)


def points(*words):
    return generate([parse_word(w).point for w in words], IDENTITY)


class TestGenerate:
    """Tests for finite group generation."""

    def test_rotation_group(self):
        """Test the rotation group of the cube."""
        rotations = points("r_x", "r_y", "r_z")
        assert len(rotations) == 24
        assert list(rotations) == sorted(rotations)

    def test_small_generating_set(self):
        """Test that the greedy generating set regenerates the group."""
        group = hyperoctahedral(3)
        gens = small_generating_set(group)
        assert generate(gens, IDENTITY) == group
        assert small_generating_set([IDENTITY]) == []


class TestIndexTwoSubgroups:
    """Tests for index-two subgroup enumeration."""

    @pytest.mark.parametrize("words,count", [
        (("i",), 1),
        (("r_y^2", "r_z^2"), 3),
        (("r_x", "r_y", "r_z"), 1),
        (("r_z",), 1),
        (("1",), 0),
    ])
    def test_counts(self, words, count):
        """Test the number of index-two subgroups."""
        group = points(*words)
        kernels = index_two_subgroups(group)
        assert len(kernels) == count
        for kernel in kernels:
            assert 2 * len(kernel) == len(group)
            assert generate(kernel, IDENTITY) == kernel

    def test_rotation_kernel_is_alternating(self):
        """Test that the only index-two subgroup of the cube rotations is A4."""
        (kernel,) = index_two_subgroups(points("r_x", "r_y", "r_z"))
        assert identify_structure(kernel) == "A4"


class TestIdentifyStructure:
    """Tests for structure names."""

    @pytest.mark.parametrize("words,name", [
        (("1",), "1"),
        (("i",), "C2"),
        (("r_z",), "C4"),
        (("r_y^2", "r_z^2"), "C2xC2"),
        (("m_x", "m_y", "m_z"), "C2xC2xC2"),
        (("r_z", "i"), "C4xC2"),
        (("r_x", "r_y", "r_z"), "S4"),
        (("i", "r_y^2 r_z", "r_z^2", "r_z^2 r_x"), "C2xS4"),
    ])
    def test_names(self, words, name):
        """Test names of familiar point groups."""
        assert identify_structure(points(*words)) == name

    def test_unrecognized_marker(self):
        """Test that the sentinel is a plain string."""
        assert UNRECOGNIZED == "unrecognized"
        assert UNRECOGNIZED not in {cls.structure for cls in subgroup_classes(3)}


class TestSubgroupClasses:
    """Tests for conjugacy classes of hyperoctahedral subgroups."""

    def test_three_dimensional_census(self):
        """Test the 33 classes and their structure multiset."""
        classes = subgroup_classes(3)
        assert len(classes) == 33
        assert Counter(cls.structure for cls in classes) == Counter({
            "1": 1, "C2": 5, "C3": 1, "C2xC2": 7, "C4": 2, "C6": 1, "S3": 2,
            "C2xC2xC2": 2, "C4xC2": 1, "D8": 4, "A4": 1, "D12": 1, "C2xD8": 1,
            "C2xA4": 1, "S4": 2, "C2xS4": 1,
        })
        assert sum(cls.conjugates for cls in classes) == 98

    @pytest.mark.parametrize("dim,count", [(1, 2), (2, 8)])
    def test_small_dimensions(self, dim, count):
        """Test class counts in dimensions one and two."""
        assert len(subgroup_classes(dim)) == count

    def test_numbering(self):
        """Test classes are numbered from 1 by increasing order."""
        classes = subgroup_classes(3)
        assert [cls.index for cls in classes] == list(range(1, 34))
        assert classes[0].order == 1
        assert classes[-1].order == 48

    def test_class_lookup_ignores_conjugation(self):
        """Test that conjugate subgroups land in one class."""
        about_x = points("r_x")
        about_z = points("r_z")
        assert subgroup_class_of(about_x, 3) == subgroup_class_of(about_z, 3)
        with pytest.raises(ValueError):
            subgroup_class_of([parse_word("r_z").point], 3)
