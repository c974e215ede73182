import pytest

from src.groups.grid_algebra import GridAutomorphism, named_generator
from src.groups.space_group import closure
from src.realizations.realization import RealizationSpec, validate


def g(name: str) -> GridAutomorphism:
    return named_generator(name)


def spec_over_inversion_group(X, saturated: bool = True) -> RealizationSpec:
    """Realization over <t_x, t_y, t_z, i> with L trivial and m = i."""
    group = closure([g("t_x"), g("t_y"), g("t_z"), g("i")])
    identity = GridAutomorphism.identity(3)
    return validate(RealizationSpec("H1", group, (identity,), g("i"), tuple(X), saturated))


def inverted(vector) -> GridAutomorphism:
    return GridAutomorphism(g("i").point, tuple(vector))


@pytest.fixture
def inversion_group():
    return closure([g("t_x"), g("t_y"), g("t_z"), g("i")])


@pytest.fixture
def all_type_one():
    """Every direction carries a single edge."""
    return spec_over_inversion_group([inverted((1, 0, 0)), inverted((0, 1, 0)), inverted((0, 0, 1))])


@pytest.fixture
def full_connection():
    """Every direction carries all four edges."""
    X = [g("t_x"), g("t_y"), g("t_z")]
    for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        X.append(inverted(v))
        X.append(inverted(tuple(-c for c in v)))
    return spec_over_inversion_group(X)


@pytest.fixture
def parallel_along_x():
    return spec_over_inversion_group([g("t_x"), inverted((0, 1, 0)), inverted((0, 0, 1))])


@pytest.fixture
def parallel_along_y():
    return spec_over_inversion_group([inverted((1, 0, 0)), g("t_y"), inverted((0, 0, 1))])
