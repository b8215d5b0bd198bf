"""Shared fixtures: models and (expensive) expansions, computed once."""

import pytest

from quadwalks import corpus, expansion


@pytest.fixture(scope="session")
def simple():
    return corpus.simple_walk()


@pytest.fixture(scope="session")
def gb():
    return corpus.gouyou_beauchamps_walk()


@pytest.fixture(scope="session")
def tandem():
    return corpus.tandem_walk()


@pytest.fixture(scope="session")
def diagonal():
    return corpus.diagonal_walk()


@pytest.fixture(scope="session")
def gb_expansion(gb):
    return expansion.assemble_expansion(gb, order=3)


@pytest.fixture(scope="session")
def sw_multivariate(simple):
    return expansion.interpolate_vp(simple, order=3)


@pytest.fixture(scope="session")
def gb_multivariate(gb):
    return expansion.interpolate_vp(gb, order=3)


@pytest.fixture(scope="session")
def tandem_multivariate(tandem):
    return expansion.interpolate_vp(tandem, order=3)


@pytest.fixture(scope="session")
def large_step():
    return corpus.large_step_walk()


@pytest.fixture(scope="session")
def large_step_expansion(large_step):
    return expansion.assemble_expansion(
        large_step, numerator=corpus.large_step_numerator(), order=3
    )


@pytest.fixture(scope="session")
def orthant3d():
    return corpus.orthant_walk_3d()


@pytest.fixture(scope="session")
def orthant3d_expansion(orthant3d):
    return expansion.assemble_expansion(
        orthant3d, numerator=corpus.orthant_3d_numerator(), order=3
    )
