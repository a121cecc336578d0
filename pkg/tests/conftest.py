"""Shared fixtures for the flipchains test suite."""

import logging

import pytest

from flipchains.chains import make_rng
from flipchains.enumeration import pointed_space, quad_space, signed_trees
from flipchains.trees import enumerate_trees


@pytest.fixture(autouse=True)
def quiet_logging(caplog):
    caplog.set_level(logging.WARNING)


@pytest.fixture
def rng():
    return make_rng(12345)


@pytest.fixture(scope="session")
def labelled_trees_2():
    return list(enumerate_trees(2, 3))


@pytest.fixture(scope="session")
def signed_trees_2():
    return signed_trees(2)


@pytest.fixture(scope="session")
def quads_2():
    return quad_space(2)


@pytest.fixture(scope="session")
def pointed_2():
    return pointed_space(2)
