"""The plugin module contains all fixtures that are provided by
``boxconvex``.

"""

import random

from _pytest.config import Config
from _pytest.fixtures import SubRequest
from pytest import fixture

from boxconvex.gadgets import Graph
from boxconvex.helpers import get_seed
from boxconvex.logging import _logger


@fixture(scope="session")
def boxconvex_seed(pytestconfig: Config) -> int:
    """pytest fixture that returns the seed of randomized property tests. It
    can be configured via ``--boxconvex-seed`` if
    :py:func:`~boxconvex.helpers.add_seed_options` was called in
    :file:`conftest.py`.

    """
    seed = get_seed(pytestconfig)
    _logger.debug("Using the seed %d for randomized tests", seed)
    return seed


@fixture
def boxconvex_rng(
    # pylint: disable=redefined-outer-name
    boxconvex_seed: int,
) -> random.Random:
    """A fresh :py:class:`random.Random` instance seeded with
    :py:func:`boxconvex_seed` for each test function, so that every test
    sees the same random stream independently of the test order.

    """
    return random.Random(boxconvex_seed)


@fixture
def auto_graph(request: SubRequest) -> Graph:
    """Fixture that has to be parametrized with instances of
    :py:class:`~boxconvex.gadgets.Graph` with ``indirect=True``, which
    :py:func:`~boxconvex.helpers.auto_graph_parametrize` does automatically
    for the graphs in the module level variable ``GRAPHS``.

    """
    try:
        graph = request.param
    except AttributeError as attr_err:
        raise RuntimeError(
            "This fixture was not parametrized correctly, "
            "did you forget to call `auto_graph_parametrize` in `pytest_generate_tests`?"
        ) from attr_err
    if not isinstance(graph, Graph):
        raise ValueError(f"Invalid parameter for auto_graph: {graph!r}")
    _logger.debug("Requesting the graph %s", graph)
    return graph
