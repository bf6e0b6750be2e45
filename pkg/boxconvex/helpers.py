"""The helpers module contains the environment based configuration of
:py:mod:`boxconvex`, the deterministic parallel enumeration helper and
functions for adding & retrieving the command line flags of the pytest
plugin.

"""

import itertools
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable
from typing import Iterable
from typing import Optional
from typing import Tuple
from typing import TypeVar

from _pytest.config import Config
from _pytest.config.argparsing import Parser
from _pytest.python import Metafunc

from boxconvex.errors import InputFormatError
from boxconvex.logging import _logger
from boxconvex.logging import set_internal_logging_level

#: Name of the environment variable capping the internal parallelism
THREADS_ENV_VAR = "BOXCONVEX_THREADS"

#: Seed of the ``boxconvex_rng`` fixture if ``--boxconvex-seed`` is not given
DEFAULT_SEED = 20190601

# number of items handed to each worker per round of first_failure
_CHUNK_FACTOR = 4

T = TypeVar("T")
R = TypeVar("R")


def get_thread_count() -> int:
    """Returns the maximum number of worker threads that internal enumerations
    may use. This setting is controlled via the environment variable
    ``BOXCONVEX_THREADS`` and defaults to a single thread: the checks are
    pure Python, so more threads only help on a free-threaded interpreter.

    Raises:
        InputFormatError: if the environment variable is not a positive
            integer
    """
    raw = os.getenv(THREADS_ENV_VAR)
    if raw is None or raw.strip() == "":
        return 1

    try:
        threads = int(raw)
    except ValueError as val_err:
        raise InputFormatError(
            f"Invalid value for {THREADS_ENV_VAR}: '{raw}'"
        ) from val_err
    if threads < 1:
        raise InputFormatError(
            f"{THREADS_ENV_VAR} must be a positive integer, got {threads}"
        )
    return threads


def first_failure(
    check: Callable[[T], Optional[R]],
    items: Iterable[T],
    threads: Optional[int] = None,
) -> Optional[Tuple[T, R]]:
    """Evaluates ``check`` on every element of ``items`` and returns the first
    element (in iteration order) for which ``check`` returned something else
    than ``None``, together with that value. ``None`` is returned if every
    check passed.

    The items are processed in ordered chunks by a thread pool of at most
    ``threads`` workers (defaults to :py:func:`get_thread_count`). The result
    is always identical to a sequential scan with early exit.

    """
    workers = get_thread_count() if threads is None else threads
    if workers <= 1:
        for item in items:
            res = check(item)
            if res is not None:
                return item, res
        return None

    _logger.debug("Enumerating with %d worker threads", workers)
    iterator = iter(items)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        while True:
            batch = list(itertools.islice(iterator, workers * _CHUNK_FACTOR))
            if not batch:
                return None
            for item, res in zip(batch, pool.map(check, batch)):
                if res is not None:
                    return item, res


def auto_graph_parametrize(metafunc: Metafunc) -> None:
    """Helper function to automatically parametrize the ``auto_graph``
    fixture with the graphs of the module level variable ``GRAPHS``.

    Use it by adding the following code snippet to :file:`conftest.py`:

    .. code-block:: python

       from boxconvex import auto_graph_parametrize

       def pytest_generate_tests(metafunc):
           auto_graph_parametrize(metafunc)

    """
    graphs = getattr(metafunc.module, "GRAPHS", None)

    if "auto_graph" in metafunc.fixturenames:
        if graphs is None:
            raise ValueError(
                f"The test function {metafunc.function.__name__} is using "
                "the auto_graph fixture but the parent module is not "
                "setting the 'GRAPHS' variable"
            )
        metafunc.parametrize(
            "auto_graph", graphs, indirect=True, ids=[str(g) for g in graphs]
        )


def add_logging_level_options(parser: Parser) -> None:
    """Add the command line parameter ``--boxconvex-log-level`` to the pytest
    parser. The user can then configure the log level of :py:mod:`boxconvex`.

    This function needs to be called in your :file:`conftest.py` in
    ``pytest_addoption``. To actually set the log level, you need to call
    :py:func:`set_logging_level_from_cli_args` as well.
    """
    log_level_upcase = list(logging._levelToName.values())
    parser.addoption(
        "--boxconvex-log-level",
        type=str,
        nargs=1,
        default=["INFO"],
        choices=log_level_upcase
        + [level.lower() for level in log_level_upcase],
        help="Set the internal logging level of the boxconvex library",
    )


def set_logging_level_from_cli_args(config: Config) -> None:
    """Sets the internal logging level of :py:mod:`boxconvex` to the value
    supplied by the cli argument ``--boxconvex-log-level``.

    A good place to call it is the ``pytest_configure`` hook in
    :file:`conftest.py`.

    """
    set_internal_logging_level(
        config.getoption("boxconvex_log_level")[0].upper()
    )


def add_seed_options(parser: Parser) -> None:
    """Add the command line flag ``--boxconvex-seed`` which seeds the
    ``boxconvex_rng`` fixture.

    """
    parser.addoption(
        "--boxconvex-seed",
        type=int,
        default=DEFAULT_SEED,
        help="Seed of the random generators used by randomized property tests",
    )


def get_seed(pytestconfig: Config) -> int:
    """Get the seed that was passed via ``--boxconvex-seed`` or the default
    seed if :py:func:`add_seed_options` was not called.

    """
    seed = pytestconfig.getoption("boxconvex_seed", default=DEFAULT_SEED)
    return DEFAULT_SEED if seed is None else int(seed)
