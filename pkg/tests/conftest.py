# pylint: disable=missing-function-docstring,missing-module-docstring
from hypothesis import HealthCheck
from hypothesis import settings
from typeguard import typechecked

try:
    from typeguard.importhook import install_import_hook
except ImportError:
    from typeguard import install_import_hook

from boxconvex import add_logging_level_options
from boxconvex import add_seed_options
from boxconvex import auto_graph_parametrize
from boxconvex import set_logging_level_from_cli_args

# property tests have to be reproducible, exact arithmetic is slow
settings.register_profile(
    "boxconvex",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile(
    "explore", parent=settings.get_profile("boxconvex"), derandomize=False
)
settings.load_profile("boxconvex")


def pytest_runtest_call(item):
    # Decorate every test function [e.g. test_foo()] with typeguard's
    # typechecked() decorator. hypothesis tests are skipped, their wrapper
    # hides the drawn arguments.
    test_func = getattr(item, "obj", None)
    if test_func is not None and not getattr(test_func, "is_hypothesis_test", False):
        setattr(item, "obj", typechecked(test_func))


def pytest_generate_tests(metafunc):
    auto_graph_parametrize(metafunc)


def pytest_addoption(parser):
    add_seed_options(parser)
    add_logging_level_options(parser)


def pytest_configure(config):
    set_logging_level_from_cli_args(config)
    install_import_hook("boxconvex")
