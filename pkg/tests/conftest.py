import os

import pytest

from stablegof.spherical import load_or_build_amplitude_table


@pytest.fixture(scope="session")
def table_cache(tmp_path_factory):
    path = tmp_path_factory.mktemp("amp_cache")
    return str(path)


@pytest.fixture(scope="session")
def amp_table(table_cache):
    """Shared amplitude tables, built once per (alpha, p, N)."""
    def get(alpha, p, n_grid=10_000):
        return load_or_build_amplitude_table(alpha, p, n_grid,
                                             cache_dir=table_cache)
    return get


def pytest_addoption(parser):
    parser.addoption("--acceptance-scale", default=None,
                     help="override STABLE_GOF_ACCEPTANCE (smoke|full)")


@pytest.fixture(scope="session")
def acceptance_scale(request):
    opt = request.config.getoption("--acceptance-scale")
    return opt or os.environ.get("STABLE_GOF_ACCEPTANCE", "smoke")
