import os

import pytest

# Keep the on-disk sieve cache inside the test session unless the caller
# already pinned a location.
_CACHE_SET = False


def pytest_configure(config):
    global _CACHE_SET
    if "FRACZETA_CACHE_DIR" not in os.environ:
        import tempfile

        os.environ["FRACZETA_CACHE_DIR"] = tempfile.mkdtemp(prefix="fraczeta-cache-")
        _CACHE_SET = True


@pytest.fixture(scope="session")
def table_small():
    from fraczeta.cli import get_table

    return get_table(10**4)


@pytest.fixture(scope="session")
def table_1e6():
    from fraczeta.cli import get_table

    return get_table(10**6)


@pytest.fixture(scope="session")
def table_1e7():
    from fraczeta.cli import get_table

    return get_table(10**7)


@pytest.fixture(scope="session")
def zeros100():
    from fraczeta.cli import get_refined_zeros

    return get_refined_zeros(100)
