import pytest

from sylowlab.catalog import builtin_construct, fixture_catalog


def make(spec):
    return builtin_construct(spec).group(None)


@pytest.fixture(scope="session")
def g216():
    entries = {e.id: e for e in fixture_catalog()}
    return entries["sg216_153"].group(None)


@pytest.fixture(scope="session")
def sl23():
    entries = {e.id: e for e in fixture_catalog()}
    return entries["sl23"].group(None)
