from __future__ import annotations

import pytest

from isoclass import default_catalog
from isoclass.classify import classify_pgq1, classify_pgq2


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def pgq2_rows(catalog):
    return classify_pgq2(catalog)


@pytest.fixture(scope="session")
def pgq1_rows(catalog):
    return classify_pgq1(catalog)
