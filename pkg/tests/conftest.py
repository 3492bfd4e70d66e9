from __future__ import annotations

import pytest

from helpers import load_adl_defs, load_all_defs, load_ukdale_defs


@pytest.fixture(scope="session")
def adl_defs():
    return load_adl_defs()


@pytest.fixture(scope="session")
def ukdale_defs():
    return load_ukdale_defs()


@pytest.fixture(scope="session")
def all_defs():
    return load_all_defs()
