import pytest

import ehlich_designs as ed


@pytest.fixture(scope="session")
def cands7():
    return ed.enumerate_candidates(7)


@pytest.fixture(scope="session")
def cands15():
    return ed.enumerate_candidates(15)


@pytest.fixture(scope="session")
def cache15():
    # shared stage cache so test modules reuse each other's enumerations
    return {}


@pytest.fixture(scope="session")
def cache7():
    return {}


@pytest.fixture(scope="session")
def catalogs7(cands7, cache7):
    """Every n = 7 catalog cell, keyed by (p, s, type)."""
    out = {}
    for p in range(4, 8):
        for s in range(3, p + 1):
            tags = ("pure",) if p % s == 0 else ("type1", "type2")
            for tag in tags:
                out[(p, s, tag)] = ed.enumerate_class(
                    7, p, s, tag, cands=cands7, cache=cache7
                )
    return out
