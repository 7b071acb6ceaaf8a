from functools import lru_cache
from pathlib import Path

import pytest

from tanglegram.core import Tanglegram, parse_tgl
from tanglegram.enumeration import enumerate_classes

DATA = Path(__file__).parent / "data"


def load(name):
    return parse_tgl((DATA / name).read_text())


@lru_cache(maxsize=None)
def classes(n):
    """All isomorphism classes of size n, cached across tests."""
    return tuple(tg for _, tg in enumerate_classes(n))


def classes_upto(n, start=2):
    for m in range(start, n + 1):
        yield from classes(m)


@pytest.fixture
def ex24():
    return load("ex24.tgl")


@pytest.fixture
def fig12():
    return load("fig12.tgl")


@pytest.fixture
def fig13():
    return load("fig13.tgl")


@pytest.fixture
def fig16():
    return load("fig16.tgl")


@pytest.fixture
def fig11():
    return Tanglegram.from_strings(
        "(((((1,2),3),(4,5)),(6,7)),(8,(9,(10,11))))",
        "(((((1,(2,3)),4),5),((7,8),6)),(9,(10,11)))",
        "1 3 6 4 5 2 10 7 8 9 11",
    )


@pytest.fixture
def fig14():
    return Tanglegram.from_strings(
        "((((1,2),(3,4)),5),(6,(7,((8,9),(10,11)))))",
        "(((((1,(2,3)),4),5),((6,7),8)),(9,(10,11)))",
        "1 3 4 5 2 7 8 6 10 9 11",
    )
