"""Shared fixtures; also makes src/ importable without installing."""

import sys
from pathlib import Path

_src = Path(__file__).resolve().parent.parent / "src"
if str(_src) not in sys.path:
    sys.path.insert(0, str(_src))

import pytest

import qwalk as qw


@pytest.fixture(scope="session")
def c4():
    return qw.cycle_shift(4)


@pytest.fixture(scope="session")
def c5():
    return qw.cycle_shift(5)


@pytest.fixture(scope="session")
def fig():
    return qw.figure1()
