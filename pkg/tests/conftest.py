"""
Pytest configuration file.

This file ensures that the project root is in the Python path,
allowing tests to import from the psys_oracle package, and provides
the shipped .psys systems as fixtures.
"""

import sys
from pathlib import Path

import pytest

# Add the project root to the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from psys_oracle.dsl import load_system, parse_system  # noqa: E402

FIXTURES_DIR = project_root / "fixtures"

HEADER_A = """@psys 1
@objects s yes no
@labels h
@skin h
@init h : s
@bound 2
@rules
"""


def load_fixture(name: str):
    return load_system(FIXTURES_DIR / f"{name}.psys")


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture
def sys_a():
    return load_fixture("sys_a")


@pytest.fixture
def sys_b():
    return load_fixture("sys_b")


@pytest.fixture
def sys_c():
    return load_fixture("sys_c")


@pytest.fixture
def sys_d():
    return load_fixture("sys_d")


@pytest.fixture
def sys_e():
    return load_fixture("sys_e")


@pytest.fixture
def evolve_divide_system():
    """One inner membrane that evolves x and divides on d in the same step."""
    return parse_system(
        """@psys 1
@objects x y d p q yes no
@labels h k
@skin h
@init h : .
@inner k : x d
@bound 2
@rules
[x -> y]_k^0
[d]_k^0 -> [p]_k^+ [q]_k^-
[yes]_h^0 -> []_h^+ yes
"""
    )


@pytest.fixture
def silent_system():
    """Halts after one step without sending out any result."""
    return parse_system(HEADER_A + "[s -> .]_h^0\n")


@pytest.fixture
def chatty_system():
    """Sends yes out twice: the first emission is not the last step."""
    return parse_system(
        """@psys 1
@objects s yes no
@labels h
@skin h
@init h : s*2
@bound 3
@rules
[s]_h^0 -> []_h^0 yes
"""
    )
