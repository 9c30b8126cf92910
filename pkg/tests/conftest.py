import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from blamecheck.formula import (AttackerBlame, DefenderBlame, Implies, Necessary, Not,  # noqa: E402
                                Var)
from blamecheck.game import example_game  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent


def formulas(variables=("p", "q", "r"), allow_D=True, max_leaves=25):
    unary = [Not, Necessary, AttackerBlame] + ([DefenderBlame] if allow_D else [])
    return st.recursive(
        st.sampled_from(variables).map(Var),
        lambda kids: st.one_of(
            st.tuples(st.sampled_from(unary), kids).map(lambda t: t[0](t[1])),
            st.tuples(kids, kids).map(lambda t: Implies(*t)),
        ),
        max_leaves=max_leaves,
    )


@pytest.fixture
def g1():
    return example_game("G1")


@pytest.fixture
def g2():
    return example_game("G2")


@pytest.fixture
def root():
    return ROOT


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
