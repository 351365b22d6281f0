import sys
from dataclasses import replace
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corkforge.hyp import builtin_triangulation  # noqa: E402
from corkforge.kirby import build_diagram  # noqa: E402
from corkforge.kirby.planar import disk_passages  # noqa: E402
from corkforge.recipes import akbulut_cork  # noqa: E402
from corkforge.resources import FIGURE_EIGHT, FIGURE_EIGHT_3TET, WHITEHEAD  # noqa: E402

ACCEPTANCE_LINES = []


def hopf(role_a="twohandle", role_b="twohandle", fa=0, fb=0, sign=1):
    comps = [("a", role_a, fa if role_a == "twohandle" else None, [(0, "o"), (1, "u")]),
             ("b", role_b, fb if role_b == "twohandle" else None, [(0, "u"), (1, "o")])]
    d = build_diagram(comps, {0: sign, 1: sign})
    dots = [c for c, role in (("a", role_a), ("b", role_b)) if role == "dotted"]
    return replace(d, passages={c: tuple(disk_passages(d, c)) for c in dots})


def mazur_pair():
    """Dotted ``j`` clasped once with a 0-framed ``h``."""
    d = build_diagram([("j", "dotted", None, [(0, "o"), (1, "u")]),
                       ("h", "twohandle", 0, [(0, "u"), (1, "o")])], {0: 1, 1: 1})
    return replace(d, passages={"j": tuple(disk_passages(d, "j"))})


def unknot(role="twohandle", framing=0):
    return build_diagram([("u", role, framing if role == "twohandle" else None, [])], {})


@pytest.fixture
def cork():
    return akbulut_cork()


@pytest.fixture(scope="session")
def fig8():
    return builtin_triangulation(FIGURE_EIGHT)


@pytest.fixture(scope="session")
def whitehead():
    return builtin_triangulation(WHITEHEAD)


@pytest.fixture(scope="session")
def fig8_3tet():
    return builtin_triangulation(FIGURE_EIGHT_3TET)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
