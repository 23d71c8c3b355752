"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Every result line is printed and also collected for the terminal summary
(see ``conftest.py``), so a plain ``pytest`` run lists all ten outcomes.
"""

import pytest

from rigidity.acceptance import CRITERIA, run_criterion

RESULTS = []


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA], ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number):
    res = run_criterion(number)
    RESULTS.append(res)
    print(res.line())
    assert res.passed, res.line()
