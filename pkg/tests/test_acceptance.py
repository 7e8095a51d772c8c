"""Acceptance criteria 1-10, exact arithmetic throughout."""

import pytest

from polarcert.acceptance import CRITERIA


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    result = CRITERIA[number]()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.ok, result.line()
