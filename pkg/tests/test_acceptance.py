"""The nine acceptance criteria at full scale, one PASS/FAIL line each.

Set GONFLOW_ACCEPTANCE_SCALE=quick for a smoke run.  Running this file as
a script prints the same lines without pytest.
"""
import os
import sys

import pytest

from gonflow.acceptance import CRITERIA, run_criterion

SCALE = os.environ.get("GONFLOW_ACCEPTANCE_SCALE", "full")


@pytest.mark.parametrize("key", list(CRITERIA))
def test_criterion(key, capsys):
    res = run_criterion(key, SCALE)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.line()


if __name__ == "__main__":
    results = [run_criterion(key, SCALE) for key in CRITERIA]
    for res in results:
        print(res.line(), flush=True)
    sys.exit(0 if all(r.passed for r in results) else 1)
