import pytest

from sgmatch import cli, harness, matchers

MONOTONE_TOL = 1e-9


@pytest.fixture(autouse=True)
def enforce_monotone_objective(monkeypatch):
    """Assert the Frank-Wolfe objective trace never decreases, on every run.

    Wraps the matcher in-place so every invocation anywhere in the suite
    (library tests, harness runs, in-process CLI calls) is checked.
    """
    real = matchers.sgm_match

    def checked(*args, **kwargs):
        result = real(*args, **kwargs)
        trace = result.objective_trace
        drops = [
            (i, trace[i], trace[i + 1])
            for i in range(len(trace) - 1)
            if trace[i + 1] < trace[i] - MONOTONE_TOL
        ]
        assert not drops, f"objective trace decreased: {drops}"
        return result

    monkeypatch.setattr(matchers, "sgm_match", checked)
    monkeypatch.setattr(harness, "sgm_match", checked)
    monkeypatch.setattr(cli, "sgm_match", checked)
    yield
