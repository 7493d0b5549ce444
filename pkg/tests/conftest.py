from pathlib import Path

import os

import pytest
from hypothesis import settings

from spamlab.kernels import available_backends

# reproducible property runs by default; HYPOTHESIS_PROFILE=explore for fresh examples
settings.register_profile("default", derandomize=True)
settings.register_profile("explore", max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"

BACKENDS = available_backends()


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Run a test once per kernel backend by patching the selected kernels."""
    from spamlab import kernels

    impl = BACKENDS[request.param]
    monkeypatch.setattr(kernels, "best_split_scan", impl.best_split_scan)
    monkeypatch.setattr(kernels, "nb_scores", impl.nb_scores)
    return request.param


@pytest.fixture
def data_dir():
    return DATA


# one line per acceptance criterion, printed after the run
ACCEPTANCE_RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"[PRIMARY] {'PASS' if ok else 'FAIL'}  {name}: {detail}")
