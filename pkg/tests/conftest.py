import os
from pathlib import Path

import pytest

import synthdata
from churnkit import load_dataset

# Point this at the real IBM file to run the suite against it instead of the
# synthetic surrogate.
DATASET_ENV_VAR = "CHURNKIT_TELCO_CSV"

# one "criterion N <name>: PASS/FAIL" line per acceptance criterion,
# appended by tests/test_acceptance.py and echoed after the test run
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def telco_csv(tmp_path_factory) -> Path:
    """Canonical-size churn CSV: the real file if configured, else the surrogate."""
    override = os.environ.get(DATASET_ENV_VAR)
    if override:
        path = Path(override)
        if not path.exists():
            raise FileNotFoundError(f"{DATASET_ENV_VAR} points at {override}, which does not exist")
        return path
    return synthdata.write_csv(tmp_path_factory.mktemp("data") / "telco_synth.csv")


@pytest.fixture(scope="session")
def telco_ds(telco_csv):
    return load_dataset(telco_csv)


@pytest.fixture(scope="session")
def small_csv(tmp_path_factory) -> Path:
    """A 400-row surrogate for fast CLI and integration tests."""
    return synthdata.write_csv(tmp_path_factory.mktemp("data") / "telco_small.csv", n_rows=400)
