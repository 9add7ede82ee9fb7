import re
import time

import pytest

from macronet import save_store
from macronet.fixtures import fixture_csv_paths, fixture_store

_criterion_results = {}


def pytest_configure(config):
    config._suite_start = time.perf_counter()


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if m:
        _criterion_results[int(m.group(1))] = (m.group(2), report.outcome)


def pytest_sessionfinish(session, exitstatus):
    for number in sorted(_criterion_results):
        label, outcome = _criterion_results[number]
        verdict = {"passed": "PASS", "failed": "FAIL"}.get(outcome, outcome.upper())
        print(f"\n[acceptance] criterion {number} "
              f"({label.replace('_', ' ')}): {verdict}", end="")
    elapsed = time.perf_counter() - session.config._suite_start
    ok = elapsed < 10.0
    print(f"\n[acceptance] criterion 6 (full suite wall-clock < 10 s): "
          f"{'PASS' if ok else 'FAIL'} ({elapsed:.2f}s)")
    if not ok and exitstatus == 0:
        session.exitstatus = 1


@pytest.fixture(scope="session")
def fixture_texts():
    return [p.read_text(encoding="utf-8") for p in fixture_csv_paths()]


@pytest.fixture(scope="session")
def store():
    return fixture_store()


@pytest.fixture(scope="session")
def store_file(store, tmp_path_factory):
    path = tmp_path_factory.mktemp("store") / "store.json"
    save_store(store, path)
    return path


@pytest.fixture(scope="session")
def points(fixture_texts):
    from oracle import load_points

    return load_points(*fixture_texts)
