import random

import pytest

from grcs import cscrypt, perm
from grcs.gring import GroupRingElement, SIZE


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def default_keys():
    """One key pair with the default parameters, shared across modules."""
    return cscrypt.keygen(random.Random(7), cscrypt.Params())


def convolve_oracle(a, b):
    """Group ring product straight from the definition, composing permutations explicitly."""
    out = [0] * SIZE
    for i, x in enumerate(a.coeffs):
        if not x:
            continue
        p = perm.unrank(i)
        for j, y in enumerate(b.coeffs):
            if y:
                k = perm.rank(perm.compose(p, perm.unrank(j)))
                out[k] = (out[k] + int(x) * int(y)) % 7
    return GroupRingElement(out)


@pytest.fixture(scope="session")
def ddh_500():
    from grcs import ddh_lab
    cfg = ddh_lab.ExperimentConfig(mode="ddh", trials=500, seed=42)
    return cfg, ddh_lab.run_ddh_experiment(None, cfg)


@pytest.fixture(scope="session")
def masking_500():
    from grcs import ddh_lab
    cfg = ddh_lab.ExperimentConfig(mode="masking", trials=500, seed=42)
    return cfg, ddh_lab.run_masking_experiment(None, cfg)


@pytest.fixture(scope="session")
def threshold_500():
    from grcs import ddh_lab
    return ddh_lab.calibrate_threshold(random.Random("control-500"), 500, runs=100)


ACCEPTANCE_LINES = []


def record_acceptance(number, ok, text):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
