from __future__ import annotations

import random

import pytest

from fiberknot import catalog
from fiberknot.knot import build_exterior


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20261018,
                     help="seed for the randomized tests (printed in the header)")


def pytest_report_header(config):
    return f"fiberknot random seed: {config.getoption('--seed')}"


@pytest.fixture
def rng(request) -> random.Random:
    return random.Random(request.config.getoption("--seed"))


class _Cache:
    def __init__(self):
        self.models = {}
        self.exteriors = {}

    def family(self, family: str, **params):
        key = (family, tuple(sorted(params.items())))
        if key not in self.models:
            self.models[key] = catalog.generate_family(family, **params)
        return self.models[key]

    def exterior(self, family: str, knot: str, **params):
        key = (family, tuple(sorted(params.items())), knot)
        if key not in self.exteriors:
            cm = self.family(family, **params)
            self.exteriors[key] = build_exterior(cm.model, cm.knots[knot])
        return self.exteriors[key]


@pytest.fixture(scope="session")
def cat() -> _Cache:
    return _Cache()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
