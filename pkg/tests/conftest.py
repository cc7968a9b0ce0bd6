import os
from functools import lru_cache

import pytest

from cvpk import gpb_engine, kernels, oracle, pb_analysis

LONG = os.environ.get("CVPK_LONG", "") not in ("", "0")

ACCEPTANCE_LINES: list[str] = []


def pytest_collection_modifyitems(config, items):
    if LONG:
        return
    skip = pytest.mark.skip(reason="long-run check; set CVPK_LONG=1")
    for item in items:
        if "longrun" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@lru_cache(maxsize=None)
def oracle_gpb(family: str, n: int):
    return oracle.gpb_oracle(kernels.make_kernel(family, n))


@lru_cache(maxsize=None)
def oracle_pb(family: str, n: int):
    return oracle.pb_oracle(kernels.make_kernel(family, n))


@lru_cache(maxsize=None)
def recursive_gpb(m: int):
    return gpb_engine.gpb(m)


@lru_cache(maxsize=None)
def recursive_pbs(m: int):
    return pb_analysis.pb_cvpk_both(m)
