"""Shared pytest configuration: the `slow` marker for long acceptance runs."""

import os

import pytest


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running acceptance check (set SIXVERTEX_SLOW=1)")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("SIXVERTEX_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="set SIXVERTEX_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
