"""Shared fixtures; the helpers live in testutil for direct import."""

import os

import pytest

from testutil import DATA_DIR, start_server


@pytest.fixture(scope="module")
def server(tmp_path_factory):
    path = tmp_path_factory.mktemp("srv") / "seqlean.sock"
    proc = start_server(
        path,
        "--workers", 2,
        "--deadline", 10,
        "--stripped", os.path.join(DATA_DIR, "stripped_fixture.txt"),
        "--bfile-dir", DATA_DIR,
    )
    yield proc
    assert proc.alive(), "server process died during the test module"
    proc.stop()
