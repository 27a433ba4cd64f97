import signal
import subprocess
import sys

import pytest


@pytest.fixture(scope="session")
def server_proc(tmp_path_factory):
    sock = tmp_path_factory.mktemp("srv") / "sdk.sock"
    proc = subprocess.Popen(
        [sys.executable, "-m", "seqlean", "serve", "--unix", str(sock), "--workers", "2"],
        stdout=subprocess.PIPE,
        stderr=subprocess.STDOUT,
        text=True,
    )
    banner = proc.stdout.readline()
    assert "listening" in banner, banner
    yield proc, f"unix://{sock}"
    proc.send_signal(signal.SIGTERM)
    assert proc.wait(timeout=15) == 0


@pytest.fixture(scope="session")
def endpoint(server_proc):
    return server_proc[1]
