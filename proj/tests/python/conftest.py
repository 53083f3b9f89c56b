import os
import re
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[2]


def _cli():
    path = os.environ.get("OOB_LAB") or shutil.which("oob-lab")
    if not path:
        for cand in (ROOT / "build" / "oob-lab",):
            if cand.exists():
                path = str(cand)
    return path


@pytest.fixture(scope="session")
def cli():
    path = _cli()
    if not path:
        pytest.skip("oob-lab binary not built")
    return path


@pytest.fixture(scope="session")
def scenario_dir():
    return Path(os.environ.get("OOBLAB_SCENARIO_DIR", ROOT / "scenarios"))


@pytest.fixture(scope="session")
def ui_dir():
    return Path(os.environ.get("OOBLAB_UI_DIR", ROOT / "ui"))


def oob(cli, *args, timeout=300):
    return subprocess.run([cli, *map(str, args)], capture_output=True, text=True, timeout=timeout)


class Served:
    """An `oob-lab serve` child process and the port it bound."""

    def __init__(self, cli, *args):
        self.proc = subprocess.Popen([cli, "serve", *map(str, args)], stdout=subprocess.PIPE,
                                     stderr=subprocess.PIPE, text=True)
        line = self.proc.stdout.readline()
        m = re.search(r"ws://([^:]+):(\d+)/", line)
        if not m:
            self.proc.kill()
            raise RuntimeError("serve did not report a port: %r %s" % (line, self.proc.stderr.read()))
        self.host, self.port = m.group(1), int(m.group(2))

    def close(self):
        if self.proc.poll() is None:
            self.proc.terminate()
        try:
            self.proc.wait(timeout=10)
        except subprocess.TimeoutExpired:
            self.proc.kill()
            self.proc.wait()


@pytest.fixture
def serve(cli):
    started = []

    def start(*args):
        s = Served(cli, *args)
        started.append(s)
        return s

    yield start
    for s in started:
        s.close()
