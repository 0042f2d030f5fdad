import io
import json
import socket
import sys
import threading
import urllib.parse
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from galprod.cli import run_command
from galprod.curves import CurveModel

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"
SCHEMAS = ROOT / "schemas"


def load_fixture_curves():
    doc = json.loads((FIXTURES / "curves.json").read_text())
    return [CurveModel.from_json(c) for c in doc["curves"]]


@pytest.fixture(scope="session")
def fixture_curves():
    return load_fixture_curves()


@pytest.fixture(scope="session")
def e1(fixture_curves):
    return fixture_curves[0]


@pytest.fixture(scope="session")
def e2(fixture_curves):
    return fixture_curves[1]


@pytest.fixture
def no_network(monkeypatch):
    """Fail loudly on any attempt to open a socket connection."""
    attempts = []

    def refuse(*args, **kwargs):
        attempts.append(args)
        raise AssertionError("network access attempted")

    monkeypatch.setattr(socket, "create_connection", refuse)
    monkeypatch.setattr(socket.socket, "connect", refuse)
    monkeypatch.setattr(socket, "getaddrinfo", refuse)
    return attempts


class _FixtureHandler(BaseHTTPRequestHandler):
    requests = []

    def do_GET(self):
        url = urllib.parse.urlparse(self.path)
        query = urllib.parse.parse_qs(url.query)
        label = query.get("lmfdb_label", [""])[0]
        type(self).requests.append(label)
        if label == "broken.a1":
            body = json.dumps({"data": [{"lmfdb_label": label, "conductor": 11}]}).encode()
        elif label == "garbage.a1":
            body = b"<html>not json</html>"
        else:
            path = FIXTURES / "lmfdb" / f"{label}.json"
            body = path.read_bytes() if path.exists() else json.dumps({"data": []}).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture
def api_server():
    """Local stand-in for the curve database, serving tests/fixtures/lmfdb."""
    _FixtureHandler.requests = []
    server = ThreadingHTTPServer(("127.0.0.1", 0), _FixtureHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    server.requests = _FixtureHandler.requests
    server.url = f"http://127.0.0.1:{server.server_address[1]}/api/ec_curvedata/"
    yield server
    server.shutdown()
    server.server_close()


class CliResult:
    def __init__(self, code, out, err):
        self.code = code
        self.out = out
        self.err = err

    @property
    def json(self):
        return json.loads(self.out)

    @property
    def error(self):
        return json.loads(self.err)


@pytest.fixture
def cli(capsys):
    def run(*argv):
        out, err = io.StringIO(), io.StringIO()
        code = run_command([str(a) for a in argv], stdout=out, stderr=err)
        captured = capsys.readouterr()
        return CliResult(code, out.getvalue() + captured.out, err.getvalue() + captured.err)

    return run


@pytest.fixture(scope="session")
def schema():
    def load(name):
        return json.loads((SCHEMAS / f"{name}.json").read_text())

    return load


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)
