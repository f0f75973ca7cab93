import json
import threading
from pathlib import Path

import pytest

from model_server.server import serve
from model_server.toy import ToyBackend, ToySpec

REPO_ROOT = Path(__file__).parent.parent.parent
SCHEMA_PATH = REPO_ROOT / "schemas" / "wire-protocol.schema.json"
GOLDEN_DIR = REPO_ROOT / "tests" / "golden"
FIXTURES_DIR = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def wire_schema():
    return json.loads(SCHEMA_PATH.read_text())


@pytest.fixture()
def serve_backend():
    """Start servers on free ports; all are torn down after the test."""
    servers = []

    def _start(backend) -> str:
        server = serve(backend, host="127.0.0.1", port=0)
        threading.Thread(target=server.serve_forever, daemon=True).start()
        servers.append(server)
        return f"http://127.0.0.1:{server.server_address[1]}"

    yield _start
    for server in servers:
        server.shutdown()
        server.server_close()


@pytest.fixture()
def serve_toy(serve_backend):
    def _start(spec_text: str) -> str:
        return serve_backend(ToyBackend(ToySpec.parse(spec_text)))

    return _start
