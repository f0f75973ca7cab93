import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent.parent / "fixtures"
SCHEMAS = Path(__file__).parent.parent / "schemas"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def schema_path() -> Path:
    return SCHEMAS / "wire-protocol.schema.json"


@pytest.fixture(scope="session")
def iso_table():
    from polyeval.langid.iso_table import load_default_table

    return load_default_table()


@pytest.fixture()
def golden_config(tmp_path):
    """The fixture-run config, retargeted at a temp output dir."""
    from polyeval.orchestrator.config import RunConfig

    config = RunConfig.from_file(FIXTURES / "run_golden.json")
    config.output_dir = tmp_path / "out"
    return config
