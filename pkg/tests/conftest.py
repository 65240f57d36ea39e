import pathlib

import pytest

SCHEMA_DIR = pathlib.Path(__file__).resolve().parents[1] / "src" / "ramsey_moments" / "schemas"


@pytest.fixture(scope="session")
def schema_dir():
    return SCHEMA_DIR
