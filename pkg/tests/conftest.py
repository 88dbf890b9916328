import os
import sys
from pathlib import Path

import pytest

SRC = Path(__file__).resolve().parents[1] / "src"
sys.path.insert(0, str(SRC))


@pytest.fixture(autouse=True)
def _clean_covers_env(monkeypatch):
    # tolerances and the journal path come from COVERS_* in the cli
    for key in [k for k in os.environ if k.startswith("COVERS_")]:
        monkeypatch.delenv(key)
