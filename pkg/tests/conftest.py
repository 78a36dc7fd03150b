import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

REPO_ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    path = REPO_ROOT / "corpus"
    assert path.is_dir(), "shipped corpus directory is missing"
    return path
