from pathlib import Path

import pytest

GOLDEN = Path(__file__).resolve().parents[2] / "golden"


@pytest.fixture(scope="session")
def golden() -> Path:
    if not GOLDEN.is_dir():
        pytest.fail(
            f"golden data missing at {GOLDEN}; regenerate with scripts/make_golden.py"
        )
    return GOLDEN
