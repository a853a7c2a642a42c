from typing import List

import pytest

from internal.custom_types.graph import Graph
from internal.utils.config import reset_settings
from oracles import small_corpus


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    """Every test sees default settings, whatever the caller's environment holds."""
    for name in ("CRLAB_THREADS", "CRLAB_VERTEX_CAP", "CRLAB_NODE_BUDGET", "CRLAB_PROGRESS_EVERY", "CRLAB_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("CRLAB_CONFIG", str(tmp_path / "absent.toml"))
    reset_settings()
    yield
    reset_settings()


@pytest.fixture(scope="session")
def corpus_upto_5() -> List[Graph]:
    return small_corpus(5)
