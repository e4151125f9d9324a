"""Pytest configuration and shared fixtures."""

import numpy as np
import pytest

from src.infrastructure.graph.diffusion_factory import build_diffusion
from src.infrastructure.planted.planted_models import generate_dataset
from tests.builders import PlantedConfigBuilder, RunConfigBuilder, make_dataset, random_graph


@pytest.fixture
def small_planted():
    """Planted config with n=40, d=4 and full alignment."""
    return PlantedConfigBuilder().build()


@pytest.fixture
def small_dataset(small_planted):
    """Planted dataset with 10 labeled nodes."""
    return generate_dataset(small_planted, m=10)


@pytest.fixture
def small_diffusion(small_dataset):
    """Degree-normalized operator of ``small_dataset``."""
    return build_diffusion(small_dataset.adjacency, "degree_normalized")


@pytest.fixture
def path_graph():
    """Adjacency of the path 0 - 1 - 2."""
    return np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=np.float64)


@pytest.fixture
def random_dataset():
    """Random graph with Gaussian features, 12 nodes and 4 labeled."""
    rng = np.random.default_rng(7)
    return make_dataset(random_graph(12, 0.3, seed=3), rng.normal(size=(12, 3)), [0, 3, 5, 8])


@pytest.fixture
def run_config():
    """RunConfig small enough for a full sweep in a test."""
    return RunConfigBuilder().build()


@pytest.fixture
def cora_files(tmp_path):
    """Three-paper Cora-format files with feature width 4 and one citation."""
    content = tmp_path / "cora.content"
    cites = tmp_path / "cora.cites"
    content.write_text(
        "31336\t0\t1\t0\t1\tNeural_Networks\n"
        "1061127\t1\t0\t0\t0\tRule_Learning\n"
        "1106406\t0\t0\t0\t0\tNeural_Networks\n",
        encoding="utf-8",
    )
    cites.write_text("31336\t1061127\n", encoding="utf-8")
    return content, cites
