"""
Shared fixtures for the demo test suite.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from qgraph.tools.metric_graph import EquilateralGraph, double_at_leaves, load_graph, subdivide
from qgraph.tools.qgfft import SampledField
from qgraph.tools.spectral_basis import FundamentalBasis, build_basis

GRAPHS = Path(__file__).parent / "graphs"
SCENARIOS = Path(__file__).parent / "scenarios"

BASIS_FIXTURES = ["triangle", "cube", "cycle5", "k4", "fig8", "bridge", "loop_box"]


def equilateral(name: str, double_leaves: bool = False) -> EquilateralGraph:
    metric = load_graph(GRAPHS / f"{name}.graph")
    if double_leaves:
        metric, _ = double_at_leaves(metric)
    return subdivide(metric)


def continuous_random_field(g: EquilateralGraph, N: int, rng: np.random.Generator) -> SampledField:
    """Random complex interior samples with shared random values at the vertices"""
    shape = (g.edge_count, N + 1)
    values = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    at_vertex = rng.standard_normal(g.vertex_count) + 1j * rng.standard_normal(g.vertex_count)
    for e, (tail, head) in enumerate(g.directed_edges):
        values[e, 0] = at_vertex[tail]
        values[e, -1] = at_vertex[head]
    return SampledField(values)


_bases = {}


def basis_for(name: str, double_leaves: bool = False) -> FundamentalBasis:
    key = (name, double_leaves)
    if key not in _bases:
        _bases[key] = build_basis(equilateral(name, double_leaves))
    return _bases[key]


@pytest.fixture(scope="session")
def graphs_dir() -> Path:
    return GRAPHS


@pytest.fixture(scope="session")
def scenarios_dir() -> Path:
    return SCENARIOS


@pytest.fixture(scope="session")
def cube_basis() -> FundamentalBasis:
    return basis_for("cube")


@pytest.fixture(scope="session")
def triangle_basis() -> FundamentalBasis:
    return basis_for("triangle")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
