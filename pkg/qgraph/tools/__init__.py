"""Quantum graph tools package"""

from qgraph.tools.metric_graph import (
    EquilateralGraph,
    MetricGraph,
    double_at_leaves,
    load_graph,
    parse_graph,
    path_trace,
    subdivide,
)
from qgraph.tools.spectral_basis import FundamentalBasis, build_basis, discrete_spectrum
from qgraph.tools.qgfft import SampledField, SpectralCoefficients, forward, inverse, naive_forward
from qgraph.tools.pde import WaveState, damping_filter, strang_step
from qgraph.tools.scenario import Scenario, load_scenario

__all__ = [
    'EquilateralGraph',
    'MetricGraph',
    'double_at_leaves',
    'load_graph',
    'parse_graph',
    'path_trace',
    'subdivide',
    'FundamentalBasis',
    'build_basis',
    'discrete_spectrum',
    'SampledField',
    'SpectralCoefficients',
    'forward',
    'inverse',
    'naive_forward',
    'WaveState',
    'damping_filter',
    'strang_step',
    'Scenario',
    'load_scenario',
]
