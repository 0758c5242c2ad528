"""Quantum graph FFT toolkit"""

from qgraph.config import Settings, get_settings
from qgraph.errors import QuantumGraphError
from qgraph.workflow import SimulationResult, SimulationWorkflow, ValidationWorkflow, simulate

__all__ = [
    'Settings',
    'get_settings',
    'QuantumGraphError',
    'SimulationResult',
    'SimulationWorkflow',
    'ValidationWorkflow',
    'simulate',
]
