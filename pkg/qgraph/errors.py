"""
Error types raised across the quantum graph toolkit.

Everything derives from ValueError so callers that only know
"bad input" keep working.
"""

from typing import Optional


class QuantumGraphError(ValueError):
    """Base class for all toolkit errors"""


class GraphFormatError(QuantumGraphError):
    """Malformed graph file content"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"Line {line}: {message}"
        super().__init__(message)


class GraphStructureError(QuantumGraphError):
    """Graph violates a structural precondition (loops, leaves, disconnected...)"""


class SpectralError(QuantumGraphError):
    """Eigen-decomposition or eigenspace construction failed"""

    def __init__(self, message: str, unconverged: Optional[int] = None):
        # LAPACK reports how many elements failed to converge, not an iteration count
        self.unconverged = unconverged
        if unconverged is not None:
            message = f"{message} ({unconverged} unconverged)"
        super().__init__(message)


class TransformShapeError(QuantumGraphError):
    """Field / coefficient array does not match the basis graph"""


class InstabilityError(QuantumGraphError):
    """Time stepping produced NaN/Inf or a runaway amplitude"""

    def __init__(self, message: str, step: int, time: float):
        self.step = step
        self.time = time
        super().__init__(f"{message} at step {step} (t = {time:.6g})")


class LogisticBlowupError(QuantumGraphError):
    """Exact logistic flow hit a vanishing denominator"""

    def __init__(self, edge: int, sample: int, value: complex):
        self.edge = edge
        self.sample = sample
        super().__init__(
            f"Logistic flow denominator vanished on edge {edge}, sample {sample} (u = {value})"
        )


class ScenarioError(QuantumGraphError):
    """Scenario configuration is invalid"""


class OracleMismatchError(QuantumGraphError):
    """Fast transform disagrees with the quadrature oracle"""
