"""
Scenario Tool

Parses simulation scenarios (line-oriented key = value, or YAML) into a
validated Scenario model and turns per-edge expression names into sampled
fields on the subdivided graph.
"""

from pathlib import Path
from typing import Callable, Dict, List, Literal, Optional, Tuple

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from qgraph.errors import ScenarioError
from qgraph.tools.exporters import read_field_table
from qgraph.tools.metric_graph import EquilateralGraph
from qgraph.tools.qgfft import SampledField

EQUATIONS = ("heat", "schrodinger", "wave", "fisher-kpp", "sine-gordon")
WAVE_TYPE = ("wave", "sine-gordon")

Expression = Callable[[np.ndarray], np.ndarray]


# ==================== EXPRESSION LIBRARY ====================

EXPRESSIONS: Dict[str, Expression] = {
    "zero": lambda x: np.zeros_like(x),
    "one": lambda x: np.ones_like(x),
    "half": lambda x: np.full_like(x, 0.5),
    "fifth": lambda x: np.full_like(x, 0.2),
    "capacity_dip": lambda x: 1.0 - 0.3 * (1.0 - np.cos(2.0 * np.pi * x)),
    "tent": lambda x: 1.0 - np.abs(2.0 * x - 1.0),
    "raised_cosine": lambda x: 0.5 * (1.0 - np.cos(2.0 * np.pi * x)),
    "sin_pi": lambda x: np.sin(np.pi * x),
    "neg_sin_pi": lambda x: -np.sin(np.pi * x),
}


def expression_names() -> List[str]:
    return sorted(EXPRESSIONS) + ["random", "file:<path>", "<number>"]


def _constant(text: str) -> Optional[Expression]:
    try:
        value = float(text)
    except ValueError:
        return None
    return lambda x: np.full_like(x, value)


# ==================== SCENARIO MODEL ====================

class Scenario(BaseModel):
    """
    One simulation run.

    Edge keys in init/velocity/coef are unit-edge indices after subdivision
    (and after leaf doubling when double_leaves is set); '*' sets the
    default for every edge not listed.
    """
    model_config = ConfigDict(extra="forbid")

    graph: str
    equation: Literal["heat", "schrodinger", "wave", "fisher-kpp", "sine-gordon"]
    N: int = 64
    dt: float = Field(gt=0)
    t_end: float = Field(ge=0)
    a: float = Field(default=1.0, ge=0)
    damping: bool = False
    f0: Optional[float] = Field(default=None, gt=0)
    output_times: List[float] = Field(default_factory=list)
    output_path: Optional[str] = None
    init: Dict[str, str] = Field(default_factory=dict)
    velocity: Dict[str, str] = Field(default_factory=dict)
    coef: Dict[str, str] = Field(default_factory=dict)
    double_leaves: bool = False
    potential_mode: Literal["potential", "source"] = "potential"
    nonlinearity: Literal["sine", "linear"] = "sine"
    path: List[int] = Field(default_factory=list)
    seed: int = Field(default=0, ge=0)
    base_dir: str = "."

    @field_validator("N")
    @classmethod
    def _power_of_two(cls, value: int) -> int:
        if value < 2 or value & (value - 1):
            raise ValueError(f"N must be a power of two >= 2, got {value}")
        return value

    @field_validator("init", "velocity", "coef", mode="before")
    @classmethod
    def _edge_keys(cls, value):
        if not isinstance(value, dict):
            raise ValueError("expected a mapping of edge -> expression")
        out = {}
        for key, expr in value.items():
            key = str(key).strip()
            if key != "*" and not key.isdigit():
                raise ValueError(f"edge key must be a unit-edge index or '*', got '{key}'")
            out[key] = str(expr).strip()
        return out

    @model_validator(mode="after")
    def _check_times(self) -> "Scenario":
        if not self.output_times:
            self.output_times = [self.t_end]
        times = sorted(float(t) for t in self.output_times)
        for t in times:
            if t < 0 or t > self.t_end + 1e-12:
                raise ValueError(f"output time {t} outside [0, t_end = {self.t_end}]")
        self.output_times = times
        return self

    @property
    def is_wave_type(self) -> bool:
        return self.equation in WAVE_TYPE

    @property
    def damping_threshold(self) -> float:
        """f0, defaulting to pi N / 8"""
        return self.f0 if self.f0 is not None else np.pi * self.N / 8.0

    @property
    def default_coef(self) -> str:
        return "one" if self.equation == "fisher-kpp" else "zero"

    def graph_path(self) -> Path:
        path = Path(self.graph)
        return path if path.is_absolute() else Path(self.base_dir) / path


# ==================== PARSING ====================

_SCALAR_KEYS = {
    "graph", "equation", "N", "dt", "t_end", "a", "damping", "f0",
    "output_times", "output_path", "double_leaves", "potential_mode",
    "nonlinearity", "path", "seed",
}
_EDGE_GROUPS = ("init", "velocity", "coef")
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _parse_bool(value: str, key: str, line_num: int) -> bool:
    lowered = value.strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ScenarioError(f"Line {line_num}: '{key}' expects on/off, got '{value}'")


def _split_list(value: str) -> List[str]:
    return [item for item in value.replace(",", " ").split() if item]


def parse_scenario_text(text: str, base_dir: str = ".") -> Scenario:
    """
    Parse `key = value` lines. '#' starts a comment; init.<edge>,
    velocity.<edge> and coef.<edge> select per-edge expressions.
    """
    raw: Dict[str, object] = {group: {} for group in _EDGE_GROUPS}
    seen = set()

    for line_num, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ScenarioError(f"Line {line_num}: expected 'key = value', got '{line}'")

        key, value = (part.strip() for part in line.split('=', 1))
        if key in seen:
            raise ScenarioError(f"Line {line_num}: duplicate key '{key}'")
        seen.add(key)

        group, _, edge = key.partition('.')
        if group in _EDGE_GROUPS and edge:
            raw[group][edge] = value
        elif key in ("damping", "double_leaves"):
            raw[key] = _parse_bool(value, key, line_num)
        elif key == "output_times":
            raw[key] = _split_list(value)
        elif key == "path":
            raw[key] = _split_list(value)
        elif key in _SCALAR_KEYS:
            raw[key] = value
        else:
            raise ScenarioError(f"Line {line_num}: unknown key '{key}'")

    return _validate(raw, base_dir)


def _flatten_yaml(data: dict) -> Dict[str, object]:
    raw: Dict[str, object] = {group: {} for group in _EDGE_GROUPS}
    for key, value in data.items():
        key = str(key)
        group, _, edge = key.partition('.')
        if group in _EDGE_GROUPS and edge:
            raw[group][edge] = value
        elif key in _EDGE_GROUPS:
            if not isinstance(value, dict):
                raise ScenarioError(f"'{key}' must map edges to expressions")
            raw[key].update({str(k): v for k, v in value.items()})
        elif key in _SCALAR_KEYS:
            if key in ("output_times", "path") and isinstance(value, str):
                value = _split_list(value)
            raw[key] = value
        else:
            raise ScenarioError(f"Unknown key '{key}'")
    return raw


def parse_scenario_yaml(text: str, base_dir: str = ".") -> Scenario:
    data = yaml.safe_load(text)
    if not isinstance(data, dict):
        raise ScenarioError("YAML scenario must be a mapping")
    return _validate(_flatten_yaml(data), base_dir)


def _validate(raw: Dict[str, object], base_dir: str) -> Scenario:
    raw["base_dir"] = base_dir
    try:
        return Scenario.model_validate(raw)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'scenario'}: {err['msg']}"
            for err in e.errors()
        )
        raise ScenarioError(f"Invalid scenario: {problems}") from e


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioError(f"Cannot read scenario {path}: {e}") from e
    base_dir = str(path.parent)
    if path.suffix.lower() in (".yaml", ".yml"):
        return parse_scenario_yaml(text, base_dir)
    return parse_scenario_text(text, base_dir)


# ==================== FIELD CONSTRUCTION ====================

def vertex_average(values: np.ndarray, g: EquilateralGraph) -> np.ndarray:
    """
    Replace endpoint samples by the mean over all edges meeting at the
    vertex, so the field is single-valued there.
    """
    out = np.array(values, dtype=complex, copy=True)
    totals = np.zeros(g.vertex_count, dtype=complex)
    for e, (tail, head) in enumerate(g.directed_edges):
        totals[tail] += out[e, 0]
        totals[head] += out[e, -1]
    means = totals / np.asarray(g.degree)
    for e, (tail, head) in enumerate(g.directed_edges):
        out[e, 0] = means[tail]
        out[e, -1] = means[head]
    return out


def _resolve(
    expr: str,
    edge: int,
    x: np.ndarray,
    base_dir: str,
    rng: np.random.Generator,
    tables: Dict[str, np.ndarray],
) -> np.ndarray:
    if expr in EXPRESSIONS:
        return EXPRESSIONS[expr](x)
    if expr == "random":
        return rng.uniform(-1.0, 1.0, size=x.shape)
    if expr.startswith("file:"):
        target = Path(expr[len("file:"):].strip())
        if not target.is_absolute():
            target = Path(base_dir) / target
        key = str(target)
        if key not in tables:
            tables[key] = read_field_table(target)
        table = tables[key]
        if table.shape[1] != x.size:
            raise ScenarioError(
                f"{target} has {table.shape[1] - 1} samples per edge, scenario uses {x.size - 1}"
            )
        if edge >= table.shape[0]:
            raise ScenarioError(f"{target} has no data for edge {edge}")
        return table[edge]
    constant = _constant(expr)
    if constant is not None:
        return constant(x)
    raise ScenarioError(
        f"Unknown expression '{expr}' (known: {', '.join(expression_names())})"
    )


def build_field(
    g: EquilateralGraph,
    N: int,
    assignments: Dict[str, str],
    default: str = "zero",
    base_dir: str = ".",
    seed: int = 0,
) -> SampledField:
    """
    Sample per-edge expressions at x_n = n/N and average the endpoint
    values at every vertex.
    """
    for key in assignments:
        if key != "*" and int(key) >= g.edge_count:
            raise ScenarioError(f"Edge {key} does not exist (graph has {g.edge_count} unit edges)")

    fallback = assignments.get("*", default)
    x = np.arange(N + 1) / N
    rng = np.random.default_rng(seed)
    tables: Dict[str, np.ndarray] = {}

    values = np.zeros((g.edge_count, N + 1), dtype=complex)
    for e in range(g.edge_count):
        expr = assignments.get(str(e), fallback)
        values[e] = _resolve(expr, e, x, base_dir, rng, tables)

    return SampledField(vertex_average(values, g))


def scenario_fields(
    scenario: Scenario, g: EquilateralGraph
) -> Tuple[SampledField, Optional[SampledField], SampledField]:
    """(initial data, initial velocity or None, coefficient field)"""
    def build(assignments: Dict[str, str], default: str) -> SampledField:
        return build_field(g, scenario.N, assignments, default, scenario.base_dir, scenario.seed)

    init = build(scenario.init, "zero")
    velocity = build(scenario.velocity, "zero") if scenario.is_wave_type else None
    coef = build(scenario.coef, scenario.default_coef)
    return init, velocity, coef
