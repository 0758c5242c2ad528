"""
Quantum Graph Simulation Workflow

LangGraph state machines driving the toolkit:
- SimulationWorkflow: load graph -> basis -> fields -> route by equation
  -> spectral / splitting / wave splitting -> write outputs
- ValidationWorkflow: load graph -> basis -> orthonormality -> transform
  tables -> report
"""

from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import List, Optional, Tuple, TypedDict

import numpy as np
from langgraph.graph import END, StateGraph

from qgraph.errors import InstabilityError
from qgraph.tools.exporters import field_table, path_table, write_text
from qgraph.tools.metric_graph import (
    EdgePath,
    EquilateralGraph,
    MetricGraph,
    MirrorMap,
    double_at_leaves,
    expand_walk,
    load_graph,
    path_samples,
    path_trace,
    subdivide,
    symmetrize,
)
from qgraph.tools.pde import (
    WaveState,
    damping_filter,
    linear_restoring_step,
    logistic_step,
    mode_table,
    potential_step,
    propagate_heat,
    propagate_schrodinger,
    propagate_wave,
    sine_gordon_step,
    source_step,
    strang_step,
)
from qgraph.tools.qgfft import SampledField, forward, inverse
from qgraph.tools.scenario import Scenario, scenario_fields, vertex_average
from qgraph.tools.spectral_basis import FundamentalBasis, build_basis
from qgraph.tools.validation import (
    ValidationReport,
    input_rows,
    orthonormality_rows,
)

# max|u| past this counts as divergence
BLOWUP_AMPLITUDE = 1e3


def _stamp(message: str) -> str:
    return f"[{datetime.now().isoformat()}] {message}"


@dataclass
class SimulationResult:
    """Fields at the requested output times, plus the decision trace"""
    scenario: Scenario
    graph: EquilateralGraph
    basis: FundamentalBasis
    times: List[float]
    fields: List[SampledField]
    velocities: List[Optional[SampledField]]
    scheme: str
    steps: int
    trace: List[str] = field(default_factory=list)
    written: List[Path] = field(default_factory=list)


class SimulationState(TypedDict):
    """State flowing through the simulation graph"""
    scenario: Scenario
    output_dir: Optional[str]
    metric: Optional[MetricGraph]
    graph: Optional[EquilateralGraph]
    mirror: Optional[MirrorMap]
    basis: Optional[FundamentalBasis]
    init: Optional[SampledField]
    velocity: Optional[SampledField]
    coef: Optional[SampledField]
    scheme: str
    times: list
    fields: list
    velocities: list
    steps: int
    written: list
    trace: list


# ==================== STEPPING HELPERS ====================

def _substeps(interval: float, h: float) -> Tuple[int, float]:
    """Whole number of steps covering interval, each at most h"""
    if interval <= 0:
        return 0, h
    count = int(np.ceil(interval / h - 1e-9))
    return count, interval / count


def _check_stable(fields: Tuple[SampledField, ...], step: int, t: float):
    u = fields[0].values
    if not np.all(np.isfinite(u)):
        raise InstabilityError("Non-finite values in the solution", step, t)
    peak = float(np.max(np.abs(u)))
    if peak > BLOWUP_AMPLITUDE:
        raise InstabilityError(f"Solution amplitude {peak:.3e} exceeds {BLOWUP_AMPLITUDE:.0e}", step, t)


class SimulationWorkflow:
    """
    LangGraph-based PDE driver.

    Decision Flow:
    1. Load graph (optionally doubled at the leaves), subdivide
    2. Build the fundamental basis
    3. Sample initial data and coefficients
    4. Route: spectral semigroup, Strang splitting, or wave splitting
    5. Write CSV outputs
    """

    def __init__(self, verbose: bool = True, workers: Optional[int] = None):
        self.verbose = verbose
        self.workers = workers
        self.graph = self._build_graph()

    def _build_graph(self):
        workflow = StateGraph(SimulationState)

        workflow.add_node("load_graph", self._load_graph)
        workflow.add_node("build_basis", self._build_basis)
        workflow.add_node("prepare_fields", self._prepare_fields)
        workflow.add_node("run_spectral", self._run_spectral)
        workflow.add_node("run_splitting", self._run_splitting)
        workflow.add_node("run_wave_splitting", self._run_wave_splitting)
        workflow.add_node("finalize", self._finalize)

        workflow.set_entry_point("load_graph")
        workflow.add_edge("load_graph", "build_basis")
        workflow.add_edge("build_basis", "prepare_fields")

        workflow.add_conditional_edges(
            "prepare_fields",
            self._route_by_equation,
            {
                "spectral": "run_spectral",
                "splitting": "run_splitting",
                "wave_splitting": "run_wave_splitting",
            }
        )

        workflow.add_edge("run_spectral", "finalize")
        workflow.add_edge("run_splitting", "finalize")
        workflow.add_edge("run_wave_splitting", "finalize")
        workflow.add_edge("finalize", END)

        return workflow.compile()

    def _log(self, state: SimulationState, icon: str, message: str):
        entry = _stamp(message)
        state['trace'].append(entry)
        if self.verbose:
            print(f"{icon} {entry}")

    # ==================== NODES ====================

    def _load_graph(self, state: SimulationState) -> SimulationState:
        scenario = state['scenario']
        path = scenario.graph_path()
        self._log(state, "📂", f"Loading graph from {path}")

        metric = load_graph(path)
        mirror = None
        if scenario.double_leaves:
            metric, mirror = double_at_leaves(metric)
            state['trace'].append(
                f"Doubled at leaves: {mirror.original_edge_count} -> {metric.edge_count} edges"
            )

        graph = subdivide(metric)
        state['metric'] = metric
        state['mirror'] = mirror
        state['graph'] = graph
        state['trace'].append(
            f"Subdivided: {graph.vertex_count} vertices, {graph.edge_count} unit edges"
        )
        return state

    def _build_basis(self, state: SimulationState) -> SimulationState:
        self._log(state, "🔍", "Computing fundamental eigenfunctions...")
        basis = build_basis(state['graph'])
        state['basis'] = basis
        state['trace'].append(
            f"Basis: {basis.frequency_count} fundamental frequencies, oddcase = {basis.oddcase}"
        )
        return state

    def _prepare_fields(self, state: SimulationState) -> SimulationState:
        scenario = state['scenario']
        graph = state['graph']
        self._log(state, "🧮", f"Sampling initial data at N = {scenario.N}")

        init, velocity, coef = scenario_fields(scenario, graph)
        mirror = state['mirror']
        if mirror is not None:
            def mirrored(f: SampledField) -> SampledField:
                return SampledField(vertex_average(symmetrize(f.values, graph, mirror), graph))

            init, coef = mirrored(init), mirrored(coef)
            velocity = mirrored(velocity) if velocity is not None else None
            state['trace'].append("Symmetrized initial data and coefficients across the mirror")

        if scenario.equation == "heat" and np.any(coef.values != 0):
            self._log(state, "⚠️", "Heat equation ignores coef.* entries")

        state['init'] = init
        state['velocity'] = velocity
        state['coef'] = coef
        state['scheme'] = self._choose_scheme(scenario, coef)
        state['trace'].append(f"Routed {scenario.equation} to {state['scheme']}")
        return state

    def _run_spectral(self, state: SimulationState) -> SimulationState:
        """Exact semigroup from t = 0 to every output time"""
        scenario = state['scenario']
        basis = state['basis']
        table = mode_table(basis, scenario.N)
        self._log(state, "⚡", f"Exact spectral propagation ({scenario.equation})")

        if scenario.equation == "wave" and scenario.damping:
            return self._run_damped_wave(state)

        c0 = forward(basis, state['init'], self.workers)
        v0 = forward(basis, state['velocity'], self.workers) if scenario.is_wave_type else None

        for i, t in enumerate(scenario.output_times):
            if scenario.equation == "heat":
                u = inverse(basis, propagate_heat(c0, t, scenario.a, table), self.workers)
                v = None
            elif scenario.equation == "schrodinger":
                u = inverse(basis, propagate_schrodinger(c0, t, scenario.a, table), self.workers)
                v = None
            else:
                wave = propagate_wave(WaveState(c0, v0), t, table)
                u = inverse(basis, wave.u, self.workers)
                v = inverse(basis, wave.v, self.workers)
            _check_stable((u,), i, t)
            self._record(state, t, u, v)

        state['steps'] = len(scenario.output_times)
        return state

    def _run_damped_wave(self, state: SimulationState) -> SimulationState:
        scenario = state['scenario']
        basis = state['basis']
        table = mode_table(basis, scenario.N)
        f0 = scenario.damping_threshold

        wave = WaveState(forward(basis, state['init'], self.workers),
                         forward(basis, state['velocity'], self.workers))
        t, step = 0.0, 0
        for target in scenario.output_times:
            count, h = _substeps(target - t, scenario.dt)
            for _ in range(count):
                wave = propagate_wave(wave, h, table)
                wave = WaveState(damping_filter(wave.u, f0, table), damping_filter(wave.v, f0, table))
                step += 1
            t = target
            u = inverse(basis, wave.u, self.workers)
            _check_stable((u,), step, t)
            self._record(state, t, u, inverse(basis, wave.v, self.workers))

        state['steps'] = step
        state['trace'].append(f"Damped wave: f0 = {f0:.6g}, {step} steps")
        return state

    def _run_splitting(self, state: SimulationState) -> SimulationState:
        """Strang splitting for Fisher-KPP and Schrodinger with a potential"""
        scenario = state['scenario']
        basis = state['basis']
        table = mode_table(basis, scenario.N)
        coef = state['coef']
        a = scenario.a

        if scenario.equation == "fisher-kpp":
            self._log(state, "🧬", "Strang splitting: exact logistic flow + heat semigroup")
            pointwise, semigroup = logistic_step, propagate_heat
        else:
            self._log(state, "🌀", f"Strang splitting: {scenario.potential_mode} term + Schrodinger semigroup")
            pointwise = potential_step if scenario.potential_mode == "potential" else source_step
            semigroup = propagate_schrodinger

        def nonlinear(fields, dt):
            return (pointwise(fields[0], coef, dt),)

        def linear(coeffs, h):
            return (semigroup(coeffs[0], h, a, table),)

        fields = (state['init'],)
        fields, steps = self._march(state, fields, nonlinear, linear)
        state['steps'] = steps
        return state

    def _run_wave_splitting(self, state: SimulationState) -> SimulationState:
        """Sine-Gordon: pointwise RK4 (or exact u'' + u = 0) around the wave rotation"""
        scenario = state['scenario']
        basis = state['basis']
        table = mode_table(basis, scenario.N)
        f0 = scenario.damping_threshold

        step_fn = sine_gordon_step if scenario.nonlinearity == "sine" else linear_restoring_step
        self._log(
            state, "🌊",
            f"Wave splitting ({scenario.nonlinearity}), damping "
            + (f"on, f0 = {f0:.6g}" if scenario.damping else "off"),
        )

        def nonlinear(fields, dt):
            return step_fn(fields[0], fields[1], dt)

        def linear(coeffs, h):
            wave = propagate_wave(WaveState(coeffs[0], coeffs[1]), h, table)
            if scenario.damping:
                return damping_filter(wave.u, f0, table), damping_filter(wave.v, f0, table)
            return wave.u, wave.v

        fields = (state['init'], state['velocity'])
        fields, steps = self._march(state, fields, nonlinear, linear)
        state['steps'] = steps
        return state

    def _march(self, state: SimulationState, fields, nonlinear, linear):
        scenario = state['scenario']
        basis = state['basis']
        t, step = 0.0, 0

        for target in scenario.output_times:
            count, h = _substeps(target - t, scenario.dt)
            for _ in range(count):
                fields = strang_step(fields, h, nonlinear, linear, basis, self.workers)
                step += 1
                _check_stable(fields, step, t + h)
                t += h
            t = target
            self._record(state, t, fields[0], fields[1] if len(fields) > 1 else None)

        state['trace'].append(f"Completed {step} Strang steps (h = {scenario.dt})")
        return fields, step

    def _record(self, state: SimulationState, t: float, u: SampledField, v: Optional[SampledField]):
        state['times'].append(t)
        state['fields'].append(u)
        state['velocities'].append(v)
        if self.verbose:
            print(f"   t = {t:.4f}  max|u| = {np.max(np.abs(u.values)):.6g}")

    def _finalize(self, state: SimulationState) -> SimulationState:
        scenario = state['scenario']
        output_dir = state['output_dir']
        if not output_dir:
            state['trace'].append("No output directory; results kept in memory")
            return state

        out = Path(output_dir)
        self._log(state, "💾", f"Writing {len(state['times'])} output times to {out}")

        edge_path: Optional[EdgePath] = None
        if scenario.path:
            edge_path = path_trace(state['graph'], expand_walk(state['graph'], scenario.path))

        for t, u, v in zip(state['times'], state['fields'], state['velocities']):
            name = f"t{t:010.4f}"
            state['written'].append(write_text(out / f"field_{name}.csv", field_table(u, v)))
            if edge_path is not None:
                x, y = path_samples(u.values, edge_path)
                state['written'].append(write_text(out / f"path_{name}.csv", path_table(x, y)))
        return state

    # ==================== DECISION ROUTING ====================

    @staticmethod
    def _choose_scheme(scenario: Scenario, coef: SampledField) -> str:
        if scenario.equation == "sine-gordon":
            return "wave_splitting"
        if scenario.equation == "fisher-kpp":
            return "splitting"
        if scenario.equation == "schrodinger" and np.any(coef.values != 0):
            return "splitting"
        return "spectral"

    def _route_by_equation(self, state: SimulationState) -> str:
        return state['scheme']

    # ==================== PUBLIC API ====================

    def run(self, scenario: Scenario, output_dir: Optional[str] = None) -> SimulationResult:
        if self.verbose:
            print(f"\n{'='*60}")
            print(f"🌐 QUANTUM GRAPH SIMULATION: {scenario.equation}")
            print(f"{'='*60}\n")

        initial_state: SimulationState = {
            "scenario": scenario,
            "output_dir": output_dir,
            "metric": None,
            "graph": None,
            "mirror": None,
            "basis": None,
            "init": None,
            "velocity": None,
            "coef": None,
            "scheme": "",
            "times": [],
            "fields": [],
            "velocities": [],
            "steps": 0,
            "written": [],
            "trace": [],
        }

        final_state = self.graph.invoke(initial_state)

        if self.verbose:
            print(f"\n{'='*60}")
            print(f"✨ Simulation complete: {final_state['steps']} steps")
            print(f"{'='*60}\n")

        return SimulationResult(
            scenario=scenario,
            graph=final_state['graph'],
            basis=final_state['basis'],
            times=final_state['times'],
            fields=final_state['fields'],
            velocities=final_state['velocities'],
            scheme=final_state['scheme'],
            steps=final_state['steps'],
            trace=final_state['trace'],
            written=final_state['written'],
        )


def simulate(
    scenario: Scenario,
    output_dir: Optional[str] = None,
    verbose: bool = False,
    workers: Optional[int] = None,
) -> SimulationResult:
    """Run one scenario; raises InstabilityError on divergence"""
    return SimulationWorkflow(verbose=verbose, workers=workers).run(scenario, output_dir)


# ==================== VALIDATION ====================

class ValidationState(TypedDict):
    graph_path: str
    graph_name: str
    N: int
    N_ortho: int
    double_leaves: bool
    dump_dir: Optional[str]
    graph: Optional[EquilateralGraph]
    basis: Optional[FundamentalBasis]
    orthonormality: list
    inputs: list
    report: Optional[ValidationReport]
    trace: list


class ValidationWorkflow:
    """
    Basis quality tables for one graph file:
    orthonormality over all shifts, then Parseval and round trip for inputs A-D.
    """

    def __init__(self, verbose: bool = True, workers: Optional[int] = None):
        self.verbose = verbose
        self.workers = workers
        self.graph = self._build_graph()

    def _build_graph(self):
        workflow = StateGraph(ValidationState)

        workflow.add_node("load_graph", self._load_graph)
        workflow.add_node("build_basis", self._build_basis)
        workflow.add_node("orthonormality", self._orthonormality)
        workflow.add_node("transform_tables", self._transform_tables)
        workflow.add_node("report", self._report)

        workflow.set_entry_point("load_graph")
        workflow.add_edge("load_graph", "build_basis")
        workflow.add_edge("build_basis", "orthonormality")
        workflow.add_edge("orthonormality", "transform_tables")
        workflow.add_edge("transform_tables", "report")
        workflow.add_edge("report", END)

        return workflow.compile()

    def _log(self, state: ValidationState, icon: str, message: str):
        entry = _stamp(message)
        state['trace'].append(entry)
        if self.verbose:
            print(f"{icon} {entry}")

    def _load_graph(self, state: ValidationState) -> ValidationState:
        self._log(state, "📂", f"Loading graph from {state['graph_path']}")
        metric = load_graph(state['graph_path'])
        if state['double_leaves']:
            metric, _ = double_at_leaves(metric)
        state['graph'] = subdivide(metric)
        return state

    def _build_basis(self, state: ValidationState) -> ValidationState:
        self._log(state, "🔍", "Computing fundamental eigenfunctions...")
        state['basis'] = build_basis(state['graph'])
        return state

    def _orthonormality(self, state: ValidationState) -> ValidationState:
        self._log(state, "📐", f"Gram matrices at N = {state['N_ortho']} for every shift")
        dump = Path(state['dump_dir']) if state['dump_dir'] else None
        state['orthonormality'] = orthonormality_rows(state['basis'], state['N_ortho'], dump)
        return state

    def _transform_tables(self, state: ValidationState) -> ValidationState:
        self._log(state, "⚡", f"Parseval and round trip at N = {state['N']}")
        state['inputs'] = input_rows(state['basis'], state['N'], self.workers)
        return state

    def _report(self, state: ValidationState) -> ValidationState:
        basis = state['basis']
        report = ValidationReport(
            graph_name=state['graph_name'],
            edge_count=basis.edge_count,
            frequency_count=basis.frequency_count,
            N_ortho=state['N_ortho'],
            N=state['N'],
            orthonormality=state['orthonormality'],
            inputs=state['inputs'],
        )
        state['report'] = report
        verdict = "passed" if report.passed else "FAILED: " + "; ".join(report.failures())
        self._log(state, "✅" if report.passed else "❌", f"Validation {verdict}")
        return state

    def run(
        self,
        graph_path,
        N: int = 64,
        N_ortho: int = 16,
        double_leaves: bool = False,
        dump_dir: Optional[str] = None,
    ) -> Tuple[ValidationReport, List[str]]:
        initial_state: ValidationState = {
            "graph_path": str(graph_path),
            "graph_name": Path(graph_path).stem,
            "N": N,
            "N_ortho": N_ortho,
            "double_leaves": double_leaves,
            "dump_dir": dump_dir,
            "graph": None,
            "basis": None,
            "orthonormality": [],
            "inputs": [],
            "report": None,
            "trace": [],
        }
        final_state = self.graph.invoke(initial_state)
        return final_state['report'], final_state['trace']
