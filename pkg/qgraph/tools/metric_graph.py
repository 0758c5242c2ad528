"""
Metric Graph Tool

Graph handling for the quantum graph transforms:
- Parse / serialize the line-oriented graph file format
- Subdivide integer-length edges into unit edges
- Double trees (or any graph with leaves) at the leaves
- Trace walks through the unit-edge graph for 1-D output
"""

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import networkx as nx
import numpy as np

from qgraph.errors import GraphFormatError, GraphStructureError


# ==================== GRAPH TYPES ====================

@dataclass(frozen=True)
class MetricGraph:
    """
    User-facing graph: vertices 0..vertex_count-1, edges with positive
    integer lengths. Edges are stored as (min, max, length) in input order.
    """
    vertex_count: int
    edges: Tuple[Tuple[int, int, int], ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise GraphStructureError("Graph has no vertices")

        normalized = []
        seen = set()
        for u, v, length in self.edges:
            if u == v:
                raise GraphStructureError(f"Self-loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise GraphStructureError(
                    f"Edge ({u}, {v}) references a vertex outside 0..{self.vertex_count - 1}"
                )
            if length < 1:
                raise GraphStructureError(f"Edge ({u}, {v}) has non-positive length {length}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphStructureError(f"Duplicate edge {key}")
            seen.add(key)
            normalized.append((key[0], key[1], int(length)))

        object.__setattr__(self, "edges", tuple(normalized))

        if not nx.is_connected(self.to_networkx()):
            raise GraphStructureError("Graph is not connected")

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        for u, v, length in self.edges:
            graph.add_edge(u, v, length=length)
        return graph

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def total_length(self) -> int:
        return sum(length for _, _, length in self.edges)

    def degrees(self) -> List[int]:
        graph = self.to_networkx()
        return [graph.degree[v] for v in range(self.vertex_count)]

    def leaves(self) -> List[int]:
        return [v for v, d in enumerate(self.degrees()) if d == 1]


@dataclass(frozen=True)
class EquilateralGraph:
    """
    Unit-edge graph produced by subdivision; the computational domain.

    directed_edges are (tail, head) with tail < head. chains[i] lists the
    vertices of original edge i from its smaller to its larger endpoint;
    origin[e] is (original edge, position along that chain) for unit edge e.
    """
    vertex_count: int
    directed_edges: Tuple[Tuple[int, int], ...]
    chains: Tuple[Tuple[int, ...], ...] = ()
    origin: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        for tail, head in self.directed_edges:
            if not tail < head:
                raise GraphStructureError(f"Directed edge ({tail}, {head}) must have tail < head")
        if len(set(self.directed_edges)) != len(self.directed_edges):
            raise GraphStructureError("Equilateral graph has repeated edges")

    @property
    def edge_count(self) -> int:
        return len(self.directed_edges)

    @cached_property
    def degree(self) -> Tuple[int, ...]:
        counts = [0] * self.vertex_count
        for tail, head in self.directed_edges:
            counts[tail] += 1
            counts[head] += 1
        return tuple(counts)

    @cached_property
    def _edge_lookup(self) -> Dict[Tuple[int, int], int]:
        return {edge: index for index, edge in enumerate(self.directed_edges)}

    @cached_property
    def _chain_lookup(self) -> Dict[Tuple[int, int], Tuple[int, ...]]:
        return {(chain[0], chain[-1]): chain for chain in self.chains}

    def edge_index(self, a: int, b: int) -> Tuple[int, bool]:
        """
        Unit edge joining a and b, and whether a -> b follows its orientation.
        """
        key = (min(a, b), max(a, b))
        if key not in self._edge_lookup:
            raise GraphStructureError(f"Vertices {a} and {b} are not adjacent")
        return self._edge_lookup[key], a < b

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from(self.directed_edges)
        return graph

    def adjacency_matrix(self) -> np.ndarray:
        return nx.to_numpy_array(self.to_networkx(), nodelist=range(self.vertex_count))

    def require_min_degree(self, minimum: int = 2):
        low = [v for v, d in enumerate(self.degree) if d < minimum]
        if low:
            raise GraphStructureError(
                f"All vertices must have degree at least {minimum}; "
                f"vertices {low[:10]} do not (double the graph at its leaves first)"
            )


@dataclass(frozen=True)
class EdgePath:
    """Walk through unit edges: (edge index, forward orientation) per segment"""
    segments: Tuple[Tuple[int, bool], ...]
    vertices: Tuple[int, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.segments)


@dataclass(frozen=True)
class MirrorMap:
    """
    Vertex and edge correspondence between a graph and its glued copy.

    vertex_map[v] is the mirror of original vertex v (leaves map to
    themselves); edge_map[i] is the mirror of original edge i.
    """
    original_vertex_count: int
    original_edge_count: int
    vertex_map: Tuple[int, ...]
    edge_map: Tuple[int, ...]


# ==================== PARSING ====================

def parse_graph(text: str) -> MetricGraph:
    """
    Parse graph file content.

    Format: '#' starts a comment; first content line 'nv <count>';
    every further line 'u v length' with 0-based ids.
    """
    vertex_count = None
    edges = []

    for line_num, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue

        parts = line.split()

        if vertex_count is None:
            if len(parts) != 2 or parts[0] != "nv":
                raise GraphFormatError(f"Expected 'nv <vertex_count>', got '{line}'", line_num)
            try:
                vertex_count = int(parts[1])
            except ValueError:
                raise GraphFormatError(f"Invalid vertex count '{parts[1]}'", line_num)
            if vertex_count < 0:
                raise GraphFormatError("Vertex count must be nonnegative", line_num)
            continue

        if len(parts) != 3:
            raise GraphFormatError(f"Expected 'u v length', got '{line}'", line_num)
        try:
            u, v, length = (int(p) for p in parts)
        except ValueError:
            raise GraphFormatError(f"Non-integer field in '{line}'", line_num)
        if length < 1:
            raise GraphFormatError(f"Edge length must be a positive integer, got {length}", line_num)
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise GraphFormatError(f"Vertex id out of range 0..{vertex_count - 1}", line_num)
        if u == v:
            raise GraphStructureError(f"Line {line_num}: self-loop at vertex {u}")
        edges.append((u, v, length))

    if vertex_count is None:
        raise GraphFormatError("Missing 'nv <vertex_count>' header")

    return MetricGraph(vertex_count=vertex_count, edges=tuple(edges))


def serialize_graph(g: MetricGraph) -> str:
    lines = [f"nv {g.vertex_count}"]
    for u, v, length in sorted(g.edges):
        lines.append(f"{u} {v} {length}")
    return "\n".join(lines) + "\n"


def load_graph(path) -> MetricGraph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


# ==================== CONSTRUCTIONS ====================

def subdivide(g: MetricGraph) -> EquilateralGraph:
    """
    Replace each edge of length L by a path of L unit edges.

    Inserted vertices are numbered after the original ones, in edge order
    and then position order from the smaller endpoint to the larger.
    """
    next_id = g.vertex_count
    directed = []
    chains = []
    origin = []

    for index, (a, b, length) in enumerate(g.edges):
        inner = list(range(next_id, next_id + length - 1))
        next_id += length - 1
        chain = (a, *inner, b)
        chains.append(chain)
        for position in range(length):
            s, t = chain[position], chain[position + 1]
            directed.append((min(s, t), max(s, t)))
            origin.append((index, position))

    return EquilateralGraph(
        vertex_count=next_id,
        directed_edges=tuple(directed),
        chains=tuple(chains),
        origin=tuple(origin),
    )


def double_at_leaves(g: MetricGraph) -> Tuple[MetricGraph, MirrorMap]:
    """
    Glue a mirror copy of g to itself at every degree-1 vertex.

    Symmetric data on the result satisfies Neumann conditions at the
    former leaves, which now have degree 2.
    """
    leaves = set(g.leaves())
    if not leaves:
        raise GraphStructureError("Graph has no leaves; doubling is unnecessary")

    vertex_map = []
    next_id = g.vertex_count
    for v in range(g.vertex_count):
        if v in leaves:
            vertex_map.append(v)
        else:
            vertex_map.append(next_id)
            next_id += 1

    mirrored = []
    for u, v, length in g.edges:
        if u in leaves and v in leaves:
            raise GraphStructureError(
                f"Edge ({u}, {v}) joins two leaves; its double would be a multigraph"
            )
        mirrored.append((vertex_map[u], vertex_map[v], length))

    doubled = MetricGraph(vertex_count=next_id, edges=tuple(g.edges) + tuple(mirrored))
    mirror = MirrorMap(
        original_vertex_count=g.vertex_count,
        original_edge_count=g.edge_count,
        vertex_map=tuple(vertex_map),
        edge_map=tuple(range(g.edge_count, 2 * g.edge_count)),
    )
    return doubled, mirror


def unit_edge_mirror(eq: EquilateralGraph, mirror: MirrorMap) -> Tuple[Tuple[int, bool], ...]:
    """
    For every unit edge of a subdivided doubled graph: its mirror unit edge
    and whether the mirror runs against it.
    """
    sigma = list(range(eq.vertex_count))
    for v, w in enumerate(mirror.vertex_map):
        sigma[v] = w
        sigma[w] = v

    for i, j in enumerate(mirror.edge_map):
        chain_i, chain_j = eq.chains[i], eq.chains[j]
        # chain_i runs a -> b; line chain_j up so it runs sigma(a) -> sigma(b)
        if chain_j[0] != sigma[chain_i[0]]:
            chain_j = chain_j[::-1]
        for p in range(1, len(chain_i) - 1):
            sigma[chain_i[p]] = chain_j[p]
            sigma[chain_j[p]] = chain_i[p]

    result = []
    for tail, head in eq.directed_edges:
        index, forward = eq.edge_index(sigma[tail], sigma[head])
        result.append((index, not forward))
    return tuple(result)


def symmetrize(values: np.ndarray, eq: EquilateralGraph, mirror: MirrorMap) -> np.ndarray:
    """
    Copy per-edge samples from the original half onto the mirrored half.
    """
    out = np.array(values, copy=True)
    pairs = unit_edge_mirror(eq, mirror)
    for e, (origin_edge, _) in enumerate(eq.origin):
        if origin_edge >= mirror.original_edge_count:
            continue
        target, reversed_ = pairs[e]
        out[target] = out[e][::-1] if reversed_ else out[e]
    return out


# ==================== PATHS ====================

def path_trace(g: EquilateralGraph, vertices: Sequence[int]) -> EdgePath:
    """Unit edges visited by a vertex walk, oriented so the walk is continuous"""
    if len(vertices) < 2:
        raise GraphStructureError("A path needs at least two vertices")

    segments = []
    for a, b in zip(vertices[:-1], vertices[1:]):
        segments.append(g.edge_index(a, b))
    return EdgePath(segments=tuple(segments), vertices=tuple(vertices))


def expand_walk(g: EquilateralGraph, metric_vertices: Sequence[int]) -> List[int]:
    """
    Turn a walk through original vertices into a walk through unit-edge
    vertices, passing every vertex inserted by subdivision.
    """
    if len(metric_vertices) < 2:
        raise GraphStructureError("A path needs at least two vertices")

    walk = [metric_vertices[0]]
    for a, b in zip(metric_vertices[:-1], metric_vertices[1:]):
        chain = g._chain_lookup.get((min(a, b), max(a, b)))
        if chain is None:
            raise GraphStructureError(f"Vertices {a} and {b} are not joined by an edge")
        if a > b:
            chain = chain[::-1]
        walk.extend(chain[1:])
    return walk


def path_samples(values: np.ndarray, path: EdgePath) -> Tuple[np.ndarray, np.ndarray]:
    """
    Concatenate edge samples along a path.

    Returns arc-length positions and values; the shared sample at each
    junction appears once.
    """
    samples_per_edge = values.shape[1] - 1
    xs, ys = [], []
    for s, (edge, forward) in enumerate(path.segments):
        row = values[edge] if forward else values[edge][::-1]
        start = 0 if s == 0 else 1
        xs.append(s + np.arange(start, samples_per_edge + 1) / samples_per_edge)
        ys.append(row[start:])
    return np.concatenate(xs), np.concatenate(ys)
