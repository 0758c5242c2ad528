"""
Plain-text and CSV emitters for bases, coefficients and fields.

CSV: ',' separator, '.' decimal, header row, 17 significant digits.
"""

from pathlib import Path
from typing import List, Optional

import numpy as np

from qgraph.errors import TransformShapeError
from qgraph.tools.qgfft import SampledField, SpectralCoefficients
from qgraph.tools.spectral_basis import FundamentalBasis


def fmt(value: float) -> str:
    return "%.17g" % value


def _csv(header: List[str], rows: List[List[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


# ==================== TABLES ====================

def export_basis(basis: FundamentalBasis) -> str:
    """One row per (fundamental frequency, edge) with both exponential coefficients"""
    header = ["k", "omega", "edge", "re_gamma", "im_gamma", "re_delta", "im_delta"]
    rows = []
    for k in range(basis.frequency_count):
        for e in range(basis.edge_count):
            g, d = basis.gamma[k, e], basis.delta[k, e]
            rows.append([
                str(k), fmt(basis.frequencies[k]), str(e),
                fmt(g.real), fmt(g.imag), fmt(d.real), fmt(d.imag),
            ])
    return _csv(header, rows)


def coefficient_table(c: SpectralCoefficients) -> str:
    header = ["k", "m", "re", "im"]
    rows = []
    for k in range(c.values.shape[0]):
        for m in range(c.values.shape[1]):
            beta = c.values[k, m]
            rows.append([str(k), str(m), fmt(beta.real), fmt(beta.imag)])
    return _csv(header, rows)


def field_table(field: SampledField, velocity: Optional[SampledField] = None) -> str:
    header = ["edge", "n", "x", "re", "im"]
    if velocity is not None:
        header += ["v_re", "v_im"]
    N = field.N
    rows = []
    for e in range(field.edge_count):
        for n in range(N + 1):
            value = field.values[e, n]
            row = [str(e), str(n), fmt(n / N), fmt(value.real), fmt(value.imag)]
            if velocity is not None:
                v = velocity.values[e, n]
                row += [fmt(v.real), fmt(v.imag)]
            rows.append(row)
    return _csv(header, rows)


def path_table(x: np.ndarray, y: np.ndarray) -> str:
    rows = [[fmt(s), fmt(v.real), fmt(v.imag), fmt(abs(v) ** 2)] for s, v in zip(x, np.asarray(y, dtype=complex))]
    return _csv(["s", "re", "im", "abs2"], rows)


# ==================== READING ====================

def read_field_table(path) -> np.ndarray:
    """
    Load an `edge n re im` table (header row required, ',' or whitespace
    separated, extra columns ignored) into an (E, N+1) complex array.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise TransformShapeError(f"Cannot read field table {path}: {e}") from e

    content = [line for line in text.splitlines() if line.strip() and not line.lstrip().startswith('#')]
    if len(content) < 2:
        raise TransformShapeError(f"{path}: expected a header row and data rows")

    delimiter = "," if "," in content[0] else None
    names = [name.strip() for name in (content[0].split(delimiter) if delimiter else content[0].split())]
    missing = [col for col in ("edge", "n", "re", "im") if col not in names]
    if missing:
        raise TransformShapeError(f"{path}: missing columns {', '.join(missing)}")

    data = np.loadtxt(content[1:], delimiter=delimiter, ndmin=2)
    edge = data[:, names.index("edge")].astype(int)
    n = data[:, names.index("n")].astype(int)
    values = data[:, names.index("re")] + 1j * data[:, names.index("im")]

    shape = (edge.max() + 1, n.max() + 1)
    table = np.full(shape, np.nan, dtype=complex)
    table[edge, n] = values
    if np.isnan(table.real).any():
        raise TransformShapeError(f"{path}: samples missing for some (edge, n) pairs")
    return table
