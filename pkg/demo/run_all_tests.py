#!/usr/bin/env python3
"""
🌐 BASIS VALIDATION SWEEP
Runs the orthonormality, Parseval and round-trip tables on every fixture graph
and prints a colored summary. Graphs with leaves are doubled first.
"""

import sys
import time
from pathlib import Path
from typing import List, Tuple

sys.path.insert(0, str(Path(__file__).parent.parent))

from qgraph.errors import QuantumGraphError
from qgraph.tools.metric_graph import double_at_leaves, load_graph, subdivide
from qgraph.tools.spectral_basis import build_basis
from qgraph.tools.validation import ValidationReport, validate_basis

# ANSI color codes for terminal output
RED = '\033[91m'
GREEN = '\033[92m'
BLUE = '\033[94m'
PURPLE = '\033[95m'
CYAN = '\033[96m'
RESET = '\033[0m'
BOLD = '\033[1m'

GRAPHS = Path(__file__).parent / "graphs"


def print_banner(count: int):
    print(f"\n{BOLD}{PURPLE}{'='*80}{RESET}")
    print(f"{BOLD}{PURPLE}🌐 QUANTUM GRAPH FFT - BASIS VALIDATION SWEEP{RESET}")
    print(f"{BOLD}{PURPLE}{'='*80}{RESET}")
    print(f"{CYAN}{count} fixture graphs | N = 16 Gram matrices | N = 64 inputs A-D{RESET}\n")


def print_graph_header(name: str, num: int, total: int, note: str):
    print(f"\n{BOLD}{BLUE}{'─'*80}{RESET}")
    print(f"{BOLD}{BLUE}📄 GRAPH {num}/{total}: {name}{RESET} {note}")
    print(f"{BOLD}{BLUE}{'─'*80}{RESET}")


def print_report(report: ValidationReport, seconds: float):
    color = GREEN if report.passed else RED
    print(f"   unit edges: {report.edge_count}   fundamental frequencies: {report.frequency_count}")
    print(f"   max|diag-1| = {color}{report.max_diag_error:.2e}{RESET}   "
          f"max|offdiag| = {color}{report.max_offdiag:.2e}{RESET}")
    for row in report.inputs:
        print(f"   {row.label}: Parseval {row.parseval_error:.2e}  round trip {row.roundtrip_error:.2e}"
              f"   {CYAN}{row.description}{RESET}")
    status = f"{GREEN}✅ PASS{RESET}" if report.passed else f"{RED}❌ FAIL{RESET}"
    print(f"   {status} ({seconds:.2f} s)")
    for problem in report.failures():
        print(f"      {RED}- {problem}{RESET}")


def print_summary(results: List[Tuple[str, bool]]):
    passed = sum(1 for _, ok in results if ok)
    print(f"\n{BOLD}{PURPLE}{'='*80}{RESET}")
    print(f"{BOLD}{PURPLE}📊 SUMMARY{RESET}")
    print(f"{BOLD}{PURPLE}{'='*80}{RESET}\n")
    print(f"  {GREEN}Passed: {passed}{RESET}")
    print(f"  {RED}Failed: {len(results) - passed}{RESET}")
    for name, ok in results:
        print(f"  {'✓' if ok else '✗'} {name}")
    print()


def main() -> int:
    files = sorted(GRAPHS.glob("*.graph"))
    print_banner(len(files))
    results = []

    for num, path in enumerate(files, 1):
        metric = load_graph(path)
        note = ""
        if min(metric.degrees()) < 2:
            try:
                metric, _ = double_at_leaves(metric)
                note = f"{CYAN}(doubled at leaves){RESET}"
            except QuantumGraphError as e:
                print_graph_header(path.stem, num, len(files), f"{RED}(skipped){RESET}")
                print(f"   ⚠️  {e}")
                continue
        print_graph_header(path.stem, num, len(files), note)

        start = time.perf_counter()
        report = validate_basis(build_basis(subdivide(metric)), graph_name=path.stem)
        print_report(report, time.perf_counter() - start)
        results.append((path.stem, report.passed))

    print_summary(results)
    return 0 if all(ok for _, ok in results) else 1


if __name__ == "__main__":
    sys.exit(main())
