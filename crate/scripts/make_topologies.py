#!/usr/bin/env python3
"""Writes the builtin device coupling graphs used as committed fixtures.

tokyo      IBM Q Tokyo, 20 qubits: 4x5 grid plus the crossed diagonals in
           alternating plaquettes (43 couplers), as published in the
           IBM Q device gallery and reproduced in the SABRE routing work.
sycamore53 Google Sycamore: the 54-qubit diamond lattice (Cirq's
           `Sycamore` grid string) with qubit (0,5) removed, giving the
           53-qubit device used in the 2019 supremacy experiment.
aspen32    Rigetti Aspen-9 style: four octagon rings in a row, neighbouring
           octagons joined by two couplers (32 qubits, 38 couplers).
"""
import json
import os
import sys

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "data", "topologies")


def tokyo():
    edges = []
    rows, cols = 4, 5
    idx = lambda r, c: r * cols + c
    for r in range(rows):
        for c in range(cols - 1):
            edges.append((idx(r, c), idx(r, c + 1)))
    for r in range(rows - 1):
        for c in range(cols):
            edges.append((idx(r, c), idx(r + 1, c)))
    diagonals = [(1, 7), (2, 6), (3, 9), (4, 8), (5, 11), (6, 10), (7, 13),
                 (8, 12), (11, 17), (12, 16), (13, 19), (14, 18)]
    edges += diagonals
    return 20, edges


SYCAMORE = """\
-----AB---
----ABCD--
---ABCDEF-
--ABCDEFGH
-ABCDEFGHI
ABCDEFGHI-
-CDEFGHI--
--EFGHI---
---GHI----
----I-----
"""


def sycamore53():
    cells = []
    for r, line in enumerate(SYCAMORE.splitlines()):
        for c, ch in enumerate(line):
            if ch != "-":
                cells.append((r, c))
    cells.remove((0, 5))
    index = {cell: i for i, cell in enumerate(cells)}
    edges = []
    for (r, c), i in index.items():
        for dr, dc in ((0, 1), (1, 0)):
            j = index.get((r + dr, c + dc))
            if j is not None:
                edges.append((i, j))
    return len(cells), edges


def aspen32():
    edges = []
    for k in range(4):
        base = 8 * k
        for i in range(8):
            edges.append((base + i, base + (i + 1) % 8))
        if k < 3:
            nxt = 8 * (k + 1)
            edges.append((base + 1, nxt + 6))
            edges.append((base + 2, nxt + 5))
    return 32, edges


def write(name, n, edges):
    edges = sorted((min(a, b), max(a, b)) for a, b in edges)
    assert len(set(edges)) == len(edges)
    doc = {"name": name, "num_qubits": n, "edges": [list(e) for e in edges]}
    with open(os.path.join(OUT, name + ".json"), "w") as f:
        json.dump(doc, f, indent=None, separators=(",", ":"))
        f.write("\n")
    print(name, n, len(edges), file=sys.stderr)


if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    write("tokyo", *tokyo())
    write("sycamore53", *sycamore53())
    write("aspen32", *aspen32())
