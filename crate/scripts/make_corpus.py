#!/usr/bin/env python3
"""Writes the benchmark corpus of OpenQASM 2.0 circuits.

Families: Bernstein-Vazirani (all-ones key), GHZ, QFT, one-layer QAOA on
Sherrington-Kirkpatrick instances, Cuccaro ripple-carry adders, Toffoli
cascades, transverse-field Ising on a ring, and seeded random circuits.
Toffolis are decomposed into the standard 6-CNOT network so every file uses
only qelib1 one-qubit gates, cx and measure.
"""
import math
import os
import random

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "corpus")


class Circ:
    def __init__(self, name, n):
        self.name, self.n, self.lines = name, n, []

    def g(self, op, *qs, params=None):
        p = "" if params is None else "(" + ",".join(repr(float(x)) for x in params) + ")"
        self.lines.append(f"{op}{p} " + ",".join(f"q[{q}]" for q in qs) + ";")

    def cx(self, a, b):
        self.g("cx", a, b)

    def ccx(self, a, b, c):
        g = self.g
        g("h", c); self.cx(b, c); g("tdg", c); self.cx(a, c); g("t", c)
        self.cx(b, c); g("tdg", c); self.cx(a, c); g("t", b); g("t", c); g("h", c)
        self.cx(a, b); g("t", a); g("tdg", b); self.cx(a, b)

    def cp(self, lam, a, b):
        self.g("u1", a, params=[lam / 2]); self.cx(a, b)
        self.g("u1", b, params=[-lam / 2]); self.cx(a, b)
        self.g("u1", b, params=[lam / 2])

    def measure_all(self):
        for q in range(self.n):
            self.lines.append(f"measure q[{q}] -> c[{q}];")

    def write(self):
        head = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{self.n}];", f"creg c[{self.n}];"]
        with open(os.path.join(OUT, self.name + ".qasm"), "w") as f:
            f.write("\n".join(head + self.lines) + "\n")


def bv(n):
    c = Circ(f"bv_{n}", n)
    c.g("x", n - 1)
    for q in range(n):
        c.g("h", q)
    for q in range(n - 1):
        c.cx(q, n - 1)
    for q in range(n - 1):
        c.g("h", q)
    c.measure_all()
    return c


def ghz(n):
    c = Circ(f"ghz_{n}", n)
    c.g("h", 0)
    for q in range(1, n):
        c.cx(q - 1, q)
    c.measure_all()
    return c


def qft(n):
    c = Circ(f"qft_{n}", n)
    for j in range(n):
        c.g("h", j)
        for k in range(j + 1, n):
            c.cp(math.pi / 2 ** (k - j), k, j)
    c.measure_all()
    return c


def qaoa_sk(n, seed):
    rng = random.Random(seed)
    c = Circ(f"qaoa_sk_{n}", n)
    for q in range(n):
        c.g("h", q)
    for i in range(n):
        for j in range(i + 1, n):
            c.cx(i, j)
            c.g("rz", j, params=[0.8 * rng.choice([-1, 1])])
            c.cx(i, j)
    for q in range(n):
        c.g("rx", q, params=[1.4])
    c.measure_all()
    return c


def cuccaro(bits):
    # cin, a0..a_{k-1}, b0..b_{k-1}, cout
    n = 2 * bits + 2
    a = [1 + i for i in range(bits)]
    b = [1 + bits + i for i in range(bits)]
    cin, cout = 0, n - 1
    c = Circ(f"adder_{bits}bit", n)
    for i in range(bits):
        c.g("x", a[i]) if i % 2 == 0 else c.g("x", b[i])

    def maj(x, y, z):
        c.cx(z, y); c.cx(z, x); c.ccx(x, y, z)

    def uma(x, y, z):
        c.ccx(x, y, z); c.cx(z, x); c.cx(x, y)

    carry = [cin] + a[:-1]
    for i in range(bits):
        maj(carry[i], b[i], a[i])
    c.cx(a[-1], cout)
    for i in reversed(range(bits)):
        uma(carry[i], b[i], a[i])
    c.measure_all()
    return c


def toffoli_cascade(n, reps):
    c = Circ(f"toffoli_{n}_r{reps}", n)
    for q in range(n):
        c.g("h", q)
    for _ in range(reps):
        for i in range(n - 2):
            c.ccx(i, i + 1, i + 2)
        for i in reversed(range(n - 2)):
            c.ccx(i + 2, i, i + 1)
    c.measure_all()
    return c


def ising(n, steps):
    c = Circ(f"ising_{n}_s{steps}", n)
    for q in range(n):
        c.g("h", q)
    for _ in range(steps):
        for start in (0, 1):
            for i in range(start, n, 2):
                j = (i + 1) % n
                if i == j:
                    continue
                c.cx(i, j); c.g("rz", j, params=[0.3]); c.cx(i, j)
        for q in range(n):
            c.g("rx", q, params=[0.2])
    c.measure_all()
    return c


def rand_circ(n, cnots, seed):
    rng = random.Random(seed)
    c = Circ(f"random_{n}_{cnots}", n)
    ones = ["h", "t", "s", "x", "tdg"]
    for _ in range(cnots):
        if rng.random() < 0.5:
            c.g(rng.choice(ones), rng.randrange(n))
        a, b = rng.sample(range(n), 2)
        c.cx(a, b)
    c.measure_all()
    return c


def main():
    os.makedirs(OUT, exist_ok=True)
    for f in os.listdir(OUT):
        if f.endswith(".qasm"):
            os.remove(os.path.join(OUT, f))
    circuits = [
        bv(8), bv(12), bv(20),
        ghz(5), ghz(12), ghz(20),
        qft(6), qft(8), qft(10), qft(12), qft(14), qft(16), qft(20),
        qaoa_sk(6, 1), qaoa_sk(8, 2), qaoa_sk(10, 3), qaoa_sk(12, 4),
        qaoa_sk(14, 5), qaoa_sk(16, 6), qaoa_sk(20, 7),
        cuccaro(4), cuccaro(5), cuccaro(8), cuccaro(9),
        toffoli_cascade(7, 2), toffoli_cascade(10, 2), toffoli_cascade(16, 1),
        toffoli_cascade(20, 1),
        ising(10, 6), ising(16, 5), ising(20, 4),
        rand_circ(6, 40, 11), rand_circ(10, 150, 12), rand_circ(12, 200, 13),
        rand_circ(14, 150, 14), rand_circ(16, 250, 15), rand_circ(18, 300, 16),
        rand_circ(20, 400, 17),
    ]
    for c in circuits:
        c.write()
    print(f"wrote {len(circuits)} circuits to {os.path.normpath(OUT)}")


if __name__ == "__main__":
    main()
