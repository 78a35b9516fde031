#!/usr/bin/env python3
"""Re-solve exported carry-out models with scipy and compare against brute force.

For random small DAGs, every window length and every formulation, the model
written by `dagrta dump-model --format mps` is parsed here, solved with
scipy.optimize.milp, and its optimum compared with an exhaustive search over
execution times of the unrestricted ASAP schedule.
"""
import argparse
import itertools
import json
import os
import random
import subprocess
import sys
import tempfile

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp


def parse_mps(text):
    rows, row_sense, objective, cols, integer = [], {}, None, {}, set()
    coef, rhs, lo, hi = {}, {}, {}, {}
    maximize = False
    section, in_int = None, False
    for raw in text.splitlines():
        if not raw.strip() or raw.startswith("*"):
            continue
        if not raw[0].isspace():
            head = raw.split()
            section = head[0]
            if section == "OBJSENSE" and len(head) > 1:
                maximize = head[1] == "MAX"
            continue
        f = raw.split()
        if section == "OBJSENSE":
            maximize = f[0] == "MAX"
        elif section == "ROWS":
            if f[0] == "N":
                objective = f[1]
            else:
                row_sense[f[1]] = f[0]
                rows.append(f[1])
        elif section == "COLUMNS":
            if len(f) >= 3 and f[1] == "'MARKER'":
                in_int = f[2] == "'INTORG'"
                continue
            name = f[0]
            if name not in cols:
                cols[name] = len(cols)
                lo[name], hi[name] = 0.0, np.inf
            if in_int:
                integer.add(name)
            for r, v in zip(f[1::2], f[2::2]):
                coef[(r, name)] = float(v)
        elif section == "RHS":
            for r, v in zip(f[1::2], f[2::2]):
                rhs[r] = float(v)
        elif section == "BOUNDS":
            kind, name = f[0], f[2]
            value = float(f[3]) if len(f) > 3 else None
            if kind == "LO":
                lo[name] = value
            elif kind == "UP":
                hi[name] = value
            elif kind == "FX":
                lo[name] = hi[name] = value
            elif kind == "BV":
                lo[name], hi[name] = 0.0, 1.0
                integer.add(name)
            elif kind == "MI":
                lo[name] = -np.inf
            elif kind == "PL":
                hi[name] = np.inf
            elif kind in ("LI", "UI"):
                integer.add(name)
                (lo if kind == "LI" else hi)[name] = value
    n = len(cols)
    c = np.zeros(n)
    a = np.zeros((len(rows), n))
    for (r, name), v in coef.items():
        if r == objective:
            c[cols[name]] = v
        else:
            a[rows.index(r), cols[name]] = v
    lb = np.full(len(rows), -np.inf)
    ub = np.full(len(rows), np.inf)
    for i, r in enumerate(rows):
        b = rhs.get(r, 0.0)
        if row_sense[r] in ("L", "E"):
            ub[i] = b
        if row_sense[r] in ("G", "E"):
            lb[i] = b
    names = sorted(cols, key=cols.get)
    return {
        "c": -c if maximize else c,
        "sign": -1.0 if maximize else 1.0,
        "A": a,
        "lb": lb,
        "ub": ub,
        "bounds": Bounds([lo[k] for k in names], [hi[k] for k in names]),
        "integrality": np.array([1 if k in integer else 0 for k in names]),
    }


def solve(model):
    cons = [LinearConstraint(model["A"], model["lb"], model["ub"])] if len(model["A"]) else []
    res = milp(model["c"], constraints=cons, bounds=model["bounds"], integrality=model["integrality"])
    if not res.success:
        raise RuntimeError(res.message)
    return int(round(model["sign"] * res.fun))


def brute_force(wcets, edges, delta):
    preds = [[] for _ in wcets]
    for a, b in edges:
        preds[b].append(a)
    order = topological(len(wcets), edges)
    best = 0
    for x in itertools.product(*(range(c + 1) for c in wcets)):
        start = [0] * len(wcets)
        for v in order:
            start[v] = max((start[p] + x[p] for p in preds[v]), default=0)
        best = max(best, sum(max(0, min(start[v] + x[v], delta) - start[v]) for v in range(len(wcets))))
    return best


def topological(n, edges):
    indeg = [0] * n
    succ = [[] for _ in range(n)]
    for a, b in edges:
        succ[a].append(b)
        indeg[b] += 1
    ready = [v for v in range(n) if indeg[v] == 0]
    out = []
    while ready:
        v = ready.pop()
        out.append(v)
        for s in succ[v]:
            indeg[s] -= 1
            if indeg[s] == 0:
                ready.append(s)
    return out


def span(wcets, edges):
    preds = [[] for _ in wcets]
    for a, b in edges:
        preds[b].append(a)
    finish = [0] * len(wcets)
    for v in topological(len(wcets), edges):
        finish[v] = max((finish[p] for p in preds[v]), default=0) + wcets[v]
    return max(finish, default=0)


def random_dag(rng, n_max, wcet_max, p):
    n = rng.randint(1, n_max)
    order = list(range(n))
    rng.shuffle(order)
    edges = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    wcets = [rng.randint(1, wcet_max) for _ in range(n)]
    return wcets, sorted(edges)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("cli", help="path to the dagrta executable")
    ap.add_argument("--dags", type=int, default=40)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    checked = mismatches = 0
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "set.json")
        for _ in range(args.dags):
            wcets, edges = random_dag(rng, 6, 3, 0.4)
            L = span(wcets, edges)
            doc = {
                "tasks": [{
                    "period": max(L, 1),
                    "deadline": max(L, 1),
                    "vertices": [{"wcet": c} for c in wcets],
                    "edges": [list(e) for e in edges],
                }],
                "processors": 2,
            }
            with open(path, "w") as f:
                json.dump(doc, f)
            for delta in range(0, L + 1):
                expect = brute_force(wcets, edges, delta)
                for form in ("edge", "path", "windowed"):
                    text = subprocess.run(
                        [args.cli, "dump-model", path, "--delta", str(delta), "--format", "mps", "--formulation", form],
                        check=True, capture_output=True, text=True).stdout
                    got = solve(parse_mps(text))
                    checked += 1
                    if got != expect:
                        mismatches += 1
                        print(f"mismatch: wcets={wcets} edges={edges} delta={delta} {form}: scipy {got}, brute force {expect}")
    print(f"{checked} exported models re-solved, {mismatches} mismatches")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
