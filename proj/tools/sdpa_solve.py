#!/usr/bin/env python3
"""Solve an SDPA sparse (.dat-s) problem with cvxpy and write the solution.

Usage: sdpa_solve.py problem.dat-s solution.txt

Output: status line, objective line (c'x, without any constant), then one
variable value per line.
"""
import sys

import cvxpy as cp
import numpy as np
import scipy.sparse as sp


def read_sdpa(path):
    header, body = [], []
    with open(path) as fh:
        for line in fh:
            if not header and line[:1] in ('"', '*'):
                continue
            if len(header) < 4:
                for ch in ",{}()":
                    line = line.replace(ch, " ")
                header.append(line.split())
            elif line.strip():
                body.append(line.split())
    while len(header) < 4:
        header.append([])
    m = int(header[0][0])
    nblocks = int(header[1][0])
    sizes = [int(v) for v in header[2][:nblocks]]
    c = np.array([float(v) for v in header[3][:m]])
    entries = [(int(a), int(b), int(i), int(j), float(v)) for a, b, i, j, v in body]
    return m, sizes, c, entries


def main():
    src, dst = sys.argv[1], sys.argv[2]
    m, sizes, c, entries = read_sdpa(src)
    x = cp.Variable(m) if m > 0 else None
    constraints = []
    per_block = {k: [] for k in range(1, len(sizes) + 1)}
    for e in entries:
        per_block[e[1]].append(e)
    for blk, size in enumerate(sizes, start=1):
        dim = abs(size)
        mats = {}
        for mat, _, i, j, v in per_block[blk]:
            rows, cols, vals = mats.setdefault(mat, ([], [], []))
            rows.append(i - 1)
            cols.append(j - 1)
            vals.append(v)
            if i != j:
                rows.append(j - 1)
                cols.append(i - 1)
                vals.append(v)
        def matrix(k):
            if k not in mats:
                return np.zeros((dim, dim))
            r, cc, vv = mats[k]
            return sp.coo_matrix((vv, (r, cc)), shape=(dim, dim)).toarray()
        expr = -matrix(0)
        terms = [matrix(k) * x[k - 1] for k in mats if k > 0]
        if terms:
            expr = expr + sum(terms)
        if size < 0:
            constraints.append(cp.diag(expr) >= 0 if terms else cp.Constant(np.diag(expr)) >= 0)
        else:
            constraints.append((expr + expr.T) / 2 >> 0)
    objective = cp.Minimize(c @ x) if m > 0 else cp.Minimize(0)
    prob = cp.Problem(objective, constraints)
    try:
        prob.solve(solver=cp.CLARABEL)
    except cp.error.SolverError:
        prob.solve(solver=cp.SCS, eps=1e-8)
    status = {
        cp.OPTIMAL: "optimal",
        cp.OPTIMAL_INACCURATE: "inaccurate",
        cp.INFEASIBLE: "infeasible",
        cp.INFEASIBLE_INACCURATE: "infeasible",
        cp.UNBOUNDED: "unbounded",
        cp.UNBOUNDED_INACCURATE: "unbounded",
    }.get(prob.status, "failed")
    with open(dst, "w") as fh:
        fh.write(status + "\n")
        fh.write(repr(float(prob.value) if prob.value is not None and np.isfinite(prob.value) else 0.0) + "\n")
        if m > 0:
            vals = x.value if x.value is not None else np.zeros(m)
            for v in vals:
                fh.write(repr(float(v)) + "\n")


if __name__ == "__main__":
    main()
