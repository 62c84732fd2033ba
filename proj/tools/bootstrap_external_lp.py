#!/usr/bin/env python3
"""One-shot external LP cross-check.

Reads an MPS file produced by the mvmilp exporter, solves it with scipy's
HiGHS backend, and prints the optimum. Used once to freeze the regression
constant asserted by the acceptance suite; not a runtime dependency.

Usage: bootstrap_external_lp.py problem.mps
"""
import sys

import numpy as np
from scipy.optimize import linprog


def parse_mps(path):
    rows = {}  # name -> (sense, index) ; objective row handled separately
    row_order = []
    obj_row = None
    cols = {}
    col_order = []
    rhs = {}
    bounds = {}
    binaries = set()
    section = None
    with open(path) as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            head = line.split()
            if line[0] not in " \t":
                section = head[0]
                continue
            if section == "ROWS":
                sense, name = head
                if sense == "N":
                    obj_row = name
                else:
                    rows[name] = sense
                    row_order.append(name)
            elif section == "COLUMNS":
                col, row, val = head
                entry = cols.setdefault(col, {})
                entry[row] = entry.get(row, 0.0) + float(val)
                if col not in col_order:
                    col_order.append(col)
            elif section == "RHS":
                _, row, val = head
                rhs[row] = float(val)
            elif section == "BOUNDS":
                kind = head[0]
                col = head[2]
                val = float(head[3]) if len(head) > 3 else None
                lo, hi = bounds.get(col, (0.0, np.inf))
                if kind == "LO":
                    lo = val
                elif kind == "UP":
                    hi = val
                elif kind == "FX":
                    lo = hi = val
                elif kind == "FR":
                    lo, hi = -np.inf, np.inf
                elif kind == "MI":
                    lo = -np.inf
                elif kind == "BV":
                    lo, hi = 0.0, 1.0
                    binaries.add(col)
                bounds[col] = (lo, hi)
    n = len(col_order)
    col_idx = {c: i for i, c in enumerate(col_order)}
    c = np.zeros(n)
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for rname in row_order:
        sense = rows[rname]
        coef = np.zeros(n)
        for cname, entry in cols.items():
            if rname in entry:
                coef[col_idx[cname]] = entry[rname]
        b = rhs.get(rname, 0.0)
        if sense == "L":
            a_ub.append(coef)
            b_ub.append(b)
        elif sense == "G":
            a_ub.append(-coef)
            b_ub.append(-b)
        else:
            a_eq.append(coef)
            b_eq.append(b)
    for cname, entry in cols.items():
        if obj_row in entry:
            c[col_idx[cname]] = entry[obj_row]
    lbub = [bounds.get(cname, (0.0, np.inf)) for cname in col_order]
    if binaries:
        print("warning: binaries present; solving the LP relaxation",
              file=sys.stderr)
    return c, a_ub, b_ub, a_eq, b_eq, lbub, rhs.get(obj_row, 0.0)


def main():
    if len(sys.argv) != 2:
        print(__doc__)
        return 2
    c, a_ub, b_ub, a_eq, b_eq, lbub, obj_rhs = parse_mps(sys.argv[1])
    res = linprog(
        c,
        A_ub=np.array(a_ub) if a_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.array(a_eq) if a_eq else None,
        b_eq=np.array(b_eq) if b_eq else None,
        bounds=lbub,
        method="highs",
    )
    if not res.success:
        print(f"external solve failed: {res.message}", file=sys.stderr)
        return 1
    # MPS convention: the objective-row RHS is the negated constant.
    print(f"external optimum: {res.fun - obj_rhs:.12f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
