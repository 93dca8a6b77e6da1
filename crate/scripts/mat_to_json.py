#!/usr/bin/env python3
"""Convert a state-space benchmark stored as a MATLAB .mat file into the
native JSON model format read by ffmor.

The file must hold matrices named A, B and C (dense or sparse) and may hold
D; a missing D is taken as zero. Complex entries are written as [re, im]
pairs.

    python3 scripts/mat_to_json.py iss.mat iss.json
    FFMOR_ISS_MODEL=iss.json cargo test -p ffmor --test acceptance
"""

import argparse
import json
import sys

import numpy as np
import scipy.io
import scipy.sparse


def dense(x):
    if scipy.sparse.issparse(x):
        x = x.toarray()
    return np.atleast_2d(np.asarray(x))


def rows(m, real):
    if real:
        return [[float(v) for v in row] for row in m.real]
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("mat")
    ap.add_argument("out")
    ap.add_argument("--discrete", action="store_true", help="tag the model as discrete-time")
    args = ap.parse_args()

    data = scipy.io.loadmat(args.mat)
    missing = [k for k in ("A", "B", "C") if k not in data]
    if missing:
        sys.exit(f"{args.mat}: missing matrices {', '.join(missing)}")
    a, b, c = (dense(data[k]) for k in ("A", "B", "C"))
    d = dense(data["D"]) if "D" in data else np.zeros((c.shape[0], b.shape[1]))
    n, m, p = a.shape[0], b.shape[1], c.shape[0]
    for name, mat, shape in (("A", a, (n, n)), ("B", b, (n, m)), ("C", c, (p, n)), ("D", d, (p, m))):
        if mat.shape != shape:
            sys.exit(f"{name} is {mat.shape[0]}x{mat.shape[1]}, expected {shape[0]}x{shape[1]}")

    real = all(not np.iscomplexobj(x) or not np.any(x.imag) for x in (a, b, c, d))
    model = {
        "n": n,
        "m": m,
        "p": p,
        "time_domain": "discrete" if args.discrete else "continuous",
        "scalar_field": "real" if real else "complex",
        "A": rows(a, real),
        "B": rows(b, real),
        "C": rows(c, real),
        "D": rows(d, real),
    }
    with open(args.out, "w") as f:
        json.dump(model, f, indent=1)
        f.write("\n")
    print(f"{args.out}: n={n} m={m} p={p} {'real' if real else 'complex'}")


if __name__ == "__main__":
    main()
