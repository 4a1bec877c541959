"""Smoke test for the `glt` extension module.

Build and install first:
    pip install --no-build-isolation ./crates/python
"""

import json
import math
import sys

import glt


def check(cond, msg):
    if not cond:
        print("FAIL", msg)
        sys.exit(1)
    print("ok  ", msg)


def main():
    lines = glt.list_cases()
    check(any(l.startswith("fd_t1 | a(x)(2-2cos(theta)) | alpha=1") for l in lines), "registry listing")

    lap = glt.Case("fd_t1")
    vals = lap.spectrum(4)
    exact = [2 - 2 * math.cos(k * math.pi / 5) for k in range(1, 5)]
    check(max(abs(a - b) for a, b in zip(vals, exact)) < 1e-13, "Laplacian eigenvalues")
    check(len(lap.matrix(4)) == 4, "dense matrix")

    ln = glt.Case("Ln")
    n = 50
    vals = ln.spectrum(n)
    exact = sorted((6 - 6 * math.cos(k * math.pi / (n + 1))) / (2 + math.cos(k * math.pi / (n + 1))) for k in range(1, n + 1))
    check(max(abs(a - b) for a, b in zip(vals, exact)) < 1e-8, "pencil eigenvalues")

    rep = glt.rearrangement_compare(glt.Case("fd_t1:a=xexp"), 50, 1000)
    check(abs(rep.rearrangement_gap - 0.0327) < 2e-3, f"rearrangement gap {rep.rearrangement_gap:.4f}")
    check(len(rep.overlay) == 50, "overlay rows")

    w = glt.weyl_compare(glt.Case("fe_t1:a=exp,c=x"), 100)
    check(w.max_gap < 0.02 and len(w.functionals) == 4, f"weyl gap {w.max_gap:.2e}")
    check(json.loads(w.json())["n"] == 100, "report json")

    nonuni = glt.Case("fd_t7:q=2")
    try:
        glt.weyl_compare(nonuni, 50, mode="sigma")
        check(False, "unbounded symbol refused")
    except ValueError:
        check(True, "unbounded symbol refused")
    h = glt.weyl_compare(nonuni, 50, mode="sigma", window=(0.0, 20.0))
    check(len(h.functionals) == 7, "hat suite on unbounded symbol")

    ok, cert = glt.certify("fd_t4", ns=[20, 50])
    check(ok and all(l.startswith("PASS") for l in cert), f"certificates ({len(cert)} lines)")

    try:
        glt.Case("nope")
        check(False, "unknown case raises")
    except ValueError:
        check(True, "unknown case raises")

    z = glt.Case("fd_t4:a=1+x,b=one,c=one").symbol_at(0.5, 1.0)
    check(isinstance(z, complex), "complex symbol value")
    print("all smoke checks passed")


if __name__ == "__main__":
    main()
