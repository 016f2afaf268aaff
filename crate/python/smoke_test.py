#!/usr/bin/env python3
"""Smoke test for the beltrami_py extension module.

Build the module first, then run this script from the repository root:

    cargo build -p beltrami-py
    python3 python/smoke_test.py
"""

import math
import os
import shutil
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load_module():
    for profile in ("debug", "release"):
        lib = os.path.join(ROOT, "target", profile, "libbeltrami_py.so")
        if os.path.exists(lib):
            stage = tempfile.mkdtemp(prefix="beltrami_py.")
            shutil.copy(lib, os.path.join(stage, "beltrami_py.so"))
            sys.path.insert(0, stage)
            import beltrami_py

            return beltrami_py
    sys.exit("libbeltrami_py.so not found; run `cargo build -p beltrami-py` first")


def check(label, ok):
    print(f"{'ok' if ok else 'FAIL'}  {label}")
    return ok


def main():
    bp = load_module()
    results = []

    sphere = bp.Surface.sphere(radius="2")
    results.append(check("sphere curvatures", sphere.gauss_curvature() == "1/4"
                         and sphere.mean_curvature() == "1/2"))

    ring = bp.Surface.anchor_ring(kappa="1", radius="1/2")
    first = ring.form("I")
    results.append(check("ring first form", first["g11"] == "delta^2"
                         and first["g12"] == "0" and first["g22"] == "1/4"))

    tube = bp.Surface.tube()
    rows = tube.laplace_gauss_map(k=2)
    results.append(check("tube iterate poles", (rows[0]["pole_delta"], rows[0]["pole_cos"]) == (2, 1)
                         and (rows[1]["pole_delta"], rows[1]["pole_cos"]) == (5, 4)))

    nx, ny, nz = tube.normal(0.4, 0.9)
    results.append(check("unit normal", abs(math.hypot(nx, ny, nz) - 1.0) < 1e-12))

    spot = bp.Surface.anchor_ring(kappa="1", radius="1/2").gauss_curvature_at(1.0, math.pi / 3)
    results.append(check("curvature spot value", abs(spot + 4.0 / 3.0) < 1e-9))

    ft = sphere.finite_type(k_max=2, seed=9)
    results.append(check("sphere finite type", ft["verdict_text"] == "FiniteTypeCandidate(1)"))

    ft = ring.finite_type(k_max=4, seed=7)
    results.append(check("ring rank growth", ft["verdict_text"] == "InfiniteTypeEvidence"
                         and ft["ranks"] == [2, 3, 4, 5]))

    reports = bp.verify()
    verdicts = {r["claim_id"]: r["verdict"] for r in reports}
    documented = set(bp.documented_discrepancies())
    results.append(check("registry size", len(reports) == 20))
    results.append(check("documented mismatches", all(
        (verdicts[c] == "MISMATCH") == (c in documented) for c in verdicts)))

    leads = bp.ring_lead_sequence(3)
    results.append(check("ring lead sequence", leads == ["1", "-3", "63"]))

    rem = bp.eq13_check(1, 1)
    results.append(check("recurrence audit", rem["verdict"] == "MISMATCH"
                         and rem["difference"] is not None))

    if not all(results):
        sys.exit(1)
    print(f"all {len(results)} checks passed")


if __name__ == "__main__":
    main()
