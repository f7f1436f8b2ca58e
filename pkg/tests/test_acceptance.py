"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines, or
``vaxfront verify`` for the per-check detail.
"""

import pytest

from vaxfront.verify import run_suite

CRITERIA = [
    (1, "asymmetric circle frontier", ["asym-circle"]),
    (2, "symmetric circle c_star and non-greedy path", ["sym-circle"]),
    (3, "assortative / disassortative optimal paths", ["assortative"]),
    (4, "uniform optimality for regular kernels", ["regular-uniform"]),
    (5, "rank-2 explicit formula", ["rank2-explicit"]),
    (6, "zero crossings of the left/right difference", ["zero-crossings"]),
    (7, "sphere and circle spectra", ["sphere-spectra", "fourier-square"]),
    (8, "cross-cutting properties", ["properties"]),
]


@pytest.mark.parametrize("number,title,suites", CRITERIA, ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(number, title, suites):
    results = [run_suite(s) for s in suites]
    checks = [c for r in results for c in r.checks]
    failed = [c for c in checks if not c.passed]
    seconds = sum(r.seconds for r in results)
    status = "PASS" if not failed else "FAIL"
    print(f"\n[{status}] criterion {number}: {title} "
          f"({len(checks) - len(failed)}/{len(checks)} checks, {seconds:.1f} s)")
    for c in failed:
        print(f"    {c.line()}")
    assert not failed, "; ".join(c.line() for c in failed)
