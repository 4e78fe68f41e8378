"""Acceptance gate: one pass/fail line per criterion, with pinned time limits.

Run directly (``python3 tests/test_acceptance.py``) for the summary alone,
or through pytest, which also prints the lines in the terminal summary.
Caches are cleared before each criterion so timings are cold.
"""

from __future__ import annotations

import json
import subprocess
import sys
import time
from pathlib import Path

import pytest

from setsharing import lattice as lt
from setsharing import verify as vf
from setsharing.closures import rho_tsd
from setsharing.universe import make_universe, numbered_universe

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # direct execution
    ACCEPTANCE_LINES = []

ROOT = Path(__file__).resolve().parents[1]
XYZ = make_universe("x,y,z")

LIMITS = {1: 1.0, 2: 5.0, 3: 300.0, 4: 10.0, 5: 10.0, 6: 60.0, 7: 30.0, 8: None}


def _cold():
    lt._image_codes.cache_clear()
    lt._mi_cached.cache_clear()
    vf._domain.cache_clear()


def _golden(name):
    return vf.load_golden(XYZ, name)


def criterion_1():
    got = lt.dual_atoms(lt.enumerate_sh(XYZ))
    gold = _golden("datoms_sh_n3.json")
    return got == gold and len(got) == 7, f"{len(got)} dual-atoms, golden match={got == gold}"


def criterion_2():
    details, ok = [], True
    for name, fname, size in (("def", "mi_def_n3.json", 13), ("psd", "mi_psd_n3.json", 10)):
        d = lt.image_of(XYZ, name)
        covers = lt.meet_irreducibles(d, "covers")
        brute = lt.meet_irreducibles(d, "bruteforce")
        match = covers == _golden(fname) and covers == brute and len(covers) == size
        ok &= match
        details.append(f"MI({name})={len(covers)} golden/methods agree={match}")
    return ok, "; ".join(details)


def criterion_3():
    bad = []
    for n in range(1, 5):
        u = numbered_universe(n)
        for k in range(1, n + 1):
            d = lt.image_of(u, f"tsd:{k}")
            mi = lt.meet_irreducibles(d, "covers")
            da = lt.dual_atoms(d)
            got = (len(da), len(mi) - len(da) - 1, len(mi))
            fset, counts = lt.mi_formula(u, k)
            if got != counts.as_tuple() or fset != mi:
                bad.append((n, k, got, counts.as_tuple()))
    return not bad, f"10 (n,k) pairs, mismatches={bad}"


def _suite_ok(suite, n, trials=50, seed=0):
    rep = vf.run_suite(suite, vf.TrialConfig(n=n, trials=trials, seed=seed))
    failed = [c.name for c in rep.checks if c.status == "fail"]
    skipped = [c.name for c in rep.checks if c.status == "skip"]
    return not failed and not skipped, failed + skipped


def criterion_4():
    ok, bad = _suite_ok("complements", 3)
    return ok, f"n=3 complement identities, problems={bad}"


def criterion_4_n4():
    ok, bad = _suite_ok("complements", 4)
    return ok, f"n=4 complement identities, problems={bad}"


def criterion_5():
    u = XYZ
    i = lambda name: lt.resolve_domain(u, name)  # noqa: E731
    psd = lt.moore(u, i("def_minus").elements | i("ps").elements | i("psd_ddagger").elements)
    dfn = lt.moore(u, i("con").elements | i("def_oplus").elements)
    ok1 = psd.elements == i("psd").elements
    ok2 = dfn.elements == i("def").elements
    return ok1 and ok2, f"PSD rebuilt={ok1} Def rebuilt={ok2}"


def criterion_6():
    problems = []
    for n in (3, 4, 5):
        u = numbered_universe(n)
        for k in (1, 2):
            ce = vf.check_congruence(vf.TrialConfig(n=n, trials=1000, seed=2024, k=k), u)
            if ce:
                problems.append(("congruence", n, k, ce))
    u3, u5 = numbered_universe(3), numbered_universe(5)
    if vf.check_self_union(vf.TrialConfig(n=3, trials=1, seed=0), u3):
        problems.append("self-union n=3")
    if vf.check_self_union(vf.TrialConfig(n=5, trials=1000, seed=2024), u5):
        problems.append("self-union n=5")
    if vf.check_ground_amgu(vf.TrialConfig(n=3, trials=1, seed=0), u3):
        problems.append("ground amgu n=3")
    return not problems, f"congruence 6x1000 trials, self-union, ground amgu; violations={problems}"


def criterion_7():
    total = found = 0
    for n in (3, 4):
        u = numbered_universe(n)
        for k in (1, 2):
            rng = vf.rng_for(2024, f"acceptance-{n}-{k}")
            for _ in range(500):
                a, b = vf.random_distinct_pair(rng, u, k)
                assert rho_tsd(a, k) != rho_tsd(b, k)
                total += 1
                w = vf.find_witness(a, b, k)
                found += vf.recheck_witness(a, b, k, w)
    return found == total, f"{found}/{total} witnesses re-checked"


CLI_RUNS = [
    ["eval", "--vars", "x,y,z", "--sh", "{x,y,z}", "--op", "amgu", "--subst", "{x -> y}"],
    ["mi", "--vars", "x,y,z", "--domain", "psd"],
    ["mi", "--vars", "x,y,z", "--domain", "def", "--format", "json"],
    ["complement", "--vars", "x,y,z", "--reference", "psd", "--remove", "ps", "--format", "json"],
    ["verify", "--n", "3", "--suite", "all", "--trials", "100", "--seed", "42"],
    ["witness", "--n", "3", "--sh", '[["v1", "v2"]]', "--sh2", '[["v1"], ["v2"]]', "--k", "1",
     "--format", "json"],
]


def criterion_8():
    diffs = []
    for argv in CLI_RUNS:
        outs = [subprocess.run([sys.executable, "-m", "setsharing", *argv], capture_output=True,
                               cwd=ROOT).stdout for _ in range(2)]
        if outs[0] != outs[1] or not outs[0]:
            diffs.append(argv[0])
    return not diffs, f"{len(CLI_RUNS)} invocations x2, differing={diffs}"


CRITERIA = [
    ("1", "SH dual-atoms at n=3", criterion_1, 1),
    ("2", "MI(Def), MI(PSD) golden and method agreement", criterion_2, 2),
    ("3", "MI count formulas for n<=4", criterion_3, 3),
    ("4", "complement identities at n=3", criterion_4, 4),
    ("4b", "complement identities at n=4", criterion_4_n4, None),
    ("5", "decomposition reconstruction", criterion_5, 5),
    ("6", "quotient properties", criterion_6, 6),
    ("7", "witness finder", criterion_7, 7),
    ("8", "CLI determinism", criterion_8, 8),
]


def evaluate(cid, title, fn, limit_key):
    _cold()
    t0 = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - t0
    limit = LIMITS.get(limit_key)
    in_time = limit is None or elapsed < limit
    status = "PASS" if ok and in_time else "FAIL"
    bound = f" (limit {limit:g}s)" if limit else ""
    line = f"[{status}] criterion {cid}: {title}: {detail}; {elapsed:.2f}s{bound}"
    return ok and in_time, line


@pytest.mark.parametrize("cid,title,fn,limit_key", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(cid, title, fn, limit_key):
    ok, line = evaluate(cid, title, fn, limit_key)
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
