"""Run every verification suite for a range of universe sizes.

Writes one JSON report per size into --out-dir and prints a summary.
Lattice-based checks are skipped above the enumeration cap.
"""

import argparse
from pathlib import Path

from setsharing.verify import TrialConfig, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="1,2,3,4,5")
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    all_ok = True
    for n in (int(s) for s in args.sizes.split(",")):
        rep = run_suite("all", TrialConfig(n=n, trials=args.trials, seed=args.seed))
        (out / f"verify_n{n}.json").write_text(rep.dumps(timing=True) + "\n")
        counts = {}
        for c in rep.checks:
            counts[c.status] = counts.get(c.status, 0) + 1
        print(f"n={n}: " + ", ".join(f"{v} {k}" for k, v in sorted(counts.items())))
        for c in rep.checks:
            if c.status in ("fail", "refuted"):
                print(f"    {c.status}: {c.name} {c.counterexample}")
        all_ok &= rep.ok
    raise SystemExit(0 if all_ok else 1)


if __name__ == "__main__":
    main()
