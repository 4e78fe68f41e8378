"""Sizes of the named domains and of their complements for n = 3 and n = 4."""

import argparse

from setsharing import lattice as lt
from setsharing.universe import numbered_universe

PAIRS = [("sh", "ps"), ("def", "con"), ("psd", "ps"), ("psd", "def"), ("sh", "def"),
         ("sh", "psd"), ("psd_plus", "ps"), ("psd_plus", "psd_ddagger"),
         ("sh_plus_def", "ps"), ("sh_plus_def", "ps-prime")]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="3,4")
    args = ap.parse_args()
    for n in (int(s) for s in args.sizes.split(",")):
        u = numbered_universe(n)
        print(f"n = {n}")
        for ref, rem in PAIRS:
            a, b = lt.resolve_domain(u, ref), lt.resolve_domain(u, rem)
            c = lt.complement(a, b)
            print(f"  {ref:>12} ({len(a):5d}) ~ {rem:<12} ({len(b):5d}) = {len(c):5d}")


if __name__ == "__main__":
    main()
