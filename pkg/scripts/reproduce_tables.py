"""Print the n = 3 meet-irreducible sets and the count table for n <= 4.

Elements are labelled with the names used in the golden files when they
match one, so the output can be checked against the reference sets by eye.
"""

import argparse
import json
import time

from setsharing import lattice as lt
from setsharing.universe import make_universe, numbered_universe
from setsharing.verify import golden_dir


def golden_names(u):
    names = {}
    for path in sorted(golden_dir().glob("*.json")):
        data = json.loads(path.read_text())
        for name, el in zip(data.get("names", []), data["elements"]):
            names.setdefault(lt.encode_names(u, el), name)
    return names


def show(u, title, elements, names):
    print(f"{title} ({len(elements)} elements)")
    for e in sorted(elements, key=lt.element_key):
        label = names.get(e, "?")
        print(f"  {label:>3}  {lt.decode(u, e)}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=4)
    args = ap.parse_args()

    u = make_universe("x,y,z")
    names = golden_names(u)
    show(u, "dual-atoms of SH", lt.dual_atoms(lt.enumerate_sh(u)), names)
    show(u, "MI(Def)", lt.meet_irreducibles(lt.image_of(u, "def")), names)
    show(u, "MI(PSD)", lt.meet_irreducibles(lt.image_of(u, "psd")), names)

    print("\n n  k  |TSD_k|  dAtoms  M_k  MI   formula       secs")
    for n in range(1, args.max_n + 1):
        un = numbered_universe(n)
        for k in range(1, n + 1):
            t0 = time.perf_counter()
            d = lt.image_of(un, f"tsd:{k}", force=n > 4)
            mi = lt.meet_irreducibles(d)
            da = len(lt.dual_atoms(d))
            f = lt.mi_counts(n, k).as_tuple()
            print(f"{n:2d} {k:2d} {len(d):8d} {da:6d} {len(mi) - da - 1:4d} {len(mi):3d}   "
                  f"{str(f):12s} {time.perf_counter() - t0:6.2f}")


if __name__ == "__main__":
    main()
