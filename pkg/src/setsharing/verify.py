"""Executable checks for the algebraic results about SH and its abstractions.

Each check returns ``None`` on success or a JSON-able counterexample.
Checks are grouped into suites (``ops``, ``closures``, ``mi``,
``complements``, ``decomposition``, ``quotient``); :func:`run_suite` runs
them and collects a :class:`Report`.
"""

from __future__ import annotations

import itertools
import json
import os
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from . import closures as cl
from . import lattice as lt
from .shcore import (ShElement, amgu, bin, format_sh, group_key, lub, proj, rel,
                     self_union, star_union, to_json)
from .terms import Binding, Compound, Substitution, Var, ground_substitution
from .universe import ENUM_CAP, VarUniverse, numbered_universe

SUITES = ("ops", "closures", "mi", "complements", "decomposition", "quotient")
GROUND_CONSTANT = "c0"
DENSITIES = (0.1, 0.3, 0.5)


class PreconditionFailed(ValueError):
    pass


class InternalError(RuntimeError):
    pass


@dataclass(frozen=True)
class TrialConfig:
    n: int = 3
    trials: int = 200
    seed: int = 0
    k: int | None = None  # None: every k in 1..n
    enum_cap: int = ENUM_CAP

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.k is not None and not 1 <= self.k <= self.n:
            raise ValueError(f"k={self.k} out of range 1..{self.n}")

    @property
    def ks(self) -> list[int]:
        return [self.k] if self.k is not None else list(range(1, self.n + 1))

    @property
    def enumerable(self) -> bool:
        return self.n <= self.enum_cap


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "skip" | "refuted"
    counterexample: object = None
    millis: float = 0.0
    note: str = ""

    def to_json(self, timing: bool) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.note:
            out["note"] = self.note
        if timing:
            out["millis"] = round(self.millis, 1)
        return out


@dataclass
class Report:
    suite: str
    n: int
    seed: int
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if c.status == "fail"]

    def to_json(self, timing: bool = False) -> dict:
        return {"suite": self.suite, "n": self.n, "seed": self.seed,
                "checks": [c.to_json(timing) for c in self.checks]}

    def dumps(self, timing: bool = False) -> str:
        return json.dumps(self.to_json(timing), indent=2)


class Skip(Exception):
    pass


class Refuted(Exception):
    """A stated but unproved remark that the computation contradicts."""

    def __init__(self, counterexample):
        super().__init__("refuted")
        self.counterexample = counterexample


# -- random generation -----------------------------------------------------


def rng_for(seed: int, name: str) -> random.Random:
    return random.Random(f"{seed}:{name}")


def random_sh(rng: random.Random, u: VarUniverse, p: float | None = None) -> ShElement:
    p = rng.choice(DENSITIES) if p is None else p
    return ShElement(u, frozenset(g for g in range(1, u.full + 1) if rng.random() < p))


def random_mask(rng: random.Random, u: VarUniverse) -> int:
    return rng.getrandbits(u.n)


def random_term(rng: random.Random, u: VarUniverse, lhs: str, depth: int = 2):
    """A random term avoiding the bare variable ``lhs``."""
    r = rng.random()
    others = [v for v in u.names if v != lhs]
    if r < 0.25 or depth == 0:
        return Compound(rng.choice(("a", "b")), ())
    if r < 0.5 and others:
        return Var(rng.choice(others))
    arity = rng.randint(1, 3)
    args = []
    for _ in range(arity):
        if rng.random() < 0.6:
            args.append(Var(rng.choice(u.names)))
        else:
            args.append(random_term(rng, u, "", depth - 1))
    return Compound(rng.choice(("f", "g")), tuple(args))


def random_subst(rng: random.Random, u: VarUniverse) -> Substitution:
    lhs = rng.sample(u.names, rng.randint(0, u.n))
    return Substitution(u, tuple(Binding(x, random_term(rng, u, x)) for x in lhs))


def equal_rho_partner(rng: random.Random, x: ShElement, rho) -> ShElement:
    """A random element with the same closure as ``x``.

    Starts from ``rho(x)`` and drops groups in random order, keeping a drop
    only when the closure is unchanged.
    """
    target = rho(x)
    cur = set(target.groups)
    order = sorted(cur, key=group_key)
    rng.shuffle(order)
    for g in order:
        if rng.random() < 0.6:
            trial = x._new(cur - {g})
            if rho(trial) == target:
                cur.discard(g)
    return x._new(cur)


def equal_rho_pair(rng: random.Random, u: VarUniverse, rho) -> tuple[ShElement, ShElement]:
    """Two independently thinned generators of the closure of a random element."""
    base = random_sh(rng, u)
    sh1 = equal_rho_partner(rng, base, rho)
    sh2 = rho(base) if rng.random() < 0.2 else equal_rho_partner(rng, base, rho)
    return sh1, sh2


def all_sh(u: VarUniverse):
    for e in range(1 << u.full):
        yield lt.decode(u, e)


def _ce(**kw) -> dict:
    out = {}
    for key, val in kw.items():
        if isinstance(val, ShElement):
            val = to_json(val)
        elif isinstance(val, Substitution):
            val = str(val)
        out[key] = val
    return out


def _elements(cfg: TrialConfig, u: VarUniverse, name: str, exhaustive_max: int = 3):
    """All elements when n is small, otherwise ``cfg.trials`` random ones."""
    if u.n <= exhaustive_max:
        return list(all_sh(u))
    rng = rng_for(cfg.seed, name)
    return [random_sh(rng, u) for _ in range(cfg.trials)]


# -- witness construction --------------------------------------------------


@dataclass(frozen=True)
class Witness:
    sigma: Substitution
    j: int
    side: str  # "sh1": S taken from rho(sh1); "sh2": sides were swapped
    group: int
    tuple_: int
    proof_j: int

    def to_json(self) -> dict:
        u = self.sigma.universe
        return {"sigma": str(self.sigma), "j": self.j, "side": self.side,
                "group": u.names_in(self.group), "tuple": u.names_in(self.tuple_),
                "proof_j": self.proof_j}


def find_witness(sh1: ShElement, sh2: ShElement, k: int) -> Witness:
    """A ground substitution and tuple size separating two elements.

    Follows the distinguishability construction: pick a group ``S`` in one
    closure but not the other, ground every variable outside ``S``, and
    locate a tuple of size at most ``k`` whose tuple-sharing closure tells
    the two results apart. The smallest separating ``j`` is returned; the
    size of the constructed tuple is kept in ``proof_j``.
    """
    r1, r2 = cl.rho_tsd(sh1, k), cl.rho_tsd(sh2, k)
    if r1 == r2:
        raise PreconditionFailed("the two elements have the same TSD_k closure")
    side = "sh1"
    a, b, ra, rb = sh1, sh2, r1, r2
    if not ra.groups - rb.groups:
        side = "sh2"
        a, b, ra, rb = sh2, sh1, r2, r1
    u = sh1.universe
    s = min(ra.groups - rb.groups, key=group_key)
    sigma = ground_substitution(u, u.full & ~s, GROUND_CONSTANT)
    a_s, b_s = amgu(a, sigma), amgu(b, sigma)

    if s.bit_count() <= k:
        tup = s
    else:
        tup = None
        for t in [0, *(w for w in _submasks_below(s, k))]:
            cover_b = 0
            for g in b_s.groups:
                if g & t == t:
                    cover_b |= g
            cover_a = 0
            for g in a_s.groups:
                if g & t == t:
                    cover_a |= g
            if cover_a == s and cover_b != s:
                x = (s & ~cover_b) & -(s & ~cover_b)
                tup = t | x
                break
        if tup is None:
            raise InternalError(f"no separating tuple inside group {u.names_in(s)}")
    proof_j = tup.bit_count()
    if not (tup in cl.rho_ts(a_s, proof_j).groups and tup not in cl.rho_ts(b_s, proof_j).groups):
        raise InternalError("proof construction does not separate the elements")

    for j in range(1, k + 1):
        if cl.rho_ts(amgu(sh1, sigma), j) != cl.rho_ts(amgu(sh2, sigma), j):
            return Witness(sigma, j, side, s, tup, proof_j)
    raise InternalError("no j <= k separates the elements after grounding")


def _submasks_below(s: int, k: int):
    """Nonempty submasks of ``s`` with fewer than ``k`` bits, smallest first."""
    subs = [w for w in _all_submasks(s) if w.bit_count() < k]
    return sorted(subs, key=group_key)


def _all_submasks(s: int):
    w = s
    while w:
        yield w
        w = (w - 1) & s


def recheck_witness(sh1: ShElement, sh2: ShElement, k: int, w: Witness) -> bool:
    """Re-evaluate a witness from scratch."""
    if not 1 <= w.j <= k:
        return False
    for b in w.sigma.bindings:
        if not (isinstance(b.rhs, Compound) and not b.rhs.args):
            return False
    grounded = {x for x, _ in w.sigma.lowered()}
    if grounded != {i for i in range(sh1.universe.n) if not w.group >> i & 1}:
        return False
    return cl.rho_ts(amgu(sh1, w.sigma), w.j) != cl.rho_ts(amgu(sh2, w.sigma), w.j)


# -- ops suite -------------------------------------------------------------


def check_bin(cfg, u):
    rng = rng_for(cfg.seed, "bin")
    for _ in range(cfg.trials):
        a, b = random_sh(rng, u), random_sh(rng, u)
        if bin(a, b) != bin(b, a):
            return _ce(sh1=a, sh2=b, law="commutative")
        a2 = a._new(a.groups | random_sh(rng, u).groups)
        if not bin(a, b) <= bin(a2, b):
            return _ce(sh1=a, sh1_larger=a2, sh2=b, law="monotone")


def check_self_union_chain(cfg, u):
    for x in _elements(cfg, u, "self-union-chain"):
        star = star_union(x)
        prev = x
        if self_union(x, 1) != x:
            return _ce(sh=x, law="sh^1 = sh")
        for j in range(1, u.n + 1):
            cur = self_union(x, j)
            if not (prev <= cur <= star):
                return _ce(sh=x, j=j, law="chain")
            prev = cur
        if self_union(x, u.n) != star:
            return _ce(sh=x, law="sh^n = sh*")


def check_star_closure(cfg, u):
    return _closure_laws(cfg, u, star_union, "star")


def _closure_laws(cfg, u, rho, name):
    rng = rng_for(cfg.seed, f"laws-{name}")
    for x in _elements(cfg, u, f"laws-{name}"):
        r = rho(x)
        if not x <= r:
            return _ce(sh=x, law="extensive")
        if rho(r) != r:
            return _ce(sh=x, law="idempotent")
        bigger = x._new(x.groups | random_sh(rng, u).groups)
        if not r <= rho(bigger):
            return _ce(sh=x, larger=bigger, law="monotone")


def check_emi_star(cfg, u):
    rng = rng_for(cfg.seed, "emi-star")
    for _ in range(cfg.trials):
        a, b = random_sh(rng, u), random_sh(rng, u)
        bs = star_union(b)
        if (a <= bs) != (star_union(a) <= bs):
            return _ce(sh1=a, sh2=b)


def check_ground_amgu(cfg, u):
    """amgu with an all-ground substitution removes the relevant component."""
    if u.n <= 3:
        cases = ((x, d) for x in all_sh(u) for d in range(1 << u.n))
    else:
        rng = rng_for(cfg.seed, "ground-amgu")
        cases = ((random_sh(rng, u), random_mask(rng, u)) for _ in range(cfg.trials))
    for x, d in cases:
        sigma = ground_substitution(u, d, GROUND_CONSTANT)
        expected = x._new(x.groups - rel(d, x).groups)
        if amgu(x, sigma) != expected:
            return _ce(sh=x, sigma=sigma)


def check_amgu_order(cfg, u):
    rng = rng_for(cfg.seed, "amgu-order")
    for _ in range(cfg.trials):
        x = random_sh(rng, u)
        sigma = random_subst(rng, u)
        base = amgu(x, sigma)
        perms = list(itertools.permutations(sigma.bindings))
        for perm in rng.sample(perms, min(len(perms), 6)):
            other = Substitution(u, perm)
            if amgu(x, other) != base:
                return _ce(sh=x, sigma=sigma, permuted=other)


def check_rel_proj(cfg, u):
    for x in _elements(cfg, u, "rel-proj"):
        if proj(x, u.full) != x or rel(u.full, x) != x or rel(0, x).groups:
            return _ce(sh=x)


# -- closures suite --------------------------------------------------------


def _tsd(k):
    return lambda x: cl.rho_tsd(x, k)


def _ts(k):
    return lambda x: cl.rho_ts(x, k)


def check_closure_laws(cfg, u):
    for k in cfg.ks:
        for name, rho in ((f"ts:{k}", _ts(k)), (f"tsd:{k}", _tsd(k))):
            ce = _closure_laws(cfg, u, rho, name)
            if ce:
                ce["closure"] = name
                return ce


def check_emi_rho(cfg, u):
    rng = rng_for(cfg.seed, "emi-rho")
    for k in cfg.ks:
        for _ in range(cfg.trials):
            a, b = random_sh(rng, u), random_sh(rng, u)
            rb = cl.rho_tsd(b, k)
            if (a <= rb) != (cl.rho_tsd(a, k) <= rb):
                return _ce(sh1=a, sh2=b, k=k)


def check_tsd1_star(cfg, u):
    for x in _elements(cfg, u, "tsd1-star"):
        if cl.rho_tsd(x, 1) != star_union(x):
            return _ce(sh=x)


def check_tsdn_identity(cfg, u):
    for x in _elements(cfg, u, "tsdn-id"):
        if cl.rho_tsd(x, u.n) != x:
            return _ce(sh=x)


def check_self_union(cfg, u):
    """rho_TSDk(sh^k) = sh* for every k."""
    for k in cfg.ks:
        for x in _elements(cfg, u, f"self-union-{k}"):
            if cl.rho_tsd(self_union(x, k), k) != star_union(x):
                return _ce(sh=x, k=k)


def check_psd_bin(cfg, u):
    if u.n < 2:
        raise Skip("needs n >= 2")
    for x in _elements(cfg, u, "psd-bin"):
        if cl.rho_tsd(bin(x, x), 2) != star_union(x):
            return _ce(sh=x)


def check_addit(cfg, u):
    rng = rng_for(cfg.seed, "addit")
    for k in cfg.ks:
        for _ in range(cfg.trials):
            x, v = random_sh(rng, u), random_mask(rng, u)
            r = cl.rho_tsd(x, k)
            lhs = r._new(r.groups - rel(v, r).groups)
            rhs = cl.rho_tsd(x._new(x.groups - rel(v, x).groups), k)
            if lhs != rhs:
                return _ce(sh=x, V=u.names_in(v), k=k)


def _ts_images(cfg, u, rng, k):
    if cfg.enumerable:
        return lt.image_of(u, cl.ClosureId("TS", k), cfg.enum_cap).sh_elements()
    return [cl.rho_ts(random_sh(rng, u), k) for _ in range(cfg.trials)]


def check_ts_cross(cfg, u):
    """For j < k, rho_TSj sends every element of TS_k to SG."""
    rng = rng_for(cfg.seed, "ts-cross")
    sg = cl.apply_closure(cl.ClosureId("Top"), ShElement(u, frozenset()))
    for k in range(2, u.n + 1):
        for j in range(1, k):
            for x in _ts_images(cfg, u, rng, k):
                if cl.rho_ts(x, j) != sg:
                    return _ce(sh=x, j=j, k=k)


def check_ts_fixes_lower(cfg, u):
    """Probe the remark that rho_TSk fixes TS_j for j < k.

    The remark does not hold: rho_TSk always adds the groups of size
    below k, so most elements of TS_j move. A counterexample is reported
    with status ``refuted`` rather than counted as a failure.
    """
    rng = rng_for(cfg.seed, "ts-fixes-lower")
    for k in range(2, u.n + 1):
        for j in range(1, k):
            for x in _ts_images(cfg, u, rng, j):
                if cl.rho_ts(x, k) != x:
                    raise Refuted(_ce(sh=x, image=cl.rho_ts(x, k), j=j, k=k))
    return None


def _need_lattice(cfg):
    if not cfg.enumerable:
        raise Skip(f"lattice enumeration needs n <= {cfg.enum_cap}")


@lru_cache(maxsize=256)
def _domain(u, name, cap):
    return lt.resolve_domain(u, name, cap)


def _img(cfg, u, name):
    return _domain(u, name, cfg.enum_cap)


def check_tsd_chain(cfg, u):
    _need_lattice(cfg)
    for k in range(2, u.n + 1):
        for j in range(1, k):
            a, b = _img(cfg, u, f"tsd:{j}"), _img(cfg, u, f"tsd:{k}")
            if not a.elements < b.elements:
                return {"j": j, "k": k}


def check_ts_in_tsd(cfg, u):
    _need_lattice(cfg)
    for k in range(1, u.n + 1):
        ts, tsd = _img(cfg, u, f"ts:{k}"), _img(cfg, u, f"tsd:{k}")
        if not ts.elements <= tsd.elements or (u.n > 1 and ts.elements == tsd.elements):
            return {"k": k}
        for j in range(1, k + 1):
            if not _img(cfg, u, f"ts:{j}").elements <= tsd.elements:
                return {"j": j, "k": k, "law": "TS_j within TSD_k"}


def check_ps_prime(cfg, u):
    if u.n < 2:
        raise Skip("needs n >= 2")
    _need_lattice(cfg)
    prod = lt.reduced_product(_img(cfg, u, "ps"), _img(cfg, u, f"ts:{u.n}"))
    if _img(cfg, u, "ps-prime").elements != prod.elements:
        return {"ps_prime": len(_img(cfg, u, "ps-prime")), "product": len(prod)}


# -- mi suite --------------------------------------------------------------


def golden_dir() -> Path:
    env = os.environ.get("SETSHARING_GOLDEN")
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "golden"


def load_golden(u: VarUniverse, name: str) -> frozenset | None:
    """Golden element set, re-encoded positionally onto ``u``."""
    path = golden_dir() / name
    if not path.exists():
        return None
    data = json.loads(path.read_text())
    gu = VarUniverse(tuple(data["vars"]))
    if gu.n != u.n:
        return None
    return frozenset(lt.encode_names(gu, el) for el in data["elements"])


def check_mi_methods(cfg, u):
    _need_lattice(cfg)
    names = [f"ts:{k}" for k in range(1, u.n + 1)] + [f"tsd:{k}" for k in range(1, u.n + 1)]
    if u.n >= 2:
        names.append("ps-prime")
    for name in names:
        d = _img(cfg, u, name)
        mi = lt.meet_irreducibles(d, "covers")
        if len(d) <= lt.BRUTEFORCE_MAX and lt.meet_irreducibles(d, "bruteforce") != mi:
            return {"domain": name, "law": "bruteforce = covers"}
        if lt.moore(u, mi).elements != d.elements:
            return {"domain": name, "law": "meet-generated by MI"}
        da = lt.dual_atoms(d)
        if not da <= mi:
            return {"domain": name, "law": "dAtoms within MI"}
        if name.startswith("ts:") or name == f"tsd:{u.n}":
            if mi != da | {d.top}:
                return {"domain": name, "law": "dual-atomistic"}


def check_counts(cfg, u):
    """Enumerated dAtoms / M_k / MI sizes and sets against the closed forms."""
    _need_lattice(cfg)
    for k in cfg.ks:
        d = _img(cfg, u, f"tsd:{k}")
        mi = lt.meet_irreducibles(d, "covers")
        da = lt.dual_atoms(d)
        got = (len(da), len(mi) - len(da) - 1, len(mi))
        formula_set, counts = lt.mi_formula(u, k)
        if got != counts.as_tuple():
            return {"k": k, "enumerated": list(got), "formula": list(counts.as_tuple())}
        if formula_set != mi:
            return {"k": k, "law": "MI set equals formula set"}


def check_corollaries(cfg, u):
    _need_lattice(cfg)
    for k in range(1, u.n + 1):
        mi_k = lt.meet_irreducibles(_img(cfg, u, f"tsd:{k}"))
        vi = lt.group_code(u.full)
        ts_k = _img(cfg, u, f"ts:{k}")
        if lt.dual_atoms(ts_k) != frozenset(e for e in mi_k if not e & vi):
            return {"k": k, "law": "dAtoms(TS_k) = MI(TSD_k) without VI"}
        for j in range(1, k):
            if mi_k & _img(cfg, u, f"ts:{j}").elements != {ts_k.top}:
                return {"j": j, "k": k, "law": "MI(TSD_k) & TS_j = {SG}"}
            tsd_j = _img(cfg, u, f"tsd:{j}")
            # SG lies in both sets, so it appears alongside the dual-atoms
            if mi_k & tsd_j.elements != lt.dual_atoms(tsd_j) | {tsd_j.top}:
                return {"j": j, "k": k, "law": "MI(TSD_k) & TSD_j = {SG} | dAtoms(TSD_j)"}


def check_golden(cfg, u):
    if u.n != 3:
        raise Skip("golden sets are for n = 3")
    expected = {
        "datoms_sh_n3.json": lambda: lt.dual_atoms(_img(cfg, u, "sh")),
        "mi_sh_n3.json": lambda: lt.meet_irreducibles(_img(cfg, u, "sh")),
        "mi_def_n3.json": lambda: lt.meet_irreducibles(_img(cfg, u, "def")),
        "mi_psd_n3.json": lambda: lt.meet_irreducibles(_img(cfg, u, "psd")),
        "datoms_con_n3.json": lambda: lt.dual_atoms(_img(cfg, u, "con")),
        "datoms_ps_n3.json": lambda: lt.dual_atoms(_img(cfg, u, "ps")),
    }
    missing = []
    for fname, compute in expected.items():
        gold = load_golden(u, fname)
        if gold is None:
            missing.append(fname)
            continue
        got = compute()
        if got != gold:
            return {"file": fname, "extra": lt.elements_to_json(u, got - gold),
                    "missing": lt.elements_to_json(u, gold - got)}
    if len(missing) == len(expected):
        raise Skip(f"no golden files found in {golden_dir()}")


# -- complements suite -----------------------------------------------------


def _cmp(ref, rem):
    return lt.complement(ref, rem)


def _vi_filter(d: lt.DomainImage) -> frozenset:
    vi = lt.group_code(d.universe.full)
    return frozenset(e for e in d.elements if e & vi)


def _identity(name, got, want):
    if got.elements != want.elements:
        return {"identity": name, "got": len(got), "want": len(want)}


def check_complements_ts(cfg, u):
    _need_lattice(cfg)
    n = u.n
    shd = _img(cfg, u, "sh")
    for j in range(1, n):
        ce = _identity(f"SH ~ TS_{j} = SH", _cmp(shd, _img(cfg, u, f"ts:{j}")), shd)
        if ce:
            return ce
    if _cmp(shd, _img(cfg, u, f"ts:{n}")).elements == shd.elements:
        return {"identity": "SH ~ TS_n != SH"}
    for k in range(1, n + 1):
        tsd = _img(cfg, u, f"tsd:{k}")
        ts = _img(cfg, u, f"ts:{k}")
        for j in range(1, k):
            ce = _identity(f"TSD_{k} ~ TS_{j} = TSD_{k}", _cmp(tsd, _img(cfg, u, f"ts:{j}")), tsd)
            if ce:
                return ce
        c = _cmp(tsd, ts)
        if c.elements != _vi_filter(tsd):
            return {"identity": f"TSD_{k} ~ TS_{k} = {{sh in TSD_{k} | VI in sh}}"}
        ce = _identity(f"TSD_{k} ~ (TSD_{k} ~ TS_{k}) = TS_{k}", _cmp(tsd, c), ts)
        if ce:
            return ce


def check_complements_tsd(cfg, u):
    _need_lattice(cfg)
    for k in range(2, u.n + 1):
        tsd_k = _img(cfg, u, f"tsd:{k}")
        for j in range(1, k):
            small = 0
            for g in range(1, u.full + 1):
                if g.bit_count() <= j:
                    small |= lt.group_code(g)
            want = frozenset(e for e in tsd_k.elements if e & small == small)
            if _cmp(tsd_k, _img(cfg, u, f"tsd:{j}")).elements != want:
                return {"identity": f"TSD_{k} ~ TSD_{j} = all groups of size <= {j} present"}
    for j in range(1, u.n):
        ce = _identity(f"SH ~ TSD_{j} = SH+_{j}", _cmp(_img(cfg, u, "sh"), _img(cfg, u, f"tsd:{j}")),
                       _img(cfg, u, f"sh_plus:{j}"))
        if ce:
            return ce


def check_complements_named(cfg, u):
    """The named complements for Def, PSD and their subdomains."""
    _need_lattice(cfg)
    if u.n < 2:
        raise Skip("needs n >= 2")
    i = lambda name: _img(cfg, u, name)  # noqa: E731
    cases = [
        ("Def ~ Con = Def+", _cmp(i("def"), i("con")), i("def_oplus")),
        ("Def ~ Def+ = Con", _cmp(i("def"), i("def_oplus")), i("con")),
        ("PSD ~ PS = PSD+", _cmp(i("psd"), i("ps")), i("psd_oplus")),
        ("PSD ~ PSD+ = PS", _cmp(i("psd"), i("psd_oplus")), i("ps")),
        ("PSD ~ Def = PSD^+", _cmp(i("psd"), i("def")), i("psd_plus")),
        ("SH ~ Def = SH+_Def", _cmp(i("sh"), i("def")), i("sh_plus_def")),
        ("SH ~ PSD = SH+_PSD", _cmp(i("sh"), i("psd")), i("sh_plus_psd")),
        ("Def- = SH ~ SH+_Def", i("def_minus"), _cmp(i("sh"), i("sh_plus_def"))),
        ("PSD^+ ~ PS = PSD++", _cmp(i("psd_plus"), i("ps")), i("psd_ddagger")),
        ("PSD^+ ~ PSD++ = PS", _cmp(i("psd_plus"), i("psd_ddagger")), i("ps")),
        ("PS' = PS * TS_n", i("ps-prime"), lt.reduced_product(i("ps"), i(f"ts:{u.n}"))),
    ]
    shp = i("sh_plus_def")
    if u.n >= 3:
        cases.append(("SH+_Def ~ PS = SH+_Def", _cmp(shp, i("ps")), shp))
    via_psp = _cmp(shp, i("ps-prime"))
    via_tsn = _cmp(shp, i(f"ts:{u.n}"))
    cases.append(("SH+_Def ~ PS' = SH+_Def ~ TS_n", via_psp, via_tsn))
    for name, got, want in cases:
        ce = _identity(name, got, want)
        if ce:
            return ce
    if via_tsn.elements != _vi_filter(shp):
        return {"identity": "SH+_Def ~ TS_n = {sh in SH+_Def | VI in sh}"}


# -- decomposition suite ---------------------------------------------------


def check_decompositions(cfg, u):
    _need_lattice(cfg)
    i = lambda name: _img(cfg, u, name)  # noqa: E731
    for k in range(1, u.n + 1):
        tsd = i(f"tsd:{k}")
        rest = lt.DomainImage(u, _vi_filter(tsd), f"tsd:{k}_oplus")
        if lt.reduced_product(i(f"ts:{k}"), rest).elements != tsd.elements:
            return {"identity": f"TS_{k} * (TSD_{k} ~ TS_{k}) = TSD_{k}"}
    if u.n < 2:
        return None
    cases = [
        ("Con * Def+ = Def", lt.moore(u, i("con").elements | i("def_oplus").elements), i("def")),
        ("PS * PSD+ = PSD", lt.moore(u, i("ps").elements | i("psd_oplus").elements), i("psd")),
        ("Def- * PS * PSD++ = PSD",
         lt.moore(u, i("def_minus").elements | i("ps").elements | i("psd_ddagger").elements),
         i("psd")),
        ("Def- * PSD^+ = PSD", lt.reduced_product(i("def_minus"), i("psd_plus")), i("psd")),
    ]
    for name, got, want in cases:
        ce = _identity(name, got, want)
        if ce:
            return ce


# -- quotient suite --------------------------------------------------------


def check_congruence(cfg, u, k=None):
    """Equal TSD_k closures stay equal after amgu, lub and proj."""
    for kk in ([k] if k else cfg.ks):
        rho = _tsd(kk)
        rng = rng_for(cfg.seed, f"congruence-{kk}")
        for trial in range(cfg.trials):
            sh1, sh2 = equal_rho_pair(rng, u, rho)
            sigma = random_subst(rng, u)
            other = random_sh(rng, u)
            v = random_mask(rng, u)
            if rho(amgu(sh1, sigma)) != rho(amgu(sh2, sigma)):
                return _ce(trial=trial, k=kk, op="amgu", sh1=sh1, sh2=sh2, sigma=sigma)
            if rho(lub(other, sh1)) != rho(lub(other, sh2)):
                return _ce(trial=trial, k=kk, op="lub", sh1=sh1, sh2=sh2, other=other)
            if rho(proj(sh1, v)) != rho(proj(sh2, v)):
                return _ce(trial=trial, k=kk, op="proj", sh1=sh1, sh2=sh2, V=u.names_in(v))


def random_distinct_pair(rng, u, k, limit=1000):
    """Two random elements with different TSD_k closures (None if not found)."""
    for _ in range(limit):
        a, b = random_sh(rng, u), random_sh(rng, u)
        if rng.random() < 0.5:
            # near misses: perturb one group of a
            g = rng.randint(1, u.full)
            b = a._new(a.groups ^ {g})
        if cl.rho_tsd(a, k) != cl.rho_tsd(b, k):
            return a, b
    return None


def check_witnesses(cfg, u, k=None):
    for kk in ([k] if k else cfg.ks):
        rng = rng_for(cfg.seed, f"witness-{kk}")
        for trial in range(cfg.trials):
            pair = random_distinct_pair(rng, u, kk)
            if pair is None:
                continue
            a, b = pair
            try:
                w = find_witness(a, b, kk)
            except InternalError as e:
                return _ce(trial=trial, k=kk, sh1=a, sh2=b, error=str(e))
            if not recheck_witness(a, b, kk, w):
                return _ce(trial=trial, k=kk, sh1=a, sh2=b, witness=w.to_json())


# -- suite runner ----------------------------------------------------------

CHECKS = {
    "ops": [
        ("bin-commutative-monotone", check_bin),
        ("self-union-chain", check_self_union_chain),
        ("star-union-closure", check_star_closure),
        ("star-inclusion-equivalence", check_emi_star),
        ("ground-amgu-removes-relevant", check_ground_amgu),
        ("amgu-binding-order", check_amgu_order),
        ("rel-proj-identities", check_rel_proj),
    ],
    "closures": [
        ("closure-laws", check_closure_laws),
        ("rho-inclusion-equivalence", check_emi_rho),
        ("tsd1-is-star-union", check_tsd1_star),
        ("tsdn-is-identity", check_tsdn_identity),
        ("tsd-of-self-union", check_self_union),
        ("psd-of-binary-self-union", check_psd_bin),
        ("tsd-relevant-removal", check_addit),
        ("ts-cross-closure", check_ts_cross),
        ("ts-fixes-lower-remark", check_ts_fixes_lower),
        ("tsd-strict-chain", check_tsd_chain),
        ("ts-within-tsd", check_ts_in_tsd),
        ("ps-prime-product", check_ps_prime),
    ],
    "mi": [
        ("mi-methods-agree", check_mi_methods),
        ("mi-counts", check_counts),
        ("mi-corollaries", check_corollaries),
        ("golden-sets", check_golden),
    ],
    "complements": [
        ("complements-ts", check_complements_ts),
        ("complements-tsd", check_complements_tsd),
        ("complements-named", check_complements_named),
    ],
    "decomposition": [
        ("decompositions", check_decompositions),
    ],
    "quotient": [
        ("congruence", check_congruence),
        ("tsd-of-self-union", check_self_union),
        ("ground-amgu-removes-relevant", check_ground_amgu),
        ("witnesses", check_witnesses),
    ],
}


def run_check(name: str, fn, cfg: TrialConfig, u: VarUniverse) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ce = fn(cfg, u)
        status = "fail" if ce is not None else "pass"
        note = ""
    except Skip as e:
        ce, status, note = None, "skip", str(e)
    except Refuted as e:
        ce, status, note = e.counterexample, "refuted", "unproved remark contradicted"
    return CheckResult(name, status, ce, (time.perf_counter() - t0) * 1000, note)


def run_suite(name: str, cfg: TrialConfig, u: VarUniverse | None = None) -> Report:
    if name != "all" and name not in CHECKS:
        raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}, all")
    u = u or numbered_universe(cfg.n)
    if u.n != cfg.n:
        raise ValueError("universe size does not match the trial config")
    report = Report(name, cfg.n, cfg.seed)
    for suite in (SUITES if name == "all" else (name,)):
        for check_name, fn in CHECKS[suite]:
            full = f"{suite}/{check_name}"
            if name == "all" and any(c.name.endswith("/" + check_name) for c in report.checks):
                continue
            report.checks.append(run_check(full, fn, cfg, u))
    return report


def check_self_union_report(cfg: TrialConfig) -> Report:
    u = numbered_universe(cfg.n)
    rep = Report("self-union", cfg.n, cfg.seed)
    rep.checks.append(run_check("tsd-of-self-union", check_self_union, cfg, u))
    return rep


def check_congruence_report(cfg: TrialConfig) -> Report:
    u = numbered_universe(cfg.n)
    rep = Report("congruence", cfg.n, cfg.seed)
    rep.checks.append(run_check("congruence", check_congruence, cfg, u))
    return rep


def check_counts_report(n: int, k: int) -> Report:
    cfg = TrialConfig(n=n, trials=1, k=k, enum_cap=max(ENUM_CAP, n))
    u = numbered_universe(n)
    rep = Report("counts", n, 0)
    rep.checks.append(run_check("mi-counts", check_counts, cfg, u))
    return rep


def describe(x: ShElement) -> str:
    return format_sh(x)
