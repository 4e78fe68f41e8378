"""Command-line front end: ``setsharing <subcommand> ...``.

Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 semantic
error, 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import closures as cl
from . import lattice as lt
from . import verify as vf
from .shcore import (ParseError, ShElement, amgu, bin, format_sh, glb, lub, parse_sh, proj, rel,
                     self_union, star_union, to_json)
from .terms import parse_subst, parse_subst_file
from .universe import (ENUM_CAP, CapExceeded, UniverseError, UniverseMismatch, VarUniverse,
                       make_universe, numbered_universe)

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_SEMANTIC, EXIT_CAP = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# -- input helpers ---------------------------------------------------------


def _read_arg(value: str | None) -> tuple[str | None, list[str] | None]:
    """Resolve ``@path`` arguments; returns the text and any ``vars:`` header."""
    if value is None or not value.startswith("@"):
        return value, None
    try:
        text = Path(value[1:]).read_text()
    except OSError as e:
        raise CliError(f"cannot read {value[1:]}: {e.strerror}", EXIT_PARSE) from None
    header = None
    body = []
    for line in text.splitlines():
        s = line.strip()
        if s.startswith("vars:"):
            header = [v.strip() for v in s[5:].split(",") if v.strip()]
        elif s and not s.startswith("#"):
            body.append(line)
    return "\n".join(body), header


def _universe(args, headers=()) -> VarUniverse:
    if getattr(args, "vars", None):
        return make_universe(args.vars)
    if getattr(args, "n", None) is not None:
        return numbered_universe(args.n)
    for h in headers:
        if h:
            return make_universe(h)
    raise CliError("a universe is required: pass --vars or --n", EXIT_PARSE)


def _file_universe(args, *values):
    resolved = [_read_arg(v) for v in values]
    u = _universe(args, [h for _, h in resolved])
    return u, [t for t, _ in resolved]


def _load_subst(u, text):
    if text is None:
        return None
    if "subst:" in text or "\n" in text.strip():
        return parse_subst_file(u, text)
    return parse_subst(u, text)


# -- output helpers --------------------------------------------------------


def _emit(args, text: str, payload) -> None:
    out = json.dumps(payload, indent=2) if args.format == "json" else text
    if getattr(args, "out", None):
        Path(args.out).write_text(out + "\n")
    else:
        print(out)


def _element_text(u: VarUniverse, e: int) -> str:
    return format_sh(lt.decode(u, e))


def _domain(args, u, name):
    return lt.resolve_domain(u, name, ENUM_CAP, args.force)


def _warn_force(args, u):
    if getattr(args, "force", False) and u.n > ENUM_CAP:
        print(f"warning: enumerating past the n <= {ENUM_CAP} cap (n = {u.n})", file=sys.stderr)


# -- subcommands -----------------------------------------------------------


def cmd_eval(args) -> int:
    u, (sh_text, sh2_text, subst_text) = _file_universe(args, args.sh, args.sh2, args.subst)
    x = parse_sh(u, sh_text)
    op = args.op
    name, _, param = op.partition(":")
    if name in ("bin", "lub", "glb"):
        if sh2_text is None:
            raise CliError(f"--op {name} needs --sh2", EXIT_SEMANTIC)
        y = parse_sh(u, sh2_text)
        result = {"bin": bin, "lub": lub, "glb": glb}[name](x, y)
    elif name == "star":
        result = star_union(x)
    elif name == "self":
        if not param.isdigit() or int(param) < 1:
            raise CliError(f"self-union needs a positive index, got {param!r}", EXIT_PARSE)
        result = self_union(x, int(param))
    elif name in ("rel", "proj"):
        v = u.mask(param) if param else 0
        result = rel(v, x) if name == "rel" else proj(x, v)
    elif name == "amgu":
        sigma = _load_subst(u, subst_text)
        if sigma is None:
            raise CliError("--op amgu needs --subst", EXIT_SEMANTIC)
        result = amgu(x, sigma)
    else:
        raise CliError(f"unknown op {op!r}", EXIT_PARSE)
    _emit(args, format_sh(result), {"vars": list(u.names), "op": op, "result": to_json(result)})
    return EXIT_OK


def cmd_closure(args) -> int:
    u, (sh_text,) = _file_universe(args, args.sh)
    x = parse_sh(u, sh_text)
    if args.closure in ("classes", "ground-classes"):
        classes = [u.names_in(m) for m in cl.ground_equiv_classes(x)]
        text = " | ".join(",".join(c) for c in classes)
        _emit(args, text, {"vars": list(u.names), "classes": classes})
        return EXIT_OK
    c = cl.parse_closure(args.closure)
    result = cl.apply_closure(c, x)
    _emit(args, format_sh(result),
          {"vars": list(u.names), "closure": c.label, "result": to_json(result)})
    return EXIT_OK


def cmd_enumerate(args) -> int:
    u = _universe(args)
    _warn_force(args, u)
    d = _domain(args, u, args.domain)
    lines = [f"{d.label}: {len(d)} elements"]
    if args.list:
        lines += [_element_text(u, e) for e in d.sorted()]
    payload = lt.image_to_json(d)
    payload["count"] = len(d)
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_mi(args) -> int:
    u = _universe(args)
    _warn_force(args, u)
    if args.method == "formula":
        c = cl.parse_closure(args.domain)
        if c.kind == "Identity":
            k = u.n
        elif c.kind == "TSD":
            k = c.k
        else:
            raise CliError("--method formula applies to def, psd, tsd:<k> and sh", EXIT_SEMANTIC)
        c.check(u.n)
        mi, counts = lt.mi_formula(u, k)
        label = c.label
        a, m, t = counts.datoms, counts.m, counts.mi
    else:
        d = _domain(args, u, args.domain)
        if args.method == "bruteforce" and len(d) > lt.BRUTEFORCE_MAX and not args.force:
            raise CapExceeded(f"bruteforce MI is limited to {lt.BRUTEFORCE_MAX} elements "
                              f"({len(d)} in {d.label})")
        mi = lt.meet_irreducibles(d, args.method)
        a = len(lt.dual_atoms(d))
        t = len(mi)
        m = t - a - 1
        label = d.label
    ordered = sorted(mi, key=lt.element_key)
    count_line = f"dAtoms={a} M={m} MI={t}"
    text = "\n".join([_element_text(u, e) for e in ordered] + [count_line])
    _emit(args, text, {"vars": list(u.names), "label": f"MI({label})",
                       "elements": lt.elements_to_json(u, ordered),
                       "counts": {"dAtoms": a, "M": m, "MI": t}})
    return EXIT_OK


def cmd_complement(args) -> int:
    u = _universe(args)
    _warn_force(args, u)
    ref = _domain(args, u, args.reference)
    rem = _domain(args, u, args.remove)
    d = lt.complement(ref, rem, label=f"{ref.label} ~ {rem.label}")
    payload = lt.image_to_json(d)
    payload["count"] = len(d)
    _emit(args, f"{d.label}: {len(d)} elements", payload)
    return EXIT_OK


def cmd_product(args) -> int:
    u = _universe(args)
    _warn_force(args, u)
    d = lt.reduced_product(_domain(args, u, args.left), _domain(args, u, args.right))
    payload = lt.image_to_json(d)
    payload["count"] = len(d)
    _emit(args, f"{d.label}: {len(d)} elements", payload)
    return EXIT_OK


def cmd_verify(args) -> int:
    u = _universe(args)
    cfg = vf.TrialConfig(n=u.n, trials=args.trials, seed=args.seed, k=args.k)
    report = vf.run_suite(args.suite, cfg, u)
    text = report.dumps(timing=args.timing)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_witness(args) -> int:
    u, (t1, t2) = _file_universe(args, args.sh, args.sh2)
    a, b = parse_sh(u, t1), parse_sh(u, t2)
    try:
        w = vf.find_witness(a, b, args.k)
    except vf.PreconditionFailed as e:
        raise CliError(str(e), EXIT_SEMANTIC) from None
    payload = w.to_json()
    payload["rechecked"] = vf.recheck_witness(a, b, args.k, w)
    text = (f"sigma = {w.sigma}\nj = {w.j}\nside = {w.side}\n"
            f"group = {''.join(u.names_in(w.group)) if u.single_char else u.names_in(w.group)}")
    _emit(args, text, payload)
    return EXIT_OK


# -- parser ----------------------------------------------------------------


def _universe_opts(p, require=False):
    g = p.add_mutually_exclusive_group(required=require)
    g.add_argument("--vars", help="comma-separated variable names, e.g. x,y,z")
    g.add_argument("--n", type=int, help="use the universe v1..vN")


def _common(p):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="write output to this file")
    p.add_argument("--force", action="store_true", help=f"lift the n <= {ENUM_CAP} cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="setsharing",
                                     description="Set-sharing domains and their complements.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="apply an SH operator")
    _universe_opts(p)
    _common(p)
    p.add_argument("--sh", required=True, help="element, e.g. '{x, xy}', or @file")
    p.add_argument("--sh2")
    p.add_argument("--subst", help="substitution, e.g. '{x -> f(y)}', or @file")
    p.add_argument("--op", required=True,
                   help="bin | lub | glb | star | self:<j> | rel:<V> | proj:<V> | amgu")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("closure", help="apply a closure operator")
    _universe_opts(p)
    _common(p)
    p.add_argument("--sh", required=True)
    p.add_argument("--closure", required=True,
                   help="con | ps | ts:<k> | def | psd | tsd:<k> | ps-prime | sh | classes")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("enumerate", help="enumerate a domain image")
    _universe_opts(p, True)
    _common(p)
    p.add_argument("--domain", required=True)
    p.add_argument("--list", action="store_true", help="print every element in text mode")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("mi", help="meet-irreducible elements of a domain")
    _universe_opts(p, True)
    _common(p)
    p.add_argument("--domain", required=True)
    p.add_argument("--method", choices=("covers", "bruteforce", "formula"), default="covers")
    p.set_defaults(func=cmd_mi)

    p = sub.add_parser("complement", help="reference ~ removed domain")
    _universe_opts(p, True)
    _common(p)
    p.add_argument("--reference", required=True)
    p.add_argument("--remove", required=True)
    p.set_defaults(func=cmd_complement)

    p = sub.add_parser("product", help="reduced product of two domains")
    _universe_opts(p, True)
    _common(p)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("verify", help="run verification suites")
    _universe_opts(p, True)
    p.add_argument("--suite", default="all", choices=(*vf.SUITES, "all"))
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--out")
    p.add_argument("--timing", action="store_true", help="include per-check milliseconds")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("witness", help="ground substitution separating two elements")
    _universe_opts(p)
    _common(p)
    p.add_argument("--sh", required=True)
    p.add_argument("--sh2", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_witness)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except (UniverseError, UniverseMismatch, lt.NotSubdomain, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
