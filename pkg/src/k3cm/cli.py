"""Command-line front end.

Subcommands: discs, ap, count, search, lift, verify, tlattice, regression.
Exit codes: 0 success, 1 mismatch/refuted, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from k3cm.exact import format_rational, parse_rational, primes_up_to


def _load_family(spec: str):
    """A registry family name, or a path to a family fixture file."""
    from k3cm.families import family_from_fields
    from k3cm.fixtures import parse_blocks, registry

    reg = registry()
    if spec in reg._families:
        return reg.family(spec)
    fields, cusps, splitting = {}, {}, {}
    with open(spec) as fh:
        for name, kv in parse_blocks(fh.read()):
            if name == "family":
                fields.update(kv)
            elif name == "cusps":
                cusps.update(kv)
            elif name == "splitting":
                splitting.update(kv)
    fields["cusps"] = cusps
    fields["splitting"] = splitting
    return family_from_fields(fields)


def _load_surface_file(path: str):
    from k3cm.fixtures import registry, surface_fixture_from_text

    return registry(), surface_fixture_from_text(open(path).read())


def cmd_discs(args) -> int:
    from k3cm.newforms import exponent_two_table

    table = exponent_two_table(args.max)
    print("h(d)\tdiscriminants")
    for h in sorted(table):
        ds = " ".join(str(d) for d in sorted(table[h], key=abs))
        print(f"{h}\t{ds}")
    total = sum(len(v) for v in table.values())
    print(f"# {total} discriminants with class group of exponent <= 2, |d| <= {args.max}")
    return 0


def cmd_ap(args) -> int:
    from k3cm.newforms import RAMIFIED, NewformOracle

    oracle = NewformOracle(args.disc)
    for p in primes_up_to(args.primes):
        if p == 2:
            continue
        vals = oracle.eigenvalue_abs(p)
        if vals == RAMIFIED:
            print(f"{p}\tram")
        elif vals == 0:
            print(f"{p}\t0")
        else:
            print(f"{p}\t{','.join(str(v) for v in sorted(vals))}")
    return 0


def cmd_count(args) -> int:
    from k3cm.counting import CountCache, count_family_member

    fam = _load_family(args.family)
    cache = CountCache(args.cache)
    p = args.prime
    if p in fam.bad_primes(p):
        print(f"p = {p} is excluded for this family", file=sys.stderr)
        return 2
    lams = [args.lam % p] if args.lam is not None else range(p)
    for lam in lams:
        n, t_alg, (c1, c2) = count_family_member(fam, p, lam, cache)
        print(f"{lam}\t{n}\t{t_alg}\t{c1}\t{c2}")
    return 0


def cmd_search(args) -> int:
    from k3cm.counting import CountCache
    from k3cm.newforms import SPLIT, NewformOracle
    from k3cm.search import search

    fam = _load_family(args.family)
    oracle = NewformOracle(args.disc)
    cache = CountCache(args.cache)
    primes = [
        p for p in primes_up_to(200)
        if p > 5 and oracle.prime_kind(p) == SPLIT and p not in fam.bad_primes(200)
    ][: args.primes]
    if len(primes) < 2:
        print("not enough usable split primes", file=sys.stderr)
        return 2
    if args.jobs > 1:
        reports = _search_parallel(fam, args, primes, cache)
    else:
        reports = search(fam, args.disc, primes, args.height_bound, cache)
    for rep in reports:
        print(rep.line())
    return 0 if reports else 1


def _search_parallel(fam, args, primes, cache):
    import multiprocessing as mp

    from k3cm.search import lift_candidates, scan_prime

    with mp.Pool(args.jobs) as pool:
        jobs = [(args.family, args.disc, p) for p in primes]
        results = pool.map(_scan_worker, jobs)
    residue_sets = dict(zip(primes, results))
    reports = lift_candidates(residue_sets, args.disc, args.height_bound)
    return reports


def _scan_worker(job):
    family_spec, disc, p = job
    from k3cm.newforms import NewformOracle
    from k3cm.search import scan_prime

    fam = _load_family(family_spec)
    return scan_prime(fam, p, NewformOracle(disc))


def cmd_lift(args) -> int:
    from k3cm.lift import LiftError, MultiPoly, PolySystem, lift_system

    with open(args.system) as fh:
        from k3cm.fixtures import parse_blocks

        blocks = parse_blocks(fh.read())
    variables, equations, guards = [], [], []
    for name, kv in blocks:
        if name != "system":
            continue
        variables = [v.strip() for v in kv["vars"].split(",")]
        for key, val in kv.items():
            target = equations if key.startswith("eq") else guards if key.startswith("guard") else None
            if target is None:
                continue
            target.append(_parse_multipoly(val, len(variables)))
    system = PolySystem(variables, equations, guards)
    try:
        values = lift_system(system, args.prime, args.max_precision)
    except LiftError as e:
        print(f"lift failed: {e}", file=sys.stderr)
        return 1
    for name, v in zip(variables, values):
        print(f"{name}\t{format_rational(v)}")
    return 0


def _parse_multipoly(text: str, nvars: int):
    from k3cm.lift import MultiPoly

    terms = {}
    for tok in text.split(" + "):
        if ":" in tok:
            c, exps = tok.split(":")
            e = tuple(int(x) for x in exps.split(","))
        else:
            c, e = tok, (0,) * nvars
        terms[e] = terms.get(e, Fraction(0)) + parse_rational(c)
    return MultiPoly(nvars, terms)


def cmd_verify(args) -> int:
    from k3cm.fixtures import registry

    reg = registry()
    if args.surface in reg.surfaces:
        fx = reg.surfaces[args.surface]
    else:
        reg, fx = _load_surface_file(args.surface)
    return _verify_fixture(reg, fx, args.sections)


def _verify_fixture(reg, fx, sections_path=None) -> int:
    from k3cm.lattices import match_transcendental
    from k3cm.regression import _conjugate_ratfun
    from k3cm.sections import assemble_ns, height, ns_discriminant, verify_section

    surf = fx.build_surface(reg)
    section_fixtures = fx.sections
    if sections_path:
        from k3cm.fixtures import parse_blocks, section_fixture_from_block

        section_fixtures = [
            section_fixture_from_block(kv)
            for name, kv in parse_blocks(open(sections_path).read())
            if name == "sections"
        ]
    secs = {}
    mismatch = False
    for sf in section_fixtures:
        if sf.conjugate_of:
            sec = verify_section(surf, _conjugate_ratfun(secs[sf.conjugate_of.lower()].u), name=sf.name)
        else:
            sec = verify_section(surf, sf.u(), name=sf.name)
        secs[sf.name.lower()] = sec
        h = height(sec)
        print(f"section {sf.name}: height {h}, (P.O) = {sec.pO}")
        for idx, c in sorted(sec.contacts.items()):
            if c.nonidentity:
                print(f"  contact {c.fiber}: {c.kind} k={c.k}")
        if sf.expected_height is not None and h != sf.expected_height:
            mismatch = True
    ordered = list(secs.values())
    if ordered:
        d = ns_discriminant(surf, ordered)
        T = match_transcendental(assemble_ns(surf, ordered))
    else:
        lat = assemble_ns(surf, [])
        d, T = lat.det, match_transcendental(lat)
    print(f"disc NS = {d}")
    print(f"T(X) = {T}")
    if fx.expected_disc is not None and d != fx.expected_disc:
        mismatch = True
    if fx.working_T is not None and T != fx.working_T:
        mismatch = True
    return 1 if mismatch else 0


def cmd_tlattice(args) -> int:
    from k3cm.fixtures import registry
    from k3cm.lattices import match_transcendental
    from k3cm.regression import _conjugate_ratfun
    from k3cm.sections import assemble_ns, verify_section

    reg = registry()
    fx = reg.surfaces.get(args.surface)
    if fx is None:
        reg, fx = _load_surface_file(args.surface)
    surf = fx.build_surface(reg)
    secs = {}
    for sf in fx.sections:
        if sf.conjugate_of:
            sec = verify_section(surf, _conjugate_ratfun(secs[sf.conjugate_of.lower()].u), name=sf.name)
        else:
            sec = verify_section(surf, sf.u(), name=sf.name)
        secs[sf.name.lower()] = sec
    lat = assemble_ns(surf, list(secs.values()))
    print(f"{lat.det}\t{match_transcendental(lat)}")
    return 0


def cmd_regression(args) -> int:
    from k3cm.regression import run_regression

    rep = run_regression(args.subset)
    print(rep.text())
    return 0 if rep.failures == 0 else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="k3cm",
        description="Exact workbench for singular elliptic K3 surfaces and CM newforms",
    )
    parser.add_argument("--cache", default=None, help="point-count cache file")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized property tests")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discs", help="exponent-2 field discriminant table")
    p.add_argument("--max", type=int, default=7000)
    p.set_defaults(func=cmd_discs)

    p = sub.add_parser("ap", help="newform |a_p| table")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--primes", type=int, default=100)
    p.set_defaults(func=cmd_ap)

    p = sub.add_parser("count", help="point counts of family members mod p")
    p.add_argument("--family", default="xlm")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=int, default=None)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("search", help="scan split primes and lift candidates")
    p.add_argument("--family", default="xlm")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--primes", type=int, default=4)
    p.add_argument("--height-bound", type=int, default=10**6)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("lift", help="p-adic Newton lift of a polynomial system")
    p.add_argument("--system", required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--max-precision", type=int, default=10)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("verify", help="verify a surface fixture")
    p.add_argument("--surface", required=True)
    p.add_argument("--sections", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tlattice", help="discriminant and transcendental lattice")
    p.add_argument("--surface", required=True)
    p.add_argument("--sections", default=None)
    p.set_defaults(func=cmd_tlattice)

    p = sub.add_parser("regression", help="replay all fixture expectations")
    p.add_argument("--subset", choices=["all", "table1", "examples", "extremal"], default="all")
    p.set_defaults(func=cmd_regression)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
