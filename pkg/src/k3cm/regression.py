"""Regression runner: replays every fixture and compares against expectations.

One plain-text line per check; any mismatch flips the run to failing.  The
documented source-text errata (see the data files' notes) are compared
against their independently derived values and reported with an `erratum`
tag so the exceptions stay visible in every run.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from k3cm.exact import Polynomial, RationalFunction
from k3cm.fixtures import parse_ratfun, registry
from k3cm.lattices import match_transcendental
from k3cm.newforms import NewformOracle
from k3cm.quadforms import reduce_form
from k3cm.sections import (
    assemble_ns,
    height,
    ns_discriminant,
    pairing,
    verify_section,
)
from k3cm.surfaces import classify_fibers


@dataclass
class Report:
    lines: list = field(default_factory=list)
    failures: int = 0
    checks: int = 0

    def add(self, ok: bool, text: str):
        self.checks += 1
        if not ok:
            self.failures += 1
        self.lines.append(f"{'ok' if ok else 'FAIL'}  {text}")

    def note(self, text: str):
        self.lines.append(f"note  {text}")

    def extend(self, other: "Report"):
        self.lines.extend(other.lines)
        self.failures += other.failures
        self.checks += other.checks

    def text(self) -> str:
        status = "PASS" if self.failures == 0 else "FAIL"
        return "\n".join(
            self.lines + [f"{status}: {self.checks - self.failures}/{self.checks} checks"]
        )


def _conjugate_ratfun(f: RationalFunction) -> RationalFunction:
    conj = lambda poly: Polynomial(poly.domain, [c.conjugate() for c in poly.coeffs])
    return RationalFunction(conj(f.num), conj(f.den))


def run_table1() -> Report:
    rep = Report()
    reg = registry()
    fam = reg.family("xlm")
    for row in reg.table1:
        tag = f"table1 lam={row.lam} disc={row.disc}"
        if row.status == "defective":
            rep.note(f"{tag}: defective printed row, excluded ({row.note[:80]}...)")
            continue
        surf = fam.specialize(row.lam, name=f"t1_{row.lam}")
        sec = verify_section(surf, parse_ratfun(row.u_text))
        h = height(sec)
        d = ns_discriminant(surf, [sec])
        T = match_transcendental(assemble_ns(surf, [sec]))
        exp_T = row.derived_T if row.derived_T is not None else row.T
        rep.add(h == row.height, f"{tag} height {h} = {row.height}")
        rep.add(d == row.disc, f"{tag} disc {d} = {row.disc}")
        suffix = " [erratum: printed T differs, see notes]" if row.derived_T else ""
        rep.add(T == exp_T, f"{tag} T {T} = {exp_T}{suffix}")
    return rep


def run_examples() -> Report:
    rep = Report()
    reg = registry()
    names = ["ex_1155", "ex_1995", "ex_627", "ex_715", "ex_1435", "ex_5460",
             "ex_1012", "ex_3003", "ex_3315"]
    for name in names:
        fx = reg.surfaces[name]
        surf = fx.build_surface(reg)
        secs = {}
        for sf in fx.sections:
            if sf.conjugate_of:
                base = secs[sf.conjugate_of.lower()]
                sec = verify_section(surf, _conjugate_ratfun(base.u), name=sf.name)
            else:
                sec = verify_section(surf, sf.u(), name=sf.name)
            secs[sf.name.lower()] = sec
            if sf.expected_height is not None:
                h = height(sec)
                rep.add(h == sf.expected_height,
                        f"{name} height({sf.name}) {h} = {sf.expected_height}")
        ordered = list(secs.values())
        d = ns_discriminant(surf, ordered)
        rep.add(d == fx.expected_disc, f"{name} disc {d} = {fx.expected_disc}")
        T = match_transcendental(assemble_ns(surf, ordered))
        suffix = " [erratum: printed T differs, see notes]" if fx.derived_T else ""
        rep.add(T == fx.working_T, f"{name} T {T} = {fx.working_T}{suffix}")
        for (a, b), val in fx.expected_pairings.items():
            got = pairing(surf, secs[a], secs[b])
            rep.add(abs(got) == abs(val),
                    f"{name} |<{a},{b}>| {abs(got)} = {abs(val)}")
    return rep


def run_extremal() -> Report:
    rep = Report()
    reg = registry()
    for fx in reg.extremal:
        surf = fx.build_surface(reg)
        fibers = classify_fibers(surf)
        euler = sum(f.euler * f.cusp.degree for f in fibers)
        rep.add(euler == 24, f"{fx.name} euler {euler} = 24")
        lat = assemble_ns(surf, [])
        det = lat.det
        rep.add(det == fx.expected_disc, f"{fx.name} disc {det} = {fx.expected_disc}")
        T = match_transcendental(lat)
        rep.add(T == fx.expected_T, f"{fx.name} T {T} = {fx.expected_T}")
    # semistable table: arithmetic consistency of each printed row
    for row in reg.semistable:
        prod = 1
        for n in row.config:
            prod *= n
        ok = prod == abs(row.disc) * row.torsion ** 2
        rep.add(ok, f"semistable {row.disc}: prod(config) {prod} = |disc| * tors^2")
        ok2 = row.T.discriminant == row.disc and reduce_form(row.T) == row.T
        rep.add(ok2, f"semistable {row.disc}: printed T reduced with matching disc")
    return rep


def run_corroboration(prime_count: int = 4) -> Report:
    from k3cm.counting import CountCache
    from k3cm.search import corroborate

    rep = Report()
    reg = registry()
    fam = reg.family("xlm")
    cache = CountCache()
    for row in reg.corroboration:
        oracle = NewformOracle(row.disc)
        primes = [
            p for p in oracle.split_primes(200)
            if p not in fam.bad_primes(200)
        ][:prime_count]
        rows = corroborate(fam, row.lam, oracle, primes, cache)
        bad = [p for p, s in rows if s == "mismatch"]
        rep.add(not bad, f"corroborate lam={row.lam} disc={row.disc}: "
                         f"{len([s for _, s in rows if s == 'match'])} matches, {len(bad)} mismatches")
    return rep


def run_regression(subset: str = "all") -> Report:
    rep = Report()
    if subset in ("all", "table1"):
        rep.extend(run_table1())
    if subset in ("all", "examples"):
        rep.extend(run_examples())
    if subset in ("all", "extremal"):
        rep.extend(run_extremal())
    if subset == "all":
        rep.extend(run_corroboration())
    return rep
