"""Parameter search: scan split primes, match eigenvalues, lift candidates.

For a fixed target field the scan walks every lambda in F_p, computes the
two candidate transcendental traces from the point count, and keeps the
lambdas where one sign choice matches the newform's |a_p|.  Residue tuples
across several primes are combined by CRT and recognized as small-height
rationals; corroboration replays the test at further primes.  Membership in
the output is necessary evidence only, never a proof of rank 20.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from k3cm.counting import CountCache, CountingError, count_family_member
from k3cm.exact import crt_combine, rational_reconstruct
from k3cm.newforms import SPLIT, NewformOracle


class SearchError(ValueError):
    pass


@dataclass
class CandidateReport:
    target_disc: int
    lam: Fraction
    height: int
    matched: list = field(default_factory=list)   # (p, residue) pairs
    evidence: list = field(default_factory=list)  # (p, candidates, admissible)

    @property
    def primes_matched(self) -> int:
        return len(self.matched)

    def line(self) -> str:
        from k3cm.exact import format_rational

        return f"{format_rational(self.lam)}\t{self.height}\t{self.primes_matched}"


def scan_prime(family, p: int, oracle: NewformOracle, cache: CountCache | None = None) -> set[int]:
    """All lambda in F_p whose candidate traces match the newform at p."""
    if oracle.prime_kind(p) != SPLIT:
        raise SearchError(f"p = {p} is not split for discriminant {oracle.field_disc}")
    if p in family.bad_primes(p):
        raise SearchError(f"p = {p} is a bad prime for family {family.name}")
    admissible = oracle.eigenvalue_abs(p)
    out = set()
    skip = _degenerate_lambdas(family, p)
    for lam in range(p):
        if lam in skip:
            continue
        try:
            _, _, cands = count_family_member(family, p, lam, cache)
        except CountingError:
            continue
        if any(abs(c) in admissible for c in cands):
            out.add(lam)
    return out


def _degenerate_lambdas(family, p: int) -> set[int]:
    """lambda values colliding with a fixed cusp mod p (degenerate members)."""
    out = set()
    for text in family.cusp_table.values():
        if text in ("lambda", "inf"):
            continue
        from k3cm.exact import parse_rational

        q = parse_rational(text)
        if q.denominator % p:
            out.add(q.numerator * pow(q.denominator, -1, p) % p)
    return out


def lift_candidates(
    residue_sets: dict[int, set[int]],
    target_disc: int,
    height_bound: int = 10**6,
    max_tuples: int = 10**4,
    max_residues_per_prime: int = 5,
) -> list[CandidateReport]:
    """CRT + rational reconstruction over the product of residue sets.

    Primes with oversized residue sets are dropped from lifting (kept for
    corroboration); candidates are ranked by height then by the smoothness
    of numerator times denominator.
    """
    if len(residue_sets) < 2:
        raise SearchError("need residues at >= 2 primes to lift")
    usable = {p: rs for p, rs in residue_sets.items() if 0 < len(rs) <= max_residues_per_prime}
    if len(usable) < 2:
        raise SearchError("not enough primes with small residue sets")
    primes = sorted(usable)
    total = 1
    for p in primes:
        total *= len(usable[p])
    if total > max_tuples:
        raise SearchError(f"residue fan-out {total} exceeds the cap {max_tuples}")
    import itertools

    found: dict[Fraction, CandidateReport] = {}
    for combo in itertools.product(*(sorted(usable[p]) for p in primes)):
        pairs = list(zip(combo, primes))
        value, modulus = crt_combine(pairs)
        lam = rational_reconstruct(value, modulus)
        if lam is None:
            continue
        h = max(abs(lam.numerator), lam.denominator)
        if h > height_bound:
            continue
        rep = found.get(lam)
        if rep is None:
            found[lam] = CandidateReport(
                target_disc, lam, h, matched=[(p, r) for r, p in pairs]
            )
    out = sorted(found.values(), key=lambda r: (r.height, _smoothness(r.lam)))
    return out


def _smoothness(q: Fraction) -> int:
    """Largest prime factor of numerator * denominator (crude rank key)."""
    n = abs(q.numerator) * q.denominator
    if n == 0:
        return 0
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            out = d
            while n % d == 0:
                n //= d
        d += 1
    return max(out, n) if n > 1 else out


def corroborate(family, lam: Fraction, oracle: NewformOracle, primes, cache=None) -> list:
    """Per-prime match evidence for a fixed rational parameter.

    Returns (p, status) rows with status in {"match", "mismatch", "skipped"};
    one mismatch at a good split prime refutes the candidate.
    """
    out = []
    bad = family.bad_primes(max(primes) if primes else 2)
    for p in primes:
        if p in bad or oracle.prime_kind(p) != SPLIT:
            out.append((p, "skipped"))
            continue
        if lam.denominator % p == 0:
            out.append((p, "skipped"))
            continue
        lam_p = lam.numerator * pow(lam.denominator, -1, p) % p
        if lam_p in _degenerate_lambdas(family, p):
            out.append((p, "skipped"))
            continue
        _, _, cands = count_family_member(family, p, lam_p, cache)
        admissible = oracle.eigenvalue_abs(p)
        ok = any(abs(c) in admissible for c in cands)
        out.append((p, "match" if ok else "mismatch"))
    return out


def search(family, target_disc: int, primes, height_bound: int = 10**6, cache=None):
    """Full Algorithm-10 style run: scan, lift, return ranked reports."""
    oracle = NewformOracle(target_disc)
    residue_sets = {}
    for p in primes:
        try:
            residue_sets[p] = scan_prime(family, p, oracle, cache)
        except SearchError:
            continue
    reports = lift_candidates(residue_sets, target_disc, height_bound)
    for rep in reports:
        rep.evidence = [
            (p, sorted(rs)) for p, rs in sorted(residue_sets.items())
        ]
    return reports
