from fractions import Fraction

import pytest

from k3cm.counting import CountCache
from k3cm.fixtures import registry
from k3cm.newforms import NewformOracle
from k3cm.search import (
    SearchError,
    corroborate,
    lift_candidates,
    scan_prime,
    search,
)


@pytest.fixture(scope="module")
def fam():
    return registry().family("xlm")


@pytest.fixture(scope="module")
def cache():
    return CountCache()


def good_split_primes(fam, disc, bound=100):
    oracle = NewformOracle(disc)
    bad = fam.bad_primes(bound)
    return [p for p in oracle.split_primes(bound) if p not in bad]


def test_scan_rejects_inert_prime(fam):
    oracle = NewformOracle(-88)
    with pytest.raises(SearchError):
        scan_prime(fam, 7, oracle)  # 7 is inert for -88


def test_scan_contains_true_residue(fam, cache):
    oracle = NewformOracle(-88)
    for p in good_split_primes(fam, -88)[:4]:
        residues = scan_prime(fam, p, oracle, cache)
        want = 5 * pow(32, -1, p) % p
        assert want in residues, (p, residues)


def test_lift_ranks_true_parameter_first(fam, cache):
    primes = good_split_primes(fam, -88)[:3]
    sets = {p: scan_prime(fam, p, NewformOracle(-88), cache) for p in primes}
    reports = lift_candidates(sets, -88)
    assert reports[0].lam == Fraction(5, 32)


def test_search_rediscovers_1540(fam, cache):
    primes = good_split_primes(fam, -1540)[:4]
    reports = search(fam, -1540, primes, cache=cache)
    assert reports[0].lam == Fraction(539, 512)


def test_inconsistent_residues_do_not_lift(fam):
    sets = {101: {17}, 103: {55}, 107: {90}}
    reports = lift_candidates(sets, -88, height_bound=10**4)
    assert all(r.lam != Fraction(5, 32) for r in reports)


def test_corroborate_matches_and_refutes(fam, cache):
    oracle = NewformOracle(-88)
    primes = good_split_primes(fam, -88)[:6]
    rows = corroborate(fam, Fraction(5, 32), oracle, primes, cache)
    assert all(status == "match" for _, status in rows)
    rows_bad = corroborate(fam, Fraction(7, 32), oracle, primes, cache)
    assert any(status == "mismatch" for _, status in rows_bad)


def test_table1_lambdas_survive_scan(fam, cache):
    # soundness sample: true parameters reduce into the scan output
    reg = registry()
    sample = [r for r in reg.table1 if r.disc in (-228, -312, -660)]
    for row in sample:
        oracle = NewformOracle(row.disc)
        for p in good_split_primes(fam, row.disc)[:3]:
            if row.lam.denominator % p == 0:
                continue
            res = scan_prime(fam, p, oracle, cache)
            want = row.lam.numerator * pow(row.lam.denominator, -1, p) % p
            assert want in res, (row.disc, p)
