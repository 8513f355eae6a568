"""Registry integrity plus the codified source-text errata.

Each deviation between a printed table entry and the computation is pinned
here with an independent certificate, so the exceptions stay visible and
any drift in either direction fails loudly.
"""

import itertools
from fractions import Fraction

import pytest

from k3cm.fixtures import FixtureError, parse_poly, parse_ratfun, registry
from k3cm.quadforms import BinaryQuadraticForm
from k3cm.lattices import FiberBlock, MatchError, assemble_ns_gram, match_transcendental


@pytest.fixture(scope="module")
def reg():
    return registry()


def test_registry_loads_everything(reg):
    assert len(reg.table1) == 26
    assert len(reg.extremal) == 5
    assert len(reg.semistable) == 10
    assert len(reg.corroboration) == 4
    assert len(reg.surfaces) == 9


def test_checksums_guard_edits(tmp_path, monkeypatch):
    import k3cm.fixtures as fx

    reg2 = fx.FixtureRegistry.__new__(fx.FixtureRegistry)
    real_read = fx.FixtureRegistry._read

    def tampered(self, name):
        text = real_read(self, name)
        if name == "table1.rows":
            text = text.replace("-88", "-89", 1)
        return text

    monkeypatch.setattr(fx.FixtureRegistry, "_read", tampered)
    with pytest.raises(FixtureError):
        fx.FixtureRegistry()


def test_every_expectation_is_attributed(reg):
    for row in reg.table1:
        assert row.source
    for fx_ in reg.surfaces.values():
        assert fx_.source
    for row in reg.corroboration:
        assert row.source


EXPECTED_ERRATA = {
    "defective": {-900},
    "erratum_t": {-268, -88, -228, -1012},
    "restored_u": {-1932, -708, -1092, -1428},
}


def test_errata_set_is_exactly_as_documented(reg):
    got = {"defective": set(), "erratum_t": set(), "restored_u": set()}
    for row in reg.table1:
        if row.status != "ok":
            got[row.status].add(row.disc)
    for fx_ in reg.surfaces.values():
        if fx_.status != "ok":
            got[fx_.status].add(fx_.expected_disc)
    assert got == EXPECTED_ERRATA


def test_erratum_T_entries_are_wrong_factorizations(reg):
    # every T erratum pairs the printed and derived diagonal data
    by_disc = {r.disc: r for r in reg.table1}
    # -268: the printed form does not even have the row's discriminant
    row = by_disc[-268]
    assert row.T.discriminant == -332 and row.derived_T.discriminant == -268
    # -88 and -228: printed and derived forms are the two diagonal splits
    for disc in (-88, -228):
        row = by_disc[disc]
        assert row.T.discriminant == disc == row.derived_T.discriminant
        assert row.T != row.derived_T
    fx_ = reg.surfaces["ex_1012"]
    assert fx_.expected_T.discriminant == -1012 == fx_.derived_T.discriminant


def test_defective_row_certificate(reg):
    """The first printed row cannot exist: an impossibility proof in two parts."""
    row1 = next(r for r in reg.table1 if r.status == "defective")
    row8 = next(r for r in reg.table1 if r.disc == -340)
    # (i) the printed section duplicates the -340 row's section verbatim
    assert parse_ratfun(row1.u_text) == parse_ratfun(row8.u_text)
    assert row1.lam == row8.lam
    # (ii) the printed u vanishes at the I3 cusp t = 1 and the I0* cusp
    # t = -1/2, forcing correction terms 2/3 and 1; with those present no
    # admissible correction sum reaches height 15/14
    u = parse_ratfun(row1.u_text)
    assert u.num.valuation_at(Fraction(1)) >= 1
    assert u.num.valuation_at(Fraction(-1, 2)) >= 1
    corr = lambda k, n: Fraction(k * (n - k), n)
    sums = set()
    for k5, k2, k7 in itertools.product(range(3), range(2), range(4)):
        for pO in (0, 1):
            sums.add(
                4 + 2 * pO
                - (corr(k5, 5) + Fraction(2, 3) + corr(k2, 2) + corr(k7, 7) + 1)
            )
    assert Fraction(15, 14) not in sums
    # (iii) the only contact pattern with height 15/14 and the printed
    # determinant -900 violates the K3 embedding: no rank-2 partner exists
    blocks = [FiberBlock("I", 5), FiberBlock("I", 3), FiberBlock("I", 2),
              FiberBlock("I", 7), FiberBlock("I*", 0)]
    sec = {"pO": 0, "contacts": [None, None, 1, 2, "far"], "pq": {}}
    lat = assemble_ns_gram(blocks, [sec])
    assert lat.det == -900
    with pytest.raises(MatchError):
        match_transcendental(lat)


def test_restored_rows_match_printed_invariants(reg):
    # restored u rows reproduce every printed invariant (height, disc, T)
    from k3cm.sections import assemble_ns, height, ns_discriminant, verify_section

    fam = reg.family("xlm")
    for row in reg.table1:
        if row.status != "restored_u":
            continue
        surf = fam.specialize(row.lam)
        sec = verify_section(surf, parse_ratfun(row.u_text))
        assert height(sec) == row.height
        assert ns_discriminant(surf, [sec]) == row.disc
        assert match_transcendental(assemble_ns(surf, [sec])) == row.T


def test_factored_polynomial_parser():
    f = parse_poly("-3/2 * 0;1^2 * -1;1")
    assert f.to_text() == "0;0;3/2;-3/2"
    g = parse_poly("7;15360^2")
    assert g.degree == 2 and g.coeffs[0] == 49
