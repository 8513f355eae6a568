from fractions import Fraction

import pytest

from k3cm.exact import QQ, RationalFunction
from k3cm.fixtures import parse_ratfun, registry
from k3cm.lift import (
    LiftError,
    MultiPoly,
    PolySystem,
    build_ansatz,
    lift_and_verify,
    lift_system,
    newton_double,
    recover_section,
    solve_mod_p,
)
from k3cm.newforms import NewformOracle
from k3cm.sections import height, ns_discriminant, verify_section
from k3cm.surfaces import classify_fibers


@pytest.fixture(scope="module")
def reg():
    return registry()


@pytest.fixture(scope="module")
def fam(reg):
    return reg.family("xlm")


def plan_for(fibers, spec):
    plan = {}
    for i, f in enumerate(fibers):
        if f.label() in spec:
            plan[i] = spec[f.label()]
    return plan


def test_multipoly_basics():
    x = MultiPoly.variable(2, 0)
    y = MultiPoly.variable(2, 1)
    f = x * x - MultiPoly.constant(2, Fraction(4, 9))
    assert f.evaluate((Fraction(2, 3), Fraction(0))) == 0
    assert f.derivative(0).evaluate((Fraction(1), Fraction(0))) == 2
    g = (x + y) * (x - y)
    assert g.evaluate((Fraction(3), Fraction(2))) == 5


def test_simple_square_system():
    # x^2 = 4/9 over F_7: roots 3 and 4; lift yields +-2/3
    f = MultiPoly.variable(1, 0) * MultiPoly.variable(1, 0) - MultiPoly.constant(1, Fraction(4, 9))
    system = PolySystem(["x"], [f])
    values = lift_system(system, 7)
    assert values[0] in (Fraction(2, 3), Fraction(-2, 3))


def test_newton_doubling_step():
    f = MultiPoly.variable(1, 0) * MultiPoly.variable(1, 0) - MultiPoly.constant(1, Fraction(4, 9))
    system = PolySystem(["x"], [f])
    new, rows = newton_double(system, (3,), 7, 1)
    # 2/3 = 2 * 33 = 17 mod 49, and 17 = 3 mod 7
    assert new[0] == 17
    assert (17 * 17 * 9 - 4) % 49 == 0 and 17 % 7 == 3


def test_irrational_system_never_stabilizes():
    f = MultiPoly.variable(1, 0) * MultiPoly.variable(1, 0) - MultiPoly.constant(1, 2)
    system = PolySystem(["x"], [f])
    with pytest.raises(LiftError):
        lift_system(system, 7, max_doublings=6)


def test_non_p_integral_rejected():
    f = MultiPoly.variable(1, 0) - MultiPoly.constant(1, Fraction(1, 7))
    system = PolySystem(["x"], [f])
    with pytest.raises(LiftError):
        system.check_p_integral(7)


def test_infeasible_plan_raises(reg, fam):
    surf = fam.specialize(Fraction(5, 32))
    fibers = classify_fibers(surf)
    plan = plan_for(fibers, {"I5": 2, "I3": 1, "I7": 3, "I0*": "leg"})
    with pytest.raises(LiftError):
        build_ansatz(surf, fibers, plan)  # correction sum exceeds 4


def test_disc88_roundtrip(reg, fam):
    row = next(r for r in reg.table1 if r.disc == -88)
    surf = fam.specialize(row.lam, name="d88")
    fibers = classify_fibers(surf)
    plan = plan_for(fibers, {"I5": 1, "I3": 1, "I7": 2, "I0*": "leg"})
    trace = []
    sec = recover_section(surf, fibers, plan, 19, expected_disc=-88, trace=trace)
    assert sec.u == parse_ratfun(row.u_text)
    assert height(sec) == Fraction(11, 105)
    assert ns_discriminant(surf, [sec]) == -88
    # quadratic convergence: the doubling trace is 2, 4, 8, ...
    ks = [k for _, k in trace]
    assert ks == [2 ** (i + 1) for i in range(len(ks))]


def test_roundtrip_low_height_rows(reg, fam):
    # configurable subset: rows whose section was derived by hand-solvable
    # linear constraints; the pipeline must reproduce u exactly
    targets = {-88, -312, -520}
    for row in reg.table1:
        if row.disc not in targets or row.status == "defective":
            continue
        surf = fam.specialize(row.lam)
        fibers = classify_fibers(surf)
        sec0 = verify_section(surf, parse_ratfun(row.u_text))
        plan = {
            idx: (c.k if c.fiber.kind == "I" else "leg")
            for idx, c in sec0.contacts.items()
            if c.nonidentity
        }
        oracle = NewformOracle(row.disc)
        p = next(
            p for p in oracle.split_primes(60) if p not in fam.bad_primes(60)
        )
        sec = recover_section(surf, fibers, plan, p, expected_disc=row.disc)
        assert sec.u == sec0.u, row.disc


def test_mod_p_solution_count_at_split_prime(reg, fam):
    # one gauge-fixed solution pair at a split prime for the -88 plan
    surf = fam.specialize(Fraction(5, 32))
    fibers = classify_fibers(surf)
    plan = plan_for(fibers, {"I5": 1, "I3": 1, "I7": 2, "I0*": "leg"})
    ansatz = build_ansatz(surf, fibers, plan, expected_disc=-88)
    fixed = ansatz.pinned(0)
    sols = solve_mod_p(fixed, 19)
    assert len(sols) == 1
