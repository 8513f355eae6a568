import random
from fractions import Fraction

import pytest

from k3cm.lattices import (
    DiscriminantForm,
    FiberBlock,
    GramLattice,
    MatchError,
    assemble_ns_gram,
    det_bareiss,
    discriminant_form,
    form_lattice,
    match_transcendental,
    mat_mul,
    smith_normal_form,
)
from k3cm.quadforms import BinaryQuadraticForm


def test_smith_examples():
    D, U, V = smith_normal_form([[2, 0], [0, 3]])
    assert [D[0][0], D[1][1]] == [1, 6]
    D, U, V = smith_normal_form([[1, 0], [0, 1]])
    assert [D[0][0], D[1][1]] == [1, 1]
    # A2 block: determinant 3, group Z/3
    D, U, V = smith_normal_form([[-2, 1], [1, -2]])
    assert [D[0][0], D[1][1]] == [1, 3]


def test_smith_random_properties():
    rng = random.Random(99)
    for _ in range(200):
        n = rng.randrange(1, 5)
        m = [[rng.randrange(-10, 11) for _ in range(n)] for _ in range(n)]
        D, U, V = smith_normal_form(m)
        assert mat_mul(mat_mul(U, m), V) == D
        assert abs(det_bareiss(U)) == 1
        assert abs(det_bareiss(V)) == 1
        diag = [D[i][i] for i in range(n)]
        for a, b in zip(diag, diag[1:]):
            if a and b:
                assert b % a == 0
            if a == 0:
                assert b == 0
        assert abs(det_bareiss(m)) == abs(det_bareiss(D))


def test_gram_lattice_basics():
    U = GramLattice([[0, 1], [1, 0]])
    assert U.det == -1 and U.signature() == (1, 1) and U.is_even()
    with pytest.raises(ValueError):
        GramLattice([[0, 1], [2, 0]])


def test_discriminant_form_unimodular_trivial():
    U = GramLattice([[0, 1], [1, 0]])
    df = discriminant_form(U)
    assert df.orders == () and df.group_order == 1


def test_discriminant_form_a2():
    # negative definite A2: group Z/3 with q(g) = -2/3 = 4/3 mod 2Z
    a2 = GramLattice([[-2, 1], [1, -2]])
    df = discriminant_form(a2)
    assert df.orders == (3,)
    assert df.q_value((1,)) in (Fraction(4, 3), Fraction(2, 3))
    # the generator or its double realizes -2/3 mod 2Z
    assert Fraction(4, 3) in {df.q_value((1,)), df.q_value((2,))}


def test_discriminant_form_group_order_random():
    rng = random.Random(5)
    done = 0
    while done < 50:
        n = rng.randrange(1, 5)
        m = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                v = rng.randrange(-4, 5)
                if i == j:
                    v = 2 * rng.randrange(-3, 4)
                m[i][j] = m[j][i] = v
        lat = GramLattice(m)
        d = lat.det
        if d == 0:
            continue
        done += 1
        df = discriminant_form(lat)
        assert df.group_order == abs(d)


def test_match_transcendental_rank2_selfcheck():
    # [2,0,44] against minus itself inside a tiny hyperbolic-shifted check:
    # NS = U + (-f) has q_NS = -q_f and determinant matching f's discriminant.
    f = BinaryQuadraticForm(1, 0, 22)
    neg = GramLattice(
        [
            [0, 1, 0, 0],
            [1, 0, 0, 0],
            [0, 0, -2, 0],
            [0, 0, 0, -44],
        ]
    )
    assert match_transcendental(neg) == f


def test_match_transcendental_catches_wrong_signature():
    with pytest.raises(MatchError):
        match_transcendental(GramLattice([[2, 0], [0, 2]]))


def test_assemble_ns_u_plus_blocks():
    # U + A1 + A2 + A4 + A6 + D4 is the rank-19 generic family lattice;
    # signature (1, 18) forces a positive determinant 2*3*5*7*4
    blocks = [FiberBlock("I", 2), FiberBlock("I", 3), FiberBlock("I", 5),
              FiberBlock("I", 7), FiberBlock("I*", 0)]
    lat = assemble_ns_gram(blocks, [])
    assert lat.rank == 19
    assert lat.signature() == (1, 18)
    assert lat.det == 840


def test_assemble_ns_with_section_det_equals_mwl_formula():
    # section with pO=0 meeting I5 on component 1, I3 on 1, I7 on 2, I0* leg:
    # disc = -840 * (4 - 4/5 - 2/3 - 10/7 - 1) = -88
    blocks = [FiberBlock("I", 5), FiberBlock("I", 3), FiberBlock("I", 2),
              FiberBlock("I", 7), FiberBlock("I*", 0)]
    sec = {"pO": 0, "contacts": [1, 1, None, 2, "far"], "pq": {}}
    lat = assemble_ns_gram(blocks, [sec])
    assert lat.rank == 20
    assert lat.det == -88
    assert match_transcendental(lat) == BinaryQuadraticForm(2, 0, 11)


def test_assemble_im_star_block_disc():
    # D_5 from I_1*: fibers I5, I3, I2, I7, I1* with no section: det -840
    blocks = [FiberBlock("I", 5), FiberBlock("I", 3), FiberBlock("I", 2),
              FiberBlock("I", 7), FiberBlock("I*", 1)]
    lat = assemble_ns_gram(blocks, [])
    assert lat.rank == 20
    assert lat.det == -840
    assert lat.signature() == (1, 19)
