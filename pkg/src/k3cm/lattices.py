"""Integer Gram lattices, Smith normal form, and finite quadratic forms.

The endgame here is match_transcendental: given the rank-20 Neron-Severi
Gram matrix of a verified surface, enumerate the reduced positive definite
rank-2 candidates of the same determinant and pick the one whose finite
quadratic form is minus that of the input.  Uniqueness of the match is part
of the contract (single-class genus for surfaces over Q) and is enforced.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from k3cm.quadforms import BinaryQuadraticForm, enumerate_reduced


# ---------------------------------------------------------------------------
# integer matrix helpers
# ---------------------------------------------------------------------------

def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def mat_identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def det_bareiss(m) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    a = [row[:] for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def smith_normal_form(m) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (D, U, V) with U*m*V = D, D diagonal, d1 | d2 | ..., U,V unimodular."""
    a = [row[:] for row in m]
    if not a:
        return [], [], []
    rows, cols = len(a), len(a[0])
    U, V = mat_identity(rows), mat_identity(cols)

    def nearest_div(x, y):
        q, r = divmod(x, y)
        if 2 * abs(r) > abs(y):
            q += 1
        return q

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        U[i] = [x - q * y for x, y in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(rows):
            a[r][i] -= q * a[r][j]
        for r in range(cols):
            V[r][i] -= q * V[r][j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in range(rows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(cols):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    k = 0
    while k < min(rows, cols):
        # smallest nonzero pivot tames coefficient growth
        pivot = None
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    pivot, best = (i, j), v
        if pivot is None:
            break
        swap_rows(k, pivot[0])
        swap_cols(k, pivot[1])
        # clear row and column k (balanced remainders keep entries small)
        while True:
            changed = False
            for i in range(k + 1, rows):
                if a[i][k]:
                    q = nearest_div(a[i][k], a[k][k])
                    row_op(i, k, q)
                    if a[i][k]:
                        swap_rows(k, i)
                    changed = True
            for j in range(k + 1, cols):
                if a[k][j]:
                    q = nearest_div(a[k][j], a[k][k])
                    col_op(j, k, q)
                    if a[k][j]:
                        swap_cols(k, j)
                    changed = True
            if not changed:
                break
        # enforce the divisibility chain
        entry = a[k][k]
        bad = None
        for i in range(k + 1, rows):
            for j in range(k + 1, cols):
                if a[i][j] % entry:
                    bad = i
                    break
            if bad:
                break
        if bad is not None:
            row_op(k, bad, -1)  # adds row `bad` into row k, re-run the pivot
            continue
        k += 1
    # normalize signs
    for i in range(min(rows, cols)):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            U[i] = [-x for x in U[i]]
    return a, U, V


# ---------------------------------------------------------------------------
# Gram lattices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GramLattice:
    gram: tuple  # tuple of tuples, symmetric integers

    def __init__(self, gram):
        rows = tuple(tuple(int(x) for x in row) for row in gram)
        n = len(rows)
        for i in range(n):
            if len(rows[i]) != n:
                raise ValueError("gram matrix must be square")
            for j in range(n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("gram matrix must be symmetric")
        object.__setattr__(self, "gram", rows)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return det_bareiss([list(r) for r in self.gram])

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def signature(self) -> tuple[int, int]:
        """(n_plus, n_minus) over Q by exact congruent diagonalization."""
        n = self.rank
        a = [[Fraction(x) for x in row] for row in self.gram]
        pos = neg = 0
        for k in range(n):
            if a[k][k] == 0:
                # find i > k with a[i][i] != 0 or combine rows to create one
                found = False
                for i in range(k + 1, n):
                    if a[i][i] != 0:
                        a[k], a[i] = a[i], a[k]
                        for r in range(n):
                            a[r][k], a[r][i] = a[r][i], a[r][k]
                        found = True
                        break
                if not found:
                    for i in range(k + 1, n):
                        if a[k][i] != 0:
                            for j in range(n):
                                a[k][j] += a[i][j]
                            for j in range(n):
                                a[j][k] += a[j][i]
                            found = True
                            break
                if not found:
                    raise ValueError("degenerate lattice")
            piv = a[k][k]
            if piv > 0:
                pos += 1
            else:
                neg += 1
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    f = a[i][k] / piv
                    for j in range(n):
                        a[i][j] -= f * a[k][j]
                    for j in range(n):
                        a[j][i] -= f * a[j][k]
        return pos, neg


# ---------------------------------------------------------------------------
# discriminant forms
# ---------------------------------------------------------------------------

def _mod2(x: Fraction) -> Fraction:
    return Fraction(x.numerator % (2 * x.denominator), x.denominator)


def _mod1(x: Fraction) -> Fraction:
    return Fraction(x.numerator % x.denominator, x.denominator)


@dataclass(frozen=True)
class DiscriminantForm:
    """Finite quadratic form on L^v / L presented by cyclic generators.

    orders: invariant factors > 1 (ascending divisibility);
    qmat[i][j]: the rational pairing values g_i . g_j of the chosen dual
    generators; q(x) is read mod 2Z on the diagonal and the pairing mod Z.
    """

    orders: tuple
    qmat: tuple  # tuple of tuples of Fraction

    @property
    def group_order(self) -> int:
        out = 1
        for d in self.orders:
            out *= d
        return out

    def q_value(self, coeffs) -> Fraction:
        """q(sum coeffs[i] * g_i) mod 2Z."""
        total = Fraction(0)
        k = len(self.orders)
        for i in range(k):
            total += coeffs[i] * coeffs[i] * self.qmat[i][i]
            for j in range(i + 1, k):
                total += 2 * coeffs[i] * coeffs[j] * self.qmat[i][j]
        return _mod2(total)

    def pairing(self, x, y) -> Fraction:
        total = Fraction(0)
        k = len(self.orders)
        for i in range(k):
            for j in range(k):
                total += x[i] * y[j] * self.qmat[i][j]
        return _mod1(total)

    def element_order(self, coeffs) -> int:
        return lcm(*(d // gcd(a, d) for a, d in zip(coeffs, self.orders))) if self.orders else 1

    def elements(self):
        return itertools.product(*(range(d) for d in self.orders))

    def negated(self) -> "DiscriminantForm":
        return DiscriminantForm(
            self.orders, tuple(tuple(-x for x in row) for row in self.qmat)
        )

    def _scaled(self):
        """Integer model: (D, qdiag mod 2D, pairing matrix mod D) with every
        value multiplied by the common denominator D."""
        D = 1
        for row in self.qmat:
            for x in row:
                D = lcm(D, Fraction(x).denominator)
        qm = [[int(x * D) for x in row] for row in self.qmat]
        return D, qm

    def element_table(self):
        """(element, order, scaled q) for every group element."""
        D, qm = self._scaled()
        k = len(self.orders)
        out = []
        for el in self.elements():
            q = 0
            for i in range(k):
                q += el[i] * el[i] * qm[i][i]
                for j in range(i + 1, k):
                    q += 2 * el[i] * el[j] * qm[i][j]
            out.append((el, self.element_order(el), q % (2 * D)))
        return D, qm, out

    def value_multiset(self):
        """Multiset of (element order, q value): a fast isometry invariant."""
        D, _, table = self.element_table()
        out: dict[tuple[int, Fraction], int] = {}
        for _, o, q in table:
            key = (o, Fraction(q, D))
            out[key] = out.get(key, 0) + 1
        return out

    def is_isomorphic(self, other: "DiscriminantForm") -> bool:
        """Brute-force isometry search preserving orders, q and the pairing."""
        if self.orders != other.orders:
            return False
        if not self.orders:
            return True
        if self.value_multiset() != other.value_multiset():
            return False
        k = len(self.orders)
        Ds, qms = self._scaled()
        Do, qmo, table = other.element_table()
        # common scale for comparisons
        scale_s, scale_o = lcm(Ds, Do) // Ds, lcm(Ds, Do) // Do
        D = lcm(Ds, Do)
        buckets: dict[tuple[int, int], list[tuple]] = {}
        for el, o, q in table:
            buckets.setdefault((o, q * scale_o % (2 * D)), []).append(el)

        def pair_o(x, y):
            total = 0
            for i in range(k):
                for j in range(k):
                    total += x[i] * y[j] * qmo[i][j]
            return total * scale_o % D

        gens = [tuple(1 if i == j else 0 for j in range(k)) for i in range(k)]

        def q_s(el):
            q = 0
            for i in range(k):
                q += el[i] * el[i] * qms[i][i]
                for j in range(i + 1, k):
                    q += 2 * el[i] * el[j] * qms[i][j]
            return q * scale_s % (2 * D)

        def extend(idx, images):
            if idx == k:
                return _generates(self.orders, images)
            key = (self.orders[idx], q_s(gens[idx]))
            for cand in buckets.get(key, []):
                ok = True
                for prev in range(idx):
                    if qms[idx][prev] * scale_s % D != pair_o(cand, images[prev]):
                        ok = False
                        break
                if ok and extend(idx + 1, images + [cand]):
                    return True
            return False

        return extend(0, [])


def _generates(orders, images) -> bool:
    """Do the image tuples generate all of prod Z/orders?

    The images generate iff the Z-span of the image vectors together with
    diag(orders) is all of Z^r, i.e. the SNF index of that column span is 1.
    """
    r = len(orders)
    cols = [list(img) for img in images] + [
        [orders[i] if i == j else 0 for i in range(r)] for j in range(r)
    ]
    mat = [[cols[c][rr] for c in range(len(cols))] for rr in range(r)]
    D, _, _ = smith_normal_form(mat)
    index = 1
    for i in range(r):
        index *= D[i][i]
    return index == 1


def discriminant_form(lattice: GramLattice) -> DiscriminantForm:
    """Nikulin's finite quadratic form on L^v/L for an even lattice."""
    if not lattice.is_even():
        raise ValueError("discriminant form needs an even lattice")
    n = lattice.rank
    G = [list(r) for r in lattice.gram]
    if det_bareiss(G) == 0:
        raise ValueError("degenerate lattice")
    D, U, V = smith_normal_form(G)
    # generators of L^v/L: columns of V scaled by 1/d_i, for d_i > 1.
    # Translating a generator by a lattice vector changes q by an even
    # integer, so the integer parts of the coordinates can be dropped.
    gens = []
    orders = []
    for i in range(n):
        d = D[i][i]
        if d > 1:
            orders.append(d)
            gens.append([V[r][i] % d for r in range(n)])
    k = len(gens)
    qmat = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        Gw = [sum(G[r][c] * gens[i][c] for c in range(n)) for r in range(n)]
        for j in range(i, k):
            val = sum(Gw[r] * gens[j][r] for r in range(n))
            qmat[i][j] = qmat[j][i] = Fraction(val, orders[i] * orders[j])
    return DiscriminantForm(tuple(orders), tuple(tuple(row) for row in qmat))


# ---------------------------------------------------------------------------
# transcendental lattice matching
# ---------------------------------------------------------------------------

class MatchError(ValueError):
    pass


def form_lattice(f: BinaryQuadraticForm) -> GramLattice:
    return GramLattice(f.gram())


def match_transcendental(ns: GramLattice) -> BinaryQuadraticForm:
    """The unique reduced [2a,b,2c] with q = -q_ns and |disc| = |det ns|.

    The input must be an even hyperbolic-signature lattice (one positive
    eigenvalue); for rank-20 input this is the Neron-Severi lattice of a
    singular K3 surface and the output is its transcendental lattice.
    """
    pos, neg = ns.signature()
    if pos != 1:
        raise MatchError(f"expected signature (1, n-1), got ({pos}, {neg})")
    d = ns.det
    if d >= 0:
        raise MatchError("determinant must be negative")
    target = discriminant_form(ns).negated()
    matches = []
    for cand in sorted(enumerate_reduced(d)):
        if discriminant_form(form_lattice(cand)).is_isomorphic(target):
            matches.append(cand)
    if not matches:
        raise MatchError(f"no rank-2 form of discriminant {d} matches the input")
    if len(matches) > 1:
        raise MatchError(f"genus of discriminant {d} has several classes: {matches}")
    return matches[0]


# ---------------------------------------------------------------------------
# Neron-Severi assembly from fiber blocks and section data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiberBlock:
    """Reducible-fiber root block: kind "I" with n >= 2, or "I*" with m >= 0."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind == "I":
            if self.n < 2:
                raise ValueError("I_n block needs n >= 2")
        elif self.kind == "I*":
            if self.n < 0:
                raise ValueError("I_m* block needs m >= 0")
        else:
            raise ValueError(f"unknown block kind {self.kind}")

    @property
    def rank(self) -> int:
        return self.n - 1 if self.kind == "I" else self.n + 4

    @property
    def root_disc(self) -> int:
        """|discriminant| of the root lattice: n for A_{n-1}, 4 for D."""
        return self.n if self.kind == "I" else 4

    def adjacency(self):
        """Edges of the block's Dynkin graph over local vertex indices.

        I_n: path 0..n-2 (component Theta_i at local index i-1).
        I_m*: [near, c_1..c_{m+1}, far1, far2]; near-c1, chain, c_last-far1/2.
        """
        if self.kind == "I":
            return [(i, i + 1) for i in range(self.n - 2)]
        m = self.n
        edges = [(0, 1)]
        edges += [(1 + i, 2 + i) for i in range(m)]
        last_c = m + 1
        edges += [(last_c, m + 2), (last_c, m + 3)]
        return edges

    def contact_vertex(self, contact) -> int | None:
        """Local vertex hit by a section; None for the identity component."""
        if contact in (None, 0, "identity"):
            return None
        if self.kind == "I":
            i = int(contact)
            if not 1 <= i <= self.n - 1:
                raise ValueError(f"I_{self.n} component index {i} out of range")
            return i - 1
        m = self.n
        if contact == "near":
            return 0
        if contact in ("far", "far1"):
            return m + 2
        if contact == "far2":
            return m + 3
        raise ValueError(f"bad I_m* contact {contact!r}")


def assemble_ns_gram(blocks, sections) -> GramLattice:
    """Gram matrix on {O, F, non-identity fiber components, sections}.

    blocks: FiberBlock list; sections: list of dicts with keys
      pO (int), contacts (list aligned with blocks), and pq (dict
      (i, j) -> intersection number between section i and j).
    """
    offs = []
    pos = 2
    for b in blocks:
        offs.append(pos)
        pos += b.rank
    nsec = len(sections)
    size = pos + nsec
    g = [[0] * size for _ in range(size)]
    g[0][0] = -2          # O.O
    g[0][1] = g[1][0] = 1  # O.F
    for b, off in zip(blocks, offs):
        for i in range(b.rank):
            g[off + i][off + i] = -2
        for i, j in b.adjacency():
            g[off + i][off + j] = g[off + j][off + i] = 1
    for s_idx, sec in enumerate(sections):
        r = pos + s_idx
        g[r][r] = -2
        g[r][1] = g[1][r] = 1              # P.F
        g[r][0] = g[0][r] = int(sec["pO"])  # P.O
        for b, off, contact in zip(blocks, offs, sec["contacts"]):
            v = b.contact_vertex(contact)
            if v is not None:
                g[r][off + v] = g[off + v][r] = 1
        for (i, j), val in sec.get("pq", {}).items():
            if i == s_idx and j != s_idx:
                rr = pos + j
                g[r][rr] = g[rr][r] = int(val)
    return GramLattice(g)
