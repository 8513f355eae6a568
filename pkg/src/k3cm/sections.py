"""Mordell-Weil sections: verification, fiber contacts, heights, pairings.

A section is stored through its x-coordinate u(t) plus the square class m
and cofactor w(t) with y = sqrt(m) w.  Contacts with reducible fibers are
read off from exact valuations against the drifting node position; heights
and pairings then follow from the standard correction tables, and the
Neron-Severi discriminant from the Mordell-Weil determinant formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from k3cm.exact import (
    QQ,
    Polynomial,
    QuadField,
    QuadNum,
    RationalFunction,
    Series,
    poly_series,
    ratfun_series,
    squarefree_part,
)
from k3cm.lattices import FiberBlock, GramLattice, assemble_ns_gram
from k3cm.surfaces import (
    Cusp,
    FiberDescriptor,
    WeierstrassSurface,
    classify_fibers,
    node_series,
    squarefree_decomposition,
)


class SectionError(ValueError):
    pass


class NonSemistableError(ValueError):
    """Two sections meet non-identity components of an additive fiber."""


# ---------------------------------------------------------------------------
# contacts
# ---------------------------------------------------------------------------

@dataclass
class Contact:
    fiber: FiberDescriptor
    kind: str              # identity | cycle | far-cycle | star-leg | star-near | star-far
    k: int = 0             # I_n: min(i, n-i); stars: unused
    leg_root: object = None  # I_0*: which residual-cubic root carries the leg
    xi: Series | None = None   # local x - node series (cycle contacts)
    eta: Series | None = None  # local w series

    @property
    def nonidentity(self) -> bool:
        return self.kind != "identity"

    def correction(self) -> Fraction:
        f = self.fiber
        if self.kind == "identity":
            return Fraction(0)
        if f.kind == "I":
            return Fraction(self.k * (f.n - self.k), f.n)
        if f.n == 0 or self.kind == "star-near":
            return Fraction(1)
        return 1 + Fraction(f.n, 4)


@dataclass
class Section:
    u: RationalFunction
    w: RationalFunction
    msq: object                  # square class scalar with y^2 = msq * w^2
    pO: int
    name: str = "P"
    contacts: dict = field(default_factory=dict)   # id(fiber-index) -> Contact

    @property
    def domain(self):
        return self.u.domain

    def correction_sum(self, fibers) -> Fraction:
        total = Fraction(0)
        for idx, f in enumerate(fibers):
            c = self.contacts.get(idx)
            if c is not None:
                total += c.correction() * f.cusp.degree
        return total


# ---------------------------------------------------------------------------
# chart handling: a section seen near one cusp
# ---------------------------------------------------------------------------

def _ratfun_flip(f: RationalFunction, weight: int) -> RationalFunction:
    """s^weight * f(1/s) as a rational function of s."""
    num, den = f.num, f.den
    dn, dd = num.degree, den.degree
    rn = num.reverse(dn)
    rd = den.reverse(dd)
    shift = weight + dd - dn
    d = f.domain
    s = Polynomial.x(d)
    if shift >= 0:
        return RationalFunction(rn * s ** shift, rd)
    return RationalFunction(rn, rd * s ** (-shift))


def _local_chart(surface, sec: Section, cusp: Cusp):
    """(surface, u, w, t0) viewed in the chart where the cusp is finite."""
    if cusp.kind == "finite":
        return surface, sec.u, sec.w, cusp.value
    if cusp.kind == "infinity":
        return (
            surface.flipped(),
            _ratfun_flip(sec.u, 4),
            _ratfun_flip(sec.w, 6),
            surface.domain.zero,
        )
    raise SectionError("orbit cusps have no single local chart")


# ---------------------------------------------------------------------------
# section verification
# ---------------------------------------------------------------------------

def _embed(dom, value):
    """Lift a stored scalar (possibly a plain Fraction) into dom."""
    if isinstance(value, Fraction):
        return dom.from_fraction(value)
    return value


def verify_section(surface: WeierstrassSurface, u: RationalFunction, name: str = "P") -> Section:
    """Exact check that u is the x-coordinate of a section; returns it.

    The right-hand side R = u^3 + a2 u^2 + a4 u + a6 must factor as
    m * w(t)^2 for a scalar square class m, established by squarefree
    decomposition; pole orders of u must be even, giving (P.O).
    """
    if isinstance(u, Polynomial):
        u = RationalFunction(u)
    dom = u.domain
    base_surface = surface
    if dom != surface.domain:
        surface = surface.map_domain(dom)
    R = surface.rhs(u)
    if R.is_zero():
        raise SectionError("u lies on the zero locus y = 0 identically")
    m, w = _square_cofactor(R)
    if m is None:
        raise SectionError("RHS(u) is not a square class times a square")
    # (P.O): half the (even) pole orders, finite places plus infinity
    pO = 0
    _, sq = squarefree_decomposition(u.den)
    for g, e in sq:
        if e % 2:
            raise SectionError(f"odd pole order {e} along {g.to_text()}")
        pO += (e // 2) * g.degree
    inf_pole = u.num.degree - u.den.degree - 4
    if inf_pole > 0:
        if inf_pole % 2:
            raise SectionError("odd pole order at infinity")
        pO += inf_pole // 2
    sec = Section(u=u, w=w, msq=m, pO=pO, name=name)
    _attach_contacts(base_surface, sec)
    return sec


def _square_cofactor(R: RationalFunction):
    """Write R = m * w^2 exactly; returns (m, w) or (None, None)."""
    dom = R.domain
    lead_n, sq_n = squarefree_decomposition(R.num)
    lead_d, sq_d = squarefree_decomposition(R.den)
    one = Polynomial.constant(dom, dom.one)
    wn, wd = one, one
    for g, e in sq_n:
        if e % 2:
            return None, None
        wn = wn * g ** (e // 2)
    for g, e in sq_d:
        if e % 2:
            return None, None
        wd = wd * g ** (e // 2)
    m = dom.div(lead_n, lead_d)
    if dom == QQ:
        m0 = Fraction(m)
        kernel = squarefree_part(m0.numerator * m0.denominator)
        scale = m0 / kernel
        # scale = (r)^2 for a rational r; fold r into w
        num, den = scale.numerator, scale.denominator
        import math

        r = Fraction(math.isqrt(num), math.isqrt(den))
        assert r * r == scale
        wn = wn.scale(r)
        m = Fraction(kernel)
    return m, RationalFunction(wn, wd)


# ---------------------------------------------------------------------------
# contact determination
# ---------------------------------------------------------------------------

def _attach_contacts(surface: WeierstrassSurface, sec: Section):
    fibers = classify_fibers(surface)
    sec.fibers = fibers
    for idx, f in enumerate(fibers):
        if not f.reducible:
            continue
        sec.contacts[idx] = determine_contact(surface, sec, f)


def determine_contact(surface, sec: Section, fiber: FiberDescriptor) -> Contact:
    if fiber.cusp.kind == "orbit":
        return _orbit_contact(surface, sec, fiber)
    surf_c, u_c, w_c, t0 = _local_chart(surface, sec, fiber.cusp)
    dom = u_c.domain
    if surf_c.domain != dom:
        surf_c = surf_c.map_domain(dom)
    t0 = _embed(dom, t0) if isinstance(t0, Fraction) else t0
    if not u_c.is_zero() and u_c.valuation_at(t0) < 0:
        return Contact(fiber, "identity")
    if fiber.kind == "I":
        return _cycle_contact(surf_c, u_c, w_c, t0, fiber)
    return _star_contact(surf_c, u_c, w_c, t0, fiber)


def _cycle_contact(surf_c, u_c, w_c, t0, fiber) -> Contact:
    n = fiber.n
    dom = u_c.domain
    if n == 1:
        return Contact(fiber, "identity")  # no non-identity component exists
    if fiber.node_x is None:
        raise SectionError(f"missing node data at {fiber}")
    node = _embed(dom, fiber.node_x)
    if not dom.eq(u_c(t0), node):
        return Contact(fiber, "identity")
    prec = n + 4
    x_node = node_series(surf_c, t0, node, prec)
    xi = ratfun_series(u_c, t0, prec) - x_node
    eta = ratfun_series(w_c, t0, prec) if not w_c.is_zero() else Series(dom, [], prec)
    k = xi.valuation()
    if k == 0:
        return Contact(fiber, "identity")
    if 2 * k < n:
        return Contact(fiber, "cycle", k=k, xi=xi, eta=eta)
    if n % 2 == 0:
        return Contact(fiber, "far-cycle", k=n // 2, xi=xi, eta=eta)
    if k >= prec:
        raise SectionError(f"valuation saturated working precision at {fiber}")
    raise SectionError(
        f"x-contact depth {k} exceeds the I_{n} pattern at {fiber}; model not normalized"
    )


def _star_contact(surf_c, u_c, w_c, t0, fiber) -> Contact:
    dom = u_c.domain
    if u_c.is_zero():
        v = 10**9
    else:
        v = u_c.valuation_at(t0)
    if v <= 0:
        return Contact(fiber, "identity")
    m = fiber.n
    prec = m + 6
    useries = ratfun_series(u_c, t0, prec + 1)
    X = Series(dom, useries.coeffs[1:], prec)  # u / (t - t0)
    if fiber.n == 0:
        leg = X[0]
        return Contact(fiber, "star-leg", leg_root=leg)
    # I_m*, m >= 1: compare against the drifting double root of the
    # untwisted cubic X^3 + (a2/pi) X^2 + (a4/pi^2) X + (a6/pi^3)
    x2 = poly_series(surf_c.a2, t0, prec + 1)
    x4 = poly_series(surf_c.a4, t0, prec + 2)
    x6 = poly_series(surf_c.a6, t0, prec + 3)
    a2b = Series(dom, x2.coeffs[1:], prec)
    a4b = Series(dom, x4.coeffs[2:], prec)
    node = _untwisted_node_series(dom, a2b, a4b, _embed(dom, fiber.double_root), prec)
    diff = X - node
    vdiff = diff.valuation()
    need = (m + 1) // 2
    if vdiff >= need:
        return Contact(fiber, "star-far")
    if vdiff == 0:
        return Contact(fiber, "star-near")
    raise SectionError(
        f"section depth at {fiber} lands on a double component (v = {vdiff})"
    )


def _untwisted_node_series(dom, a2b: Series, a4b: Series, x0, prec: int) -> Series:
    """Newton root of 3X^2 + 2(a2/pi)X + (a4/pi^2) near the double root x0."""
    three = Series(dom, [dom.from_fraction(Fraction(3))], prec)
    two = Series(dom, [dom.from_fraction(Fraction(2))], prec)
    six = Series(dom, [dom.from_fraction(Fraction(6))], prec)
    x = Series(dom, [x0], prec)
    for _ in range(prec.bit_length() + 2):
        fp = three * x * x + two * a2b * x + a4b
        fs = six * x + two * a2b
        if dom.is_zero(fs.coeffs[0]):
            raise SectionError("degenerate untwisted node")
        x = x - fp / fs
        if fp.is_zero_to_prec():
            break
    return x


def _orbit_contact(surface, sec: Section, fiber: FiberDescriptor) -> Contact:
    """Contacts at a Galois orbit of cusps: identity versus non-identity.

    The section reduces to the node over the orbit iff both w and the
    x-derivative of the Weierstrass cubic vanish along the orbit polynomial.
    Only the identity and the I_2 non-identity cases occur in fixtures; a
    deeper contact at an orbit cusp is flagged instead of guessed.
    """
    if fiber.kind != "I":
        raise SectionError(f"star fiber over orbit cusp {fiber.cusp} unsupported")
    g = fiber.cusp.value
    u, w = sec.u, sec.w
    dom = u.domain
    if dom != g.domain:
        g = g.map_domain(dom)
    if _vanishes_along(u.den, g):
        return Contact(fiber, "identity")  # pole over the orbit: meets O side
    # non-identity requires w = 0 and f_x(u) = 0 along the orbit
    if w.is_zero():
        w_van = True
    else:
        w_van = _vanishes_along(w.num, g) and not _vanishes_along(w.den, g)
    a2 = surface.a2.map_domain(dom) if surface.domain != dom else surface.a2
    a4 = surface.a4.map_domain(dom) if surface.domain != dom else surface.a4
    three = Polynomial.constant(dom, dom.from_fraction(Fraction(3)))
    two = Polynomial.constant(dom, dom.from_fraction(Fraction(2)))
    fx = RationalFunction(three) * u * u + RationalFunction(two * a2) * u + RationalFunction(a4)
    fx_van = _vanishes_along(fx.num, g) and not _vanishes_along(fx.den, g)
    if w_van and fx_van:
        if fiber.n == 2:
            return Contact(fiber, "far-cycle", k=1)
        raise SectionError(
            f"non-identity contact at orbit cusp {fiber.cusp} of I_{fiber.n} unsupported"
        )
    return Contact(fiber, "identity")


def _vanishes_along(f: Polynomial, g: Polynomial) -> bool:
    if f.is_zero():
        return True
    return f.divrem(g)[1].is_zero()


# ---------------------------------------------------------------------------
# heights and pairings
# ---------------------------------------------------------------------------

def height(sec: Section, fibers=None) -> Fraction:
    """4 + 2 (P.O) - sum of per-fiber correction terms."""
    fibers = fibers if fibers is not None else sec.fibers
    return 4 + 2 * sec.pO - sec.correction_sum(fibers)


def _same_branch(p: Contact, q: Contact) -> bool:
    """Do two node contacts at one fiber hug the same tangent branch?

    Cross-term test: v(eta_P xi_Q - eta_Q xi_P) > k_P + k_Q  iff  same side.
    Requires both sections' w normalized to one square class.
    """
    cross = p.eta * q.xi - q.eta * p.xi
    v = cross.valuation()
    return v > p.k + q.k


def _scaled_section(q: Section, scale, new_m) -> Section:
    """Copy of q with w (and contact eta series) multiplied by scale."""
    dom = q.domain
    s = _embed(dom, scale)
    out = Section(
        u=q.u,
        w=q.w * Polynomial.constant(dom, s),
        msq=new_m,
        pO=q.pO,
        name=q.name,
        contacts={
            idx: Contact(
                c.fiber, c.kind, c.k, c.leg_root, c.xi,
                c.eta.scale(s) if c.eta is not None else None,
            )
            for idx, c in q.contacts.items()
        },
    )
    out.fibers = q.fibers
    return out


def normalized_pair(surface, p: Section, q: Section):
    """(surface, p, q') sharing one square class, lifting the field if needed.

    Over Q with incompatible classes both sections are re-verified over the
    quadratic field joining them (meetings at quadratic points are invisible
    over Q); over a quadratic field incompatible classes are out of scope.
    """
    dom = p.domain
    if q.domain != dom:
        raise SectionError("sections must live over one field")
    scale = _same_square_class(dom, q.msq, p.msq)
    if scale is not None:
        if dom.is_field and dom.eq(_embed(dom, scale), dom.one):
            return surface, p, q
        return surface, p, _scaled_section(q, scale, p.msq)
    if dom != QQ:
        raise SectionError(
            "sections with incompatible square classes over a quadratic field"
        )
    m1, m2 = Fraction(p.msq), Fraction(q.msq)
    kernel = squarefree_part((m1 * m2).numerator * (m1 * m2).denominator)
    K = QuadField(kernel)
    lift = lambda sec: verify_section(
        surface,
        RationalFunction(sec.u.num.map_domain(K), sec.u.den.map_domain(K)),
        name=sec.name,
    )
    return normalized_pair(surface, lift(p), lift(q))


def corr_pair(p: Contact, q: Contact) -> Fraction:
    """Correction term corr_v(P, Q) at one shared fiber."""
    f = p.fiber
    if not p.nonidentity or not q.nonidentity:
        return Fraction(0)
    if f.kind != "I":
        raise NonSemistableError(
            f"two sections meet non-identity components of {f}; pairing needs I_n"
        )
    n = f.n
    i_p = p.k
    if p.kind == "far-cycle" or q.kind == "far-cycle":
        # far component (or one far): i(n-j)/n with the far index n/2
        i, j = sorted((p.k, q.k))
        return Fraction(i * (n - j), n)
    i_q = q.k if _same_branch(p, q) else n - q.k
    i, j = sorted((i_p, i_q))
    return Fraction(i * (n - j), n)


def pairing(surface, p: Section, q: Section, fibers=None) -> Fraction:
    """Height pairing <P, Q> = 2 + (P.O) + (Q.O) - (P.Q) - sum corr_v(P, Q).

    For p is q this returns the height without needing (P.P).  The result
    for distinct sections depends on the chosen y-roots: replacing Q by -Q
    negates it (heights and discriminants are unaffected).
    """
    if p is q:
        return height(p, fibers)
    surface2, p2, q2 = normalized_pair(surface, p, q)
    fibers = p2.fibers
    pq = _intersection_normalized(surface2, p2, q2)
    corr = Fraction(0)
    for idx, f in enumerate(fibers):
        cp, cq = p2.contacts.get(idx), q2.contacts.get(idx)
        if cp is None or cq is None:
            continue
        corr += corr_pair(cp, cq) * f.cusp.degree
    return 2 + p.pO + q.pO - pq - corr


def ns_discriminant(surface, sections, fibers=None, torsion_order: int = 1) -> int:
    """disc NS(X) = -(det of the height-pairing Gram) * prod disc(F_v) / tors^2.

    The sign is forced by the signature (1, 19); sections are declared
    generators of the Mordell-Weil group modulo torsion.
    """
    fibers = fibers if fibers is not None else sections[0].fibers
    k = len(sections)
    gram = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            val = pairing(surface, sections[i], sections[j], fibers) if i != j else height(sections[i], fibers)
            gram[i][j] = gram[j][i] = val
    det = _fraction_det(gram)
    if det <= 0:
        raise SectionError("sections are dependent (Mordell-Weil determinant <= 0)")
    prod = 1
    for f in fibers:
        if f.reducible:
            prod *= f.root_disc ** f.cusp.degree
    disc = -det * prod / (torsion_order * torsion_order)
    if disc.denominator != 1:
        raise SectionError(f"non-integral Neron-Severi discriminant {disc}")
    return int(disc)


def _fraction_det(m) -> Fraction:
    n = len(m)
    a = [row[:] for row in m]
    det = Fraction(1)
    for k in range(n):
        piv = None
        for i in range(k, n):
            if a[i][k] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return det


# ---------------------------------------------------------------------------
# intersection number of two sections
# ---------------------------------------------------------------------------

def _gcd_restricted(f: Polynomial, support: Polynomial) -> Polynomial:
    """gcd(f, support^N) for N large: f's divisor restricted to the support."""
    acc = Polynomial.constant(f.domain, f.domain.one)
    g = f.gcd(support)
    while g.degree > 0:
        acc = acc * g
        f = f // g
        g = f.gcd(g)
    return acc


def _same_square_class(dom, m1, m2):
    """Return c with m1 = c^2 m2, or None."""
    if dom == QQ:
        q = Fraction(m1) / Fraction(m2)
        if q <= 0:
            return None
        import math

        num, den = q.numerator, q.denominator
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn == num and rd * rd == den:
            return Fraction(rn, rd)
        return None
    # quadratic field: solve (x + y sqrt(m))^2 = m1/m2
    z = dom.div(m1, m2)
    if isinstance(z, QuadNum):
        return _quad_sqrt(dom, z)
    return None


def _quad_sqrt(dom: QuadField, z: QuadNum):
    """A square root of z in Q(sqrt m), or None."""
    import math

    a, b, m = z.a, z.b, z.m
    if b == 0:
        # sqrt of a rational inside the field: rational or y*sqrt(m)
        if a >= 0:
            num, den = a.numerator, a.denominator
            rn, rd = math.isqrt(num), math.isqrt(den)
            if rn * rn == num and rd * rd == den:
                return QuadNum(Fraction(rn, rd), Fraction(0), m)
        q = a / m
        if q >= 0:
            num, den = q.numerator, q.denominator
            rn, rd = math.isqrt(num), math.isqrt(den)
            if rn * rn == num and rd * rd == den:
                return QuadNum(Fraction(0), Fraction(rn, rd), m)
        return None
    # x^2 + m y^2 = a, 2xy = b: x^4 - a x^2 + m b^2 / 4 = 0
    disc = a * a - m * b * b
    if disc < 0:
        return None
    num, den = disc.numerator, disc.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    root = Fraction(rn, rd)
    for x2 in ((a + root) / 2, (a - root) / 2):
        if x2 > 0:
            nx, dx = x2.numerator, x2.denominator
            sn, sd = math.isqrt(nx), math.isqrt(dx)
            if sn * sn == nx and sd * sd == dx:
                x = Fraction(sn, sd)
                y = b / (2 * x)
                return QuadNum(x, y, m)
    return None


def intersection_number(surface, p: Section, q: Section) -> int:
    """(P.Q) in NS(X): gcd-degree bookkeeping plus local corrections.

    Finite transversal meetings are counted by gcd degrees of coordinate
    differences; meetings at the zero section via the -x/y chart on common
    poles; and meetings at fiber nodes are re-evaluated on the smooth model
    (different components intersect zero times there).
    """
    surface, p, q = normalized_pair(surface, p, q)
    return _intersection_normalized(surface, p, q)


def _intersection_normalized(surface, p: Section, q: Section) -> int:
    if p.u == q.u:
        raise SectionError("(P.Q) needs distinct x-coordinates")
    dom = p.domain
    fibers = p.fibers
    total = 0
    udiff = p.u - q.u
    wdiff = p.w - q.w
    n1 = udiff.num
    if wdiff.is_zero():
        # identically equal y-coordinates: every common-x point meets
        common = n1
    else:
        common = n1.gcd(wdiff.num)
    base = common.degree
    # common poles: remove leakage, add the -x/y chart contributions
    gpole = p.u.den.gcd(q.u.den)
    if gpole.degree > 0:
        base -= _gcd_restricted(common, gpole).degree
        chart = p.u / p.w - q.u / q.w
        if chart.is_zero():
            raise SectionError("degenerate pole chart (sections coincide near O)")
        total += _gcd_restricted(chart.num, gpole).degree
    total += base
    # node corrections at rational reducible cusps met by both sections
    for idx, f in enumerate(fibers):
        cp, cq = p.contacts.get(idx), q.contacts.get(idx)
        if cp is None or cq is None or f.cusp.kind == "orbit":
            continue
        if not (cp.nonidentity and cq.nonidentity):
            continue
        if f.kind != "I":
            continue  # star fibers carry at most one section in scope
        if f.cusp.kind == "infinity":
            continue  # handled by the chart at infinity below
        naive, resolved = _node_multiplicities(cp, cq)
        total += resolved - naive
    # the place at infinity
    total += _infinity_contribution(surface, p, q)
    return total


def _node_multiplicities(cp: Contact, cq: Contact):
    """(naive Weierstrass, resolved smooth-model) local multiplicities."""
    xi_p, xi_q = cp.xi, cq.xi
    eta_p, eta_q = cp.eta, cq.eta
    naive = min((xi_p - xi_q).valuation(), (eta_p - eta_q).valuation())
    resolved = 0
    if cp.k == cq.k:
        same_comp = False
        if cp.kind == "far-cycle" and cq.kind == "far-cycle":
            same_comp = True
        elif cp.kind == "cycle" and cq.kind == "cycle":
            same_comp = _same_branch(cp, cq)
        if same_comp:
            resolved = max(0, naive - cp.k)
    return naive, resolved


def _infinity_contribution(surface, p: Section, q: Section) -> int:
    dom = p.domain
    up, wp = _ratfun_flip(p.u, 4), _ratfun_flip(p.w, 6)
    uq, wq = _ratfun_flip(q.u, 4), _ratfun_flip(q.w, 6)
    zero = dom.zero
    vp = up.valuation_at(zero) if not up.is_zero() else 10**9
    vq = uq.valuation_at(zero) if not uq.is_zero() else 10**9
    if vp < 0 and vq < 0:
        chart = up / wp - uq / wq
        if chart.is_zero():
            raise SectionError("degenerate pole chart at infinity")
        return chart.valuation_at(zero)
    if vp < 0 or vq < 0:
        return 0
    # both finite at s = 0: is it a shared node of the fiber at infinity?
    inf_fibers = [
        (idx, f) for idx, f in enumerate(p.fibers) if f.cusp.kind == "infinity"
    ]
    if inf_fibers:
        idx, f = inf_fibers[0]
        cp, cq = p.contacts.get(idx), q.contacts.get(idx)
        if cp is not None and cq is not None and cp.nonidentity and cq.nonidentity:
            naive, resolved = _node_multiplicities(cp, cq)
            return resolved
        # identity-side meetings at s=0 fall through to the generic count
    updiff = up - uq
    if updiff.is_zero():
        raise SectionError("sections share x at infinity identically")
    v1 = updiff.valuation_at(zero)
    if v1 <= 0:
        return 0
    wdiff = wp - wq
    v2 = wdiff.valuation_at(zero) if not wdiff.is_zero() else 10**9
    return min(v1, v2)


# ---------------------------------------------------------------------------
# Neron-Severi assembly (Gram route, cross-checked against ns_discriminant)
# ---------------------------------------------------------------------------

def _normalize_family(surface, sections):
    """Normalize every section's square class against the first one."""
    if len(sections) <= 1:
        return surface, list(sections)
    surface2, first, second = normalized_pair(surface, sections[0], sections[1])
    out = [first, second]
    for s in sections[2:]:
        _, anchor, s2 = normalized_pair(surface2, out[0], s)
        if anchor.msq != out[0].msq:
            raise SectionError("more than two incompatible square classes")
        out.append(s2)
    return surface2, out


def assemble_ns(surface, sections) -> GramLattice:
    """Gram matrix of NS(X) on {O, F, fiber components, sections}."""
    if len(sections) > 1:
        surface, sections = _normalize_family(surface, sections)
    fibers = sections[0].fibers if sections else classify_fibers(surface)
    blocks = []
    block_fiber_idx = []
    for idx, f in enumerate(fibers):
        if not f.reducible:
            continue
        for _ in range(f.cusp.degree):
            blocks.append(FiberBlock(f.kind, f.n))
            block_fiber_idx.append(idx)
    sec_rows = []
    for s_i, sec in enumerate(sections):
        contacts = []
        for b_i, f_idx in enumerate(block_fiber_idx):
            c = sec.contacts.get(f_idx)
            f = fibers[f_idx]
            if c is None or not c.nonidentity:
                contacts.append(None)
                continue
            if f.cusp.degree > 1:
                # orbit fiber: the section meets each conjugate copy alike
                contacts.append(c.k if f.kind == "I" else "far")
                continue
            contacts.append(_oriented_contact(sections, s_i, f_idx, c))
        pq = {}
        for s_j in range(len(sections)):
            if s_j != s_i:
                pq[(s_i, s_j)] = intersection_number(surface, sections[s_i], sections[s_j])
        sec_rows.append({"pO": sec.pO, "contacts": contacts, "pq": pq})
    return assemble_ns_gram(blocks, sec_rows)


def _oriented_contact(sections, s_i, f_idx, c: Contact):
    f = c.fiber
    if f.kind == "I*":
        if c.kind == "star-near":
            return "near"
        if c.kind == "star-far":
            return "far"
        return "far"  # I_0* legs are symmetric; distinct legs of one fiber
    if c.kind == "far-cycle":
        return f.n // 2
    # orient the cycle by the first non-identity section's branch
    for s_j in range(s_i):
        other = sections[s_j].contacts.get(f_idx)
        if other is not None and other.kind == "cycle":
            return c.k if _same_branch(other, c) else f.n - c.k
    return c.k


# ---------------------------------------------------------------------------
# the group law (independent oracle for the pairing formula)
# ---------------------------------------------------------------------------

def section_sum(surface: WeierstrassSurface, p: Section, q: Section) -> RationalFunction:
    """x-coordinate of P + Q on y^2 = x^3 + a2 x^2 + a4 x + a6.

    Returns a rational function over the smallest field containing the
    slope; used as an independent cross-check of the height pairing via
    <P,Q> = (h(P+Q) - h(P) - h(Q)) / 2.
    """
    dom = p.domain
    scale = _same_square_class(dom, q.msq, p.msq)
    if scale is not None:
        wq = q.w * Polynomial.constant(dom, scale)
        if p.u == q.u:
            raise SectionError("doubling not needed by the oracle")
        lam_w = (p.w - wq) / (p.u - q.u)  # slope = sqrt(m) * lam_w
        m = p.msq
        a2 = RationalFunction(surface.a2.map_domain(dom) if surface.domain != dom else surface.a2)
        mconst = Polynomial.constant(dom, dom.from_fraction(Fraction(m)) if isinstance(m, Fraction) else m)
        x3 = lam_w * lam_w * mconst - a2 - p.u - q.u
        return x3
    # different square classes: slope lives in Q(sqrt(m_p m_q))
    if dom != QQ:
        raise SectionError("mixed quadratic classes over a quadratic field")
    m1, m2 = Fraction(p.msq), Fraction(q.msq)
    mprod = squarefree_part((m1 * m2).numerator * (m1 * m2).denominator)
    K = QuadField(mprod)
    ru = lambda f: RationalFunction(f.num.map_domain(K), f.den.map_domain(K))
    up, uq, wp, wq = ru(p.u), ru(q.u), ru(p.w), ru(q.w)
    # y_p y_q = sqrt(m1 m2) w_p w_q ; sqrt(m1 m2) = r sqrt(mprod)
    r2 = (m1 * m2) / mprod
    import math

    rn, rd = math.isqrt(r2.numerator), math.isqrt(r2.denominator)
    assert Fraction(rn * rn, rd * rd) == r2
    r = K.embed(Fraction(rn, rd)) * QuadNum(Fraction(0), Fraction(1), mprod)
    # slope^2 = (y_p - y_q)^2/(u_p-u_q)^2 = (m1 w_p^2 + m2 w_q^2 - 2 r sqrt? ...)
    num = (
        wp * wp * Polynomial.constant(K, K.from_fraction(m1))
        + wq * wq * Polynomial.constant(K, K.from_fraction(m2))
        - wp * wq * Polynomial.constant(K, r) * Polynomial.constant(K, K.from_fraction(Fraction(2)))
    )
    den = (up - uq) * (up - uq)
    a2 = RationalFunction(surface.a2.map_domain(K))
    return num / den - a2 - up - uq
