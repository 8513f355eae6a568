"""One-parameter families of elliptic K3 surfaces with a free parameter.

A family stores three bivariate coefficient blocks A, B, C (polynomials in t
whose coefficients are polynomials in the modulus parameter mu) together
with structural prefactors in t, (t-1) and (t-lambda):

    a2 = t^i2 (t-1)^j2 (t-lambda)^k2 * A
    a4 = t^i4 (t-1)^j4 (t-lambda)^k4 * B
    a6 = t^i6 (t-1)^j6 (t-lambda)^k6 * C

Specialization at rational (lambda, mu) produces a WeierstrassSurface over Q;
lambda = infinity is the x-rescaled limit where the (t-lambda) prefactors
collapse to constants.  A mod-p specialization fast path serves the
point-counting scan.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from k3cm.exact import GF, QQ, Polynomial, primes_up_to, resultant
from k3cm.surfaces import WeierstrassSurface

INFINITY = "inf"


def _parse_bivariate(text: str) -> list[Polynomial]:
    """'|'-separated ascending t-coefficients, each a ';' mu-poly."""
    return [Polynomial.from_text(QQ, part) for part in text.split("|")]


def _format_bivariate(coeffs) -> str:
    return "|".join(c.to_text() for c in coeffs)


@dataclass
class Family:
    name: str
    A: list          # list of mu-polynomials, ascending t-degree
    B: list
    C: list
    pre_a2: tuple    # exponents (i, j, k) of t, (t-1), (t-lambda)
    pre_a4: tuple
    pre_a6: tuple
    mu: Fraction | None = None      # fixed modulus for one-parameter use
    excluded_primes: tuple = ()
    cusp_table: dict = field(default_factory=dict)   # label -> cusp value text
    splitting: dict = field(default_factory=dict)    # label -> square-class data

    # -- construction helpers -------------------------------------------------

    def _coeff_poly(self, coeffs, mu: Fraction) -> Polynomial:
        return Polynomial(QQ, [c(mu) for c in coeffs])

    def _assemble(self, block, pre, lam, mu) -> Polynomial:
        base = self._coeff_poly(block, mu)
        t = Polynomial.x(QQ)
        one = Polynomial.constant(QQ, Fraction(1))
        i, j, k = pre
        out = base
        for _ in range(i):
            out = out * t
        for _ in range(j):
            out = out * (t - one)
        if lam == INFINITY:
            sign = Polynomial.constant(QQ, Fraction(-1) ** k)
            out = out * sign
        else:
            lin = t - Polynomial.constant(QQ, Fraction(lam))
            for _ in range(k):
                out = out * lin
        return out

    def specialize(self, lam, mu=None, name=None) -> WeierstrassSurface:
        """Member at lambda (a Fraction, or INFINITY for the limit surface)."""
        mu = Fraction(mu) if mu is not None else self.mu
        if mu is None:
            raise ValueError("family has no fixed mu; pass one explicitly")
        if lam != INFINITY:
            lam = Fraction(lam)
        a2 = self._assemble(self.A, self.pre_a2, lam, mu)
        a4 = self._assemble(self.B, self.pre_a4, lam, mu)
        a6 = self._assemble(self.C, self.pre_a6, lam, mu)
        label = name or f"{self.name}_lam_{lam}"
        return WeierstrassSurface(a2, a4, a6, name=label)

    # -- mod p fast path -------------------------------------------------------

    def specialize_mod(self, p: int, lam: int) -> WeierstrassSurface:
        """Member over GF(p) at lambda in F_p; p must be a good prime."""
        if p in self.bad_primes(p):
            raise ValueError(f"p = {p} is excluded for family {self.name}")
        F = GF(p)
        mu = self.mu
        if mu is None:
            raise ValueError("mod-p specialization needs a fixed mu")
        a2 = self._assemble_mod(self.A, self.pre_a2, lam, mu, F)
        a4 = self._assemble_mod(self.B, self.pre_a4, lam, mu, F)
        a6 = self._assemble_mod(self.C, self.pre_a6, lam, mu, F)
        return WeierstrassSurface(a2, a4, a6, name=f"{self.name}@p{p}l{lam}")

    def _assemble_mod(self, block, pre, lam, mu, F) -> Polynomial:
        base = Polynomial(F, [F.from_fraction(c(mu)) for c in block])
        t = Polynomial.x(F)
        one = Polynomial.constant(F, F.one)
        lin = t - Polynomial.constant(F, lam % F.p)
        i, j, k = pre
        out = base
        for _ in range(i):
            out = out * t
        for _ in range(j):
            out = out * (t - one)
        for _ in range(k):
            out = out * lin
        return out

    # -- bad primes ------------------------------------------------------------

    def bad_primes(self, bound: int) -> set[int]:
        """p <= 5, coefficient-denominator primes, and cusp-collision primes.

        Collisions are detected from the squarefree structure of a reference
        member's discriminant: primes dividing pairwise resultants or leading
        coefficients can merge cusps mod p, so the generic fiber table would
        not reduce cleanly.
        """
        if not hasattr(self, "_bad_cache"):
            bad = {2, 3, 5}
            for block in (self.A, self.B, self.C):
                for c in block:
                    bad |= c.content_primes()
            if self.mu is not None:
                bad |= _fraction_primes(self.mu)
            bad |= set(self.excluded_primes)
            bad |= self._collision_primes()
            self._bad_cache = bad
        return set(self._bad_cache)

    def _collision_primes(self) -> set[int]:
        """Primes where distinct cusps of a reference member collide."""
        from k3cm.surfaces import squarefree_decomposition

        probe = Fraction(7, 13)  # generic reference lambda, off every cusp
        surf = self.specialize(probe)
        _, sq = squarefree_decomposition(surf.delta)
        out: set[int] = set()
        polys = [g for g, _ in sq]
        for g in polys:
            out |= _fraction_primes(Fraction(g.leading()))
            disc = resultant(g, g.derivative())
            if disc != 0:
                out |= _small_prime_divisors(disc)
        for i in range(len(polys)):
            for j in range(i + 1, len(polys)):
                r = resultant(polys[i], polys[j])
                out |= _small_prime_divisors(r)
        return out

    def good_primes(self, bound: int) -> list[int]:
        bad = self.bad_primes(bound)
        return [p for p in primes_up_to(bound) if p not in bad]


def _fraction_primes(q: Fraction) -> set[int]:
    out = set()
    for n in (q.numerator, q.denominator):
        n = abs(n)
        d = 2
        while d * d <= n:
            if n % d == 0:
                out.add(d)
                while n % d == 0:
                    n //= d
            d += 1
        if n > 1:
            out.add(n)
    return out


def _small_prime_divisors(q, bound: int = 500) -> set[int]:
    """Prime divisors up to the bound of a rational's numerator/denominator.

    Cusp-collision resultants can be astronomically large; only primes below
    the scan bound matter for the counting searches.
    """
    q = Fraction(q)
    out = set()
    for n in (abs(q.numerator), abs(q.denominator)):
        for p in primes_up_to(bound):
            if n % p == 0:
                out.add(p)
    return out


# ---------------------------------------------------------------------------
# text serialization (family fixture files)
# ---------------------------------------------------------------------------

def family_from_fields(fields: dict) -> Family:
    from k3cm.exact import parse_rational

    pre = lambda key: tuple(int(x) for x in fields[key].split(","))
    return Family(
        name=fields.get("name", "family"),
        A=_parse_bivariate(fields["a"]),
        B=_parse_bivariate(fields["b"]),
        C=_parse_bivariate(fields["c"]),
        pre_a2=pre("pre_a2"),
        pre_a4=pre("pre_a4"),
        pre_a6=pre("pre_a6"),
        mu=parse_rational(fields["mu"]) if "mu" in fields else None,
        cusp_table=dict(fields.get("cusps", {})),
        splitting=dict(fields.get("splitting", {})),
    )
