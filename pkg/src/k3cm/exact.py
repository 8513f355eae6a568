"""Exact scalar domains and univariate polynomial arithmetic.

Everything here is integer/fraction based; there is no floating point
anywhere in the package.  Four coefficient domains are supported:

  * QQ        -- arbitrary-precision rationals (fractions.Fraction)
  * GF(p)     -- the prime field, elements stored as ints in [0, p)
  * ZMod(p,k) -- the ring Z/p^k, used for p-adic approximations
  * QuadField(m) -- Q(sqrt(m)) for a squarefree integer m

Polynomials carry their domain explicitly and refuse to mix domains;
conversion Q -> F_p fails loudly when a denominator is divisible by p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class DomainError(ValueError):
    """Mixed or incompatible scalar domains, or a bad coercion."""


# ---------------------------------------------------------------------------
# integer utilities
# ---------------------------------------------------------------------------

def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b)."""
    s0, s1, t0, t1, r0, r1 = 1, 0, 0, 1, a, b
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond anything we use."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(n + 1) if sieve[i]]


def squarefree_part(n: int) -> int:
    """Squarefree kernel of n (sign preserved); 0 for 0."""
    if n == 0:
        return 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            if e % 2:
                out *= d
        d += 1 if d == 2 else 2
    return sign * out * n


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    if n < 0:
        return (-1 if a < 0 else 1) * kronecker(a, -n)
    t = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            t = -t
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def crt_combine(residues) -> tuple[int, int]:
    """Combine (value, modulus) pairs; moduli must be pairwise coprime."""
    residues = list(residues)
    if not residues:
        raise ValueError("no residues to combine")
    x, m = residues[0]
    x %= m
    for v, n in residues[1:]:
        g, s, _ = xgcd(m, n)
        if g != 1:
            raise ValueError(f"moduli {m} and {n} are not coprime")
        x = (x + (v - x) * s % n * m) % (m * n)
        m *= n
    return x, m


def rational_reconstruct(residue: int, modulus: int) -> Fraction | None:
    """Recover u/v with u/v = residue (mod modulus), |u|,v <= sqrt(modulus/2).

    Half-extended Euclidean algorithm; returns None when no admissible
    pair exists.
    """
    if not 0 <= residue < modulus:
        raise ValueError("residue out of range")
    if residue == 0:
        return Fraction(0)
    bound_sq = modulus // 2  # accept u^2 <= M/2 and v^2 <= M/2
    r0, r1 = modulus, residue
    t0, t1 = 0, 1
    while r1 * r1 > bound_sq:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if r1 == 0 or t1 == 0:
        return None
    u, v = r1, t1
    if v < 0:
        u, v = -u, -v
    if v * v > bound_sq or math.gcd(v, modulus) != 1:
        return None
    if (u - v * residue) % modulus != 0:
        return None
    return Fraction(u, v)


# ---------------------------------------------------------------------------
# scalar parsing / formatting (fixture text encodings)
# ---------------------------------------------------------------------------

def parse_rational(text: str) -> Fraction:
    """Parse "n" or "n/d" in base 10."""
    text = text.strip()
    if "/" in text:
        n, d = text.split("/")
        return Fraction(int(n), int(d))
    return Fraction(int(text))


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# quadratic field elements a + b*sqrt(m)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadNum:
    """Element a + b*sqrt(m) of Q(sqrt(m)); m squarefree, m != 0, 1."""

    a: Fraction
    b: Fraction
    m: int

    def __post_init__(self):
        if self.m in (0, 1) or squarefree_part(self.m) != self.m:
            raise DomainError(f"radicand {self.m} must be squarefree and != 0, 1")
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def _check(self, other: "QuadNum"):
        if self.m != other.m:
            raise DomainError(f"mixed radicands {self.m} and {other.m}")

    def __add__(self, other):
        self._check(other)
        return QuadNum(self.a + other.a, self.b + other.b, self.m)

    def __sub__(self, other):
        self._check(other)
        return QuadNum(self.a - other.a, self.b - other.b, self.m)

    def __neg__(self):
        return QuadNum(-self.a, -self.b, self.m)

    def __mul__(self, other):
        self._check(other)
        return QuadNum(
            self.a * other.a + self.m * self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.m,
        )

    def conjugate(self):
        return QuadNum(self.a, -self.b, self.m)

    def norm(self) -> Fraction:
        return self.a * self.a - self.m * self.b * self.b

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero element of quadratic field")
        return QuadNum(self.a / n, -self.b / n, self.m)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __str__(self):
        return f"{format_rational(self.a)}+{format_rational(self.b)}*sqrt({self.m})"


def parse_quadnum(text: str, m: int) -> QuadNum:
    """Parse "a+b*sqrt(m)" (also bare rationals) into QuadNum over sqrt(m)."""
    text = text.strip().replace(" ", "")
    if "sqrt" not in text:
        return QuadNum(parse_rational(text), Fraction(0), m)
    head, tail = text.split("*sqrt(", 1)
    rad = int(tail.rstrip(")"))
    if rad != m:
        raise DomainError(f"radicand {rad} does not match field sqrt({m})")
    # split head into a and b at the last top-level +/- before the b part
    cut = max(head.rfind("+", 1), head.rfind("-", 1))
    if cut <= 0:
        a_txt, b_txt = "0", head
    else:
        a_txt, b_txt = head[:cut], head[cut:]
    if b_txt in ("", "+"):
        b_txt = "1"
    elif b_txt == "-":
        b_txt = "-1"
    return QuadNum(parse_rational(a_txt), parse_rational(b_txt.lstrip("+")), m)


# ---------------------------------------------------------------------------
# scalar domains
# ---------------------------------------------------------------------------

class Domain:
    """Operations on raw scalar values of one coefficient domain."""

    is_field = True

    def eq(self, x, y) -> bool:
        return x == y

    def is_zero(self, x) -> bool:
        return self.eq(x, self.zero)

    def pow(self, x, n: int):
        out = self.one
        for _ in range(n):
            out = self.mul(out, x)
        return out


@dataclass(frozen=True)
class RationalField(Domain):
    is_field = True

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def div(self, x, y):
        if y == 0:
            raise ZeroDivisionError("division by zero in Q")
        return x / y

    def inv(self, x):
        return self.div(self.one, x)

    def from_fraction(self, q: Fraction):
        return Fraction(q)

    def parse(self, text: str):
        return parse_rational(text)

    def format(self, x) -> str:
        return format_rational(x)

    def __repr__(self):
        return "QQ"


QQ = RationalField()


@dataclass(frozen=True)
class PrimeField(Domain):
    p: int
    is_field = True

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def mul(self, x, y):
        return x * y % self.p

    def neg(self, x):
        return -x % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError(f"inverse of 0 mod {self.p}")
        return pow(x, self.p - 2, self.p)

    def div(self, x, y):
        return x * self.inv(y) % self.p

    def from_fraction(self, q: Fraction):
        q = Fraction(q)
        if q.denominator % self.p == 0:
            raise DomainError(f"denominator of {q} divisible by p={self.p}")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def parse(self, text: str):
        return self.from_fraction(parse_rational(text))

    def format(self, x) -> str:
        return str(x % self.p)

    def sqrt(self, x):
        """A square root mod p, or None (Tonelli-Shanks)."""
        p = self.p
        x %= p
        if x == 0:
            return 0
        if pow(x, (p - 1) // 2, p) != 1:
            return None
        if p % 4 == 3:
            return pow(x, (p + 1) // 4, p)
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(x, q, p), pow(x, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
        return r

    def __repr__(self):
        return f"GF({self.p})"


def GF(p: int) -> PrimeField:
    return PrimeField(p)


@dataclass(frozen=True)
class PadicRing(Domain):
    """Z/p^k: truncated p-adic arithmetic at precision k."""

    p: int
    k: int
    is_field = False

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")
        if self.k < 1:
            raise DomainError("precision must be >= 1")

    @property
    def modulus(self):
        return self.p ** self.k

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, x, y):
        return (x + y) % self.modulus

    def sub(self, x, y):
        return (x - y) % self.modulus

    def mul(self, x, y):
        return x * y % self.modulus

    def neg(self, x):
        return -x % self.modulus

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError(f"{x} is not a unit in Z/{self.p}^{self.k}")
        return pow(x, -1, self.modulus)

    def div(self, x, y):
        return x * self.inv(y) % self.modulus

    def from_fraction(self, q: Fraction):
        q = Fraction(q)
        if q.denominator % self.p == 0:
            raise DomainError(f"denominator of {q} divisible by p={self.p}")
        return q.numerator * pow(q.denominator, -1, self.modulus) % self.modulus

    def format(self, x) -> str:
        return str(x % self.modulus)

    def __repr__(self):
        return f"Z/{self.p}^{self.k}"


@dataclass(frozen=True)
class QuadField(Domain):
    m: int
    is_field = True

    def __post_init__(self):
        if self.m in (0, 1) or squarefree_part(self.m) != self.m:
            raise DomainError(f"radicand {self.m} must be squarefree and != 0, 1")

    @property
    def zero(self):
        return QuadNum(Fraction(0), Fraction(0), self.m)

    @property
    def one(self):
        return QuadNum(Fraction(1), Fraction(0), self.m)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def inv(self, x):
        return x.inverse()

    def div(self, x, y):
        return x * y.inverse()

    def is_zero(self, x):
        return x.is_zero()

    def from_fraction(self, q: Fraction):
        return QuadNum(Fraction(q), Fraction(0), self.m)

    def embed(self, x):
        """Lift a Fraction or QuadNum into this field."""
        if isinstance(x, QuadNum):
            if x.m != self.m:
                raise DomainError(f"mixed radicands {x.m} and {self.m}")
            return x
        return self.from_fraction(Fraction(x))

    def parse(self, text: str):
        return parse_quadnum(text, self.m)

    def format(self, x) -> str:
        return str(x)

    def __repr__(self):
        return f"Q(sqrt({self.m}))"


# ---------------------------------------------------------------------------
# univariate polynomials
# ---------------------------------------------------------------------------

class Polynomial:
    """Immutable dense polynomial over an explicit domain.

    Coefficients are stored ascending with no trailing zeros; the zero
    polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("domain", "coeffs")

    def __init__(self, domain: Domain, coeffs):
        cs = list(coeffs)
        while cs and domain.is_zero(cs[-1]):
            cs.pop()
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):  # immutability
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def constant(domain: Domain, value) -> "Polynomial":
        return Polynomial(domain, [value])

    @staticmethod
    def x(domain: Domain) -> "Polynomial":
        return Polynomial(domain, [domain.zero, domain.one])

    @staticmethod
    def from_fractions(domain: Domain, fracs) -> "Polynomial":
        return Polynomial(domain, [domain.from_fraction(Fraction(c)) for c in fracs])

    @staticmethod
    def from_text(domain: Domain, text: str) -> "Polynomial":
        """Parse the ';'-separated ascending coefficient encoding."""
        text = text.strip()
        if not text:
            return Polynomial(domain, [])
        return Polynomial(domain, [domain.parse(c) for c in text.split(";")])

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        return ";".join(self.domain.format(c) for c in self.coeffs)

    # -- structure ----------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.domain.zero

    def leading(self):
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def _check(self, other: "Polynomial"):
        if self.domain != other.domain:
            raise DomainError(f"mixed domains {self.domain!r} and {other.domain!r}")

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.domain == other.domain
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.domain, self.coeffs))

    def __repr__(self):
        return f"Polynomial({self.domain!r}, {self.to_text()!r})"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        d = self.domain
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(d, [d.add(self[i], other[i]) for i in range(n)])

    def __sub__(self, other):
        self._check(other)
        d = self.domain
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(d, [d.sub(self[i], other[i]) for i in range(n)])

    def __neg__(self):
        return Polynomial(self.domain, [self.domain.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        self._check(other)
        d = self.domain
        if self.is_zero() or other.is_zero():
            return Polynomial(d, [])
        out = [d.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if d.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = d.add(out[i + j], d.mul(a, b))
        return Polynomial(d, out)

    def scale(self, c) -> "Polynomial":
        d = self.domain
        return Polynomial(d, [d.mul(c, a) for a in self.coeffs])

    def __pow__(self, n: int):
        out = Polynomial.constant(self.domain, self.domain.one)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divrem(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        self._check(other)
        d = self.domain
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lead_inv = d.inv(other.leading())
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial(d, []), self
        quot = [d.zero] * (dq + 1)
        for i in range(dq, -1, -1):
            if len(rem) < len(other.coeffs) + i:
                continue
            c = d.mul(rem[len(other.coeffs) + i - 1], lead_inv)
            quot[i] = c
            if d.is_zero(c):
                continue
            for j, b in enumerate(other.coeffs):
                rem[i + j] = d.sub(rem[i + j], d.mul(c, b))
        return Polynomial(d, quot), Polynomial(d, rem[: len(other.coeffs) - 1])

    def __floordiv__(self, other):
        return self.divrem(other)[0]

    def __mod__(self, other):
        return self.divrem(other)[1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(self.domain.inv(self.leading()))

    def _normalized_for_gcd(self) -> "Polynomial":
        """Rescale to tame coefficient growth in Euclidean remainder chains."""
        if self.is_zero():
            return self
        if isinstance(self.domain, RationalField):
            num_gcd = 0
            den_lcm = 1
            for c in self.coeffs:
                num_gcd = math.gcd(num_gcd, c.numerator)
                den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
            content = Fraction(num_gcd, den_lcm)
            return self.scale(1 / content) if content != 0 else self
        return self.monic()

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic gcd over a field of coefficients."""
        self._check(other)
        if not self.domain.is_field:
            raise DomainError("gcd requires a field of coefficients")
        a, b = self._normalized_for_gcd(), other._normalized_for_gcd()
        while not b.is_zero():
            a, b = b, (a % b)._normalized_for_gcd()
        return a.monic() if not a.is_zero() else a

    def derivative(self) -> "Polynomial":
        d = self.domain
        out = []
        for i in range(1, len(self.coeffs)):
            c = self.coeffs[i]
            acc = d.zero
            for _ in range(i):
                acc = d.add(acc, c)
            out.append(acc)
        return Polynomial(d, out)

    def __call__(self, point):
        d = self.domain
        acc = d.zero
        for c in reversed(self.coeffs):
            acc = d.add(d.mul(acc, point), c)
        return acc

    # -- valuations ----------------------------------------------------------

    def valuation_at(self, point) -> int:
        """Largest k with (t - point)^k dividing self; self must be nonzero."""
        if self.is_zero():
            raise ValueError("valuation of zero polynomial")
        d = self.domain
        lin = Polynomial(d, [d.neg(point), d.one])
        k, f = 0, self
        while True:
            q, r = f.divrem(lin)
            if not r.is_zero():
                return k
            k, f = k + 1, q

    def valuation_at_infinity(self, deg_bound: int) -> int:
        """deg_bound - deg(self) for the place at infinity."""
        if self.is_zero():
            raise ValueError("valuation of zero polynomial")
        return deg_bound - self.degree

    def reverse(self, deg_bound: int) -> "Polynomial":
        """Coefficient reversal t^deg_bound * f(1/t); needs deg <= deg_bound."""
        if self.degree > deg_bound:
            raise ValueError("degree exceeds bound in reversal")
        d = self.domain
        out = [d.zero] * (deg_bound + 1)
        for i, c in enumerate(self.coeffs):
            out[deg_bound - i] = c
        return Polynomial(d, out)

    def shift(self, point) -> "Polynomial":
        """Taylor shift: returns g with g(t) = f(t + point)."""
        d = self.domain
        out = Polynomial(d, [])
        for c in reversed(self.coeffs):
            out = out * Polynomial(d, [point, d.one]) + Polynomial.constant(d, c)
        return out

    def map_domain(self, target: Domain) -> "Polynomial":
        """Convert Q -> target (or Q(sqrt m) -> itself); fails loudly."""
        if self.domain == target:
            return self
        if isinstance(self.domain, RationalField):
            return Polynomial(target, [target.from_fraction(c) for c in self.coeffs])
        if isinstance(self.domain, QuadField) and isinstance(target, QuadField):
            raise DomainError("mixed radicands are rejected")
        raise DomainError(f"no conversion {self.domain!r} -> {target!r}")

    def content_primes(self) -> set[int]:
        """Primes dividing any coefficient denominator (Q coefficients only)."""
        out: set[int] = set()
        for c in self.coeffs:
            den = Fraction(c).denominator
            d = 2
            while d * d <= den:
                if den % d == 0:
                    out.add(d)
                    while den % d == 0:
                        den //= d
                d += 1
            if den > 1:
                out.add(den)
        return out


def poly_arith(lhs: Polynomial, rhs: Polynomial, kind: str):
    """Dispatch helper used by fixture-driven tests: add|mul|divrem|gcd."""
    if kind == "add":
        return lhs + rhs
    if kind == "mul":
        return lhs * rhs
    if kind == "divrem":
        return lhs.divrem(rhs)
    if kind == "gcd":
        return lhs.gcd(rhs)
    raise ValueError(f"unknown kind {kind!r}")


def roots_mod_p(f: Polynomial) -> set[int]:
    """All roots of f over F_p by exhaustive evaluation."""
    if not isinstance(f.domain, PrimeField):
        raise DomainError("roots_mod_p needs a polynomial over GF(p)")
    if f.is_zero():
        raise ValueError("zero polynomial mod p")
    p = f.domain.p
    return {x for x in range(p) if f(x) == 0}


def resultant(f: Polynomial, g: Polynomial):
    """Resultant over a field via the Euclidean remainder sequence."""
    f._check(g)
    d = f.domain
    if f.is_zero() or g.is_zero():
        return d.zero
    res = d.one
    a, b = f, g
    while b.degree > 0:
        r = a % b
        if r.is_zero():
            return d.zero
        res = d.mul(res, d.pow(b.leading(), a.degree - r.degree))
        if (a.degree * b.degree) % 2:
            res = d.neg(res)
        a, b = b, r
    # b is a nonzero constant
    res = d.mul(res, d.pow(b.leading(), a.degree))
    return res


# ---------------------------------------------------------------------------
# rational functions over a field
# ---------------------------------------------------------------------------

class RationalFunction:
    """num/den with monic denominator and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None):
        d = num.domain
        if den is None:
            den = Polynomial.constant(d, d.one)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not num.is_zero():
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num // g, den // g
        else:
            den = Polynomial.constant(d, d.one)
        lead_inv = d.inv(den.leading())
        object.__setattr__(self, "num", num.scale(lead_inv))
        object.__setattr__(self, "den", den.scale(lead_inv))

    def __setattr__(self, *a):
        raise AttributeError("RationalFunction is immutable")

    @property
    def domain(self):
        return self.num.domain

    @staticmethod
    def from_poly(f: Polynomial) -> "RationalFunction":
        return RationalFunction(f)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other):
        return RationalFunction(
            self.num * other.den - other.num * self.den, self.den * other.den
        )

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            other = RationalFunction(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            other = RationalFunction(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __call__(self, point):
        dv = self.den(point)
        if self.domain.is_zero(dv):
            raise ZeroDivisionError("pole of rational function")
        return self.domain.div(self.num(point), dv)

    def valuation_at(self, point) -> int:
        """Order of vanishing at the point (negative at poles)."""
        if self.is_zero():
            raise ValueError("valuation of zero function")
        return self.num.valuation_at(point) - self.den.valuation_at(point)

    def valuation_at_infinity(self) -> int:
        if self.is_zero():
            raise ValueError("valuation of zero function")
        return self.den.degree - self.num.degree

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __repr__(self):
        if self.is_polynomial():
            return f"RationalFunction({self.num.to_text()!r})"
        return f"RationalFunction({self.num.to_text()!r} / {self.den.to_text()!r})"

    def to_text(self) -> str:
        if self.is_polynomial():
            return self.num.to_text()
        return f"{self.num.to_text()} / {self.den.to_text()}"

    @staticmethod
    def from_text(domain: Domain, text: str) -> "RationalFunction":
        if " / " in text:
            n, d = text.split(" / ")
            return RationalFunction(
                Polynomial.from_text(domain, n), Polynomial.from_text(domain, d)
            )
        return RationalFunction(Polynomial.from_text(domain, text))


# ---------------------------------------------------------------------------
# truncated power series (for local expansions at a cusp)
# ---------------------------------------------------------------------------

class Series:
    """Truncated power series: coefficients known modulo t^prec."""

    __slots__ = ("domain", "coeffs", "prec")

    def __init__(self, domain: Domain, coeffs, prec: int):
        cs = list(coeffs)[:prec]
        cs += [domain.zero] * (prec - len(cs))
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, *a):
        raise AttributeError("Series is immutable")

    def __add__(self, other):
        n = min(self.prec, other.prec)
        d = self.domain
        return Series(d, [d.add(self.coeffs[i], other.coeffs[i]) for i in range(n)], n)

    def __sub__(self, other):
        n = min(self.prec, other.prec)
        d = self.domain
        return Series(d, [d.sub(self.coeffs[i], other.coeffs[i]) for i in range(n)], n)

    def __neg__(self):
        return Series(self.domain, [self.domain.neg(c) for c in self.coeffs], self.prec)

    def __mul__(self, other):
        n = min(self.prec, other.prec)
        d = self.domain
        out = [d.zero] * n
        for i, a in enumerate(self.coeffs[:n]):
            if d.is_zero(a):
                continue
            for j in range(n - i):
                b = other.coeffs[j]
                if not d.is_zero(b):
                    out[i + j] = d.add(out[i + j], d.mul(a, b))
        return Series(d, out, n)

    def scale(self, c):
        d = self.domain
        return Series(d, [d.mul(c, a) for a in self.coeffs], self.prec)

    def inverse(self) -> "Series":
        d = self.domain
        if d.is_zero(self.coeffs[0]):
            raise ZeroDivisionError("series is not a unit")
        inv0 = d.inv(self.coeffs[0])
        out = [inv0] + [d.zero] * (self.prec - 1)
        for n in range(1, self.prec):
            acc = d.zero
            for i in range(1, n + 1):
                acc = d.add(acc, d.mul(self.coeffs[i], out[n - i]))
            out[n] = d.neg(d.mul(inv0, acc))
        return Series(d, out, self.prec)

    def __truediv__(self, other):
        return self * other.inverse()

    def valuation(self) -> int:
        """Order of vanishing; returns prec when zero to working precision."""
        for i, c in enumerate(self.coeffs):
            if not self.domain.is_zero(c):
                return i
        return self.prec

    def __getitem__(self, i):
        return self.coeffs[i] if i < self.prec else self.domain.zero

    def is_zero_to_prec(self) -> bool:
        return all(self.domain.is_zero(c) for c in self.coeffs)

    def __repr__(self):
        return f"Series({[self.domain.format(c) for c in self.coeffs]}, O(t^{self.prec}))"


def poly_series(f: Polynomial, point, prec: int) -> Series:
    """Expansion of f around t = point to the given precision."""
    return Series(f.domain, f.shift(point).coeffs, prec)


def ratfun_series(f: RationalFunction, point, prec: int) -> Series:
    """Expansion of f around t = point; the point must not be a pole."""
    den = poly_series(f.den, point, prec)
    if f.domain.is_zero(den.coeffs[0]):
        raise ZeroDivisionError("expansion at a pole")
    return poly_series(f.num, point, prec) / den
