"""Point counts of elliptic K3 fibrations over F_p and Lefschetz matching.

The raw count walks the (singular) Weierstrass model fiberwise with a
precomputed quadratic-character table; smooth-model corrections add the
component count of every resolved reducible fiber that is rational over
F_p.  The algebraic trace collects the Frobenius-fixed divisor classes, and
the two sign choices for the leftover +-p eigenvalue give the candidate
transcendental traces compared against the newform oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from k3cm.exact import GF, Polynomial
from k3cm.surfaces import WeierstrassSurface


class CountingError(ValueError):
    pass


@dataclass(frozen=True)
class FpFiber:
    """A reducible fiber of the reduced surface at one F_p-rational cusp."""

    t0: int | None        # None encodes the cusp at infinity
    kind: str             # "I" or "I*"
    n: int
    split: bool = True    # I_n: node tangents rational over F_p
    r3: int = 0           # I_0*: rational roots of the residual cubic

    @property
    def fixed_components(self) -> int:
        """Frobenius-fixed non-identity components."""
        if self.kind == "I":
            if self.n < 2:
                return 0
            if self.split:
                return self.n - 1
            return 1 if self.n % 2 == 0 else 0
        if self.n == 0:
            return 1 + self.r3
        raise CountingError("I_m* fibers are outside the counting tables")


@dataclass(frozen=True)
class CountRecord:
    family: str
    p: int
    lam: int
    count: int      # smooth-model count #X(F_p)
    t_alg: int

    def __post_init__(self):
        p = self.p
        resid = self.count - 1 - p * p - p * self.t_alg
        if abs(resid) > 3 * p:
            raise CountingError(
                f"count {self.count} violates the Weil window at p={p}"
            )


# ---------------------------------------------------------------------------
# mod-p fiber analysis
# ---------------------------------------------------------------------------

def analyze_fibers_mod_p(surface: WeierstrassSurface) -> list[FpFiber]:
    """Classify the reducible fibers of a surface over GF(p).

    Valid at good primes only: the caller guarantees that the generic
    configuration reduces cleanly (no cusp collisions, no denominators).
    """
    F = surface.domain
    if not hasattr(F, "p"):
        raise CountingError("analyze_fibers_mod_p expects a GF(p) surface")
    p = F.p
    chi = _character_table(p)
    out = []
    delta = surface.delta
    for t0 in range(p):
        v = delta.valuation_at(t0)
        if v == 0:
            continue
        out.append(_local_fiber(surface, t0, v, chi))
    v_inf = 24 - delta.degree
    if v_inf > 0:
        flip = surface.flipped()
        fib = _local_fiber(flip, 0, v_inf, chi)
        out.append(FpFiber(None, fib.kind, fib.n, fib.split, fib.r3))
    return out


def _local_fiber(surface, t0, v, chi) -> FpFiber:
    F = surface.domain
    p = F.p
    vc4 = surface.c4.valuation_at(t0) if not surface.c4.is_zero() else 99
    if vc4 == 0:
        if v < 2:
            return FpFiber(t0, "I", v)
        cubic = surface.fiber_cubic(t0)
        g = cubic.gcd(cubic.derivative())
        if g.degree != 1:
            raise CountingError(f"bad reduction shape at t={t0} mod {p}")
        x0 = F.neg(F.div(g.coeffs[0], g.coeffs[1]))
        c = F.div(cubic.derivative().derivative()(x0), 2 % p)
        return FpFiber(t0, "I", v, split=chi[c] == 1)
    vc6 = surface.c6.valuation_at(t0) if not surface.c6.is_zero() else 99
    if vc4 >= 2 and vc6 >= 3 and v == 6:
        sh2, sh4, sh6 = (surface.a2.shift(t0), surface.a4.shift(t0), surface.a6.shift(t0))
        cubic = Polynomial(F, [sh6[3], sh4[2], sh2[1], F.one])
        r3 = sum(1 for x in range(p) if cubic(x) == 0)
        return FpFiber(t0, "I*", 0, r3=r3)
    raise CountingError(
        f"unsupported fiber type mod {p} at t={t0} (v(c4)={vc4}, v(Delta)={v})"
    )


def _character_table(p: int) -> list[int]:
    """chi[x] = legendre symbol (x|p) with chi[0] = 0."""
    chi = [-1] * p
    chi[0] = 0
    for x in range(1, p):
        chi[x * x % p] = 1
    return chi


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------

def count_weierstrass(surface: WeierstrassSurface) -> int:
    """Raw point count of the Weierstrass model over GF(p), brute force.

    Per fiber: sum over x of 1 + chi(RHS), plus the point at infinity.
    """
    F = surface.domain
    p = F.p
    chi = _character_table(p)
    total = 0
    for chart in (surface, surface.flipped()):
        ts = range(p) if chart is surface else (0,)
        for t in ts:
            c2 = chart.a2(t)
            c4 = chart.a4(t)
            c6 = chart.a6(t)
            fiber = p + 1  # the sum of 1's plus the point at infinity
            for x in range(p):
                val = ((x + c2) * x + c4) * x + c6
                fiber += chi[val % p]
            total += fiber
    return total


def smooth_correction(fibers: list[FpFiber], p: int) -> int:
    """Sum of p * (fixed non-identity components) over F_p-rational cusps."""
    return sum(p * f.fixed_components for f in fibers)


def algebraic_trace(fibers: list[FpFiber], rational_sections: int = 0) -> int:
    """2 (for O and F) + per-fiber fixed components + fixed sections."""
    return 2 + sum(f.fixed_components for f in fibers) + rational_sections


def lefschetz_candidates(count: int, p: int, t_alg: int) -> tuple[int, int]:
    """The two sign choices for the transcendental trace alpha + beta."""
    r = count - 1 - p * p - p * t_alg
    return r - p, r + p


def count_surface(surface_q: WeierstrassSurface, p: int, sections: int = 0):
    """(smooth count, t_alg, candidates) for a Q-surface reduced mod p."""
    surf_p = surface_q.map_domain(GF(p))
    fibers = analyze_fibers_mod_p(surf_p)
    raw = count_weierstrass(surf_p)
    smooth = raw + smooth_correction(fibers, p)
    t_alg = algebraic_trace(fibers, sections)
    return smooth, t_alg, lefschetz_candidates(smooth, p, t_alg)


# ---------------------------------------------------------------------------
# count cache (append-only, conflict-checked)
# ---------------------------------------------------------------------------

class CountCache:
    """Append-only store of raw smooth counts keyed by (family, p, lambda)."""

    def __init__(self, path=None):
        self.path = path
        self.data: dict[tuple[str, int, int], int] = {}
        if path is not None:
            self._load()

    def _load(self):
        import os

        if not os.path.exists(self.path):
            return
        with open(self.path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split()
                if len(parts) != 4:
                    import sys

                    print(f"cache: skipping corrupt line {line!r}", file=sys.stderr)
                    continue
                fam, p, lam, n = parts[0], int(parts[1]), int(parts[2]), int(parts[3])
                self._insert(fam, p, lam, n)

    def _insert(self, fam, p, lam, n):
        key = (fam, p, lam)
        if key in self.data and self.data[key] != n:
            raise CountingError(
                f"cache conflict for {key}: {self.data[key]} vs {n} (determinism breach)"
            )
        self.data[key] = n

    def get(self, fam: str, p: int, lam: int):
        return self.data.get((fam, p, lam))

    def put(self, fam: str, p: int, lam: int, count: int):
        key = (fam, p, lam)
        known = self.data.get(key)
        if known is not None:
            if known != count:
                raise CountingError(
                    f"cache conflict for {key}: {known} vs {count} (determinism breach)"
                )
            return
        self._insert(fam, p, lam, count)
        if self.path is not None:
            with open(self.path, "a") as fh:
                fh.write(f"{fam} {p} {lam} {count}\n")


def count_family_member(family, p: int, lam: int, cache: CountCache | None = None):
    """(smooth count, t_alg, candidates) for the family member at lambda mod p."""
    surf = family.specialize_mod(p, lam)
    fibers = analyze_fibers_mod_p(surf)
    cached = cache.get(family.name, p, lam) if cache is not None else None
    if cached is None:
        raw = count_weierstrass(surf)
        smooth = raw + smooth_correction(fibers, p)
        if cache is not None:
            cache.put(family.name, p, lam, smooth)
    else:
        smooth = cached
    t_alg = algebraic_trace(fibers, 0)
    return smooth, t_alg, lefschetz_candidates(smooth, p, t_alg)
