"""Fixture files: parsing, integrity checks, and the surface registry.

Every polynomial from the source tables lives in a data file, never in
code; a sha256 manifest guards against silent edits.  Files are blocks of
`key = value` lines under `[block]` headers; repeated blocks accumulate.

Value encodings build on the scalar/polynomial text formats:
  * rational:        "n" or "n/d"
  * quad scalar:     "a+b*sqrt(m)"
  * polynomial:      ascending ';' list, or a factored product
                     "scale * c0;c1 * c0;c1;c2^2" (tokens joined by ' * ')
  * rational func:   "NUM / DEN" with NUM, DEN polynomial encodings
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from k3cm.exact import (
    QQ,
    Polynomial,
    QuadField,
    RationalFunction,
    parse_rational,
)
from k3cm.families import Family, family_from_fields
from k3cm.quadforms import BinaryQuadraticForm


class FixtureError(ValueError):
    pass


# ---------------------------------------------------------------------------
# low-level parsing
# ---------------------------------------------------------------------------

def parse_blocks(text: str) -> list[tuple[str, dict]]:
    blocks = []
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = (line[1:-1].strip(), {})
            blocks.append(current)
            continue
        if current is None or "=" not in line:
            raise FixtureError(f"stray fixture line: {raw!r}")
        key, val = line.split("=", 1)
        current[1][key.strip().lower()] = val.strip()
    return blocks


def parse_poly(text: str, domain=QQ) -> Polynomial:
    """Plain ';' list or factored 'scale * f1 * f2^e * ...'."""
    text = text.strip()
    if " * " not in text and "^" not in text:
        return Polynomial.from_text(domain, text)
    tokens = text.split(" * ")
    out = Polynomial.constant(domain, domain.one)
    start = 0
    if ";" not in tokens[0] and "^" not in tokens[0]:
        out = Polynomial.constant(domain, domain.parse(tokens[0]))
        start = 1
    for tok in tokens[start:]:
        if "^" in tok:
            base, exp = tok.rsplit("^", 1)
            e = int(exp)
        else:
            base, e = tok, 1
        f = Polynomial.from_text(domain, base)
        out = out * f ** e
    return out


def parse_ratfun(text: str, domain=QQ) -> RationalFunction:
    if " / " in text:
        num, den = text.split(" / ", 1)
        return RationalFunction(parse_poly(num, domain), parse_poly(den, domain))
    return RationalFunction(parse_poly(text, domain))


def parse_form(text: str) -> BinaryQuadraticForm:
    """[2a,b,2c] given as 'aa,b,cc' with even aa, cc."""
    aa, b, cc = (int(x) for x in text.split(","))
    if aa % 2 or cc % 2:
        raise FixtureError(f"even-lattice entries required: {text}")
    return BinaryQuadraticForm(aa // 2, int(b), cc // 2)


# ---------------------------------------------------------------------------
# fixture objects
# ---------------------------------------------------------------------------

@dataclass
class SectionFixture:
    name: str
    field_radicand: int | None      # None for Q, m for Q(sqrt m)
    u_text: str
    conjugate_of: str | None = None
    expected_height: Fraction | None = None

    def u(self) -> RationalFunction:
        dom = QQ if self.field_radicand is None else QuadField(self.field_radicand)
        return parse_ratfun(self.u_text, dom)


@dataclass
class SurfaceFixture:
    name: str
    source: str
    kind: str                      # direct | family | family-nu
    fields: dict
    sections: list[SectionFixture] = field(default_factory=list)
    expected_disc: int | None = None
    expected_T: BinaryQuadraticForm | None = None
    derived_T: BinaryQuadraticForm | None = None
    expected_pairings: dict = field(default_factory=dict)
    expected_config: str | None = None
    status: str = "ok"
    note: str = ""

    @property
    def working_T(self):
        """The lattice the computation must reproduce (printed unless errata)."""
        return self.derived_T if self.derived_T is not None else self.expected_T

    def build_surface(self, registry):
        from k3cm.surfaces import WeierstrassSurface

        if self.kind == "direct":
            return WeierstrassSurface(
                parse_poly(self.fields["a2"]),
                parse_poly(self.fields["a4"]),
                parse_poly(self.fields["a6"]),
                name=self.name,
            )
        fam = registry.family(self.fields.get("family", "xlm"))
        if self.kind == "family":
            text = self.fields["lambda"]
            if text == "inf":
                from k3cm.families import INFINITY

                lam = INFINITY
            else:
                lam = parse_rational(text)
            return fam.specialize(lam, name=self.name)
        # family-nu: lambda and mu are rational functions of nu
        nu = parse_rational(self.fields["nu"])
        ev = lambda key: Polynomial.from_text(QQ, self.fields[key])(nu)
        mu = ev("mu_num") / ev("mu_den")
        lam = ev("lambda_num") / ev("lambda_den")
        return fam.specialize(lam, mu=mu, name=self.name)


@dataclass
class Table1Row:
    lam: object
    disc: int
    u_text: str
    height: Fraction
    T: BinaryQuadraticForm
    source: str
    status: str = "ok"
    note: str = ""
    derived_T: BinaryQuadraticForm | None = None


@dataclass
class CorroborationRow:
    disc: int
    lam: Fraction
    source: str


@dataclass
class SemistableRow:
    """Extremal configuration row: discriminant, I_n indices, torsion, T."""

    disc: int
    config: tuple
    torsion: int
    T: BinaryQuadraticForm
    source: str


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

class FixtureRegistry:
    def __init__(self):
        self._families: dict[str, Family] = {}
        self.surfaces: dict[str, SurfaceFixture] = {}
        self.table1: list[Table1Row] = []
        self.extremal: list[SurfaceFixture] = []
        self.semistable: list[SemistableRow] = []
        self.corroboration: list[CorroborationRow] = []
        self._load()

    # -- loading -------------------------------------------------------------

    def _read(self, name: str) -> str:
        return resources.files("k3cm").joinpath("data", name).read_text()

    def _load(self):
        manifest = {}
        for line in self._read("checksums.txt").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            digest, fname = line.split()
            manifest[fname] = digest
        for fname, digest in manifest.items():
            data = self._read(fname).encode()
            got = hashlib.sha256(data).hexdigest()
            if got != digest:
                raise FixtureError(
                    f"fixture {fname} fails its checksum (edited without manifest update?)"
                )
        for fname in manifest:
            if fname.endswith(".fam"):
                self._load_family(fname)
        for fname in manifest:
            if fname.endswith(".surf"):
                self._load_surface(fname)
            elif fname == "table1.rows":
                self._load_table1(fname)
            elif fname == "extremal.rows":
                self._load_extremal(fname)
            elif fname == "semistable.rows":
                self._load_semistable(fname)
            elif fname == "corroborate.rows":
                self._load_corroborate(fname)

    def _load_family(self, fname):
        blocks = parse_blocks(self._read(fname))
        fields = {}
        cusps = {}
        splitting = {}
        for name, kv in blocks:
            if name == "family":
                fields.update({k.lower(): v for k, v in kv.items()})
            elif name == "cusps":
                cusps.update(kv)
            elif name == "splitting":
                splitting.update(kv)
        fields["cusps"] = cusps
        fields["splitting"] = splitting
        fam = family_from_fields(fields)
        self._families[fam.name] = fam

    def family(self, name: str) -> Family:
        return self._families[name]

    def _load_surface(self, fname):
        fx = surface_fixture_from_text(self._read(fname))
        self.surfaces[fx.name] = fx

    def _load_table1(self, fname):
        for name, kv in parse_blocks(self._read(fname)):
            if name != "row":
                continue
            self.table1.append(
                Table1Row(
                    lam=parse_rational(kv["lambda"]),
                    disc=int(kv["disc"]),
                    u_text=kv["u"],
                    height=parse_rational(kv["height"]),
                    T=parse_form(kv["t"]),
                    source=kv.get("src", ""),
                    status=kv.get("status", "ok"),
                    note=kv.get("note", ""),
                    derived_T=parse_form(kv["derived_t"]) if "derived_t" in kv else None,
                )
            )

    def _load_extremal(self, fname):
        for name, kv in parse_blocks(self._read(fname)):
            if name != "row":
                continue
            fx = SurfaceFixture(
                name=f"extremal_{kv['lambda'].replace('/', '_')}",
                source=kv.get("src", ""),
                kind="family",
                fields={"family": "xlm", "lambda": kv["lambda"]},
                expected_disc=int(kv["disc"]),
                expected_T=parse_form(kv["t"]),
            )
            self.extremal.append(fx)

    def _load_semistable(self, fname):
        for name, kv in parse_blocks(self._read(fname)):
            if name != "row":
                continue
            self.semistable.append(
                SemistableRow(
                    disc=int(kv["disc"]),
                    config=tuple(int(x) for x in kv["config"].split(",")),
                    torsion=int(kv.get("torsion", 1)),
                    T=parse_form(kv["t"]),
                    source=kv.get("src", ""),
                )
            )

    def _load_corroborate(self, fname):
        for name, kv in parse_blocks(self._read(fname)):
            if name != "row":
                continue
            self.corroboration.append(
                CorroborationRow(
                    disc=int(kv["disc"]),
                    lam=parse_rational(kv["lambda"]),
                    source=kv.get("src", ""),
                )
            )


def section_fixture_from_block(kv: dict) -> SectionFixture:
    rad = None
    f = kv.get("field", "rational")
    if f.startswith("quadratic:"):
        rad = int(f.split(":")[1])
    return SectionFixture(
        name=kv.get("name", "P"),
        field_radicand=rad,
        u_text=kv.get("u", ""),
        conjugate_of=kv.get("conjugate_of"),
        expected_height=(
            parse_rational(kv["expected_height"]) if "expected_height" in kv else None
        ),
    )


def surface_fixture_from_text(text: str) -> SurfaceFixture:
    fx = None
    for name, kv in parse_blocks(text):
        if name == "surface":
            kind = "direct"
            if "nu" in kv:
                kind = "family-nu"
            elif "lambda" in kv:
                kind = "family"
            fx = SurfaceFixture(
                name=kv["name"],
                source=kv.get("src", ""),
                kind=kind,
                fields=kv,
                status=kv.get("status", "ok"),
                note=kv.get("note", ""),
            )
        elif name == "sections":
            fx.sections.append(section_fixture_from_block(kv))
        elif name == "fibers":
            fx.expected_config = kv.get("config")
        elif name == "expect":
            if "disc" in kv:
                fx.expected_disc = int(kv["disc"])
            if "t" in kv:
                fx.expected_T = parse_form(kv["t"])
            if "derived_t" in kv:
                fx.derived_T = parse_form(kv["derived_t"])
            if "status" in kv:
                fx.status = kv["status"]
            if "note" in kv:
                fx.note = kv["note"]
            for k, v in kv.items():
                if k.startswith("pairing_"):
                    a, b = k[len("pairing_") :].split("_")
                    fx.expected_pairings[(a, b)] = parse_rational(v)  # lowercase names
    if fx is None:
        raise FixtureError("no [surface] block found")
    return fx


_registry = None


def registry() -> FixtureRegistry:
    global _registry
    if _registry is None:
        _registry = FixtureRegistry()
    return _registry
