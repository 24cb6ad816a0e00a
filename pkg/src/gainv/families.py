"""The DF5-m, F6-m and R7-m families, their gradings and connecting maps.

Generator images are written in the polynomial text format and parsed, which
keeps the tables below readable against the usual presentations.  Every
constructed bundle is checked (axioms and homogeneity) before it is returned.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .lfihd import (
    AxiomError,
    HigherDerivation,
    RingHom,
    check_axioms,
    check_equivariant,
    check_homogeneous,
)
from .polyring import QQ, DomainError, Field, Polynomial, Ring

FAMILIES = ("df5", "f6", "r7")
GRADING = {"df5": "w5", "f6": "w6", "r7": "w7"}


class ParameterError(DomainError):
    pass


class BoundViolationError(DomainError):
    """y-homogenization produced a negative power of y."""


def _check_m(m):
    if not isinstance(m, int) or m < 2:
        raise ParameterError(f"m must be an integer >= 2, got {m!r}")


def _family(name: str) -> str:
    key = name.lower()
    if key not in FAMILIES:
        raise ParameterError(f"unknown family {name!r}; expected one of {FAMILIES}")
    return key


def _ring(family: str, m: int) -> Ring:
    k = m + 1
    if family == "df5":
        return Ring.make("xstuv", gradings={
            "w5": dict(x=1, s=k, t=k, u=k, v=m),
            "w4": dict(x=0, s=1, t=2, u=3, v=1),
        })
    if family == "f6":
        return Ring.make("xystuv", gradings={
            "w6": dict(x=1, y=1, s=k, t=2 * k, u=3 * k, v=2 * m),
        })
    names = ["x1", "x2", "x3", "y1", "y2", "y3", "v"]
    return Ring.make(names, gradings={
        "w7": dict(x1=1, x2=1, x3=1, y1=k, y2=k, y3=k, v=3 * m),
    })


def _images(family: str, m: int) -> dict[str, str]:
    k, k2 = m + 1, 2 * (m + 1)
    if family == "df5":
        return {
            "x": "x",
            "s": f"s + x^{k}*U",
            "t": f"t + 2*s*U + x^{k}*U^2",
            "u": f"u + 3*t*U + 3*s*U^2 + x^{k}*U^3",
            "v": f"v + x^{m}*U",
        }
    if family == "f6":
        return {
            "x": "x",
            "y": "y",
            "s": f"s + x^{k}*U",
            "t": f"t + 2*y^{k}*s*U + x^{k}*y^{k}*U^2",
            "u": f"u + 3*y^{k}*t*U + 3*y^{k2}*s*U^2 + x^{k}*y^{k2}*U^3",
            "v": f"v + x^{m}*y^{m}*U",
        }
    imgs = {f"x{i}": f"x{i}" for i in (1, 2, 3)}
    imgs.update({f"y{i}": f"y{i} + x{i}^{k}*U" for i in (1, 2, 3)})
    imgs["v"] = f"v + x1^{m}*x2^{m}*x3^{m}*U"
    return imgs


@dataclass(frozen=True, eq=False)
class ExampleBundle:
    family: str
    m: int
    field: Field
    ring: Ring
    derivation: HigherDerivation
    subring: Ring
    sub_derivation: HigherDerivation

    @property
    def grading(self) -> str:
        return GRADING[self.family]

    def gen(self, name: str) -> Polynomial:
        return self.ring.gen(name, self.field)

    def parse(self, text: str) -> Polynomial:
        return Polynomial.parse(text, self.ring, self.field)

    def parse_sub(self, text: str) -> Polynomial:
        return Polynomial.parse(text, self.subring, self.field)


@functools.lru_cache(maxsize=None)
def build_example(family: str, m: int, fld: Field = QQ) -> ExampleBundle:
    family = _family(family)
    _check_m(m)
    ring = _ring(family, m)
    D = HigherDerivation.from_strings(ring, fld, _images(family, m))
    verdict = check_axioms(D)
    if not verdict:
        raise AxiomError(f"{family}-{m}: {verdict.describe()}")
    if not check_homogeneous(D, GRADING[family], 0):
        raise AxiomError(f"{family}-{m} is not {GRADING[family]}-homogeneous")
    if family == "df5" and not check_homogeneous(D, "w4", 1):
        raise AxiomError(f"df5-{m} is not w4-homogeneous with U of weight 1")
    sub = ring.drop("v")
    return ExampleBundle(family, m, fld, ring, D, sub, D.restrict(sub))


# ---------------------------------------------------------------------------
# connecting homomorphisms


def alpha_images(m: int) -> dict[str, str]:
    k, k2 = m + 1, 2 * (m + 1)
    return {
        "x": "x1",
        "y": "x2*x3",
        "s": "y1",
        "t": f"x3^{k}*y1*y2 + x2^{k}*y1*y3 - x1^{k}*y2*y3",
        "u": (f"x2^{k2}*y1*y3^2 + x2^{k}*x3^{k}*y1*y2*y3 + x3^{k2}*y1*y2^2"
              f" - x1^{k}*x3^{k}*y2^2*y3 - x1^{k}*x2^{k}*y2*y3^2"),
        "v": "v",
    }


@functools.lru_cache(maxsize=None)
def alpha_hom(m: int, fld: Field = QQ) -> RingHom:
    """The equivariant map B6 -> B7 (F6-m into R7-m)."""
    _check_m(m)
    return RingHom(_ring("f6", m), _ring("r7", m), fld, alpha_images(m))


@functools.lru_cache(maxsize=None)
def quotient_y1(m: int, fld: Field = QQ) -> RingHom:
    """B6 -> B6/(y - 1) = B5."""
    _check_m(m)
    src, tgt = _ring("f6", m), _ring("df5", m)
    images = {v: tgt.gen(v, fld) for v in tgt.variables}
    images["y"] = tgt.one(fld)
    return RingHom(src, tgt, fld, images)


def check_alpha(m: int, fld: Field = QQ):
    return check_equivariant(alpha_hom(m, fld), build_example("f6", m, fld).derivation,
                             build_example("r7", m, fld).derivation)


def check_quotient(m: int, fld: Field = QQ):
    return check_equivariant(quotient_y1(m, fld), build_example("f6", m, fld).derivation,
                             build_example("df5", m, fld).derivation)


# ---------------------------------------------------------------------------
# lifting DF5 elements to F6


def y_homogenize(f: Polynomial, m: int, target: int) -> Polynomial:
    """``y**target * f(x/y, s/y^(m+1), t/y^(2(m+1)), u/y^(3(m+1)))`` in A6.

    ``f`` must be a w5-homogeneous element of A5 = k[x,s,t,u].  The
    substitution runs in a ring where y may carry negative exponents; a
    negative power of y in the result raises :class:`BoundViolationError`.
    """
    _check_m(m)
    a5 = _ring("df5", m).drop("v")
    a6 = _ring("f6", m).drop("v")
    fld = f.field
    f = f.embed(a5)
    if not f.is_homogeneous("w5"):
        raise DomainError("y_homogenize needs a w5-homogeneous input")
    k = m + 1
    lau = a6.with_laurent("y")

    def scaled(var, power):
        return Polynomial(lau, fld, {_exps(lau, **{var: 1, "y": -power}): 1})

    images = {"x": scaled("x", 1), "s": scaled("s", k), "t": scaled("t", 2 * k),
              "u": scaled("u", 3 * k)}
    lifted = f.substitute(images, lau) * Polynomial(lau, fld, {_exps(lau, y=target): 1})
    try:
        out = lifted.embed(a6)
    except DomainError as exc:
        raise BoundViolationError(
            f"y-homogenization to degree {target} leaves a pole in y: {exc}") from None
    if out and out.weighted_degrees("w6") != {target}:
        raise BoundViolationError(f"lift is not w6-homogeneous of degree {target}")
    return out


def _exps(ring: Ring, **powers) -> tuple[int, ...]:
    e = [0] * len(ring)
    for v, k in powers.items():
        e[ring.index(v)] = k
    return tuple(e)


# ---------------------------------------------------------------------------
# slices and generators of the v-free subrings


_SLICE = {"df5": ("s", "x"), "f6": ("s", "x"), "r7": ("y1", "x1")}


def slice_invariants(family: str, m: int, fld: Field = QQ) -> dict[str, Polynomial]:
    """theta(g) evaluated at U = -slice/x^(m+1), for the non-slice generators g.

    Results live in the v-free subring with the slice's x variable made
    Laurent.  The R7 slice uses y1 and x1; any of the three pairs would do.
    """
    family = _family(family)
    B = build_example(family, m, fld)
    slice_var, xvar = _SLICE[family]
    lau = B.subring.with_laurent(xvar)
    xinv = Polynomial(lau, fld, {_exps(lau, **{xvar: -(m + 1)}): 1})
    at = -lau.gen(slice_var, fld) * xinv
    images = {v: lau.gen(v, fld) for v in B.subring.variables}
    images[B.derivation.U] = at
    D = B.sub_derivation
    out = {}
    for g in B.subring.variables:
        if g == slice_var:
            continue
        out[g] = D.images[g].substitute(images, lau)
    return out


def clear_x_denominator(f: Polynomial, xvar: str, ring: Ring) -> Polynomial:
    """Multiply by the smallest power of ``xvar`` making ``f`` a polynomial in ``ring``."""
    low = f.min_degree(xvar) if f else 0
    if low < 0:
        f = f * Polynomial(f.ring, f.field, {_exps(f.ring, **{xvar: -low}): 1})
    return f.embed(ring)


@dataclass(frozen=True)
class GeneratorSet:
    family: str
    m: int
    generators: tuple[tuple[str, Polynomial, str], ...]

    def polys(self) -> list[Polynomial]:
        return [g for _, g, _ in self.generators]

    def to_json(self) -> list[dict]:
        return [{"name": n, "provenance": prov, "polynomial": g.to_json()}
                for n, g, prov in self.generators]


# Reference generator forms for m = 2, hand-expanded into the text grammar.
REFERENCE_GENERATORS_M2 = {
    "df5": {
        "x": "x",
        "f1": "x^3*t - s^2",
        "f2": "x^6*u - 3*x^3*s*t + 2*s^3",
        "f3": "x^6*u^2 + 4*x^3*t^3 - 6*x^3*s*t*u + 4*s^3*u - 3*s^2*t^2",
    },
    "f6": {
        "x": "x",
        "y": "y",
        "f1": "x^3*t - y^3*s^2",
        "f2": "x^6*u - 3*x^3*y^3*s*t + 2*y^6*s^3",
        "f3": "x^6*u^2 + 4*x^3*y^3*t^3 - 6*x^3*y^3*s*t*u + 4*y^6*s^3*u - 3*y^6*s^2*t^2",
    },
    "r7": {
        "x1": "x1",
        "x2": "x2",
        "x3": "x3",
        "g12": "x1^3*y2 - x2^3*y1",
        "g13": "x1^3*y3 - x3^3*y1",
        "g23": "x2^3*y3 - x3^3*y2",
    },
}

# Two readings of the printed F6 f2-analogue "x^6u-3x^3x^3st+2y^6s^3".
F6_F2_READINGS = {
    "x^3*y^3 (typo corrected)": "x^6*u - 3*x^3*y^3*s*t + 2*y^6*s^3",
    "x^3*x^3 (literal)": "x^6*u - 3*x^6*s*t + 2*y^6*s^3",
}


def f6_f2_readings(fld: Field = QQ) -> dict[str, bool]:
    """Invariance of both readings of the printed A6 generator."""
    B = build_example("f6", 2, fld)
    return {name: B.sub_derivation.is_invariant(B.parse_sub(text))
            for name, text in F6_F2_READINGS.items()}


@functools.lru_cache(maxsize=None)
def known_generators(family: str, m: int, fld: Field = QQ) -> GeneratorSet:
    """Invariant generators of the v-free subring (each one checked)."""
    family = _family(family)
    B = build_example(family, m, fld)
    P = B.parse_sub
    k, k2 = m + 1, 2 * (m + 1)
    gens: list[tuple[str, Polynomial, str]] = []
    if family in ("df5", "f6"):
        yk = "" if family == "df5" else f"*y^{k}"
        yk2 = "" if family == "df5" else f"*y^{k2}"
        f1 = P(f"x^{k}*t - s^2{yk}")
        f2 = P(f"x^{k2}*u - 3*x^{k}*s*t{yk} + 2*s^3{yk2}")
        # 4 f1^3 + f2^2 (with y^(m+1) on f1^3 for F6 to keep it w6-homogeneous)
        rel = 4 * f1 ** 3 * (P(f"y^{k}") if family == "f6" else 1) + f2 ** 2
        try:
            f3 = rel.divide_monomial({"x": k2})
        except DomainError as exc:
            raise AssertionError(f"x^{k2} does not divide the relation: {exc}") from None
        gens.append(("x", P("x"), "coordinate"))
        if family == "f6":
            gens.append(("y", P("y"), "coordinate"))
        prov = "printed (m=2)" if m == 2 else "derived by parametrizing in m"
        gens += [("f1", f1, prov), ("f2", f2, prov),
                 ("f3", f3, prov + "; exact quotient of the relation by x^" + str(k2))]
    else:
        prov = "printed (m=2)" if m == 2 else "derived by parametrizing in m"
        gens += [(f"x{i}", P(f"x{i}"), "coordinate") for i in (1, 2, 3)]
        for i, j in ((1, 2), (1, 3), (2, 3)):
            gens.append((f"g{i}{j}", P(f"x{i}^{k}*y{j} - x{j}^{k}*y{i}"), prov))
    for name, g, _ in gens:
        if not B.sub_derivation.is_invariant(g):
            raise AssertionError(f"{family}-{m} generator {name} = {g} is not invariant")
    return GeneratorSet(family, m, tuple(gens))


def compare_with_reference(family: str, fld: Field = QQ) -> dict[str, tuple[str, str, bool]]:
    """Canonical text of each m = 2 generator against the reference form."""
    family = _family(family)
    B = build_example(family, 2, fld)
    gs = known_generators(family, 2, fld)
    out = {}
    for name, g, _ in gs.generators:
        ref = B.parse_sub(REFERENCE_GENERATORS_M2[family][name]).format()
        out[name] = (g.format(), ref, g.format() == ref)
    return out
