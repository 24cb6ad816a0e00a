"""Locally finite iterative higher derivations given by generator images.

A derivation ``theta`` on a polynomial ring ``B`` is stored as the images
``theta(g) in B[U]`` of the ring variables; it acts on any element by
substitution.  The Leibniz rule and local finiteness hold by construction for
such a map, so only ``theta(g)|_{U=0} = g`` and iterativity need checking.
Iterativity is checked on generators through the coaction identity
``theta_V(theta_U(g)) == theta(g)|_{U -> U+V}`` in ``B[U, V]``: both sides are
algebra maps, so agreement on generators gives agreement everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .polyring import QQ, DomainError, Field, Polynomial, Ring

__all__ = [
    "AxiomError",
    "Verdict",
    "HigherDerivation",
    "RingHom",
    "check_axioms",
    "check_homogeneous",
    "check_equivariant",
    "trivial_derivation",
]


class AxiomError(DomainError):
    pass


@dataclass(frozen=True)
class Verdict:
    passed: bool
    witness: str | None = None
    lhs: Polynomial | None = None
    rhs: Polynomial | None = None

    def __bool__(self):
        return self.passed

    def describe(self) -> str:
        if self.passed:
            return "pass"
        return f"fail on {self.witness}: {self.lhs} != {self.rhs}"


def _as_poly(value, ring: Ring, fld: Field) -> Polynomial:
    if isinstance(value, Polynomial):
        return value.embed(ring)
    if isinstance(value, str):
        return Polynomial.parse(value, ring, fld)
    return ring.constant(value, fld)


@dataclass(frozen=True, eq=False)
class HigherDerivation:
    base: Ring
    field: Field
    images: Mapping[str, Polynomial]
    U: str = "U"
    extended: Ring = field(init=False, repr=False)

    def __post_init__(self):
        ext = self.base.extend([self.U])
        object.__setattr__(self, "extended", ext)
        imgs = {}
        for v in self.base.variables:
            if v not in self.images:
                raise AxiomError(f"no image for generator {v!r}")
            imgs[v] = _as_poly(self.images[v], ext, self.field)
            if imgs[v].field != self.field:
                raise AxiomError(f"image of {v!r} is over the wrong field")
        extra = set(self.images) - set(self.base.variables)
        if extra:
            raise AxiomError(f"images given for unknown variables {sorted(extra)}")
        object.__setattr__(self, "images", imgs)
        for v, img in imgs.items():
            if img.coefficient(self.U, 0) != self.base.gen(v, self.field).embed(ext):
                raise AxiomError(f"theta({v})|_(U=0) is not {v}")

    @classmethod
    def from_strings(cls, base: Ring, fld: Field, images: Mapping[str, str], U: str = "U"):
        return cls(base, fld, dict(images), U)

    def __eq__(self, other):
        return (isinstance(other, HigherDerivation) and self.base == other.base
                and self.field == other.field and self.U == other.U
                and self.images == other.images)

    __hash__ = None

    def apply(self, f: Polynomial) -> Polynomial:
        """theta(f) as an element of ``B[U]``."""
        if f.ring != self.base:
            f = f.embed(self.base)
        return f.substitute(self.images, self.extended)

    def theta_n(self, f: Polynomial, n: int) -> Polynomial:
        """The ``U**n`` coefficient of theta(f), back in the base ring."""
        return self.apply(f).coefficient(self.U, n).embed(self.base)

    def components(self, f: Polynomial) -> dict[int, Polynomial]:
        """All nonzero theta^(n)(f), keyed by n."""
        return {n: c.embed(self.base)
                for n, c in self.apply(f).coefficients_in(self.U).items()}

    def is_invariant(self, f: Polynomial) -> bool:
        if f.ring != self.base:
            f = f.embed(self.base)
        return self.apply(f) == f.embed(self.extended)

    def restrict(self, subring: Ring) -> HigherDerivation:
        """The induced derivation on a subring generated by some variables."""
        ext = subring.extend([self.U])
        return HigherDerivation(subring, self.field,
                                {v: self.images[v].embed(ext) for v in subring.variables},
                                self.U)

    def to_json(self) -> dict:
        return {
            "ring": list(self.base.variables),
            "U": self.U,
            "images": {v: self.images[v].to_json() for v in self.base.variables},
        }

    @classmethod
    def from_json(cls, obj: Mapping, base: Ring | None = None) -> HigherDerivation:
        try:
            names = list(obj["ring"])
            U = obj.get("U", "U")
            raw = obj["images"]
        except (KeyError, TypeError, AttributeError) as exc:
            raise DomainError(f"malformed derivation JSON: {exc}") from None
        if base is None:
            base = Ring(tuple(names))
        ext = base.extend([U])
        images = {v: Polynomial.from_json(p, ext) for v, p in raw.items()}
        fields = {p.field for p in images.values()}
        if len(fields) != 1:
            raise DomainError("derivation images disagree on the field")
        return cls(base, fields.pop(), images, U)


def check_axioms(D: HigherDerivation) -> Verdict:
    """theta^(0) = id and iterativity, via the coaction identity on generators."""
    U, V = D.U, D.U + "V"
    while V in D.extended:
        V += "V"
    big = D.extended.extend([V])
    Up = big.gen(U, D.field)
    Vp = big.gen(V, D.field)
    # theta with its parameter renamed to V, acting on base variables
    theta_V = {v: D.images[v].embed(big).subs(**{U: Vp}) for v in D.base.variables}
    for v in D.base.variables:
        img = D.images[v]
        g = D.base.gen(v, D.field).embed(D.extended)
        if img.coefficient(U, 0) != g:
            return Verdict(False, v, img.coefficient(U, 0), g)
        lhs = img.substitute({**theta_V, U: Up}, big)
        rhs = img.embed(big).subs(**{U: Up + Vp})
        if lhs != rhs:
            return Verdict(False, v, lhs, rhs)
    return Verdict(True)


def check_homogeneous(D: HigherDerivation, grading: str, weight_of_U: int) -> bool:
    """Is every theta(g) homogeneous of the weight of g, with U weighted as given?"""
    w = dict(zip(D.base.variables, D.base.weights(grading)))
    ext = D.extended.with_grading(grading, {**w, D.U: weight_of_U})
    for v in D.base.variables:
        img = D.images[v].embed(ext)
        if img.weighted_degrees(grading) != {w[v]}:
            return False
    return True


@dataclass(frozen=True, eq=False)
class RingHom:
    source: Ring
    target: Ring
    field: Field
    images: Mapping[str, Polynomial]

    def __post_init__(self):
        imgs = {}
        for v in self.source.variables:
            if v not in self.images:
                raise DomainError(f"no image for source variable {v!r}")
            imgs[v] = _as_poly(self.images[v], self.target, self.field)
        object.__setattr__(self, "images", imgs)

    def __call__(self, f: Polynomial) -> Polynomial:
        if f.ring != self.source:
            f = f.embed(self.source)
        return f.substitute(self.images, self.target)

    def extend_by(self, U: str, src_ext: Ring, tgt_ext: Ring) -> RingHom:
        """phi_U: the same map on ``source[U] -> target[U]`` with U fixed."""
        imgs = {v: g.embed(tgt_ext) for v, g in self.images.items()}
        imgs[U] = tgt_ext.gen(U, self.field)
        return RingHom(src_ext, tgt_ext, self.field, imgs)


def check_equivariant(phi: RingHom, D_src: HigherDerivation, D_tgt: HigherDerivation) -> Verdict:
    """phi_U(theta_src(g)) == theta_tgt(phi(g)) for every source generator g."""
    if D_src.U != D_tgt.U:
        raise DomainError("derivations use different parameter names")
    phi_U = phi.extend_by(D_src.U, D_src.extended, D_tgt.extended)
    for v in phi.source.variables:
        lhs = phi_U(D_src.images[v])
        rhs = D_tgt.apply(phi.images[v])
        if lhs != rhs:
            return Verdict(False, v, lhs, rhs)
    return Verdict(True)


def trivial_derivation(base: Ring, fld: Field = QQ, U: str = "U") -> HigherDerivation:
    return HigherDerivation(base, fld, {v: base.gen(v, fld) for v in base.variables}, U)
