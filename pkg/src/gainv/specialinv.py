"""Special invariants v^p + v b' - b for DF5-m, F6-m and R7-m over GF(p).

DF5: with ``b_n`` the w5-homogenization of c_n to degree mp, ``b`` is b_p mod
p and ``b'`` is (p b_{p-1} mod p) / x^m.  Then
theta(b) = b + x^m b' U + x^(mp) U^p, which makes v^p + v b' - b invariant.
F6 is reached by y-homogenization and R7 by the map alpha.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .families import (
    FAMILIES,
    GRADING,
    BoundViolationError,
    alpha_hom,
    build_example,
    quotient_y1,
    y_homogenize,
)
from .polyring import GF, QQ, DomainError, Polynomial, is_prime
from .sequence import C_RING, SequenceTable, sequence_table


class ConstructionError(AssertionError):
    """A construction step failed; ``step`` names it."""

    def __init__(self, step: str, message: str):
        super().__init__(f"{step}: {message}")
        self.step = step


@dataclass(frozen=True)
class SpecialInvariant:
    family: str
    p: int
    m: int
    b: Polynomial
    b_prime: Polynomial
    F: Polynomial
    transcript: tuple[tuple[str, bool], ...] = field(default=())

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.transcript)

    def to_json(self) -> dict:
        B = build_example(self.family, self.m, GF(self.p))
        return {
            "family": self.family,
            "p": self.p,
            "m": self.m,
            "grading": GRADING[self.family],
            "degree": self.F.weighted_degree(GRADING[self.family]),
            "b": self.b.to_json(),
            "b_prime": self.b_prime.to_json(),
            "F": self.F.to_json(),
            "F_text": self.F.format(),
            "derivation": B.derivation.to_json(),
            "transcript": {name: ok for name, ok in self.transcript},
            "passed": self.passed,
        }


def _check_params(p, m):
    if not isinstance(p, int) or not is_prime(p):
        raise DomainError(f"p must be prime, got {p!r}")
    if not isinstance(m, int) or m < 2:
        raise DomainError(f"m must be an integer >= 2, got {m!r}")


def b_n(table: SequenceTable, n: int, m: int, p: int) -> Polynomial:
    """``x^(mp) c_n(s/x^(m+1), t/x^(m+1), u/x^(m+1))`` in A5 over Q."""
    if not 0 <= n <= p <= table.N:
        raise DomainError(f"need 0 <= n <= p <= N, got n={n}, p={p}, N={table.N}")
    A5 = build_example("df5", m, QQ).subring
    c = table.c(n).embed(A5)
    try:
        out = c.homogenize("w5", m * p, "x")
    except DomainError as exc:
        raise ConstructionError(f"b_{n}", f"not a polynomial: {exc}") from None
    if out and out.weighted_degrees("w5") != {m * p}:
        raise ConstructionError(f"b_{n}", "not w5-homogeneous of degree mp")
    return out


def theta_binomial_check(table: SequenceTable, p: int, m: int) -> bool:
    """theta^(k)(b_p) = C(p, k) b_{p-k} over Q for k <= p + 2."""
    D = build_example("df5", m, QQ).sub_derivation
    bp = b_n(table, p, m, p)
    parts = D.components(bp)
    zero = D.base.zero(QQ)
    for k in range(p + 3):
        want = b_n(table, p - k, m, p).scale(comb(p, k)) if k <= p else zero
        if parts.get(k, zero) != want:
            return False
    return all(k <= p for k in parts)


def _homogeneity(F: Polynomial, grading: str, degree: int) -> bool:
    return F.weighted_degrees(grading) == {degree}


def _monic_in_v(F: Polynomial, p: int) -> bool:
    return F.degree("v") == p and F.coefficient("v", p) == F.ring.one(F.field)


def special_invariant_df5(p: int, m: int, table: SequenceTable | None = None) -> SpecialInvariant:
    _check_params(p, m)
    table = table if table is not None and table.N >= p else sequence_table(max(p, 2))
    F_p = GF(p)
    B = build_example("df5", m, F_p)
    transcript: list[tuple[str, bool]] = []

    b_prev = b_n(table, p - 1, m, p)
    big_b_prime = b_prev.scale(p)
    if big_b_prime and big_b_prime.p_valuation(p) < 0:
        raise ConstructionError("valuation", f"p*b_{p - 1} has a pole at {p}")
    transcript.append((f"p*b_{p - 1} in Z_({p})", True))
    if p > 2:
        try:
            b_prev.divide_monomial({"x": m})
        except DomainError:
            raise ConstructionError("divisibility", f"x^{m} does not divide b_{p - 1} over Q") from None
        transcript.append((f"x^{m} divides b_{p - 1} over Q", True))
    try:
        b_prime = big_b_prime.reduce_mod_p(p).divide_monomial({"x": m})
    except DomainError as exc:
        raise ConstructionError("division", f"x^{m} does not divide p*b_{p - 1} mod {p}: {exc}") from None
    transcript.append((f"x^{m} divides p*b_{p - 1} mod {p}", True))

    bp = b_n(table, p, m, p)
    try:
        b = bp.reduce_mod_p(p)
    except DomainError as exc:
        raise ConstructionError("valuation", f"b_{p} has a pole at {p}: {exc}") from None
    transcript.append((f"b_{p} in Z_({p})", True))

    D = B.sub_derivation
    U = D.extended.gen(D.U, F_p)
    x = D.extended.gen("x", F_p)
    expected = b.embed(D.extended) + x ** m * b_prime.embed(D.extended) * U + x ** (m * p) * U ** p
    if D.apply(b) != expected:
        raise ConstructionError("kernel identity", "theta(b) != b + x^m b' U + x^(mp) U^p")
    transcript.append(("theta(b) = b + x^m b' U + x^(mp) U^p", True))

    v = B.gen("v")
    F = v ** p + v * b_prime.embed(B.ring) - b.embed(B.ring)
    transcript.append(("F invariant", B.derivation.is_invariant(F)))
    transcript.append((f"F w5-homogeneous of degree {m * p}", _homogeneity(F, "w5", m * p)))
    transcript.append((f"F monic of v-degree {p}", _monic_in_v(F, p)))
    Bw = b.embed(B.ring)
    transcript.append((f"w4(b) = {p}", not b or _homogeneity(Bw, "w4", p)))
    transcript.append((f"w4(b') = {p - 1}",
                       not b_prime or _homogeneity(b_prime.embed(B.ring), "w4", p - 1)))
    return SpecialInvariant("df5", p, m, b, b_prime, F, tuple(transcript))


def special_invariant_f6(p: int, m: int, df5: SpecialInvariant | None = None) -> SpecialInvariant:
    _check_params(p, m)
    df5 = df5 or special_invariant_df5(p, m)
    B = build_example("f6", m, GF(p))
    try:
        b = y_homogenize(df5.b, m, 2 * m * p)
        b_prime = y_homogenize(df5.b_prime, m, 2 * m * p - 2 * m)
    except BoundViolationError as exc:
        raise ConstructionError("y-homogenization", str(exc)) from None
    transcript = [("y-homogenization is polynomial", True)]
    v = B.gen("v")
    F = v ** p + v * b_prime.embed(B.ring) - b.embed(B.ring)
    transcript.append(("F invariant", B.derivation.is_invariant(F)))
    transcript.append((f"F w6-homogeneous of degree {2 * m * p}", _homogeneity(F, "w6", 2 * m * p)))
    transcript.append((f"F monic of v-degree {p}", _monic_in_v(F, p)))
    transcript.append(("F|_(y=1) equals the DF5 invariant", quotient_y1(m, GF(p))(F) == df5.F))
    return SpecialInvariant("f6", p, m, b, b_prime, F, tuple(transcript))


def special_invariant_r7(p: int, m: int, f6: SpecialInvariant | None = None) -> SpecialInvariant:
    _check_params(p, m)
    f6 = f6 or special_invariant_f6(p, m)
    B = build_example("r7", m, GF(p))
    alpha = alpha_hom(m, GF(p))
    b = alpha(f6.b.embed(alpha.source))
    b_prime = alpha(f6.b_prime.embed(alpha.source))
    F = alpha(f6.F)
    transcript = [
        ("F = v^p + v alpha(b') - alpha(b)",
         F == B.gen("v") ** p + B.gen("v") * b_prime - b),
        ("F invariant", B.derivation.is_invariant(F)),
        (f"F w7-homogeneous of degree {3 * m * p}", _homogeneity(F, "w7", 3 * m * p)),
        (f"F monic of v-degree {p}", _monic_in_v(F, p)),
    ]
    v_free = B.ring.drop("v")
    return SpecialInvariant("r7", p, m, b.embed(v_free), b_prime.embed(v_free), F,
                            tuple(transcript))


def special_invariant(family: str, p: int, m: int) -> SpecialInvariant:
    family = family.lower()
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}")
    inv = special_invariant_df5(p, m)
    if family == "df5":
        return inv
    inv = special_invariant_f6(p, m, inv)
    if family == "f6":
        return inv
    return special_invariant_r7(p, m, inv)


def all_special_invariants(p: int, m: int) -> dict[str, SpecialInvariant]:
    f5 = special_invariant_df5(p, m)
    f6 = special_invariant_f6(p, m, f5)
    return {"df5": f5, "f6": f6, "r7": special_invariant_r7(p, m, f6)}


def verify_serialized(obj: dict) -> tuple[bool, list[tuple[str, bool]]]:
    """Re-check an emitted special invariant; returns (ok, checks)."""
    from .lfihd import HigherDerivation

    family = obj["family"]
    p, m = int(obj["p"]), int(obj["m"])
    B = build_example(family, m, GF(p))
    if "derivation" in obj:
        D = HigherDerivation.from_json(obj["derivation"], B.ring)
    else:
        D = B.derivation
    F = Polynomial.from_json(obj["F"], B.ring)
    sub = B.ring.drop("v")
    b = Polynomial.from_json(obj["b"], sub).embed(B.ring)
    bp = Polynomial.from_json(obj["b_prime"], sub).embed(B.ring)
    v = B.gen("v")
    grading = GRADING[family]
    degree = {"df5": m * p, "f6": 2 * m * p, "r7": 3 * m * p}[family]
    checks = [
        ("field is GF(p)", F.field == GF(p)),
        ("F = v^p + v b' - b", F == v ** p + v * bp - b),
        ("F invariant", D.is_invariant(F)),
        (f"F {grading}-homogeneous of degree {degree}", bool(F) and _homogeneity(F, grading, degree)),
        (f"F monic of v-degree {p}", bool(F) and _monic_in_v(F, p)),
    ]
    return all(ok for _, ok in checks), checks


__all__ = [
    "ConstructionError",
    "SpecialInvariant",
    "b_n",
    "theta_binomial_check",
    "special_invariant_df5",
    "special_invariant_f6",
    "special_invariant_r7",
    "special_invariant",
    "all_special_invariants",
    "verify_serialized",
    "C_RING",
]
