import pytest
import sympy

from gainv.families import alpha_hom, build_example, quotient_y1
from gainv.polyring import GF, DomainError
from gainv.sequence import sequence_table
from gainv.specialinv import (
    b_n,
    special_invariant,
    special_invariant_df5,
    theta_binomial_check,
    verify_serialized,
)

PRIMES = [2, 3, 5, 7, 11, 13]


def test_b_n_examples():
    T = sequence_table(5)
    A5 = build_example("df5", 2).subring
    assert b_n(T, 2, 2, 2) == A5("x*t")
    assert b_n(T, 3, 2, 3) == A5("x^3*u")
    assert b_n(T, 0, 2, 3) == A5("x^6")
    assert b_n(T, 5, 2, 5) == A5("12*x*s^2*u - 9*x*s*t^2 - 2*x^4*t*u")


def test_b_n_rejects_out_of_range():
    with pytest.raises(DomainError):
        b_n(sequence_table(3), 4, 2, 3)


def test_theta_of_b3():
    D = build_example("df5", 2).sub_derivation
    assert D.theta_n(D.base("x^3*u"), 1) == D.base("3*x^3*t")


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("m", [2, 3])
def test_theta_binomial(p, m):
    assert theta_binomial_check(sequence_table(p), p, m)


def test_p2_goldens():
    assert special_invariant("df5", 2, 2).F.format() == "v^2 + x*t"
    assert special_invariant("f6", 2, 2).F.format() == "v^2 + x*y*t"
    r7 = build_example("r7", 2, GF(2))
    a = alpha_hom(2, GF(2))
    want = r7.gen("v") ** 2 + a(a.source("x*y*t", GF(2)))
    assert special_invariant("r7", 2, 2).F == want


def test_p3_goldens():
    F5 = special_invariant("df5", 3, 2).F
    assert F5.format() == "v^3 + 2*x^3*u"
    assert special_invariant("f6", 3, 2).F == build_example("f6", 2, GF(3)).parse("v^3 - x^3*u")
    a = alpha_hom(2, GF(3))
    r7 = build_example("r7", 2, GF(3))
    want = r7.gen("v") ** 3 - r7.gen("x1") ** 3 * a.images["u"]
    assert special_invariant("r7", 3, 2).F == want


def test_p5_df5_value():
    inv = special_invariant("df5", 5, 2)
    assert not inv.b_prime
    B = build_example("df5", 2, GF(5))
    assert inv.F == B.parse("v^5 + 3*x*s^2*u + 4*x*s*t^2 + 2*x^4*t*u")


def test_b_prime_vanishes_except_p_one_mod_six():
    for p in PRIMES:
        inv = special_invariant_df5(p, 2)
        assert bool(inv.b_prime) == (p % 6 == 1), p


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_grid(p, m):
    for family in ("df5", "f6", "r7"):
        inv = special_invariant(family, p, m)
        assert inv.passed, (family, [n for n, ok in inv.transcript if not ok])
        assert inv.F.field == GF(p)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_f6_restricts_to_df5(p):
    q = quotient_y1(3, GF(p))
    assert q(special_invariant("f6", p, 3).F) == special_invariant("df5", p, 3).F


def _sympy_invariant(family, p, m):
    """Independent invariance check: substitute theta into F with sympy mod p."""
    inv = special_invariant(family, p, m)
    D = build_example(family, m, GF(p)).derivation
    sym = {v: sympy.Symbol(v) for v in D.extended.variables}

    def conv(f):
        return sympy.sympify(f.format().replace("^", "**"), locals=sym)

    F = conv(inv.F)
    images = {sym[v]: conv(D.images[v]) for v in D.base.variables}
    lhs = sympy.Poly(F.xreplace(images), *sym.values(), modulus=p)
    rhs = sympy.Poly(F, *sym.values(), modulus=p)
    return lhs == rhs


@pytest.mark.parametrize("family, p, m", [
    ("df5", 2, 2), ("df5", 5, 3), ("df5", 7, 2), ("f6", 3, 2), ("f6", 7, 3), ("r7", 2, 2), ("r7", 5, 2),
])
def test_invariance_against_sympy(family, p, m):
    assert _sympy_invariant(family, p, m)


def test_serialized_roundtrip_and_tamper():
    obj = special_invariant("f6", 7, 2).to_json()
    ok, checks = verify_serialized(obj)
    assert ok and len(checks) == 5
    obj["b"]["terms"][0]["c"] = str((int(obj["b"]["terms"][0]["c"]) + 1) % 7)
    ok, checks = verify_serialized(obj)
    assert not ok


def test_parameters_validated():
    with pytest.raises(DomainError):
        special_invariant("df5", 4, 2)
    with pytest.raises(DomainError):
        special_invariant("df5", 3, 1)
    with pytest.raises(DomainError):
        special_invariant("q8", 3, 2)
