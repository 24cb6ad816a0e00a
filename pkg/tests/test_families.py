import pytest

from gainv.families import (
    BoundViolationError,
    ParameterError,
    alpha_hom,
    build_example,
    check_alpha,
    check_quotient,
    clear_x_denominator,
    compare_with_reference,
    f6_f2_readings,
    known_generators,
    quotient_y1,
    slice_invariants,
    y_homogenize,
)
from gainv.polyring import GF, QQ, DomainError, Polynomial


def test_build_example_images():
    B = build_example("df5", 2)
    assert B.derivation.images["v"].format() == "v + x^2*U"
    R = build_example("r7", 3, GF(5))
    assert R.derivation.images["y1"] == Polynomial.parse("y1 + x1^4*U", R.derivation.extended, GF(5))
    F = build_example("f6", 2)
    assert F.derivation.images["u"] == Polynomial.parse(
        "u + 3*y^3*t*U + 3*y^6*s*U^2 + x^3*y^6*U^3", F.derivation.extended)


def test_build_example_rejects_small_m():
    with pytest.raises(ParameterError):
        build_example("df5", 1)
    with pytest.raises(ParameterError):
        build_example("k9", 2)


def test_alpha_m2_images():
    a = alpha_hom(2)
    r7 = build_example("r7", 2).ring
    assert a.images["s"] == r7("y1")
    assert a.images["y"] == r7("x2*x3")
    # factored form: (x2^6y3^2 + x2^3x3^3y2y3 + x3^6y2^2)y1 - (x3^3y2 + x2^3y3)x1^3y2y3
    factored = (r7("x2^6*y3^2 + x2^3*x3^3*y2*y3 + x3^6*y2^2") * r7("y1")
                - r7("x3^3*y2 + x2^3*y3") * r7("x1^3*y2*y3"))
    assert a.images["u"] == factored
    assert a.images["t"] == r7("x3^3*y2 + x2^3*y3") * r7("y1") - r7("x1^3*y2*y3")


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_equivariance(m):
    assert check_alpha(m)
    assert check_quotient(m)


def test_quotient_maps_theta_t():
    F6, DF5 = build_example("f6", 2), build_example("df5", 2)
    q = quotient_y1(2)
    q_U = q.extend_by("U", F6.derivation.extended, DF5.derivation.extended)
    assert q_U(F6.derivation.images["t"]) == DF5.derivation.images["t"]
    assert q(F6.parse("s")) == DF5.parse("s")


def test_y_homogenize_examples():
    A5 = build_example("df5", 2).subring
    A6 = build_example("f6", 2).subring
    assert y_homogenize(A5("x*t"), 2, 8) == A6("x*y*t")
    assert y_homogenize(A5("x^3*u"), 2, 12) == A6("x^3*u")
    assert y_homogenize(A5.one(), 2, 0) == A6.one()


def test_y_homogenize_matches_weight_homogenization():
    A5 = build_example("df5", 3).subring
    A6 = build_example("f6", 3).subring
    f = A5("x^5*s^2 - 7*x*s*t*u + 2*x^9*t")  # w5-homogeneous of degree 13
    lifted = y_homogenize(f, 3, 30)
    assert lifted == f.embed(A6).homogenize("w6", 30, "y")


def test_y_homogenize_bound_violation():
    A5 = build_example("df5", 2).subring
    with pytest.raises(BoundViolationError):
        y_homogenize(A5("u"), 2, 3)


def test_y_homogenize_requires_homogeneous_input():
    A5 = build_example("df5", 2).subring
    with pytest.raises(DomainError):
        y_homogenize(A5("x + s"), 2, 10)


def test_slice_invariants_df5():
    sl = slice_invariants("df5", 2)
    lau = sl["t"].ring
    assert sl["t"] == lau("t - s^2*x^-3")
    assert sl["u"] == lau("u - 3*s*t*x^-3 + 2*s^3*x^-6")
    assert sl["x"] == lau("x")


@pytest.mark.parametrize("family", ["df5", "f6", "r7"])
@pytest.mark.parametrize("m", [2, 3, 4])
def test_slice_invariants_clear_to_invariants(family, m):
    B = build_example(family, m)
    xvar = "x1" if family == "r7" else "x"
    for g in slice_invariants(family, m).values():
        f = clear_x_denominator(g, xvar, B.subring)
        assert B.sub_derivation.is_invariant(f)


def test_known_generators_df5_m2():
    gs = known_generators("df5", 2)
    A5 = build_example("df5", 2).subring
    f1, f2, f3 = gs.polys()[1:]
    assert f3 == A5("x^6*u^2 + 4*x^3*t^3 - 6*x^3*s*t*u + 4*s^3*u - 3*s^2*t^2")
    assert (4 * f1 ** 3 + f2 ** 2) == A5("x^6") * f3


def test_r7_m3_generator_invariant():
    B = build_example("r7", 3)
    assert B.sub_derivation.is_invariant(B.parse_sub("x1^4*y2 - x2^4*y1"))


@pytest.mark.parametrize("family", ["df5", "f6", "r7"])
@pytest.mark.parametrize("m", [2, 3, 4, 5])
@pytest.mark.parametrize("fld", [QQ, GF(2), GF(5)])
def test_generators_invariant(family, m, fld):
    gs = known_generators(family, m, fld)
    D = build_example(family, m, fld).sub_derivation
    assert all(D.is_invariant(g) for g in gs.polys())


@pytest.mark.parametrize("family", ["df5", "f6", "r7"])
def test_reference_forms_match(family):
    assert all(same for _, _, same in compare_with_reference(family).values())


def test_f6_printed_reading():
    readings = f6_f2_readings()
    assert readings == {"x^3*y^3 (typo corrected)": True, "x^3*x^3 (literal)": False}


def test_generator_json():
    obj = known_generators("r7", 2).to_json()
    assert obj[3]["name"] == "g12"
    assert obj[3]["polynomial"]["ring"][0] == "x1"
