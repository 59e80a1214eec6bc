import pytest

from qlorentz.qarith import Deformation, HalfInt, half_range, q_number
from qlorentz.repcore import (
    RepLabel,
    SingularCoefficientError,
    casimir_eigenvalue,
    check_recurrences,
    classify,
    coeff_a,
    coeff_c,
    conjugate_partner,
)


def lab(l0: str, l1, q: float) -> RepLabel:
    return RepLabel(HalfInt.parse(l0), l1, Deformation(q))


# ---------------------------------------------------------------- classification


def test_classify_two_dimensional_spinor():
    c = classify(lab("1/2", 1.5, 1.3))
    assert c.kind == "finite"
    assert c.n == 0
    assert c.spins == (HalfInt(1),)
    assert c.dim == 2
    assert c.unitary == "non_unitary"


def test_classify_principal():
    c = classify(lab("0", 2.7j, 1.3))
    assert c.kind == "infinite"
    assert c.unitary == "principal"
    assert c.rho == pytest.approx(2.7)


def test_classify_complementary():
    c = classify(lab("0", 0.5, 0.7))
    assert c.kind == "infinite"
    assert c.unitary == "complementary"


def test_classify_non_unitary_infinite():
    c = classify(lab("1", 0.5, 1.3))
    assert c.kind == "infinite"
    assert c.unitary == "non_unitary"


def test_classify_finite_four_dimensional():
    c = classify(lab("0", 2.0, 2.0))
    assert c.kind == "finite"
    assert c.n == 1
    assert c.spins == (HalfInt(0), HalfInt(2))
    # dimension from independent enumeration of 2j+1
    assert c.dim == sum(2 * j + 1 for j in (0, 1)) == 4


def test_classify_negative_real_l1_is_finite():
    c = classify(lab("1/2", -1.5, 1.3))
    assert c.kind == "finite" and c.dim == 2


@pytest.mark.parametrize(
    "l0,l1",
    [("0", 1.0), ("0", 2.0), ("1/2", 1.5), ("1", 3.0), ("3/2", 2.5)],
)
def test_finite_dimension_equals_l1sq_minus_l0sq(l0, l1):
    c = classify(lab(l0, l1, 1.3))
    assert c.kind == "finite"
    l0f = float(HalfInt.parse(l0))
    assert c.dim == pytest.approx(l1 * l1 - l0f * l0f)


def test_classify_involution_stable():
    for l0, l1 in [("0", 0.5), ("1", 2.7j), ("1/2", 1.5), ("2", 0.3 + 0.4j)]:
        a = classify(lab(l0, l1, 1.3))
        b = classify(lab(l0, l1, 1 / 1.3))
        assert a == b


def test_classify_degenerate_boundary():
    c = classify(lab("1", 1.0, 1.3))
    assert c.kind == "infinite"
    assert c.degenerate


def test_label_record_round_trip():
    label = lab("3/2", 0.5 - 2j, 0.7)
    rec = label.to_record()
    back = RepLabel.from_record(rec)
    assert back.l0 == label.l0 and back.l1 == label.l1 and back.d.q == label.d.q


def test_label_rejects_negative_l0():
    with pytest.raises(ValueError):
        lab("-1/2", 1.0, 1.3)


# ---------------------------------------------------------------- coefficients


def test_coeff_a_vanishes_for_l0_zero():
    label = lab("0", 0.5, 1.3)
    for j in half_range(HalfInt(2), HalfInt(10)):
        assert coeff_a(j, label) == 0


def test_coeff_a_spinor_cancellation():
    # a_{1/2} = i [1/2][3/2] / ([1/2][3/2]) = i exactly
    assert coeff_a(HalfInt(1), lab("1/2", 1.5, 2.0)) == pytest.approx(1j, abs=1e-14)


def test_coeff_a_real_for_principal():
    label = lab("1", 2.7j, 1.3)
    a = coeff_a(HalfInt(2), label)
    assert abs(a.imag) < 1e-13 * max(1.0, abs(a))
    assert abs(a.real) > 0


def test_coeff_a_zero_at_origin_by_convention():
    assert coeff_a(HalfInt(0), lab("0", 2.7j, 1.3)) == 0


def test_coeff_a_singular_when_l0_positive_at_j_zero():
    with pytest.raises(SingularCoefficientError):
        coeff_a(HalfInt(0), lab("1", 2.7j, 1.3))


def test_coeff_c_zero_at_bottom():
    for l0, l1 in [("0", 0.5), ("1/2", 1.5), ("1", 2.7j), ("3/2", 2.5)]:
        label = lab(l0, l1, 1.3)
        assert coeff_c(label.l0, label) == 0


@pytest.mark.parametrize("l0,l1", [("0", 1.0), ("0", 2.0), ("1/2", 1.5), ("1", 3.0)])
def test_coeff_c_terminates_finite_ladder(l0, l1):
    label = lab(l0, l1, 1.3)
    top = HalfInt(int(round(2 * abs(l1))))
    assert abs(coeff_c(top, label)) <= 1e-14


def test_coeff_c_pure_imaginary_for_principal():
    label = lab("0", 2.7j, 1.3)
    for j in half_range(HalfInt(2), HalfInt(12)):
        c = coeff_c(j, label)
        assert abs(c.real) < 1e-13 * max(1.0, abs(c))
        assert abs(c.imag) > 0


def test_coeff_c_singular_at_half_for_integer_l0():
    with pytest.raises(SingularCoefficientError):
        coeff_c(HalfInt(1), lab("0", 0.5, 1.3))


def test_conjugate_partner():
    assert conjugate_partner(lab("1/2", 1.5, 1.3)).l1 == -1.5
    assert conjugate_partner(lab("1", 2.7j, 1.3)).l1 == 2.7j  # principal self-partnered
    assert conjugate_partner(lab("0", 0.5, 1.3)).l1 == -0.5


# ---------------------------------------------------------------- recurrences


@pytest.mark.parametrize("q", [0.5, 1.3, 2.0])
@pytest.mark.parametrize("l0,l1", [("0", 0.5), ("1/2", 1.5), ("1", 2.7j), ("3/2", 2.5)])
def test_recurrences_by_brute_force_substitution(q, l0, l1):
    label = lab(l0, l1, q)
    rows = check_recurrences(label, label.l0 + 20)
    for row in rows:
        assert row["residual_ladder"] < 1e-10, row
        assert row["residual_norm"] < 1e-10, row


def test_recurrences_near_classical_point():
    label = lab("1", 2.5j, 1 + 1e-6)
    for row in check_recurrences(label, label.l0 + 10):
        assert row["residual_ladder"] < 1e-8
        assert row["residual_norm"] < 1e-8


def test_recurrences_relative_bound_deep_ladder():
    # the norm equation stays at unit scale out to j = 30 across the q range
    for q in (0.5, 2.0):
        label = lab("0", 0.5, q)
        for row in check_recurrences(label, HalfInt.parse("30")):
            assert row["residual_norm"] < 1e-10


def test_recurrences_reject_bad_jmax():
    with pytest.raises(ValueError):
        check_recurrences(lab("2", 1.0, 1.3), HalfInt(2))


# ---------------------------------------------------------------- invariant scalar


def test_casimir_eigenvalue_zero_for_l0_zero():
    assert casimir_eigenvalue(lab("0", 0.5, 1.3)) == 0


def test_casimir_eigenvalue_spinor():
    d = Deformation(1.3)
    expected = 1j * q_number(HalfInt(1), d) * q_number(1.5, d)
    assert casimir_eigenvalue(lab("1/2", 1.5, 1.3)) == pytest.approx(expected)


def test_casimir_eigenvalue_classical_limit():
    val = casimir_eigenvalue(lab("1", 2.0, 1 + 1e-6))
    assert val == pytest.approx(2j, abs=1e-4)
