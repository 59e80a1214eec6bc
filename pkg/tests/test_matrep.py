import math

import numpy as np
import pytest

from qlorentz.qarith import Deformation, HalfInt, half_range, q_number
from qlorentz.repcore import RepLabel, coeff_c
from qlorentz.matrep import (
    ConstructionInconsistencyError,
    ConventionId,
    GENERATOR_PATTERNS,
    build_basis,
    build_from_suq2,
    build_generator_set,
    build_M,
    build_N,
    build_N3_tilde,
    build_ST_vectors,
    diag_from_m,
    export_matrix,
    import_matrix,
    export_generator_set,
    import_generator_set,
    pattern_violation,
    suq2_matrices,
    tensor_embed,
)


def lab(l0: str, l1, q: float) -> RepLabel:
    return RepLabel(HalfInt.parse(l0), l1, Deformation(q))


# ---------------------------------------------------------------- basis


def test_basis_ordering_and_round_trip():
    basis = build_basis(lab("1/2", 2.7j, 1.3), HalfInt.parse("7/2"))
    assert [str(j) for j in basis.spins] == ["1/2", "3/2", "5/2", "7/2"]
    assert basis.dim == 2 + 4 + 6 + 8
    assert basis.truncated
    for i in range(basis.dim):
        j, m = basis.state(i)
        assert basis.index(j, m) == i
    # m runs -j..j inside each block
    j0 = basis.spins[0]
    assert basis.state(basis.offsets[j0]) == (j0, -j0)


def test_basis_dims_on_reference_labels():
    assert build_basis(lab("1/2", 1.5, 1.3), HalfInt(9)).dim == 2
    assert build_basis(lab("0", 2.0, 1.3), HalfInt(0)).dim == 4
    b = build_basis(lab("0", 2.7j, 1.3), HalfInt.parse("5"))
    assert b.dim == 36 and b.truncated


def test_basis_finite_ignores_jmax():
    b = build_basis(lab("0", 2.0, 1.3), HalfInt.parse("9"))
    assert [str(j) for j in b.spins] == ["0", "1"] and not b.truncated


def test_basis_rejects_jmax_below_l0():
    with pytest.raises(ValueError):
        build_basis(lab("2", 2.7j, 1.3), HalfInt(1))


def test_interior_columns():
    b = build_basis(lab("0", 2.7j, 1.3), HalfInt.parse("3"))
    lin = b.interior_columns(1)
    quad = b.interior_columns(2)
    for i, (j, _m) in enumerate(b.states()):
        assert lin[i] == (j.twice <= 4)
        assert quad[i] == (j.twice <= 2)
    full = build_basis(lab("0", 2.0, 1.3), HalfInt(0))
    assert full.interior_columns(2).all()


# ---------------------------------------------------------------- rotations


def test_rotation_entry_value():
    # <1/2,1/2| raise |1/2,-1/2> = [1]^(1/2)[1]^(1/2) q^(-1/4) q^(1/4) = 1
    basis = build_basis(lab("1/2", 1.5, 1.3), HalfInt(1))
    mp, _, _ = build_M(basis, Deformation(1.3))
    r = basis.index(HalfInt(1), HalfInt(1))
    c = basis.index(HalfInt(1), HalfInt(-1))
    assert mp.data[r, c] == pytest.approx(1.0, abs=1e-15)


def test_rotation_kills_highest_weight():
    basis = build_basis(lab("0", 2.7j, 1.3), HalfInt(6))
    mp, mm, _ = build_M(basis, Deformation(1.3))
    for j in basis.spins:
        top = basis.index(j, j)
        bot = basis.index(j, -j)
        assert not mp.data[:, top].any()
        assert not mm.data[:, bot].any()


def test_rotation_classical_limit_entries():
    basis = build_basis(lab("0", 2.7j, 1 + 1e-8), HalfInt(4))
    mp, _, _ = build_M(basis, Deformation(1 + 1e-8))
    for j in basis.spins:
        for m in half_range(-j, j - 1):
            got = mp.data[basis.index(j, m + 1), basis.index(j, m)]
            fj, fm = float(j), float(m)
            assert got == pytest.approx(math.sqrt((fj - fm) * (fj + fm + 1)), abs=1e-6)


def test_m3_diagonal_weights():
    basis = build_basis(lab("1/2", 2.7j, 1.3), HalfInt.parse("5/2"))
    _, _, m3 = build_M(basis, Deformation(1.3))
    for i, (_j, m) in enumerate(basis.states()):
        assert m3.data[i, i] == float(m)


@pytest.mark.parametrize("q", [0.5, 0.9, 1.3, 2.0])
def test_suq2_relations_on_rotations_random_labels(q):
    rng = np.random.default_rng(11)
    d = Deformation(q)
    for _ in range(3):
        l0 = HalfInt(int(rng.integers(0, 4)))
        label = RepLabel(l0, complex(rng.uniform(-2, 2), rng.uniform(0, 2)), d)
        basis = build_basis(label, l0 + 4)
        mp, mm, m3 = build_M(basis, d)
        two_m3 = diag_from_m(basis, lambda m: q_number(m + m, d))
        scale = max(1.0, mp.max_norm * mm.max_norm)
        assert np.max(np.abs(mp.data @ mm.data - mm.data @ mp.data - two_m3)) < 1e-13 * scale
        assert np.max(np.abs(m3.data @ mp.data - mp.data @ m3.data - mp.data)) < 1e-13 * scale


# ---------------------------------------------------------------- boosts


def test_selection_rules_exact():
    g = build_generator_set(lab("1/2", 2.7j, 1.3), HalfInt.parse("7/2"))
    for name, op in g.matrices().items():
        assert pattern_violation(op, g.basis) == 0.0, name


def test_boosts_on_spinor_are_rotations_times_minus_i():
    g = build_generator_set(lab("1/2", 1.5, 2.0), HalfInt(1))
    np.testing.assert_allclose(g.n_plus.data, -1j * g.m_plus.data, atol=1e-15)
    np.testing.assert_allclose(g.n_minus.data, -1j * g.m_minus.data, atol=1e-15)


def test_n3_column_at_origin():
    # on the l0 = 0 ladder the diagonal boost moves |0,0> only up, with
    # coefficient -c_1 (both bracket factors are [1] = 1, and q^0 = 1)
    label = lab("0", 0.5, 1.3)
    g = build_generator_set(label, HalfInt.parse("3"))
    col = g.basis.index(HalfInt(0), HalfInt(0))
    expected = np.zeros(g.basis.dim, dtype=complex)
    expected[g.basis.index(HalfInt(2), HalfInt(0))] = -coeff_c(HalfInt(2), label)
    np.testing.assert_allclose(g.n3.data[:, col], expected, atol=1e-15)


def test_n3_tilde_matches_direct_formula():
    # relation-derived construction equals the diagonal-dressed form q^(M3) N3
    for l0, l1, q in [("0", 0.5, 1.3), ("1", 2.7j, 0.7), ("1/2", 1.5, 2.0)]:
        g = build_generator_set(lab(l0, l1, q), HalfInt.parse(l0) + 5)
        qm3 = diag_from_m(g.basis, lambda m: math.pow(q, float(m)))
        np.testing.assert_allclose(g.n3_tilde.data, qm3 @ g.n3.data, atol=1e-12)


def test_n3_tilde_rejects_inconsistent_convention():
    label = lab("0", 0.5, 1.3)
    basis = build_basis(label, HalfInt.parse("4"))
    mp, _, _ = build_M(basis, label.d)
    bad = ConventionId(n_down_dm=1)
    _, nm, _ = build_N(basis, label, bad)
    with pytest.raises(ConstructionInconsistencyError):
        build_N3_tilde(mp, nm, basis, 0j, label.d)


def test_casimir_scalar_on_spinor():
    d = Deformation(1.3)
    g = build_generator_set(lab("1/2", 1.5, 1.3), HalfInt(1))
    expected = 1j * q_number(HalfInt(1), d) * q_number(1.5, d)
    np.testing.assert_allclose(g.casimir.data, expected * np.eye(2), atol=1e-13)


def test_casimir_zero_for_zero_boosts():
    from qlorentz.matrep import OperatorMatrix, build_casimir_matrix

    g = build_generator_set(lab("1/2", 1.5, 1.3), HalfInt(1))
    zero = OperatorMatrix(np.zeros((2, 2)), GENERATOR_PATTERNS["n3"])
    cas = build_casimir_matrix(g.m_plus, g.m_minus, zero, zero, zero, zero, g.d)
    assert cas.max_norm == 0.0


def test_finite_top_coupling_is_exactly_zero():
    # the ladder closes with no truncation error: the coupling out of the
    # top block vanishes identically
    for l0, l1 in [("0", 1.0), ("0", 2.0), ("1/2", 1.5), ("1", 3.0)]:
        label = lab(l0, l1, 1.3)
        top = HalfInt(int(round(2 * abs(l1))))
        assert coeff_c(top, label) == 0


# ---------------------------------------------------------------- realization


@pytest.mark.parametrize("two_j", [1, 2, 3, 5])
@pytest.mark.parametrize("q", [0.7, 1.3])
def test_realization_rotation_and_boost_commutators(two_j, q):
    g = build_from_suq2(two_j, Deformation(q))
    d = g.d
    two_m3 = diag_from_m(g.basis, lambda m: q_number(m + m, d))
    scale = max(1.0, g.m_plus.max_norm * g.m_minus.max_norm)
    comm_m = g.m_plus.data @ g.m_minus.data - g.m_minus.data @ g.m_plus.data
    comm_n = g.n_plus.data @ g.n_minus.data - g.n_minus.data @ g.n_plus.data
    assert np.max(np.abs(comm_m - two_m3)) < 1e-14 * scale
    assert np.max(np.abs(comm_n + two_m3)) < 1e-14 * scale


def test_realization_diagonal_boosts():
    d = Deformation(1.3)
    g = build_from_suq2(3, d)
    n3_expect = diag_from_m(g.basis, lambda m: -1j * q_number(m, d) * d.q ** (-float(m) / 2))
    np.testing.assert_allclose(g.n3.data, n3_expect, atol=1e-15)
    assert g.label.l0 == HalfInt(3) and g.label.l1 == pytest.approx(2.5)


def test_realization_matches_label_build_at_spin_half():
    # the spin-1/2 realization and the 2-dimensional label build coincide
    d = Deformation(1.3)
    g1 = build_from_suq2(1, d)
    g2 = build_generator_set(lab("1/2", 1.5, 1.3), HalfInt(1))
    for name in g1.matrices():
        np.testing.assert_allclose(
            g1.matrices()[name].data, g2.matrices()[name].data, atol=1e-13, err_msg=name
        )


def test_realization_rejects_spin_zero():
    with pytest.raises(ValueError):
        build_from_suq2(0, Deformation(1.3))


# ---------------------------------------------------------------- vector operators


def test_vector_operators_raise_kills_top():
    s, t = build_ST_vectors(2, Deformation(1.3))
    basis = suq2_matrices(2, Deformation(1.3)).basis
    top = basis.index(HalfInt(2), HalfInt(2))
    assert not s.component(1).data[:, top].any()
    assert not t.component(1).data[:, top].any()


def test_vector_operator_zero_component_classical_limit():
    # the weight-0 component reduces to a multiple of the diagonal weight
    # matrix as q -> 1
    d = Deformation(1 + 1e-7)
    s, _ = build_ST_vectors(1, d)
    z = s.component(0).data
    off = z - np.diag(np.diag(z))
    assert np.max(np.abs(off)) < 1e-6
    diag = np.real(np.diag(z))
    # classical value: -sqrt(2) * m on the spin-1/2 block
    np.testing.assert_allclose(diag, [math.sqrt(2) / 2, -math.sqrt(2) / 2], atol=1e-5)


def test_vector_operator_components_shift_weight():
    s, t = build_ST_vectors(3, Deformation(0.7))
    basis = suq2_matrices(3, Deformation(0.7)).basis
    for tensor in (s, t):
        for mu in (-1, 0, 1):
            assert pattern_violation(tensor.component(mu), basis) == 0.0


# ---------------------------------------------------------------- tensor embed


def test_tensor_embed_identity_and_dims():
    from qlorentz.matrep import OperatorMatrix

    i2 = OperatorMatrix(np.eye(2))
    i3 = OperatorMatrix(np.eye(3))
    assert np.array_equal(tensor_embed(i2, i3).data, np.eye(6))
    a = OperatorMatrix(np.arange(4).reshape(2, 2).astype(complex))
    b = OperatorMatrix((np.arange(9) + 1j).reshape(3, 3))
    ab = tensor_embed(a, b)
    assert ab.dim == 6


def test_tensor_embed_mixed_product_property():
    rng = np.random.default_rng(3)
    from qlorentz.matrep import OperatorMatrix

    a = OperatorMatrix(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    b = OperatorMatrix(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    i2, i3 = OperatorMatrix(np.eye(2)), OperatorMatrix(np.eye(3))
    left = tensor_embed(a, i3).data @ tensor_embed(i2, b).data
    np.testing.assert_allclose(left, tensor_embed(a, b).data, atol=1e-13)


# ---------------------------------------------------------------- export/import


def test_matrix_file_round_trip(tmp_path):
    label = lab("1/2", 1.5, 1.3)
    g = build_generator_set(label, HalfInt(1))
    path = tmp_path / "m_plus.txt"
    export_matrix(g.m_plus, label, g.convention, path)
    arr, lab2, conv = import_matrix(path)
    assert np.array_equal(arr, g.m_plus.data)
    assert lab2.l0 == label.l0 and lab2.l1 == label.l1 and lab2.d.q == label.d.q
    assert conv == g.convention


def test_generator_set_round_trip_bit_exact(tmp_path):
    for l0, l1, jm in [("1/2", 1.5, "1/2"), ("0", 2.7j, "4")]:
        g = build_generator_set(lab(l0, l1, 1.3), HalfInt.parse(jm))
        d = tmp_path / f"exp_{l0.replace('/', '_')}"
        export_generator_set(g, d)
        g2 = import_generator_set(d)
        for name in g.matrices():
            assert np.array_equal(g.matrices()[name].data, g2.matrices()[name].data), name
        assert g2.basis.dim == g.basis.dim


def test_export_header_format(tmp_path):
    label = lab("1/2", 1.5, 1.3)
    g = build_generator_set(label, HalfInt(1))
    path = tmp_path / "m.txt"
    export_matrix(g.m_plus, label, g.convention, path)
    header = path.read_text().splitlines()[0]
    assert header.startswith("# dim=2 label=")
    assert "convention=" in header
