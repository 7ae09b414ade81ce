import json

import numpy as np
import pytest

from spintomo.basis import (BlochState, bloch_to_density, gell_mann_basis,
                            operator_to_bloch, spin_expectations,
                            spin_matrices, spin_operator_set,
                            spin_product_expectations)

S3 = np.sqrt(3.0)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_trace_orthogonality_includes_lambda0(d):
    full = gell_mann_basis(d).full_set()
    n = len(full)
    gram = np.einsum("iab,jba->ij", full, full)
    assert np.max(np.abs(gram - 2.0 * np.eye(n))) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_generators_hermitian_traceless(d):
    basis = gell_mann_basis(d)
    for g in basis.generators:
        assert np.max(np.abs(g - g.conj().T)) < 1e-15
        assert abs(np.trace(g)) < 1e-15


def test_d2_is_pauli():
    g = gell_mann_basis(2).generators
    assert np.array_equal(g[0], [[0, 1], [1, 0]])
    assert np.array_equal(g[1], [[0, -1j], [1j, 0]])
    assert np.array_equal(g[2], [[1, 0], [0, -1]])


def test_d3_ordering_matches_standard_gell_mann():
    g = gell_mann_basis(3).generators
    assert np.max(np.abs(g[7] - np.diag([1, 1, -2]) / S3)) < 1e-15
    assert g[3][0, 2] == 1  # symmetric 1-3
    assert g[4][0, 2] == -1j  # antisymmetric 1-3
    assert g[5][1, 2] == 1  # symmetric 2-3


def test_d4_block_ordering():
    basis = gell_mann_basis(4)
    assert len(basis.generators) == 15
    assert basis.labels[:6] == ("S12", "S13", "S14", "S23", "S24", "S34")
    assert basis.labels[6:12] == ("A12", "A13", "A14", "A23", "A24", "A34")
    assert basis.labels[12:] == ("D1", "D2", "D3")


def test_invalid_dimension_rejected():
    with pytest.raises(ValueError):
        gell_mann_basis(1)


def test_operator_to_bloch_identity():
    a = operator_to_bloch(np.eye(3), gell_mann_basis(3))
    assert abs(a[0] - np.sqrt(1.5)) < 1e-15
    assert np.max(np.abs(a[1:])) < 1e-15


def test_operator_to_bloch_picks_out_basis_element():
    basis = gell_mann_basis(3)
    a = operator_to_bloch(basis.generators[4], basis)
    expected = np.zeros(9)
    expected[5] = 1.0
    assert np.max(np.abs(a - expected)) < 1e-15


def test_operator_to_bloch_spin_z():
    _, _, sz = spin_matrices(3)
    a = operator_to_bloch(sz, gell_mann_basis(3))
    assert abs(a[3] - 0.5) < 1e-15
    assert abs(a[8] - S3 / 2.0) < 1e-15
    mask = np.ones(9, dtype=bool)
    mask[[3, 8]] = False
    assert np.max(np.abs(a[mask])) < 1e-15


def test_operator_to_bloch_rejects_non_hermitian():
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        operator_to_bloch(A, gell_mann_basis(2))


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_operator_bloch_round_trip(d):
    rng = np.random.default_rng(d)
    basis = gell_mann_basis(d)
    for _ in range(20):
        coeff = rng.normal(size=d * d)
        A = np.einsum("i,iab->ab", coeff, basis.full_set())
        back = operator_to_bloch(A, basis)
        assert np.max(np.abs(back - coeff)) < 1e-12


def test_bloch_to_density_maximally_mixed():
    state = BlochState(dims=[3], a=np.zeros(8))
    assert np.max(np.abs(state.density_matrix() - np.eye(3) / 3)) < 1e-15


def test_bloch_to_density_d2_diagonal():
    state = BlochState(dims=[2], a=np.array([0.0, 0.0, 0.5]))
    assert np.max(np.abs(state.density_matrix() - np.diag([1.0, 0.0]))) < 1e-15


def test_bipartite_decomposition_round_trip_singlet():
    e = np.eye(3)
    ket = (np.kron(e[0], e[2]) - np.kron(e[1], e[1]) + np.kron(e[2], e[0])) / S3
    rho = np.outer(ket, ket.conj())
    state = BlochState.from_density(rho, [3, 3])
    assert np.max(np.abs(state.a)) < 1e-14
    assert np.max(np.abs(state.b)) < 1e-14
    assert abs(np.sum(state.c**2) - 2.0 / 9.0) < 1e-13
    assert np.max(np.abs(bloch_to_density(state) - rho)) < 1e-13


@pytest.mark.parametrize("dims", [[2], [3], [2, 2], [3, 3], [2, 3], [3, 2]])
def test_random_states_hermitian_unit_trace(dims):
    rng = np.random.default_rng(42)
    for _ in range(10):
        state = _random_state(rng, dims, mix=0.4)
        rho = state.density_matrix()
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-12
        assert abs(np.trace(rho).real - 1.0) < 1e-12
        back = BlochState.from_density(rho, dims)
        assert np.max(np.abs(back.a - state.a)) < 1e-12
        if len(dims) == 2:
            assert np.max(np.abs(back.c - state.c)) < 1e-12


def _random_state(rng, dims, mix=0.5):
    d = int(np.prod(dims))
    ket = rng.normal(size=d) + 1j * rng.normal(size=d)
    ket /= np.linalg.norm(ket)
    rho = mix * np.outer(ket, ket.conj()) + (1 - mix) * np.eye(d) / d
    return BlochState.from_density(rho, dims)


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        BlochState(dims=[3], a=np.zeros(7))
    with pytest.raises(ValueError):
        BlochState(dims=[3, 3], a=np.zeros(8), b=np.zeros(8), c=np.zeros((8, 7)))


def test_validity_flags_inflated_correlations():
    from spintomo.states import singlet3
    s = singlet3()
    bad = BlochState(dims=[3, 3], a=s.a, b=s.b, c=1.5 * s.c)
    ok, eig, reasons = bad.validity()
    assert not ok
    assert eig.min() < -1e-6
    assert bad.purity() > 1.0
    assert any("negative eigenvalue" in r for r in reasons)
    ok_s, eig_s, _ = s.validity()
    assert ok_s and eig_s.min() > -1e-12


def test_json_round_trip_is_bit_exact():
    rng = np.random.default_rng(7)
    state = _random_state(rng, [3, 3])
    back = BlochState.from_json(state.to_json())
    assert np.array_equal(back.a, state.a)
    assert np.array_equal(back.b, state.b)
    assert np.array_equal(back.c, state.c)
    # also through a generic json reload
    again = BlochState.from_json(json.dumps(json.loads(state.to_json())))
    assert np.array_equal(again.c, state.c)


# ---------------------------------------------------------------------------
# spin operators


def test_spin_products_sum_rule():
    ops = spin_operator_set()
    total = ops.S_xx + ops.S_yy + ops.S_zz
    assert np.max(np.abs(total - 4.0 * np.eye(3))) < 1e-14
    for name, op in ops.as_dict().items():
        assert np.max(np.abs(op - op.conj().T)) < 1e-14, name


def test_spin_expectations_maximally_mixed():
    state = BlochState(dims=[3], a=np.zeros(8))
    exp = spin_expectations(state)
    assert abs(exp["S_zz"] - 4.0 / 3.0) < 1e-15
    assert abs(exp["S_z"]) < 1e-15


def test_spin_expectations_pure_plus_state():
    # rho = diag(1, 0, 0): a3 = 1/2, a8 = 1/(2 sqrt 3)
    state = BlochState.from_density(np.diag([1.0, 0, 0]), [3])
    assert abs(state.a[2] - 0.5) < 1e-15
    assert abs(state.a[7] - 1.0 / (2.0 * S3)) < 1e-15
    assert abs(spin_expectations(state)["S_z"] - 1.0) < 1e-14


def test_spin_expectation_xy_reads_a5():
    rng = np.random.default_rng(3)
    state = _random_state(rng, [3])
    assert abs(spin_expectations(state)["S_xy"] - 2.0 * state.a[4]) < 1e-14


def test_spin_expectations_match_direct_traces():
    rng = np.random.default_rng(11)
    ops = spin_operator_set().as_dict()
    for _ in range(100):
        state = _random_state(rng, [3], mix=rng.random())
        rho = state.density_matrix()
        exp = spin_expectations(state)
        for name, op in ops.items():
            direct = float(np.real(np.trace(rho @ op)))
            assert abs(exp[name] - direct) < 1e-12, name


def test_spin_product_expectations_match_direct():
    rng = np.random.default_rng(13)
    state = _random_state(rng, [3, 3])
    rho = state.density_matrix()
    names, table = spin_product_expectations(state)
    ops = spin_operator_set().as_dict()
    for i, ni in enumerate(names):
        for j, nj in enumerate(names):
            direct = float(np.real(np.trace(rho @ np.kron(ops[ni], ops[nj]))))
            assert abs(table[i, j] - direct) < 1e-11, (ni, nj)


def test_spin_expectations_wrong_dimension():
    with pytest.raises(ValueError):
        spin_expectations(BlochState(dims=[2], a=np.zeros(3)))
