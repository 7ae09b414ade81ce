import numpy as np
import pytest

from spintomo.basis import BlochState, gell_mann_basis
from spintomo.models import (model_projector, model_spin_half, model_W_massive,
                             model_W_massless, model_Z_dilepton, model_Z_sm)
from spintomo.symbols import (build_symbols, golden_tables, massive_w_p_mixing,
                              p_symbols, projector, q_symbols,
                              rotation_matrices, rotation_operator,
                              sphere_quadrature, z_dilepton_p_mixing)

S3 = np.sqrt(3.0)


def _grid(n=50):
    thetas = np.linspace(0.0, np.pi, n)
    phis = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    ct = np.cos(np.repeat(thetas, n))
    ph = np.tile(phis, n)
    return ct, ph


def _quad_integral(symbols, values_a, values_b=None):
    """(d / 4 pi) integral of products over the sphere by exact quadrature."""
    d = symbols.dim
    x, w, phis, wphi = sphere_quadrature(d, oversample=2)
    ct = np.repeat(x, len(phis))
    ph = np.tile(phis, len(x))
    weights = np.repeat(w, len(phis)) * wphi
    va = values_a(ct, ph)
    if values_b is None:
        return np.einsum("n,ni->i", weights, va)
    vb = values_b(ct, ph)
    return (d / (4.0 * np.pi)) * np.einsum("n,ni,nj->ij", weights, va, vb)


# ---------------------------------------------------------------------------
# rotations and projectors


def test_rotation_is_unitary():
    rng = np.random.default_rng(1)
    for d in (2, 3, 4, 5):
        U = rotation_matrices(d, rng.uniform(0, np.pi, 10), rng.uniform(0, 7, 10))
        prod = np.einsum("nab,ncb->nac", U, U.conj())
        assert np.max(np.abs(prod - np.eye(d))) < 1e-12


def test_rotation_identity_at_origin():
    for d in (2, 3, 4):
        assert np.max(np.abs(rotation_operator(d)(0.0, 0.0) - np.eye(d))) < 1e-14


def test_rotated_projector_matches_closed_form():
    theta, phi = 0.9, 2.3
    st, ct = np.sin(theta), np.cos(theta)
    ep = np.exp(1j * phi)
    expected = np.array([
        [np.cos(theta / 2) ** 4,
         st * (1 + ct) / (2 * np.sqrt(2)) / ep,
         st**2 / 4 / ep**2],
        [st * (1 + ct) / (2 * np.sqrt(2)) * ep,
         st**2 / 2,
         st * (1 - ct) / (2 * np.sqrt(2)) / ep],
        [st**2 / 4 * ep**2,
         st * (1 - ct) / (2 * np.sqrt(2)) * ep,
         np.sin(theta / 2) ** 4],
    ])
    assert np.max(np.abs(projector(3, "+", theta, phi) - expected)) < 1e-12


def test_projector_poles():
    assert np.max(np.abs(projector(3, "+", 0.0, 0.0) - np.diag([1, 0, 0]))) < 1e-14
    assert np.max(np.abs(projector(3, "-", 0.0, 0.0) - np.diag([0, 0, 1]))) < 1e-14
    pi_eq = projector(3, "+", np.pi / 2, 0.0)
    assert abs(pi_eq[0, 0] - 0.25) < 1e-14


def test_projector_idempotent_rank_one():
    rng = np.random.default_rng(5)
    for d in (2, 3, 4):
        th, ph = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
        P = projector(d, "+", th, ph)
        assert np.max(np.abs(P @ P - P)) < 1e-12
        assert abs(np.trace(P).real - 1.0) < 1e-12


# ---------------------------------------------------------------------------
# numerical Q/P pipeline


def test_w_plus_q3_closed_form():
    symbols = q_symbols(model_W_massless("+"))
    thetas = np.linspace(0, np.pi, 9)
    vals = symbols.q_values(np.cos(thetas), np.zeros(9))
    expected = (4 * np.cos(thetas) + 3 * np.cos(2 * thetas) + 1) / 8
    assert np.max(np.abs(vals[:, 2] - expected)) < 1e-12


def test_spin_half_q3_is_kappa_cos():
    symbols = q_symbols(model_spin_half(0.41))
    thetas = np.linspace(0, np.pi, 9)
    vals = symbols.q_values(np.cos(thetas), np.ones(9))
    assert np.max(np.abs(vals[:, 2] - 0.41 * np.cos(thetas))) < 1e-13


def test_d4_diagonal_q_closed_form():
    symbols = q_symbols(model_projector(4, 0))
    thetas = np.linspace(0, np.pi, 9)
    vals = symbols.q_values(np.cos(thetas), np.zeros(9))
    expected = np.cos(thetas / 2) ** 4 * (2 * np.cos(thetas) - 1)
    assert np.max(np.abs(vals[:, 12] - expected)) < 1e-12


def test_w_plus_p4():
    symbols = build_symbols(model_W_massless("+"))
    ct, ph = _grid(11)
    vals = symbols.p_values(ct, ph)
    expected = 5.0 * (1 - ct**2) * np.cos(2 * ph)
    assert np.max(np.abs(vals[:, 3] - expected)) < 1e-12


def test_spin_half_p_is_three_over_kappa():
    symbols = build_symbols(model_spin_half(1.0))
    thetas = np.linspace(0, np.pi, 9)
    vals = symbols.p_values(np.cos(thetas), np.zeros(9))
    assert np.max(np.abs(vals[:, 2] - 3.0 * np.cos(thetas))) < 1e-12


def test_spin_independent_decay_not_invertible():
    symbols = p_symbols(q_symbols(model_spin_half(0.0)))
    assert not symbols.invertible
    assert np.max(np.abs(symbols.gram)) < 1e-14
    assert "kappa" in symbols.gram_note
    with pytest.raises(ValueError):
        symbols.p_values(np.zeros(1), np.zeros(1))


def test_photon_like_couplings_not_invertible():
    symbols = p_symbols(q_symbols(model_Z_dilepton(0.5, 0.5)))
    assert not symbols.invertible
    assert "photon-like" in symbols.gram_note


def test_gram_symmetric_psd_and_scaling_with_kappa():
    for kappa in (1.0, 0.5, 0.25):
        symbols = q_symbols(model_spin_half(kappa))
        M = symbols.gram
        assert np.max(np.abs(M - M.T)) < 1e-14
        assert np.min(np.linalg.eigvalsh(M)) > -1e-14
        assert np.max(np.abs(M - (kappa**2 / 3.0) * np.eye(3))) < 1e-13


def test_gram_check_node_doubling_is_tiny():
    for model in (model_W_massless("+"), model_Z_sm(), model_projector(4, 0)):
        assert q_symbols(model).gram_check < 1e-12


def test_q_funcs_scalar_interface():
    symbols = build_symbols(model_W_massless("+"))
    f3 = symbols.q_funcs[2]
    assert abs(f3(0.0, 0.0) - 1.0) < 1e-12
    p3 = symbols.p_funcs[2]
    assert abs(p3(0.0, 0.0) - 6.0) < 1e-12


def test_coefficient_table_round_trip():
    symbols = build_symbols(model_W_massless("+"))
    table = symbols.coefficient_table("q")
    # rebuild q_3 from the serialised terms
    thetas = np.linspace(0, np.pi, 7)
    phis = np.linspace(0, 2 * np.pi, 7)
    rebuilt = np.zeros(7)
    for term in table["q_3"]:
        st = np.sin(thetas) ** term["sin_power"]
        cb = np.cos(thetas) ** term["cos_power"]
        trig = np.cos if term["trig"] == "cos" else np.sin
        rebuilt += term["coeff"] * st * cb * trig(term["harmonic"] * phis)
    direct = symbols.q_values(np.cos(thetas), phis)[:, 2]
    assert np.max(np.abs(rebuilt - direct)) < 1e-10


# ---------------------------------------------------------------------------
# golden tables vs the numerical pipeline


GOLDEN_PAIRS = [
    ("d2_kappa", {"kappa": 1.0}, lambda: model_spin_half(1.0)),
    ("d2_kappa", {"kappa": 0.41}, lambda: model_spin_half(0.41)),
    ("d3_Wplus", {}, lambda: model_W_massless("+")),
    ("d3_Wminus", {}, lambda: model_W_massless("-")),
    ("d3_Z", {"c_left": -0.2731, "c_right": 0.2333}, model_Z_sm),
    ("d3_Wmassive", {"v": 0.25}, lambda: model_W_massive(0.25)),
    ("d3_Wmassive", {"v": 0.5}, lambda: model_W_massive(0.5)),
    ("d3_Wmassive", {"v": 0.75}, lambda: model_W_massive(0.75)),
    ("d3_Wmassive", {"v": 0.75, "scalar_component": True},
     lambda: model_W_massive(0.75, scalar_component=True)),
    ("d3_Wmassive", {"v": 0.99}, lambda: model_W_massive(0.99)),
    ("d4_projective", {}, lambda: model_projector(4, 0)),
]


@pytest.mark.parametrize("case,params,make_model", GOLDEN_PAIRS,
                         ids=[f"{c}-{p}" for c, p, _ in GOLDEN_PAIRS])
def test_golden_tables_match_pipeline(case, params, make_model):
    golden = golden_tables(case, **params)
    symbols = build_symbols(make_model())
    ct, ph = _grid(50)
    assert np.max(np.abs(symbols.q_values(ct, ph) - golden.q_values(ct, ph))) < 1e-9
    assert np.max(np.abs(symbols.p_values(ct, ph) - golden.p_values(ct, ph))) < 1e-9


def test_golden_w_plus_p3_at_pole():
    golden = golden_tables("d3_Wplus")
    assert abs(golden.p_values([1.0], [0.0])[0, 2] - 6.0) < 1e-14


def test_mixing_matrix_identity_at_v_one():
    assert np.array_equal(massive_w_p_mixing(1.0), np.eye(8))


def test_z_mixing_identity_for_right_handed():
    A = z_dilepton_p_mixing(0.0, 1.0)
    assert np.max(np.abs(A - np.eye(8))) < 1e-14


def test_z_mixing_rejects_photon_like():
    with pytest.raises(ValueError):
        z_dilepton_p_mixing(1.0, 1.0)


def test_golden_unknown_case():
    with pytest.raises(ValueError):
        golden_tables("d5_unknown")


# ---------------------------------------------------------------------------
# orthogonality and pdf properties


ALL_INVERTIBLE = [
    model_spin_half(1.0), model_spin_half(0.41),
    model_W_massless("+"), model_W_massless("-"), model_Z_sm(),
    model_W_massive(0.25), model_W_massive(0.5), model_W_massive(0.75),
    model_projector(4, 0),
]


@pytest.mark.parametrize("model", ALL_INVERTIBLE, ids=lambda m: m.name)
def test_biorthogonality_and_zero_mean(model):
    symbols = build_symbols(model)
    n = symbols.n_symbols
    inner = _quad_integral(symbols, symbols.p_values, symbols.q_values)
    assert np.max(np.abs(inner - 2.0 * np.eye(n))) < 1e-9
    mean = _quad_integral(symbols, symbols.p_values)
    assert np.max(np.abs(mean)) < 1e-9


@pytest.mark.parametrize("model", ALL_INVERTIBLE, ids=lambda m: m.name)
def test_pdf_normalisation_random_states(model):
    from spintomo.sampling import pdf_single
    rng = np.random.default_rng(17)
    d = model.dim
    symbols = build_symbols(model)
    x, w, phis, wphi = sphere_quadrature(d)
    ct = np.repeat(x, len(phis))
    ph = np.tile(phis, len(x))
    weights = np.repeat(w, len(phis)) * wphi
    for _ in range(5):
        ket = rng.normal(size=d) + 1j * rng.normal(size=d)
        ket /= np.linalg.norm(ket)
        mix = rng.random()
        rho = mix * np.outer(ket, ket.conj()) + (1 - mix) * np.eye(d) / d
        state = BlochState.from_density(rho, [d])
        p = pdf_single(state, symbols, ct, ph)
        assert abs(np.sum(weights * p) - 1.0) < 1e-10
        assert p.min() > -1e-12


def test_projective_wigner_function_nonnegative():
    from spintomo.sampling import pdf_single
    rng = np.random.default_rng(23)
    symbols = build_symbols(model_W_massless("+"))
    ct, ph = _grid(40)
    for _ in range(100):
        ket = rng.normal(size=3) + 1j * rng.normal(size=3)
        ket /= np.linalg.norm(ket)
        mix = rng.random()
        rho = mix * np.outer(ket, ket.conj()) + (1 - mix) * np.eye(3) / 3
        state = BlochState.from_density(rho, [3])
        assert pdf_single(state, symbols, ct, ph).min() >= -1e-12


def test_w_minus_is_w_plus_under_substitution():
    plus = build_symbols(model_W_massless("+"))
    minus = build_symbols(model_W_massless("-"))
    ct, ph = _grid(20)
    assert np.max(np.abs(minus.q_values(ct, ph)
                         - plus.q_values(-ct, ph + np.pi))) < 1e-12
    assert np.max(np.abs(minus.p_values(ct, ph)
                         - plus.p_values(-ct, ph + np.pi))) < 1e-12
