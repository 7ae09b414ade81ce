import numpy as np
import pytest

from spintomo.basis import BlochState, gell_mann_basis
from spintomo.observables import (cglmp_expectation, cglmp_max, chsh_max,
                                  concurrence_bound, concurrence_bound_trace,
                                  diagnostics, wootters_concurrence)
from spintomo.states import (bell2_qutrit, bell_phi_plus_qubit, maxmixed9,
                             reference_state, separable_pp, singlet3, werner,
                             werner_qubit)

CGLMP_SINGLET = 4.0 / (6.0 * np.sqrt(3.0) - 9.0)  # 2.8729...


def _random_state(rng, dims, mix=None):
    d = int(np.prod(dims))
    ket = rng.normal(size=d) + 1j * rng.normal(size=d)
    ket /= np.linalg.norm(ket)
    mix = rng.random() if mix is None else mix
    rho = mix * np.outer(ket, ket.conj()) + (1 - mix) * np.eye(d) / d
    return BlochState.from_density(rho, dims)


def _random_pure(rng, dims):
    return _random_state(rng, dims, mix=1.0)


# ---------------------------------------------------------------------------
# concurrence bound


def test_concurrence_bound_reference_values():
    assert abs(concurrence_bound(singlet3()) - 4.0 / 3.0) < 1e-12
    assert abs(concurrence_bound(bell2_qutrit()) - 1.0) < 1e-12
    assert abs(concurrence_bound(separable_pp()) - 0.0) < 1e-12
    assert abs(concurrence_bound(maxmixed9()) + 4.0 / 9.0) < 1e-12


def test_concurrence_bound_closed_form_matches_trace_form():
    rng = np.random.default_rng(1)
    for _ in range(20):
        state = _random_state(rng, [3, 3])
        assert abs(concurrence_bound(state)
                   - concurrence_bound_trace(state)) < 1e-11


def test_purity_closed_form_matches_direct():
    rng = np.random.default_rng(2)
    for dims in ([2, 2], [3, 3]):
        for _ in range(100):
            state = _random_state(rng, dims)
            rho = state.density_matrix()
            assert abs(state.purity() - np.real(np.trace(rho @ rho))) < 1e-10


def test_pure_state_bound_equals_reduced_purity_deficit():
    rng = np.random.default_rng(3)
    for _ in range(50):
        state = _random_pure(rng, [3, 3])
        pa, _ = state.reduced_purities()
        assert abs(concurrence_bound(state) - 2.0 * (1.0 - pa)) < 1e-10


def test_concurrence_bound_wrong_dims():
    with pytest.raises(ValueError):
        concurrence_bound(bell_phi_plus_qubit())


# ---------------------------------------------------------------------------
# Wootters concurrence


def test_wootters_bell_state():
    assert abs(wootters_concurrence(bell_phi_plus_qubit()) - 1.0) < 1e-12


def test_wootters_product_state_zero():
    rng = np.random.default_rng(4)
    for _ in range(10):
        a = _random_pure(rng, [2])
        b = _random_pure(rng, [2])
        state = BlochState(dims=[2, 2], a=a.a, b=b.a, c=np.outer(a.a, b.a))
        assert wootters_concurrence(state) < 1e-10


def test_wootters_werner_closed_form():
    # p * bell + (1 - p) I/4 has concurrence max(0, (3p - 1)/2)
    for p in (0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0):
        expected = max(0.0, (3.0 * p - 1.0) / 2.0)
        assert abs(wootters_concurrence(werner_qubit(p)) - expected) < 1e-10


def test_wootters_range():
    rng = np.random.default_rng(5)
    for _ in range(50):
        c = wootters_concurrence(_random_state(rng, [2, 2]))
        assert -1e-12 <= c <= 1.0 + 1e-12


# ---------------------------------------------------------------------------
# CHSH


def _chsh_settings_scan(state, n=20):
    """Brute-force scan over the four measurement directions."""
    T = 4.0 * state.c
    best = 0.0
    thetas = np.linspace(0, np.pi, n)
    phis = np.linspace(0, 2 * np.pi, 2 * n, endpoint=False)
    dirs = []
    for th in thetas:
        for ph in phis:
            dirs.append([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph),
                         np.cos(th)])
    dirs = np.array(dirs)
    tb = dirs @ T.T  # correlation of each b-direction against T rows? (n,3)
    # E(a, b) = a . T b; scan a, a' over dirs and use the optimal b, b'
    for ia in range(len(dirs)):
        for ja in range(ia, len(dirs)):
            u = dirs[ia] @ T
            v = dirs[ja] @ T
            # optimal b maximises |u + v|, b' maximises |u - v|
            best = max(best, np.linalg.norm(u + v) + np.linalg.norm(u - v))
    return best


def test_chsh_bell_state():
    assert abs(chsh_max(bell_phi_plus_qubit()) - 2.0 * np.sqrt(2.0)) < 1e-12


def test_chsh_product_state_classical():
    rng = np.random.default_rng(6)
    for _ in range(10):
        a = _random_pure(rng, [2])
        b = _random_pure(rng, [2])
        state = BlochState(dims=[2, 2], a=a.a, b=b.a, c=np.outer(a.a, b.a))
        assert chsh_max(state) <= 2.0 + 1e-9


def test_chsh_werner_scaling():
    for p in (0.1, 0.5, 0.9):
        assert abs(chsh_max(werner_qubit(p)) - 2.0 * np.sqrt(2.0) * p) < 1e-12


def test_chsh_tsirelson_bound():
    rng = np.random.default_rng(7)
    for _ in range(50):
        state = _random_state(rng, [2, 2])
        assert chsh_max(state) <= 2.0 * np.sqrt(2.0) + 1e-9


def test_chsh_matches_settings_scan():
    rng = np.random.default_rng(8)
    for _ in range(5):
        state = _random_state(rng, [2, 2])
        scan = _chsh_settings_scan(state, n=24)
        exact = chsh_max(state)
        assert scan <= exact + 1e-9
        assert exact - scan < 0.02  # scan converges from below


# ---------------------------------------------------------------------------
# CGLMP


def test_cglmp_maxmixed_zero_all_planes():
    state = maxmixed9()
    for plane in ("xy", "xz", "yz"):
        assert abs(cglmp_expectation(state, plane)) < 1e-12
    value, _, _ = cglmp_max(state)
    assert abs(value) < 1e-12


def test_cglmp_singlet_xy_value():
    assert abs(cglmp_expectation(singlet3(), "xy") - CGLMP_SINGLET) < 1e-12


def test_cglmp_singlet_max():
    value, theta, phi = cglmp_max(singlet3())
    assert abs(value - CGLMP_SINGLET) < 1e-6


def test_cglmp_separable_below_classical_bound():
    state = separable_pp()
    value, _, _ = cglmp_max(state)
    assert value <= 2.0 + 1e-9
    rng = np.random.default_rng(9)
    for _ in range(5):
        a = _random_pure(rng, [3])
        b = _random_pure(rng, [3])
        prod = BlochState(dims=[3, 3], a=a.a, b=b.a, c=np.outer(a.a, b.a))
        value, _, _ = cglmp_max(prod)
        assert value <= 2.0 + 1e-6


def test_cglmp_similarity_consistency():
    """Rotating both the state and the operator leaves <B> unchanged."""
    from spintomo.symbols import rotation_matrices
    rng = np.random.default_rng(10)
    state = _random_state(rng, [3, 3])
    rho = state.density_matrix()
    theta, phi = 0.8, 1.9
    U = rotation_matrices(3, [theta], [phi])[0]
    UU = np.kron(U, U)
    rotated = BlochState.from_density(UU @ rho @ UU.conj().T, [3, 3])
    # <B_rotated>_rho equals <B_xy>_{U rho U^dag}
    lhs = cglmp_expectation(state, (theta, phi))
    rhs = cglmp_expectation(rotated, "xy")
    assert abs(lhs - rhs) < 1e-10


def test_cglmp_werner_linearity():
    base, t0, p0 = cglmp_max(singlet3())
    for alpha in (0.25, 0.5, 0.75):
        value, _, _ = cglmp_max(werner(alpha))
        assert abs(value - alpha * base) < 1e-6


def test_cglmp_max_deterministic():
    a = cglmp_max(werner(0.8))
    b = cglmp_max(werner(0.8))
    assert a == b


def test_cglmp_wrong_dims():
    with pytest.raises(ValueError):
        cglmp_expectation(bell_phi_plus_qubit(), "xy")


# ---------------------------------------------------------------------------
# diagnostics report


def test_diagnostics_maxmixed():
    report = diagnostics(maxmixed9(), bell=False)
    assert report.valid
    assert abs(report.purity - 1.0 / 9.0) < 1e-12
    assert report.exchange_symmetric


def test_diagnostics_singlet_pure():
    report = diagnostics(singlet3(), bell=True)
    assert report.valid
    assert abs(report.purity - 1.0) < 1e-10
    assert abs(report.c_mb2 - 4.0 / 3.0) < 1e-10
    assert abs(report.cglmp_xy - CGLMP_SINGLET) < 1e-10
    assert abs(report.cglmp_max - CGLMP_SINGLET) < 1e-6


def test_diagnostics_flags_inflated_correlations():
    s = singlet3()
    bad = BlochState(dims=[3, 3], a=s.a, b=s.b, c=1.5 * s.c)
    report = diagnostics(bad, bell=False)
    assert not report.valid
    assert min(report.eigenvalues) < -1e-6
    assert report.purity > 1.0
    assert any("negative eigenvalue" in r for r in report.validity_reasons)
    assert any("exceeds one" in r for r in report.validity_reasons)


def test_diagnostics_detects_asymmetry():
    rng = np.random.default_rng(11)
    state = _random_state(rng, [3, 3])
    report = diagnostics(state, bell=False)
    assert report.exchange_symmetric is False
    assert report.exchange_asymmetry > 1e-6


def test_diagnostics_qubit_pair_fields():
    report = diagnostics(bell_phi_plus_qubit(), bell=False)
    assert abs(report.wootters - 1.0) < 1e-10
    assert abs(report.chsh_max - 2.0 * np.sqrt(2.0)) < 1e-10
    assert report.cglmp_max is None


def test_diagnostics_json_round_trip():
    from spintomo.observables import ObservableReport
    report = diagnostics(werner(0.5), bell=True)
    back = ObservableReport.from_json(report.to_json())
    assert back.c_mb2 == report.c_mb2
    assert back.cglmp_max == report.cglmp_max
    assert back.eigenvalues == report.eigenvalues
