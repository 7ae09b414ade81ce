"""Entanglement and Bell observables of reconstructed density matrices.

Implements the lower bound on the squared concurrence

    C^2 >= 2 tr(rho^2) - tr(rho_A^2) - tr(rho_B^2)
        = -4/9 - (2/3) sum a^2 - (2/3) sum b^2 + 8 sum c^2   (3x3 case)

(positive values certify entanglement), the Wootters concurrence and
CHSH maximum for qubit pairs, and the three-outcome CGLMP Bell operator
for qutrit pairs together with its maximisation over a common rotation
of both measurement bases.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.optimize

from .basis import BlochState, gell_mann_basis, spin_matrices
from .symbols import rotation_matrices

CGLMP_PLANES = {"xy": (0.0, 0.0), "xz": (np.pi / 2, 0.0), "yz": (np.pi / 2, np.pi / 2)}


def concurrence_bound(state: BlochState) -> float:
    """Lower bound on the squared concurrence of a qutrit pair (closed form)."""
    if not state.is_bipartite or state.dims != [3, 3]:
        raise ValueError("closed-form concurrence bound requires a 3x3 state")
    return (-4.0 / 9.0
            - (2.0 / 3.0) * float(np.sum(state.a**2))
            - (2.0 / 3.0) * float(np.sum(state.b**2))
            + 8.0 * float(np.sum(state.c**2)))


def concurrence_bound_trace(state: BlochState) -> float:
    """The same bound from explicit matrix traces; valid for any dims."""
    if not state.is_bipartite:
        raise ValueError("concurrence bound requires a bipartite state")
    d1, d2 = state.dims
    rho = state.density_matrix()
    rho4 = rho.reshape(d1, d2, d1, d2)
    rho_a = np.einsum("ajbj->ab", rho4)
    rho_b = np.einsum("iaib->ab", rho4)
    tr2 = lambda m: float(np.real(np.trace(m @ m)))
    return 2.0 * tr2(rho) - tr2(rho_a) - tr2(rho_b)


def wootters_concurrence(state: BlochState, warn_tol=1e-9) -> float:
    """Wootters concurrence of a qubit pair.

    Eigenvalues of R = rho (s2 x s2) rho* (s2 x s2) are computed with a
    general complex solver (R is not Hermitian); small negative real
    parts from statistical noise are clipped, larger ones warn.
    """
    if not state.is_bipartite or state.dims != [2, 2]:
        raise ValueError("Wootters concurrence requires a 2x2 state")
    rho = state.density_matrix()
    s2 = gell_mann_basis(2).generators[1]
    flip = np.kron(s2, s2)
    R = rho @ flip @ rho.conj() @ flip
    eig = np.real(np.linalg.eigvals(R))
    if eig.min() < -warn_tol:
        warnings.warn(f"R eigenvalue {eig.min():.3g} below tolerance; "
                      "input may not be a valid density matrix")
    xi = np.sqrt(np.clip(eig, 0.0, None))
    xi.sort()
    return max(0.0, float(xi[3] - xi[2] - xi[1] - xi[0]))


def chsh_max(state: BlochState) -> float:
    """Maximum CHSH value 2 sqrt(m1 + m2) over measurement settings.

    m1, m2 are the two largest eigenvalues of T^T T with correlation
    matrix T_ij = <sigma_i x sigma_j> = 4 c_ij.
    """
    if not state.is_bipartite or state.dims != [2, 2]:
        raise ValueError("CHSH requires a 2x2 state")
    T = 4.0 * state.c
    m = np.linalg.eigvalsh(T.T @ T)
    return 2.0 * float(np.sqrt(m[-1] + m[-2]))


@lru_cache(maxsize=None)
def cglmp_operator():
    """Two-setting three-outcome Bell operator for a qutrit pair.

    B = -(2/sqrt(3)) (S_x x S_x + S_y x S_y) + l4 x l4 + l5 x l5,
    expressed in the xy plane; other planes follow by the common
    rotation of cglmp_expectation.
    """
    sx, sy, _ = spin_matrices(3)
    lam = gell_mann_basis(3).generators
    B = (-(2.0 / np.sqrt(3.0)) * (np.kron(sx, sx) + np.kron(sy, sy))
         + np.kron(lam[3], lam[3]) + np.kron(lam[4], lam[4]))
    B.setflags(write=False)
    return B


def _rotated_cglmp(theta, phi):
    U = rotation_matrices(3, [theta], [phi])[0]
    UU = np.kron(U, U)
    return UU.conj().T @ cglmp_operator() @ UU


def cglmp_expectation(state: BlochState, plane="xy") -> float:
    """<B> for the CGLMP operator rotated into the requested plane.

    plane is one of "xy", "xz", "yz" or an explicit (theta, phi) pair;
    both sides of the pair receive the same rotation.
    """
    if not state.is_bipartite or state.dims != [3, 3]:
        raise ValueError("CGLMP expectation requires a 3x3 state")
    if isinstance(plane, str):
        try:
            theta, phi = CGLMP_PLANES[plane]
        except KeyError:
            raise ValueError(f"unknown plane '{plane}'; use xy, xz, yz or (theta, phi)")
    else:
        theta, phi = plane
    rho = state.density_matrix()
    return float(np.real(np.trace(rho @ _rotated_cglmp(theta, phi))))


def _cglmp_grid_values(rho, thetas, phis):
    n_t, n_p = len(thetas), len(phis)
    theta_grid = np.repeat(thetas, n_p)
    phi_grid = np.tile(phis, n_t)
    U = rotation_matrices(3, theta_grid, phi_grid)
    U9 = np.einsum("nab,ncd->nacbd", U, U).reshape(-1, 9, 9)
    B = cglmp_operator()
    vals = np.real(np.einsum("ij,nkj,kl,nli->n", rho, U9.conj(), B, U9,
                             optimize=True))
    return vals.reshape(n_t, n_p)


def cglmp_max(state: BlochState, n_theta=64, n_phi=128, tol=1e-6):
    """(max <B>, theta*, phi*) over the common-rotation family.

    Coarse grid scan followed by Nelder-Mead refinement; exact grid ties
    resolve to the lexicographically smallest (theta, phi).
    """
    if not state.is_bipartite or state.dims != [3, 3]:
        raise ValueError("CGLMP maximisation requires a 3x3 state")
    rho = state.density_matrix()
    thetas = np.linspace(0.0, np.pi, n_theta)
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    vals = _cglmp_grid_values(rho, thetas, phis)
    flat = np.argmax(vals)  # first occurrence = lexicographically smallest
    it, ip = np.unravel_index(flat, vals.shape)
    best_val, best_t, best_p = vals[it, ip], thetas[it], phis[ip]

    neg = lambda x: -float(np.real(np.trace(rho @ _rotated_cglmp(x[0], x[1]))))
    res = scipy.optimize.minimize(neg, [best_t, best_p], method="Nelder-Mead",
                                  options={"xatol": 1e-8, "fatol": tol * 1e-2})
    if -res.fun > best_val:
        best_val = -res.fun
        best_t = float(np.clip(res.x[0], 0.0, np.pi))
        best_p = float(res.x[1] % (2.0 * np.pi))
    return float(best_val), float(best_t), float(best_p)


@dataclass
class ObservableReport:
    """Density-matrix diagnostics and quantum observables in one record."""

    dims: list
    purity: float
    purity_direct: float
    eigenvalues: list
    valid: bool
    validity_reasons: list
    reduced_purity_a: float | None = None
    reduced_purity_b: float | None = None
    c_mb2: float | None = None
    exchange_symmetric: bool | None = None
    exchange_asymmetry: float | None = None
    wootters: float | None = None
    chsh_max: float | None = None
    cglmp_xy: float | None = None
    cglmp_xz: float | None = None
    cglmp_yz: float | None = None
    cglmp_max: float | None = None
    cglmp_argmax: list | None = None

    def to_json(self):
        return json.dumps(self.__dict__, indent=2)

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))


def diagnostics(state: BlochState, bell: bool = True) -> ObservableReport:
    """Full diagnostic report; invalid reconstructions are reported, not raised.

    The exchange-symmetry flag supports identity tests on nominally
    indistinguishable parents: an unsymmetrised reconstruction of a truly
    identical pair may fail validity, which is the physics signal.
    """
    purity = state.purity()
    rho = state.density_matrix()
    purity_direct = float(np.real(np.trace(rho @ rho)))
    if abs(purity - purity_direct) > 1e-10:
        raise RuntimeError("closed-form and direct purity disagree; "
                           "inconsistent state parameters")
    valid, eig, reasons = state.validity()
    report = ObservableReport(
        dims=list(state.dims), purity=purity, purity_direct=purity_direct,
        eigenvalues=[float(x) for x in eig], valid=valid,
        validity_reasons=reasons)
    if not state.is_bipartite:
        return report
    pa, pb = state.reduced_purities()
    report.reduced_purity_a = pa
    report.reduced_purity_b = pb
    report.c_mb2 = (concurrence_bound(state) if state.dims == [3, 3]
                    else concurrence_bound_trace(state))
    if state.dims[0] == state.dims[1]:
        asym = max(float(np.max(np.abs(state.a - state.b))),
                   float(np.max(np.abs(state.c - state.c.T))))
        report.exchange_asymmetry = asym
        report.exchange_symmetric = bool(asym < 1e-12)
    if state.dims == [2, 2]:
        report.wootters = wootters_concurrence(state)
        report.chsh_max = chsh_max(state)
    if bell and state.dims == [3, 3]:
        report.cglmp_xy = cglmp_expectation(state, "xy")
        report.cglmp_xz = cglmp_expectation(state, "xz")
        report.cglmp_yz = cglmp_expectation(state, "yz")
        val, th, ph = cglmp_max(state)
        report.cglmp_max = val
        report.cglmp_argmax = [th, ph]
    return report
