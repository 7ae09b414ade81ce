"""Wigner Q and P symbols for decay measurement operators.

The Q symbol of a measurement operator F maps the parent density matrix
to the daughter angular distribution:

    q_i(n) = tr(lambda_i U_n F U_n^dag),   U_n = exp(-i S_z phi) exp(-i S_y theta)

and the dual P symbols invert that map.  They are obtained from the
inner-product (Gram) matrix

    M_ij = (d / 8 pi) \\int q_i q_j dOmega,      p_i = sum_j [M^-1]_ij q_j,

which exists whenever the decay is spin-dependent enough (e.g. not for
kappa = 0 or photon-like |cL| = |cR| couplings).

Quadrature uses a Gauss-Legendre x uniform-trapezoid product rule with
(2d+1, 4d+1) nodes, exact for the band limit of spin-j symbols; node
counts are doubled once as a self-check, so any tolerance failure
indicates a bug rather than discretisation error.

Symbols are carried both as callable evaluators and as coefficient
tables over the monomial dictionary sin^k(theta) cos^b(theta) cos(k phi)
/ sin(k phi), which serialise to diff-able fixtures.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
import scipy.linalg

from .basis import GellMannBasis, gell_mann_basis, spin_matrices
from .models import MeasurementModel

CONDITION_LIMIT = 1e12
PIVOT_LIMIT = 1e-13
FIT_TOL = 1e-10


# ---------------------------------------------------------------------------
# Rotations and projectors


@lru_cache(maxsize=None)
def _rotation_cache(d):
    sx, sy, sz = spin_matrices(d)
    wy, vy = np.linalg.eigh(sy)
    return np.diag(sz).real.copy(), wy, vy


def rotation_matrices(d, theta, phi):
    """Batch of rotation operators U = exp(-i S_z phi) exp(-i S_y theta).

    theta and phi are broadcast 1-d arrays; returns shape (n, d, d).
    """
    m, wy, vy = _rotation_cache(d)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    ey = np.einsum("ab,nb,cb->nac", vy, np.exp(-1j * np.outer(theta, wy)), vy.conj())
    return np.exp(-1j * np.outer(phi, m))[:, :, None] * ey


@dataclass(frozen=True)
class RotationOperator:
    """Unitary spin rotation for a fixed dimension, callable as U(theta, phi)."""

    dim: int

    def __call__(self, theta, phi):
        return rotation_matrices(self.dim, [theta], [phi])[0]


def rotation_operator(d: int) -> RotationOperator:
    if d < 2:
        raise ValueError("rotation operator requires dimension >= 2")
    return RotationOperator(dim=d)


def projector(d: int, sign, theta, phi):
    """Rank-1 projector onto the extremal spin state along n(theta, phi).

    sign '+' projects onto the highest-weight state; '-' onto the lowest,
    obtained via the substitution theta -> pi - theta, phi -> phi + pi.
    """
    if d < 2:
        raise ValueError("projector requires dimension >= 2")
    if sign in ("+", +1):
        pass
    elif sign in ("-", -1):
        theta, phi = np.pi - theta, phi + np.pi
    else:
        raise ValueError("sign must be '+' or '-'")
    u = rotation_matrices(d, [theta], [phi])[0][:, 0]
    return np.outer(u, u.conj())


# ---------------------------------------------------------------------------
# Quadrature on the sphere


def sphere_quadrature(d: int, oversample: int = 1):
    """Gauss-Legendre (cos theta) x trapezoid (phi) product rule.

    Returns (cos_nodes, cos_weights, phi_nodes, phi_weight).  The base
    node counts (2d+1, 4d+1) integrate products of spin-j symbols
    exactly; oversample multiplies both counts.
    """
    n_theta = oversample * (2 * d + 1)
    n_phi = oversample * (4 * d + 1)
    x, w = np.polynomial.legendre.leggauss(n_theta)
    phis = 2.0 * np.pi * np.arange(n_phi) / n_phi
    return x, w, phis, 2.0 * np.pi / n_phi


def _product_grid(cos_nodes, phis):
    ct = np.repeat(cos_nodes, len(phis))
    ph = np.tile(phis, len(cos_nodes))
    return ct, ph


# ---------------------------------------------------------------------------
# Monomial-dictionary representation


def _term_columns(d):
    """(k, b, trig) triples indexing sin^k cos^b {cos,sin}(k phi)."""
    cols = []
    for k in range(d):
        for b in range(d):
            cols.append((k, b, 0))
            if k > 0:
                cols.append((k, b, 1))
    return cols


def _design_matrix(d, cos_theta, phi):
    st = np.sqrt(np.clip(1.0 - cos_theta**2, 0.0, None))
    powers = np.arange(d)
    sk = st[:, None] ** powers
    cb = cos_theta[:, None] ** powers
    kph = np.outer(phi, powers)
    cos_kph, sin_kph = np.cos(kph), np.sin(kph)
    cols = _term_columns(d)
    T = np.empty((len(cos_theta), len(cols)))
    for idx, (k, b, t) in enumerate(cols):
        trig = cos_kph if t == 0 else sin_kph
        T[:, idx] = sk[:, k] * cb[:, b] * trig[:, k]
    return T, cols


def _fit_coefficients(d, cos_theta, phi, values):
    """Least-squares fit of symbol values onto the monomial dictionary.

    values has shape (n_points, n_symbols); returns (n_symbols, d, d, 2).
    """
    T, cols = _design_matrix(d, cos_theta, phi)
    sol, *_ = np.linalg.lstsq(T, values, rcond=None)
    resid = np.max(np.abs(T @ sol - values))
    if resid > FIT_TOL:
        raise RuntimeError(f"symbol fit residual {resid:.3e} exceeds tolerance")
    coeffs = np.zeros((values.shape[1], d, d, 2))
    for idx, (k, b, t) in enumerate(cols):
        coeffs[:, k, b, t] = sol[idx]
    return coeffs


def _eval_coefficients(coeffs, cos_theta, phi):
    ct = np.asarray(cos_theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    n = len(ct)
    d = coeffs.shape[1]
    st = np.sqrt(np.clip(1.0 - ct * ct, 0.0, None))
    # powers and harmonics by recurrence; cheaper than float pow / repeated trig
    sk = np.empty((n, d))
    cb = np.empty((n, d))
    cosk = np.empty((n, d))
    sink = np.empty((n, d))
    sk[:, 0] = cb[:, 0] = cosk[:, 0] = 1.0
    sink[:, 0] = 0.0
    if d > 1:
        cosp, sinp = np.cos(phi), np.sin(phi)
        sk[:, 1], cb[:, 1], cosk[:, 1], sink[:, 1] = st, ct, cosp, sinp
        for k in range(2, d):
            sk[:, k] = sk[:, k - 1] * st
            cb[:, k] = cb[:, k - 1] * ct
            cosk[:, k] = cosk[:, k - 1] * cosp - sink[:, k - 1] * sinp
            sink[:, k] = sink[:, k - 1] * cosp + cosk[:, k - 1] * sinp
    # monomial values as one (n, 2 d^2) block, contracted by matmul
    a0 = sk * cosk
    a1 = sk * sink
    dd = d * d
    flat = np.empty((n, 2 * dd))
    for k in range(d):
        flat[:, k * d:(k + 1) * d] = a0[:, k:k + 1] * cb
        flat[:, dd + k * d:dd + (k + 1) * d] = a1[:, k:k + 1] * cb
    cmat = np.concatenate([coeffs[..., 0].reshape(-1, dd),
                           coeffs[..., 1].reshape(-1, dd)], axis=1)
    return flat @ cmat.T


# ---------------------------------------------------------------------------
# Symbol sets


@dataclass
class SymbolSet:
    """Q (and optionally P) symbols of one measurement model.

    Evaluators take (cos_theta, phi) arrays and return (n, d^2-1); the
    frame substitution for charge-conjugate channels is applied
    internally.  q_funcs / p_funcs expose the per-symbol scalar
    callables f(theta, phi).
    """

    model: MeasurementModel
    basis: GellMannBasis
    q_coeffs: np.ndarray
    gram: np.ndarray
    condition_number: float
    invertible: bool
    gram_note: str = ""
    gram_check: float = 0.0
    gram_inverse: np.ndarray | None = None
    p_coeffs: np.ndarray | None = None

    @property
    def dim(self):
        return self.basis.dim

    @property
    def n_symbols(self):
        return self.basis.n_generators

    def _inputs(self, cos_theta, phi):
        cos_theta = np.atleast_1d(np.asarray(cos_theta, dtype=float))
        phi = np.atleast_1d(np.asarray(phi, dtype=float))
        if self.model.frame_flip:
            cos_theta, phi = -cos_theta, phi + np.pi
        return cos_theta, phi

    def q_values(self, cos_theta, phi):
        ct, ph = self._inputs(cos_theta, phi)
        return _eval_coefficients(self.q_coeffs, ct, ph)

    def p_values(self, cos_theta, phi):
        if self.p_coeffs is None:
            raise ValueError(f"P symbols unavailable: {self.gram_note or 'not built'}")
        ct, ph = self._inputs(cos_theta, phi)
        return _eval_coefficients(self.p_coeffs, ct, ph)

    @property
    def q_funcs(self):
        return [
            (lambda theta, phi, i=i:
             float(self.q_values(np.cos([theta]), [phi])[0, i]))
            for i in range(self.n_symbols)
        ]

    @property
    def p_funcs(self):
        if self.p_coeffs is None:
            raise ValueError(f"P symbols unavailable: {self.gram_note or 'not built'}")
        return [
            (lambda theta, phi, i=i:
             float(self.p_values(np.cos([theta]), [phi])[0, i]))
            for i in range(self.n_symbols)
        ]

    def coefficient_table(self, kind="q", threshold=1e-12):
        """JSON-ready coefficient dictionary over the monomial terms."""
        coeffs = self.q_coeffs if kind == "q" else self.p_coeffs
        if coeffs is None:
            raise ValueError(f"{kind} coefficients unavailable")
        table = {}
        for i in range(self.n_symbols):
            terms = []
            for k in range(self.dim):
                for b in range(self.dim):
                    for t, trig in ((0, "cos"), (1, "sin")):
                        val = coeffs[i, k, b, t]
                        if abs(val) > threshold:
                            terms.append({"sin_power": k, "cos_power": b,
                                          "harmonic": k, "trig": trig,
                                          "coeff": float(f"{val:.12g}")})
            table[f"{kind}_{i + 1}"] = terms
        return table


def _grid_q_values(model, basis, cos_nodes, phis):
    ct, ph = _product_grid(cos_nodes, phis)
    U = rotation_matrices(basis.dim, np.arccos(ct), ph)
    fd = model.f_diagonal
    q = np.einsum("nam,iab,nbm,m->ni", U.conj(), basis.generators, U, fd)
    return ct, ph, np.real(q)


def _gram_from_grid(d, q, weights, wphi, n_phi):
    wq = q * np.repeat(weights, n_phi)[:, None] * wphi
    return (d / (8.0 * np.pi)) * (wq.T @ q)


def _diagnose_singular(model):
    params = model.params
    if "kappa" in params and abs(params["kappa"]) < 1e-12:
        return "spin-independent decay (kappa = 0)"
    if "c_left" in params and abs(abs(params["c_left"]) - abs(params["c_right"])) < 1e-12:
        return "photon-like couplings (|cL| = |cR|)"
    return "decay carries too little spin information"


def q_symbols(model: MeasurementModel, basis: GellMannBasis | None = None) -> SymbolSet:
    """Build the generalised Q symbols and Gram matrix of a model."""
    if basis is None:
        basis = gell_mann_basis(model.dim)
    if basis.dim != model.dim:
        raise ValueError("basis dimension does not match model")
    d = basis.dim
    fd = model.f_diagonal
    if fd.min() < -1e-12:
        raise ValueError("model F is not positive semi-definite")
    if abs(fd.sum() + model.scalar_weight - 1.0) > 1e-9:
        raise ValueError("model F weights do not sum to one")

    x, w, phis, wphi = sphere_quadrature(d)
    ct, ph, q = _grid_q_values(model, basis, x, phis)
    coeffs = _fit_coefficients(d, ct, ph, q)
    gram = _gram_from_grid(d, q, w, wphi, len(phis))

    x2, w2, phis2, wphi2 = sphere_quadrature(d, oversample=2)
    _, _, q2 = _grid_q_values(model, basis, x2, phis2)
    gram2 = _gram_from_grid(d, q2, w2, wphi2, len(phis2))
    gram_check = float(np.max(np.abs(gram - gram2)))

    cond = float(np.linalg.cond(gram)) if np.any(gram) else np.inf
    _, lu_u = scipy.linalg.lu(gram, permute_l=True)
    min_pivot = float(np.min(np.abs(np.diag(lu_u))))
    invertible = bool(cond < CONDITION_LIMIT and min_pivot >= PIVOT_LIMIT)
    note = "" if invertible else (
        f"gram matrix singular ({_diagnose_singular(model)}; "
        f"condition number {cond:.3g}, min pivot {min_pivot:.3g})")
    return SymbolSet(model=model, basis=basis, q_coeffs=coeffs, gram=gram,
                     condition_number=cond, invertible=invertible,
                     gram_note=note, gram_check=gram_check)


def p_symbols(symbols: SymbolSet) -> SymbolSet:
    """Fill in the dual P symbols, p = M^-1 q, when the Gram matrix allows.

    A singular Gram matrix yields a non-invertible SymbolSet carrying the
    diagnosis rather than an exception.
    """
    if not symbols.invertible:
        return symbols
    gram_inverse = np.linalg.inv(symbols.gram)
    p_coeffs = np.einsum("ij,jkbt->ikbt", gram_inverse, symbols.q_coeffs)
    return replace(symbols, gram_inverse=gram_inverse, p_coeffs=p_coeffs)


def build_symbols(model: MeasurementModel) -> SymbolSet:
    """Q symbols, Gram matrix and P symbols in one step."""
    return p_symbols(q_symbols(model))


# ---------------------------------------------------------------------------
# Closed-form reference tables
#
# Hard-coded evaluators used as independent oracles against the numerical
# pipeline.  The antisymmetric-block d=4 symbols follow the rotation
# convention above (positive sin(k phi) coefficients).


def _w_q_closed(sign):
    s = float(sign)

    def q(cos_theta, phi):
        ct = np.asarray(cos_theta, dtype=float)
        ph = np.asarray(phi, dtype=float)
        st = np.sqrt(np.clip(1.0 - ct**2, 0.0, None))
        c2t = 2.0 * ct**2 - 1.0
        r2 = 1.0 / np.sqrt(2.0)
        out = np.empty(ct.shape + (8,))
        out[..., 0] = r2 * st * (ct + s) * np.cos(ph)
        out[..., 1] = r2 * st * (ct + s) * np.sin(ph)
        out[..., 2] = (4.0 * s * ct + 3.0 * c2t + 1.0) / 8.0
        out[..., 3] = 0.5 * st**2 * np.cos(2.0 * ph)
        out[..., 4] = 0.5 * st**2 * np.sin(2.0 * ph)
        out[..., 5] = r2 * st * (-ct + s) * np.cos(ph)
        out[..., 6] = r2 * st * (-ct + s) * np.sin(ph)
        out[..., 7] = (12.0 * s * ct - 3.0 * c2t - 1.0) / (8.0 * np.sqrt(3.0))
        return out

    return q


def _w_p_closed(sign):
    s = float(sign)

    def p(cos_theta, phi):
        ct = np.asarray(cos_theta, dtype=float)
        ph = np.asarray(phi, dtype=float)
        st = np.sqrt(np.clip(1.0 - ct**2, 0.0, None))
        c2t = 2.0 * ct**2 - 1.0
        r2 = np.sqrt(2.0)
        out = np.empty(ct.shape + (8,))
        out[..., 0] = r2 * (5.0 * ct + s) * st * np.cos(ph)
        out[..., 1] = r2 * (5.0 * ct + s) * st * np.sin(ph)
        out[..., 2] = (4.0 * s * ct + 15.0 * c2t + 5.0) / 4.0
        out[..., 3] = 5.0 * st**2 * np.cos(2.0 * ph)
        out[..., 4] = 5.0 * st**2 * np.sin(2.0 * ph)
        out[..., 5] = r2 * (s - 5.0 * ct) * st * np.cos(ph)
        out[..., 6] = r2 * (s - 5.0 * ct) * st * np.sin(ph)
        out[..., 7] = (12.0 * s * ct - 15.0 * c2t - 5.0) / (4.0 * np.sqrt(3.0))
        return out

    return p


def _d2_q_closed(kappa):
    def q(cos_theta, phi):
        ct = np.asarray(cos_theta, dtype=float)
        ph = np.asarray(phi, dtype=float)
        st = np.sqrt(np.clip(1.0 - ct**2, 0.0, None))
        return kappa * np.stack([st * np.cos(ph), st * np.sin(ph), ct], axis=-1)

    return q


def _d4_qp_closed(kind):
    """Projective d=4 symbols; symmetric block in (j,k) lexicographic order."""

    def table(cos_theta, phi):
        ct = np.asarray(cos_theta, dtype=float)
        ph = np.asarray(phi, dtype=float)
        half = 0.5 * np.arccos(np.clip(ct, -1.0, 1.0))
        sh, chh = np.sin(half), np.cos(half)
        st = np.sqrt(np.clip(1.0 - ct**2, 0.0, None))
        theta = np.arccos(np.clip(ct, -1.0, 1.0))
        s3 = np.sqrt(3.0)
        c1, c2t, c3t = ct, np.cos(2 * theta), np.cos(3 * theta)
        s1, s2t, s3t = st, np.sin(2 * theta), np.sin(3 * theta)
        out = np.empty(ct.shape + (15,))
        if kind == "q":
            sym = [2 * s3 * sh * chh**5,            # S12
                   2 * s3 * sh**2 * chh**4,         # S13  (harmonic 2)
                   0.25 * st**3,                    # S14  (harmonic 3)
                   0.75 * st**3,                    # S23
                   2 * s3 * sh**4 * chh**2,         # S24  (harmonic 2)
                   2 * s3 * sh**5 * chh]            # S34
            out[..., 12] = chh**4 * (2.0 * c1 - 1.0)
            out[..., 13] = (6 * c1 + 3 * c2t - 2 * c3t + 1) / (8 * s3)
            out[..., 14] = (15 * c1 - 6 * c2t + c3t - 2) / (8 * np.sqrt(6.0))
        else:
            sym = [(5 * s3 / 16) * (3 * s1 + 4 * s2t + 7 * s3t),   # S12
                   (5 * s3 / 4) * st**2 * (7 * c1 + 1),            # S13
                   (35.0 / 4) * st**3,                             # S14
                   -(5.0 / 16) * (s1 + 21 * s3t),                  # S23
                   (5 * s3 / 4) * st**2 * (1 - 7 * c1),            # S24
                   (5 * s3 / 16) * (3 * s1 - 4 * s2t + 7 * s3t)]   # S34
            out[..., 12] = (5.0 / 8) * (5 * c1 + 3 * c2t + 7 * c3t + 1)
            out[..., 13] = -(5 / (8 * s3)) * (6 * c1 - 3 * c2t + 14 * c3t - 1)
            out[..., 14] = (5 / (8 * np.sqrt(6.0))) * (9 * c1 - 6 * c2t + 7 * c3t - 2)
        harmonics = [1, 2, 3, 1, 2, 1]
        for i, (amp, k) in enumerate(zip(sym, harmonics)):
            out[..., i] = amp * np.cos(k * ph)
            out[..., 6 + i] = amp * np.sin(k * ph)
        return out

    return table


def massive_w_p_mixing(v: float):
    """Mixing matrix relating massive-lepton W P symbols to the projective ones.

    Valid for the scalar-component normalisation of the measurement
    operator; the unit-trace (no-scalar) convention divides the result by
    f_v = 4/(3+v).  Equals the identity at v = 1.
    """
    if not 0.0 < v <= 1.0:
        raise ValueError(f"lepton speed must lie in (0, 1], got {v}")
    hi = 1.0 / (v + 1.0) + 1.0 / (2.0 * v)
    lo = 1.0 / (v + 1.0) - 1.0 / (2.0 * v)
    cross = np.sqrt(3.0) * (v - 1.0) / (4.0 * v * (v + 1.0))
    A = np.zeros((8, 8))
    for i, j in ((0, 5), (1, 6)):
        A[i, i] = hi
        A[i, j] = lo
        A[j, j] = hi
        A[j, i] = lo
    A[2, 2] = 1.0 / (2.0 * (v + 1.0)) + 3.0 / (4.0 * v)
    A[2, 7] = cross
    A[7, 2] = cross
    A[7, 7] = 3.0 / (2.0 * (v + 1.0)) + 1.0 / (4.0 * v)
    A[3, 3] = 1.0 / v
    A[4, 4] = 1.0 / v
    return A


def z_dilepton_p_mixing(c_left: float, c_right: float):
    """Mixing matrix relating Z-dilepton P symbols to the projective W+ ones."""
    norm = c_left * c_left + c_right * c_right
    if norm == 0.0:
        raise ValueError("couplings must not both vanish")
    r = c_right * c_right / norm
    l = c_left * c_left / norm
    if abs(r - l) < 1e-12:
        raise ValueError("mixing undefined for photon-like couplings |cL| = |cR|")
    A = np.zeros((8, 8))
    for i, j in ((0, 5), (1, 6)):
        A[i, i] = r
        A[i, j] = l
        A[j, j] = r
        A[j, i] = l
    A[2, 2] = r - l / 2.0
    A[2, 7] = np.sqrt(3.0) / 2.0 * l
    A[7, 2] = np.sqrt(3.0) / 2.0 * l
    A[7, 7] = l / 2.0 + r
    A[3, 3] = r - l
    A[4, 4] = r - l
    return A / (r - l)


@dataclass(frozen=True)
class ClosedFormSymbols:
    """Hard-coded symbol evaluators for the tabulated reference cases."""

    case: str
    dim: int
    params: dict
    _q: object
    _p: object

    def q_values(self, cos_theta, phi):
        ct = np.atleast_1d(np.asarray(cos_theta, dtype=float))
        ph = np.atleast_1d(np.asarray(phi, dtype=float))
        return self._q(ct, ph)

    def p_values(self, cos_theta, phi):
        ct = np.atleast_1d(np.asarray(cos_theta, dtype=float))
        ph = np.atleast_1d(np.asarray(phi, dtype=float))
        return self._p(ct, ph)

    @property
    def n_symbols(self):
        return self.dim * self.dim - 1


GOLDEN_CASES = ("d2_kappa", "d3_Wplus", "d3_Wminus", "d4_projective",
                "d3_Wmassive", "d3_Z")


def golden_tables(case: str, *, kappa=1.0, v=1.0, c_left=None, c_right=None,
                  scalar_component=False) -> ClosedFormSymbols:
    """Closed-form Q/P evaluators for the six tabulated reference cases."""
    if case == "d2_kappa":
        if abs(kappa) < 1e-12:
            raise ValueError("P symbols undefined at kappa = 0")
        return ClosedFormSymbols(case=case, dim=2, params={"kappa": kappa},
                                 _q=_d2_q_closed(kappa), _p=_d2_q_closed(3.0 / kappa))
    if case in ("d3_Wplus", "d3_Wminus"):
        s = +1 if case == "d3_Wplus" else -1
        return ClosedFormSymbols(case=case, dim=3, params={},
                                 _q=_w_q_closed(s), _p=_w_p_closed(s))
    if case == "d4_projective":
        return ClosedFormSymbols(case=case, dim=4, params={},
                                 _q=_d4_qp_closed("q"), _p=_d4_qp_closed("p"))
    if case == "d3_Wmassive":
        if not 0.0 < v <= 1.0:
            raise ValueError(f"lepton speed must lie in (0, 1], got {v}")
        fv = 4.0 / (3.0 + v)
        alpha, beta = (1.0 + v) / 2.0, (1.0 - v) / 4.0
        qp, qm = _w_q_closed(+1), _w_q_closed(-1)
        pp = _w_p_closed(+1)
        A = massive_w_p_mixing(v)
        q_scale = fv if not scalar_component else 1.0
        p_scale = 1.0 / fv if not scalar_component else 1.0

        def qf(ct, ph):
            return q_scale * ((alpha - beta) * qp(ct, ph) - beta * qm(ct, ph))

        def pf(ct, ph):
            return p_scale * np.einsum("ij,nj->ni", A, pp(ct, ph))

        return ClosedFormSymbols(case=case, dim=3,
                                 params={"v": v, "scalar_component": scalar_component},
                                 _q=qf, _p=pf)
    if case == "d3_Z":
        if c_left is None or c_right is None:
            raise ValueError("d3_Z requires c_left and c_right")
        norm = c_left**2 + c_right**2
        if norm == 0.0:
            raise ValueError("couplings must not both vanish")
        r, l = c_right**2 / norm, c_left**2 / norm
        qp, qm = _w_q_closed(+1), _w_q_closed(-1)
        pp = _w_p_closed(+1)
        A = z_dilepton_p_mixing(c_left, c_right)

        def qf(ct, ph):
            return r * qp(ct, ph) + l * qm(ct, ph)

        def pf(ct, ph):
            return np.einsum("ij,nj->ni", A, pp(ct, ph))

        return ClosedFormSymbols(case=case, dim=3,
                                 params={"c_left": c_left, "c_right": c_right},
                                 _q=qf, _p=pf)
    raise ValueError(f"unknown golden case '{case}'; expected one of {GOLDEN_CASES}")
