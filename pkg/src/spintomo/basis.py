"""Generalised Gell-Mann bases and Bloch-vector density matrices.

The d^2 - 1 traceless Hermitian generators of SU(d) form an orthogonal
operator basis with tr(lambda_i lambda_j) = 2 delta_ij.  Supplemented by
lambda_0 = sqrt(2/d) I they span all Hermitian operators, so any density
matrix is carried around here as a real coefficient vector (single
system) or as (a, b, c) blocks (bipartite system):

    rho = I/d + sum_i a_i lambda_i                       (single)
    rho = I/(d1 d2) + sum_i a_i lambda_i (x) I/d2
                    + sum_j I/d1 (x) b_j lambda_j
                    + sum_ij c_ij lambda_i (x) lambda_j  (bipartite)

Generator ordering: d=2 gives the Pauli matrices, d=3 the standard
Gell-Mann matrices.  For d >= 4 the symmetric block comes first in
(j, k) lexicographic order, then the antisymmetric block, then the
diagonal matrices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

HERMITICITY_TOL = 1e-10
EIGENVALUE_TOL = 1e-9


@dataclass(frozen=True)
class GellMannBasis:
    """Generators of SU(d) plus the rescaled identity lambda0."""

    dim: int
    generators: np.ndarray  # (d^2-1, d, d) complex
    lambda0: np.ndarray     # (d, d) complex
    labels: tuple           # e.g. ("S12", "A12", "D1", ...)

    @property
    def n_generators(self):
        return self.dim * self.dim - 1

    def full_set(self):
        """lambda0 followed by the d^2-1 generators, shape (d^2, d, d)."""
        return np.concatenate([self.lambda0[None], self.generators])


def _sym(d, j, k):
    g = np.zeros((d, d), dtype=complex)
    g[j, k] = 1.0
    g[k, j] = 1.0
    return g


def _asym(d, j, k):
    g = np.zeros((d, d), dtype=complex)
    g[j, k] = -1.0j
    g[k, j] = 1.0j
    return g


def _diag(d, l):
    g = np.zeros((d, d), dtype=complex)
    g[np.arange(l), np.arange(l)] = 1.0
    g[l, l] = -float(l)
    return np.sqrt(2.0 / (l * (l + 1))) * g


@lru_cache(maxsize=None)
def gell_mann_basis(d: int) -> GellMannBasis:
    """Build the generalised Gell-Mann basis for Hilbert dimension d.

    Raises ValueError for d < 2.
    """
    if d < 2:
        raise ValueError(f"Gell-Mann basis requires dimension >= 2, got {d}")
    if d == 2:
        gens = [_sym(2, 0, 1), _asym(2, 0, 1), _diag(2, 1)]
        labels = ("S12", "A12", "D1")
    elif d == 3:
        gens = [_sym(3, 0, 1), _asym(3, 0, 1), _diag(3, 1),
                _sym(3, 0, 2), _asym(3, 0, 2),
                _sym(3, 1, 2), _asym(3, 1, 2), _diag(3, 2)]
        labels = ("S12", "A12", "D1", "S13", "A13", "S23", "A23", "D2")
    else:
        gens, labels = [], []
        for j in range(d):
            for k in range(j + 1, d):
                gens.append(_sym(d, j, k))
                labels.append(f"S{j + 1}{k + 1}")
        for j in range(d):
            for k in range(j + 1, d):
                gens.append(_asym(d, j, k))
                labels.append(f"A{j + 1}{k + 1}")
        for l in range(1, d):
            gens.append(_diag(d, l))
            labels.append(f"D{l}")
        labels = tuple(labels)
    lambda0 = np.sqrt(2.0 / d) * np.eye(d, dtype=complex)
    arr = np.array(gens)
    arr.setflags(write=False)
    lambda0.setflags(write=False)
    return GellMannBasis(dim=d, generators=arr, lambda0=lambda0, labels=tuple(labels))


def operator_to_bloch(A, basis: GellMannBasis | int):
    """Coefficients a_i = tr(lambda_i A)/2 for i = 0 .. d^2-1.

    Index 0 carries the trace part: a_0 = tr(A)/sqrt(2 d).  Requires A
    Hermitian to within 1e-10 on the largest element.
    """
    if isinstance(basis, int):
        basis = gell_mann_basis(basis)
    A = np.asarray(A, dtype=complex)
    d = basis.dim
    if A.shape != (d, d):
        raise ValueError(f"operator shape {A.shape} does not match dimension {d}")
    if np.max(np.abs(A - A.conj().T)) > HERMITICITY_TOL:
        raise ValueError("operator is not Hermitian within tolerance")
    full = basis.full_set()
    return 0.5 * np.real(np.einsum("iab,ba->i", full, A))


@dataclass
class BlochState:
    """Gell-Mann parameter vector(s) of a single or bipartite density matrix.

    dims is [d1] or [d1, d2]; a has length d1^2-1, and for bipartite
    states b has length d2^2-1 and c is (d1^2-1) x (d2^2-1).
    """

    dims: list
    a: np.ndarray
    b: np.ndarray | None = None
    c: np.ndarray | None = None

    def __post_init__(self):
        self.dims = [int(d) for d in self.dims]
        if len(self.dims) not in (1, 2):
            raise ValueError("dims must list one or two subsystems")
        d1 = self.dims[0]
        self.a = np.asarray(self.a, dtype=float)
        if self.a.shape != (d1 * d1 - 1,):
            raise ValueError(f"a must have length {d1 * d1 - 1}")
        if self.is_bipartite:
            d2 = self.dims[1]
            if self.b is None or self.c is None:
                raise ValueError("bipartite state requires b and c")
            self.b = np.asarray(self.b, dtype=float)
            self.c = np.asarray(self.c, dtype=float)
            if self.b.shape != (d2 * d2 - 1,):
                raise ValueError(f"b must have length {d2 * d2 - 1}")
            if self.c.shape != (d1 * d1 - 1, d2 * d2 - 1):
                raise ValueError("c has inconsistent shape")
        elif self.b is not None or self.c is not None:
            raise ValueError("single-system state must not carry b or c")

    @property
    def is_bipartite(self):
        return len(self.dims) == 2

    @property
    def total_dim(self):
        return int(np.prod(self.dims))

    def density_matrix(self):
        """Reconstruct the (Hermitian, unit-trace) density matrix."""
        d1 = self.dims[0]
        g1 = gell_mann_basis(d1).generators
        rho1 = np.eye(d1, dtype=complex) / d1 + np.einsum("i,iab->ab", self.a, g1)
        if not self.is_bipartite:
            return rho1
        d2 = self.dims[1]
        g2 = gell_mann_basis(d2).generators
        rho = np.kron(np.eye(d1) / d1, np.eye(d2) / d2).astype(complex)
        rho += np.kron(np.einsum("i,iab->ab", self.a, g1), np.eye(d2) / d2)
        rho += np.kron(np.eye(d1) / d1, np.einsum("j,jab->ab", self.b, g2))
        rho += np.einsum("ij,iab,jcd->acbd", self.c, g1, g2).reshape(d1 * d2, d1 * d2)
        return rho

    @classmethod
    def from_density(cls, rho, dims):
        """Decompose a density matrix into Gell-Mann parameters."""
        dims = [int(d) for d in dims]
        rho = np.asarray(rho, dtype=complex)
        dtot = int(np.prod(dims))
        if rho.shape != (dtot, dtot):
            raise ValueError("density matrix shape does not match dims")
        if np.max(np.abs(rho - rho.conj().T)) > HERMITICITY_TOL:
            raise ValueError("density matrix is not Hermitian within tolerance")
        if abs(np.trace(rho).real - 1.0) > 1e-9:
            raise ValueError("density matrix does not have unit trace")
        d1 = dims[0]
        g1 = gell_mann_basis(d1).generators
        if len(dims) == 1:
            a = 0.5 * np.real(np.einsum("iab,ba->i", g1, rho))
            return cls(dims=dims, a=a)
        d2 = dims[1]
        g2 = gell_mann_basis(d2).generators
        rho4 = rho.reshape(d1, d2, d1, d2)
        rho_a = np.einsum("ajbj->ab", rho4)
        rho_b = np.einsum("iaib->ab", rho4)
        a = 0.5 * np.real(np.einsum("iab,ba->i", g1, rho_a))
        b = 0.5 * np.real(np.einsum("jab,ba->j", g2, rho_b))
        c = 0.25 * np.real(np.einsum("acbd,iba,jdc->ij", rho4, g1, g2))
        return cls(dims=dims, a=a, b=b, c=c)

    def purity(self):
        """tr(rho^2) from the closed form in the Gell-Mann parameters."""
        if not self.is_bipartite:
            return 1.0 / self.dims[0] + 2.0 * float(np.sum(self.a**2))
        d1, d2 = self.dims
        return (1.0 / (d1 * d2)
                + (2.0 / d2) * float(np.sum(self.a**2))
                + (2.0 / d1) * float(np.sum(self.b**2))
                + 4.0 * float(np.sum(self.c**2)))

    def reduced_purities(self):
        """(tr rho_A^2, tr rho_B^2) for a bipartite state."""
        if not self.is_bipartite:
            raise ValueError("reduced purities require a bipartite state")
        d1, d2 = self.dims
        return (1.0 / d1 + 2.0 * float(np.sum(self.a**2)),
                1.0 / d2 + 2.0 * float(np.sum(self.b**2)))

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.density_matrix())

    def validity(self, tol=EIGENVALUE_TOL):
        """(is_valid, eigenvalues, reasons).

        Valid means all eigenvalues in [0, 1] and tr(rho^2) <= 1, each up
        to `tol`.  Out-of-range eigenvalues are reported as found, never
        clipped: invalid reconstructions are a physics signal.
        """
        eig = self.eigenvalues()
        reasons = []
        if eig.min() < -tol:
            reasons.append(f"negative eigenvalue {eig.min():.6g}")
        if eig.max() > 1.0 + tol:
            reasons.append(f"eigenvalue above one {eig.max():.6g}")
        pur = self.purity()
        if pur > 1.0 + tol:
            reasons.append(f"tr(rho^2) = {pur:.6g} exceeds one")
        return (not reasons), eig, reasons

    @property
    def is_valid(self):
        return self.validity()[0]

    def to_json(self):
        payload = {
            "dims": self.dims,
            "a": self.a.tolist(),
            "b": None if self.b is None else self.b.tolist(),
            "c": None if self.c is None else self.c.tolist(),
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text):
        payload = json.loads(text)
        b = payload.get("b")
        c = payload.get("c")
        return cls(dims=payload["dims"], a=np.array(payload["a"]),
                   b=None if b is None else np.array(b),
                   c=None if c is None else np.array(c))


def bloch_to_density(state: BlochState):
    return state.density_matrix()


# ---------------------------------------------------------------------------
# Spin operators


@lru_cache(maxsize=None)
def spin_matrices(d: int):
    """Spin operators (S_x, S_y, S_z) for spin j = (d-1)/2.

    Basis states are ordered by decreasing S_z eigenvalue, so the first
    basis vector is the highest-weight state.
    """
    if d < 2:
        raise ValueError("spin matrices require dimension >= 2")
    j = (d - 1) / 2.0
    m = j - np.arange(d)
    sz = np.diag(m).astype(complex)
    sp = np.zeros((d, d), dtype=complex)
    for k in range(d - 1):
        mm = m[k + 1]
        sp[k, k + 1] = np.sqrt(j * (j + 1) - mm * (mm + 1))
    sm = sp.conj().T
    sx = (sp + sm) / 2.0
    sy = (sp - sm) / 2.0j
    for s in (sx, sy, sz):
        s.setflags(write=False)
    return sx, sy, sz


@dataclass(frozen=True)
class SpinOperatorSet:
    """The d=3 spin operators and their six symmetric quadratic products."""

    S_x: np.ndarray
    S_y: np.ndarray
    S_z: np.ndarray
    S_xy: np.ndarray
    S_xz: np.ndarray
    S_yz: np.ndarray
    S_xx: np.ndarray
    S_yy: np.ndarray
    S_zz: np.ndarray

    def as_dict(self):
        return {name: getattr(self, name) for name in
                ("S_x", "S_y", "S_z", "S_xy", "S_xz", "S_yz",
                 "S_xx", "S_yy", "S_zz")}


@lru_cache(maxsize=None)
def spin_operator_set() -> SpinOperatorSet:
    sx, sy, sz = spin_matrices(3)
    prod = lambda p, q: p @ q + q @ p
    return SpinOperatorSet(
        S_x=sx, S_y=sy, S_z=sz,
        S_xy=prod(sx, sy), S_xz=prod(sx, sz), S_yz=prod(sy, sz),
        S_xx=prod(sx, sx), S_yy=prod(sy, sy), S_zz=prod(sz, sz),
    )


def spin_expectations(state: BlochState):
    """Expectation values of the nine d=3 spin operators.

    Uses the linear map from Gell-Mann parameters, e.g.
    <S_z> = a3 + sqrt(3) a8 and <S_xy> = 2 a5.
    """
    if state.is_bipartite or state.dims[0] != 3:
        raise ValueError("spin expectations are defined for a single d=3 system")
    a = state.a
    s3 = np.sqrt(3.0)
    return {
        "S_x": np.sqrt(2.0) * (a[0] + a[5]),
        "S_y": np.sqrt(2.0) * (a[1] + a[6]),
        "S_z": a[2] + s3 * a[7],
        "S_xy": 2.0 * a[4],
        "S_xz": np.sqrt(2.0) * (a[0] - a[5]),
        "S_yz": np.sqrt(2.0) * (a[1] - a[6]),
        "S_xx": -a[2] + 2.0 * a[3] + a[7] / s3 + 4.0 / 3.0,
        "S_yy": -a[2] - 2.0 * a[3] + a[7] / s3 + 4.0 / 3.0,
        "S_zz": 2.0 * a[2] - 2.0 * a[7] / s3 + 4.0 / 3.0,
    }


def spin_product_expectations(state: BlochState):
    """<O_a (x) O_b> for all pairs of the nine d=3 spin operators.

    Returns (names, 9x9 matrix) for a bipartite 3x3 state.  Each operator
    is expanded in the Gell-Mann basis (including lambda0), and the
    tensor-product expectation follows from the (a, b, c) parameters.
    """
    if not state.is_bipartite or state.dims != [3, 3]:
        raise ValueError("spin product expectations require a 3x3 bipartite state")
    basis = gell_mann_basis(3)
    ops = spin_operator_set().as_dict()
    names = list(ops)
    coeff = np.array([operator_to_bloch(ops[n], basis) for n in names])  # (9, 9)
    # <lambda_i (x) lambda_j> table, index 0 = lambda0
    table = np.zeros((9, 9))
    table[0, 0] = 2.0 / 3.0
    table[1:, 0] = np.sqrt(2.0 / 3.0) * 2.0 * state.a
    table[0, 1:] = np.sqrt(2.0 / 3.0) * 2.0 * state.b
    table[1:, 1:] = 4.0 * state.c
    return names, coeff @ table @ coeff.T
