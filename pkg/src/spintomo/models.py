"""Decay-channel measurement operators.

Each physical decay channel is represented by a Kraus operator K and the
measurement operator F = K^dag K, both diagonal in the frame aligned with
the analysed daughter.  F is positive semi-definite with unit trace (its
diagonal entries are branching weights of the parent spin projections);
channels with a spin-0 admixture may instead carry part of the weight in
`scalar_weight`, an isotropic component insensitive to the parent spin.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

PROJECTIVE_TOL = 1e-12

# Z -> charged-lepton couplings: axial and vector values, from which
# c_L = (c_V + c_A)/2 and c_R = (c_V - c_A)/2.
Z_SM_AXIAL = -0.5064
Z_SM_VECTOR = -0.0398


@dataclass(frozen=True)
class MeasurementModel:
    """A decay channel's diagonal Kraus/measurement operator pair."""

    name: str
    dim: int
    kraus: np.ndarray
    F: np.ndarray
    projective: bool
    frame_flip: bool = False    # evaluate symbols at (pi - theta, phi + pi)
    scalar_weight: float = 0.0  # spin-0 channel weight, isotropic
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        F = np.asarray(self.F, dtype=complex)
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "kraus", np.asarray(self.kraus, dtype=complex))
        if F.shape != (self.dim, self.dim):
            raise ValueError("F shape does not match dim")
        diag = np.diag(np.diag(F))
        if np.max(np.abs(F - diag)) > 1e-12:
            raise ValueError("F must be diagonal in the construction frame")
        fd = np.diag(F).real
        if fd.min() < -1e-12:
            raise ValueError("F must be positive semi-definite")
        total = fd.sum() + self.scalar_weight
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"F weights sum to {total}, expected 1")

    @property
    def f_diagonal(self):
        return np.diag(self.F).real


def _is_projective(fd):
    return bool(np.max(np.abs(fd * fd - fd)) < PROJECTIVE_TOL)


def model_spin_half(kappa: float) -> MeasurementModel:
    """Spin-half daughter-emission POVM element F = (I + kappa sigma_3)/2.

    kappa is the spin analysing power of the probe daughter; the partner
    element of the pair is model_spin_half(-kappa).  Projective only for
    |kappa| = 1.
    """
    if not -1.0 <= kappa <= 1.0:
        raise ValueError(f"spin analysing power must lie in [-1, 1], got {kappa}")
    fd = np.array([(1.0 + kappa) / 2.0, (1.0 - kappa) / 2.0])
    F = np.diag(fd).astype(complex)
    return MeasurementModel(
        name=f"spin-half(kappa={kappa:g})", dim=2,
        kraus=np.diag(np.sqrt(fd)).astype(complex), F=F,
        projective=_is_projective(fd), params={"kappa": kappa})


def model_W_massless(charge: str) -> MeasurementModel:
    """W boson decay to a massless charged lepton: a projective measurement.

    The W+ measures spin +1 along the positive-lepton direction.  The W-
    measures spin -1 along the negative-lepton direction, represented by
    the same operator plus the frame substitution
    theta -> pi - theta, phi -> phi + pi.
    """
    if charge not in ("+", "-"):
        raise ValueError("charge must be '+' or '-'")
    fd = np.array([1.0, 0.0, 0.0])
    F = np.diag(fd).astype(complex)
    return MeasurementModel(
        name=f"W{charge}", dim=3, kraus=F.copy(), F=F, projective=True,
        frame_flip=(charge == "-"), params={"charge": charge})


def model_W_massive(v: float, scalar_component: bool = False,
                    charge: str = "+") -> MeasurementModel:
    """W decay to a charged lepton of non-negligible mass.

    v is the lepton speed in the W rest frame.  The spin-1 block is
    diag((1+v)/2, (1-v)/4, 0); with scalar_component=True the remaining
    weight (1-v)/4 sits in an isotropic spin-0 channel, otherwise
    (default) the block is rescaled by f_v = 4/(3+v) to unit trace so
    that only spin-1 states are reconstructed.  At v = 1 both conventions
    reduce to the massless projective operator.
    """
    if not 0.0 < v <= 1.0:
        raise ValueError(f"lepton speed must lie in (0, 1], got {v}")
    if charge not in ("+", "-"):
        raise ValueError("charge must be '+' or '-'")
    fd = np.array([(1.0 + v) / 2.0, (1.0 - v) / 4.0, 0.0])
    scalar_weight = (1.0 - v) / 4.0
    if not scalar_component:
        fd = fd * (4.0 / (3.0 + v))
        scalar_weight = 0.0
    F = np.diag(fd).astype(complex)
    return MeasurementModel(
        name=f"W{charge}massive(v={v:g})", dim=3,
        kraus=np.diag(np.sqrt(fd)).astype(complex), F=F,
        projective=_is_projective(fd) and scalar_weight == 0.0,
        frame_flip=(charge == "-"), scalar_weight=scalar_weight,
        params={"v": v, "scalar_component": scalar_component, "charge": charge})


def model_Z_dilepton(c_left: float, c_right: float) -> MeasurementModel:
    """Z decay to a charged-lepton pair, analysed along the l+ direction.

    F = diag(|cR|^2, 0, |cL|^2) / (|cR|^2 + |cL|^2).  The inner-product
    matrix of its symbols is singular when |cL| = |cR| (the photon-like
    case), which is flagged downstream rather than raised here.
    """
    norm = c_left * c_left + c_right * c_right
    if norm == 0.0:
        raise ValueError("couplings (c_left, c_right) must not both vanish")
    fd = np.array([c_right * c_right, 0.0, c_left * c_left]) / norm
    kraus = 1.0j * np.diag([c_right, 0.0, c_left]) / np.sqrt(norm)
    return MeasurementModel(
        name=f"Z(cL={c_left:g},cR={c_right:g})", dim=3,
        kraus=kraus.astype(complex), F=np.diag(fd).astype(complex),
        projective=_is_projective(fd),
        params={"c_left": c_left, "c_right": c_right})


def model_Z_sm() -> MeasurementModel:
    c_left = (Z_SM_VECTOR + Z_SM_AXIAL) / 2.0
    c_right = (Z_SM_VECTOR - Z_SM_AXIAL) / 2.0
    model = model_Z_dilepton(c_left, c_right)
    return MeasurementModel(
        name="Z:SM", dim=3, kraus=model.kraus, F=model.F,
        projective=model.projective, params=model.params)


def model_projector(d: int, level: int) -> MeasurementModel:
    """Rank-1 projector onto the level-th S_z eigenstate (0 = highest)."""
    if d < 2:
        raise ValueError("projector requires dimension >= 2")
    if not 0 <= level < d:
        raise ValueError(f"level must lie in [0, {d})")
    fd = np.zeros(d)
    fd[level] = 1.0
    F = np.diag(fd).astype(complex)
    return MeasurementModel(name=f"projector(d={d},m={level})", dim=d,
                            kraus=F.copy(), F=F, projective=True,
                            params={"level": level})


@dataclass
class PovmReport:
    """Diagnostic summary of a candidate POVM {F_l}."""

    dim: int
    sum_deviation: float      # max |sum_l F_l - I|
    complete: bool            # deviation below tolerance
    psd_ok: list              # per-model PSD flag
    min_eigenvalue: float

    def __str__(self):
        status = "complete" if self.complete else "incomplete"
        return (f"POVM check (d={self.dim}): {status}, "
                f"max |sum F - I| = {self.sum_deviation:.3e}, "
                f"min eigenvalue = {self.min_eigenvalue:.3e}")


def validate_povm(models, tol=1e-12) -> PovmReport:
    """Report completeness (sum_l F_l = I) and positivity of a model set.

    Diagnostic only: an incomplete set (e.g. a single channel out of the
    full POVM) is reported, not raised.
    """
    models = list(models)
    if not models:
        raise ValueError("validate_povm requires at least one model")
    d = models[0].dim
    if any(m.dim != d for m in models):
        raise ValueError("all models must share the same dimension")
    total = np.zeros((d, d), dtype=complex)
    psd_ok, min_eig = [], np.inf
    for m in models:
        total += m.F
        eig = np.diag(m.F).real
        psd_ok.append(bool(eig.min() >= -tol))
        min_eig = min(min_eig, float(eig.min()))
    dev = float(np.max(np.abs(total - np.eye(d))))
    return PovmReport(dim=d, sum_deviation=dev, complete=dev <= tol,
                      psd_ok=psd_ok, min_eigenvalue=min_eig)


# ---------------------------------------------------------------------------
# Named channel presets, addressable from the CLI and config files.


def _parse_kv(text):
    out = {}
    for part in text.split(","):
        if not part:
            continue
        key, _, val = part.partition("=")
        out[key.strip()] = float(val)
    return out


def preset(spec: str) -> MeasurementModel:
    """Resolve a channel preset string.

    Examples: "W+", "W-", "W+massive:v=0.75", "Z:SM",
    "Z:cL=-0.273,cR=0.233", "tophalf:kappa=1.0", "bquark:kappa=-0.41",
    "spin-half:kappa=0.5".
    """
    head, _, tail = spec.partition(":")
    head = head.strip()
    if head in ("W+", "W-"):
        return model_W_massless(head[-1])
    if head in ("W+massive", "W-massive"):
        kv = _parse_kv(tail)
        if "v" not in kv:
            raise ValueError(f"preset '{spec}' requires v=...")
        return model_W_massive(kv["v"], scalar_component=bool(kv.get("scalar", 0)),
                               charge=head[1])
    if head == "Z":
        if tail.strip().upper() == "SM":
            return model_Z_sm()
        kv = _parse_kv(tail)
        if "cL" not in kv or "cR" not in kv:
            raise ValueError(f"preset '{spec}' requires cL=...,cR=...")
        return model_Z_dilepton(kv["cL"], kv["cR"])
    if head in ("tophalf", "bquark", "spin-half"):
        kv = _parse_kv(tail)
        default = {"tophalf": 1.0, "bquark": -0.41}.get(head)
        kappa = kv.get("kappa", default)
        if kappa is None:
            raise ValueError(f"preset '{spec}' requires kappa=...")
        return model_spin_half(kappa)
    raise ValueError(f"unknown channel preset '{spec}'")
