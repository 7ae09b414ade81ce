"""Relativistic kinematics: boosts, beam bases, four-vector reduction.

Reduces raw event records to the (cos_theta, phi) decay angles consumed
by the tomography estimators.  Four-vectors are numpy arrays ordered
(E, px, py, pz) in GeV.

Per event, a right-handed orthonormal basis {n, r, k} is built in the
pair centre-of-mass frame from the parent-1 direction k and the beam
direction p:

    y = p.k,  rr = sqrt(1 - y^2),  r = (p - y k)/rr,  n = (p x k)/rr

The daughters are then boosted into their parents' rest frames (the
boost is along +-k, leaving n and r unchanged) and angles measured with
x = n, y = r, z = k; phi runs from n towards r.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .events import EventArray
from .lhe import LheLiteEvent, LheParticle

DEGENERATE_R = 1e-8


def four_vector(E, px, py, pz):
    return np.array([E, px, py, pz], dtype=float)


def invariant_mass_sq(p):
    return p[0] * p[0] - p[1] * p[1] - p[2] * p[2] - p[3] * p[3]


def invariant_mass(p):
    m2 = invariant_mass_sq(p)
    return np.sqrt(m2) if m2 >= 0 else -np.sqrt(-m2)


def boost(p, beta):
    """Coordinates of p in a frame moving with velocity beta (3-vector)."""
    beta = np.asarray(beta, dtype=float)
    b2 = float(beta @ beta)
    if b2 >= 1.0:
        raise ValueError("boost velocity must be below the speed of light")
    if b2 == 0.0:
        return np.array(p, dtype=float)
    gamma = 1.0 / np.sqrt(1.0 - b2)
    bp = float(beta @ p[1:])
    E = gamma * (p[0] - bp)
    spatial = p[1:] + ((gamma - 1.0) * bp / b2 - gamma * p[0]) * beta
    return np.concatenate([[E], spatial])


def beta_of(p):
    """Velocity 3-vector of a timelike four-vector."""
    if p[0] <= 0:
        raise ValueError("four-vector has non-positive energy")
    return p[1:] / p[0]


def to_rest_frame(p, parent):
    """Coordinates of p in the rest frame of `parent`."""
    return boost(p, beta_of(parent))


def unit(v):
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("cannot normalise a zero vector")
    return np.asarray(v, dtype=float) / norm


@dataclass(frozen=True)
class BeamBasis:
    n_hat: np.ndarray
    r_hat: np.ndarray
    k_hat: np.ndarray

    def angles_of(self, direction):
        """(cos_theta, phi) of a unit vector in this basis."""
        d = unit(direction)
        cos_theta = float(d @ self.k_hat)
        phi = float(np.arctan2(d @ self.r_hat, d @ self.n_hat)) % (2.0 * np.pi)
        return cos_theta, phi

    def direction(self, cos_theta, phi):
        st = np.sqrt(max(1.0 - cos_theta * cos_theta, 0.0))
        return (st * np.cos(phi) * self.n_hat
                + st * np.sin(phi) * self.r_hat
                + cos_theta * self.k_hat)


def build_beam_basis(parent_dir, beam_dir) -> BeamBasis:
    """Right-handed {n, r, k} basis from CM-frame parent and beam directions.

    Raises for (anti)collinear inputs, where the transverse directions
    are undefined.
    """
    k = unit(parent_dir)
    p = unit(beam_dir)
    y = float(p @ k)
    r2 = 1.0 - y * y
    if r2 < DEGENERATE_R**2:
        raise ValueError("beam and parent directions are collinear; "
                         "basis is degenerate")
    rr = np.sqrt(r2)
    return BeamBasis(n_hat=np.cross(p, k) / rr, r_hat=(p - y * k) / rr, k_hat=k)


# ---------------------------------------------------------------------------
# Channel reduction


@dataclass(frozen=True)
class ChannelConfig:
    """Which parents and probe daughters to pick out of an event record."""

    name: str
    parent1_pdg: int
    parent2_pdg: int
    probe1_pdgs: frozenset
    probe2_pdgs: frozenset
    identical: bool = False
    mass_window: tuple | None = None  # (low, high) on the daughter-pair mass


_LPLUS = frozenset({-11, -13, -15})
_LMINUS = frozenset({11, 13, 15})

CHANNELS = {
    "WW": ChannelConfig("WW", 24, -24, _LPLUS, _LMINUS),
    "ZZ": ChannelConfig("ZZ", 23, 23, _LPLUS, _LPLUS, identical=True),
    "WZ": ChannelConfig("WZ", 24, 23, _LPLUS, _LPLUS),
    "tt": ChannelConfig("tt", 6, -6, _LPLUS, _LMINUS),
}


def channel_config(name: str) -> ChannelConfig:
    try:
        return CHANNELS[name]
    except KeyError:
        raise ValueError(f"unknown channel '{name}'; known: {', '.join(CHANNELS)}")


class ReductionError(ValueError):
    pass


def _find_parents(event: LheLiteEvent, config: ChannelConfig):
    """Locate the two parents by pdg id and mother links.

    A parent is any particle with matching pdg id that has final-state
    daughters; its four-vector is the sum of the daughters' (no
    resonance refit).
    """
    candidates = []
    for idx, part in enumerate(event.particles, start=1):
        if part.pdg not in (config.parent1_pdg, config.parent2_pdg):
            continue
        daughters = event.daughters_of(idx)
        if daughters:
            candidates.append((part.pdg, daughters))
    first = [c for c in candidates if c[0] == config.parent1_pdg]
    if config.parent1_pdg == config.parent2_pdg:
        if len(first) != 2:
            raise ReductionError(
                f"event at line {event.line_number}: expected two "
                f"pdg {config.parent1_pdg} parents, found {len(first)}")
        return first[0][1], first[1][1]
    second = [c for c in candidates if c[0] == config.parent2_pdg]
    if len(first) != 1 or len(second) != 1:
        raise ReductionError(
            f"event at line {event.line_number}: expected one parent each of "
            f"pdg {config.parent1_pdg} and {config.parent2_pdg}, found "
            f"{len(first)} and {len(second)}")
    return first[0][1], second[0][1]


def _probe_of(daughters, probe_pdgs, event, label):
    probes = [p for p in daughters if p.pdg in probe_pdgs]
    if len(probes) != 1:
        raise ReductionError(
            f"event at line {event.line_number}: expected one probe daughter "
            f"for parent {label}, found {len(probes)}")
    return probes[0]


def reduce_event(event: LheLiteEvent, config: ChannelConfig, beam_dir=(0, 0, 1)):
    """Reduce one event to ((cos_theta1, phi1), (cos_theta2, phi2)).

    Returns None if the event fails the optional mass window.  Raises
    ReductionError when the channel pattern cannot be found or a parent
    candidate is not timelike.
    """
    d1, d2 = _find_parents(event, config)
    parents, probes = [], []
    for label, daughters, probe_pdgs in (
            ("1", d1, config.probe1_pdgs), ("2", d2, config.probe2_pdgs)):
        p4 = np.sum([p.p4 for p in daughters], axis=0)
        m2 = invariant_mass_sq(p4)
        if m2 <= 0:
            raise ReductionError(
                f"event at line {event.line_number}: spacelike parent "
                f"candidate {label} (m^2 = {m2:.3g})")
        if config.mass_window is not None:
            lo, hi = config.mass_window
            if not lo <= np.sqrt(m2) <= hi:
                return None
        parents.append(p4)
        probes.append(_probe_of(daughters, probe_pdgs, event, label).p4)

    beta_cm = beta_of(parents[0] + parents[1])
    p1_cm = boost(parents[0], beta_cm)
    p2_cm = boost(parents[1], beta_cm)
    beam_cm = boost(four_vector(1.0, *unit(beam_dir)), beta_cm)
    basis = build_beam_basis(p1_cm[1:], beam_cm[1:])

    angles = []
    for parent_cm, probe in zip((p1_cm, p2_cm), probes):
        probe_cm = boost(probe, beta_cm)
        probe_rest = boost(probe_cm, beta_of(parent_cm))
        angles.append(basis.angles_of(probe_rest[1:]))
    return angles[0], angles[1]


def reduce_to_angles(events, config: ChannelConfig, beam_dir=(0, 0, 1),
                     strict=True):
    """Reduce an event stream to an EventArray of decay angles.

    Returns (EventArray, report) where report counts reduced, skipped
    (mass window) and failed events.  strict=False downgrades pattern
    failures to skips.
    """
    ct1, ph1, ct2, ph2 = [], [], [], []
    report = {"reduced": 0, "outside_mass_window": 0, "failed": 0}
    for event in events:
        try:
            result = reduce_event(event, config, beam_dir=beam_dir)
        except ReductionError:
            if strict:
                raise
            report["failed"] += 1
            continue
        if result is None:
            report["outside_mass_window"] += 1
            continue
        (c1, f1), (c2, f2) = result
        ct1.append(c1)
        ph1.append(f1)
        ct2.append(c2)
        ph2.append(f2)
        report["reduced"] += 1
    if not ct1:
        raise ReductionError("no events survived reduction")
    arr = EventArray(cos_theta1=np.array(ct1), phi1=np.array(ph1),
                     cos_theta2=np.array(ct2), phi2=np.array(ph2))
    return arr, report


# ---------------------------------------------------------------------------
# Synthesis: embed known angles into four-vectors (inverse of reduce_event)


def _partner_pdg(parent_pdg, probe_pdg):
    # charged-current decays pair the lepton with its neutrino
    if abs(parent_pdg) == 24:
        return -probe_pdg + (1 if probe_pdg < 0 else -1)
    return -probe_pdg


def embed_event(angles1, angles2, config: ChannelConfig, rng,
                masses=(80.4, 80.4), beam_dir=(0, 0, 1),
                momentum_scale=200.0, line_number=0) -> LheLiteEvent:
    """Build a synthetic two-parent event whose reduction returns the angles.

    Parent lab momenta are drawn at random (non-collinear with the beam),
    each parent decays to a massless probe/partner pair back-to-back in
    its rest frame along the requested direction.
    """
    while True:
        dirs = rng.normal(size=(2, 3))
        if all(np.linalg.norm(v) > 1e-3 for v in dirs):
            dirs = [unit(v) for v in dirs]
            break
    moms = momentum_scale * (0.2 + rng.random(2))
    parents_lab = [four_vector(np.hypot(m, p), *(p * d))
                   for m, p, d in zip(masses, moms, dirs)]

    beta_cm = beta_of(parents_lab[0] + parents_lab[1])
    parents_cm = [boost(p, beta_cm) for p in parents_lab]
    beam_cm = boost(four_vector(1.0, *unit(beam_dir)), beta_cm)
    basis = build_beam_basis(parents_cm[0][1:], beam_cm[1:])

    probe_pdg = {1: sorted(config.probe1_pdgs)[0], 2: sorted(config.probe2_pdgs)[0]}
    parent_pdg = {1: config.parent1_pdg, 2: config.parent2_pdg}
    particles = []
    for slot, (m, p_lab) in enumerate(zip(masses, parents_lab), start=1):
        particles.append(LheParticle(
            pdg=parent_pdg[slot], status=2, mother1=0, mother2=0,
            color1=0, color2=0, px=p_lab[1], py=p_lab[2], pz=p_lab[3],
            E=p_lab[0], mass=m, lifetime=0.0, spin=0.0))
    for slot, (m, p_cm, (ct, phi)) in enumerate(
            zip(masses, parents_cm, (angles1, angles2)), start=1):
        direction = basis.direction(ct, phi)
        e_star = m / 2.0
        probe = probe_pdg[slot]
        partner = _partner_pdg(parent_pdg[slot], probe)
        for sign, pdg in ((+1.0, probe), (-1.0, partner)):
            rest = four_vector(e_star, *(sign * e_star * direction))
            cm = boost(rest, -beta_of(p_cm))
            lab = boost(cm, -beta_cm)
            particles.append(LheParticle(
                pdg=pdg, status=1, mother1=slot, mother2=slot,
                color1=0, color2=0, px=lab[1], py=lab[2], pz=lab[3],
                E=lab[0], mass=0.0, lifetime=0.0, spin=0.0))
    return LheLiteEvent(particles=particles, line_number=line_number)


def embed_events(events: EventArray, config: ChannelConfig, seed,
                 masses=(80.4, 80.4), beam_dir=(0, 0, 1)):
    """Embed a whole EventArray; yields LheLiteEvent records."""
    rng = np.random.default_rng(seed)
    for i in range(events.n):
        yield embed_event((events.cos_theta1[i], events.phi1[i]),
                          (events.cos_theta2[i], events.phi2[i]),
                          config, rng, masses=masses, beam_dir=beam_dir,
                          line_number=i)
