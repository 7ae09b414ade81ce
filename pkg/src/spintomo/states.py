"""Analytic reference states for closed-loop validation.

Each state is returned as a BlochState; the pure kets are decomposed via
the Gell-Mann trace projections so every reference reproduces its
defining matrix exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BlochState


@dataclass(frozen=True)
class ReferenceState:
    name: str
    state: BlochState


def _ket_state(ket, dims):
    ket = np.asarray(ket, dtype=complex)
    ket = ket / np.linalg.norm(ket)
    rho = np.outer(ket, ket.conj())
    return BlochState.from_density(rho, dims)


def _basis_kets(d=3):
    return np.eye(d)


def singlet3() -> BlochState:
    """Scalar-decay qutrit pair (|+->  - |00> + |-+>)/sqrt(3)."""
    e = _basis_kets()
    ket = (np.kron(e[0], e[2]) - np.kron(e[1], e[1]) + np.kron(e[2], e[0]))
    return _ket_state(ket, [3, 3])


def bell2_qutrit() -> BlochState:
    """Qubit-pair-like qutrit state (|--> + |++>)/sqrt(2)."""
    e = _basis_kets()
    ket = np.kron(e[2], e[2]) + np.kron(e[0], e[0])
    return _ket_state(ket, [3, 3])


def separable_pp() -> BlochState:
    """Product state |+>|+> of two qutrits."""
    e = _basis_kets()
    return _ket_state(np.kron(e[0], e[0]), [3, 3])


def maxmixed9() -> BlochState:
    """Maximally mixed state of the qutrit pair."""
    n = 8
    return BlochState(dims=[3, 3], a=np.zeros(n), b=np.zeros(n), c=np.zeros((n, n)))


def bell_phi_plus_qubit() -> BlochState:
    """Maximally entangled qubit pair with c = diag(1, 1, -1)/4."""
    e = np.eye(2)
    ket = np.kron(e[0], e[1]) + np.kron(e[1], e[0])
    return _ket_state(ket, [2, 2])


def werner(alpha: float) -> BlochState:
    """Qutrit-pair mixture alpha * singlet + (1 - alpha) * I/9."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"mixing fraction must lie in [0, 1], got {alpha}")
    s = singlet3()
    return BlochState(dims=[3, 3], a=alpha * s.a, b=alpha * s.b, c=alpha * s.c)


def werner_qubit(p: float) -> BlochState:
    """Qubit-pair mixture p * bell_phi_plus_qubit + (1 - p) * I/4."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing fraction must lie in [0, 1], got {p}")
    s = bell_phi_plus_qubit()
    return BlochState(dims=[2, 2], a=p * s.a, b=p * s.b, c=p * s.c)


_PARAMETRIC = {"werner": (werner, "alpha"), "werner_qubit": (werner_qubit, "p")}
_FIXED = {
    "singlet3": singlet3,
    "bell2_qutrit": bell2_qutrit,
    "separable_pp": separable_pp,
    "maxmixed9": maxmixed9,
    "bell_phi_plus_qubit": bell_phi_plus_qubit,
}

REFERENCE_NAMES = tuple(_FIXED) + tuple(_PARAMETRIC)


def reference_state(spec: str) -> ReferenceState:
    """Resolve a reference state by name, e.g. "singlet3" or "werner:alpha=0.5"."""
    head, _, tail = spec.partition(":")
    head = head.strip()
    if head in _FIXED:
        if tail:
            raise ValueError(f"state '{head}' takes no parameters")
        return ReferenceState(name=head, state=_FIXED[head]())
    if head in _PARAMETRIC:
        fn, pname = _PARAMETRIC[head]
        kv = {}
        for part in tail.split(","):
            if not part:
                continue
            key, _, val = part.partition("=")
            kv[key.strip()] = float(val)
        if pname not in kv:
            raise ValueError(f"state '{head}' requires {pname}=...")
        return ReferenceState(name=f"{head}:{pname}={kv[pname]:g}", state=fn(kv[pname]))
    raise ValueError(f"unknown reference state '{spec}'; "
                     f"known: {', '.join(REFERENCE_NAMES)}")
