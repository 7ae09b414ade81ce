"""Density-matrix reconstruction from decay-direction ensembles.

Each Gell-Mann parameter is a spherical average of the dual P symbols
over the observed decay directions:

    a_i = <p_i(n)> / 2
    c_ij = <p_i(n1) p_j(n2)> / 4

For identical parents the estimators are averaged over label exchange,
which makes the output exactly exchange-symmetric (a = b, c = c^T).

Accumulation is single-pass with Kahan-compensated sums, so ensembles
may be sharded, accumulated in any order and merged bit-stably.
Standard errors are naive per-parameter sample errors of the mean;
weighted events use the effective count (sum w)^2 / sum w^2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .basis import BlochState
from .events import EventArray
from .models import MeasurementModel
from .symbols import SymbolSet, build_symbols

_BATCH = 1 << 17


def _kahan_add(total, comp, value):
    y = value - comp
    t = total + y
    return t, (t - total) - y


class _KahanSum:
    """Compensated accumulator for a fixed-shape array of sums."""

    def __init__(self, shape):
        self.total = np.zeros(shape)
        self.comp = np.zeros(shape)

    def add(self, value):
        self.total, self.comp = _kahan_add(self.total, self.comp, value)

    def merge(self, other):
        out = _KahanSum(self.total.shape)
        out.total = self.total + other.total
        out.comp = self.comp + other.comp
        return out

    @property
    def value(self):
        return self.total


@dataclass
class Accumulator:
    """Mergeable streaming sums for one reconstruction configuration."""

    mode: str          # "single" | "bipartite" | "identical"
    dims: tuple

    def __post_init__(self):
        if self.mode not in ("single", "bipartite", "identical"):
            raise ValueError(f"unknown accumulator mode '{self.mode}'")
        self.dims = tuple(int(d) for d in self.dims)
        na = self.dims[0] ** 2 - 1
        self.n = 0
        self._w = _KahanSum(())
        self._w2 = _KahanSum(())
        self._a = _KahanSum(na)
        self._a2 = _KahanSum(na)
        if self.mode != "single":
            nb = self.dims[1] ** 2 - 1
            self._b = _KahanSum(nb)
            self._b2 = _KahanSum(nb)
            self._c = _KahanSum((na, nb))
            self._c2 = _KahanSum((na, nb))

    def config(self):
        return (self.mode, self.dims)

    def add(self, p1, p2=None, weight=None):
        """Accumulate a batch of P-symbol evaluations (one row per event)."""
        p1 = np.asarray(p1, dtype=float)
        n = p1.shape[0]
        w = np.ones(n) if weight is None else np.asarray(weight, dtype=float)
        self.n += n
        self._w.add(w.sum())
        self._w2.add((w * w).sum())
        if self.mode == "single":
            xa = 0.5 * p1
            self._a.add((w[:, None] * xa).sum(axis=0))
            self._a2.add((w[:, None] * xa * xa).sum(axis=0))
            return
        if p2 is None:
            raise ValueError(f"{self.mode} accumulation requires both parents")
        p2 = np.asarray(p2, dtype=float)
        if self.mode == "bipartite":
            xa, xb = 0.5 * p1, 0.5 * p2
            self._a.add((w[:, None] * xa).sum(axis=0))
            self._a2.add((w[:, None] * xa * xa).sum(axis=0))
            self._b.add((w[:, None] * xb).sum(axis=0))
            self._b2.add((w[:, None] * xb * xb).sum(axis=0))
            # c_ij terms p1_i p2_j / 4 and their squares, via weighted matmuls
            self._c.add(0.25 * (w[:, None] * p1).T @ p2)
            self._c2.add((1.0 / 16.0) * (w[:, None] * p1 * p1).T @ (p2 * p2))
            return
        # identical parents: average the estimators over label exchange
        xa = 0.25 * (p1 + p2)
        self._a.add((w[:, None] * xa).sum(axis=0))
        self._a2.add((w[:, None] * xa * xa).sum(axis=0))
        self._b.add((w[:, None] * xa).sum(axis=0))
        self._b2.add((w[:, None] * xa * xa).sum(axis=0))
        wp1 = w[:, None] * p1
        wp2 = w[:, None] * p2
        sym = 0.125 * (wp1.T @ p2 + wp2.T @ p1)
        self._c.add(sym)
        g = p1 * p2
        sq = (1.0 / 64.0) * ((w[:, None] * p1 * p1).T @ (p2 * p2)
                             + (w[:, None] * p2 * p2).T @ (p1 * p1)
                             + 2.0 * (w[:, None] * g).T @ g)
        self._c2.add(sq)

    @property
    def n_effective(self):
        sw, sw2 = float(self._w.value), float(self._w2.value)
        return sw * sw / sw2 if sw2 > 0 else 0.0

    def _mean_err(self, s, s2):
        sw = float(self._w.value)
        mean = s.value / sw
        neff = self.n_effective
        var = np.clip(s2.value / sw - mean * mean, 0.0, None)
        err = np.sqrt(var / max(neff - 1.0, 1.0))
        return mean, err

    def result(self):
        """(BlochState, errors_a, errors_b, errors_c) from the sums so far."""
        if self.n == 0:
            raise ValueError("no events accumulated")
        a, ea = self._mean_err(self._a, self._a2)
        if self.mode == "single":
            return BlochState(dims=[self.dims[0]], a=a), ea, None, None
        b, eb = self._mean_err(self._b, self._b2)
        c, ec = self._mean_err(self._c, self._c2)
        if self.mode == "identical":
            # enforce exact symmetry against roundoff in the matmul order
            c = 0.5 * (c + c.T)
            ec = 0.5 * (ec + ec.T)
            a = b = 0.5 * (a + b)
            ea = eb = 0.5 * (ea + eb)
        state = BlochState(dims=list(self.dims), a=a, b=b, c=c)
        return state, ea, eb, ec


def merge(acc1: Accumulator, acc2: Accumulator) -> Accumulator:
    """Combine two accumulators; equivalent to accumulating both streams."""
    if acc1.config() != acc2.config():
        raise ValueError("cannot merge accumulators with different configurations")
    out = Accumulator(mode=acc1.mode, dims=acc1.dims)
    out.n = acc1.n + acc2.n
    for name in ("_w", "_w2", "_a", "_a2"):
        setattr(out, name, getattr(acc1, name).merge(getattr(acc2, name)))
    if acc1.mode != "single":
        for name in ("_b", "_b2", "_c", "_c2"):
            setattr(out, name, getattr(acc1, name).merge(getattr(acc2, name)))
    return out


@dataclass
class ReconstructionResult:
    """Reconstructed Bloch parameters with their standard errors."""

    state: BlochState
    errors_a: np.ndarray
    errors_b: np.ndarray | None
    errors_c: np.ndarray | None
    n_events: int
    n_effective: float
    model_names: list
    symmetrized: bool

    def to_json(self):
        payload = {
            "dims": self.state.dims,
            "a": self.state.a.tolist(),
            "b": None if self.state.b is None else self.state.b.tolist(),
            "c": None if self.state.c is None else self.state.c.tolist(),
            "errors_a": self.errors_a.tolist(),
            "errors_b": None if self.errors_b is None else self.errors_b.tolist(),
            "errors_c": None if self.errors_c is None else self.errors_c.tolist(),
            "n_events": self.n_events,
            "n_effective": self.n_effective,
            "model_names": self.model_names,
            "symmetrized": self.symmetrized,
        }
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        arr = lambda x: None if x is None else np.array(x)
        state = BlochState(dims=d["dims"], a=np.array(d["a"]),
                           b=arr(d["b"]), c=arr(d["c"]))
        return cls(state=state, errors_a=np.array(d["errors_a"]),
                   errors_b=arr(d["errors_b"]), errors_c=arr(d["errors_c"]),
                   n_events=d["n_events"], n_effective=d["n_effective"],
                   model_names=d["model_names"], symmetrized=d["symmetrized"])


def _ready_symbols(model_or_symbols) -> SymbolSet:
    symbols = model_or_symbols
    if isinstance(symbols, MeasurementModel):
        symbols = build_symbols(symbols)
    if symbols.p_coeffs is None:
        from .symbols import p_symbols
        symbols = p_symbols(symbols)
    if not symbols.invertible or symbols.p_coeffs is None:
        raise ValueError(f"reconstruction refused: {symbols.gram_note}")
    return symbols


def _batches(n):
    for start in range(0, n, _BATCH):
        yield start, min(start + _BATCH, n)


def reconstruct_single(events: EventArray, symbols) -> ReconstructionResult:
    """Single-parent tomography: a_i = <p_i>/2 over the ensemble."""
    symbols = _ready_symbols(symbols)
    if events.n == 0:
        raise ValueError("no events to reconstruct from")
    acc = Accumulator(mode="single", dims=(symbols.dim,))
    w = events.weight
    for lo, hi in _batches(events.n):
        p1 = symbols.p_values(events.cos_theta1[lo:hi], events.phi1[lo:hi])
        acc.add(p1, weight=None if w is None else w[lo:hi])
    state, ea, _, _ = acc.result()
    return ReconstructionResult(state=state, errors_a=ea, errors_b=None,
                                errors_c=None, n_events=events.n,
                                n_effective=acc.n_effective,
                                model_names=[symbols.model.name],
                                symmetrized=False)


def _reconstruct_pair(events, symbols_1, symbols_2, mode):
    s1 = _ready_symbols(symbols_1)
    s2 = _ready_symbols(symbols_2)
    if events.n == 0:
        raise ValueError("no events to reconstruct from")
    if not events.is_pair:
        raise ValueError("pair reconstruction requires pair events")
    if mode == "identical" and s1.dim != s2.dim:
        raise ValueError("identical-particle reconstruction requires equal dimensions")
    acc = Accumulator(mode=mode, dims=(s1.dim, s2.dim))
    w = events.weight
    for lo, hi in _batches(events.n):
        p1 = s1.p_values(events.cos_theta1[lo:hi], events.phi1[lo:hi])
        p2 = s2.p_values(events.cos_theta2[lo:hi], events.phi2[lo:hi])
        acc.add(p1, p2, weight=None if w is None else w[lo:hi])
    state, ea, eb, ec = acc.result()
    return ReconstructionResult(state=state, errors_a=ea, errors_b=eb,
                                errors_c=ec, n_events=events.n,
                                n_effective=acc.n_effective,
                                model_names=[s1.model.name, s2.model.name],
                                symmetrized=(mode == "identical"))


def reconstruct_bipartite(events: EventArray, symbols_a, symbols_b):
    """Distinguishable-pair tomography of (a, b, c) in a single pass."""
    return _reconstruct_pair(events, symbols_a, symbols_b, "bipartite")


def reconstruct_identical(events: EventArray, symbols_1, symbols_2):
    """Identical-particle tomography, symmetrised over label exchange.

    The output satisfies a = b and c = c^T exactly by construction and
    is invariant under swapping the parent labels in every event.
    """
    return _reconstruct_pair(events, symbols_1, symbols_2, "identical")
