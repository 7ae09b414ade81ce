"""Synthetic decay-direction ensembles for a given density matrix.

The emission probability density over daughter directions is

    p(n) = (d / 4 pi) (1/d + sum_i a_i q_i(n))                  (single)
    p(n1, n2) = (d1 d2 / (4 pi)^2) (1/(d1 d2) + a.qA/d2 + b.qB/d1
                + qA . c . qB)                                   (pair)

in terms of the measurement model's Q symbols, and is bounded by the
constant d/(4 pi) per parent, so plain rejection sampling against a
uniform proposal is exact with acceptance rate >= 1/d per parent.

The generator is the counter-based 64-bit Philox; workers own spawned
substreams and the output is deterministic for a fixed (seed, workers).
"""

from __future__ import annotations

import numpy as np

from .basis import BlochState
from .events import EventArray, concatenate
from .models import MeasurementModel
from .symbols import SymbolSet, q_symbols

_CHUNK = 1 << 16


def _ensure_symbols(model_or_symbols):
    if isinstance(model_or_symbols, MeasurementModel):
        return q_symbols(model_or_symbols)
    return model_or_symbols


def _check_state(state: BlochState, dims):
    if state.dims != dims:
        raise ValueError(f"state dims {state.dims} do not match models {dims}")
    ok, eig, reasons = state.validity()
    if not ok:
        raise ValueError("cannot sample from an invalid density matrix: "
                         + "; ".join(reasons))


def pdf_single(state: BlochState, symbols, cos_theta, phi):
    """Emission density over (cos_theta, phi), normalised to unit integral."""
    q = symbols.q_values(cos_theta, phi)
    d = state.dims[0]
    return (d / (4.0 * np.pi)) * (1.0 / d + q @ state.a)


def pdf_bipartite(state: BlochState, symbols_a, symbols_b,
                  cos_theta1, phi1, cos_theta2, phi2):
    """Joint emission density over the two daughter directions."""
    qa = symbols_a.q_values(cos_theta1, phi1)
    qb = symbols_b.q_values(cos_theta2, phi2)
    d1, d2 = state.dims
    core = (1.0 / (d1 * d2)
            + (qa @ state.a) / d2
            + (qb @ state.b) / d1
            + ((qa @ state.c) * qb).sum(axis=1))
    return (d1 * d2 / (4.0 * np.pi) ** 2) * core


def _sample_single_stream(state, symbols, n, rng):
    d = state.dims[0]
    a = state.a
    ct_out = np.empty(n)
    ph_out = np.empty(n)
    got = proposals = 0
    while got < n:
        u = rng.random((_CHUNK, 3))
        ct = 2.0 * u[:, 0] - 1.0
        ph = 2.0 * np.pi * u[:, 1]
        accept_prob = 1.0 / d + symbols.q_values(ct, ph) @ a
        keep = u[:, 2] < accept_prob
        take = min(int(keep.sum()), n - got)
        idx = np.flatnonzero(keep)[:take]
        ct_out[got:got + take] = ct[idx]
        ph_out[got:got + take] = ph[idx]
        got += take
        # count only proposals consumed up to the n-th acceptance
        proposals += int(idx[-1]) + 1 if got == n and take > 0 else _CHUNK
    return ct_out, ph_out, proposals


def _sample_pair_stream(state, symbols_a, symbols_b, n, rng):
    d1, d2 = state.dims
    a, b, c = state.a, state.b, state.c
    out = [np.empty(n) for _ in range(4)]
    got = proposals = 0
    while got < n:
        u = rng.random((_CHUNK, 5))
        ct1 = 2.0 * u[:, 0] - 1.0
        ph1 = 2.0 * np.pi * u[:, 1]
        ct2 = 2.0 * u[:, 2] - 1.0
        ph2 = 2.0 * np.pi * u[:, 3]
        qa = symbols_a.q_values(ct1, ph1)
        qb = symbols_b.q_values(ct2, ph2)
        accept_prob = (1.0 / (d1 * d2) + (qa @ a) / d2 + (qb @ b) / d1
                       + ((qa @ c) * qb).sum(axis=1))
        keep = u[:, 4] < accept_prob
        take = min(int(keep.sum()), n - got)
        idx = np.flatnonzero(keep)[:take]
        for col, vals in zip(out, (ct1, ph1, ct2, ph2)):
            col[got:got + take] = vals[idx]
        got += take
        proposals += int(idx[-1]) + 1 if got == n and take > 0 else _CHUNK
    return out, proposals


def _worker_rngs(seed, workers):
    return [np.random.Generator(np.random.Philox(key=ss.generate_state(2, np.uint64)))
            for ss in np.random.SeedSequence(seed).spawn(workers)]


def _split_counts(n, workers):
    base, extra = divmod(n, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def sample_single(state: BlochState, model, n: int, seed: int,
                  workers: int = 1, return_stats: bool = False):
    """Draw n decay directions from a single-parent density matrix.

    Identical (seed, workers) reproduce the stream exactly; events are
    ordered worker-then-index.
    """
    symbols = _ensure_symbols(model)
    _check_state(state, [symbols.dim])
    if n <= 0:
        raise ValueError("n must be positive")
    parts, proposals = [], 0
    for rng, count in zip(_worker_rngs(seed, workers), _split_counts(n, workers)):
        if count == 0:
            continue
        ct, ph, props = _sample_single_stream(state, symbols, count, rng)
        parts.append(EventArray(cos_theta1=ct, phi1=ph))
        proposals += props
    events = concatenate(parts)
    if return_stats:
        return events, {"proposals": proposals, "acceptance": n / proposals}
    return events


def sample_bipartite(state: BlochState, model_a, model_b, n: int, seed: int,
                     workers: int = 1, return_stats: bool = False):
    """Draw n joint decay-direction pairs from a bipartite density matrix."""
    symbols_a = _ensure_symbols(model_a)
    symbols_b = _ensure_symbols(model_b)
    _check_state(state, [symbols_a.dim, symbols_b.dim])
    if n <= 0:
        raise ValueError("n must be positive")
    parts, proposals = [], 0
    for rng, count in zip(_worker_rngs(seed, workers), _split_counts(n, workers)):
        if count == 0:
            continue
        (ct1, ph1, ct2, ph2), props = _sample_pair_stream(
            state, symbols_a, symbols_b, count, rng)
        parts.append(EventArray(cos_theta1=ct1, phi1=ph1,
                                cos_theta2=ct2, phi2=ph2))
        proposals += props
    events = concatenate(parts)
    if return_stats:
        return events, {"proposals": proposals, "acceptance": n / proposals}
    return events


def marginal_cos_theta(state: BlochState, symbols):
    """Exact marginal density of cos(theta) as a numpy Polynomial.

    Averaging the Q symbols over phi leaves a polynomial in cos(theta),
    so the marginal (and its CDF) are exact closed forms; useful as a
    distribution oracle for goodness-of-fit tests.
    """
    d = symbols.dim
    # exact phi average on the trapezoid nodes, polynomial fit in cos(theta)
    nodes = np.linspace(-0.95, 0.95, 2 * d + 1)
    phis = 2.0 * np.pi * np.arange(4 * d + 1) / (4 * d + 1)
    vals = np.empty(len(nodes))
    for i, c in enumerate(nodes):
        ct = np.full(len(phis), c)
        q = symbols.q_values(ct, phis)
        vals[i] = np.mean(1.0 / d + q @ state.a) * (d / 2.0)
    poly = np.polynomial.Polynomial.fit(nodes, vals, deg=d - 1).convert()
    return poly


def marginal_cos_theta_cdf(state: BlochState, symbols):
    """CDF of cos(theta) under the single-parent emission density."""
    pdf = marginal_cos_theta(state, symbols)
    cdf = pdf.integ()
    lo = cdf(-1.0)
    norm = cdf(1.0) - lo

    def evaluate(c):
        return (cdf(np.asarray(c, dtype=float)) - lo) / norm

    return evaluate
