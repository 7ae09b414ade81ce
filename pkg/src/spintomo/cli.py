"""Command-line pipeline: spin-tomo <subcommand>.

One verb per stage: symbols, generate, reduce, reconstruct, observables,
table2, bell-scan.  Numeric CSV output carries 12 significant digits;
reports are JSON.  Every run is reproducible from its arguments and
seed; timestamps appear only in metadata sidecars.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from datetime import datetime, timezone

import numpy as np

from . import events as ev
from .basis import BlochState
from .kinematics import channel_config, reduce_to_angles
from .lhe import parse_lhe_lite
from .models import preset
from .observables import (ObservableReport, cglmp_max, concurrence_bound,
                          diagnostics)
from .sampling import sample_bipartite, sample_single
from .states import reference_state
from .symbols import GOLDEN_CASES, build_symbols, golden_tables
from .tomography import (ReconstructionResult, reconstruct_bipartite,
                         reconstruct_identical, reconstruct_single)

FMT = "%.12g"


def _models_arg(text):
    names = [m.strip() for m in text.split(",") if m.strip()]
    if len(names) not in (1, 2):
        raise ValueError("--models takes one or two comma-separated presets")
    return names


def _write_csv(path, header, rows):
    out = open(path, "w", newline="") if path else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(header)
        for row in rows:
            writer.writerow([FMT % x if isinstance(x, float) else x for x in row])
    finally:
        if path:
            out.close()


def cmd_symbols(args):
    if args.case:
        table = golden_tables(args.case, kappa=args.kappa, v=args.v,
                              c_left=args.cL, c_right=args.cR,
                              scalar_component=args.scalar)
        q_values, p_values = table.q_values, table.p_values
        n_sym = table.n_symbols
        coeffs = None
    else:
        symbols = build_symbols(preset(args.model))
        if not symbols.invertible:
            raise ValueError(symbols.gram_note)
        q_values, p_values = symbols.q_values, symbols.p_values
        n_sym = symbols.n_symbols
        coeffs = symbols
    thetas = np.linspace(0.0, np.pi, args.grid)
    phis = np.linspace(0.0, 2.0 * np.pi, args.grid, endpoint=False)
    tg = np.repeat(thetas, args.grid)
    pg = np.tile(phis, args.grid)
    q = q_values(np.cos(tg), pg)
    p = p_values(np.cos(tg), pg)
    header = (["theta", "phi"] + [f"q_{i + 1}" for i in range(n_sym)]
              + [f"p_{i + 1}" for i in range(n_sym)])
    rows = ([float(tg[k]), float(pg[k])]
            + [float(x) for x in q[k]] + [float(x) for x in p[k]]
            for k in range(len(tg)))
    _write_csv(args.out, header, rows)
    if args.coeffs:
        if coeffs is None:
            raise ValueError("coefficient export requires --model (numeric path)")
        payload = {"q": coeffs.coefficient_table("q"),
                   "p": coeffs.coefficient_table("p")}
        with open(args.coeffs, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
    return 0


def cmd_generate(args):
    ref = reference_state(args.state)
    models = [preset(m) for m in _models_arg(args.models)]
    if len(models) == 2:
        sample = sample_bipartite(ref.state, models[0], models[1], args.n,
                                  args.seed, workers=args.threads)
    else:
        sample = sample_single(ref.state, models[0], args.n, args.seed,
                               workers=args.threads)
    if args.csv:
        ev.write_csv(sample, args.out)
    else:
        ev.write_jsonl(sample, args.out)
    ev.write_metadata(args.out, {
        "state": ref.name,
        "models": [m.name for m in models],
        "n": args.n,
        "seed": args.seed,
        "threads": args.threads,
        "generated_at": datetime.now(timezone.utc).isoformat(),
    })
    return 0


def cmd_reduce(args):
    config = channel_config(args.channel)
    if args.mass_window:
        lo, hi = (float(x) for x in args.mass_window.split(","))
        config = type(config)(**{**config.__dict__, "mass_window": (lo, hi)})
    beam = {"+z": (0, 0, 1), "-z": (0, 0, -1)}[args.beam]
    angles, report = reduce_to_angles(parse_lhe_lite(args.infile, strict=args.strict),
                                      config, beam_dir=beam, strict=args.strict)
    ev.write_jsonl(angles, args.out)
    ev.write_metadata(args.out, {"channel": args.channel, "beam": args.beam,
                                 "input": args.infile, **report})
    print(f"reduced {report['reduced']} events "
          f"(skipped {report['outside_mass_window']} outside mass window, "
          f"{report['failed']} failed)")
    return 0


def cmd_reconstruct(args):
    sample = (ev.read_csv(args.infile) if args.infile.endswith(".csv")
              else ev.read_jsonl(args.infile))
    names = _models_arg(args.models)
    symbols = [build_symbols(preset(m)) for m in names]
    if len(symbols) == 2:
        fn = reconstruct_identical if args.identical else reconstruct_bipartite
        result = fn(sample, symbols[0], symbols[1])
    else:
        if args.identical:
            raise ValueError("--identical requires two models")
        result = reconstruct_single(sample, symbols[0])
    with open(args.out, "w") as fh:
        fh.write(result.to_json() + "\n")
    state = result.state
    summary = {"n_events": result.n_events}
    if state.is_bipartite and state.dims == [3, 3]:
        summary["c_mb2"] = concurrence_bound(state)
    print(json.dumps(summary))
    return 0


def cmd_observables(args):
    with open(args.infile) as fh:
        text = fh.read()
    payload = json.loads(text)
    if "errors_a" in payload:
        state = ReconstructionResult.from_json(text).state
    else:
        state = BlochState.from_json(text)
    report = diagnostics(state, bell=not args.no_bell)
    with open(args.report, "w") as fh:
        fh.write(report.to_json() + "\n")
    print(f"valid={report.valid} purity={report.purity:.6g}")
    return 0


def _scan_range(text):
    start, stop, count = text.split(":")
    return np.linspace(float(start), float(stop), int(count))


def cmd_table2(args):
    if args.alpha_scan is not None:
        if args.state != "werner":
            raise ValueError("--alpha-scan supports --state werner")
        header = ["alpha", "c_mb2"]
        if args.sampled:
            header.append("c_mb2_sampled")
        rows = []
        wplus, wminus = preset("W+"), preset("W-")
        for alpha in _scan_range(args.alpha_scan):
            state = reference_state(f"werner:alpha={alpha!r}").state
            row = [float(alpha), concurrence_bound(state)]
            if args.sampled:
                sample = sample_bipartite(state, wplus, wminus, args.n, args.seed)
                recon = reconstruct_bipartite(sample, wplus, wminus)
                row.append(concurrence_bound(recon.state))
            rows.append(row)
        _write_csv(args.out, header, rows)
        return 0
    names = ["singlet3", "bell2_qutrit", "separable_pp", "maxmixed9"]
    header = ["state", "c_mb2"]
    if args.bell:
        header.append("cglmp_max")
    if args.sampled:
        header.append("c_mb2_sampled")
    rows = []
    wplus, wminus = preset("W+"), preset("W-")
    for name in names:
        state = reference_state(name).state
        row = [name, concurrence_bound(state)]
        if args.bell:
            row.append(cglmp_max(state)[0])
        if args.sampled:
            sample = sample_bipartite(state, wplus, wminus, args.n, args.seed)
            recon = reconstruct_bipartite(sample, wplus, wminus)
            row.append(concurrence_bound(recon.state))
        rows.append(row)
    _write_csv(args.out, header, rows)
    return 0


def cmd_bell_scan(args):
    state = reference_state(args.state).state
    n_theta, n_phi = (int(x) for x in args.grid.split("x"))
    from .observables import _cglmp_grid_values
    thetas = np.linspace(0.0, np.pi, n_theta)
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    vals = _cglmp_grid_values(state.density_matrix(), thetas, phis)
    rows = ([float(t), float(p), float(vals[i, j])]
            for i, t in enumerate(thetas) for j, p in enumerate(phis))
    _write_csv(args.out, ["theta", "phi", "cglmp"], rows)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spin-tomo",
        description="Spin density-matrix tomography of decay ensembles")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symbols", help="tabulate Wigner Q/P symbols")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--case", choices=GOLDEN_CASES,
                       help="closed-form reference case")
    group.add_argument("--model", help="channel preset for the numeric pipeline")
    p.add_argument("--grid", type=int, default=50)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--v", type=float, default=1.0)
    p.add_argument("--cL", type=float, default=None)
    p.add_argument("--cR", type=float, default=None)
    p.add_argument("--scalar", action="store_true")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.add_argument("--coeffs", default=None, help="JSON coefficient table path")
    p.set_defaults(fn=cmd_symbols)

    p = sub.add_parser("generate", help="sample synthetic decay events")
    p.add_argument("--state", required=True)
    p.add_argument("--models", required=True,
                   help="one or two comma-separated channel presets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--csv", action="store_true", help="write CSV instead of JSONL")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("reduce", help="reduce LHE-lite four-vectors to angles")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--channel", required=True)
    p.add_argument("--beam", choices=["+z", "-z"], default="+z")
    p.add_argument("--mass-window", default=None, help="e.g. 80,100")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("reconstruct", help="reconstruct Bloch parameters")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--models", required=True)
    p.add_argument("--identical", action="store_true",
                   help="symmetrise over parent-label exchange")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_reconstruct)

    p = sub.add_parser("observables", help="entanglement/Bell report")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--no-bell", action="store_true")
    p.set_defaults(fn=cmd_observables)

    p = sub.add_parser("table2", help="idealised-state observables")
    p.add_argument("--out", default=None)
    p.add_argument("--bell", action="store_true")
    p.add_argument("--sampled", action="store_true")
    p.add_argument("--alpha-scan", default=None, help="start:stop:count")
    p.add_argument("--state", default="werner")
    p.add_argument("--n", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_table2)

    p = sub.add_parser("bell-scan", help="CGLMP value over a rotation grid")
    p.add_argument("--state", required=True)
    p.add_argument("--grid", default="64x128")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_bell_scan)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
