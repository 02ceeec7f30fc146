"""Command-line entry point.

Exit codes: 0 success, 2 usage, 3 invalid input, 4 synthesis failure,
5 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    Cut,
    bipartite_determinant,
    reduced_purity,
    schmidt_values,
    single_qubit_cuts,
    spectrum,
    spectrum_json,
    time_series,
    time_series_csv,
)
from .averaging import (
    TERM_BUDGET,
    QuadratureGrid,
    expand_terms,
    leakage_estimate,
    numeric_average,
    symbolic_average,
)
from .errors import AliasingWarning, BudgetError, InvalidStateError, SynthesisError
from .serialize import dumps, read_json, terms_csv
from .statecore import DynamicComposite, StaticState, check_label, inner_product
from .unraveler import (
    SynthesisConfig,
    collision_scan,
    preset_bell,
    preset_w,
    synthesize_detailed,
)

log = logging.getLogger("qechannels")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_SYNTHESIS, EXIT_BUDGET = 0, 2, 3, 4, 5


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _load_json(path: str) -> dict:
    try:
        return read_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidStateError(f"cannot read {path}: {exc}") from exc


def _load_composite(path: str) -> DynamicComposite:
    data = _load_json(path)
    return DynamicComposite.from_json(data.get("composite", data))


def _manifest(args, **extra) -> dict:
    out = {"command": args.command, "seed": getattr(args, "seed", None)}
    out.update(extra)
    return out


def cmd_preset(args) -> int:
    builder = {"bell": preset_bell, "w": preset_w}[args.name]
    kwargs = {"literal_table": True} if (args.name == "w" and args.literal_table) else {}
    target, composite = builder(**kwargs)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = _manifest(args, preset=args.name)
    state_doc = {**target.to_json(), "manifest": manifest}
    tones_doc = {**composite.to_json(), "manifest": manifest}
    (out_dir / f"{args.name}_state.json").write_text(dumps(state_doc))
    (out_dir / f"{args.name}_tones.json").write_text(dumps(tones_doc))
    log.info("wrote %s preset to %s", args.name, out_dir)
    return EXIT_OK


def cmd_unravel(args) -> int:
    target = StaticState.from_json(_load_json(args.state_file))
    if not target.is_normalized(1e-9):
        log.error("input state is not normalized (norm %.17g)", target.norm())
        return EXIT_INPUT
    config = SynthesisConfig(
        seed=args.seed,
        freq_range=args.freq_range,
        max_retries=args.max_retries,
        drop_zero_amplitudes=not args.keep_zero,
    )
    composite, assignment = synthesize_detailed(target, config)
    support = assignment.labels()
    violations = collision_scan(assignment, support, mode="auto")
    recovered = symbolic_average(composite)
    overlap = inner_product(target, recovered)
    denom = target.norm() ** 2 * recovered.norm() ** 2
    fid = abs(overlap) ** 2 / denom if denom > 0 else 0.0

    manifest = _manifest(args, freq_range=config.resolved_range(target.n_qubits, len(support)),
                         max_retries=config.max_retries)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "tones.json").write_text(dumps({**composite.to_json(), "manifest": manifest}))
    (out_dir / "assignment.json").write_text(
        dumps({**assignment.to_json(), "manifest": manifest})
    )
    verification = {
        "fidelity": fid,
        "collision_violations": len(violations),
        "recovered": recovered.to_json(),
        "manifest": manifest,
    }
    (out_dir / "verification.json").write_text(dumps(verification))
    if violations or fid < 1 - 1e-9:
        log.error("verification failed: fidelity %.17g, %d collisions", fid, len(violations))
        return EXIT_SYNTHESIS
    return EXIT_OK


def cmd_average(args) -> int:
    composite = _load_composite(args.tones_file)
    extra: dict = {"mode": args.mode, "warning": None}
    if args.mode == "symbolic":
        state = symbolic_average(composite)
    else:
        window = None if args.window is None else args.window * composite.period
        grid = QuadratureGrid(args.samples, window)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", AliasingWarning)
            state = numeric_average(composite, grid)
        if any(issubclass(w.category, AliasingWarning) for w in caught):
            extra["warning"] = "aliasing possible"
            log.warning("aliasing possible: %d samples", args.samples)
        extra["samples"] = args.samples
        extra["window_periods"] = 1.0 if args.window is None else args.window
        if args.window is not None:
            extra["leakage_bound"] = leakage_estimate(composite, window).tolist()
    doc = {**state.to_json(), **extra, "manifest": _manifest(args)}
    _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_expand(args) -> int:
    composite = _load_composite(args.tones_file)
    label = check_label(args.label, composite.n_qubits)
    terms = expand_terms(composite, label, budget=args.max_terms)
    _emit(terms_csv(terms), args.out)
    n_zero = sum(1 for t in terms if t.total_freq_index == 0)
    print(f"{label}: {len(terms)} terms, {n_zero} zero-frequency", file=sys.stderr)
    return EXIT_OK


def _analyze_state(state: StaticState, args) -> dict:
    cuts = [Cut.parse(args.cut, state.n_qubits)] if args.cut else single_qubit_cuts(state.n_qubits)
    report: dict = {"n": state.n_qubits, "cuts": []}
    if state.n_qubits == 2:
        det = bipartite_determinant(state)
        report["determinant"] = [det.real, det.imag]
    for cut in cuts:
        s = schmidt_values(state, cut)
        entry = {"cut": str(cut), "schmidt_values": s.tolist(), "rank": int(np.sum(s > 1e-10))}
        if state.is_normalized(1e-9):
            entry["purity"] = reduced_purity(state, cut)
        report["cuts"].append(entry)
    return report


def cmd_analyze(args) -> int:
    data = _load_json(args.input)
    data = data.get("composite", data)
    if "tables" in data:
        composite = DynamicComposite.from_json(data)
        if args.format == "csv":
            times, values = time_series(composite, args.samples)
            _emit(time_series_csv(times, values, composite.n_qubits), args.out)
        else:
            doc = [
                {"qubit": q.qubit_index, "level": level, "lines": spectrum_json(spectrum(q, level))}
                for q in composite.qubits
                for level in (0, 1)
            ]
            _emit(dumps(doc), args.out)
        return EXIT_OK
    state = StaticState.from_json(data)
    if args.format == "csv":
        log.error("csv output is only available for tone tables")
        return EXIT_USAGE
    _emit(dumps(_analyze_state(state, args)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qechannels",
        description="Unravel static qubit states into time-averaged multi-tone dynamics.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preset", help="write a built-in target state and its tone table")
    p.add_argument("name", choices=["bell", "w"])
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--literal-table", action="store_true",
                   help="W preset: 3**(-1/3) amplitudes (averages to an unnormalized W)")
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("unravel", help="synthesize a tone table from a state file")
    p.add_argument("state_file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--freq-range", type=int, default=None)
    p.add_argument("--max-retries", type=int, default=64)
    p.add_argument("--keep-zero", action="store_true",
                   help="assign frequencies to zero-amplitude labels too")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_unravel)

    p = sub.add_parser("average", help="time-average a tone table")
    p.add_argument("tones_file")
    p.add_argument("--mode", choices=["symbolic", "numeric"], default="symbolic")
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--window", type=float, default=None, help="window length in periods")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_average)

    p = sub.add_parser("expand", help="dump every resonance term of one label as CSV")
    p.add_argument("tones_file")
    p.add_argument("--label", required=True)
    p.add_argument("--max-terms", type=int, default=TERM_BUDGET)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("analyze", help="Schmidt data for a state; spectra or time series for tones")
    p.add_argument("input")
    p.add_argument("--cut", default=None, help='bipartition such as "1|2,3"')
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    seed = getattr(args, "seed", None)
    if seed is not None and not 0 <= seed < 2**64:
        parser.error("--seed must be an unsigned 64-bit integer")
    try:
        return args.func(args)
    except InvalidStateError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except SynthesisError as exc:
        log.error("%s", exc)
        return EXIT_SYNTHESIS
    except BudgetError as exc:
        log.error("%s", exc)
        return EXIT_BUDGET
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
