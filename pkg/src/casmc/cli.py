"""Command-line front end: ``casmc spatial | st | mf``.

Exit codes: 0 ran, 1 usage or formula error, 2 input error, 3 internal
invariant failure.

Every run prints human-readable lines, then a deterministic JSON block (the
part golden tests compare), then a separate block with timings and other
run-dependent facts.
"""
from __future__ import annotations

import argparse
import io
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import kernels
from .errors import (CasmcError, FormulaError, FormulaSyntaxError, InvariantViolation)
from .io.pnm import load_image, load_image_config, write_overlay
from .io.syntax import format_pctl, format_spatial, parse_pctl, parse_spatial
from .io.text import load_population_model, load_snapshot_model, load_space, load_valuation
from .slcs import SpatialModel, sat_set
from .temporal import st_sat_matrix

REPORT_MARK = "=== report ==="
NONDET_MARK = "=== nondeterministic ==="

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _color(text):
    try:
        parts = [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("color must be R,G,B") from None
    if len(parts) != 3 or not all(0 <= p <= 255 for p in parts):
        raise argparse.ArgumentTypeError("color must be three integers in [0, 255]")
    return tuple(parts)


def build_parser():
    p = _Parser(prog="casmc", description="Spatial and mean-field model checking.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def formula_args(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--formula", help="formula text")
        g.add_argument("--formula-file", type=Path, help="file holding the formula")

    sp = sub.add_parser("spatial", help="check an SLCS formula on a graph or image")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--space", type=Path, help="graph space file")
    src.add_argument("--image", type=Path, help="binary PGM/PPM image")
    sp.add_argument("--valuation", type=Path, help="valuation file for --space")
    sp.add_argument("--config", type=Path, help="adjacency/atom rules for --image")
    sp.add_argument("--direction", choices=["forward", "inverse", "symmetric"])
    formula_args(sp)
    sp.add_argument("--overlay", type=Path, help="write satisfying pixels over the image (P6)")
    sp.add_argument("--color", type=_color, default=(255, 0, 0), help="overlay color R,G,B")
    sp.add_argument("--oracle", action="store_true", help="evaluate S by subset enumeration and cross-check")

    st = sub.add_parser("st", help="check a spatio-temporal formula on a snapshot model")
    st.add_argument("--model", type=Path, required=True)
    st.add_argument("--direction", choices=["forward", "inverse", "symmetric"])
    formula_args(st)
    st.add_argument("--all-states", action="store_true", help="report pairs for every kripke state")
    st.add_argument("--oracle", action="store_true")

    mf = sub.add_parser("mf", help="mean-field population model tools")
    mf.add_argument("--model", type=Path, required=True)
    msub = mf.add_subparsers(dest="action", parser_class=_Parser)
    msub.required = True
    tr = msub.add_parser("trace", help="mean-field trajectory as CSV")
    tr.add_argument("--horizon", type=int, required=True)
    tr.add_argument("--out", type=Path)
    ck = msub.add_parser("check", help="on-the-fly bounded PCTL check")
    formula_args(ck)
    ck.add_argument("--state", help="local state of the tagged object (default: first state)")
    ck.add_argument("--oracle", action="store_true", help="also run the naive checker and cross-check")
    sm = msub.add_parser("simulate", help="fast simulation of tagged objects")
    sm.add_argument("--tagged", type=int, default=1)
    sm.add_argument("--seed", type=int, required=True)
    sm.add_argument("--horizon", type=int, required=True)
    sm.add_argument("--start", help="initial local state (default: drawn from m(0))")
    ex = msub.add_parser("exact", help="expected occupancy of the exact N-object chain")
    ex.add_argument("--N", type=int, dest="N")
    ex.add_argument("--horizon", type=int, required=True)
    ex.add_argument("--out", type=Path)
    return p


def _formula_text(args):
    if args.formula is not None:
        return args.formula
    try:
        return args.formula_file.read_text().strip()
    except OSError as e:
        raise CasmcError(f"cannot read formula file: {e}") from None


def _csv(header, rows, fmt=repr):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for t, row in enumerate(rows):
        buf.write(",".join([str(t)] + [fmt(float(v)) for v in row]) + "\n")
    return buf.getvalue()


def run_spatial(args, out):
    formula = parse_spatial(_formula_text(args))
    if args.space is not None:
        space = load_space(args.space, args.direction)
        model = load_valuation(args.valuation, space) if args.valuation else SpatialModel(space, ())
    else:
        if args.config is None:
            raise UsageError("casmc spatial: --image needs --config")
        model = load_image(args.image, load_image_config(args.config))
    if args.overlay is not None and model.image is None:
        raise UsageError("casmc spatial: --overlay needs --image")
    sat = sat_set(model, formula)
    if args.oracle:
        ref = sat_set(model, formula, surround="bruteforce")
        if ref != sat:
            raise InvariantViolation("fixpoint and enumeration disagree on S")
    report = {"command": "spatial", "formula": format_spatial(formula),
              "points": sat.ids(), "count": len(sat), "carrier": model.space.size,
              "oracle_checked": bool(args.oracle)}
    out.write("satisfying points: " + " ".join(map(str, sat.ids())) + "\n")
    if args.overlay is not None:
        try:
            write_overlay(model, sat, args.overlay, args.color)
        except OSError as e:
            raise CasmcError(f"cannot write overlay: {e}") from None
        report["artifacts"] = {"overlay": str(args.overlay)}
        out.write(f"overlay written to {args.overlay}\n")
    return report


def run_st(args, out):
    formula = parse_spatial(_formula_text(args))
    model = load_snapshot_model(args.model, args.direction)
    mat = st_sat_matrix(model, formula)
    if args.oracle:
        if not np.array_equal(mat, st_sat_matrix(model, formula, surround="bruteforce")):
            raise InvariantViolation("fixpoint and enumeration disagree on S")
    states = range(model.n_states) if args.all_states else [model.initial_state]
    pairs = [[int(s), int(p)] for s in states for p in np.flatnonzero(mat[s])]
    for s in states:
        pts = " ".join(str(int(p)) for p in np.flatnonzero(mat[s]))
        out.write(f"state {s}: {pts}\n")
    return {"command": "st", "formula": format_spatial(formula), "initial_state": model.initial_state,
            "pairs": pairs, "count": len(pairs), "oracle_checked": bool(args.oracle)}


def run_mf(args, out):
    from .meanfield import (RNG_ALGORITHM, OnTheFlyChecker, exact_count_dtmc,
                            fast_simulate, mf_trajectory, naive_check)

    model = load_population_model(args.model)
    header = ["t", *model.states]
    report = {"command": f"mf {args.action}", "states": list(model.states)}
    if args.action in ("trace", "exact"):
        if args.horizon < 0:
            raise UsageError("casmc mf: --horizon must be non-negative")
        if args.action == "trace":
            rows = mf_trajectory(model, args.horizon)
        else:
            N = args.N if args.N is not None else model.population
            if N is None:
                raise UsageError("casmc mf exact: --N required (model declares no population)")
            rows = exact_count_dtmc(model, N, args.horizon)
            report["N"] = N
        text = _csv(header, rows)
        report["horizon"] = args.horizon
        report["final"] = [float(v) for v in rows[-1]]
        if args.out is not None:
            try:
                args.out.write_text(text)
            except OSError as e:
                raise CasmcError(f"cannot write {args.out}: {e}") from None
            report["artifacts"] = {"csv": str(args.out)}
        else:
            out.write(text)
    elif args.action == "check":
        formula = parse_pctl(_formula_text(args))
        s0 = args.state or model.states[0]
        res = OnTheFlyChecker(model).check(s0, formula)
        report.update(formula=format_pctl(formula), state=s0, verdict=res.verdict,
                      probability=res.probability, audit=res.audit.as_dict())
        if args.oracle:
            verdict, prob = naive_check(model, s0, formula)
            if verdict != res.verdict or (prob is not None and abs(prob - res.probability) > 1e-12):
                raise InvariantViolation(
                    f"on-the-fly ({res.verdict}, {res.probability}) vs naive ({verdict}, {prob})")
            report["oracle_checked"] = True
        if not res.audit.within_bounds():
            raise InvariantViolation(f"expansion audit out of bounds: {res.audit.as_dict()}")
        out.write(f"verdict: {'true' if res.verdict else 'false'}\n")
        if res.probability is not None:
            out.write(f"probability: {res.probability!r}\n")
    elif args.action == "simulate":
        if args.tagged < 1 or args.horizon < 0:
            raise UsageError("casmc mf simulate: need --tagged >= 1 and --horizon >= 0")
        traces = fast_simulate(model, args.tagged, args.horizon, args.seed, start=args.start)
        for i, tr in enumerate(traces):
            out.write(f"object {i}: {' '.join(tr)}\n")
        report.update(seed=args.seed, rng=RNG_ALGORITHM, horizon=args.horizon, traces=traces)
    return report


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    started = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        runner = {"spatial": run_spatial, "st": run_st, "mf": run_mf}[args.command]
        report = runner(args, out)
        block = json.dumps(report, sort_keys=True, indent=2)
    except UsageError as e:
        err.write(f"{e}\n")
        return EXIT_USAGE
    except FormulaSyntaxError as e:
        err.write(f"formula syntax error: {e}\n{e.caret()}\n")
        return EXIT_USAGE
    except FormulaError as e:
        err.write(f"formula error: {e}\n")
        return EXIT_USAGE
    except InvariantViolation as e:
        err.write(f"internal invariant failure: {e}\n")
        return EXIT_INTERNAL
    except CasmcError as e:
        err.write(f"input error: {e}\n")
        return EXIT_INPUT
    except SystemExit as e:  # --help
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    except Exception as e:  # noqa: BLE001
        err.write(f"internal invariant failure: {type(e).__name__}: {e}\n")
        return EXIT_INTERNAL
    out.write(REPORT_MARK + "\n")
    out.write(block + "\n")
    out.write(NONDET_MARK + "\n")
    nondet = {"elapsed_s": round(time.perf_counter() - started, 6), "kernel_backend": kernels.BACKEND}
    out.write(json.dumps(nondet, sort_keys=True) + "\n")
    return EXIT_OK


def machine_block(text):
    """Extract the deterministic JSON report from captured CLI output."""
    start = text.index(REPORT_MARK) + len(REPORT_MARK)
    end = text.index(NONDET_MARK)
    return json.loads(text[start:end])


if __name__ == "__main__":
    sys.exit(main())
