#!/usr/bin/env python3
"""
    geoent command line tool

    Subcommands:
        state    build a state and print its amplitudes
        lambda   maximal overlap of a state under the tying cases
        table    rerun the published tables
        verify   run the verification suites
        seeds    list the basic TI seeds of N sites

    stdout carries the JSON document only, logs go to stderr and the log file.
    Exit status: 0 success, 1 failed verification, 2 usage error.
"""

if __package__ is None:
    __package__ = "geoent" # Force the tool to be loaded as a module


import os
import sys
import argparse
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from geoent.core.config import load_globals, master_seed
from geoent.core.basemodule import BaseRunner, VerificationFailed
from geoent.core.manifest import RunManifest, dumps
from geoent.states.qstate import (
    PureState, HybridSpec, InvalidStateError, MalformedSeed, DimensionMismatch, UnknownFamily,
    cyclic_shift, enumerate_basic_seeds, is_permutation_invariant, make_basic_ti, make_dicke,
    make_ghz_family, make_ghz_prime_family, make_w, named_state, seed_of, superpose, term_period, term_periods
)
from geoent.optimize.cases import CASES, maximize_cases
from geoent.optimize.grid import GridBudgetExceeded, grid_oracle
from geoent.experiments.catalog import TABLE_SETS, build_catalog, select_set
from geoent.experiments.tables import TableConfig, pick_winner, run_table, write_csv, write_json
from geoent.experiments.hierarchy import infer_hierarchy
from geoent.experiments.verify import SUITES, run_suite


EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# Reported as usage errors; the state errors are ValueErrors too
USAGE_ERRORS = (UnknownFamily, MalformedSeed, InvalidStateError, DimensionMismatch, GridBudgetExceeded, ValueError)


class CommandRunner(BaseRunner):
    """
    Logging and settings for one command invocation.
    """


def _add_state_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument('--ghz', type=int, metavar="N",
        help="GHZ family sqrt(c)|1..1> + e^{i phi} sqrt(1-c)|0..0>")
    group.add_argument('--ghzp', type=int, metavar="N",
        help="GHZ' family sqrt(c)|1010..> + e^{i phi} sqrt(1-c)|0101..>")
    group.add_argument('--w', type=int, metavar="N",
        help="W state of N sites")
    group.add_argument('--dicke', type=int, nargs=2, metavar=("N", "K"),
        help="Dicke state of N sites with K zeros")
    group.add_argument('--seed', dest="seed_bits", metavar="BITS",
        help="Basic TI state of a seed bitstring, e.g. 100100")
    group.add_argument('--name',
        help="Catalog state, e.g. GHZp_6, psi1a_5, S_4_2")
    group.add_argument('--hybrid', nargs=2, metavar=("FIRST", "SECOND"),
        help="sqrt(c)|FIRST> + e^{i phi} sqrt(1-c)|SECOND> of two catalog states")
    group.add_argument('--row',
        help="Table row, e.g. A2-1")
    parser.add_argument('--c', type=float, default=0.5,
        help="Superposition coefficient (GHZ/GHZ' families and --hybrid)")
    parser.add_argument('--phi', type=float,
        help="Relative phase; 0 for the families, globals.yaml phi (pi/3) for --hybrid and --row")


def state_from_args(args: argparse.Namespace) -> Tuple[Union[PureState, HybridSpec], str]:
    """
    Build the state (or the hybrid specification) named on the command line.
    """
    if args.ghz is not None:
        phi = args.phi or 0.0
        return make_ghz_family(args.ghz, args.c, phi), f"GHZ_{args.ghz}(c={args.c:g}, phi={phi:g})"
    if args.ghzp is not None:
        phi = args.phi or 0.0
        return make_ghz_prime_family(args.ghzp, args.c, phi), f"GHZp_{args.ghzp}(c={args.c:g}, phi={phi:g})"
    if args.w is not None:
        return make_w(args.w), f"W_{args.w}"
    if args.dicke is not None:
        n, k = args.dicke
        return make_dicke(n, k), f"S_{n}_{k}"
    if args.seed_bits is not None:
        return make_basic_ti(args.seed_bits), args.seed_bits
    if args.name is not None:
        return named_state(args.name), args.name
    if args.hybrid is not None:
        phi = args.phi if args.phi is not None else float(load_globals()["phi"])
        if not 0 <= args.c <= 1:
            raise InvalidStateError(f"Coefficient c must lie in [0, 1], got {args.c!r}")
        first, second = (named_state(name) for name in args.hybrid)
        spec = HybridSpec(((first, np.sqrt(args.c)), (second, np.exp(1j * phi) * np.sqrt(1 - args.c))))
        return spec, f"{args.hybrid[0]}+{args.hybrid[1]}(c={args.c:g})"

    phi = args.phi if args.phi is not None else float(load_globals()["phi"])
    rows = { e.label: e for e in build_catalog(phi) }
    if args.row not in rows:
        raise UnknownFamily(f"Unknown table row {args.row!r}")
    return rows[args.row].spec(), args.row


def _emit(payload: Dict[str, Any], manifest: RunManifest, runner: BaseRunner, out: Optional[str]=None) -> None:
    manifest.warnings = runner.warnings()
    manifest.seal(payload)
    text = dumps({ "manifest": manifest.to_dict(), **payload }, indent=2)
    if out:
        with open(out, "w") as file:
            file.write(text + "\n")
        runner.log.info("Wrote %s", out)
    else:
        print(text)


def cmd_state(args: argparse.Namespace, runner: BaseRunner) -> int:
    state, label = state_from_args(args)
    psi = superpose(state) if isinstance(state, HybridSpec) else state
    periods = sorted(term_periods(psi))
    seed = seed_of(psi)
    payload = {
        "label": label,
        "state": psi.to_dict(),
        "period": periods[0] if len(periods) == 1 else None,
        "periods": periods,
        "seed": None if seed is None else str(seed),
        "translation_invariant": cyclic_shift(psi, 1).allclose(psi),
        "permutation_invariant": is_permutation_invariant(psi),
    }
    manifest = RunManifest.for_command("state", None)
    _emit(payload, manifest, runner, args.out)
    return EXIT_OK


def cmd_lambda(args: argparse.Namespace, runner: BaseRunner) -> int:
    state, label = state_from_args(args)
    seed = master_seed(args.master_seed)
    settings = runner.settings
    cases = CASES if args.case == "auto" else (int(args.case),)
    n_samples = args.samples or int(settings["samples"])

    outcomes = maximize_cases(state,
                              n_samples=n_samples,
                              master_seed=seed,
                              label=label,
                              refine_results=args.refine,
                              stall_window=int(settings["stall_window"]),
                              cases=cases,
                              refine_tol=float(settings["refine_tol"]),
                              refine_max_sweeps=int(settings["refine_max_sweeps"]),
                              workers=args.workers or int(settings["workers"]))

    if args.case != "auto" and outcomes[cases[0]].redundant:
        print(f"error: case {cases[0]} is redundant for {label}: {outcomes[cases[0]].reason}", file=sys.stderr)
        return EXIT_USAGE

    winner, winning = pick_winner(outcomes)
    best = outcomes[winner]
    payload = {
        "label": label,
        "cases": { str(k): o.to_dict() for k, o in sorted(outcomes.items()) },
        "winner": winner,
        "winning_cases": list(winning),
        "lambda": best.lambda_,
        "E_g": 1.0 - best.lambda_,
    }

    if args.oracle:
        psi = superpose(state) if isinstance(state, HybridSpec) else state
        grid = grid_oracle(psi, best.tying, args.oracle)
        payload["oracle"] = grid.to_dict()
        runner.log.info("%s: optimizer %.9f, grid oracle %.9f", label, best.lambda_, grid.lambda_)

    manifest = RunManifest.for_command("lambda", seed)
    _emit(payload, manifest, runner, args.out)
    return EXIT_OK


def cmd_table(args: argparse.Namespace, runner: BaseRunner) -> int:
    phi = args.phi if args.phi is not None else float(runner.settings["phi"])
    entries = select_set(build_catalog(phi), args.set)
    cfg = TableConfig.from_globals(n_samples=args.samples,
                                   master_seed=master_seed(args.seed),
                                   refine=not args.no_refine,
                                   workers=args.workers)
    runner.log.info("Running %d rows with %d samples per case", len(entries), cfg.n_samples)
    reports = run_table(entries, cfg)
    hierarchy = infer_hierarchy(reports)

    manifest = RunManifest.for_command("table", cfg.master_seed)
    manifest.warnings = runner.warnings()
    if args.out:
        base, ext = os.path.splitext(args.out)
        json_path = base + ".json" if ext.lower() == ".csv" else args.out + ".json"
        with open(json_path, "w") as file:
            write_json(reports, file, manifest, hierarchy=hierarchy.to_dict())
        with open(args.out, "w") as file:
            write_csv(reports, file, manifest)
        runner.log.info("Wrote %s and %s", args.out, json_path)
    else:
        write_json(reports, sys.stdout, manifest, hierarchy=hierarchy.to_dict())
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, runner: BaseRunner) -> int:
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    seed = master_seed(args.seed)
    cfg = TableConfig.from_globals(n_samples=args.samples, master_seed=seed)

    reports = []
    for name in suites:
        report = run_suite(name, seed=seed, n_trials=args.trials, cfg=cfg)
        reports.append(report)
        print(f"{name}: {'PASS' if report.passed else 'FAIL'} "
              f"({len(report.checks) - len(report.failures())}/{len(report.checks)})", file=sys.stderr)

    payload = { "suites": [ r.to_dict() for r in reports ], "passed": all(r.passed for r in reports) }
    manifest = RunManifest.for_command("verify", seed)
    _emit(payload, manifest, runner, args.out)

    try:
        for r in reports:
            r.raise_for_failure()
    except VerificationFailed as e:
        runner.log.error("%s", e)
        return EXIT_FAILED
    return EXIT_OK


def cmd_seeds(args: argparse.Namespace, runner: BaseRunner) -> int:
    periods: Dict[str, List[str]] = {}
    for seed in enumerate_basic_seeds(args.n, include_constant=not args.entangled_only):
        periods.setdefault(str(term_period(seed)), []).append(str(seed))
    payload = { "n": args.n, "periods": periods }
    _emit(payload, RunManifest.for_command("seeds", None), runner, args.out)
    return EXIT_OK


COMMANDS = {
    "state": cmd_state,
    "lambda": cmd_lambda,
    "table": cmd_table,
    "verify": cmd_verify,
    "seeds": cmd_seeds,
}


def setup_parser(parser: argparse.ArgumentParser) -> None:
    """
    Add the geoent subcommands to the parser.
    """
    parser.add_argument('-d', '--debug', action='store_true',
        help='Enable debug logging')
    subparsers = parser.add_subparsers(dest="command", required=True)

    state_parser = subparsers.add_parser('state', help="Build a state and print it")
    _add_state_arguments(state_parser)
    state_parser.add_argument('--out', help="Write the JSON document to a file")

    lambda_parser = subparsers.add_parser('lambda', help="Maximal overlap with product states")
    _add_state_arguments(lambda_parser)
    lambda_parser.add_argument('--case', choices=["0", "1", "2", "3", "auto"], default="auto",
        help="Tying case: 0 free, 1/2 seed of component 1/2, 3 permutation invariant")
    lambda_parser.add_argument('--samples', type=int,
        help="Random samples per case (default from globals.yaml)")
    lambda_parser.add_argument('--master-seed', type=lambda s: int(s, 0), dest="master_seed",
        help="Master seed (falls back to GEOENT_SEED and globals.yaml)")
    lambda_parser.add_argument('--refine', action='store_true',
        help="Refine the best sample locally")
    lambda_parser.add_argument('--oracle', type=int, metavar="R",
        help="Also run the grid oracle at resolution R")
    lambda_parser.add_argument('--workers', type=int,
        help="Threads used for the sample blocks")
    lambda_parser.add_argument('--out', help="Write the JSON document to a file")

    table_parser = subparsers.add_parser('table', help="Rerun the published tables")
    table_parser.add_argument('--set', choices=list(TABLE_SETS) + ["all"], default="all",
        help="Table to reproduce")
    table_parser.add_argument('--samples', type=int,
        help="Random samples per case (default from globals.yaml)")
    table_parser.add_argument('--seed', type=lambda s: int(s, 0),
        help="Master seed (falls back to GEOENT_SEED and globals.yaml)")
    table_parser.add_argument('--out', metavar="PATH.csv",
        help="CSV output, the JSON document is written next to it")
    table_parser.add_argument('--workers', type=int,
        help="Worker processes for the rows")
    table_parser.add_argument('--no-refine', action='store_true',
        help="Report the sampled values only")
    table_parser.add_argument('--phi', type=float,
        help="Relative phase of the hybrids (default from globals.yaml, pi/3)")

    verify_parser = subparsers.add_parser('verify', help="Run verification suites")
    verify_parser.add_argument('--suite', choices=list(SUITES) + ["all"], default="all")
    verify_parser.add_argument('--seed', type=lambda s: int(s, 0),
        help="Master seed (falls back to GEOENT_SEED and globals.yaml)")
    verify_parser.add_argument('--trials', type=int,
        help="Separable ensembles per state in the purity suite")
    verify_parser.add_argument('--samples', type=int,
        help="Samples per case in the hierarchy suite")
    verify_parser.add_argument('--out', help="Write the JSON document to a file")

    seeds_parser = subparsers.add_parser('seeds', help="List basic TI seeds")
    seeds_parser.add_argument('--n', type=int, required=True)
    seeds_parser.add_argument('--entangled-only', action='store_true',
        help="Leave out the constant seeds")
    seeds_parser.add_argument('--out', help="Write the JSON document to a file")


def main(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    """
    Run the selected subcommand and return the exit status.
    """
    with CommandRunner(module_name=args.command, debug=args.debug) as runner:
        try:
            return COMMANDS[args.command](args, runner)
        except USAGE_ERRORS as e:
            message = e.args[0] if e.args else str(e)
            runner.log.debug("Usage error", exc_info=True)
            print(f"error: {message}", file=sys.stderr)
            return EXIT_USAGE


def run(argv: Optional[List[str]]=None) -> int:
    """
    Parse argv and run. argparse usage errors exit with status 2.
    """
    parser = argparse.ArgumentParser(prog="geoent", description="Geometric entanglement of TI qubit states")
    setup_parser(parser)
    return main(parser, parser.parse_args(argv))


if __name__ == '__main__':
    sys.exit(run())
