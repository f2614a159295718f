"""Command-line front end: ``fermitangle {analyze,examples,trap,freeze}``.

Exit codes: 0 ok, 1 internal invariant failure, 2 malformed state file,
3 state norm off by more than 1e-6, 4 invalid bipartition M, 5 write
failure, 6 grid too coarse, 7 freeze not applicable.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .criteria import classify, fermionic_concurrence
from .errors import (
    BadArgs,
    BadM,
    DimensionMismatch,
    DoubleOccupancy,
    FermiTangleError,
    GridTooCoarse,
    InvariantViolation,
    NormDeviation,
    StateFileError,
    UnsupportedDims,
    UnsupportedN,
)
from .fock import SITE_PARTITION, ProductState, antisymmetrize, build_reference_state, freeze
from .io import dumps_state, load_state
from .rdm import linear_entropy, reduce_bipartite
from .slater import concurrence_2f, concurrence_2qubit, schmidt_decompose, slater_rank
from .trap import TrapGrid, analytic_ordered_kernel, one_body_kernel, trap_report, write_density_csv, write_kernel_csv

log = logging.getLogger("fermitangle")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_MALFORMED = 2
EXIT_NORM = 3
EXIT_BAD_M = 4
EXIT_WRITE = 5
EXIT_GRID = 6
EXIT_FREEZE = 7

DEFAULT_SEED = 20200417
SEED_ENV = "FERMITANGLE_SEED"
MIN_TRAP_POINTS = 50
MIN_TRAP_EXTENT = 4.0


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def num(x: float) -> float:
    """Round to 12 significant digits for stable output."""
    return float(f"{float(x):.12g}")


def _complex_entry(z: complex) -> dict:
    return {"re": num(z.real), "im": num(z.imag)}


def _emit(payload: dict, as_json: bool, render) -> None:
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        render(payload)


def _load(path: str):
    try:
        return load_state(path, with_norm=True)
    except NormDeviation as exc:
        raise CliError(str(exc), EXIT_NORM) from None
    except StateFileError as exc:
        raise CliError(str(exc), EXIT_MALFORMED) from None


# --------------------------------------------------------------------------
# analyze
# --------------------------------------------------------------------------


def freeze_block(psi, partition=SITE_PARTITION, left=None) -> dict:
    phi = freeze(psi, partition, left=left)
    schmidt = schmidt_decompose(phi)
    try:
        c2q = num(concurrence_2qubit(phi))
    except UnsupportedDims:
        c2q = None
    try:
        c2f = num(concurrence_2f(psi))
    except UnsupportedDims:
        c2f = None
    return {
        "dims": list(phi.dims),
        "amplitude_matrix": [[_complex_entry(z) for z in row] for row in phi.amplitudes],
        "schmidt_coefficients": [num(c) for c in schmidt.coefficients],
        "linear_entropy_party1": num(linear_entropy(reduce_bipartite(phi, 1))),
        "linear_entropy_party2": num(linear_entropy(reduce_bipartite(phi, 2))),
        "concurrence_2qubit": c2q,
        "concurrence_2f": c2f,
        "fermionic_concurrence": num(fermionic_concurrence(psi, 1)),
    }


def analysis_report(psi, norm: float, ms, tol: float, path: str = "") -> dict:
    rows = []
    for M in ms:
        try:
            verdict = classify(psi, M, tol=tol)
        except (BadM, BadArgs) as exc:
            raise CliError(str(exc), EXIT_BAD_M) from None
        b = verdict.bounds
        if not (b.lower - tol <= verdict.purity <= b.upper + tol):
            raise InvariantViolation(f"M={M}: purity {verdict.purity} outside its bounds")
        rows.append({
            "M": M,
            "purity": num(verdict.purity),
            "linear_entropy": num(1.0 - verdict.purity),
            "bounds": {"lower": num(b.lower), "upper": num(b.upper), "d_M": b.d_M},
            "verdict": str(verdict.classification),
            "margin": num(verdict.margin),
            "fermionic_concurrence": num(fermionic_concurrence(psi, M)),
        })
    report = {
        "input": {"path": path, "d": psi.d, "N": psi.N, "norm": num(norm)},
        "tolerance": tol,
        "bipartitions": rows,
        "slater_rank": None,
        "concurrence_2f": None,
        "freeze": None,
    }
    if psi.N == 2:
        report["slater_rank"] = slater_rank(psi)
        if psi.d == 4:
            report["concurrence_2f"] = num(concurrence_2f(psi))
            try:
                report["freeze"] = freeze_block(psi)
            except (DoubleOccupancy, DimensionMismatch):
                pass
    return report


def _render_analysis(r: dict) -> None:
    inp = r["input"]
    print(f"state: {inp['path']}  d={inp['d']}  N={inp['N']}  norm={inp['norm']:.12g}")
    for row in r["bipartitions"]:
        b = row["bounds"]
        print(f"  M={row['M']}: purity={row['purity']:.12g}  bounds=[{b['lower']:.12g}, {b['upper']:.12g}]"
              f"  verdict={row['verdict']}  C_f={row['fermionic_concurrence']:.12g}")
    if r["slater_rank"] is not None:
        print(f"  slater rank: {r['slater_rank']}")
    if r["concurrence_2f"] is not None:
        print(f"  concurrence (d=4 pfaffian): {r['concurrence_2f']:.12g}")
    if r["freeze"] is not None:
        f = r["freeze"]
        print(f"  frozen counterpart: schmidt={f['schmidt_coefficients']}  "
              f"C_2qubit={f['concurrence_2qubit']}")


def cmd_analyze(args) -> int:
    psi, norm = _load(args.path)
    if args.all:
        ms = list(range(1, psi.N))
    else:
        ms = [args.bipartition]
    report = analysis_report(psi, norm, ms, args.tol, path=str(args.path))
    _emit(report, args.json, _render_analysis)
    return EXIT_OK


# --------------------------------------------------------------------------
# examples
# --------------------------------------------------------------------------


def resolve_seed(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise CliError(f"{SEED_ENV}={env!r} is not an integer", EXIT_MALFORMED) from None
    return DEFAULT_SEED


def random_slater_state(seed: int, d: int = 6, n: int = 2):
    """Antisymmetrized product of ``n`` random complex single-particle vectors."""
    rng = np.random.default_rng(seed)
    factors = rng.normal(size=(n, d)) + 1j * rng.normal(size=(n, d))
    return antisymmetrize(ProductState.normalized(factors))


def example_files(seed: int) -> dict[str, str]:
    return {
        "slater-AB.json": dumps_state(build_reference_state("slater-AB"),
                                      description="single Slater determinant on modes A0 B1 (A0,A1,B0,B1)"),
        "non-slater-AB.json": dumps_state(build_reference_state("non-slater-AB"),
                                          description="balanced superposition of determinants {A0,B1} and {A1,B0}"),
        "random-slater.json": dumps_state(random_slater_state(seed), seed=seed,
                                          description="random antisymmetrized product, d=6 N=2"),
    }


def cmd_examples(args) -> int:
    seed = resolve_seed(args.seed)
    outdir = Path(args.outdir)
    written = []
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        for name, text in example_files(seed).items():
            (outdir / name).write_text(text)
            written.append(str(outdir / name))
    except OSError as exc:
        raise CliError(f"cannot write examples: {exc}", EXIT_WRITE) from None
    payload = {"outdir": str(outdir), "seed": seed, "files": written}
    _emit(payload, args.json, lambda p: print("\n".join(p["files"])))
    return EXIT_OK


# --------------------------------------------------------------------------
# trap
# --------------------------------------------------------------------------


def cmd_trap(args) -> int:
    if args.grid_points < MIN_TRAP_POINTS or args.extent < MIN_TRAP_EXTENT:
        raise CliError(f"grid needs n >= {MIN_TRAP_POINTS} and L >= {MIN_TRAP_EXTENT}", EXIT_GRID)
    try:
        grid = TrapGrid(args.extent, args.grid_points)
        report = trap_report(grid)
    except (GridTooCoarse, BadArgs) as exc:
        raise CliError(str(exc), EXIT_GRID) from None
    payload = {
        "extent": num(report.extent),
        "grid_points": report.grid_points,
        "S_L_labeled": num(report.S_L_labeled),
        "S_L_ordered": num(report.S_L_ordered),
        "convergence_labeled": num(report.convergence_labeled),
        "convergence_ordered": num(report.convergence_ordered),
        "convergence": num(report.convergence),
        "trace_labeled": num(report.trace_labeled),
        "trace_ordered": num(report.trace_ordered),
        "files": [],
    }
    if args.emit_kernels:
        outdir = Path(args.emit_kernels)
        try:
            outdir.mkdir(parents=True, exist_ok=True)
            for kind in ("labeled", "ordered"):
                k = one_body_kernel(kind, grid)
                payload["files"].append(str(write_kernel_csv(k, outdir / f"kernel_{kind}.csv")))
                payload["files"].append(str(write_density_csv(k, outdir / f"density_{kind}.csv")))
        except OSError as exc:
            raise CliError(f"cannot write kernels: {exc}", EXIT_WRITE) from None
        ordered = one_body_kernel("ordered", grid)
        payload["ordered_kernel_max_deviation"] = num(
            np.max(np.abs(ordered.values - analytic_ordered_kernel(grid))))

    def render(p):
        print(f"grid: L={p['extent']:g}  n={p['grid_points']}")
        print(f"S_L(labeled) = {p['S_L_labeled']:.12g}   (|n - n/2| = {p['convergence_labeled']:.3g})")
        print(f"S_L(ordered) = {p['S_L_ordered']:.12g}   (|n - n/2| = {p['convergence_ordered']:.3g})")
        for f in p["files"]:
            print(f"wrote {f}")

    _emit(payload, args.json, render)
    return EXIT_OK


# --------------------------------------------------------------------------
# freeze
# --------------------------------------------------------------------------


def parse_sites(spec: str) -> list[tuple[str, int]]:
    """``"A0,A1,B0,B1"`` -> [("A", 0), ("A", 1), ("B", 0), ("B", 1)]."""
    out = []
    for token in spec.split(","):
        token = token.strip()
        label = token.rstrip("0123456789")
        digits = token[len(label):]
        if not label or not digits:
            raise CliError(f"bad site token {token!r}; expected e.g. A0", EXIT_MALFORMED)
        out.append((label, int(digits)))
    return out


def cmd_freeze(args) -> int:
    psi, _ = _load(args.path)
    partition = parse_sites(args.sites) if args.sites else list(SITE_PARTITION)
    if len(partition) != psi.d:
        raise CliError(f"--sites lists {len(partition)} modes, state has d={psi.d}", EXIT_FREEZE)
    try:
        block = freeze_block(psi, partition)
    except (DoubleOccupancy, UnsupportedN, DimensionMismatch) as exc:
        raise CliError(str(exc), EXIT_FREEZE) from None
    block["path"] = str(args.path)

    def render(p):
        print(f"frozen counterpart of {p['path']} (dims {p['dims'][0]}x{p['dims'][1]}):")
        for row in p["amplitude_matrix"]:
            print("  " + "  ".join(f"{e['re']:+.6f}{e['im']:+.6f}j" for e in row))
        print(f"schmidt coefficients: {p['schmidt_coefficients']}")
        print(f"concurrence (two-qubit):  {p['concurrence_2qubit']}")
        print(f"concurrence (fermionic):  {p['fermionic_concurrence']}")
        if p["concurrence_2f"] is not None:
            print(f"concurrence (pfaffian):   {p['concurrence_2f']}")

    _emit(block, args.json, render)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fermitangle", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="purity verdicts for a state file")
    p.add_argument("path")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--bipartition", "-M", type=int, default=1, metavar="M")
    group.add_argument("--all", action="store_true", help="every M in 1..N-1")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("examples", help="write reference state files")
    p.add_argument("outdir")
    p.add_argument("--seed", type=int, default=None, help=f"overrides ${SEED_ENV}")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("trap", help="fermionized harmonic-trap entropies")
    p.add_argument("--grid-points", type=int, default=600)
    p.add_argument("--extent", type=float, default=6.0)
    p.add_argument("--emit-kernels", metavar="DIR", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_trap)

    p = sub.add_parser("freeze", help="distinguishable counterpart of a two-site state")
    p.add_argument("path")
    p.add_argument("--sites", default=None, help="mode labels, default A0,A1,B0,B1")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_freeze)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except FermiTangleError as exc:
        log.debug("unhandled library error", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
