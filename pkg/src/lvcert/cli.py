"""Command-line front end: ``lvcert {analyze,simulate,verify,equilibria} SYSTEM.json``.

Analysis outcomes are data: every verdict, Inconclusive included, exits 0.
Exit status 1 means a certified verdict was contradicted by simulation or its
certificate failed to replay; 2 means bad input or an I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys as _sys
from pathlib import Path

import numpy as np

from . import __version__
from .analyzer import INCONCLUSIVE, analyze, replay_certificate
from .bounds import cascade_V, compute_U, compute_Y
from .core import ModelError
from .equilibria import MAX_ENUMERATION_N, enumerate_equilibria
from .io import (
    SystemFileError,
    encode_certificate,
    encode_equilibria,
    encode_sim,
    encode_vec,
    encode_verdict,
    load_system,
)
from .sim import integrate_batch, random_starts, verify_verdict

log = logging.getLogger("lvcert")

EXIT_OK, EXIT_CONTRADICTED, EXIT_INPUT = 0, 1, 2


def _meta(args) -> dict:
    flags = {k: v for k, v in vars(args).items() if k != "func"}
    return {"version": __version__, "flags": flags}


def _bounds(system) -> dict:
    return {
        "Y": encode_vec(compute_Y(system)),
        "U": encode_vec(compute_U(system)),
        "V": encode_vec(cascade_V(system).bound),
    }


def _emit(doc: dict, out) -> None:
    text = json.dumps(doc, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _report(args, system, verdict, sim=None) -> dict:
    eqs = encode_equilibria(system, enumerate_equilibria(system)) if system.n <= MAX_ENUMERATION_N else None
    return {
        "system": system.name,
        "verdict": encode_verdict(verdict),
        "certificate": encode_certificate(verdict.certificate),
        "bounds": _bounds(system),
        "equilibria": eqs,
        "sim": sim,
        "meta": _meta(args),
    }


def cmd_analyze(args, hook=None) -> int:
    system = load_system(args.system, args.mode, args.eps).system()
    verdict = analyze(system, args.variant, args.ordering_search)
    _emit(_report(args, system, verdict), args.out)
    return EXIT_OK


def cmd_verify(args, hook=None) -> int:
    """Analyze, replay the certificate, then simulate against the verdict.

    ``hook`` receives the certificate before replay (a test seam for tampering).
    """
    system = load_system(args.system, args.mode, args.eps).system()
    verdict = analyze(system, args.variant, args.ordering_search)
    if hook is not None:
        hook(verdict.certificate)
    problems = replay_certificate(system, verdict.certificate)
    certified = verdict.outcome != INCONCLUSIVE
    rep = verify_verdict(system, verdict, samples=args.samples, seed=args.seed, t_end=args.t_end, dt=args.dt, tol=args.tol)
    sim = encode_sim(rep, certified)
    doc = _report(args, system, verdict, sim)
    doc["replay"] = problems
    _emit(doc, args.out)
    if problems:
        log.error("certificate replay failed: %s", "; ".join(problems))
        return EXIT_CONTRADICTED
    if certified and rep.contradicted:
        log.error("simulation contradicts the certified verdict (max distance %.3g)", rep.distances.max())
        return EXIT_CONTRADICTED
    if certified and not rep.converged:
        log.warning("runs still approaching the attractor at t_end (max distance %.3g)", rep.distances.max())
    return EXIT_OK


def _write_csv(path: Path, times, states) -> None:
    n = states.shape[1]
    lines = [",".join(["t"] + [f"x{i + 1}" for i in range(n)])]
    for t, row in zip(times, states):
        lines.append(",".join(format(float(v), ".17g") for v in (t, *row)))
    path.write_text("\n".join(lines) + "\n")


def _parse_x0(text: str, n: int) -> np.ndarray:
    try:
        x0 = np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise SystemFileError(f"--x0: not a comma-separated list of numbers: {text!r}") from None
    if len(x0) != n:
        raise SystemFileError(f"--x0: expected {n} components, got {len(x0)}")
    return x0


def cmd_simulate(args, hook=None) -> int:
    system = load_system(args.system, args.mode, args.eps).system()
    if args.x0 is not None:
        X0 = _parse_x0(args.x0, system.n)[None, :]
    else:
        X0 = random_starts(system, args.samples, args.seed)
    times, states, _ = integrate_batch(system, X0, args.t_end, args.dt, args.stride)
    out = Path(args.out or "trajectory.csv")
    if len(X0) == 1:
        paths = [out]
    else:
        paths = [out.with_name(f"{out.stem}_{k + 1}{out.suffix or '.csv'}") for k in range(len(X0))]
    for p, traj in zip(paths, states):
        _write_csv(p, times, traj)
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_equilibria(args, hook=None) -> int:
    system = load_system(args.system, args.mode, args.eps).system()
    doc = {"system": system.name, "equilibria": encode_equilibria(system, enumerate_equilibria(system)), "meta": _meta(args)}
    _emit(doc, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lvcert", description="Certify global attractors of competitive Lotka-Volterra systems.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("system", help="system JSON file")
    common.add_argument("--mode", choices=["rational", "float"], default="rational")
    common.add_argument("--eps", type=float, default=1e-9, help="comparison tolerance in float mode")
    common.add_argument("--out", default=None, help="output path (default: stdout for reports)")
    analysis = argparse.ArgumentParser(add_help=False)
    analysis.add_argument("--ordering-search", choices=["greedy", "exhaustive"], default="greedy")
    analysis.add_argument("--variant", choices=["U", "Y"], default="U", help="bound used by the partial-persistence criteria")
    simflags = argparse.ArgumentParser(add_help=False)
    simflags.add_argument("--t-end", type=float, default=1000.0)
    simflags.add_argument("--dt", type=float, default=1e-2)
    simflags.add_argument("--samples", type=int, default=20)
    simflags.add_argument("--seed", type=int, default=0)

    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common, analysis], help="certify a verdict")
    a.set_defaults(func=cmd_analyze)
    s = sub.add_parser("simulate", parents=[common, simflags], help="write trajectory CSVs")
    s.add_argument("--x0", default=None, help="comma-separated start; overrides --samples")
    s.add_argument("--stride", type=int, default=10, help="save every STRIDE-th step")
    s.set_defaults(func=cmd_simulate)
    v = sub.add_parser("verify", parents=[common, analysis, simflags], help="analyze, replay and simulate")
    v.add_argument("--tol", type=float, default=1e-6)
    v.set_defaults(func=cmd_verify)
    e = sub.add_parser("equilibria", parents=[common], help="list equilibria and plane positions")
    e.set_defaults(func=cmd_equilibria)
    return p


def main(argv=None, hook=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, hook)
    except (SystemFileError, ModelError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
