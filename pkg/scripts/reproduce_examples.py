"""Analyze (and optionally simulate) the bundled example systems.

    python3 scripts/reproduce_examples.py
    python3 scripts/reproduce_examples.py --simulate --samples 20 --t-end 1000
"""

import argparse
from dataclasses import dataclass
from pathlib import Path

from lvcert.analyzer import analyze
from lvcert.bounds import cascade_V, compute_U, compute_Y
from lvcert.equilibria import enumerate_equilibria
from lvcert.io import encode_vec, labels, load_system
from lvcert.sim import verify_verdict

DATA = Path(__file__).resolve().parent.parent / "data"


@dataclass
class Config:
    simulate: bool = False
    samples: int = 20
    seed: int = 0
    t_end: float = 1000.0
    dt: float = 1e-2
    tol: float = 1e-6


def show(path: Path, cfg: Config) -> None:
    s = load_system(path).system()
    v = analyze(s)
    print(f"== {s.name} ({path.name})")
    print(f"   Y = {encode_vec(compute_Y(s))}")
    print(f"   U = {encode_vec(compute_U(s))}")
    c = cascade_V(s)
    print(f"   V = {encode_vec(c.bound)}  extinct order {labels(c.extinct)}")
    print(f"   equilibria: {len(enumerate_equilibria(s))}")
    print(f"   verdict: {v.outcome} via {v.criterion}, survivors {labels(v.survivors)}")
    if v.attractor is not None:
        print(f"   x* = {encode_vec(v.attractor)}")
    if cfg.simulate:
        rep = verify_verdict(s, v, samples=cfg.samples, seed=cfg.seed, t_end=cfg.t_end, tol=cfg.tol, dt=cfg.dt)
        print(f"   simulation: converged={rep.converged} approaching={rep.approaching} max distance {rep.distances.max():.3e}")
        print(f"   limsup - U = {rep.bound_violation:+.3e}, 0.5*delta - liminf = {rep.lower_violation:+.3e}")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--simulate", action="store_true")
    p.add_argument("--samples", type=int, default=Config.samples)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--t-end", type=float, default=Config.t_end)
    p.add_argument("--dt", type=float, default=Config.dt)
    p.add_argument("--tol", type=float, default=Config.tol)
    cfg = Config(**{k.replace("-", "_"): val for k, val in vars(p.parse_args()).items()})
    for path in sorted(DATA.glob("*.json")):
        show(path, cfg)


if __name__ == "__main__":
    main()
