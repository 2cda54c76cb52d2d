"""Tally which criterion certifies randomly drawn systems.

Draws seeded systems on a half-integer grid, runs the analyzer on each and
prints a table of criterion counts per dimension. With --check every
certificate is replayed and the float-mode verdict is compared with the exact
one.
"""

import argparse
import collections
import json
import random
from dataclasses import asdict, dataclass

from lvcert.analyzer import analyze, replay_certificate
from lvcert.generate import mixed_system, random_system


@dataclass
class SweepConfig:
    count: int = 500
    n_min: int = 2
    n_max: int = 5
    seed: int = 0
    generator: str = "mixed"
    variant: str = "U"
    check: bool = False


def sweep(cfg: SweepConfig) -> dict:
    rng = random.Random(cfg.seed)
    draw = mixed_system if cfg.generator == "mixed" else random_system
    table = collections.defaultdict(collections.Counter)
    problems = 0
    for _ in range(cfg.count):
        n = rng.randint(cfg.n_min, cfg.n_max)
        s = draw(rng, n)
        v = analyze(s, variant=cfg.variant)
        table[n][v.criterion] += 1
        if cfg.check:
            problems += bool(replay_certificate(s, v.certificate))
            if v.criterion != "none":
                problems += analyze(s.as_float(), variant=cfg.variant).survivors != v.survivors
    return {"config": asdict(cfg), "counts": {n: dict(c) for n, c in sorted(table.items())}, "problems": problems}


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--count", type=int, default=SweepConfig.count)
    p.add_argument("--n-min", type=int, default=SweepConfig.n_min)
    p.add_argument("--n-max", type=int, default=SweepConfig.n_max)
    p.add_argument("--seed", type=int, default=SweepConfig.seed)
    p.add_argument("--generator", choices=["mixed", "uniform"], default=SweepConfig.generator)
    p.add_argument("--variant", choices=["U", "Y"], default=SweepConfig.variant)
    p.add_argument("--check", action="store_true", help="replay certificates and compare float mode")
    p.add_argument("--json", action="store_true", help="print the raw result as JSON")
    args = vars(p.parse_args())
    as_json = args.pop("json")
    result = sweep(SweepConfig(**args))
    if as_json:
        print(json.dumps(result, indent=2))
        return
    names = sorted({c for counts in result["counts"].values() for c in counts})
    print("n   " + "".join(f"{c:>10}" for c in names))
    for n, counts in result["counts"].items():
        print(f"{n:<4}" + "".join(f"{counts.get(c, 0):>10}" for c in names))
    if args["check"]:
        print(f"replay or float-mode problems: {result['problems']}")


if __name__ == "__main__":
    main()
