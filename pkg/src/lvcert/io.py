"""System files (JSON) and JSON-ready conversion of analysis results.

A system file looks like::

    {"name": "demo", "b": [1, 1], "A": [["2", "1/2"], [0, 3]]}

Numbers may be JSON numbers, decimal strings or ``"p/q"`` strings. JSON
decimals are read from their literal text, so ``2.1`` is exactly 21/10 in
rational mode. Rational strings are refused in float mode.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .core import DEFAULT_EPS, LVSystem, ModelError, classify_point

_RATIONAL = re.compile(r"^\s*[+-]?\d+\s*/\s*\d+\s*$")


class SystemFileError(ValueError):
    """Malformed system file; the message names the offending field."""


@dataclass(frozen=True)
class SystemFile:
    name: str
    b: tuple
    A: tuple
    mode: str = "rational"
    eps: float = DEFAULT_EPS

    def system(self) -> LVSystem:
        return LVSystem.create(self.b, self.A, mode=self.mode, eps=self.eps, name=self.name)


class _Literal(str):
    """A JSON decimal kept as its source text."""


def _number(value, where: str, mode: str):
    if isinstance(value, bool) or value is None or isinstance(value, (list, dict)):
        raise SystemFileError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, int):
        return Fraction(value) if mode == "rational" else float(value)
    text = str(value)
    if mode == "float":
        if _RATIONAL.match(text):
            raise SystemFileError(f"{where}: rational string {text!r} requires --mode rational")
        try:
            return float(text)
        except ValueError:
            raise SystemFileError(f"{where}: not a number: {text!r}") from None
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise SystemFileError(f"{where}: not a number: {text!r}") from None


def parse_system(text: str, mode: str = "rational", eps: float = DEFAULT_EPS) -> SystemFile:
    if mode not in ("rational", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    try:
        doc = json.loads(text, parse_float=_Literal)
    except json.JSONDecodeError as exc:
        raise SystemFileError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SystemFileError("top level must be an object")
    for key in ("b", "A"):
        if key not in doc:
            raise SystemFileError(f"missing field {key!r}")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise SystemFileError("name: expected a string")
    b, A = doc["b"], doc["A"]
    if not isinstance(b, list) or not b:
        raise SystemFileError("b: expected a nonempty array")
    if not isinstance(A, list) or len(A) != len(b):
        raise SystemFileError(f"A: expected {len(b)} rows to match b")
    bb = tuple(_number(v, f"b[{i}]", mode) for i, v in enumerate(b))
    rows = []
    for i, row in enumerate(A):
        if not isinstance(row, list) or len(row) != len(b):
            raise SystemFileError(f"A[{i}]: expected an array of {len(b)} numbers")
        rows.append(tuple(_number(v, f"A[{i}][{j}]", mode) for j, v in enumerate(row)))
    sf = SystemFile(name, bb, tuple(rows), mode, eps)
    try:
        sf.system()
    except ModelError as exc:
        raise SystemFileError(str(exc)) from None
    return sf


def load_system(path, mode: str = "rational", eps: float = DEFAULT_EPS) -> SystemFile:
    return parse_system(Path(path).read_text(), mode, eps)


def encode_number(v):
    """Fractions become ints or ``"p/q"`` strings; floats stay floats."""
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def encode_vec(x):
    return None if x is None else [encode_number(v) for v in x]


def dump_system(sf: SystemFile) -> str:
    doc = {"name": sf.name, "b": encode_vec(sf.b), "A": [encode_vec(r) for r in sf.A]}
    return json.dumps(doc, indent=2)


def labels(indices) -> list:
    """0-based species indices to the 1-based labels used in reports."""
    return [int(i) + 1 for i in indices]


def _detail(d):
    return [encode_number(v) if not isinstance(v, (bool, str)) else v for v in d]


def encode_check(rep) -> dict:
    return {
        "name": rep.name,
        "species": labels(rep.indices) if rep.name != "first_species_dominance" else [],
        "params": {k: encode_number(v) if not isinstance(v, list) else v for k, v in rep.params.items()},
        "holds": rep.holds,
        "margin": encode_number(rep.margin),
        "boundary": rep.boundary,
        "details": [_detail(d) for d in rep.details],
    }


def encode_certificate(cert) -> dict:
    eq = cert.equilibrium
    return {
        "mode": cert.mode,
        "variant": cert.variant,
        "extinct_order": labels(cert.extinct_order),
        "basis": list(cert.basis),
        "checks": [encode_check(c) for c in cert.checks],
        "equilibrium": None if eq is None else {"support": labels(eq.support), "status": eq.status, "point": encode_vec(eq.values)},
        "tolerance_dependent": cert.tolerance_dependent,
        "notes": list(cert.notes),
    }


def encode_verdict(v) -> dict:
    return {
        "outcome": v.outcome,
        "criterion": v.criterion,
        "survivors": labels(v.survivors),
        "attractor": encode_vec(v.attractor),
        "bound": v.bound,
    }


def encode_equilibria(sys: LVSystem, eqs) -> list:
    out = []
    for e in eqs:
        planes = {f"gamma_{i + 1}": classify_point(sys.gamma(i), e.point, sys.arith).value for i in range(sys.n)}
        out.append({"support": labels(e.support), "point": encode_vec(e.point), "planes": planes})
    return out


def encode_sim(rep, certified: bool) -> dict:
    return {
        "role": "check" if certified else "evidence only",
        "converged": rep.converged,
        "approaching": rep.approaching,
        "contradicted": rep.contradicted if certified else False,
        "max_distance": float(rep.distances.max()),
        "final_states": rep.final_states.tolist(),
        "liminf": rep.liminf.tolist(),
        "limsup": rep.limsup.tolist(),
        "bound_violation": rep.bound_violation,
        "reduced_bound_violation": rep.reduced_bound_violation,
        "lower_gaps": {str(i + 1): d for i, d in rep.lower_gaps.items()},
        "lower_violation": rep.lower_violation if rep.lower_gaps else None,
    }


__all__ = [
    "SystemFile",
    "SystemFileError",
    "dump_system",
    "encode_certificate",
    "encode_check",
    "encode_equilibria",
    "encode_number",
    "encode_sim",
    "encode_vec",
    "encode_verdict",
    "labels",
    "load_system",
    "parse_system",
]
