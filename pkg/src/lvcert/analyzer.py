"""Decide which species survive and certify the global attractor.

Criteria are tried strongest first: coexistence of all species, persistence of
a subset with the rest neutral or invaded, the extinction cascade, then the
single-survivor shortcuts. Every inequality consulted is stored by name and
parameters so that :func:`replay_certificate` can recompute it from (b, A)
alone.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

from . import bounds as bnd
from .conditions import (
    ConditionReport,
    CriterionDisagreement,
    check_chain_order,
    check_extinction_order,
    check_first_species_dominance,
    check_pair_ratio,
    check_persistence_algebraic,
    check_persistence_geometric,
    check_ratio_sum,
    find_extinction_order,
)
from .core import LVSystem, Position, classify_point, dot
from .equilibria import SupportSolve, enumerate_equilibria, support_solve

log = logging.getLogger(__name__)

INTERIOR = "InteriorAttractor"
BOUNDARY = "BoundaryAttractor"
SINGLE = "SingleSurvivor"
INCONCLUSIVE = "Inconclusive"

CRITERIA = ("Th2.1", "Th2.5", "Th2.5-Yvariant", "Th2.10", "Cor2.8", "Cor2.13", "none")


@dataclass
class Certificate:
    mode: str
    variant: str
    bounds: dict
    extinct_order: tuple
    checks: list = field(default_factory=list)
    basis: list = field(default_factory=list)  # positions in ``checks`` that justify the verdict
    equilibrium: SupportSolve | None = None
    tolerance_dependent: bool = False
    notes: list = field(default_factory=list)

    def record(self, rep: ConditionReport) -> int:
        self.checks.append(rep)
        return len(self.checks) - 1


@dataclass(frozen=True)
class Verdict:
    outcome: str
    survivors: tuple
    attractor: tuple | None
    criterion: str
    certificate: Certificate
    bound: str | None = None  # name of the bound vector the attractor sits under


# -- bound lookup and named checks ---------------------------------------------------------


def resolve_bound(sys: LVSystem, name: str) -> tuple:
    if name == "Y":
        return bnd.compute_Y(sys)
    if name == "U":
        return bnd.compute_U(sys)
    if name == "V":
        return bnd.cascade_V(sys).bound
    raise KeyError(name)


def _with_params(rep: ConditionReport, params: dict) -> ConditionReport:
    return ConditionReport(rep.name, rep.indices, rep.holds, rep.margin, rep.details, rep.boundary, dict(params))


def _on_nullcline(sys: LVSystem, support, k: int, relation: str) -> ConditionReport:
    ar = sys.arith
    sol = support_solve(sys, support)
    if sol.values is None:
        return ConditionReport("attractor_vs_nullcline", (k,), False, None, (("unsolved", sol.status),))
    val = dot(sys.A[k], sol.values)
    one = ar.one()
    holds = ar.eq(val, one) if relation == "eq" else ar.ge(val, one)
    return ConditionReport("attractor_vs_nullcline", (k,), holds, val - one, ((f"alpha_{k}.x*", val, one, holds),))


def _positive(sys: LVSystem, support) -> ConditionReport:
    sol = support_solve(sys, support)
    if sol.status != "ok":
        return ConditionReport("attractor_positive", tuple(support), False, None, (("status", sol.status),))
    vals = [sol.values[j] for j in sol.support]
    margin = min(vals) if vals else sys.arith.one()
    return ConditionReport("attractor_positive", tuple(sol.support), True, margin, tuple(("x*", j, sol.values[j], True) for j in sol.support))


def _within(sys: LVSystem, support, bound: str) -> ConditionReport:
    ar = sys.arith
    sol = support_solve(sys, support)
    W = resolve_bound(sys, bound)
    if sol.values is None:
        return ConditionReport("attractor_within_bound", tuple(support), False, None, (("unsolved", sol.status),))
    idx = sol.support
    parts = tuple((f"x*_{j} <= {bound}_{j}", sol.values[j], W[j], ar.le(sol.values[j], W[j])) for j in idx)
    margin = min((W[j] - sol.values[j] for j in idx), default=ar.one())
    return ConditionReport("attractor_within_bound", tuple(idx), all(p[3] for p in parts), margin, parts)


def _carrier_column(sys: LVSystem, k: int, relation: str) -> ConditionReport:
    """a_kk == a_jk (or a_kk <= a_jk) for every j != k."""
    A, ar = sys.A, sys.arith
    parts = []
    for j in range(sys.n):
        if j == k:
            continue
        ok = ar.eq(A[k][k], A[j][k]) if relation == "eq" else ar.le(A[k][k], A[j][k])
        parts.append((f"a[{k}][{k}] vs a[{j}][{k}]", A[k][k], A[j][k], ok))
    margin = min((A[j][k] - A[k][k] for j in range(sys.n) if j != k), default=ar.one())
    return ConditionReport("carrier_column", (k,), all(p[3] for p in parts), margin, tuple(parts))


def check_face_equilibria_below(sys: LVSystem) -> ConditionReport:
    """Every equilibrium missing species i is below gamma_i, for every i.

    Informational only: this is an open conjecture as a coexistence criterion
    and is never used to certify anything.
    """
    ar = sys.arith
    eqs = enumerate_equilibria(sys)
    parts = []
    holds = True
    margin = None
    for i in range(sys.n):
        for e in eqs:
            if i in e.support:
                continue
            val = dot(sys.A[i], e.point)
            ok = classify_point(sys.gamma(i), e.point, ar) is Position.BELOW
            holds &= ok
            parts.append((f"support {list(e.support)} vs gamma_{i}", val, ar.one(), ok))
            m = ar.one() - val
            margin = m if margin is None else min(margin, m)
    return ConditionReport("face_equilibria_below", (), holds, margin, tuple(parts))


def _geometric(sys, k, bound, active=None):
    W = resolve_bound(sys, bound)
    return check_persistence_geometric(sys, W, k, active)


def _algebraic(sys, k, bound, active=None):
    W = resolve_bound(sys, bound)
    return check_persistence_algebraic(sys, W, k, active)


CHECKS: dict[str, Callable[..., ConditionReport]] = {
    "persistence_algebraic": lambda sys, k, bound, active=None: _algebraic(sys, k, bound, active),
    "persistence_geometric": lambda sys, k, bound, active=None: _geometric(sys, k, bound, active),
    "extinction_order": lambda sys, order: check_extinction_order(sys, order),
    "chain_order": lambda sys, ordering: check_chain_order(sys, ordering),
    "attractor_vs_nullcline": lambda sys, support, k, relation: _on_nullcline(sys, support, k, relation),
    "attractor_positive": lambda sys, support: _positive(sys, support),
    "attractor_within_bound": lambda sys, support, bound: _within(sys, support, bound),
    "carrier_column": lambda sys, k, relation: _carrier_column(sys, k, relation),
    "ratio_sum": lambda sys, i: check_ratio_sum(sys, i),
    "pair_ratio": lambda sys, i, j: check_pair_ratio(sys, i, j),
    "first_species_dominance": lambda sys: check_first_species_dominance(sys),
    "face_equilibria_below": lambda sys: check_face_equilibria_below(sys),
}


def evaluate_check(sys: LVSystem, name: str, **params) -> ConditionReport:
    rep = CHECKS[name](sys, **params)
    return _with_params(rep, params)


# -- the decision procedure ---------------------------------------------------------------


class _Run:
    def __init__(self, sys: LVSystem, cert: Certificate):
        self.sys = sys
        self.cert = cert

    def check(self, name: str, **params) -> tuple[int, ConditionReport]:
        try:
            rep = evaluate_check(self.sys, name, **params)
        except CriterionDisagreement as exc:
            self.cert.notes.append(f"{name} {params}: {exc}")
            rep = ConditionReport(name, (), False, None, (("disagreement", str(exc)),), True, dict(params))
        return self.cert.record(rep), rep


def _outcome(n: int, survivors) -> str:
    if len(survivors) == n:
        return INTERIOR
    if len(survivors) == 1:
        return SINGLE
    return BOUNDARY


def analyze(sys: LVSystem, variant: str = "U", ordering_search: str = "greedy", criteria=None) -> Verdict:
    """Run the criteria in precedence order and return a certified verdict.

    ``variant`` is ``"U"`` or ``"Y"``; it selects which bound the partial
    persistence criterion and the single-carrier shortcut use, together with
    their equality / on-or-above attractor requirement.

    ``criteria`` restricts the search to the named criteria (``"Th2.5"``
    stands for both variants). The single-carrier and chain shortcuts are
    special cases of the earlier criteria and only decide on their own when
    selected explicitly.
    """
    if variant not in ("U", "Y"):
        raise ValueError("variant must be 'U' or 'Y'")
    selected = set(CRITERIA[:-1] if criteria is None else criteria)
    unknown = selected - set(CRITERIA[:-1])
    if unknown:
        raise ValueError(f"unknown criteria {sorted(unknown)}")
    n, ar = sys.n, sys.arith
    casc = bnd.cascade_V(sys)
    cert = Certificate(
        mode=ar.mode,
        variant=variant,
        bounds={"Y": bnd.compute_Y(sys), "U": bnd.compute_U(sys), "V": casc.bound},
        extinct_order=casc.extinct,
    )
    run = _Run(sys, cert)
    everyone = list(range(n))

    for i in range(n):
        run.check("ratio_sum", i=i)
    for i in range(n):
        for j in range(n):
            if i != j:
                run.check("pair_ratio", i=i, j=j)
    run.check("first_species_dominance")

    def finish(criterion, survivors, bound, basis):
        survivors = tuple(sorted(survivors))
        cert.basis = list(basis)
        cert.equilibrium = support_solve(sys, survivors)
        return Verdict(_outcome(n, survivors), survivors, cert.equilibrium.values, criterion, cert, bound)

    def attractor_checks(support, bound):
        a, ra = run.check("attractor_positive", support=list(support))
        if not ra.holds:
            return None
        b, rb = run.check("attractor_within_bound", support=list(support), bound=bound)
        if not rb.holds:
            cert.notes.append(f"attractor on {list(support)} exceeds bound {bound}")
            return None
        return [a, b]

    # every species persists
    alg = [run.check("persistence_algebraic", k=k, bound="U") for k in everyone]
    geo_u = [run.check("persistence_geometric", k=k, bound="U") for k in everyone]
    if "Th2.1" in selected and all(r.holds for _, r in alg):
        if not all(r.holds for _, r in geo_u):
            cert.notes.append("pairwise persistence holds for all species but the vertex test does not")
        extra = attractor_checks(everyone, "U")
        if extra is not None:
            return finish("Th2.1", everyone, "U", [p for p, _ in alg] + extra)

    # persistence of a subset, the others neutral (or invaded, with Y)
    if variant == "U":
        geo_w = geo_u
    else:
        geo_w = [run.check("persistence_geometric", k=k, bound="Y") for k in everyone]
    J = [k for k, (_, r) in zip(everyone, geo_w) if r.holds]
    if selected & {"Th2.5", "Th2.5-Yvariant"} and 0 < len(J) < n:
        extra = attractor_checks(J, variant)
        if extra is not None:
            relation = "eq" if variant == "U" else "ge"
            outs = [run.check("attractor_vs_nullcline", support=J, k=k, relation=relation) for k in everyone if k not in J]
            if all(r.holds for _, r in outs):
                if not ar.exact and relation == "eq":
                    cert.tolerance_dependent = True
                basis = [geo_w[k][0] for k in J] + extra + [p for p, _ in outs]
                return finish("Th2.5" if variant == "U" else "Th2.5-Yvariant", J, variant, basis)

    # extinction cascade
    if "Th2.10" in selected and casc.extinct:
        S = [k for k in everyone if k not in casc.extinct]
        p_order, r_order = run.check("extinction_order", order=list(casc.extinct))
        pers = [run.check("persistence_algebraic", k=k, bound="V", active=S) for k in S]
        for k in S:
            run.check("persistence_geometric", k=k, bound="V", active=S)
        if r_order.holds and all(r.holds for _, r in pers):
            extra = attractor_checks(S, "V")
            if extra is not None:
                return finish("Th2.10", S, "V", [p_order] + [p for p, _ in pers] + extra)

    # single carrier species
    relation = "eq" if variant == "U" else "le"
    for k in everyone if "Cor2.8" in selected else ():
        p_geo, r_geo = geo_w[k]
        if not r_geo.holds:
            continue
        p_col, r_col = run.check("carrier_column", k=k, relation=relation)
        if r_col.holds:
            extra = attractor_checks([k], variant)
            if extra is not None:
                return finish("Cor2.8", [k], variant, [p_geo, p_col] + extra)

    order = find_extinction_order(sys, ordering_search, full=True)
    if "Cor2.13" in selected and order is not None and n > 1:
        survivor = next(k for k in everyone if k not in order)
        p_chain, r_chain = run.check("chain_order", ordering=list(order) + [survivor])
        if r_chain.holds:
            extra = attractor_checks([survivor], "Y")
            if extra is not None:
                return finish("Cor2.13", [survivor], "Y", [p_chain] + extra)

    if n <= 12:
        run.check("face_equilibria_below")
    cert.notes.append("no criterion applies")
    return Verdict(INCONCLUSIVE, (), None, "none", cert, None)


def replay_certificate(sys: LVSystem, cert: Certificate) -> list:
    """Recompute every recorded check from the system; return descriptions of mismatches."""
    problems = []
    for name in ("Y", "U", "V"):
        if tuple(cert.bounds[name]) != resolve_bound(sys, name):
            problems.append(f"bound {name} differs")
    if tuple(cert.extinct_order) != bnd.cascade_V(sys).extinct:
        problems.append("extinct order differs")
    for pos, rep in enumerate(cert.checks):
        try:
            fresh = evaluate_check(sys, rep.name, **rep.params)
        except CriterionDisagreement as exc:
            fresh = ConditionReport(rep.name, (), False, None, (("disagreement", str(exc)),), True)
        if fresh.holds != rep.holds:
            problems.append(f"check {pos} {rep.name} {rep.params}: recorded {rep.holds}, recomputed {fresh.holds}")
        elif cert.mode == "rational" and fresh.margin != rep.margin:
            problems.append(f"check {pos} {rep.name} {rep.params}: margin differs")
    for pos in cert.basis:
        if pos >= len(cert.checks) or not cert.checks[pos].holds:
            problems.append(f"basis entry {pos} does not hold")
    return problems
