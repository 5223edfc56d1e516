"""Greedy selection under a cardinality constraint."""
from __future__ import annotations

from divmax.core import Instance, SolveReport, greedy_bound, make_report, scaled_marginal
from divmax.errors import PTooLarge, WrongConstraintKind
from divmax.matroid import UniformMatroid


def greedy_solve(inst: Instance) -> SolveReport:
    """Build a size-``p`` set one element at a time.

    Each step adds the element with the largest score
    ``f_u(S) / 2 + lam * d_u(S)``; the quality gain is deliberately halved
    (this is what gives the ``1 / (2 alpha)`` guarantee). Ties go to the
    lowest index. The report's ``trace`` records the chosen element and its
    score for every step.
    """
    c = inst.constraint
    if not isinstance(c, UniformMatroid):
        raise WrongConstraintKind(f"greedy needs a uniform constraint, got {c.kind}")
    p, n = c.p, inst.n
    if p > n:
        raise PTooLarge(f"p = {p} exceeds ground set size {n}")

    selected: list[int] = []
    trace = []
    for _ in range(p):
        best_u, best_score = -1, float("-inf")
        for u in range(n):
            if u in selected:
                continue
            score = scaled_marginal(inst, u, selected)
            if score > best_score:
                best_u, best_score = u, score
        selected.append(best_u)
        trace.append({"element": best_u, "score": best_score})

    return make_report(
        inst, "greedy", selected, iterations=p, bound=greedy_bound(inst.alpha), trace=trace
    )
