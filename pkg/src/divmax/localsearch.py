"""Single-swap local search under a matroid constraint."""
from __future__ import annotations

import random
import warnings
from itertools import combinations

from divmax.core import (
    TOL,
    Instance,
    SolveReport,
    local_search_bound,
    make_report,
    objective_value,
)
from divmax.errors import IterationLimitExceeded, RankTooSmall
from divmax.matroid import extend_to_basis

IMPROVE_MODES = ("first", "best")
SEED_MODES = ("pair", "random")


def best_seed_pair(inst: Instance) -> tuple[int, int]:
    """Independent pair ``{x, y}`` maximizing ``f({x, y}) + lam * d(x, y)``.

    Pairs are scanned lexicographically and only a strictly better value
    replaces the incumbent.
    """
    c = inst.constraint
    if c.rank() < 2:
        raise RankTooSmall(f"seed pair needs rank >= 2, got {c.rank()}")
    best, best_val = None, float("-inf")
    for x, y in combinations(range(inst.n), 2):
        if not c.is_independent((x, y)):
            continue
        val = objective_value(inst, (x, y))
        if val > best_val:
            best, best_val = (x, y), val
    if best is None:
        raise RankTooSmall("no independent pair exists")
    return best


def _best_singleton(inst: Instance) -> tuple[int, ...]:
    best, best_val = None, float("-inf")
    for u in range(inst.n):
        if inst.constraint.is_independent((u,)):
            val = objective_value(inst, (u,))
            if val > best_val:
                best, best_val = u, val
    return (best,)


def _random_basis(inst: Instance, seed: int) -> tuple[int, ...]:
    order = list(range(inst.n))
    random.Random(seed).shuffle(order)
    cur: set[int] = set()
    for e in order:
        if inst.constraint.is_independent(cur | {e}):
            cur.add(e)
    return tuple(sorted(cur))


def find_improving_swap(
    inst: Instance, s: tuple[int, ...], improve: str = "first", eps: float = TOL
) -> tuple[int, int, float] | None:
    """Return ``(u, v, phi)`` for a feasible swap ``s + u - v`` beating ``phi(s) + eps``.

    Candidates are scanned with ``u`` over the complement and ``v`` over ``s``,
    both ascending. ``"first"`` takes the first hit, ``"best"`` the largest
    objective (earliest on ties).
    """
    current = objective_value(inst, s)
    members = set(s)
    found = None
    for u in range(inst.n):
        if u in members:
            continue
        for v in s:
            cand = (members - {v}) | {u}
            if not inst.constraint.is_independent(cand):
                continue
            val = objective_value(inst, sorted(cand))
            if val > current + eps and (found is None or val > found[2]):
                found = (u, v, val)
                if improve == "first":
                    return found
    return found


def local_search_solve(
    inst: Instance,
    improve: str = "first",
    max_iters: int | None = None,
    seed_strategy: str = "pair",
    seed: int = 0,
) -> SolveReport:
    """Swap elements in and out of a basis until no swap gains more than ``TOL``.

    The starting basis extends the best independent pair (``seed_strategy
    = "pair"``) or is a shuffled greedy basis (``"random"``, ablation only).
    Hitting ``max_iters`` (default ``10 * n * rank``) flags the report as
    truncated and emits :class:`IterationLimitExceeded`.
    """
    if improve not in IMPROVE_MODES:
        raise ValueError(f"improve must be one of {IMPROVE_MODES}, got {improve!r}")
    if seed_strategy not in SEED_MODES:
        raise ValueError(f"seed_strategy must be one of {SEED_MODES}, got {seed_strategy!r}")
    c, n = inst.constraint, inst.n
    r = c.rank()
    bound = local_search_bound(inst.alpha)
    if r == 1:
        s = _best_singleton(inst)
        return make_report(
            inst, "local", s, iterations=0, bound=bound,
            trace=[{"objective": objective_value(inst, s)}],
        )
    if max_iters is None:
        max_iters = 10 * n * r

    if seed_strategy == "pair":
        s = extend_to_basis(c, best_seed_pair(inst), n)
    else:
        s = _random_basis(inst, seed)
    trace = [{"objective": objective_value(inst, s)}]
    iterations = 0
    truncated = False
    while True:
        swap = find_improving_swap(inst, s, improve)
        if swap is None:
            break
        if iterations >= max_iters:
            truncated = True
            warnings.warn(
                f"local search stopped after {max_iters} swaps with an improving swap left",
                IterationLimitExceeded,
                stacklevel=2,
            )
            break
        u, v, val = swap
        s = tuple(sorted((set(s) - {v}) | {u}))
        iterations += 1
        trace.append({"swap_in": u, "swap_out": v, "objective": val})

    return make_report(
        inst, "local", s, iterations=iterations, bound=bound, truncated=truncated, trace=trace
    )
