"""Exhaustive oracles, seeded instance generators and inequality validators.

The validators evaluate both sides of the structural inequalities behind
the approximation guarantees on concrete sets, so a solver run can be
audited numerically rather than trusted.
"""
from __future__ import annotations

import math
import os
import time
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Any, Iterable, Sequence

import numpy as np

from divmax.core import (
    TOL,
    CoverageObjective,
    ElementSet,
    Instance,
    ModularObjective,
    SemiMetric,
    SolveReport,
    cross_sum,
    element_set,
    greedy_bound,
    local_search_bound,
    objective_value,
    pairwise_sum,
    validate_semimetric,
)
from divmax.errors import OverlappingSets, PreconditionViolated, SearchSpaceTooLarge
from divmax.greedy import greedy_solve
from divmax.localsearch import local_search_solve
from divmax.matroid import (
    Matroid,
    PartitionMatroid,
    UniformMatroid,
    enumerate_bases,
    exchange_bijection,
)

DEFAULT_MAX_STATES = 10**6
BETAS = (1.0, 1.5, 2.0, 3.0)
LAMBDAS = (0.0, 0.5, 1.0, 2.0)
OBJECTIVE_KINDS = ("modular", "coverage")
CONSTRAINT_KINDS = ("uniform", "partition")


def max_states() -> int:
    """Oracle search cap, overridable through ``DIVMAX_MAX_STATES``."""
    return int(os.environ.get("DIVMAX_MAX_STATES", DEFAULT_MAX_STATES))


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class RatioReport:
    exact_value: float
    heuristic_value: float
    ratio: float
    bound: float
    satisfied: bool
    algorithm: str = ""
    alpha: float = 1.0
    exact_set: ElementSet = ()
    heuristic_set: ElementSet = ()

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["exact_set"] = list(self.exact_set)
        d["heuristic_set"] = list(self.heuristic_set)
        return d


def ratio_report(
    report: SolveReport, exact_set: Sequence[int], exact_value: float, bound: float
) -> RatioReport:
    # an all-zero optimum is matched by any feasible answer
    ratio = report.objective_value / exact_value if exact_value > 0 else 1.0
    return RatioReport(
        exact_value=exact_value,
        heuristic_value=report.objective_value,
        ratio=ratio,
        bound=bound,
        satisfied=ratio >= bound - TOL,
        algorithm=report.algorithm,
        alpha=report.alpha,
        exact_set=tuple(exact_set),
        heuristic_set=tuple(report.selected),
    )


@dataclass
class LemmaReport:
    lemma: str
    lhs: float
    rhs: float
    margin: float
    witness: dict[str, Any] = field(default_factory=dict)
    status: str = "checked"
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def skipped(self) -> bool:
        return self.status == "skipped"

    @property
    def holds(self) -> bool:
        return self.skipped or self.margin >= -TOL

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["holds"] = self.holds
        return d


def _lemma(lemma: str, lhs: float, rhs: float, witness: dict[str, Any], **extra: Any) -> LemmaReport:
    return LemmaReport(lemma=lemma, lhs=lhs, rhs=rhs, margin=lhs - rhs, witness=witness, extra=extra)


def _skipped(lemma: str, reason: str, witness: dict[str, Any]) -> LemmaReport:
    return LemmaReport(
        lemma=lemma, lhs=0.0, rhs=0.0, margin=0.0, witness=witness,
        status="skipped", extra={"reason": reason},
    )


# ---------------------------------------------------------------------------
# exact oracles
# ---------------------------------------------------------------------------


def exact_uniform(inst: Instance, p: int | None = None) -> tuple[ElementSet, float]:
    """Best size-``p`` subset by exhaustive search (lexicographically first winner)."""
    if p is None:
        if not isinstance(inst.constraint, UniformMatroid):
            raise PreconditionViolated("p is required for non-uniform constraints")
        p = inst.constraint.p
    if not 0 <= p <= inst.n:
        raise PreconditionViolated(f"p = {p} outside [0, {inst.n}]")
    states = math.comb(inst.n, p)
    if states > max_states():
        raise SearchSpaceTooLarge(f"C({inst.n}, {p}) = {states} subsets exceed cap {max_states()}")
    best, best_val = (), float("-inf")
    for combo in combinations(range(inst.n), p):
        val = objective_value(inst, combo)
        if val > best_val:
            best, best_val = combo, val
    return best, best_val


def exact_matroid(inst: Instance) -> tuple[ElementSet, float]:
    """Best basis of the instance's matroid by exhaustive search."""
    cap = max_states()
    bases, overflow = enumerate_bases(inst.constraint, inst.n, cap)
    if overflow:
        raise SearchSpaceTooLarge(f"more than {cap} bases")
    best, best_val = (), float("-inf")
    for b in bases:
        val = objective_value(inst, b)
        if val > best_val:
            best, best_val = b, val
    return best, best_val


# ---------------------------------------------------------------------------
# inequality validators
# ---------------------------------------------------------------------------


def check_lemma1(m: SemiMetric, x: Iterable[int], y: Iterable[int]) -> LemmaReport:
    """``alpha (|X| - 1) d(X, Y) >= |Y| d(X)`` for disjoint ``X``, ``Y``."""
    x, y = element_set(x, m.n), element_set(y, m.n)
    if set(x) & set(y):
        raise OverlappingSets("X and Y must be disjoint")
    if not x:
        raise PreconditionViolated("X must be non-empty")
    lhs = m.alpha * (len(x) - 1) * cross_sum(m, x, y)
    rhs = len(y) * pairwise_sum(m, x)
    return _lemma("lemma1", lhs, rhs, {"X": list(x), "Y": list(y)})


def _split(
    c: Matroid, s: Sequence[int], o: Sequence[int], g: dict[int, int]
) -> tuple[list[int], list[int]]:
    """Return ``(B, C) = (S - O, O - S)`` after checking ``g`` is a valid exchange pairing."""
    s_set, o_set = set(s), set(o)
    if len(s_set) != len(o_set):
        raise PreconditionViolated("S and O must have equal size")
    b = [e for e in s if e not in o_set]
    cc = [e for e in o if e not in s_set]
    if set(g) != set(b) or sorted(g.values()) != sorted(cc):
        raise PreconditionViolated("g must be a bijection from S - O onto O - S")
    for bi, ci in g.items():
        if not c.is_independent((s_set - {bi}) | {ci}):
            raise PreconditionViolated(f"swap out {bi}, in {ci} is not independent")
    return b, cc


def check_lemma3(
    inst: Instance, s: Sequence[int], o: Sequence[int], g: dict[int, int]
) -> LemmaReport:
    """``sum_i f(S - b_i + c_i) >= (t - 2) f(S) + f(O)``."""
    b, _ = _split(inst.constraint, s, o, g)
    t = len(b)
    witness = {"S": sorted(s), "O": sorted(o), "pairs": [[bi, g[bi]] for bi in b]}
    if t == 0:
        return _skipped("lemma3", "S = O", witness)
    if t < 2:
        raise PreconditionViolated(f"needs t >= 2, got t = {t}")
    f = inst.objective
    s_set = set(s)
    lhs = sum(f.value(sorted((s_set - {bi}) | {g[bi]})) for bi in b)
    rhs = (t - 2) * f.value(s) + f.value(o)
    return _lemma("lemma3", lhs, rhs, witness, t=t)


def check_lemma4(
    m: SemiMetric, b: Sequence[int], c: Sequence[int], pairs: Sequence[tuple[int, int]]
) -> LemmaReport:
    """``alpha (d(B, C) - sum_i d(b_i, c_i)) >= d(C)`` for ``t > 2``."""
    b, c = element_set(b, m.n), element_set(c, m.n)
    t = len(b)
    if len(c) != t or t <= 2:
        raise PreconditionViolated(f"needs |B| = |C| = t > 2, got {len(b)} and {len(c)}")
    if sorted(p[0] for p in pairs) != sorted(b) or sorted(p[1] for p in pairs) != sorted(c):
        raise PreconditionViolated("pairs must match B with C one-to-one")
    matched = sum(m.dist[bi, ci] for bi, ci in pairs)
    lhs = m.alpha * (cross_sum(m, b, c) - matched)
    rhs = pairwise_sum(m, c)
    return _lemma("lemma4", lhs, rhs, {"B": list(b), "C": list(c), "pairs": [list(p) for p in pairs]}, t=t)


def check_lemma5(
    inst: Instance, s: Sequence[int], o: Sequence[int], g: dict[int, int]
) -> LemmaReport:
    """``sum_i d(S - b_i + c_i) >= (t - 2) d(S) + d(O) / alpha**2``.

    The margin against the tighter ``d(O) / alpha`` right-hand side is kept
    in ``extra["margin_alpha"]`` for reference; it does not decide ``holds``.
    """
    b, _ = _split(inst.constraint, s, o, g)
    t = len(b)
    witness = {"S": sorted(s), "O": sorted(o), "pairs": [[bi, g[bi]] for bi in b]}
    if t == 0:
        return _skipped("lemma5", "S = O", witness)
    if t < 2:
        raise PreconditionViolated(f"needs t >= 2, got t = {t}")
    if t == 2 and len(s) <= 2:
        raise PreconditionViolated("t = 2 needs rank > 2")
    m, a = inst.metric, inst.alpha
    s_set = set(s)
    lhs = sum(pairwise_sum(m, sorted((s_set - {bi}) | {g[bi]})) for bi in b)
    d_s, d_o = pairwise_sum(m, s), pairwise_sum(m, o)
    rhs = (t - 2) * d_s + d_o / (a * a)
    rhs_alpha = (t - 2) * d_s + d_o / a
    return _lemma("lemma5", lhs, rhs, witness, t=t, margin_alpha=lhs - rhs_alpha)


def lemma_checks_at_optimum(
    inst: Instance, s: Sequence[int], o: Sequence[int]
) -> list[LemmaReport]:
    """Run the exchange-based checks for a local optimum ``s`` against an optimum ``o``.

    The exchange pairing comes from :func:`exchange_bijection`. Checks whose
    preconditions do not hold for this ``(s, o)`` come back as skipped.
    """
    c = inst.constraint
    s, o = sorted(s), sorted(o)
    b = [e for e in s if e not in set(o)]
    cc = [e for e in o if e not in set(s)]
    g = exchange_bijection(c, b, cc, base=s)
    t = len(b)
    witness = {"S": s, "O": o, "pairs": [[bi, g[bi]] for bi in b]}
    out = []
    if t < 2:
        reason = "S = O" if t == 0 else "t = 1"
        return [_skipped(k, reason, witness) for k in ("lemma3", "lemma4", "lemma5")]
    out.append(check_lemma3(inst, s, o, g))
    if t > 2:
        out.append(check_lemma4(inst.metric, b, cc, [(bi, g[bi]) for bi in b]))
    else:
        out.append(_skipped("lemma4", "t <= 2", witness))
    if t == 2 and len(s) <= 2:
        out.append(_skipped("lemma5", "t = 2 with rank 2", witness))
    else:
        out.append(check_lemma5(inst, s, o, g))
    return out


def random_disjoint_pair(rng: np.random.Generator, n: int) -> tuple[list[int], list[int]]:
    """Random disjoint ``(X, Y)`` with ``X`` non-empty and ``Y`` possibly empty."""
    perm = [int(e) for e in rng.permutation(n)]
    kx = int(rng.integers(1, n + 1))
    ky = int(rng.integers(0, n - kx + 1))
    return sorted(perm[:kx]), sorted(perm[kx:kx + ky])


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def semimetric_from_points(points: np.ndarray | Sequence[Sequence[float]], beta: float) -> SemiMetric:
    """Euclidean distances between ``points`` raised to the power ``beta``."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=-1)) ** beta
    return validate_semimetric(dist)


def gen_semimetric(n: int, beta: float, seed: int) -> SemiMetric:
    """Power-of-Euclidean semi-metric on ``n`` uniform points in the unit square.

    Its relaxation parameter is at most ``2 ** (beta - 1)``; the stored
    ``alpha`` is the exact value recomputed from the matrix.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if beta < 1:
        raise ValueError("beta must be at least 1")
    rng = np.random.default_rng(seed)
    return semimetric_from_points(rng.random((n, 2)), beta)


def _random_partition(rng: np.random.Generator, n: int, r: int) -> PartitionMatroid:
    k = int(rng.integers(1, r + 1))
    order = [int(e) for e in rng.permutation(n)]
    parts: list[list[int]] = [[e] for e in order[:k]]
    for e in order[k:]:
        parts[int(rng.integers(0, k))].append(e)
    caps = [1] * k
    for _ in range(r - k):
        room = [i for i in range(k) if caps[i] < len(parts[i])]
        caps[room[int(rng.integers(0, len(room)))]] += 1
    return PartitionMatroid([sorted(p) for p in parts], caps)


def gen_instance(
    n: int,
    beta: float,
    objective_kind: str,
    constraint_kind: str,
    lam: float,
    seed: int,
    rank: int | None = None,
) -> Instance:
    """Seeded random instance.

    ``rank`` is ``p`` for uniform constraints and the total capacity for
    partition constraints; when omitted it is drawn from ``[1, min(n, 4)]``.
    Coverage objectives use ``n`` topics with each element covering one to
    three of them.
    """
    if objective_kind not in OBJECTIVE_KINDS:
        raise ValueError(f"objective kind must be one of {OBJECTIVE_KINDS}")
    if constraint_kind not in CONSTRAINT_KINDS:
        raise ValueError(f"constraint kind must be one of {CONSTRAINT_KINDS}")
    rng = np.random.default_rng(seed)
    metric = semimetric_from_points(rng.random((n, 2)), beta)
    if objective_kind == "modular":
        objective = ModularObjective(rng.random(n))
    else:
        topic_weights = rng.random(n)
        covers = [
            sorted(int(t) for t in rng.choice(n, size=int(rng.integers(1, min(3, n) + 1)), replace=False))
            for _ in range(n)
        ]
        objective = CoverageObjective(topic_weights, covers)
    if rank is None:
        rank = int(rng.integers(1, min(n, 4) + 1))
    if not 1 <= rank <= n:
        raise ValueError(f"rank {rank} outside [1, {n}]")
    if constraint_kind == "uniform":
        constraint: Matroid = UniformMatroid(rank)
    else:
        constraint = _random_partition(rng, n, rank)
    return Instance(metric=metric, objective=objective, lam=lam, constraint=constraint)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


@dataclass
class SuiteCase:
    name: str
    instance: Instance
    report: SolveReport
    exact_set: ElementSet
    exact_value: float
    ratio: RatioReport
    lemmas: list[LemmaReport] = field(default_factory=list)
    seconds: float = 0.0


def greedy_instances(count: int = 200, seed: int = 0) -> list[tuple[str, Instance]]:
    """Cardinality-constrained instances with ``n <= 10`` and ``p <= 5``.

    Cycles through every beta, both objective kinds and several lambdas.
    """
    out = []
    for i in range(count):
        rng = np.random.default_rng([seed, 1, i])
        n = int(rng.integers(3, 11))
        p = int(rng.integers(1, min(5, n) + 1))
        inst = gen_instance(
            n,
            BETAS[i % len(BETAS)],
            OBJECTIVE_KINDS[(i // len(BETAS)) % 2],
            "uniform",
            LAMBDAS[(i // 8) % len(LAMBDAS)],
            seed=int(rng.integers(2**31)),
            rank=p,
        )
        out.append((f"greedy-{seed}-{i:04d}", inst))
    return out


def matroid_instances(count: int = 200, seed: int = 0) -> list[tuple[str, Instance]]:
    """Matroid instances with ``n <= 10`` and rank ``<= 4``, half uniform, half partition."""
    out = []
    for i in range(count):
        rng = np.random.default_rng([seed, 2, i])
        n = int(rng.integers(3, 11))
        r = int(rng.integers(1, min(4, n) + 1))
        inst = gen_instance(
            n,
            BETAS[(i // 2) % len(BETAS)],
            OBJECTIVE_KINDS[(i // 8) % 2],
            CONSTRAINT_KINDS[i % 2],
            LAMBDAS[(i // 16) % len(LAMBDAS)],
            seed=int(rng.integers(2**31)),
            rank=r,
        )
        out.append((f"matroid-{seed}-{i:04d}", inst))
    return out


def run_greedy_case(name: str, inst: Instance) -> SuiteCase:
    t0 = time.perf_counter()
    report = greedy_solve(inst)
    exact_set, exact_value = exact_uniform(inst)
    rr = ratio_report(report, exact_set, exact_value, greedy_bound(inst.alpha))
    return SuiteCase(name, inst, report, exact_set, exact_value, rr, seconds=time.perf_counter() - t0)


def run_local_case(name: str, inst: Instance, lemmas: bool = True) -> SuiteCase:
    t0 = time.perf_counter()
    report = local_search_solve(inst)
    exact_set, exact_value = exact_matroid(inst)
    rr = ratio_report(report, exact_set, exact_value, local_search_bound(inst.alpha))
    checks = lemma_checks_at_optimum(inst, report.selected, exact_set) if lemmas else []
    return SuiteCase(
        name, inst, report, exact_set, exact_value, rr, checks, seconds=time.perf_counter() - t0
    )


def greedy_suite(count: int = 200, seed: int = 0) -> list[SuiteCase]:
    return [run_greedy_case(name, inst) for name, inst in greedy_instances(count, seed)]


def matroid_suite(count: int = 200, seed: int = 0) -> list[SuiteCase]:
    return [run_local_case(name, inst) for name, inst in matroid_instances(count, seed)]


def lemma1_trials(trials: int = 1000, seed: int = 0) -> list[LemmaReport]:
    """Lemma-1 checks on random disjoint pairs over generated semi-metrics."""
    rng = np.random.default_rng([seed, 3])
    out = []
    metric = None
    for i in range(trials):
        if i % 10 == 0:
            n = int(rng.integers(2, 13))
            metric = gen_semimetric(n, BETAS[(i // 10) % len(BETAS)], int(rng.integers(2**31)))
        x, y = random_disjoint_pair(rng, metric.n)
        out.append(check_lemma1(metric, x, y))
    return out
