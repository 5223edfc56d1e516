"""Domain types and the objective formulas shared by every solver.

The objective of a selection ``S`` is ``phi(S) = f(S) + lam * d(S)`` where
``f`` is a normalized monotone submodular quality function and ``d(S)``
sums a semi-metric over the unordered pairs of ``S``.
"""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from divmax.errors import (
    Asymmetric,
    ElementAlreadyInSet,
    InvalidElement,
    InvalidInstance,
    NegativeEntry,
    NonZeroDiagonal,
    NotSquare,
    OverlappingSets,
    UnboundedAlpha,
)
from divmax.matroid import Matroid

TOL = 1e-9

ElementSet = tuple[int, ...]


def element_set(members: Iterable[int], n: int | None = None) -> ElementSet:
    """Normalize ``members`` into an ElementSet, keeping the given order."""
    out = []
    seen = set()
    for m in members:
        if isinstance(m, (bool, np.bool_)) or not isinstance(m, (int, np.integer)):
            raise InvalidElement(f"element {m!r} is not an integer index")
        m = int(m)
        if m < 0 or (n is not None and m >= n):
            raise InvalidElement(f"element {m} outside [0, {n})")
        if m in seen:
            raise InvalidElement(f"duplicate element {m}")
        seen.add(m)
        out.append(m)
    return tuple(out)


# ---------------------------------------------------------------------------
# semi-metric
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SemiMetric:
    """Validated symmetric distance matrix and its relaxation parameter.

    ``alpha`` is the smallest factor ``>= 1`` such that
    ``dist[u, v] <= alpha * (dist[u, w] + dist[w, v])`` for all distinct
    ``u, v, w``. Build instances with :func:`validate_semimetric`.
    """

    dist: np.ndarray
    alpha: float

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SemiMetric):
            return NotImplemented
        return self.alpha == other.alpha and np.array_equal(self.dist, other.dist)

    __hash__ = None  # type: ignore[assignment]


def triangle_alpha(dist: np.ndarray) -> float:
    """Largest ratio ``dist[u,v] / (dist[u,w] + dist[w,v])`` over distinct triples.

    Ratios with a zero numerator and zero denominator are skipped. Returns 0.0
    when there is no admissible triple; the caller applies the floor at 1.
    """
    n = dist.shape[0]
    idx = np.arange(n)
    off_diag = idx[:, None] != idx[None, :]
    best = 0.0
    for w in range(n):
        denom = dist[:, w][:, None] + dist[w, :][None, :]
        mask = off_diag.copy()
        mask[w, :] = False
        mask[:, w] = False
        zero = mask & (denom == 0.0)
        bad = zero & (dist > 0.0)
        if bad.any():
            u, v = np.argwhere(bad)[0]
            raise UnboundedAlpha(
                f"unbounded alpha: d({u},{v}) > 0 but d({u},{w}) + d({w},{v}) = 0"
            )
        live = mask & (denom > 0.0)
        if live.any():
            best = max(best, float((dist[live] / denom[live]).max()))
    return best


def validate_semimetric(matrix: Sequence[Sequence[float]] | np.ndarray) -> SemiMetric:
    """Check ``matrix`` and compute its relaxation parameter.

    Entries within ``TOL`` of the required value (zero diagonal, symmetry,
    nonnegativity) are accepted and snapped to it.
    """
    try:
        dist = np.array(matrix, dtype=float)
    except (TypeError, ValueError) as exc:
        raise NotSquare(f"distance matrix is not a numeric square array: {exc}") from None
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1] or dist.shape[0] < 1:
        raise NotSquare(f"distance matrix must be square and non-empty, got shape {dist.shape}")
    if not np.isfinite(dist).all():
        i, j = np.argwhere(~np.isfinite(dist))[0]
        raise NegativeEntry(f"non-finite entry at ({i},{j})")
    neg = dist < -TOL
    if neg.any():
        i, j = np.argwhere(neg)[0]
        raise NegativeEntry(f"negative entry at ({i},{j}): {dist[i, j]}")
    diag = np.abs(np.diag(dist)) > TOL
    if diag.any():
        i = int(np.argmax(diag))
        raise NonZeroDiagonal(f"nonzero diagonal at ({i},{i}): {dist[i, i]}")
    asym = np.abs(dist - dist.T) > TOL
    if asym.any():
        i, j = np.argwhere(asym)[0]
        raise Asymmetric(f"asymmetric at ({i},{j})")

    if not np.array_equal(dist, dist.T):
        dist = (dist + dist.T) / 2.0
    dist = np.maximum(dist, 0.0)
    np.fill_diagonal(dist, 0.0)
    dist.setflags(write=False)
    return SemiMetric(dist=dist, alpha=max(1.0, triangle_alpha(dist)))


# ---------------------------------------------------------------------------
# submodular objectives
# ---------------------------------------------------------------------------


class SubmodularObjective(ABC):
    """A normalized, monotone, submodular set function over ``range(n)``.

    Subclasses implement :meth:`value`; :meth:`marginal` may be overridden
    with a faster closed form.
    """

    n: int

    @abstractmethod
    def value(self, s: Iterable[int]) -> float: ...

    def marginal(self, u: int, s: Sequence[int]) -> float:
        return self.value([*s, u]) - self.value(s)

    @abstractmethod
    def to_dict(self) -> dict[str, Any]: ...


class ModularObjective(SubmodularObjective):
    def __init__(self, weights: Sequence[float]):
        w = np.array(weights, dtype=float)
        if w.ndim != 1:
            raise InvalidInstance("modular weights must be a flat list")
        if not np.isfinite(w).all() or (w < 0).any():
            raise InvalidInstance("modular weights must be finite and nonnegative")
        w.setflags(write=False)
        self.weights = w
        self.n = len(w)

    def value(self, s: Iterable[int]) -> float:
        return float(sum(self.weights[u] for u in s))

    def marginal(self, u: int, s: Sequence[int]) -> float:
        return float(self.weights[u])

    def to_dict(self) -> dict[str, Any]:
        return {"type": "modular", "weights": self.weights.tolist()}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ModularObjective) and np.array_equal(self.weights, other.weights)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"ModularObjective(weights={self.weights.tolist()})"


class CoverageObjective(SubmodularObjective):
    """Weighted coverage: ``f(S)`` is the total weight of topics covered by ``S``."""

    def __init__(self, topic_weights: Sequence[float], covers: Sequence[Sequence[int]]):
        tw = np.array(topic_weights, dtype=float)
        if tw.ndim != 1:
            raise InvalidInstance("topic weights must be a flat list")
        if not np.isfinite(tw).all() or (tw < 0).any():
            raise InvalidInstance("topic weights must be finite and nonnegative")
        cov = []
        for i, topics in enumerate(covers):
            ts = tuple(sorted({int(t) for t in topics}))
            if any(t < 0 or t >= len(tw) for t in ts):
                raise InvalidInstance(f"element {i} covers an unknown topic")
            cov.append(frozenset(ts))
        tw.setflags(write=False)
        self.topic_weights = tw
        self.covers = tuple(cov)
        self.n = len(cov)

    def _covered(self, s: Iterable[int]) -> set[int]:
        out: set[int] = set()
        for u in s:
            out |= self.covers[u]
        return out

    def value(self, s: Iterable[int]) -> float:
        return float(sum(self.topic_weights[t] for t in sorted(self._covered(s))))

    def marginal(self, u: int, s: Sequence[int]) -> float:
        new = self.covers[u] - self._covered(s)
        return float(sum(self.topic_weights[t] for t in sorted(new)))

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": "coverage",
            "topic_weights": self.topic_weights.tolist(),
            "covers": [sorted(c) for c in self.covers],
        }

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CoverageObjective)
            and np.array_equal(self.topic_weights, other.topic_weights)
            and self.covers == other.covers
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        d = self.to_dict()
        return f"CoverageObjective(topic_weights={d['topic_weights']}, covers={d['covers']})"


# ---------------------------------------------------------------------------
# instance
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Instance:
    metric: SemiMetric
    objective: SubmodularObjective
    lam: float
    constraint: Matroid
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not isinstance(self.lam, (int, float)) or not math.isfinite(self.lam) or self.lam < 0:
            raise InvalidInstance(f"lambda must be a finite nonnegative number, got {self.lam!r}")
        object.__setattr__(self, "lam", float(self.lam))
        n = self.metric.n
        if self.objective.n != n:
            raise InvalidInstance(
                f"objective covers {self.objective.n} elements but the metric has {n}"
            )
        self.constraint.check_ground_set(n)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(n)))
        elif len(self.labels) != n:
            raise InvalidInstance(f"{len(self.labels)} labels for {n} elements")
        else:
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))

    @property
    def n(self) -> int:
        return self.metric.n

    @property
    def alpha(self) -> float:
        return self.metric.alpha

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.metric == other.metric
            and self.objective == other.objective
            and self.lam == other.lam
            and self.constraint == other.constraint
            and self.labels == other.labels
        )

    __hash__ = None  # type: ignore[assignment]


# ---------------------------------------------------------------------------
# formulas
# ---------------------------------------------------------------------------


def _check(m: SemiMetric, s: Iterable[int]) -> ElementSet:
    return element_set(s, m.n)


def pairwise_sum(m: SemiMetric, s: Iterable[int]) -> float:
    """``d(S)``: distance summed over unordered pairs of ``s``."""
    idx = np.array(_check(m, s), dtype=int)
    if len(idx) < 2:
        return 0.0
    return float(np.triu(m.dist[np.ix_(idx, idx)], 1).sum())


def cross_sum(m: SemiMetric, s: Iterable[int], t: Iterable[int]) -> float:
    """``d(S, T)`` for disjoint ``s`` and ``t``."""
    s, t = _check(m, s), _check(m, t)
    common = set(s) & set(t)
    if common:
        raise OverlappingSets(f"sets share elements {sorted(common)}")
    if not s or not t:
        return 0.0
    return float(m.dist[np.ix_(list(s), list(t))].sum())


def marginal_distance(m: SemiMetric, u: int, s: Iterable[int]) -> float:
    s = _check(m, s)
    (u,) = element_set([u], m.n)
    if u in s:
        raise ElementAlreadyInSet(f"element {u} already in set")
    return float(m.dist[u, list(s)].sum()) if s else 0.0


def marginal_f(f: SubmodularObjective, u: int, s: Iterable[int]) -> float:
    s = element_set(s, f.n)
    (u,) = element_set([u], f.n)
    if u in s:
        raise ElementAlreadyInSet(f"element {u} already in set")
    return f.marginal(u, s)


def f_value(inst: Instance, s: Iterable[int]) -> float:
    return inst.objective.value(element_set(s, inst.n))


def objective_value(inst: Instance, s: Iterable[int]) -> float:
    """``phi(S) = f(S) + lam * d(S)``."""
    s = element_set(s, inst.n)
    return inst.objective.value(s) + inst.lam * pairwise_sum(inst.metric, s)


def scaled_marginal(inst: Instance, u: int, s: Iterable[int]) -> float:
    """Greedy score: half the quality gain plus the full distance gain."""
    s = element_set(s, inst.n)
    return 0.5 * marginal_f(inst.objective, u, s) + inst.lam * marginal_distance(inst.metric, u, s)


def greedy_bound(alpha: float) -> float:
    return 1.0 / (2.0 * alpha)


def local_search_bound(alpha: float) -> float:
    return 1.0 / (2.0 * alpha * alpha)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class SolveReport:
    algorithm: str
    selected: ElementSet
    f_value: float
    distance_sum: float
    objective_value: float
    iterations: int
    alpha: float
    lam: float
    bound: float | None = None
    truncated: bool = False
    trace: list[dict[str, Any]] = field(default_factory=list)
    comparison: dict[str, Any] | None = None

    def to_dict(self, labels: Sequence[str] | None = None) -> dict[str, Any]:
        out = {
            "algorithm": self.algorithm,
            "selected": list(self.selected),
            "f_value": self.f_value,
            "distance_sum": self.distance_sum,
            "objective_value": self.objective_value,
            "iterations": self.iterations,
            "alpha": self.alpha,
            "lambda": self.lam,
            "bound": self.bound,
            "truncated": self.truncated,
        }
        if labels is not None:
            out["selected_labels"] = [labels[i] for i in self.selected]
        if self.trace:
            out["trace"] = self.trace
        if self.comparison is not None:
            out["comparison"] = self.comparison
        return out


def make_report(
    inst: Instance, algorithm: str, selected: Iterable[int], iterations: int, **extra: Any
) -> SolveReport:
    """Evaluate ``selected`` on ``inst`` and package the result."""
    s = element_set(selected, inst.n)
    fv = inst.objective.value(s)
    ds = pairwise_sum(inst.metric, s)
    return SolveReport(
        algorithm=algorithm,
        selected=s,
        f_value=fv,
        distance_sum=ds,
        objective_value=fv + inst.lam * ds,
        iterations=iterations,
        alpha=inst.alpha,
        lam=inst.lam,
        **extra,
    )
