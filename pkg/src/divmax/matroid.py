"""Matroid independence oracles and basis utilities.

Only uniform and partition matroids are provided. Everything else in the
package talks to the :class:`Matroid` interface, so another oracle can be
dropped in by implementing ``is_independent``, ``rank`` and
``check_ground_set``.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from itertools import combinations
from typing import Any, Iterable, Sequence

from divmax.errors import (
    GroundSetTooLarge,
    InvalidConstraint,
    NoPerfectMatching,
    NotIndependent,
    PreconditionViolated,
    PTooLarge,
)

MAX_ENUMERATION_N = 20


class Matroid(ABC):
    kind: str

    @abstractmethod
    def is_independent(self, s: Iterable[int]) -> bool: ...

    @abstractmethod
    def rank(self) -> int: ...

    @abstractmethod
    def check_ground_set(self, n: int) -> None:
        """Raise if the matroid is not well-defined on ``range(n)``."""

    @abstractmethod
    def to_dict(self) -> dict[str, Any]: ...


class UniformMatroid(Matroid):
    kind = "uniform"

    def __init__(self, p: int):
        if isinstance(p, bool) or not isinstance(p, int) or p < 1:
            raise InvalidConstraint(f"uniform rank p must be a positive integer, got {p!r}")
        self.p = p

    def is_independent(self, s: Iterable[int]) -> bool:
        return len(set(s)) <= self.p

    def rank(self) -> int:
        return self.p

    def check_ground_set(self, n: int) -> None:
        if self.p > n:
            raise PTooLarge(f"p = {self.p} exceeds ground set size {n}")

    def to_dict(self) -> dict[str, Any]:
        return {"type": "uniform", "p": self.p}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UniformMatroid) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("uniform", self.p))

    def __repr__(self) -> str:
        return f"UniformMatroid(p={self.p})"


class PartitionMatroid(Matroid):
    """At most ``capacities[i]`` elements may be taken from ``parts[i]``.

    The parts must cover the ground set; an element in no part is never
    part of an independent set.
    """

    kind = "partition"

    def __init__(self, parts: Sequence[Sequence[int]], capacities: Sequence[int]):
        if len(parts) != len(capacities):
            raise InvalidConstraint(f"{len(parts)} parts but {len(capacities)} capacities")
        self.parts = tuple(tuple(sorted(int(e) for e in part)) for part in parts)
        self.capacities = tuple(int(c) for c in capacities)
        self._part_of: dict[int, int] = {}
        for i, part in enumerate(self.parts):
            if len(set(part)) != len(part):
                raise InvalidConstraint(f"part {i} lists an element twice")
            for e in part:
                if e < 0:
                    raise InvalidConstraint(f"negative element {e} in part {i}")
                if e in self._part_of:
                    raise InvalidConstraint(f"element {e} appears in parts {self._part_of[e]} and {i}")
                self._part_of[e] = i
        for i, (part, cap) in enumerate(zip(self.parts, self.capacities)):
            if cap < 0 or cap > len(part):
                raise InvalidConstraint(f"capacity {cap} of part {i} outside [0, {len(part)}]")
        if sum(self.capacities) < 1:
            raise InvalidConstraint("partition matroid rank must be at least 1")

    def part_of(self, e: int) -> int | None:
        return self._part_of.get(e)

    def is_independent(self, s: Iterable[int]) -> bool:
        counts = [0] * len(self.parts)
        for e in set(s):
            i = self._part_of.get(e)
            if i is None:
                return False
            counts[i] += 1
            if counts[i] > self.capacities[i]:
                return False
        return True

    def rank(self) -> int:
        return sum(self.capacities)

    def check_ground_set(self, n: int) -> None:
        covered = set(self._part_of)
        extra = sorted(e for e in covered if e >= n)
        if extra:
            raise InvalidConstraint(f"parts mention elements {extra} outside [0, {n})")
        missing = sorted(set(range(n)) - covered)
        if missing:
            raise InvalidConstraint(f"parts do not cover elements {missing}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": "partition",
            "parts": [list(p) for p in self.parts],
            "capacities": list(self.capacities),
        }

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PartitionMatroid)
            and other.parts == self.parts
            and other.capacities == self.capacities
        )

    def __hash__(self) -> int:
        return hash(("partition", self.parts, self.capacities))

    def __repr__(self) -> str:
        return f"PartitionMatroid(parts={[list(p) for p in self.parts]}, capacities={list(self.capacities)})"


def matroid_from_dict(spec: dict[str, Any]) -> Matroid:
    kind = spec.get("type")
    if kind == "uniform":
        return UniformMatroid(spec["p"])
    if kind == "partition":
        return PartitionMatroid(spec["parts"], spec["capacities"])
    raise InvalidConstraint(f"unknown constraint type {kind!r}")


def is_independent(c: Matroid, s: Iterable[int]) -> bool:
    return c.is_independent(s)


def rank(c: Matroid) -> int:
    return c.rank()


def is_basis(c: Matroid, s: Iterable[int], n: int) -> bool:
    s = set(s)
    return c.is_independent(s) and len(s) == c.rank() and all(0 <= e < n for e in s)


def extend_to_basis(c: Matroid, s: Iterable[int], n: int) -> tuple[int, ...]:
    """Grow ``s`` into a basis, trying candidates in ascending index order."""
    cur = set(s)
    if not c.is_independent(cur):
        raise NotIndependent(f"{sorted(cur)} is not independent")
    for e in range(n):
        if e not in cur and c.is_independent(cur | {e}):
            cur.add(e)
    return tuple(sorted(cur))


def exchange_bijection(
    c: Matroid,
    x: Sequence[int],
    y: Sequence[int],
    base: Iterable[int] | None = None,
) -> dict[int, int]:
    """Pair each ``e`` in ``x`` with a distinct ``g(e)`` in ``y`` so swaps stay independent.

    The swap for ``e`` is ``base - e + g(e)``; ``base`` defaults to ``x``.
    Solvers pass ``x = S - O``, ``y = O - S`` and ``base = S`` for two bases
    ``S`` and ``O``, for which a perfect pairing always exists. The pairing
    is a maximum bipartite matching found with augmenting paths, scanning
    both sides in the given order so the result is deterministic.
    """
    x, y = list(x), list(y)
    base_set = set(x) if base is None else set(base)
    if len(x) != len(y):
        raise PreconditionViolated(f"sets differ in size: {len(x)} vs {len(y)}")
    if set(x) & set(y):
        raise PreconditionViolated("sets must be disjoint")
    if not set(x) <= base_set or base_set & set(y):
        raise PreconditionViolated("base must contain x and be disjoint from y")
    if not c.is_independent(x) or not c.is_independent(y) or not c.is_independent(base_set):
        raise PreconditionViolated("sets must be independent")

    adj = {e: [f for f in y if c.is_independent((base_set - {e}) | {f})] for e in x}
    owner: dict[int, int] = {}

    def augment(e: int, seen: set[int]) -> bool:
        for f in adj[e]:
            if f not in owner:
                owner[f] = e
                return True
        for f in adj[e]:
            if f in seen:
                continue
            seen.add(f)
            if augment(owner[f], seen):
                owner[f] = e
                return True
        return False

    for e in x:
        if not augment(e, set()):
            raise NoPerfectMatching(f"no exchange partner left for element {e}")
    return {e: f for f, e in sorted(owner.items(), key=lambda kv: x.index(kv[1]))}


def enumerate_bases(c: Matroid, n: int, cap: int) -> tuple[list[tuple[int, ...]], bool]:
    """All bases of ``c`` on ``range(n)`` in lexicographic order.

    Returns ``(bases, overflowed)``; at most ``cap`` bases are listed and
    ``overflowed`` is set when more exist.
    """
    if n > MAX_ENUMERATION_N:
        raise GroundSetTooLarge(f"ground set of {n} elements exceeds {MAX_ENUMERATION_N}")
    r = c.rank()
    out: list[tuple[int, ...]] = []
    for combo in combinations(range(n), r):
        if c.is_independent(combo):
            if len(out) >= cap:
                return out, True
            out.append(combo)
    return out, False
