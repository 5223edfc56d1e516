"""Brute-force oracles kept independent of the package's own code paths."""
from itertools import combinations, permutations


def alpha_bruteforce(dist):
    """Smallest relaxation factor (floored at 1) by looping over ordered triples."""
    n = len(dist)
    best = 0.0
    for u, v, w in permutations(range(n), 3):
        num = float(dist[u][v])
        den = float(dist[u][w]) + float(dist[w][v])
        if den == 0.0:
            if num == 0.0:
                continue
            return float("inf")
        best = max(best, num / den)
    return max(1.0, best)


def pair_sum(dist, s):
    return sum(float(dist[u][v]) for u, v in combinations(sorted(s), 2))


def phi(weights, dist, lam, s):
    """Modular objective evaluated from scratch."""
    return sum(weights[u] for u in s) + lam * pair_sum(dist, s)


def coverage_value(topic_weights, covers, s):
    topics = set()
    for u in s:
        topics |= set(covers[u])
    return sum(topic_weights[t] for t in topics)


def equilateral(n, d=1.0):
    return [[0.0 if i == j else d for j in range(n)] for i in range(n)]
