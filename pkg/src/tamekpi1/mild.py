"""Initial forms of Koch relations and the bipartite mildness criterion.

Sign convention (fixed for the whole package): the relation attached to the
prime q_i has initial form

    rho_i = a_i * pi * x_i + sum_{j != i} lk(q_j -> q_i) * [x_i, x_j]

and the cup value of relation i on the pair k < l is minus the coefficient of
[x_k, x_l] in rho_i modulo pi. Only zero patterns and ranks enter the
criterion, and both are insensitive to this choice.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from .errors import BudgetExceeded, DegenerateRelation, IncompleteCupData
from .lie import FreeLieAlgebra, GradedLieElement, bracket
from .linalg import rank_mod_p
from .linking import LinkingData

CupData = Mapping[tuple[int, tuple[int, int]], int]


@dataclass(frozen=True)
class MildWitness:
    ordering: tuple[int, ...]
    a: int
    matrix: tuple[tuple[int, ...], ...]
    rank: int

    def to_json(self) -> dict:
        return {
            "ordering": list(self.ordering),
            "a": self.a,
            "matrix": [list(r) for r in self.matrix],
            "rank": self.rank,
        }

    @classmethod
    def from_json(cls, obj: dict) -> MildWitness:
        return cls(tuple(obj["ordering"]), obj["a"], tuple(tuple(r) for r in obj["matrix"]), obj["rank"])


@dataclass(frozen=True)
class NotFound:
    """No witness of the bipartite shape; this is not a proof of non-mildness."""

    evaluated: int
    reason: str

    def __bool__(self):
        return False


@dataclass(frozen=True)
class SearchLimits:
    max_candidates: int = 500_000
    exhaustive_max_n: int = 10
    heuristic_restarts: int = 16


def initial_forms(ld: LinkingData, max_degree: int = 6) -> list[GradedLieElement]:
    alg = FreeLieAlgebra(max(ld.n, 1), ld.p, max_degree)
    xs = alg.gens()
    forms = []
    for i in range(ld.n):
        rho = (xs[i] * ld.a[i]).times_pi()
        for j in range(ld.n):
            if j != i and ld.e[j][i]:
                rho = rho + bracket(xs[i], xs[j]) * ld.e[j][i]
        if rho.is_zero():
            raise DegenerateRelation(
                f"initial form of the relation at {ld.primes[i]} vanishes in degree 2"
            )
        forms.append(rho)
    return forms


def cup_data(ld: LinkingData) -> dict[tuple[int, tuple[int, int]], int]:
    """Cup values r_i(chi_k u chi_l) for k < l, derived from the linking matrix."""
    p, n = ld.p, ld.n
    cup = {}
    for i in range(n):
        for k in range(n):
            for l in range(k + 1, n):
                if i == k:
                    v = -ld.e[l][i]
                elif i == l:
                    v = ld.e[k][i]
                else:
                    v = 0
                cup[(i, (k, l))] = v % p
    return cup


def cup_from_forms(forms: Sequence[GradedLieElement]) -> dict[tuple[int, tuple[int, int]], int]:
    """Same values read off the initial forms (k < l)."""
    if not forms:
        return {}
    n, p = forms[0].algebra.n, forms[0].algebra.p
    return {
        (i, (k, l)): (-rho.coefficient((k, l))) % p
        for i, rho in enumerate(forms)
        for k in range(n)
        for l in range(k + 1, n)
    }


def _cup(cup: CupData, i: int, g: int, h: int) -> int:
    if g == h:
        return 0
    key = (i, (g, h)) if g < h else (i, (h, g))
    try:
        v = cup[key]
    except KeyError:
        raise IncompleteCupData(f"missing cup value for relation {i} on pair {key[1]}") from None
    return v if g < h else -v


def mildkrit_check(cup: CupData, n: int, m: int, ordering: Sequence[int], a: int, p: int) -> MildWitness | None:
    """Check both conditions of the criterion for one basis ordering and split index.

    ``ordering[t]`` is the generator placed at position t; the first block is
    positions 0..a-1. Returns the witness, or None when a condition fails.
    """
    if not 1 <= a < n:
        raise ValueError(f"split index a={a} outside 1..{n - 1}")
    if sorted(ordering) != list(range(n)):
        raise ValueError("ordering is not a permutation")
    for s in range(a, n):
        for t in range(s + 1, n):
            for i in range(m):
                if _cup(cup, i, ordering[s], ordering[t]) % p:
                    return None
    matrix = [
        [_cup(cup, i, ordering[s], ordering[t]) % p for s in range(a) for t in range(a, n)]
        for i in range(m)
    ]
    rank = rank_mod_p(np.array(matrix, dtype=np.int64).reshape(m, a * (n - a)), p)
    if rank != m:
        return None
    return MildWitness(tuple(ordering), a, tuple(tuple(r) for r in matrix), rank)


def _pattern_graph(cup: CupData, n: int, m: int, p: int) -> list[set[int]]:
    adj = [set() for _ in range(n)]
    for g in range(n):
        for h in range(g + 1, n):
            if any(_cup(cup, i, g, h) % p for i in range(m)):
                adj[g].add(h)
                adj[h].add(g)
    return adj


def find_witness(cup: CupData, n: int, m: int, p: int, limits: SearchLimits = SearchLimits()):
    """Lexicographically first (a, ordering) passing the criterion, or NotFound.

    Both conditions only depend on the bipartition, so each block is taken in
    ascending order and first blocks are enumerated as ascending combinations.
    """
    if n < 2:
        return NotFound(0, "fewer than two generators admit no split")
    adj = _pattern_graph(cup, n, m, p)
    evaluated = 0
    if n <= limits.exhaustive_max_n:
        for a in range(1, n):
            if a * (n - a) < m:
                continue
            for first in combinations(range(n), a):
                second = [g for g in range(n) if g not in first]
                if any(adj[g] & set(second) for g in second):
                    continue
                evaluated += 1
                if evaluated > limits.max_candidates:
                    raise BudgetExceeded(f"more than {limits.max_candidates} candidates evaluated")
                w = mildkrit_check(cup, n, m, list(first) + second, a, p)
                if w is not None:
                    return w
        return NotFound(evaluated, "no bipartition satisfies both conditions")
    # heuristic: greedy isotropic second blocks from several seeds
    order = sorted(range(n), key=lambda g: (len(adj[g]), g))
    tried = set()
    for start in range(min(limits.heuristic_restarts, n)):
        second = []
        for g in order[start:] + order[:start]:
            if not adj[g] & set(second):
                second.append(g)
        for size in range(len(second), 0, -1):
            block = tuple(sorted(second[:size]))
            a = n - size
            if block in tried or not 1 <= a < n or a * size < m:
                continue
            tried.add(block)
            first = [g for g in range(n) if g not in block]
            evaluated += 1
            if evaluated > limits.max_candidates:
                raise BudgetExceeded(f"more than {limits.max_candidates} candidates evaluated")
            w = mildkrit_check(cup, n, m, first + list(block), a, p)
            if w is not None:
                return w
    return NotFound(evaluated, "heuristic search found no bipartition")


def find_mild_witness(ld: LinkingData, limits: SearchLimits = SearchLimits()):
    """Search a witness for G_S(p) over Q, where relations and generators both number #S."""
    return find_witness(cup_data(ld), ld.n, ld.n, ld.p, limits)
