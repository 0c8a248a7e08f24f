"""Mod-p linking numbers of rational primes."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .arith import primitive_root, residue_index
from .errors import EqualPrimes, MemberOfS, NotAdmissible
from .fields import PrimeSet


def lk(q: int, ell: int, p: int, root: int | None = None) -> int:
    """Linking number lk(q -> ell): index of ``ell`` modulo ``q`` reduced mod p.

    Equals chi_q(Frob_ell) for the Kummer character chi_q ramified only at q,
    normalised by the chosen primitive root of q.
    """
    if q == ell:
        raise EqualPrimes(f"lk({q} -> {ell}) is undefined")
    for x in (q, ell):
        if (x - 1) % p:
            raise NotAdmissible(f"{x} is not 1 mod {p}")
    return residue_index(q, ell, p, root)


@dataclass(frozen=True)
class LinkingData:
    p: int
    primes: tuple[int, ...]
    e: tuple[tuple[int | None, ...], ...]
    a: tuple[int, ...]
    roots: tuple[int, ...] = field(default=())

    @property
    def n(self) -> int:
        return len(self.primes)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "primes": list(self.primes),
            "e": [list(row) for row in self.e],
            "a": list(self.a),
            "roots": list(self.roots),
        }

    @classmethod
    def from_json(cls, obj: dict) -> LinkingData:
        return cls(
            p=obj["p"],
            primes=tuple(obj["primes"]),
            e=tuple(tuple(row) for row in obj["e"]),
            a=tuple(obj["a"]),
            roots=tuple(obj["roots"]),
        )

    def relabel(self, perm: Sequence[int]) -> LinkingData:
        """Data for the primes listed as ``[primes[perm[0]], primes[perm[1]], ...]``."""
        n = self.n
        return LinkingData(
            p=self.p,
            primes=tuple(self.primes[perm[i]] for i in range(n)),
            e=tuple(tuple(self.e[perm[i]][perm[j]] for j in range(n)) for i in range(n)),
            a=tuple(self.a[perm[i]] for i in range(n)),
            roots=tuple(self.roots[perm[i]] for i in range(n)),
        )


def _as_primes(S) -> list[int]:
    if isinstance(S, PrimeSet):
        if not S.is_rational:
            raise NotAdmissible("linking data is only defined over Q")
        return S.primes
    return sorted(int(x) for x in S)


def linking_data(S, p: int, root_rank: int = 1, roots: Sequence[int] | None = None) -> LinkingData:
    """Linking matrix and Bockstein diagonal for a set of rational primes.

    ``root_rank`` selects the k-th smallest primitive root of every prime;
    explicit ``roots`` override it.
    """
    primes = _as_primes(S)
    for q in primes:
        if (q - 1) % p or q == p:
            raise NotAdmissible(f"{q} is not admissible for p={p}")
    if roots is None:
        roots = [primitive_root(q, root_rank) for q in primes]
    roots = list(roots)
    n = len(primes)
    e = [[None] * n for _ in range(n)]
    for i, qi in enumerate(primes):
        for j, qj in enumerate(primes):
            if i != j:
                e[i][j] = residue_index(qi, qj, p, roots[i])
    a = [((q - 1) // p) % p for q in primes]
    return LinkingData(p, tuple(primes), tuple(tuple(r) for r in e), tuple(a), tuple(roots))


def frobenius_pattern(ell: int, S, p: int, root_rank: int = 1) -> list[int]:
    """Frobenius of ``ell`` in the elementary layer k_S^el, as the vector (lk(q -> ell))_q."""
    primes = _as_primes(S)
    if ell in primes:
        raise MemberOfS(f"{ell} is a member of S")
    return [lk(q, ell, p, primitive_root(q, root_rank)) for q in primes]


def splits_completely_el(ell: int, S, p: int) -> bool:
    return not any(frobenius_pattern(ell, S, p))
