"""Conditioned prime search over Q and the prime-augmentation construction."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .arith import primes_upto, primitive_root
from .errors import (
    DefectAssumptionUnavailable,
    MissingCertificate,
    NotAdmissible,
    NotFoundWithinBound,
    PreconditionViolation,
)
from .fields import FieldDescriptor, PrimeSet
from .linking import frobenius_pattern, linking_data, lk, splits_completely_el
from .mild import MildWitness, cup_data, mildkrit_check

UNIT_NOTE = "unit condition vacuous over Q for odd p: -1 is a p-th power and there are no fundamental units"
MAX_RECORDED_REJECTIONS = 32


@dataclass(frozen=True)
class SearchConditions:
    """Frobenius prescriptions for the next prime.

    ``d[q]`` is the exact required value of lk(q -> ell); ``eps[q]`` says
    whether lk(ell -> q) must be nonzero (1) or zero (0); ``None`` leaves it free.
    """

    S: tuple[int, ...]
    d: Mapping[int, int]
    eps: Mapping[int, int | None]
    exclusions: frozenset = frozenset()

    def __post_init__(self):
        if set(self.d) != set(self.S) or set(self.eps) != set(self.S):
            raise PreconditionViolation("d and eps must be indexed by S")
        if not any(self.d.values()):
            raise PreconditionViolation("not all d may vanish")
        if any(v not in (0, 1, None) for v in self.eps.values()):
            raise PreconditionViolation("eps values must be 0, 1 or None")

    def to_json(self) -> dict:
        return {
            "d": {str(q): self.d[q] for q in self.S},
            "eps": {str(q): self.eps[q] for q in self.S},
        }


@dataclass(frozen=True)
class SearchDomain:
    """All primes ell = 1 mod p up to ``bound``, minus ``skip``; stands in for a density-one set."""

    p: int
    bound: int
    skip: frozenset = frozenset()
    workers: int = 1

    def candidates(self) -> np.ndarray:
        ps = primes_upto(self.bound)
        ps = ps[(ps % self.p == 1)]
        if self.skip:
            ps = ps[~np.isin(ps, list(self.skip))]
        return ps


@dataclass
class SearchTranscript:
    conditions: dict
    examined: int = 0
    rejected: list = field(default_factory=list)
    rejected_count: int = 0
    chosen: int | None = None
    self_check: bool = False
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "conditions": self.conditions,
            "examined": self.examined,
            "rejected": [[q, why] for q, why in self.rejected],
            "rejected_count": self.rejected_count,
            "chosen": self.chosen,
            "self_check": self.self_check,
            "notes": list(self.notes),
        }


def _vpow(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    """Elementwise base**exp % mod; requires mod**2 < 2**63."""
    base = base % mod
    exp = exp.copy()
    out = np.ones_like(base)
    while exp.any():
        odd = (exp & 1).astype(bool)
        out[odd] = out[odd] * base[odd] % mod[odd]
        base = base * base % mod
        exp >>= 1
    return out


def _mask(cands: np.ndarray, cond: SearchConditions, p: int) -> np.ndarray:
    ok = np.ones(cands.shape, dtype=bool)
    if cands.size == 0:
        return ok
    # d-conditions are residue-class conditions on ell modulo each q
    for q in cond.S:
        k = (q - 1) // p
        target = pow(primitive_root(q), k * cond.d[q], q)
        qq = np.full_like(cands, q)
        ok &= _vpow(cands, np.full_like(cands, k), qq) == target
    # eps-conditions: is q a p-th power modulo ell
    for q, want in cond.eps.items():
        if want is None:
            continue
        power = _vpow(np.full_like(cands, q), (cands - 1) // p, cands)
        nonzero = power != 1
        ok &= nonzero if want else ~nonzero
    return ok


def _reject_reason(ell: int, cond: SearchConditions, p: int) -> str:
    pattern = [lk(q, ell, p) for q in cond.S]
    wanted = [cond.d[q] for q in cond.S]
    if pattern != wanted:
        return f"d-pattern {pattern} != {wanted}"
    for q in cond.S:
        want = cond.eps[q]
        if want is None:
            continue
        v = lk(ell, q, p)
        if bool(v) != bool(want):
            need = "nonzero" if want else "zero"
            return f"eps mismatch at {q}: lk({ell}->{q})={v}, wanted {need}"
    return "unknown"


def verify_conditions(ell: int, cond: SearchConditions, p: int) -> bool:
    """Independent scalar recomputation of every posed condition."""
    if ell in cond.S or ell in cond.exclusions or (ell - 1) % p:
        return False
    for q in cond.S:
        if lk(q, ell, p) != cond.d[q]:
            return False
        want = cond.eps[q]
        if want is not None and bool(lk(ell, q, p)) != bool(want):
            return False
    return True


def find_prime(cond: SearchConditions, dom: SearchDomain) -> tuple[int, SearchTranscript]:
    """Smallest prime of the domain meeting all Frobenius conditions."""
    p = dom.p
    for q in cond.S:
        if (q - 1) % p:
            raise NotAdmissible(f"{q} is not 1 mod {p}")
    transcript = SearchTranscript(conditions=cond.to_json(), notes=[UNIT_NOTE])
    cands = dom.candidates()
    drop = set(cond.S) | set(cond.exclusions)
    if drop:
        cands = cands[~np.isin(cands, list(drop))]

    workers = max(1, dom.workers)
    chunks = np.array_split(cands, workers) if workers > 1 else [cands]

    def first_hit(chunk):
        hits = np.flatnonzero(_mask(chunk, cond, p))
        return int(chunk[hits[0]]) if hits.size else None

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            minima = list(pool.map(first_hit, chunks))
    else:
        minima = [first_hit(cands)]
    found = [x for x in minima if x is not None]

    chosen = min(found) if found else None
    below = cands[cands < chosen] if chosen is not None else cands
    transcript.rejected_count = int(below.size)
    transcript.examined = int(below.size) + (1 if chosen is not None else 0)
    transcript.rejected = [(int(x), _reject_reason(int(x), cond, p)) for x in below[:MAX_RECORDED_REJECTIONS]]
    if chosen is None:
        raise NotFoundWithinBound(f"no prime <= {dom.bound} meets the conditions", transcript)
    if not verify_conditions(chosen, cond, p):
        raise AssertionError(f"self-check failed for {chosen}")
    transcript.chosen = chosen
    transcript.self_check = True
    return chosen, transcript


@dataclass
class AugmentationResult:
    S: tuple[int, ...]
    moved: tuple[int, ...]
    T1: tuple[int, ...]
    steps: list
    linking: object
    witness: MildWitness

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(sorted(self.S + self.moved + self.T1))

    def to_json(self) -> dict:
        return {
            "S": list(self.S),
            "moved": list(self.moved),
            "T1": list(self.T1),
            "steps": self.steps,
            "linking": self.linking.to_json(),
            "witness": self.witness.to_json(),
        }


def _move_step(base: list[int], dom: SearchDomain) -> tuple[int, dict]:
    """Adjoin one prime not split in k_S^el so that the construction has two indices to work with."""
    cond = SearchConditions(
        S=tuple(base),
        d={q: 1 for q in base},
        eps={q: None for q in base},
        exclusions=frozenset(base),
    )
    ell, tr = find_prime(cond, dom)
    return ell, {"kind": "move", "chosen": ell, "transcript": tr.to_json()}


def canonical_witness(ordering, a, cup, n, m, p) -> MildWitness:
    first, second = sorted(ordering[:a]), sorted(ordering[a:])
    w = mildkrit_check(cup, n, m, first + second, a, p)
    if w is None:
        raise AssertionError("witness does not survive block sorting")
    return w


def augment_to_mild(S, dom: SearchDomain, fld: FieldDescriptor | None = None) -> AugmentationResult:
    """Add primes until the bipartite criterion holds by construction.

    Step j targets the inertia generator at q_j: the new prime ell_j has
    lk(q_i -> ell_j) = 1 for i = i'_j (the smallest index != j) and 0 otherwise,
    lk(ell_j -> q_i) != 0 exactly for i = j, and links trivially in both
    directions with the primes added before it.
    """
    if fld is not None and not fld.is_rational:
        raise DefectAssumptionUnavailable(f"h2-defect is only available over Q, not {fld}")
    p = dom.p
    primes = S.primes if isinstance(S, PrimeSet) else sorted(int(q) for q in S)
    if not primes:
        raise PreconditionViolation("S must be nonempty")
    for q in primes:
        if (q - 1) % p or q == p:
            raise NotAdmissible(f"{q} is not admissible for p={p}")

    steps = []
    moved = []
    base = list(primes)
    if len(base) == 1:
        ell, step = _move_step(base, dom)
        moved.append(ell)
        base.append(ell)
        steps.append(step)
    base.sort()

    m = len(base)
    new: list[int] = []
    for j in range(m):
        i_prime = 0 if j != 0 else 1
        current = base + new
        d = {q: (1 if i == i_prime else 0) for i, q in enumerate(base)}
        eps = {q: (1 if i == j else 0) for i, q in enumerate(base)}
        for ell in new:
            d[ell] = 0
            eps[ell] = 0
        cond = SearchConditions(tuple(current), d, eps, frozenset(current))
        try:
            ell, tr = find_prime(cond, dom)
        except NotFoundWithinBound as exc:
            raise NotFoundWithinBound(f"augmentation step {j + 1} of {m}: {exc}", exc.transcript) from None
        if splits_completely_el(ell, current, p):
            raise AssertionError(f"{ell} splits completely in the elementary layer")
        new.append(ell)
        steps.append({"kind": "construct", "step": j + 1, "i": j, "i_prime": i_prime,
                      "chosen": ell, "transcript": tr.to_json()})

    full = sorted(base + new)
    ld = linking_data(full, p)
    pos = {q: t for t, q in enumerate(full)}
    ordering = [pos[q] for q in base] + [pos[q] for q in new]
    n = len(full)
    w = canonical_witness(ordering, m, cup_data(ld), n, n, p)
    return AugmentationResult(tuple(primes), tuple(moved), tuple(new), steps, ld, w)


@dataclass(frozen=True)
class EnlargeVerdict:
    prime: int
    pattern: tuple[int, ...]
    extends: bool

    @property
    def status(self) -> str:
        return "not split in k_S^el" if self.extends else "splits in k_S^el - inconclusive"

    def to_json(self) -> dict:
        return {"prime": self.prime, "pattern": list(self.pattern), "extends": self.extends, "status": self.status}


def enlarge_check(cert, Sprime) -> tuple[list[EnlargeVerdict], bool]:
    """Per added prime: does it fail to split completely in k_S^el (sufficient for transfer)?

    Returns the verdicts and whether the K(pi,1) property transfers to S'.
    """
    if cert is None:
        raise MissingCertificate("enlargement needs a certificate for S")
    base = list(cert.primes)
    p = cert.p
    extra = sorted(set(int(q) for q in Sprime) - set(base))
    if not set(base) <= set(int(q) for q in Sprime):
        raise PreconditionViolation("S' must contain S")
    verdicts = []
    for q in extra:
        pattern = tuple(frobenius_pattern(q, base, p))
        verdicts.append(EnlargeVerdict(q, pattern, any(pattern)))
    transfers = bool(verdicts) and all(v.extends for v in verdicts)
    return verdicts, transfers
