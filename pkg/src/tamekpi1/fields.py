"""Base fields (Q and imaginary quadratic fields), their invariants and admissible places."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable

from .arith import is_prime, primes_upto
from .errors import NotSquarefree, ParseError, UnsupportedAssumption

RATIONALS = "Rationals"
IMAGINARY_QUADRATIC = "ImaginaryQuadratic"

SPLITTING_TAGS = ("rational", "split", "inert", "ramified")


def is_squarefree(d: int) -> bool:
    if d < 1:
        return False
    f = 2
    while f * f <= d:
        if d % (f * f) == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class FieldDescriptor:
    kind: str = RATIONALS
    d: int | None = None

    def __post_init__(self):
        if self.kind == RATIONALS:
            if self.d is not None:
                raise ValueError("Q carries no d")
        elif self.kind == IMAGINARY_QUADRATIC:
            if self.d is None or not is_squarefree(self.d):
                raise NotSquarefree(f"d={self.d} is not a squarefree natural number")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> FieldDescriptor:
        return cls(RATIONALS)

    @classmethod
    def imaginary_quadratic(cls, d: int) -> FieldDescriptor:
        return cls(IMAGINARY_QUADRATIC, d)

    @classmethod
    def parse(cls, text: str) -> FieldDescriptor:
        """Parse ``Q``, ``Q(i)`` or ``Q(sqrt-<d>)``."""
        s = text.strip().replace(" ", "")
        if s == "Q":
            return cls.rationals()
        if s == "Q(i)":
            return cls.imaginary_quadratic(1)
        m = re.fullmatch(r"Q\(sqrt-(\d+)\)", s)
        if not m:
            raise ParseError(f"cannot parse field descriptor {text!r}")
        return cls.imaginary_quadratic(int(m.group(1)))

    @property
    def is_rational(self) -> bool:
        return self.kind == RATIONALS

    @property
    def discriminant(self) -> int:
        if self.is_rational:
            return 1
        return -self.d if self.d % 4 == 3 else -4 * self.d

    def __str__(self) -> str:
        if self.is_rational:
            return "Q"
        if self.d == 1:
            return "Q(i)"
        return f"Q(sqrt-{self.d})"


@dataclass(frozen=True)
class FieldInvariants:
    r1: int
    r2: int
    r: int
    delta: int
    class_number: int
    p_class_trivial: bool
    unit_mod_p_dim: int


@dataclass(frozen=True, order=True)
class Place:
    residue_prime: int
    splitting: str = "rational"
    degree: int = field(default=1, compare=False)
    norm: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.splitting not in SPLITTING_TAGS:
            raise ValueError(f"unknown splitting tag {self.splitting!r}")
        if self.degree not in (1, 2):
            raise ValueError("degree must be 1 or 2")
        if self.norm == 0:
            object.__setattr__(self, "norm", self.residue_prime**self.degree)
        if self.norm != self.residue_prime**self.degree:
            raise ValueError("norm must equal residue_prime**degree")

    def admissible(self, p: int) -> bool:
        return self.residue_prime != p and self.norm % p == 1

    def to_json(self) -> dict:
        return {
            "residue_prime": self.residue_prime,
            "degree": self.degree,
            "norm": self.norm,
            "splitting": self.splitting,
        }


def rational_place(q: int) -> Place:
    return Place(q, "rational", 1, q)


@dataclass(frozen=True)
class PrimeSet:
    """Canonically ordered, duplicate-free tuple of places."""

    places: tuple[Place, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.places))
        for a, b in zip(ordered, ordered[1:]):
            if a == b:
                raise ValueError(f"duplicate place over {a.residue_prime}")
        object.__setattr__(self, "places", ordered)

    @classmethod
    def of(cls, items: Iterable[Place | int]) -> PrimeSet:
        return cls(tuple(rational_place(x) if isinstance(x, int) else x for x in items))

    @property
    def primes(self) -> list[int]:
        return [pl.residue_prime for pl in self.places]

    @property
    def is_rational(self) -> bool:
        return all(pl.splitting == "rational" for pl in self.places)

    def __len__(self) -> int:
        return len(self.places)

    def __iter__(self):
        return iter(self.places)

    def __contains__(self, item) -> bool:
        if isinstance(item, int):
            return item in self.primes
        return item in self.places

    def union(self, other: Iterable[Place | int]) -> PrimeSet:
        extra = PrimeSet.of(other)
        return PrimeSet(tuple(set(self.places) | set(extra.places)))


def class_number_iq(d: int) -> int:
    """Class number of Q(sqrt(-d)) by counting reduced forms of the field discriminant."""
    if not is_squarefree(d):
        raise NotSquarefree(f"{d} is not squarefree")
    disc = -d if d % 4 == 3 else -4 * d
    big = -disc
    h = 0
    a = 1
    # reduced forms satisfy a <= sqrt(|D|/3)
    while 3 * a * a <= big:
        for b in range(-a + 1, a + 1):
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if c == a and b < 0:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            h += 1
        a += 1
    return h


def _check_p(fld: FieldDescriptor, p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if fld.is_rational and p == 2:
        raise UnsupportedAssumption("p = 2 requires a totally imaginary base field")


def invariants(fld: FieldDescriptor, p: int) -> FieldInvariants:
    _check_p(fld, p)
    if fld.is_rational:
        r1, r2, h, delta = 1, 0, 1, 0
    else:
        r1, r2 = 0, 1
        h = class_number_iq(fld.d)
        delta = 1 if (p == 2 or (p == 3 and fld.d == 3)) else 0
    r = r1 + r2
    return FieldInvariants(
        r1=r1,
        r2=r2,
        r=r,
        delta=delta,
        class_number=h,
        p_class_trivial=h % p != 0,
        # Dirichlet: rank r - 1, torsion contributes delta
        unit_mod_p_dim=r - 1 + delta,
    )


def kronecker(disc: int, ell: int) -> int:
    """Kronecker symbol (disc / ell) for a prime ``ell``."""
    if ell == 2:
        if disc % 2 == 0:
            return 0
        return 1 if disc % 8 in (1, 7) else -1
    a = disc % ell
    if a == 0:
        return 0
    return 1 if pow(a, (ell - 1) // 2, ell) == 1 else -1


def places_over(fld: FieldDescriptor, ell: int) -> list[Place]:
    """Places above the rational prime ``ell`` (conjugate split places identified)."""
    if fld.is_rational:
        return [rational_place(ell)]
    k = kronecker(fld.discriminant, ell)
    if k == 1:
        return [Place(ell, "split", 1)]
    if k == -1:
        return [Place(ell, "inert", 2)]
    return [Place(ell, "ramified", 1)]


def admissible_places(fld: FieldDescriptor, p: int, bound: int) -> list[Place]:
    _check_p(fld, p)
    out = []
    for ell in primes_upto(bound):
        ell = int(ell)
        if ell == p:
            continue
        out.extend(pl for pl in places_over(fld, ell) if pl.admissible(p))
    return out


def minimize_with_reasons(places: Iterable[Place | int], p: int) -> tuple[PrimeSet, list[tuple[Place, str]]]:
    kept, dropped = [], []
    seen = set()
    for item in places:
        pl = rational_place(item) if isinstance(item, int) else item
        if pl in seen:
            dropped.append((pl, "duplicate"))
            continue
        seen.add(pl)
        if pl.residue_prime == p:
            dropped.append((pl, f"residue characteristic equals p={p}"))
        elif pl.norm % p != 1:
            dropped.append((pl, f"norm {pl.norm} is not 1 mod {p}"))
        else:
            kept.append(pl)
    return PrimeSet(tuple(kept)), dropped


def minimize(places: Iterable[Place | int], p: int) -> PrimeSet:
    """Drop places that cannot ramify in a p-extension; the result has the same G_S(p)."""
    return minimize_with_reasons(places, p)[0]
