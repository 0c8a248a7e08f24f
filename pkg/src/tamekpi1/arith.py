"""Modular arithmetic primitives: powers, primality, primitive roots, p-th power indices."""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import BadResidue, DivisorConflict, NotAdmissible

# Deterministic Miller-Rabin for n < 3.3e24, which covers all 64-bit inputs.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def pow_mod(base: int, exp: int, modulus: int) -> int:
    """Return ``base**exp % modulus`` by square-and-multiply."""
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    if exp < 0:
        raise ValueError("exponent must be non-negative")
    result = 1
    b = base % modulus
    e = exp
    while e:
        if e & 1:
            result = result * b % modulus
        b = b * b % modulus
        e >>= 1
    return result % modulus


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def primitive_roots_upto(q: int, count: int) -> tuple[int, ...]:
    """The ``count`` smallest primitive roots modulo the odd prime ``q``."""
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if q == 2:
        return (1,)
    factors = _prime_factors(q - 1)
    found = []
    g = 2
    while len(found) < count and g < q:
        if all(pow(g, (q - 1) // f, q) != 1 for f in factors):
            found.append(g)
        g += 1
    if len(found) < count:
        raise ValueError(f"fewer than {count} primitive roots modulo {q}")
    return tuple(found)


def primitive_root(q: int, rank: int = 1) -> int:
    """Smallest primitive root mod ``q`` (``rank=2`` gives the second smallest, etc.)."""
    return primitive_roots_upto(q, rank)[rank - 1]


def _subgroup_log(h: int, zeta: int, p: int, q: int) -> int:
    """Discrete log of ``h`` to base ``zeta`` in the order-``p`` subgroup of (Z/q)^x."""
    if p <= 64:
        acc = 1
        for e in range(p):
            if acc == h:
                return e
            acc = acc * zeta % q
        raise ArithmeticError("element outside the order-p subgroup")
    # baby-step giant-step
    m = math.isqrt(p - 1) + 1
    table = {}
    acc = 1
    for j in range(m):
        table.setdefault(acc, j)
        acc = acc * zeta % q
    giant = pow(zeta, p - m, q)  # zeta^(-m)
    gamma = h
    for i in range(m):
        j = table.get(gamma)
        if j is not None:
            return (i * m + j) % p
        gamma = gamma * giant % q
    raise ArithmeticError("element outside the order-p subgroup")


def residue_index(q: int, x: int, p: int, root: int | None = None) -> int:
    """Index ``e`` in F_p with ``x^((q-1)/p) = g^(e(q-1)/p) mod q``.

    ``g`` is the smallest primitive root of ``q`` unless ``root`` is given.
    The index is zero exactly when ``x`` is a p-th power modulo ``q``.
    """
    if (q - 1) % p != 0:
        raise NotAdmissible(f"{q} is not congruent to 1 mod {p}")
    if x % q == 0:
        raise DivisorConflict(f"{q} divides {x}")
    g = primitive_root(q) if root is None else root
    k = (q - 1) // p
    zeta = pow(g, k, q)
    return _subgroup_log(pow(x, k, q), zeta, p, q)


@lru_cache(maxsize=8)
def _sieve(bound: int) -> np.ndarray:
    flags = np.ones(bound + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(bound) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return flags


def primes_upto(bound: int) -> np.ndarray:
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    return np.flatnonzero(_sieve(bound)).astype(np.int64)


def primes_in_ap(residue: int, modulus: int, bound: int) -> list[int]:
    """All primes ``q <= bound`` with ``q = residue mod modulus``, ascending."""
    if math.gcd(residue, modulus) != 1:
        raise BadResidue(f"gcd({residue}, {modulus}) != 1")
    ps = primes_upto(bound)
    return [int(q) for q in ps[ps % modulus == residue % modulus]]
