"""Free graded Lie algebras over F_p and F_p[pi] in the Lyndon (Hall) basis.

Generators are indexed 0..n-1 and printed as x1..xn. A basis element is a
Lyndon word (tuple of generator indices) standing for its standard
bracketing. Elements over F_p[pi] are sums of pi^k * (basis element), where
pi carries degree 1.

The strong-freeness oracle compares the Hilbert series of the enveloping
algebra of L/(rho) (obtained from the quotient dimensions through PBW) with
1 / (1 - n t + sum t^deg(rho_i)).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .errors import (
    DegreeOverflow,
    InhomogeneousRelation,
    ParseError,
    ResourceLimit,
    WrongDegree,
)
from .linalg import rank_mod_p, row_reduce

MAX_GENERATORS = 8
MAX_DEGREE = 10

FP = "Fp"
FP_PI = "Fp[pi]"


# ---------------------------------------------------------------- words


def is_lyndon(w: tuple[int, ...]) -> bool:
    return all(w < w[i:] for i in range(1, len(w)))


@lru_cache(maxsize=None)
def lyndon_words(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Lyndon words of length ``d`` over ``n`` letters, in lexicographic order (Duval)."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == d:
            out.append(tuple(w))
        while len(w) < d:
            w.append(w[len(w) - m])
        while w and w[-1] == n - 1:
            w.pop()
    return tuple(out)


def necklace_count(n: int, d: int) -> int:
    """Dimension of the degree-d part of the free Lie algebra on n generators."""
    total = 0
    for m in range(1, d + 1):
        if d % m == 0:
            total += _mobius(m) * n ** (d // m)
    return total // d


def _mobius(m: int) -> int:
    res, f = 1, 2
    while f * f <= m:
        if m % f == 0:
            m //= f
            if m % f == 0:
                return 0
            res = -res
        f += 1
    return -res if m > 1 else res


@lru_cache(maxsize=None)
def standard_factorization(w: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """w = uv with v the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no standard factorization")


@lru_cache(maxsize=None)
def expand(w: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    """The standard bracketing of a Lyndon word, expanded in the tensor algebra over Z."""
    if len(w) == 1:
        return {w: 1}
    u, v = standard_factorization(w)
    return _commutator(expand(u), expand(v))


def _commutator(f: dict, g: dict) -> dict:
    out: dict = {}
    for a, ca in f.items():
        for b, cb in g.items():
            c = ca * cb
            out[a + b] = out.get(a + b, 0) + c
            out[b + a] = out.get(b + a, 0) - c
    return {k: c for k, c in out.items() if c}


def to_lyndon(poly: dict[tuple[int, ...], int], p: int) -> dict[tuple[int, ...], int]:
    """Coordinates of a Lie polynomial in the Lyndon basis, mod p.

    Uses triangularity: the expansion of a Lyndon word w is w plus strictly
    larger words, so the smallest surviving word is always a basis element.
    """
    f = {k: c % p for k, c in poly.items() if c % p}
    out = {}
    while f:
        w = min(f)
        c = f[w]
        if not is_lyndon(w):
            raise ValueError(f"not a Lie polynomial (leading word {w})")
        out[w] = c
        for k, ck in expand(w).items():
            val = (f.get(k, 0) - c * ck) % p
            if val:
                f[k] = val
            else:
                f.pop(k, None)
    return out


def bracket_words_tensor(u: tuple[int, ...], v: tuple[int, ...], p: int) -> dict[tuple[int, ...], int]:
    """[P_u, P_v] via expansion in the tensor algebra; slow, kept as a cross-check."""
    return to_lyndon(_commutator(expand(u), expand(v)), p)


@lru_cache(maxsize=None)
def bracket_words(u: tuple[int, ...], v: tuple[int, ...], p: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """[P_u, P_v] in Lyndon coordinates mod p, as sorted (word, coeff) pairs.

    Hall rewriting: for Lyndon u < v, (u, v) is the standard factorization of
    uv iff u is a letter or the right factor of u is >= v. Otherwise, with
    u = (u1, u2), Jacobi gives [[u1, v], u2] + [u1, [u2, v]].
    """
    if u == v:
        return ()
    if u > v:
        return tuple((w, -c % p) for w, c in bracket_words(v, u, p))
    if len(u) == 1 or standard_factorization(u)[1] >= v:
        return ((u + v, 1 % p),)
    u1, u2 = standard_factorization(u)
    out: dict = {}
    for w, c in bracket_words(u1, v, p):
        _accumulate(out, _bracket_word_combo(w, ((u2, 1),), p), c, p)
    for w, c in bracket_words(u2, v, p):
        _accumulate(out, _bracket_word_combo(u1, ((w, 1),), p), c, p)
    return tuple(sorted((w, c) for w, c in out.items() if c))


def _bracket_word_combo(u, combo, p):
    out: dict = {}
    for v, c in combo:
        _accumulate(out, bracket_words(u, v, p), c, p)
    return tuple(out.items())


def _accumulate(out: dict, pairs, scale: int, p: int) -> None:
    for w, c in pairs:
        out[w] = (out.get(w, 0) + scale * c) % p


@lru_cache(maxsize=None)
def ad_matrix(n: int, d: int, p: int) -> tuple[np.ndarray, ...]:
    """Matrices of x -> [x, x_j] from degree d to degree d+1 in Lyndon coordinates.

    One (dim L_d) x (dim L_{d+1}) matrix per generator j.
    """
    src = lyndon_words(n, d)
    dst = {w: i for i, w in enumerate(lyndon_words(n, d + 1))}
    mats = []
    for j in range(n):
        M = np.zeros((len(src), len(dst)), dtype=np.int64)
        for r, w in enumerate(src):
            for word, c in bracket_words(w, (j,), p):
                M[r, dst[word]] = c
        mats.append(M)
    return tuple(mats)


# ---------------------------------------------------------------- algebra


@dataclass(frozen=True)
class HallBasis:
    generators: int
    max_degree: int
    basis: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def sizes(self) -> list[int]:
        return [len(b) for b in self.basis]

    def bracket_form(self, w: tuple[int, ...]) -> str:
        return _word_str(w)


def hall_basis(n: int, D: int) -> HallBasis:
    if n < 1 or D < 1:
        raise ValueError("need n >= 1 and D >= 1")
    if n > MAX_GENERATORS or D > MAX_DEGREE:
        raise ResourceLimit(f"hall basis for n={n}, D={D} exceeds limits ({MAX_GENERATORS}, {MAX_DEGREE})")
    return HallBasis(n, D, tuple(lyndon_words(n, d) for d in range(1, D + 1)))


def _word_str(w: tuple[int, ...]) -> str:
    if len(w) == 1:
        return f"x{w[0] + 1}"
    u, v = standard_factorization(w)
    return f"[{_word_str(u)},{_word_str(v)}]"


class FreeLieAlgebra:
    """Free Lie algebra on ``n`` generators over F_p (optionally F_p[pi]), truncated at ``max_degree``."""

    def __init__(self, n: int, p: int, max_degree: int = 6):
        if n < 1:
            raise ValueError("need at least one generator")
        self.n = n
        self.p = p
        self.max_degree = max_degree

    def __eq__(self, other):
        return isinstance(other, FreeLieAlgebra) and (self.n, self.p) == (other.n, other.p)

    def __hash__(self):
        return hash((self.n, self.p))

    def __repr__(self):
        return f"FreeLieAlgebra(n={self.n}, p={self.p}, max_degree={self.max_degree})"

    def gen(self, i: int) -> GradedLieElement:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return GradedLieElement(self, {(0, (i,)): 1})

    def gens(self) -> list[GradedLieElement]:
        return [self.gen(i) for i in range(self.n)]

    def zero(self, ring: str = FP) -> GradedLieElement:
        return GradedLieElement(self, {}, ring)

    def basis_element(self, w: tuple[int, ...], pi_power: int = 0) -> GradedLieElement:
        if not is_lyndon(w) or max(w) >= self.n:
            raise ValueError(f"{w} is not a Lyndon word over {self.n} letters")
        return GradedLieElement(self, {(pi_power, tuple(w)): 1})

    def parse(self, text: str) -> GradedLieElement:
        return _Parser(self, text).run()


class GradedLieElement:
    """Finite sum of terms c * pi^k * P_w with c in F_p and w a Lyndon word."""

    __slots__ = ("algebra", "terms", "ring")

    def __init__(self, algebra: FreeLieAlgebra, terms: dict, ring: str | None = None):
        p = algebra.p
        self.algebra = algebra
        self.terms = {k: c % p for k, c in terms.items() if c % p}
        has_pi = any(k > 0 for k, _ in self.terms)
        self.ring = FP_PI if (has_pi or ring == FP_PI) else FP

    # -- structure
    def degrees(self) -> set[int]:
        return {k + len(w) for k, w in self.terms}

    @property
    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise InhomogeneousRelation(f"{self} is not homogeneous")
        return ds.pop()

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def is_zero(self) -> bool:
        return not self.terms

    def components(self) -> dict[int, dict]:
        out: dict[int, dict] = {}
        for (k, w), c in self.terms.items():
            out.setdefault(k + len(w), {})[(k, w)] = c
        return out

    def coefficient(self, w: tuple[int, ...], pi_power: int = 0) -> int:
        return self.terms.get((pi_power, tuple(w)), 0)

    def lie_vector(self, d: int) -> np.ndarray:
        """Coordinates of the pi-free degree-d part over the Lyndon basis."""
        idx = {w: i for i, w in enumerate(lyndon_words(self.algebra.n, d))}
        v = np.zeros(len(idx), dtype=np.int64)
        for (k, w), c in self.terms.items():
            if k == 0 and len(w) == d:
                v[idx[w]] = c
        return v

    # -- arithmetic
    def _check(self, other):
        if not isinstance(other, GradedLieElement) or other.algebra != self.algebra:
            raise TypeError("elements of different algebras")

    def _ring_join(self, other):
        return FP_PI if FP_PI in (self.ring, other.ring) else FP

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return GradedLieElement(self.algebra, t, self._ring_join(other))

    def __neg__(self):
        return GradedLieElement(self.algebra, {k: -c for k, c in self.terms.items()}, self.ring)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if not isinstance(scalar, int):
            return NotImplemented
        return GradedLieElement(self.algebra, {k: c * scalar for k, c in self.terms.items()}, self.ring)

    __rmul__ = __mul__

    def times_pi(self, power: int = 1) -> GradedLieElement:
        return GradedLieElement(self.algebra, {(k + power, w): c for (k, w), c in self.terms.items()}, FP_PI)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        return isinstance(other, GradedLieElement) and other.algebra == self.algebra and other.terms == self.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (k, w), c in sorted(self.terms.items(), key=lambda t: (t[0][0] + len(t[0][1]), -t[0][0], t[0][1])):
            factors = []
            if c != 1:
                factors.append(str(c))
            if k == 1:
                factors.append("pi")
            elif k > 1:
                factors.append(f"pi^{k}")
            factors.append(_word_str(w))
            parts.append("*".join(factors))
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self) -> str:
        return str(self)


def bracket(x: GradedLieElement, y: GradedLieElement) -> GradedLieElement:
    x._check(y)
    alg = x.algebra
    if x.terms and y.terms:
        top = max(x.degrees()) + max(y.degrees())
        if top > alg.max_degree:
            raise DegreeOverflow(f"bracket of degree {top} exceeds D={alg.max_degree}")
    out: dict = {}
    for (ka, u), ca in x.terms.items():
        for (kb, v), cb in y.terms.items():
            if u == v:
                continue
            sign = 1
            if u > v:
                u2, v2, sign = v, u, -1
            else:
                u2, v2 = u, v
            for w, c in bracket_words(u2, v2, alg.p):
                key = (ka + kb, w)
                out[key] = out.get(key, 0) + sign * ca * cb * c
    return GradedLieElement(alg, out, x._ring_join(y))


def reduce_mod_pi(x: GradedLieElement) -> GradedLieElement:
    """Image in the free F_p-Lie algebra: every term carrying pi is dropped."""
    return GradedLieElement(x.algebra, {k: c for k, c in x.terms.items() if k[0] == 0}, FP)


# ---------------------------------------------------------------- quotient and oracle


def _check_relations(relations, n: int) -> list[GradedLieElement]:
    rels = list(relations)
    for r in rels:
        if r.algebra.n != n:
            raise ValueError("relation lives in a different algebra")
        if r.ring == FP_PI:
            raise ValueError("relations must be over F_p; apply reduce_mod_pi first")
        if r.is_zero():
            raise ValueError("zero relation")
        if not r.is_homogeneous():
            raise InhomogeneousRelation(f"{r} is not homogeneous")
    return rels


def quotient_dims(n: int, relations, D: int, p: int | None = None) -> list[int]:
    """dim g_d for d = 1..D, where g is the free Lie algebra modulo the ideal of the relations."""
    rels = _check_relations(relations, n)
    if not rels:
        return [necklace_count(n, d) for d in range(1, D + 1)]
    if p is None:
        p = rels[0].algebra.p
    if n > MAX_GENERATORS or D > MAX_DEGREE:
        raise ResourceLimit(f"n={n}, D={D} exceeds limits")
    dims = []
    ideal = np.zeros((0, n), dtype=np.int64)
    for d in range(1, D + 1):
        size = len(lyndon_words(n, d))
        blocks = []
        if d > 1 and ideal.shape[0]:
            blocks.extend(ideal @ M % p for M in ad_matrix(n, d - 1, p))
        new = [r.lie_vector(d) for r in rels if r.degree == d]
        if new:
            blocks.append(np.array(new, dtype=np.int64))
        if blocks:
            ideal, _ = row_reduce(np.vstack(blocks), p, reduced=False)
        else:
            ideal = np.zeros((0, size), dtype=np.int64)
        dims.append(size - ideal.shape[0])
    return dims


def pbw_series(dims: list[int], D: int) -> list[int]:
    """Coefficients through t^D of prod_d (1 - t^d)^(-dims[d-1])."""
    series = [1] + [0] * D
    for d, k in enumerate(dims[:D], start=1):
        if k == 0:
            continue
        factor = [0] * (D + 1)
        for j in range(D // d + 1):
            factor[d * j] = comb(k + j - 1, j)
        series = [sum(series[i] * factor[t - i] for i in range(t + 1)) for t in range(D + 1)]
    return series


def expected_series(n: int, degrees: list[int], D: int) -> list[int]:
    """Coefficients through t^D of 1 / (1 - n t + sum_i t^degrees[i])."""
    denom = [0] * (D + 1)
    denom[0] = 1
    if D >= 1:
        denom[1] -= n
    for h in degrees:
        if h <= D:
            denom[h] += 1
    out = [1] + [0] * D
    for t in range(1, D + 1):
        out[t] = -sum(denom[i] * out[t - i] for i in range(1, t + 1))
    return out


@dataclass(frozen=True)
class SeriesVerdict:
    strongly_free: bool
    checked_degree: int
    expected: list[int]
    actual: list[int]

    def to_json(self) -> dict:
        return {
            "strongly_free": self.strongly_free,
            "checked_degree": self.checked_degree,
            "expected": list(self.expected),
            "actual": list(self.actual),
        }

    @property
    def first_mismatch(self) -> int | None:
        for d, (a, b) in enumerate(zip(self.expected, self.actual)):
            if a != b:
                return d
        return None


def strongly_free_oracle(n: int, relations, D: int = 6, p: int | None = None) -> SeriesVerdict:
    """Truncated Hilbert-series test of strong freeness, verified through degree D."""
    rels = _check_relations(relations, n)
    expected = expected_series(n, [r.degree for r in rels], D)
    if any(c < 0 for c in expected):
        return SeriesVerdict(False, D, expected, [])
    actual = pbw_series(quotient_dims(n, rels, D, p), D)
    return SeriesVerdict(expected == actual, D, expected, actual)


def span_criterion(n: int, relations, subset_S) -> bool:
    """Sufficient condition for strong freeness of quadratic relations.

    With a the ideal generated by the generators outside ``subset_S`` and T the
    brackets [x, s] (x outside, s inside), require every relation to lie in
    span(T) modulo [a, a] and the relations to be independent there.
    """
    rels = list(relations)
    inside = set(subset_S)
    if not rels:
        return True
    p = rels[0].algebra.p
    for r in rels:
        if r.ring == FP_PI or r.is_zero() or r.degrees() != {2}:
            raise WrongDegree(f"{r} is not a nonzero pi-free element of degree 2")
    words = lyndon_words(n, 2)
    t_cols = [i for i, (a, b) in enumerate(words) if (a in inside) != (b in inside)]
    both_in = [i for i, (a, b) in enumerate(words) if a in inside and b in inside]
    M = np.array([r.lie_vector(2) for r in rels], dtype=np.int64)
    if both_in and M[:, both_in].any():
        return False
    return rank_mod_p(M[:, t_cols], p) == len(rels)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|(pi)|x(\d+)|(\^)|([\[\],+\-*]))")


class _Parser:
    """Recursive descent for e.g. ``2*pi*x1 + [x1,x2] - [x2,[x1,x3]]``."""

    def __init__(self, algebra: FreeLieAlgebra, text: str):
        self.alg = algebra
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected input at {text[pos:]!r}")
            pos = m.end()
            num, pi, gen, caret, sym = m.groups()
            if num is not None:
                self.tokens.append(("int", int(num)))
            elif pi:
                self.tokens.append(("pi", None))
            elif gen is not None:
                self.tokens.append(("gen", int(gen)))
            else:
                self.tokens.append(("sym", caret or sym))
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, sym=None):
        tok = self.peek()
        if sym is not None and tok != ("sym", sym):
            raise ParseError(f"expected {sym!r}, got {tok[1]!r}")
        self.i += 1
        return tok

    def run(self) -> GradedLieElement:
        x = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"trailing input near token {self.peek()[1]!r}")
        return x

    def expr(self) -> GradedLieElement:
        sign = 1
        if self.peek() in (("sym", "+"), ("sym", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        total = self.term() * sign
        while self.peek() in (("sym", "+"), ("sym", "-")):
            sign = -1 if self.take()[1] == "-" else 1
            total = total + self.term() * sign
        return total

    def term(self) -> GradedLieElement:
        coeff, pi_power, atom = 1, 0, None
        while True:
            kind, val = self.peek()
            if kind == "int":
                self.take()
                coeff *= val
            elif kind == "pi":
                self.take()
                power = 1
                if self.peek() == ("sym", "^"):
                    self.take()
                    kind2, val2 = self.take()
                    if kind2 != "int":
                        raise ParseError("expected exponent after '^'")
                    power = val2
                pi_power += power
            elif kind == "gen" or (kind == "sym" and val == "["):
                if atom is not None:
                    raise ParseError("a term may contain only one Lie monomial")
                atom = self.atom()
            else:
                raise ParseError(f"unexpected token {val!r}")
            if self.peek() == ("sym", "*"):
                self.take()
                continue
            break
        if atom is None:
            raise ParseError("term without a Lie monomial")
        if pi_power:
            atom = atom.times_pi(pi_power)
        return atom * coeff

    def atom(self) -> GradedLieElement:
        kind, val = self.take()
        if kind == "gen":
            if not 1 <= val <= self.alg.n:
                raise ParseError(f"generator x{val} outside x1..x{self.alg.n}")
            return self.alg.gen(val - 1)
        left = self.expr()
        self.take(",")
        right = self.expr()
        self.take("]")
        return bracket(left, right)


def parse_relations(n: int, p: int, texts, max_degree: int = 6) -> list[GradedLieElement]:
    alg = FreeLieAlgebra(n, p, max_degree)
    return [alg.parse(t) for t in texts]
