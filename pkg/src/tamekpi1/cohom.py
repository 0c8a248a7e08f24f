"""Etale cohomology dimensions of Spec(O_k) minus S with Z/p coefficients (tame case)."""
from __future__ import annotations

from dataclasses import asdict, dataclass

from .fields import FieldDescriptor, Place, PrimeSet, class_number_iq, invariants
from .errors import NotComputable, OutOfScope, UnsupportedAssumption

KOCH_DEFECT_NOTE = (
    "h2-defect 0 via Koch presentation: for k=Q and primes q = 1 mod p, "
    "h2(G_S) = #S = h2_et(X - S) (external input, not computed)"
)


@dataclass(frozen=True)
class LocalTable:
    h2_x: int
    h3_x: int
    euler: int


@dataclass(frozen=True)
class DimensionTable:
    h0: int
    h1: int
    h2: int
    h3: int
    euler: int
    dim_VS: int
    dim_sha2: int
    theta: int

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DegenerateVerdict:
    degenerate: bool
    case_label: str
    reason: str


def local_table(residue_char: int, p: int, delta_p: int, local_degree: int = 1) -> LocalTable:
    """Local cohomology at a closed point: h^2_x, h^3_x and the Euler characteristic."""
    if delta_p not in (0, 1):
        raise ValueError("delta_p must be 0 or 1")
    if local_degree < 1:
        raise ValueError("local_degree must be >= 1")
    wild = local_degree if residue_char == p else 0
    h2 = delta_p + wild
    h3 = delta_p
    return LocalTable(h2_x=h2, h3_x=h3, euler=h2 - h3)


def v_dim(fld: FieldDescriptor, p: int, S: PrimeSet) -> int:
    """dim V_S, available only when mu_p is not in k and p does not divide h_k.

    Under those hypotheses dim V_empty = dim pCl + r - 1 + delta reduces to the
    unit contribution, and V_S embeds in V_empty.
    """
    inv = invariants(fld, p)
    if inv.delta == 1:
        raise UnsupportedAssumption(f"mu_{p} is contained in {fld}")
    if not inv.p_class_trivial:
        raise UnsupportedAssumption(f"p={p} divides the class number {inv.class_number}")
    dim_p_cl = 0
    dim_v_empty = dim_p_cl + inv.r - 1 + inv.delta
    if dim_v_empty != inv.unit_mod_p_dim:
        raise AssertionError("exact sequence bookkeeping mismatch")
    if dim_v_empty != 0:
        # real quadratic and larger fields would need S-unit computations
        raise UnsupportedAssumption("V_S with nontrivial units is not modelled")
    return 0


def _check_tame(S: PrimeSet, p: int) -> None:
    for pl in S:
        if not pl.admissible(p):
            raise UnsupportedAssumption(f"place over {pl.residue_prime} is not admissible for p={p}")


def global_dimensions(fld: FieldDescriptor, p: int, S: PrimeSet) -> DimensionTable:
    _check_tame(S, p)
    inv = invariants(fld, p)
    dim_vs = v_dim(fld, p, S)
    # every admissible place has mu_p in its completion
    sum_delta = len(S)
    theta = 1 if (inv.delta == 1 and len(S) == 0) else 0
    h0 = 1
    h1 = 1 + sum_delta - inv.delta + dim_vs - inv.r
    h2 = sum_delta - inv.delta + dim_vs + theta
    h3 = theta
    euler = h0 - h1 + h2 - h3
    table = DimensionTable(h0, h1, h2, h3, euler, dim_vs, dim_vs, theta)
    assert table.euler == inv.r, "Euler characteristic must equal r in the tame case"
    return table


def h2_defect(fld: FieldDescriptor, p: int, S: PrimeSet) -> tuple[int, str]:
    """Return (defect, provenance). Only Q at odd p is supported."""
    if not fld.is_rational or p == 2:
        raise NotComputable("h2-defect is only available for Q at odd p")
    h2_et = global_dimensions(fld, p, S).h2
    h2_group = len(S)  # Koch
    return h2_et - h2_group, KOCH_DEFECT_NOTE


def classify_degenerate(fld: FieldDescriptor, p: int, place: Place) -> DegenerateVerdict:
    """Decide whether X - {place} is a K(pi,1) with trivial G_S(p)."""
    if fld.is_rational or p not in (2, 3):
        raise OutOfScope(f"degenerate classification needs an imaginary quadratic field and p in (2, 3)")
    if not place.admissible(p):
        raise OutOfScope(f"place over {place.residue_prime} is not admissible for p={p}")
    N = place.norm
    if p == 2 and fld.d == 1:
        if N % 8 != 1:
            return DegenerateVerdict(True, "b", f"k=Q(i), N={N} is not 1 mod 8")
        return DegenerateVerdict(False, "none", f"k=Q(i), N={N} is 1 mod 8")
    if p == 2:
        h = class_number_iq(fld.d)
        if h % 2 == 0:
            return DegenerateVerdict(False, "none", f"h_k={h} is even")
        if N % 4 != 1:
            return DegenerateVerdict(True, "a", f"h_k={h} odd and N={N} is not 1 mod 4")
        return DegenerateVerdict(False, "none", f"N={N} is 1 mod 4")
    if fld.d == 3:
        if N % 9 != 1:
            return DegenerateVerdict(True, "c", f"k=Q(sqrt-3), N={N} is not 1 mod 9")
        return DegenerateVerdict(False, "none", f"k=Q(sqrt-3), N={N} is 1 mod 9")
    return DegenerateVerdict(False, "none", f"mu_3 is not contained in {fld}")
