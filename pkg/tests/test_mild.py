from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from tamekpi1.arith import primes_in_ap
from tamekpi1.errors import BudgetExceeded, DegenerateRelation, IncompleteCupData
from tamekpi1.linalg import rank_mod_p
from tamekpi1.linking import LinkingData, linking_data
from tamekpi1.mild import (
    MildWitness,
    NotFound,
    SearchLimits,
    cup_data,
    cup_from_forms,
    find_mild_witness,
    find_witness,
    initial_forms,
    mildkrit_check,
)

ADM3 = primes_in_ap(1, 3, 400)


def test_initial_forms_7_19():
    ld = linking_data([7, 19], 3)
    forms = initial_forms(ld)
    assert [str(f) for f in forms] == ["2*pi*x1", "[x1,x2]"]
    assert cup_data(ld) == cup_from_forms(forms)


def test_two_primes_never_pass():
    for S in combinations(ADM3[:8], 2):
        ld = linking_data(S, 3)
        try:
            initial_forms(ld)
        except DegenerateRelation:
            continue
        assert isinstance(find_mild_witness(ld), NotFound)


def test_degenerate_relation():
    # 19 and 37 are both 1 mod 9 and are cubes modulo each other
    with pytest.raises(DegenerateRelation):
        initial_forms(linking_data([19, 37], 3))


def test_cup_from_forms_agrees():
    for S in combinations(ADM3[:7], 4):
        ld = linking_data(S, 3)
        try:
            forms = initial_forms(ld)
        except DegenerateRelation:
            continue
        assert cup_from_forms(forms) == cup_data(ld)


def _rank_brute(cup, n, m, p):
    """Reference search: every (a, first block), checking both conditions literally."""
    for a in range(1, n):
        for first in combinations(range(n), a):
            second = [g for g in range(n) if g not in first]
            ok = all(
                cup[(i, (s, t))] % p == 0
                for i in range(m) for s, t in combinations(second, 2)
            )
            if not ok:
                continue
            rows = []
            for i in range(m):
                row = []
                for s in first:
                    for t in second:
                        v = cup[(i, (min(s, t), max(s, t)))]
                        row.append(v if s < t else -v)
                rows.append(row)
            if rank_mod_p(rows, p) == m:
                return a, list(first) + second
    return None


@settings(max_examples=80, deadline=None)
@given(st.integers(3, 5), st.integers(1, 3), st.sampled_from([2, 3, 5]), st.randoms(use_true_random=False))
def test_find_witness_matches_brute(n, m, p, rnd):
    cup = {}
    for i in range(m):
        for k, l in combinations(range(n), 2):
            cup[(i, (k, l))] = rnd.choice([0, 0, rnd.randrange(p)])
    w = find_witness(cup, n, m, p)
    ref = _rank_brute(cup, n, m, p)
    if ref is None:
        assert isinstance(w, NotFound)
    else:
        assert w and (w.a, list(w.ordering)) == ref and w.rank == m


def test_synthetic_n4():
    p, n, m = 3, 4, 2
    cup = {(i, kl): 0 for i in range(m) for kl in combinations(range(n), 2)}
    cup[(0, (0, 2))] = 1
    cup[(1, (1, 3))] = 2
    w = find_witness(cup, n, m, p)
    assert w.a == 2 and w.rank == 2
    assert mildkrit_check(cup, n, m, w.ordering, w.a, p) == w


def test_mildkrit_argument_checks():
    cup = {(0, (0, 1)): 1}
    with pytest.raises(ValueError):
        mildkrit_check(cup, 2, 1, [0, 1], 2, 3)
    with pytest.raises(ValueError):
        mildkrit_check(cup, 2, 1, [0, 0], 1, 3)
    with pytest.raises(IncompleteCupData):
        mildkrit_check({}, 3, 1, [0, 1, 2], 1, 3)


def test_budget():
    n = 8
    cup = {(i, kl): 0 for i in range(3) for kl in combinations(range(n), 2)}
    with pytest.raises(BudgetExceeded):
        find_witness(cup, n, 3, 3, SearchLimits(max_candidates=5))


def test_heuristic_path():
    # n beyond the exhaustive limit: a star pattern centred at 0 with m = 1
    n = 12
    cup = {(0, kl): 0 for kl in combinations(range(n), 2)}
    cup[(0, (0, 5))] = 1
    w = find_witness(cup, n, 1, 3, SearchLimits(exhaustive_max_n=10))
    assert w and w.rank == 1


def test_witness_json():
    w = MildWitness((0, 2, 1), 1, ((1, 0),), 1)
    assert MildWitness.from_json(w.to_json()) == w


MILD5 = [7, 13, 19, 37, 103]


def test_permutation_covariance():
    ld = linking_data(MILD5, 3)
    w = find_mild_witness(ld)
    assert w
    cup = cup_data(ld)
    for perm in [(4, 3, 2, 1, 0), (1, 0, 3, 2, 4), (2, 0, 1, 4, 3)]:
        re = ld.relabel(perm)
        inv = {old: new for new, old in enumerate(perm)}
        moved = [inv[g] for g in w.ordering]
        assert mildkrit_check(cup_data(re), 5, 5, moved, w.a, 3) is not None
        assert bool(find_mild_witness(re))


def test_root_choice_invariance():
    hits = 0
    for S in combinations(ADM3[:14], 4):
        base = bool(find_mild_witness(linking_data(S, 3)))
        alt = bool(find_mild_witness(linking_data(S, 3, root_rank=2)))
        assert base == alt, S
        hits += base
    assert hits > 0


@pytest.mark.parametrize("v, ok", [(1, True), (0, False)])
def test_mildkrit_two_generators(v, ok):
    w = mildkrit_check({(0, (0, 1)): v}, 2, 1, [0, 1], 1, 3)
    assert (w is not None) == ok
    if ok:
        assert w.rank == 1 and w.matrix == ((1,),)


def test_single_prime():
    q_plain, q_deg = 7, 19  # 7 is not 1 mod 9, 19 is
    (rho,) = initial_forms(linking_data([q_plain], 3))
    assert str(rho) == "2*pi*x1"
    with pytest.raises(DegenerateRelation):
        initial_forms(linking_data([q_deg], 3))
    assert isinstance(find_mild_witness(linking_data([7], 3)), NotFound)


def test_7_19_not_found():
    assert isinstance(find_mild_witness(linking_data([7, 19], 3)), NotFound)
