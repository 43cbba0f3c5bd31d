import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localdiff import diffset
from localdiff.construction import build_baseline, build_pn
from localdiff.core import DimensionError, IntegerSet, PointSet, SubsetMask, difference
from localdiff.diffset import (
    cross_diff_count,
    diff_count,
    diff_profile,
    difference_codes,
    distance_count,
    parse_profile_csv,
    profile_csv,
)


def naive_codes(A: PointSet, B: PointSet) -> set[int]:
    return {difference(u, v).canonical_code for u in A for v in B}


def random_subset(P, rng, size=None):
    size = size or int(rng.integers(1, len(P) + 1))
    idx = rng.choice(len(P), size, replace=False)
    return P.subset(SubsetMask.from_indices(idx.tolist(), len(P)))


def test_examples():
    assert diff_count(build_pn(0)) == 1
    assert diff_count(build_pn(2)) == 9
    assert diff_count(build_pn(5)) == 243
    assert distance_count(build_pn(2)) == 4
    assert distance_count(build_pn(0)) == 0


def test_p5_against_trit_vector_oracle():
    P5 = build_pn(5)
    assert set(difference_codes(P5).tolist()) == naive_codes(P5, P5) == set(range(3**5))


def test_cross_examples():
    P2 = build_pn(2)
    A = PointSet.from_masks([0b00, 0b01], 2)
    B = PointSet.from_masks([0b10], 2)
    assert cross_diff_count(A, B) == 2
    assert cross_diff_count(PointSet((), 2), P2) == 0
    single = PointSet.from_masks([3], 2)
    assert cross_diff_count(single, single) == 1


def test_random_subsets_of_p6_match_naive_oracle():
    rng = np.random.default_rng(6)
    P6 = build_pn(6)
    for _ in range(100):
        A, B = random_subset(P6, rng), random_subset(P6, rng)
        assert diff_count(A) == len(naive_codes(A, A))
        assert cross_diff_count(A, B) == len(naive_codes(A, B))
        assert set(difference_codes(A, B).tolist()) == naive_codes(A, B)


def test_symmetry_and_monotonicity():
    rng = np.random.default_rng(11)
    P6 = build_pn(6)
    for _ in range(50):
        A, B = random_subset(P6, rng), random_subset(P6, rng)
        assert cross_diff_count(A, B) == cross_diff_count(B, A)
        union = PointSet.from_masks(sorted(set(A.masks) | set(B.masks)), 6)
        assert diff_count(A) <= diff_count(union)
        assert diff_count(A) % 2 == 1


def test_threads_agree():
    P = build_pn(10)
    assert diff_count(P, threads=4) == diff_count(P) == 3**10
    S = build_baseline("random_integers", 600, seed=3)
    assert diff_count(S, threads=3) == diff_count(S)


def test_hash_path_for_wide_values(monkeypatch):
    monkeypatch.setattr(diffset, "BITMAP_LIMIT", 10)
    assert diff_count(build_pn(6)) == 3**6
    S = IntegerSet((0, 10**15, 3 * 10**15, 2**70))
    assert diff_count(S) == 13


def test_dimension_errors():
    with pytest.raises(DimensionError):
        cross_diff_count(build_pn(2), build_pn(3))
    with pytest.raises(DimensionError):
        cross_diff_count(build_pn(2), IntegerSet((1, 2)))


def test_empty_diff_count_rejected():
    with pytest.raises(ValueError):
        diff_count(PointSet((), 3))


def test_profile_examples():
    assert diff_profile(build_pn(0)) == {0: 1}
    assert diff_profile(build_pn(1)) == {0: 1, 1: 2, 2: 1}
    ap = diff_profile(build_baseline("arithmetic_progression", 5))
    assert len(ap) == 9 and sorted(ap.values()) == [1, 1, 2, 2, 3, 3, 4, 4, 5]


def test_profile_csv_round_trip_is_deterministic():
    profile = diff_profile(build_pn(4))
    text = profile_csv(profile)
    assert text == profile_csv(diff_profile(build_pn(4)))
    assert text.startswith("code,count\n")
    assert parse_profile_csv(text) == profile
    assert sum(profile.values()) == 16 * 16


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=40, unique=True))
def test_integer_sets_match_python_sets(ints):
    S = IntegerSet(tuple(ints))
    naive = {a - b for a in ints for b in ints}
    assert diff_count(S) == len(naive)
    assert distance_count(S) == sum(1 for d in naive if d > 0)
