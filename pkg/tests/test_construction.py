import numpy as np
import pytest

from localdiff.construction import (
    BASELINE_KINDS,
    build_baseline,
    build_pn,
    build_truncated,
    levels_for,
    mian_chowla,
)
from localdiff.core import PolicyOverflowError, embed_base3
from localdiff.diffset import diff_count


def test_p0_is_single_point():
    P0 = build_pn(0)
    assert len(P0) == 1 and P0.n == 0


@pytest.mark.parametrize("j", range(7))
def test_pn_size_and_distinct(j):
    P = build_pn(j)
    assert len(P) == 2**j
    assert len({embed_base3(v) for v in P}) == 2**j


def test_pn_refuses_huge_levels():
    with pytest.raises(PolicyOverflowError):
        build_pn(64)
    with pytest.raises(PolicyOverflowError):
        build_truncated(2**40)


def test_truncated_matches_pn_on_powers_of_two():
    assert build_truncated(4).masks == build_pn(2).masks
    assert build_truncated(1).masks == (0,)


def test_truncated_three():
    A = build_truncated(3)
    assert len(A) == 3 and A.n == 2
    assert diff_count(A) == 7  # {0, +-1, +-3, +-2}


def test_levels_for():
    assert [levels_for(n) for n in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]


def test_mian_chowla_prefix():
    assert mian_chowla(10) == [1, 2, 4, 8, 13, 21, 31, 45, 66, 81]


def test_baseline_examples():
    assert diff_count(build_baseline("arithmetic_progression", 5)) == 9
    assert diff_count(build_baseline("sidon", 4)) == 13


@pytest.mark.parametrize("n", [2, 5, 12, 20])
def test_sidon_baseline_has_all_differences_distinct(n):
    assert diff_count(build_baseline("sidon", n)) == n * (n - 1) + 1


def test_random_baseline_matches_pairwise_oracle():
    S = build_baseline("random_integers", 10, seed=1)
    naive = {a - b for a in S.ints for b in S.ints}
    assert diff_count(S) == len(naive)


def test_random_baseline_deterministic_per_seed():
    assert build_baseline("random_integers", 10, 7) == build_baseline("random_integers", 10, 7)
    assert build_baseline("random_integers", 10, 7) != build_baseline("random_integers", 10, 8)


def test_unknown_kind():
    with pytest.raises(ValueError):
        build_baseline("hexagonal", 4)
    assert "sidon" in BASELINE_KINDS


def test_values_are_embedded_integers():
    P = build_pn(3)
    assert np.array_equal(P.values, np.array([0, 1, 3, 4, 9, 10, 12, 13]))
