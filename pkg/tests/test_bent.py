import itertools
from collections import Counter

import galois
import numpy as np
import pytest

from dqi_workbench.attacks import mm_bound_table, mm_overlap_table
from dqi_workbench.bent import (
    AffineSubspace,
    TargetSet,
    affine_subspace_count,
    enumerate_affine_subspaces,
    gaussian_binomial,
    gl_random,
    max_affine_intersection,
    overlap_table_bruteforce,
    overlap_table_from_mask,
    s_k_mask,
    s_k_member,
    s_k_size,
    tbt_opi_generate,
    verify_bounds,
)
from dqi_workbench.errors import CapabilityError, DomainError


def test_s1_membership():
    members = [bits for bits in itertools.product((0, 1), repeat=2) if s_k_member(bits, 1)]
    assert members == [(1, 1)]


def test_member_length_mismatch():
    with pytest.raises(DomainError):
        s_k_member((1, 0, 1), 2)


def test_set_sizes():
    for k in range(1, 7):
        mask = s_k_mask(k)
        assert int(mask.sum()) == s_k_size(k) == 2 ** (2 * k - 1) - 2 ** (k - 1)
        assert int((~mask).sum()) == 2 ** (2 * k - 1) + 2 ** (k - 1)
    assert s_k_size(5) == 496
    assert s_k_size(6) == 2016


def test_mask_agrees_with_membership():
    mask = s_k_mask(3)
    assert all(mask[x] == s_k_member(x, 3) for x in range(64))


def test_enumeration_counts_match_gaussian_binomials():
    assert gaussian_binomial(4, 2) == 35
    for dim in range(1, 5):
        for d in range(dim + 1):
            subspaces = list(enumerate_affine_subspaces(dim, d))
            assert len(subspaces) == affine_subspace_count(dim, d)
            assert len({frozenset(s.points().tolist()) for s in subspaces}) == len(subspaces)


def test_dependent_basis_rejected():
    with pytest.raises(DomainError):
        AffineSubspace(3, (0b011, 0b101, 0b110))


def test_known_maxima_for_k2():
    assert max_affine_intersection(2, 2) == 3
    assert max_affine_intersection(2, 3) == 4
    assert max_affine_intersection(2, 4) == 6


@pytest.mark.parametrize("k", [1, 2, 3])
def test_exhaustive_maxima_respect_bounds(k):
    rows = verify_bounds(k)
    assert [row.d for row in rows] == list(range(2 * k + 1))
    assert all(row.ok for row in rows)
    assert rows[-1].achieved == s_k_size(k)
    bounds = mm_bound_table(k)
    assert [row.bound for row in rows] == bounds


def test_capability_limit():
    with pytest.raises(CapabilityError):
        max_affine_intersection(5, 2)
    with pytest.raises(CapabilityError):
        max_affine_intersection(4, 2, max_dim=6)


def test_identity_overlap_table_matches_closed_form():
    table = overlap_table_bruteforce(TargetSet.identity(2))
    assert np.allclose(table, mm_overlap_table(2))


def test_overlap_table_is_invariant_under_transforms():
    rng = np.random.default_rng(3)
    twisted = TargetSet(2, gl_random(4, rng), offset=5)
    table = overlap_table_bruteforce(twisted)
    assert np.allclose(table, mm_overlap_table(2))
    assert np.all(np.diff(table) >= 0)


def test_singleton_overlap_table():
    mask = np.zeros(16, dtype=bool)
    mask[9] = True
    table = overlap_table_from_mask(mask, 4)
    assert list(table) == [1 / 16, 1 / 8, 1 / 4, 1 / 2, 1.0]


def test_gl_random_rank_and_dim_one():
    rng = np.random.default_rng(0)
    GF2 = galois.GF(2)
    assert gl_random(1, rng).tolist() == [[1]]
    for dim in (2, 4, 6, 8):
        matrix = gl_random(dim, rng)
        assert int(np.linalg.matrix_rank(GF2(matrix))) == dim


def test_gl_random_is_uniform_on_gl2():
    rng = np.random.default_rng(11)
    samples = 60_000
    counts = Counter(tuple(gl_random(2, rng).flatten().tolist()) for _ in range(samples))
    assert len(counts) == 6
    expected = samples / 6
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < 20.5


def test_tbt_generation_is_deterministic():
    first = tbt_opi_generate(2, 15, 2, seed=7)
    second = tbt_opi_generate(2, 15, 2, seed=7)
    assert first.as_dict() == second.as_dict()
    assert first.instance.r == 6
    assert len(first.targets) == 15
    for target in first.targets:
        assert target.invertible
        assert target.size() == 6


def test_tbt_targets_are_affine_images():
    generated = tbt_opi_generate(2, 15, 2, seed=11)
    offsets = [target.offset for target in generated.targets]
    assert any(offsets)
    assert all(0 <= offset < 16 for offset in offsets)
    shifted = next(target for target in generated.targets if target.offset)
    assert shifted.size() == s_k_size(2)
    assert list(overlap_table_bruteforce(shifted)) == pytest.approx(list(mm_overlap_table(2)))
    assert generated.as_dict()["targets"][0]["offset"] == offsets[0]


def test_tbt_parameter_mismatch():
    with pytest.raises(DomainError):
        tbt_opi_generate(2, 16, 2, seed=1)


def test_target_membership_uses_transform():
    target = TargetSet(1, np.array([[0, 1], [1, 0]], dtype=np.uint8), offset=0)
    assert target.contains((1, 1))
    assert not target.contains((1, 0))
    assert TargetSet.identity(2).contains(0b0101)
