import numpy as np
import pytest

from fgver import (AnalysisError, SYMPLECTIC, bar_set, bar_two_char_params,
                   build_embedding, char_residual, make_bundle, make_context,
                   make_polar, make_subspace, subspace_points, theta,
                   tight_check, tight_values, two_char_check)


def test_two_char_of_a_line():
    # a line of PG(3,4) meets every plane in 1 or 5 points
    ctx = make_context(3, 4)
    line = make_subspace(ctx.field, [(1, 0, 0, 0), (0, 1, 0, 0)])
    mask = np.zeros(ctx.num_points, dtype=bool)
    for p in subspace_points(ctx, line):
        mask[p] = True
    rep = two_char_check(ctx, mask, alpha=5, beta=1)
    assert rep.passed and rep.size == 5


def test_two_char_rejects_wrong_values():
    ctx = make_context(3, 4)
    line = make_subspace(ctx.field, [(1, 0, 0, 0), (0, 1, 0, 0)])
    mask = np.zeros(ctx.num_points, dtype=bool)
    for p in subspace_points(ctx, line):
        mask[p] = True
    assert not two_char_check(ctx, mask, alpha=5, beta=2).passed


def test_char_residual_vanishes_for_bar_params():
    for (m, r, q) in [(1, 3, 2), (3, 3, 2), (7, 3, 2), (4, 3, 3)]:
        k, a, b = bar_two_char_params(m, r, q)
        assert char_residual(k, a, b, r, q * q) == 0


def test_tight_values_parity():
    assert tight_values(3, 2, 5) == (5 * theta(0, 4) + 4, 5)
    assert tight_values(4, 3, 4) == (4 * theta(0, 9) + 9, 4)
    assert tight_values(5, 2, 9) == (9 * theta(1, 4) + 16, 45)


def test_lifted_subgeometry_is_tight():
    b = make_bundle(SYMPLECTIC, 3, 2)
    rep = tight_check(b.big_hermitian, b.emb.lift_mask, i=3)
    assert rep.passed and rep.i == 3


def test_tight_check_requires_subset():
    b = make_bundle(SYMPLECTIC, 3, 2)
    mask = np.ones(b.emb.big.num_points, dtype=bool)
    with pytest.raises(AnalysisError):
        tight_check(b.big_hermitian, mask, i=1)


def test_tight_inference():
    b = make_bundle(SYMPLECTIC, 3, 2)
    rep = tight_check(b.big_hermitian, b.emb.lift_mask)
    assert rep.i == 3 and rep.passed


def test_bar_set_size():
    emb = build_embedding(3, 2)
    w = make_polar(SYMPLECTIC, 3, 2)
    from fgver import line_spread
    spread = line_spread(w)
    mask = bar_set(emb, spread)
    # five extended lines, pairwise disjoint: 5 * (4+1) = 25 points
    assert int(mask.sum()) == 25


def test_bundle_invariants_parabolic():
    b = make_bundle("parabolic", 4, 3)
    assert b.small.num_points == 40
    lifted = b.big_hermitian.point_mask[b.emb.lift]
    assert np.array_equal(lifted, b.small.point_mask)
