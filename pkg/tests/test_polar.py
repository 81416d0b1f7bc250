import numpy as np
import pytest

from fgver import (HERMITIAN, PARABOLIC, SYMPLECTIC, build_embedding,
                   classify_line, make_context, make_polar, make_subspace,
                   perp, ti_lines, ti_planes, theta)
from fgver.polar import (check_commuting, normalize_rows, pairwise_form,
                         polar_space)
from fgver.projective import GeometryError, enumerate_subspaces


@pytest.mark.parametrize("kind,r,q,npts", [
    (SYMPLECTIC, 3, 2, 15), (SYMPLECTIC, 5, 2, 63), (SYMPLECTIC, 5, 3, 364),
    (PARABOLIC, 4, 3, 40), (PARABOLIC, 6, 3, 364),
    (HERMITIAN, 3, 4, 45), (HERMITIAN, 4, 9, 2440)])
def test_point_counts(kind, r, q, npts):
    ps = make_polar(kind, r, q)
    assert ps.num_points == npts


@pytest.mark.parametrize("kind,r,q,nlines", [
    (SYMPLECTIC, 3, 2, 15), (SYMPLECTIC, 5, 2, 315), (SYMPLECTIC, 5, 3, 3640),
    (PARABOLIC, 6, 3, 3640), (HERMITIAN, 3, 4, 27)])
def test_isotropic_line_counts(kind, r, q, nlines):
    ps = make_polar(kind, r, q)
    lset = ti_lines(ps)
    assert len(lset) == nlines
    for pts in lset.per_line_points:
        assert all(ps.point_mask[p] for p in pts)


def test_perp_involution_and_dimension():
    for ps in (make_polar(SYMPLECTIC, 3, 2), make_polar(PARABOLIC, 4, 3),
               make_polar(HERMITIAN, 3, 4)):
        ctx = ps.ctx
        for d in range(ctx.r):
            s = next(iter(enumerate_subspaces(ctx, d)))
            p = perp(ps, s)
            assert p.dim == ctx.r - 1 - d
            assert perp(ps, p) == s


def test_pairwise_form_alternating():
    ps = make_polar(SYMPLECTIC, 3, 2)
    pts = np.asarray(ps.ctx.points, dtype=np.int64)
    Z = pairwise_form(ps, pts, pts)
    assert (np.diag(Z) == 0).all()


def test_classify_line():
    ps = make_polar(PARABOLIC, 4, 3)
    seen = set()
    for line in enumerate_subspaces(ps.ctx, 1):
        seen.add(classify_line(ps, line))
    assert seen == {"contained", "tangent", "secant", "external"}


def test_ti_planes_count():
    # generators of W(5,2): (2^3+1)(2^2+1)(2+1) = 135
    ps = make_polar(SYMPLECTIC, 5, 2)
    assert len(ti_planes(ps)) == 135


def test_embedding_tau_and_lift():
    emb = build_embedding(3, 2)
    assert emb.big.num_points == theta(3, 4)
    fixed = np.flatnonzero(emb.tau == np.arange(emb.big.num_points))
    assert np.array_equal(fixed, np.flatnonzero(emb.lift_mask))
    # tau is an involution
    assert np.array_equal(emb.tau[emb.tau], np.arange(emb.big.num_points))


def test_commuting_companion():
    from fgver import make_bundle
    b = make_bundle(SYMPLECTIC, 3, 2)
    assert check_commuting(b.emb, b.big_bilinear, b.big_hermitian)
    # the Hermitian variety traces the small space exactly
    assert b.big_hermitian.point_mask[b.emb.lift].all()


def test_degenerate_forms_rejected():
    ctx = make_context(3, 2)
    G = np.zeros((4, 4), dtype=np.int16)
    G[0, 1] = G[1, 0] = 1  # rank 2: degenerate
    with pytest.raises(GeometryError):
        polar_space(ctx, SYMPLECTIC, G)
    with pytest.raises(GeometryError):
        make_polar(PARABOLIC, 4, 2)  # canonical parabolic needs odd q


def test_normalize_rows():
    ctx = make_context(2, 3)
    F = ctx.field
    rows = np.array([[2, 1, 0], [0, 2, 2]], dtype=np.int64)
    out = normalize_rows(F, rows)
    assert out[0, 0] == 1 and out[1, 1] == 1
