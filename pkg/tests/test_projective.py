import pytest

from fgver import (GeometryError, enumerate_subspaces, gaussian, make_context,
                   make_subspace, meet, span, subspace_points, theta)
from fgver.projective import contains, nullspace, rref


def test_theta_and_gaussian():
    assert theta(-1, 2) == 0
    assert theta(3, 2) == 15
    assert theta(3, 3) == 40
    assert gaussian(4, 2, 2) == 35
    assert gaussian(4, 2, 3) == 130
    assert gaussian(5, 2, 2) == 155


def test_point_count_and_ids():
    ctx = make_context(3, 2)
    assert ctx.num_points == 15
    for pid in range(ctx.num_points):
        assert ctx.point_id(ctx.point_coords(pid)) == pid
    # scaling does not change the point over GF(3)
    ctx3 = make_context(2, 3)
    assert ctx3.point_id((1, 2, 1)) == ctx3.point_id((2, 1, 2))


@pytest.mark.parametrize("r,q,d,count", [
    (3, 2, 1, 35), (3, 3, 1, 130), (3, 2, 2, 15), (4, 2, 1, 155)])
def test_subspace_enumeration(r, q, d, count):
    ctx = make_context(r, q)
    subs = list(enumerate_subspaces(ctx, d))
    assert len(subs) == count
    assert len({s.basis for s in subs}) == count
    assert len(subspace_points(ctx, subs[0])) == theta(d, q)


def test_rref_canonical():
    ctx = make_context(3, 3)
    F = ctx.field
    s1 = make_subspace(F, [(1, 2, 0, 1), (0, 1, 1, 1)])
    s2 = make_subspace(F, [(2, 1, 0, 2), (1, 0, 1, 2)])  # same row space
    assert s1 == s2
    assert rref(F, s1.basis) == s1.basis


def test_span_meet():
    ctx = make_context(3, 2)
    F = ctx.field
    a = make_subspace(F, [(1, 0, 0, 0), (0, 1, 0, 0)])
    b = make_subspace(F, [(0, 1, 0, 0), (0, 0, 1, 0)])
    assert span(F, a, b).dim == 2
    m = meet(F, a, b)
    assert m.dim == 0 and m.basis == ((0, 1, 0, 0),)
    c = make_subspace(F, [(0, 0, 1, 0), (0, 0, 0, 1)])
    assert meet(F, a, c) is None


def test_contains_and_nullspace():
    ctx = make_context(3, 2)
    F = ctx.field
    s = make_subspace(F, [(1, 0, 1, 0), (0, 1, 0, 1)])
    assert contains(F, s, (1, 1, 1, 1))
    assert not contains(F, s, (1, 1, 1, 0))
    ns = nullspace(F, [list(r) for r in s.basis])
    assert ns.dim == 1
    for row in ns.basis:
        assert all(
            sum(int(a) * int(b) for a, b in zip(row, brow)) % 2 == 0
            for brow in s.basis)


def test_zero_subspace_rejected():
    ctx = make_context(3, 2)
    with pytest.raises(GeometryError):
        make_subspace(ctx.field, [(0, 0, 0, 0)])
