import numpy as np
import pytest

from fgver import (FieldError, MODULI, build_extension, build_field,
                   frob_trace_norm)


def test_gf4_tables():
    F = build_field(4)
    # elements coded 0,1,x,x+1 with x^2 = x+1
    assert F.add[2, 3] == 1
    assert F.mul[2, 2] == 3
    assert F.mul[2, 3] == 1
    assert F.inv[2] == 3
    assert F.neg[2] == 2  # characteristic 2


def test_gf9_tables():
    F = build_field(9)
    assert F.p == 3 and F.k == 2
    # additive structure is coordinatewise mod 3
    assert F.add[1, 2] == 0
    assert F.neg[1] == 2
    # multiplicative group has order 8
    x = F.primitive
    seen = {1}
    y = x
    for _ in range(7):
        seen.add(int(y))
        y = F.mul[y, x]
    assert int(y) == 1 and len(seen) == 8


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16])
def test_axioms_sampled(q):
    F = build_field(q)
    a = np.arange(q, dtype=np.int64)
    A, B, C = a[:, None, None], a[None, :, None], a[None, None, :]
    assert np.array_equal(F.add[F.add[A, B], C], F.add[A, F.add[B, C]])
    assert np.array_equal(F.mul[F.mul[A, B], C], F.mul[A, F.mul[B, C]])
    assert np.array_equal(F.mul[A, F.add[B, C]],
                          F.add[F.mul[A, B], F.mul[A, C]])
    nz = a[1:]
    assert (F.mul[nz, F.inv[nz]] == 1).all()


def test_extension_trace_norm():
    pair = build_extension(4)
    ext = pair.ext
    a = np.arange(ext.q)
    # frobenius is an involution fixing exactly the embedded subfield
    assert np.array_equal(pair.frob[pair.frob[a]], a)
    fixed = {int(x) for x in a if pair.frob[x] == x}
    assert fixed == {int(x) for x in pair.embed}
    # norm maps onto the subfield with fibers of size q+1 off zero
    from collections import Counter
    fibers = Counter(int(pair.norm[x]) for x in a[1:])
    assert set(fibers) == {int(x) for x in pair.embed[1:]}
    assert set(fibers.values()) == {ext.q // 4 + 1}  # q+1 = 5


def test_frob_trace_norm_scalar():
    pair = build_extension(2)
    f, t, n = frob_trace_norm(pair, 2)
    assert f == int(pair.frob[2])
    assert t == int(pair.trace[2])
    assert n == int(pair.norm[2])


def test_bad_order_rejected():
    with pytest.raises(FieldError):
        build_field(6)
    with pytest.raises(FieldError):
        build_field(512)


def test_moduli_cover_supported_orders():
    for q in MODULI:
        F = build_field(q)
        assert F.q == q
