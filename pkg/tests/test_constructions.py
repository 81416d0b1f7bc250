import pytest

from fgver import (ConstructionError, SYMPLECTIC, build_embedding,
                   build_field, cover_profile, hexagon_lines,
                   hexagon_project_even, line_spread, make_polar,
                   primitive_polynomial, simplex_tight, singer_cycle,
                   singer_line_orbits, singer_partition_check, theta)
from fgver.constructions import (SINGER_MODULI, parabolic_to_canonical,
                                 symplectic_basis, witt_basis)


def test_primitive_polynomial_search():
    F2 = build_field(2)
    assert primitive_polynomial(F2, 4) == (1, 0, 0, 1, 1)
    assert primitive_polynomial(F2, 5) == (1, 0, 0, 1, 0, 1)
    F3 = build_field(3)
    assert primitive_polynomial(F3, 4) == (2, 0, 0, 1, 1)


def test_shipped_moduli_match_search():
    for (r, q), mod in SINGER_MODULI.items():
        F = build_field(q)
        assert primitive_polynomial(F, r + 1) == mod


def test_nonprimitive_modulus_rejected():
    # x^4 + x^3 + x^2 + x + 1 has root order 5, not 15
    with pytest.raises(ConstructionError):
        singer_cycle(3, 2, modulus=(1, 1, 1, 1, 1))


@pytest.mark.parametrize("r,q,sizes", [
    (3, 2, [5, 15, 15]), (3, 3, [10, 40, 40, 40]), (4, 2, [31] * 5)])
def test_singer_orbit_sizes(r, q, sizes):
    orbits = singer_line_orbits(singer_cycle(r, q))
    assert sorted(len(o) for o in orbits) == sizes


def test_singer_big_space_partition():
    cyc = singer_cycle(3, 2)
    emb = build_embedding(3, 2)
    classified = singer_partition_check(cyc, emb)
    kinds = sorted((len(o), k) for o, k in classified)
    assert kinds == [(5, "subspace"), (5, "subspace")] + [(15, "baer")] * 5


def test_line_spread():
    w = make_polar(SYMPLECTIC, 3, 2)
    spread = line_spread(w)
    assert len(spread) == 5
    assert cover_profile(spread, ps=w).m == 1


def test_hexagon_q2():
    model = hexagon_lines(2)
    assert len(model.lines) == theta(5, 2) == 63
    assert all(model.bullets.values())
    proj = hexagon_project_even(model)
    assert len(proj) == 63
    w = make_polar(SYMPLECTIC, 5, 2)
    assert cover_profile(proj, ps=w).m == 3


def test_hexagon_projection_needs_even_q():
    class Stub:
        q = 3
    with pytest.raises(ConstructionError):
        hexagon_project_even(Stub())


def test_symplectic_basis_normalizes_form():
    import numpy as np
    from fgver import gfmat
    F = build_field(2)
    G = np.zeros((6, 6), dtype=np.int16)
    for i, j in ((0, 3), (1, 4), (2, 5)):
        G[i, j] = G[j, i] = 1
    S = symplectic_basis(F, G)
    Z = gfmat.gf_matmul(F, gfmat.gf_matmul(
        F, S.astype(np.int64), G.astype(np.int64)), S.T.astype(np.int64))
    for i in range(0, 6, 2):
        assert Z[i, i + 1] == 1 and Z[i + 1, i] == F.neg[1]
    assert (Z[np.abs(np.subtract.outer(range(6), range(6))) != 1] == 0).all()


def test_witt_basis_q3():
    import numpy as np
    F = build_field(3)
    U = np.zeros((5, 5), dtype=np.int16)
    U[0, 0] = 2
    U[1, 2] = U[3, 4] = 1
    d, rows = witt_basis(F, U)
    assert d == 2 and len(rows) == 5
    T = parabolic_to_canonical(F, U)
    assert T.shape == (5, 5)


@pytest.mark.parametrize("config,npts,i", [
    ("H44-L1", 15, 3), ("H44-L2", 15, 3), ("H49-all10", 40, 4)])
def test_simplex_small(config, npts, i):
    m = simplex_tight(config)
    assert int(m.mask.sum()) == npts
    assert m.report.passed and m.report.i == i


def test_simplex_unknown_config():
    with pytest.raises(ConstructionError):
        simplex_tight("H44-both")
