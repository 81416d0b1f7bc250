"""Concrete line covers and tight sets: Singer cycles and their line orbits,
the split Cayley hexagon on the standard quadric, the field-reduction spread
bundle with its pencil of forms, and the self-polar-simplex point sets.

Every builder runs its structural invariants before returning; a failed
invariant raises instead of producing a silently wrong object.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from . import gfmat
from .analysis import PolarityBundle, _trace_zero_unit, bar_set, tight_check
from .covers import LineSet, cover_profile
from .fields import build_extension
from .polar import (HERMITIAN, PARABOLIC, SYMPLECTIC, build_embedding,
                    check_commuting, make_polar, normalize_rows, pairwise_form,
                    perp_forms, polar_space, ti_lines, ti_planes)
from .projective import (Subspace, make_context, make_subspace,
                         matrix_inverse, meet, nullspace, rref,
                         subspace_points, theta)


class ConstructionError(ValueError):
    pass


# --- Singer cycles -------------------------------------------------------------

# smallest monic primitive polynomial of degree r+1 over GF(q), as coefficient
# tuples (c0, ..., c_r, 1); the search below regenerates any missing entry
SINGER_MODULI = {
    (3, 2): (1, 0, 0, 1, 1),
    (3, 3): (2, 0, 0, 1, 1),
    (4, 2): (1, 0, 0, 1, 0, 1),
}


def _pmulmod(F, a, b, mod):
    """Polynomial product over GF(q) codes, reduced modulo monic mod."""
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = int(F.add[res[i + j], F.mul[ai, bj]])
    d = len(mod) - 1
    for i in range(len(res) - 1, d - 1, -1):
        c = res[i]
        if c:
            for j in range(d + 1):
                res[i - d + j] = int(
                    F.add[res[i - d + j], F.neg[F.mul[c, mod[j]]]])
    res = res[:d]
    return res + [0] * (d - len(res))


def _xpowmod(F, e, mod):
    """x^e reduced modulo the monic polynomial mod, as a coefficient list."""
    result = [1] + [0] * (len(mod) - 2)
    base = ([0, 1] + [0] * (len(mod) - 3))[:len(mod) - 1]
    while e:
        if e & 1:
            result = _pmulmod(F, result, base, mod)
        base = _pmulmod(F, base, base, mod)
        e >>= 1
    return result


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_primitive_poly(F, coeffs):
    """True iff the monic polynomial has x of full order q^deg - 1."""
    deg = len(coeffs) - 1
    if coeffs[0] == 0:
        return False
    N = F.q ** deg - 1
    one = [1] + [0] * (deg - 1)
    if _xpowmod(F, N, coeffs) != one:
        return False
    for p in _prime_factors(N):
        if _xpowmod(F, N // p, coeffs) == one:
            return False
    return True


def primitive_polynomial(F, deg):
    """Lexicographically smallest monic primitive polynomial of the degree."""
    for low in product(range(F.q), repeat=deg):
        coeffs = list(low) + [1]
        if _is_primitive_poly(F, coeffs):
            return tuple(coeffs)
    raise ConstructionError(f"no primitive polynomial of degree {deg} "
                            f"over GF({F.q})")


@dataclass(frozen=True)
class SingerCycle:
    ctx: object
    matrix: np.ndarray = field(repr=False)
    modulus: tuple = ()


def singer_cycle(r, q, modulus=None):
    """Companion-matrix collineation acting regularly on points of PG(r,q);
    raises when the supplied modulus fails the regularity check."""
    ctx = make_context(r, q)
    F = ctx.field
    n = r + 1
    if modulus is None:
        modulus = SINGER_MODULI.get((r, q)) or primitive_polynomial(F, n)
    if len(modulus) != n + 1 or modulus[-1] != 1:
        raise ConstructionError(f"modulus must be monic of degree {n}")
    S = np.zeros((n, n), dtype=np.int16)
    for i in range(n - 1):
        S[i, i + 1] = 1
    for j in range(n):
        S[n - 1, j] = F.neg[modulus[j]]
    # regularity: the orbit of a point must sweep out all of PG(r,q)
    start = (1,) + (0,) * r
    seen = {start}
    cur = start
    for _ in range(ctx.num_points - 1):
        nxt = gfmat.gf_matmul(F, np.array([cur], dtype=np.int64),
                              S.astype(np.int64))[0]
        cur = tuple(int(c) for c in ctx.points[ctx.point_id(nxt)])
        if cur in seen:
            raise ConstructionError("cycle is not regular on points "
                                    "(modulus is not primitive)")
        seen.add(cur)
    return SingerCycle(ctx=ctx, matrix=S, modulus=tuple(modulus))


def _apply_matrix_line(F, line, M):
    rows = gfmat.gf_matmul(F, np.array(line.basis, dtype=np.int64),
                           M.astype(np.int64))
    return make_subspace(F, [tuple(int(c) for c in row) for row in rows])


def singer_line_orbits(cycle):
    """Partition of the lines of PG(r,q) into orbits of the cycle, each as a
    LineSet in deterministic first-seen order."""
    from .projective import enumerate_subspaces
    ctx = cycle.ctx
    F = ctx.field
    orbits = []
    seen = set()
    for line in enumerate_subspaces(ctx, 1):
        if line.basis in seen:
            continue
        orbit = [line]
        seen.add(line.basis)
        cur = line
        while True:
            cur = _apply_matrix_line(F, cur, cycle.matrix)
            if cur.basis == line.basis:
                break
            seen.add(cur.basis)
            orbit.append(cur)
        orbits.append(LineSet(ctx=ctx, lines=orbit))
    return orbits


def singer_partition_check(cycle, emb):
    """Orbit analysis of the cycle on the big space PG(r,q^2): for odd r the
    points split into two (r-1)/2-spaces and (q-1)*theta Baer subgeometries.
    Returns the orbits (as point-id lists) with their classification."""
    big = emb.big
    F = big.field
    q = emb.q
    r = big.r
    if r % 2 == 0:
        raise ConstructionError("partition analysis implemented for odd r")
    Sb = emb.pair.embed[cycle.matrix].astype(np.int64)
    images = gfmat.gf_matmul(F, np.asarray(big.points, dtype=np.int64), Sb)
    images = normalize_rows(F, images)
    perm = np.array([big.point_index[tuple(int(c) for c in row)]
                     for row in images], dtype=np.int64)
    orbits = []
    visited = np.zeros(big.num_points, dtype=bool)
    for start in range(big.num_points):
        if visited[start]:
            continue
        orb = [start]
        visited[start] = True
        cur = int(perm[start])
        while cur != start:
            visited[cur] = True
            orb.append(cur)
            cur = int(perm[cur])
        orbits.append(orb)
    half = theta((r - 1) // 2, q * q)
    subgeo = theta(r, q)
    classified = []
    n_spaces = n_baer = 0
    for orb in orbits:
        if len(orb) == half:
            # must be a projective (r-1)/2-space
            rows = [big.point_coords(p) for p in orb]
            s = make_subspace(F, rows)
            if s.dim != (r - 1) // 2:
                raise ConstructionError("short orbit is not a subspace")
            classified.append((orb, "subspace"))
            n_spaces += 1
        elif len(orb) == subgeo:
            # Baer subgeometry: every joining line meets the orbit in q+1 pts
            pts = set(orb)
            for a, b in combinations(orb, 2):
                line = make_subspace(F, [big.point_coords(a),
                                         big.point_coords(b)])
                hits = sum(p in pts for p in subspace_points(big, line))
                if hits != q + 1:
                    raise ConstructionError("long orbit is not a Baer "
                                            "subgeometry")
            classified.append((orb, "baer"))
            n_baer += 1
        else:
            raise ConstructionError(f"unexpected orbit length {len(orb)}")
    if n_spaces != 2 or n_baer != (q - 1) * half:
        raise ConstructionError("big-space orbit census does not match")
    return classified


# --- form normalization --------------------------------------------------------

def _subspace_vectors(F, s):
    """All nonzero projective representatives (one per point) of a subspace."""
    m = len(s.basis)
    out = []
    for lead in range(m - 1, -1, -1):
        for suffix in product(range(F.q), repeat=m - 1 - lead):
            coeffs = (0,) * lead + (1,) + suffix
            vec = [0] * len(s.basis[0])
            for c, row in zip(coeffs, s.basis):
                if c:
                    for j, x in enumerate(row):
                        vec[j] = int(F.add[vec[j], F.mul[c, x]])
            out.append(tuple(vec))
    return out


def _form_val(F, G, u, v):
    acc = 0
    for i, ui in enumerate(u):
        if ui:
            for j, vj in enumerate(v):
                if vj and G[i, j]:
                    acc = int(F.add[acc, F.mul[F.mul[ui, G[i, j]], vj]])
    return acc


def symplectic_basis(F, G):
    """Rows S with S G S^T equal to the canonical alternating form (pairs
    (0,1), (2,3), ...); coordinates v @ inv(S) re-express the form canonically."""
    n = len(G)
    full = Subspace(basis=tuple(tuple(1 if j == i else 0 for j in range(n))
                                for i in range(n)))
    rows = []
    remaining = full
    while remaining is not None and len(rows) < n:
        vecs = _subspace_vectors(F, remaining)
        u = vecs[0]
        v = next((w for w in vecs if _form_val(F, G, u, w)), None)
        if v is None:
            raise ConstructionError("alternating form is degenerate")
        c = _form_val(F, G, u, v)
        v = tuple(int(F.mul[x, F.inv[c]]) for x in v)
        rows += [u, v]
        forms = gfmat.gf_matmul(F, np.array([u, v], dtype=np.int64),
                                G.astype(np.int64))
        cut = nullspace(F, [[int(x) for x in row] for row in forms])
        remaining = meet(F, remaining, cut) if cut is not None else None
    if len(rows) != n:
        raise ConstructionError("could not complete a symplectic basis")
    return np.array(rows, dtype=np.int16)


def _quad_val(F, U, v):
    acc = 0
    n = len(v)
    for i in range(n):
        if v[i]:
            for j in range(n):
                if v[j] and U[i, j]:
                    acc = int(F.add[acc, F.mul[F.mul[v[i], U[i, j]], v[j]]])
    return acc


def witt_basis(F, U):
    """(d, rows): anisotropic value d on the first row, then hyperbolic pairs
    (p_i, q_i) with Q(p)=Q(q)=0, B(p,q)=1, for a parabolic form (odd q)."""
    n = len(U)
    G = np.zeros((n, n), dtype=np.int16)
    for i in range(n):
        for j in range(n):
            G[i, j] = F.add[U[i, j], U[j, i]]
    full = Subspace(basis=tuple(tuple(1 if j == i else 0 for j in range(n))
                                for i in range(n)))
    pairs = []
    remaining = full
    while len(remaining.basis) > 1:
        vecs = _subspace_vectors(F, remaining)
        p = next((v for v in vecs if _quad_val(F, U, v) == 0), None)
        if p is None:
            raise ConstructionError("no singular vector in a subspace of "
                                    "vector dimension >= 2")
        w = next((v for v in vecs if _form_val(F, G, p, v)), None)
        if w is None:
            raise ConstructionError("polarization degenerate on the subspace")
        c = _form_val(F, G, p, w)
        w = tuple(int(F.mul[x, F.inv[c]]) for x in w)
        # Q(w + t p) = Q(w) + t B(p,w) = Q(w) + t, so t = -Q(w) kills it
        t = int(F.neg[_quad_val(F, U, w)])
        qv = tuple(int(F.add[w[i], F.mul[t, p[i]]]) for i in range(n))
        assert _quad_val(F, U, qv) == 0
        pairs += [p, qv]
        forms = gfmat.gf_matmul(F, np.array([p, qv], dtype=np.int64),
                                G.astype(np.int64))
        cut = nullspace(F, [[int(x) for x in row] for row in forms])
        remaining = meet(F, remaining, cut)
        if remaining is None:
            raise ConstructionError("Witt decomposition collapsed early")
    u0 = remaining.basis[0]
    d = _quad_val(F, U, u0)
    if d == 0:
        raise ConstructionError("radical vector found: form is degenerate")
    return d, np.array([u0] + pairs, dtype=np.int16)


def parabolic_to_canonical(F, U):
    """Coordinate map T (v -> v @ T) carrying the quadric of U onto the
    canonical quadric x0^2 + x1 x2 + x3 x4 + ...; the forms agree up to the
    scalar d = Q(u0), which leaves the zero set and the perp untouched."""
    d, rows = witt_basis(F, U)
    n = len(U)
    D = np.zeros((n, n), dtype=np.int16)
    D[0, 0] = d
    for i in range(1, n, 2):
        D[i, i] = 1
        D[i + 1, i + 1] = d
    Rinv = matrix_inverse(F, rows)
    return gfmat.gf_matmul(F, Rinv.astype(np.int64),
                           D.astype(np.int64)).astype(np.int16)


def transform_lineset(lineset, target_ctx, T):
    """Apply the coordinate map v -> v @ T to every line of the set."""
    F = target_ctx.field
    out = []
    for ln in lineset.lines:
        out.append(_apply_matrix_line(F, ln, np.asarray(T)))
    return LineSet(ctx=target_ctx, lines=out)


# --- split Cayley hexagon -------------------------------------------------------

@dataclass(frozen=True)
class HexagonModel:
    q: int
    quadric: object                 # polar space in the model coordinates
    lines: LineSet = field(repr=False)
    canonical: LineSet | None = field(repr=False, default=None)
    bullets: dict = field(default_factory=dict)


def _hexagon_quadric(q):
    """Q(6,q) with equation X0 X4 + X1 X5 + X2 X6 = X3^2."""
    ctx = make_context(6, q)
    F = ctx.field
    U = np.zeros((7, 7), dtype=np.int16)
    U[0, 4] = U[1, 5] = U[2, 6] = 1
    U[3, 3] = F.neg[1]
    G = np.zeros((7, 7), dtype=np.int16)
    for i in range(7):
        for j in range(7):
            G[i, j] = F.add[U[i, j], U[j, i]]
    return polar_space(ctx, PARABOLIC, G, quad=U)


_HEX_RELATIONS = ((1, 2, 3, 4), (5, 4, 3, 2), (2, 0, 3, 5),
                  (6, 5, 3, 0), (0, 1, 3, 6), (4, 6, 3, 1))


def _hexagon_line_filter(ps):
    """Quadric lines satisfying the six linear Grassmann-coordinate
    relations p_ab = p_cd that cut out the hexagon line set."""
    F = ps.ctx.field
    lset = ti_lines(ps)
    bases = lset.basis_array.reshape(len(lset), 2, 7)
    u, v = bases[:, 0, :], bases[:, 1, :]

    def pl(i, j):
        return F.add[F.mul[u[:, i], v[:, j]], F.neg[F.mul[u[:, j], v[:, i]]]]

    keep = np.ones(len(lset), dtype=bool)
    for a, b, c, d in _HEX_RELATIONS:
        keep &= pl(a, b) == pl(c, d)
    return LineSet(ctx=ps.ctx, lines=[ln for ln, k in zip(lset.lines, keep)
                                      if k])


def _plane_lines(ctx, plane):
    pts = subspace_points(ctx, plane)
    seen = set()
    out = []
    for a, b in combinations(pts, 2):
        ln = make_subspace(ctx.field, [ctx.point_coords(a),
                                       ctx.point_coords(b)])
        if ln.basis not in seen:
            seen.add(ln.basis)
            out.append(ln)
    return out


def _elliptic_hyperplane(ps):
    """First hyperplane meeting the quadric in an elliptic section, found by
    the section-size census (the smaller nondegenerate size)."""
    ctx = ps.ctx
    F = ctx.field
    q = ctx.q
    coeffs = np.asarray(ctx.points, dtype=np.int64)
    qpts = np.asarray(ctx.points, dtype=np.int64)[ps.point_ids]
    z = gfmat.gf_matmul(F, coeffs, qpts.T)
    sizes = (z == 0).sum(axis=1)
    n = ctx.r // 2  # nondegenerate hyperplane sections have rank r/2
    elliptic = (q ** n + 1) * (q ** (n - 1) - 1) // (q - 1)
    hyperbolic = (q ** (n - 1) + 1) * (q ** n - 1) // (q - 1)
    got = sorted(set(sizes.tolist()))
    if elliptic not in got or hyperbolic not in got:
        raise ConstructionError(f"hyperplane section sizes {got} miss the "
                                "nondegenerate values")
    idx = int(np.flatnonzero(sizes == elliptic)[0])
    return np.asarray(ctx.points[idx], dtype=np.int64)


def hexagon_lines(q):
    """The split Cayley hexagon on Q(6,q); all five structural properties
    are verified before the model is returned."""
    ps = _hexagon_quadric(q)
    ctx = ps.ctx
    F = ctx.field
    hex_lines = _hexagon_line_filter(ps)
    bullets = {}
    if len(hex_lines) != theta(5, q):
        raise ConstructionError(f"{len(hex_lines)} hexagon lines, expected "
                                f"{theta(5, q)}")

    # (1) every quadric point on exactly q+1 hexagon lines
    prof = cover_profile(hex_lines, ps=ps)
    bullets["point_cover"] = prof.m == q + 1
    if prof.m != q + 1:
        raise ConstructionError("hexagon lines do not form a (q+1)-cover")

    # (2) the q+1 lines through a point span a single plane
    by_point = {}
    for ln, pts in zip(hex_lines.lines, hex_lines.per_line_points):
        for p in pts:
            by_point.setdefault(p, []).append(ln)
    point_planes = {}
    for p, lns in by_point.items():
        rows = [row for ln in lns for row in ln.basis]
        s = make_subspace(F, rows)
        if s.dim != 2:
            raise ConstructionError("pencil of hexagon lines through a point "
                                    "does not span a plane")
        point_planes[p] = s
    bullets["point_plane"] = True

    # (3) a quadric plane holds q+1 hexagon lines or none
    planes = ti_planes(ps)
    hex_keys = set(hex_lines.keys)
    hexagon_planes = []
    line_plane_tally = {}
    for plane in planes:
        lns = _plane_lines(ctx, plane)
        inside = sum(ln.basis in hex_keys for ln in lns)
        if inside not in (0, q + 1):
            raise ConstructionError(f"plane holds {inside} hexagon lines")
        if inside:
            hexagon_planes.append(plane)
            for ln in lns:
                line_plane_tally[ln.basis] = line_plane_tally.get(ln.basis,
                                                                  0) + 1
    if len(hexagon_planes) != theta(5, q):
        raise ConstructionError("hexagon plane count mismatch")
    if set(point_planes[p].basis for p in point_planes) - \
            set(pl.basis for pl in hexagon_planes):
        raise ConstructionError("a point-pencil plane is not a hexagon plane")
    bullets["plane_dichotomy"] = True

    # (4) q+1 hexagon planes through a hexagon line, exactly one otherwise
    for ln in ti_lines(ps).lines:
        want = q + 1 if ln.basis in hex_keys else 1
        if line_plane_tally.get(ln.basis, 0) != want:
            raise ConstructionError("hexagon-plane pencil count mismatch")
    bullets["plane_pencils"] = True

    # (5) an elliptic hyperplane section carries q^3+1 disjoint hexagon lines
    hcoef = _elliptic_hyperplane(ps)
    inside = []
    for ln in hex_lines.lines:
        vals = gfmat.gf_matmul(F, np.array(ln.basis, dtype=np.int64),
                               hcoef[:, None])
        if not vals.any():
            inside.append(ln)
    if len(inside) != q ** 3 + 1:
        raise ConstructionError(f"elliptic section holds {len(inside)} "
                                f"hexagon lines, expected {q ** 3 + 1}")
    covered = [p for ln in inside for p in subspace_points(ctx, ln)]
    if len(covered) != len(set(covered)):
        raise ConstructionError("elliptic-section hexagon lines overlap")
    bullets["elliptic_spread"] = True

    canonical = None
    if q % 2:
        T = parabolic_to_canonical(F, ps.quad)
        target = make_polar(PARABOLIC, 6, q)
        canonical = transform_lineset(hex_lines, target.ctx, T)
        cover_profile(canonical, ps=target)  # raises if off the quadric
    return HexagonModel(q=q, quadric=ps, lines=hex_lines, canonical=canonical,
                        bullets=bullets)


def hexagon_project_even(model):
    """Project Q(6,q), q even, from its nucleus onto X3 = 0; the hexagon
    line set becomes a (q+1)-cover of a W(5,q), returned in the canonical
    symplectic frame."""
    q = model.q
    if q % 2:
        raise ConstructionError("nucleus projection needs even q")
    ps = model.quadric
    F = ps.ctx.field
    nucleus = nullspace(F, [list(r) for r in ps.gram])
    if nucleus is None or nucleus.basis != ((0, 0, 0, 1, 0, 0, 0),):
        raise ConstructionError("nucleus is not the expected coordinate point")
    keep = [0, 1, 2, 4, 5, 6]
    Gw = ps.gram[np.ix_(keep, keep)]
    ctx5 = make_context(5, q)
    w = polar_space(ctx5, SYMPLECTIC, Gw)
    # central projection is bijective on quadric points
    proj_pts = set()
    for pid in ps.point_ids:
        vec = [int(ps.ctx.points[pid][i]) for i in keep]
        proj_pts.add(ctx5.point_id(vec))
    if len(proj_pts) != ps.num_points or len(proj_pts) != ctx5.num_points:
        raise ConstructionError("nucleus projection is not bijective")
    lines = []
    for ln in model.lines.lines:
        rows = [tuple(row[i] for i in keep) for row in ln.basis]
        lines.append(make_subspace(F, rows))
    lset = LineSet(ctx=ctx5, lines=lines)  # raises on a collision
    prof = cover_profile(lset, ps=w)
    if prof.m != q + 1:
        raise ConstructionError("projected hexagon is not a (q+1)-cover")
    S = symplectic_basis(F, Gw)
    T = matrix_inverse(F, S)
    target = make_polar(SYMPLECTIC, 5, q)
    canonical = transform_lineset(lset, target.ctx, T)
    cover_profile(canonical, ps=target)
    return canonical


# --- spreads --------------------------------------------------------------------

def line_spread(ps):
    """Deterministic exact-cover search for a spread of totally isotropic
    lines (first-point-first backtracking)."""
    lset = ti_lines(ps)
    ids = [int(x) for x in ps.point_ids]
    by_first = {}
    for k, pts in enumerate(lset.per_line_points):
        by_first.setdefault(min(pts), []).append(k)
    chosen = []
    covered = set()

    def rec():
        free = [p for p in ids if p not in covered]
        if not free:
            return True
        first = free[0]
        for k in by_first.get(first, []):
            pts = lset.per_line_points[k]
            if any(p in covered for p in pts):
                continue
            covered.update(pts)
            chosen.append(lset.lines[k])
            if rec():
                return True
            chosen.pop()
            covered.difference_update(pts)
        return False

    if not rec():
        raise ConstructionError("no line spread found")
    return LineSet(ctx=ps.ctx, lines=chosen)


# --- field-reduction spread bundle ---------------------------------------------

@dataclass(frozen=True)
class DyeBundle:
    n: int
    q: int
    emb: object
    pencil: list                     # q+1 small symplectic spaces W_i
    pencil_big: list                 # their lifts over GF(q^2)
    hermitian: list                  # q+1 Hermitian companions H_i
    spread: LineSet = field(repr=False)
    sigma1: Subspace = None
    sigma2: Subspace = None
    eps: int = 0
    decomp: dict = field(repr=False, default=None)

    @property
    def small(self):
        return self.pencil[0]

    @property
    def bundle(self):
        """PolarityBundle view on the distinguished pair (W_1, H_1)."""
        return PolarityBundle(emb=self.emb, small=self.pencil[0],
                              big_bilinear=self.pencil_big[0],
                              big_hermitian=self.hermitian[0])


def _reduce_vec(decomp, u):
    out = []
    for z in u:
        a, b = decomp[int(z)]
        out += [a, b]
    return tuple(out)


def dye_build(n, q):
    """Field-reduction bundle: spread, pencil of q+1 symplectic forms with
    Hermitian companions, and the subspaces Sigma_1, Sigma_2."""
    if n < 2:
        raise ConstructionError("the bundle needs n >= 2")
    pair = build_extension(q)
    ext = pair.ext
    eps = ext.primitive
    embedded = set(int(x) for x in pair.embed)
    if eps in embedded:
        raise ConstructionError("primitive element lies in the subfield")
    decomp = {}
    for a in range(q):
        for b in range(q):
            z = int(ext.add[pair.embed[a], ext.mul[pair.embed[b], eps]])
            decomp[z] = (a, b)
    if len(decomp) != q * q:
        raise ConstructionError("basis (1, eps) does not split the extension")

    m2 = 2 * n
    Bp = np.zeros((m2, m2), dtype=np.int16)
    for i in range(0, m2, 2):
        Bp[i, i + 1] = 1
        Bp[i + 1, i] = ext.neg[1]

    # pencil of trace forms over the transversal 1, eps, ..., eps^q
    r = 4 * n - 1
    emb = build_embedding(r, q, pair=pair)
    small_ctx, big_ctx = emb.small, emb.big
    lam_h = _trace_zero_unit(pair)
    pencil, pencil_big, hermitian = [], [], []
    for j in range(q + 1):
        lam = ext.element_pow(eps, j)
        G = np.zeros((4 * n, 4 * n), dtype=np.int16)
        for i in range(m2):
            for k in range(m2):
                if Bp[i, k]:
                    for c in (0, 1):
                        for d in (0, 1):
                            val = ext.mul[ext.mul[lam,
                                                  ext.element_pow(eps, c + d)],
                                          Bp[i, k]]
                            G[2 * i + c, 2 * k + d] = pair.trace_base(int(val))
        w = polar_space(small_ctx, SYMPLECTIC, G)
        wb = polar_space(big_ctx, SYMPLECTIC, pair.embed[G])
        h = polar_space(big_ctx, HERMITIAN,
                        ext.mul[pair.embed[G], lam_h], pair=pair)
        if not check_commuting(emb, wb, h):
            raise ConstructionError("companion polarities fail to commute "
                                    f"for pencil member {j}")
        pencil.append(w)
        pencil_big.append(wb)
        hermitian.append(h)
    for a in range(q + 1):
        for b in range(a + 1, q + 1):
            ga, gb = pencil[a].gram, pencil[b].gram
            F = small_ctx.field
            if any(np.array_equal(F.mul[ga, s], gb) for s in range(1, q)):
                raise ConstructionError("pencil members are proportional")

    # the spread: reductions of the points of PG(2n-1, q^2)
    ctx_up = make_context(m2 - 1, ext)
    lines = []
    for u in np.asarray(ctx_up.points):
        ue = [int(ext.mul[int(z), eps]) for z in u]
        lines.append(make_subspace(small_ctx.field,
                                   [_reduce_vec(decomp, u),
                                    _reduce_vec(decomp, ue)]))
    spread = LineSet(ctx=small_ctx, lines=lines)
    prof = cover_profile(spread, ps=pencil[0])
    if prof.m != 1:
        raise ConstructionError("reduced point set is not a line spread")
    for w in pencil:
        for ln in spread.lines:
            if pairwise_form(w, np.array(ln.basis, dtype=np.int64),
                             np.array(ln.basis, dtype=np.int64)).any():
                raise ConstructionError("spread line is not isotropic for "
                                        "every pencil member")

    # Sigma_1 / Sigma_2: eigenspaces of the multiplication-by-eps map
    s_, t_ = decomp[int(ext.mul[eps, eps])]
    J = np.zeros((4 * n, 4 * n), dtype=np.int16)
    for i in range(m2):
        J[2 * i, 2 * i + 1] = 1
        J[2 * i + 1, 2 * i] = s_
        J[2 * i + 1, 2 * i + 1] = t_
    K = pair.embed[J]
    Fb = big_ctx.field
    sig = []
    for mu in (eps, int(pair.frob[eps])):
        A = K.T.astype(np.int16).copy()
        for i in range(4 * n):
            A[i, i] = Fb.add[A[i, i], Fb.neg[mu]]
        s = nullspace(Fb, [list(row) for row in A])
        if s is None or s.dim != m2 - 1:
            raise ConstructionError("eigenspace has the wrong dimension")
        sig.append(s)
    sigma1, sigma2 = sig
    tau_rows = rref(Fb, [tuple(int(x) for x in pair.frob[np.array(row)])
                         for row in sigma1.basis])
    if tau_rows != sigma2.basis:
        raise ConstructionError("the involution does not swap the eigenspaces")
    for s in (sigma1, sigma2):
        if any(emb.lift_mask[p] for p in subspace_points(big_ctx, s)):
            raise ConstructionError("eigenspace meets the subgeometry")
        for h in hermitian:
            if pairwise_form(h, np.array(s.basis, dtype=np.int64),
                             np.array(s.basis, dtype=np.int64)).any():
                raise ConstructionError("eigenspace is not a generator of a "
                                        "Hermitian companion")
    for ln in spread.lines:
        ext_line = emb.lift_subspace(ln)
        if meet(Fb, ext_line, sigma1) is None or \
                meet(Fb, ext_line, sigma2) is None:
            raise ConstructionError("an extended spread line misses an "
                                    "eigenspace")
    return DyeBundle(n=n, q=q, emb=emb, pencil=pencil, pencil_big=pencil_big,
                     hermitian=hermitian, spread=spread, sigma1=sigma1,
                     sigma2=sigma2, eps=eps, decomp=decomp)


def dye_classify_lines(bundle):
    """(F, O1, O2): the spread and the two remaining orbits of totally
    isotropic lines, separated by whether the solid spanned by the q+1
    spread lines met is totally isotropic."""
    w1 = bundle.pencil[0]
    ctx = w1.ctx
    q = bundle.q
    spread = bundle.spread
    spread_of = np.full(ctx.num_points, -1, dtype=np.int64)
    for k, pts in enumerate(spread.per_line_points):
        for p in pts:
            if spread_of[p] != -1:
                raise ConstructionError("spread lines overlap")
            spread_of[p] = k
    if (spread_of < 0).any():
        raise ConstructionError("spread misses a point")
    all_ti = ti_lines(w1)
    fkeys = set(spread.keys)
    o1, o2 = [], []
    for ln, pts in zip(all_ti.lines, all_ti.per_line_points):
        if ln.basis in fkeys:
            continue
        partners = {int(spread_of[p]) for p in pts}
        if len(partners) != q + 1:
            raise ConstructionError("probe line meets the wrong number of "
                                    "spread lines")
        rows = [row for k in sorted(partners) for row in spread.lines[k].basis]
        solid = make_subspace(ctx.field, rows)
        if solid.dim != 3:
            raise ConstructionError("met spread lines do not span a solid")
        B = np.array(solid.basis, dtype=np.int64)
        if pairwise_form(w1, B, B).any():
            o1.append(ln)
        else:
            o2.append(ln)
    O1 = LineSet(ctx=ctx, lines=o1)
    O2 = LineSet(ctx=ctx, lines=o2)
    if len(spread) + len(O1) + len(O2) != len(all_ti):
        raise ConstructionError("orbit sizes do not add up")
    m1 = cover_profile(O1, ps=w1).m
    m2_ = cover_profile(O2, ps=w1).m
    if m1 is None or m2_ is None:
        raise ConstructionError("an orbit is not an m-cover")
    return spread, O1, O2


def dye_M(bundle):
    """The family of (2n-1)-spaces that are totally isotropic for every
    pencil member: reductions of the isotropic lines of W(2n-1,q^2)."""
    pair = bundle.emb.pair
    ext = pair.ext
    n, q = bundle.n, bundle.q
    m2 = 2 * n
    Bp = np.zeros((m2, m2), dtype=np.int16)
    for i in range(0, m2, 2):
        Bp[i, i + 1] = 1
        Bp[i + 1, i] = ext.neg[1]
    ctx_up = make_context(m2 - 1, ext)
    w_up = polar_space(ctx_up, SYMPLECTIC, Bp)
    eps, decomp = bundle.eps, bundle.decomp
    F = bundle.small.ctx.field
    members = []
    seen = set()
    for ln in ti_lines(w_up).lines:
        rows = []
        for vec in ln.basis:
            rows.append(_reduce_vec(decomp, vec))
            rows.append(_reduce_vec(decomp,
                                    [int(ext.mul[z, eps]) for z in vec]))
        s = make_subspace(F, rows)
        if s.dim != 2 * n - 1:
            raise ConstructionError("reduced member has the wrong dimension")
        if s.basis in seen:
            raise ConstructionError("duplicate member in the family")
        seen.add(s.basis)
        members.append(s)
    expected = 1
    for i in range(1, n + 1):
        expected *= q ** (2 * i) + 1
    if len(members) != expected:
        raise ConstructionError(f"family has {len(members)} members, "
                                f"expected {expected}")
    for s in members:
        B = np.array(s.basis, dtype=np.int64)
        for w in bundle.pencil:
            if pairwise_form(w, B, B).any():
                raise ConstructionError("family member is not isotropic for "
                                        "every pencil member")
    return members


def dye_M_line_check(bundle, members, spread, O2):
    """Lines inside family members are exactly the spread plus O2, and each
    member carries q^2+1 spread lines."""
    ctx = bundle.small.ctx
    fkeys = set(spread.keys)
    okeys = set(O2.keys)
    inside = set()
    for s in members:
        lns = _solid_lines(ctx, s)
        fcount = sum(b in fkeys for b in lns)
        if fcount != bundle.q ** 2 + 1:
            raise ConstructionError("member does not carry a full spread of "
                                    "spread lines")
        inside.update(lns)
    if inside != fkeys | okeys:
        raise ConstructionError("lines inside the family differ from "
                                "spread ∪ O2")
    return True


def _solid_lines(ctx, s):
    pts = subspace_points(ctx, s)
    seen = set()
    for a, b in combinations(pts, 2):
        ln = make_subspace(ctx.field, [ctx.point_coords(a),
                                       ctx.point_coords(b)])
        seen.add(ln.basis)
    return seen


def dye_R(bundle):
    """The union R of the generators spanned by each point of Sigma_1 with
    its corresponding subspace of Sigma_2; returns (mask, generators P1, P2,
    tight reports against every Hermitian companion)."""
    emb = bundle.emb
    big = emb.big
    Fb = big.field
    n, q = bundle.n, bundle.q
    h_list = bundle.hermitian
    # the polar hyperplane of a point of Sigma_1 ∪ Sigma_2 is the same for
    # every Hermitian companion
    for s in (bundle.sigma1, bundle.sigma2):
        for pid in subspace_points(big, s):
            rows = [perp_forms(h, np.array([big.point_coords(pid)],
                                           dtype=np.int64))
                    for h in h_list]
            norm = {tuple(int(x) for x in normalize_rows(Fb, r)[0])
                    for r in rows}
            if len(norm) != 1:
                raise ConstructionError("polar hyperplanes differ across the "
                                        "pencil")

    def generators(src, dst):
        gens = []
        used = set()
        for pid in subspace_points(big, src):
            coords = big.point_coords(pid)
            forms = perp_forms(h_list[0], np.array([coords], dtype=np.int64))
            hyp = nullspace(Fb, [[int(x) for x in forms[0]]])
            s_p = meet(Fb, hyp, dst)
            if s_p is None or s_p.dim != 2 * n - 2:
                raise ConstructionError("corresponding subspace has the "
                                        "wrong dimension")
            if s_p.basis in used:
                raise ConstructionError("two points share a corresponding "
                                        "subspace")
            used.add(s_p.basis)
            g = make_subspace(Fb, (coords,) + s_p.basis)
            if g.dim != 2 * n - 1:
                raise ConstructionError("generator has the wrong dimension")
            B = np.array(g.basis, dtype=np.int64)
            for h in h_list:
                if pairwise_form(h, B, B).any():
                    raise ConstructionError("constructed subspace is not a "
                                            "generator of the pencil")
            gens.append(g)
        return gens

    p1 = generators(bundle.sigma1, bundle.sigma2)
    p2 = generators(bundle.sigma2, bundle.sigma1)
    mask = np.zeros(big.num_points, dtype=bool)
    for g in p1:
        for p in subspace_points(big, g):
            mask[p] = True
    for g in p2:
        if not all(mask[p] for p in subspace_points(big, g)):
            raise ConstructionError("second family leaves the point union "
                                    "of the first")
    size = int(mask.sum())
    expected = (q ** (4 * n - 2) + 1) * theta(2 * n - 1, q * q)
    if size != expected:
        raise ConstructionError(f"|R| = {size}, expected {expected}")
    for s in (bundle.sigma1, bundle.sigma2):
        if not all(mask[p] for p in subspace_points(big, s)):
            raise ConstructionError("R misses an eigenspace")
    distinct = {g.basis for g in p1} | {g.basis for g in p2} | \
               {bundle.sigma1.basis, bundle.sigma2.basis}
    if len(distinct) < 2 * theta(2 * n - 1, q * q) + 2:
        raise ConstructionError("too few generators inside R")
    reports = [tight_check(h, mask, i=q ** (4 * n - 2) + 1) for h in h_list]
    return mask, p1, p2, reports


def dye_orbit_tightness(bundle, spread, O1, O2, r_mask=None):
    """Tight reports of the extended orbits against every Hermitian
    companion, plus the decomposition arithmetic with R."""
    emb = bundle.emb
    n, q = bundle.n, bundle.q
    params = {"F": q * q + 1,
              "O1": q ** (4 * n - 1) - q ** (4 * n - 2) + q + 1,
              "O2": q ** (4 * n - 2) - q * q + q + 1}
    bars = {"F": bar_set(emb, spread), "O1": bar_set(emb, O1),
            "O2": bar_set(emb, O2)}
    # extended spread lines are isotropic for the whole pencil, so the set
    # lies on every Hermitian companion; the other two orbits only land on
    # the companion of the distinguished form
    ambients = {"F": bundle.hermitian, "O1": bundle.hermitian[:1],
                "O2": bundle.hermitian[:1]}
    reports = {name: [tight_check(h, bars[name], i=params[name])
                      for h in ambients[name]]
               for name in params}
    if r_mask is not None:
        if not np.array_equal(bars["F"] | bars["O2"], r_mask):
            raise ConstructionError("R is not the union of the extended "
                                    "spread and O2")
        if not np.array_equal(bars["F"] & bars["O2"], emb.lift_mask):
            raise ConstructionError("extended spread and O2 overlap beyond "
                                    "the subgeometry")
    return bars, reports


# --- self-polar simplex tight sets ----------------------------------------------

SIMPLEX_CONFIGS = ("H44-L1", "H44-L2", "H49-all10", "H64-all21")

_H44_L1 = ((0, 3), (0, 4), (2, 4), (1, 3), (1, 2))
_H44_L2 = ((3, 4), (2, 3), (0, 2), (1, 4), (0, 1))


@dataclass(frozen=True)
class SimplexModel:
    config: str
    hermitian: object
    secants: tuple
    mask: np.ndarray = field(repr=False)
    report: object = None


def simplex_tight(config):
    """Point set cut out on the Hermitian variety by secants of the
    self-polar coordinate simplex, with its tight verdict."""
    if config not in SIMPLEX_CONFIGS:
        raise ConstructionError(f"unknown config {config!r}")
    if config == "H44-L1":
        h, pairs, i = make_polar(HERMITIAN, 4, 4), _H44_L1, 3
    elif config == "H44-L2":
        h, pairs, i = make_polar(HERMITIAN, 4, 4), _H44_L2, 3
    elif config == "H49-all10":
        h = make_polar(HERMITIAN, 4, 9)
        pairs, i = tuple(combinations(range(5), 2)), 4
    else:
        h = make_polar(HERMITIAN, 6, 4)
        pairs, i = tuple(combinations(range(7), 2)), 3
    ctx = h.ctx
    F = ctx.field
    n = ctx.r + 1
    # self-polar: the polar hyperplane of a vertex is the coordinate
    # hyperplane omitting it
    for k in range(n):
        e = [0] * n
        e[k] = 1
        forms = perp_forms(h, np.array([e], dtype=np.int64))
        want = np.zeros(n, dtype=np.int64)
        want[k] = 1
        if not np.array_equal(normalize_rows(F, forms)[0], want):
            raise ConstructionError("simplex is not self-polar")
    q = h.sub_q
    mask = np.zeros(ctx.num_points, dtype=bool)
    for a, b in pairs:
        ea, eb = [0] * n, [0] * n
        ea[a] = eb[b] = 1
        line = make_subspace(F, [ea, eb])
        on_h = [p for p in subspace_points(ctx, line) if h.point_mask[p]]
        if len(on_h) != q + 1:
            raise ConstructionError("joining line is not a secant with "
                                    f"{q + 1} points: got {len(on_h)}")
        for p in on_h:
            mask[p] = True
    report = tight_check(h, mask, i=i)
    return SimplexModel(config=config, hermitian=h, secants=tuple(pairs),
                        mask=mask, report=report)
