"""Symplectic, parabolic and Hermitian polar spaces, polarities and the
Baer embedding PG(r,q) < PG(r,q^2).

Conventions fixed here (and echoed in every report):
  - bilinear form B(x,y) = x^T G y with G the Gram matrix;
  - Hermitian form h(x,y) = x^T M frob(y), so M^T = frob(M);
  - parabolic spaces carry the quadratic form as an upper-triangular matrix U
    with Q(x) = x U x^T and polarization G = U + U^T (radical = nucleus when
    q is even).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gfmat
from .fields import ExtensionPair, build_extension
from .projective import (GeometryContext, GeometryError, Subspace,
                         line_points, make_context, make_subspace,
                         matrix_inverse, normalize, nullspace, rref,
                         subspace_points, theta)

SYMPLECTIC = "symplectic"
PARABOLIC = "parabolic"
HERMITIAN = "hermitian"

CONTAINED = "contained"
TANGENT = "tangent"
SECANT = "secant"
EXTERNAL = "external"


@dataclass(frozen=True)
class PolarSpace:
    ctx: GeometryContext
    kind: str
    gram: np.ndarray = field(repr=False)
    quad: np.ndarray | None = field(repr=False, default=None)
    pair: ExtensionPair | None = field(repr=False, default=None)
    point_mask: np.ndarray = field(repr=False, default=None)
    point_ids: np.ndarray = field(repr=False, default=None)
    generator_dim: int = 0

    @property
    def r(self):
        return self.ctx.r

    @property
    def q(self):
        return self.ctx.q

    @property
    def sub_q(self):
        """For hermitian kind: the q with ambient field GF(q^2)."""
        if self.kind != HERMITIAN:
            return self.ctx.q
        return self.pair.base.q

    @property
    def num_points(self):
        return int(self.point_mask.sum())

    def describe(self):
        d = {"kind": self.kind, "r": self.r, "q": self.q,
             "modulus": list(self.ctx.field.modulus),
             "gram": [[int(x) for x in row] for row in self.gram]}
        if self.quad is not None:
            d["quad"] = [[int(x) for x in row] for row in self.quad]
        return d


def _eval_quad_rows(F, U, rows):
    """Q(x) = x U x^T for each row, via table gathers."""
    n = U.shape[0]
    acc = np.zeros(len(rows), dtype=np.int16)
    for i in range(n):
        for j in range(n):
            if U[i, j]:
                term = F.mul[F.mul[rows[:, i], U[i, j]], rows[:, j]]
                acc = F.add[acc, term]
    return acc


def _eval_herm_diag(F, pair, M, rows):
    """h(x,x) = x^T M frob(x) for each row."""
    n = M.shape[0]
    fr = pair.frob[rows]
    acc = np.zeros(len(rows), dtype=np.int16)
    for i in range(n):
        for j in range(n):
            if M[i, j]:
                term = F.mul[F.mul[rows[:, i], M[i, j]], fr[:, j]]
                acc = F.add[acc, term]
    return acc


def polar_space(ctx, kind, gram, quad=None, pair=None):
    """Build a polar space from explicit form data on an existing context."""
    F = ctx.field
    gram = np.array(gram, dtype=np.int16)
    pts = np.asarray(ctx.points)
    if kind == SYMPLECTIC:
        if ctx.r % 2 == 0:
            raise GeometryError("symplectic polar spaces need odd r")
        if any(gram[i, i] for i in range(ctx.r + 1)):
            raise GeometryError("symplectic Gram must be alternating")
        matrix_inverse(F, gram)  # nondegeneracy
        mask = np.ones(ctx.num_points, dtype=bool)
        gen_dim = (ctx.r + 1) // 2 - 1
    elif kind == PARABOLIC:
        if ctx.r % 2 == 1:
            raise GeometryError("parabolic polar spaces need even r")
        quad = np.array(quad, dtype=np.int16)
        mask = _eval_quad_rows(F, quad, pts) == 0
        gen_dim = ctx.r // 2 - 1
        if F.q % 2 == 1:
            matrix_inverse(F, gram)
        else:
            nuc = nullspace(F, [list(r) for r in gram])
            if nuc is None or nuc.dim != 0:
                raise GeometryError("even-q parabolic polarization must have a "
                                    "1-dimensional radical (the nucleus)")
            if _eval_quad_rows(F, quad, np.array(nuc.basis))[0] == 0:
                raise GeometryError("nucleus lies on the quadric: degenerate form")
    elif kind == HERMITIAN:
        if pair is None or pair.ext.q != F.q:
            raise GeometryError("hermitian kind needs the matching field pair")
        if not np.array_equal(gram.T, pair.frob[gram]):
            raise GeometryError("Gram matrix is not Hermitian")
        matrix_inverse(F, gram)
        mask = _eval_herm_diag(F, pair, gram, pts) == 0
        gen_dim = (ctx.r + 1) // 2 - 1
    else:
        raise GeometryError(f"unknown polar space kind {kind!r}")
    mask.setflags(write=False)
    ids = np.flatnonzero(mask)
    ids.setflags(write=False)
    return PolarSpace(ctx=ctx, kind=kind, gram=gram, quad=quad, pair=pair,
                      point_mask=mask, point_ids=ids, generator_dim=gen_dim)


def make_polar(kind, r, q):
    """Canonical model of W(r,q), Q(r,q) (q odd) or H(r,q^2) (q the square)."""
    if kind == SYMPLECTIC:
        ctx = make_context(r, q)
        F = ctx.field
        G = np.zeros((r + 1, r + 1), dtype=np.int16)
        for i in range(0, r + 1, 2):
            G[i, i + 1] = 1
            G[i + 1, i] = F.neg[1]
        return polar_space(ctx, kind, G)
    if kind == PARABOLIC:
        if q % 2 == 0:
            raise GeometryError("parabolic kind requires odd q (even q arises "
                                "only via the hexagon nucleus projection)")
        ctx = make_context(r, q)
        U = np.zeros((r + 1, r + 1), dtype=np.int16)
        U[0, 0] = 1
        for i in range(1, r + 1, 2):
            U[i, i + 1] = 1
        G = _polarize(ctx.field, U)
        return polar_space(ctx, kind, G, quad=U)
    if kind == HERMITIAN:
        sq = int(round(q ** 0.5))
        if sq * sq != q:
            raise GeometryError(f"hermitian kind needs a square order, got {q}")
        pair = build_extension(sq)
        ctx = make_context(r, pair.ext)
        M = np.eye(r + 1, dtype=np.int16)
        return polar_space(ctx, kind, M, pair=pair)
    raise GeometryError(f"unknown polar space kind {kind!r}")


def _polarize(F, U):
    n = U.shape[0]
    G = np.zeros_like(U)
    for i in range(n):
        for j in range(n):
            G[i, j] = F.add[U[i, j], U[j, i]]
    return G


def perp_forms(ps, basis_rows):
    """Coefficient rows of the linear forms cutting out the perp of a span."""
    F = ps.ctx.field
    B = np.asarray(basis_rows, dtype=np.int64)
    if ps.kind == HERMITIAN:
        return gfmat.gf_matmul(F, ps.pair.frob[B], ps.gram.T.astype(np.int64))
    return gfmat.gf_matmul(F, B, ps.gram.astype(np.int64))


def perp(ps, s):
    """Polar subspace of s; dimension-reversing involution."""
    forms = perp_forms(ps, np.array(s.basis))
    out = nullspace(ps.ctx.field, [[int(x) for x in row] for row in forms])
    if out is None:
        raise GeometryError("perp of a full-rank subspace is empty")
    return out


def pairwise_form(ps, rows_a, rows_b):
    """Form values f(a, b) for all pairs of rows; (len_a x len_b) codes."""
    F = ps.ctx.field
    A = np.asarray(rows_a, dtype=np.int64)
    B = np.asarray(rows_b, dtype=np.int64)
    if ps.kind == HERMITIAN:
        B = ps.pair.frob[B].astype(np.int64)
    GB = gfmat.gf_matmul(F, ps.gram.astype(np.int64), B.T)
    return gfmat.gf_matmul(F, A, GB)


def ti_lines(ps):
    """All totally isotropic (singular) lines, in deterministic order."""
    from .covers import LineSet  # late import: LineSet lives with the covers
    ctx = ps.ctx
    ids = ps.point_ids
    coords = np.asarray(ctx.points)[ids]
    Z = pairwise_form(ps, coords, coords) == 0
    local = {int(g): i for i, g in enumerate(ids)}
    consumed = np.zeros(Z.shape, dtype=bool)
    lines = []
    for i in range(len(ids)):
        cands = np.flatnonzero(Z[i] & ~consumed[i])
        cands = cands[cands > i]
        for j in cands:
            if consumed[i, j]:
                continue
            line = make_subspace(ctx.field, [tuple(coords[i]), tuple(coords[j])])
            pids = line_points(ctx, line)
            loc = [local[p] for p in pids]
            consumed[np.ix_(loc, loc)] = True
            lines.append(line)
    return LineSet(ctx=ctx, lines=lines)


def ti_planes(ps):
    """All totally isotropic (singular) planes, deduplicated."""
    ctx = ps.ctx
    F = ctx.field
    seen = set()
    planes = []
    lset = ti_lines(ps)
    mask = ps.point_mask
    for line in lset.lines:
        forms = perp_forms(ps, np.array(line.basis, dtype=np.int64))
        on_line = set(line_points(ctx, line))
        vals = gfmat.gf_matmul(F, forms,
                               np.asarray(ctx.points).T.astype(np.int64))
        cand = np.flatnonzero((vals == 0).all(axis=0) & mask)
        for pid in cand:
            if int(pid) in on_line:
                continue
            plane = make_subspace(F, line.basis + (ctx.point_coords(int(pid)),))
            if plane.basis in seen:
                continue
            pts = subspace_points(ctx, plane)
            if all(mask[p] for p in pts):
                seen.add(plane.basis)
                planes.append(plane)
    return planes


def classify_line(ps, line):
    """contained / tangent / secant / external by |line ∩ point set|."""
    n = sum(bool(ps.point_mask[p]) for p in line_points(ps.ctx, line))
    if n == ps.q + 1:
        return CONTAINED
    if n == 1:
        return TANGENT
    if n == 2:
        return SECANT
    if n == 0:
        return EXTERNAL
    raise GeometryError(f"impossible intersection size {n} for a line")


def normalize_rows(F, mat):
    """Row-wise projective normalization of a code matrix (no zero rows)."""
    mat = np.asarray(mat)
    first = np.argmax(mat != 0, axis=1)
    lead = mat[np.arange(len(mat)), first]
    if not lead.all():
        raise GeometryError("zero row cannot be normalized")
    return F.mul[mat, F.inv[lead][:, None]]


@dataclass(frozen=True)
class BaerEmbedding:
    """PG(r,q) inside PG(r,q^2) with the fixing involution tau."""

    small: GeometryContext
    big: GeometryContext
    pair: ExtensionPair
    lift: np.ndarray = field(repr=False)       # small id -> big id
    lift_mask: np.ndarray = field(repr=False)  # bool over big ids
    tau: np.ndarray = field(repr=False)        # permutation of big ids
    small_of_big: dict = field(repr=False)     # big id -> small id (lifted only)

    @property
    def q(self):
        return self.pair.base.q

    def lift_point(self, vec):
        return tuple(int(self.pair.embed[c]) for c in vec)

    def lift_subspace(self, s):
        return Subspace(basis=tuple(self.lift_point(row) for row in s.basis))


def build_embedding(r, q, pair=None, small=None):
    pair = pair or build_extension(q)
    small = small or make_context(r, pair.base)
    big = make_context(r, pair.ext)
    lift = np.array([big.point_index[tuple(int(pair.embed[c]) for c in pt)]
                     for pt in np.asarray(small.points)], dtype=np.int64)
    lift_mask = np.zeros(big.num_points, dtype=bool)
    lift_mask[lift] = True
    # frobenius preserves the leading-1 normalization, so no rescale needed
    fr = pair.frob[np.asarray(big.points)]
    tau = np.array([big.point_index[tuple(int(c) for c in row)] for row in fr],
                   dtype=np.int64)
    small_of_big = {int(b): s for s, b in enumerate(lift)}
    for arr in (lift, lift_mask, tau):
        arr.setflags(write=False)
    return BaerEmbedding(small=small, big=big, pair=pair, lift=lift,
                         lift_mask=lift_mask, tau=tau,
                         small_of_big=small_of_big)


def extend_line(emb, line):
    """The unique line of the big space meeting the small line in q+1 points."""
    if line.dim != 1:
        raise GeometryError("extend_line expects a line")
    return emb.lift_subspace(line)


def real_trace_ids(emb, big_subspace):
    """Big-space ids of the lifted-subgeometry points on a big subspace."""
    return [p for p in subspace_points(emb.big, big_subspace)
            if emb.lift_mask[p]]


def check_commuting(emb, bilinear_ps, hermitian_ps):
    """True iff composing the two polarities equals tau on every big point."""
    if bilinear_ps.ctx is not emb.big or hermitian_ps.ctx is not emb.big:
        raise GeometryError("both polar spaces must live on the big context")
    F = emb.big.field
    Minv = matrix_inverse(F, hermitian_ps.gram)
    K = gfmat.gf_matmul(F, Minv.astype(np.int64),
                        bilinear_ps.gram.astype(np.int64))
    imgs = gfmat.gf_matmul(F, np.asarray(emb.big.points, dtype=np.int64), K.T)
    if (imgs == 0).all(axis=1).any():
        return False
    imgs = normalize_rows(F, emb.pair.frob[imgs])
    idx = emb.big.point_index
    for pid, row in enumerate(imgs):
        if idx[tuple(int(c) for c in row)] != emb.tau[pid]:
            return False
    return True
