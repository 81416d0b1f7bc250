"""Points, lines and subspaces of PG(r,q).

Subspaces are kept in reduced row-echelon form over the field, so equality
and hashing are raw-matrix comparisons.  Points carry dense integer ids in
lexicographic order of their normalized coordinate codes; every downstream
spectrum is reported in terms of those ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .fields import FieldTable, build_field


class GeometryError(ValueError):
    pass


def theta(n, q):
    """Number of points of PG(n,q): q^n + ... + q + 1, with theta(-1) = 0."""
    if n < -1:
        raise GeometryError(f"theta undefined for n={n}")
    return sum(q ** i for i in range(n + 1))


def gaussian(n, k, q):
    """Gaussian binomial [n choose k]_q: k-dim vector subspaces of GF(q)^n."""
    if k < 0 or n < 0 or k > n:
        raise GeometryError(f"gaussian undefined for n={n}, k={k}")
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def normalize(F, vec):
    """Scale so the leftmost nonzero coordinate is 1; None for the zero vector."""
    for c in vec:
        if c:
            if c == 1:
                return tuple(int(x) for x in vec)
            s = int(F.inv[c])
            return tuple(int(F.mul[x, s]) for x in vec)
    return None


def rref(F, rows):
    """Reduced row-echelon form over F; returns a tuple of nonzero row tuples."""
    mat = [list(r) for r in rows]
    nrows, ncols = len(mat), len(mat[0]) if mat else 0
    piv_row = 0
    for col in range(ncols):
        pr = next((r for r in range(piv_row, nrows) if mat[r][col]), None)
        if pr is None:
            continue
        mat[piv_row], mat[pr] = mat[pr], mat[piv_row]
        inv = int(F.inv[mat[piv_row][col]])
        if inv != 1:
            mat[piv_row] = [int(F.mul[x, inv]) for x in mat[piv_row]]
        for r in range(nrows):
            if r != piv_row and mat[r][col]:
                c = int(F.neg[mat[r][col]])
                row, prow = mat[r], mat[piv_row]
                mat[r] = [int(F.add[row[j], F.mul[c, prow[j]]])
                          for j in range(ncols)]
        piv_row += 1
        if piv_row == nrows:
            break
    return tuple(tuple(r) for r in mat[:piv_row])


@dataclass(frozen=True)
class Subspace:
    """A projective subspace, canonically represented by its RREF basis."""

    basis: tuple  # (d+1) x (r+1) tuple-of-tuples in reduced echelon form

    @property
    def dim(self):
        return len(self.basis) - 1

    def __len__(self):
        return len(self.basis)


def make_subspace(F, rows):
    basis = rref(F, rows)
    if not basis:
        raise GeometryError("subspace needs at least one nonzero vector")
    return Subspace(basis=basis)


@dataclass(frozen=True)
class ProjPoint:
    id: int
    coords: tuple


@dataclass(frozen=True)
class GeometryContext:
    """PG(r,q) with a fixed point indexing."""

    r: int
    field: FieldTable
    points: np.ndarray = field(repr=False)   # N x (r+1) code matrix, lex order
    point_index: dict = field(repr=False)    # coord tuple -> id

    @property
    def q(self):
        return self.field.q

    @property
    def num_points(self):
        return len(self.points)

    def point_id(self, vec):
        nv = normalize(self.field, vec)
        if nv is None:
            raise GeometryError("zero vector is not a point")
        return self.point_index[nv]

    def point_coords(self, pid):
        return tuple(int(c) for c in self.points[pid])


def make_context(r, q):
    F = q if isinstance(q, FieldTable) else build_field(q)
    pts = []
    # lex order over coordinate tuples: more leading zeros come first
    for lead in range(r, -1, -1):
        tail = r - lead
        for suffix in product(range(F.q), repeat=tail):
            pts.append((0,) * lead + (1,) + suffix)
    pts.sort()
    assert len(pts) == theta(r, F.q)
    points = np.array(pts, dtype=np.int16)
    points.setflags(write=False)
    index = {pt: i for i, pt in enumerate(pts)}
    return GeometryContext(r=r, field=F, points=points, point_index=index)


def enumerate_points(ctx):
    return [ProjPoint(id=i, coords=ctx.point_coords(i))
            for i in range(ctx.num_points)]


def enumerate_subspaces(ctx, d):
    """All d-subspaces of PG(r,q), one per echelon pattern, deterministic order.

    Patterns iterate over pivot-column choices; free entries (right of each
    pivot, off the pivot columns) run through all field codes in lex order.
    """
    if not 0 <= d <= ctx.r:
        raise GeometryError(f"dimension {d} out of range for PG({ctx.r},{ctx.q})")
    n = ctx.r + 1
    m = d + 1
    q = ctx.q
    for pivots in combinations(range(n), m):
        free = [(i, j) for i in range(m) for j in range(n)
                if j > pivots[i] and j not in pivots]
        base = [[0] * n for _ in range(m)]
        for i, pj in enumerate(pivots):
            base[i][pj] = 1
        for vals in product(range(q), repeat=len(free)):
            rows = [row[:] for row in base]
            for (i, j), v in zip(free, vals):
                rows[i][j] = v
            yield Subspace(basis=tuple(tuple(r) for r in rows))


def span(F, a, b):
    return make_subspace(F, a.basis + b.basis)


def meet(F, a, b):
    """Intersection of two subspaces; None if empty (projective dim -1)."""
    # Zassenhaus: rref of [A|A; B|0]; bottom-block right halves span the meet
    n = len(a.basis[0])
    rows = [list(r) + list(r) for r in a.basis]
    rows += [list(r) + [0] * n for r in b.basis]
    red = rref(F, rows)
    inter = [r[n:] for r in red if not any(r[:n])]
    if not inter:
        return None
    return Subspace(basis=rref(F, inter))


def contains(F, s, vec):
    """True iff the (point) vector lies in the row space of s."""
    v = list(vec)
    for row in s.basis:
        piv = next(j for j, x in enumerate(row) if x)
        if v[piv]:
            c = int(F.neg[v[piv]])
            v = [int(F.add[v[j], F.mul[c, row[j]]]) for j in range(len(v))]
    return not any(v)


def contains_subspace(F, s, t):
    return all(contains(F, s, row) for row in t.basis)


def subspace_points(ctx, s):
    """Ids of all points of a subspace, via its own point parametrization."""
    F = ctx.field
    ids = []
    m = len(s.basis)
    for lead in range(m - 1, -1, -1):
        for suffix in product(range(F.q), repeat=m - 1 - lead):
            coeffs = (0,) * lead + (1,) + suffix
            vec = [0] * len(s.basis[0])
            for c, row in zip(coeffs, s.basis):
                if c:
                    for j, x in enumerate(row):
                        vec[j] = int(F.add[vec[j], F.mul[c, x]])
            ids.append(ctx.point_id(vec))
    return ids


def line_points(ctx, line):
    """Point ids of a line, cached-format helper (q+1 entries)."""
    ids = subspace_points(ctx, line)
    assert len(ids) == ctx.q + 1
    return ids


def nullspace(F, rows):
    """Basis (RREF) of {x : M x = 0} for a list of coefficient rows."""
    red = rref(F, rows)
    n = len(rows[0])
    pivots = [next(j for j, x in enumerate(row) if x) for row in red]
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for fj in free:
        v = [0] * n
        v[fj] = 1
        for row, pj in zip(red, pivots):
            v[pj] = int(F.neg[row[fj]])
        basis.append(v)
    if not basis:
        return None
    return Subspace(basis=rref(F, basis))


def dual_complement(F, s, n):
    """The (r-1-d)-space of linear forms vanishing on s, as a Subspace."""
    return nullspace(F, [list(r) for r in s.basis])


def matrix_inverse(F, M):
    n = len(M)
    rows = [list(M[i]) + [1 if j == i else 0 for j in range(n)]
            for i in range(n)]
    red = rref(F, rows)
    if len(red) != n or any(red[i][i] != 1 for i in range(n)):
        raise GeometryError("matrix is singular")
    return np.array([r[n:] for r in red], dtype=np.int16)
