"""m-cover recognition, the counting lemmas, and the four dual-cover
predicates (projective, symplectic, parabolic I and II).

Every predicate reduces to the same primitive: for a probe codimension-2
space given by two linear forms, the number of lines of L it contains is the
number of all-zero 2x2 evaluation blocks (and rank-1 blocks are the lines
meeting it in exactly one point).  Those blocks are computed in bulk with
BLAS-backed field matmuls, chunked over probes.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import gfmat
from .projective import (GeometryError, Subspace, enumerate_subspaces,
                         line_points, make_context, make_subspace, theta)
from . import polar as polar_mod


class CoverError(ValueError):
    pass


class LineSet:
    """A deduplicated, ordered set of lines with cached per-line point ids."""

    def __init__(self, ctx, lines):
        self.ctx = ctx
        self.lines = list(lines)
        self.keys = {}
        for idx, ln in enumerate(self.lines):
            if ln.dim != 1:
                raise CoverError("LineSet entries must be lines")
            if ln.basis in self.keys:
                raise CoverError(f"duplicate line at position {idx}")
            self.keys[ln.basis] = idx
        self._points = None
        self._basis_arr = None

    def __len__(self):
        return len(self.lines)

    def __contains__(self, line):
        return line.basis in self.keys

    @property
    def per_line_points(self):
        if self._points is None:
            self._points = [line_points(self.ctx, ln) for ln in self.lines]
        return self._points

    @property
    def basis_array(self):
        """(2L) x (r+1) stacked basis rows, two per line."""
        if self._basis_arr is None:
            self._basis_arr = np.array(
                [row for ln in self.lines for row in ln.basis], dtype=np.int64)
        return self._basis_arr


@dataclass
class CoverProfile:
    m: int | None
    size: int
    point_multiplicities: np.ndarray = field(repr=False)
    divisibility_ok: bool = True


@dataclass
class DualSpectrum:
    scope: str
    x_in: int
    x_out: int
    hist_in: dict
    hist_out: dict
    passed: bool

    def histogram(self):
        return {"in": dict(sorted(self.hist_in.items())),
                "out": dict(sorted(self.hist_out.items()))}


def cover_profile(lineset, ps=None):
    """Point-multiplicity profile; m is set iff the multiplicity is constant
    over the relevant points (all of PG, or the polar space's points)."""
    if not len(lineset):
        raise CoverError("empty line set")
    ctx = lineset.ctx
    counts = np.bincount(np.concatenate(lineset.per_line_points),
                         minlength=ctx.num_points)
    if ps is not None:
        if ps.ctx.r != ctx.r or ps.ctx.q != ctx.q:
            raise CoverError("polar space context mismatch")
        for pts in lineset.per_line_points:
            if not all(ps.point_mask[p] for p in pts):
                raise CoverError("line set leaves the polar space")
        relevant = counts[ps.point_ids]
        npoints = len(ps.point_ids)
    else:
        relevant = counts
        npoints = ctx.num_points
    vals = set(int(v) for v in relevant)
    m = vals.pop() if len(vals) == 1 else None
    div_ok = True
    if m is not None:
        assert len(lineset) * (ctx.q + 1) == m * npoints
        if ps is None and ctx.r % 2 == 0:
            div_ok = m % (ctx.q + 1) == 0  # forced by the count when r is even
    return CoverProfile(m=m, size=len(lineset),
                        point_multiplicities=counts, divisibility_ok=div_ok)


def _det2(F, z):
    """Determinants of the 2x2 blocks of z with shape (..., 2, 2)."""
    a = F.mul[z[..., 0, 0], z[..., 1, 1]]
    b = F.mul[z[..., 0, 1], z[..., 1, 0]]
    return F.add[a, F.neg[b]]


def block_counts(F, probe_forms, line_rows, chunk=4096):
    """Per probe: (#all-zero 2x2 blocks, #rank-1 blocks) against all lines.

    probe_forms: (P, 2, n) two coefficient rows per probe;
    line_rows:   (2L, n) two basis rows per line.
    """
    P = len(probe_forms)
    L = len(line_rows) // 2
    x = np.empty(P, dtype=np.int64)
    y = np.empty(P, dtype=np.int64)
    BT = np.ascontiguousarray(line_rows.T)
    for lo in range(0, P, chunk):
        hi = min(lo + chunk, P)
        A = probe_forms[lo:hi].reshape(-1, probe_forms.shape[-1])
        z = gfmat.gf_matmul(F, A, BT).reshape(hi - lo, 2, L, 2)
        z = np.swapaxes(z, 1, 2)  # (p, L, 2, 2)
        zero = (z == 0).all(axis=(2, 3))
        det = _det2(F, z)
        x[lo:hi] = zero.sum(axis=1)
        y[lo:hi] = ((det == 0) & ~zero).sum(axis=1)
    return x, y


def contained_counts(F, form_rows, line_rows, chunk=16384):
    """#lines with both basis points on all given forms; forms (P, m, n)."""
    P, m, n = form_rows.shape
    L = len(line_rows) // 2
    out = np.empty(P, dtype=np.int64)
    BT = np.ascontiguousarray(line_rows.T)
    for lo in range(0, P, chunk):
        hi = min(lo + chunk, P)
        A = form_rows[lo:hi].reshape(-1, n)
        z = gfmat.gf_matmul(F, A, BT).reshape(hi - lo, m, L, 2)
        out[lo:hi] = (z == 0).all(axis=(1, 3)).sum(axis=1)
    return out


def codim2_forms(ctx):
    """All (r-2)-spaces of PG(r,q), as (P, 2, r+1) dual-form pairs.

    An (r-2)-space is the common zero set of a 2-space of linear forms;
    enumerating those 2-spaces in echelon order matches the line count."""
    forms = np.array([probe.basis for probe in enumerate_subspaces(ctx, 1)],
                     dtype=np.int64)
    return forms


def check_lemma1(lineset, profile=None):
    """Exact verification of the m-cover counting identities (size,
    per-hyperplane count, and x(q+1)+y over all (r-2)-spaces)."""
    ctx = lineset.ctx
    F = ctx.field
    q, r = ctx.q, ctx.r
    profile = profile or cover_profile(lineset)
    if profile.m is None:
        raise CoverError("not an m-cover")
    m = profile.m
    report = {"m": m, "size": len(lineset),
              "size_ok": len(lineset) * (q + 1) == m * theta(r, q)}

    hyper = np.asarray(ctx.points, dtype=np.int64)[:, None, :]
    counts = contained_counts(F, hyper, lineset.basis_array)
    expected = m * theta(r - 2, q) // (q + 1)
    report["hyperplane_count"] = expected
    report["hyperplanes_ok"] = bool((counts == expected).all())

    forms = codim2_forms(ctx)
    x, y = block_counts(F, forms, lineset.basis_array)
    report["codim2_identity_ok"] = bool(
        (x * (q + 1) + y == m * theta(r - 2, q)).all())
    report["xy_histogram"] = sorted(Counter(zip(x.tolist(), y.tolist())).items())
    report["passed"] = (report["size_ok"] and report["hyperplanes_ok"]
                        and report["codim2_identity_ok"])
    return report


def is_dual_projective(lineset, profile=None):
    """Codim-2 dual-cover spectrum: passes iff the number of lines inside an
    (r-2)-space only takes the two admissible values (no membership split)."""
    ctx = lineset.ctx
    F = ctx.field
    q, r = ctx.q, ctx.r
    profile = profile or cover_profile(lineset)
    if profile.m is None:
        raise CoverError("not an m-cover")
    m = profile.m
    if (m * theta(r - 4, q)) % (q + 1):
        raise CoverError("divisibility precondition fails: "
                         f"(q+1) does not divide m*theta(r-4,q) = "
                         f"{m * theta(r - 4, q)}")
    x_out = m * theta(r - 4, q) // (q + 1)
    x_in = x_out + q ** (r - 3)
    forms = codim2_forms(ctx)
    x, _ = block_counts(F, forms, lineset.basis_array)
    hist = Counter(x.tolist())
    passed = set(hist) <= {x_in, x_out}
    return DualSpectrum(scope="codim2-projective", x_in=x_in, x_out=x_out,
                        hist_in={}, hist_out=dict(hist), passed=passed)


def _member_flags(lineset, probes):
    return np.array([ln.basis in lineset.keys for ln in probes], dtype=bool)


def is_dual_symplectic(lineset, ps, profile=None):
    """Dual predicate of symplectic type: counts lines of L inside the perp
    of every totally isotropic probe line, split by probe membership."""
    if ps.kind != polar_mod.SYMPLECTIC:
        raise CoverError("symplectic polar space required")
    ctx = lineset.ctx
    F = ctx.field
    q, r = ctx.q, ctx.r
    profile = profile or cover_profile(lineset, ps=ps)
    if profile.m is None:
        raise CoverError("not an m-cover of the polar space")
    m = profile.m
    if (m * theta(r - 4, q)) % (q + 1):
        raise CoverError("divisibility precondition fails for Def-3.1 values")
    x_out = m * theta(r - 4, q) // (q + 1)
    x_in = x_out + q ** (r - 3)

    probes = polar_mod.ti_lines(ps)
    bases = probes.basis_array
    forms = polar_mod.perp_forms(ps, bases).reshape(len(probes), 2, -1)
    x, _ = block_counts(F, forms, lineset.basis_array)
    member = _member_flags(lineset, probes.lines)
    hist_in = Counter(x[member].tolist())
    hist_out = Counter(x[~member].tolist())
    passed = set(hist_in) <= {x_in} and set(hist_out) <= {x_out}
    return DualSpectrum(scope="ti-line-symplectic", x_in=x_in, x_out=x_out,
                        hist_in=dict(hist_in), hist_out=dict(hist_out),
                        passed=passed)


def _all_lines_with_quadric_profile(ps):
    """All lines of PG(r,q) with their |line ∩ quadric| counts (vectorized)."""
    ctx = ps.ctx
    F = ctx.field
    q = ctx.q
    lines = list(enumerate_subspaces(ctx, 1))
    bases = np.array([ln.basis for ln in lines], dtype=np.int64)
    u, v = bases[:, 0, :], bases[:, 1, :]
    hits = np.zeros(len(lines), dtype=np.int64)
    combos = [(1, t) for t in range(q)] + [(0, 1)]
    for a, b in combos:
        pts = F.add[F.mul[u, a], F.mul[v, b]]
        hits += polar_mod._eval_quad_rows(F, ps.quad, pts) == 0
    return lines, bases, hits


def check_lemma4(lineset, ps, profile=None):
    """Counting identities for m-covers of a parabolic quadric: size, line
    counts per hyperplane type, and x(q+1)+y over perps of eligible lines."""
    if ps.kind != polar_mod.PARABOLIC:
        raise CoverError("parabolic polar space required")
    ctx = lineset.ctx
    F = ctx.field
    q, r = ctx.q, ctx.r
    profile = profile or cover_profile(lineset, ps=ps)
    if profile.m is None:
        raise CoverError("not an m-cover of the quadric")
    m = profile.m
    report = {"m": m, "size": len(lineset),
              "size_ok": len(lineset) * (q + 1) == m * theta(r - 1, q)}

    # hyperplane type: tangent iff the pole is singular; the two nondegenerate
    # section sizes separate hyperbolic (larger) from elliptic
    from .projective import matrix_inverse
    Ginv = matrix_inverse(F, ps.gram).astype(np.int64)
    coeffs = np.asarray(ctx.points, dtype=np.int64)
    poles = gfmat.gf_matmul(F, coeffs, Ginv.T)
    poles = polar_mod.normalize_rows(F, poles)
    pole_ids = np.array([ctx.point_index[tuple(int(c) for c in row)]
                         for row in poles], dtype=np.int64)
    tangent = ps.point_mask[pole_ids]

    qpts = np.asarray(ctx.points, dtype=np.int64)[ps.point_ids]
    zc = gfmat.gf_matmul(F, coeffs, qpts.T)
    section = (zc == 0).sum(axis=1)
    nd_sizes = sorted(set(section[~tangent].tolist()))
    if len(nd_sizes) != 2:
        raise CoverError("expected exactly two nondegenerate section sizes")
    elliptic_size, hyperbolic_size = nd_sizes

    counts = contained_counts(F, coeffs[:, None, :], lineset.basis_array)
    exp_tan = m * theta(r - 3, q) // (q + 1)
    exp_hyp = m * (q ** (r // 2) - 1) * (q ** ((r - 4) // 2) + 1) // (q * q - 1)
    exp_ell = m * (q ** (r // 2) + 1) * (q ** ((r - 4) // 2) - 1) // (q * q - 1)
    ok_tan = bool((counts[tangent] == exp_tan).all())
    ok_hyp = bool((counts[~tangent & (section == hyperbolic_size)] == exp_hyp).all())
    ok_ell = bool((counts[~tangent & (section == elliptic_size)] == exp_ell).all())
    report["hyperplane_counts"] = {"tangent": exp_tan, "hyperbolic": exp_hyp,
                                   "elliptic": exp_ell}
    report["hyperplanes_ok"] = ok_tan and ok_hyp and ok_ell

    _, bases, hits = _all_lines_with_quadric_profile(ps)
    eligible = np.isin(hits, (0, 2, q + 1))
    forms = polar_mod.perp_forms(ps, bases.reshape(-1, r + 1))
    forms = forms.reshape(len(bases), 2, r + 1)
    x, y = block_counts(F, forms[eligible], lineset.basis_array)
    report["codim2_identity_ok"] = bool(
        (x * (q + 1) + y == m * theta(r - 3, q)).all())
    report["xy_histogram"] = sorted(Counter(zip(x.tolist(), y.tolist())).items())
    report["passed"] = (report["size_ok"] and report["hyperplanes_ok"]
                        and report["codim2_identity_ok"])
    return report


def is_dual_parabolic(lineset, ps, variant, profile=None):
    """Dual predicates of parabolic type I / II over perps of probe lines
    with the variant's admissible quadric-intersection sizes."""
    if ps.kind != polar_mod.PARABOLIC:
        raise CoverError("parabolic polar space required")
    if variant not in ("I", "II"):
        raise CoverError(f"unknown variant {variant!r}")
    ctx = lineset.ctx
    F = ctx.field
    q, r = ctx.q, ctx.r
    profile = profile or cover_profile(lineset, ps=ps)
    if profile.m is None:
        raise CoverError("not an m-cover of the quadric")
    m = profile.m
    if (m * theta(r - 5, q)) % (q + 1):
        raise CoverError("divisibility precondition fails for the type-"
                         f"{variant} values")
    x_out = m * theta(r - 5, q) // (q + 1)
    x_in = x_out + q ** (r - 4)

    lines, bases, hits = _all_lines_with_quadric_profile(ps)
    allowed = (0, 2, q + 1) if variant == "I" else (0, q + 1)
    member = np.array([ln.basis in lineset.keys for ln in lines], dtype=bool)
    keep = np.isin(hits, allowed) | member
    forms = polar_mod.perp_forms(ps, bases[keep].reshape(-1, r + 1))
    forms = forms.reshape(int(keep.sum()), 2, r + 1)
    x, _ = block_counts(F, forms, lineset.basis_array)
    mk = member[keep]
    hist_in = Counter(x[mk].tolist())
    hist_out = Counter(x[~mk].tolist())
    passed = set(hist_in) <= {x_in} and set(hist_out) <= {x_out}
    return DualSpectrum(scope=f"parabolic-{variant}", x_in=x_in, x_out=x_out,
                        hist_in=dict(hist_in), hist_out=dict(hist_out),
                        passed=passed)


# --- line-set file format ----------------------------------------------------

KINDS = ("projective", "symplectic", "parabolic")


def write_lineset(path, lineset, kind="projective"):
    if kind not in KINDS:
        raise CoverError(f"unknown kind {kind!r}")
    with open(path, "w") as fh:
        fh.write(f"q={lineset.ctx.q} r={lineset.ctx.r} kind={kind}\n")
        for ln in lineset.lines:
            fh.write(";".join(",".join(str(c) for c in row)
                              for row in ln.basis) + "\n")


def parse_lineset(path, ctx=None):
    """Parse a line-set file; returns (LineSet, kind).  Raises CoverError
    with the offending line number on malformed or duplicate input."""
    with open(path) as fh:
        raw = fh.readlines()
    body = [(no + 1, s.strip()) for no, s in enumerate(raw)
            if s.strip() and not s.strip().startswith("#")]
    if not body:
        raise CoverError("empty line-set file")
    no, header = body[0]
    fields = dict(tok.split("=", 1) for tok in header.split())
    try:
        q, r, kind = int(fields["q"]), int(fields["r"]), fields["kind"]
    except (KeyError, ValueError):
        raise CoverError(f"line {no}: bad header {header!r}")
    if kind not in KINDS:
        raise CoverError(f"line {no}: unknown kind {kind!r}")
    if ctx is None:
        ctx = make_context(r, q)
    elif ctx.r != r or ctx.q != q:
        raise CoverError("context does not match the file header")
    lines, keys = [], set()
    for no, text in body[1:]:
        try:
            rows = [tuple(int(c) for c in part.split(","))
                    for part in text.split(";")]
            if len(rows) != 2 or any(len(row) != r + 1 for row in rows):
                raise ValueError
            if not all(0 <= c < ctx.q for row in rows for c in row):
                raise ValueError
            ln = make_subspace(ctx.field, rows)
        except (ValueError, GeometryError):
            raise CoverError(f"line {no}: malformed line entry {text!r}")
        if ln.dim != 1:
            raise CoverError(f"line {no}: basis points are not distinct")
        if ln.basis in keys:
            raise CoverError(f"line {no}: duplicate line")
        keys.add(ln.basis)
        lines.append(ln)
    return LineSet(ctx=ctx, lines=lines), kind
