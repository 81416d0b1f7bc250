"""Point-set analysis on the extended geometry: two-character sets of
PG(r,q^2), i-tight sets of polar spaces over GF(q^2), the commuting-polarity
bundles that tie the small and big geometries together, and the four-orbit
machinery for a parabolic quadric sitting inside a Hermitian variety.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from . import gfmat
from .polar import (HERMITIAN, PARABOLIC, SYMPLECTIC, BaerEmbedding,
                    PolarSpace, build_embedding, check_commuting,
                    normalize_rows, polar_space, ti_lines)
from .projective import (GeometryError, make_subspace, subspace_points, theta)


class AnalysisError(ValueError):
    pass


def bar_set(emb, lineset):
    """Points of the big space on the extended lines, as a boolean mask."""
    mask = np.zeros(emb.big.num_points, dtype=bool)
    for ln in lineset.lines:
        for p in subspace_points(emb.big, emb.lift_subspace(ln)):
            mask[p] = True
    return mask


def hyperplane_counts(ctx, mask, chunk=4096):
    """|H ∩ X| over all hyperplanes H, indexed by the dual point id."""
    F = ctx.field
    coeffs = np.asarray(ctx.points, dtype=np.int64)
    XT = np.ascontiguousarray(coeffs[np.flatnonzero(mask)].T)
    out = np.empty(ctx.num_points, dtype=np.int64)
    for lo in range(0, ctx.num_points, chunk):
        z = gfmat.gf_matmul(F, coeffs[lo:lo + chunk], XT)
        out[lo:lo + chunk] = (z == 0).sum(axis=1)
    return out


@dataclass
class TwoCharReport:
    size: int
    alpha: int | None
    beta: int | None
    histogram: dict
    passed: bool


def two_char_check(ctx, mask, alpha=None, beta=None):
    """Passes iff every hyperplane meets the set in alpha or beta points
    (or in at most two distinct values when none are prescribed)."""
    counts = hyperplane_counts(ctx, mask)
    hist = Counter(counts.tolist())
    if alpha is None:
        passed = len(hist) == 2
    else:
        passed = set(hist) <= {alpha, beta}
    return TwoCharReport(size=int(mask.sum()), alpha=alpha, beta=beta,
                         histogram=dict(sorted(hist.items())), passed=passed)


def char_residual(k, alpha, beta, r, q2):
    """The quadratic constraint every two-character set must satisfy
    identically (zero for admissible (k, alpha, beta) in PG(r,q2))."""
    return (k * k * theta(r - 2, q2) + k * (1 - alpha - beta) * theta(r - 1, q2)
            - k * theta(r - 2, q2) + alpha * beta * theta(r, q2))


def tight_values(r, q, i):
    """(member value, non-member value) of an i-tight set; the ambient polar
    space lives over GF(q^2) and r decides the parity branch."""
    if r % 2:
        base = i * theta((r - 3) // 2, q * q)
        return base + q ** (r - 1), base
    base = i * theta((r - 4) // 2, q * q)
    return base + q ** (r - 2), base


@dataclass
class TightReport:
    ambient: str
    i: int | None
    expected_in: int
    expected_out: int
    hist_in: dict
    hist_out: dict
    passed: bool


def tight_check(ps, mask, i=None):
    """Checks that |P^perp ∩ X| takes the two prescribed values over all
    points P of the polar space, split by membership of P in X."""
    ctx = ps.ctx
    q = isqrt(ctx.q)
    if q * q != ctx.q:
        raise AnalysisError("tight sets need an ambient field of square order")
    mask = np.asarray(mask, dtype=bool)
    if not (mask <= ps.point_mask).all():
        raise AnalysisError("point set leaves the polar space")
    F = ctx.field
    probes = np.asarray(ctx.points, dtype=np.int64)[ps.point_ids]
    if ps.kind == HERMITIAN:
        forms = gfmat.gf_matmul(F, ps.pair.frob[probes].astype(np.int64),
                                ps.gram.T.astype(np.int64))
    else:
        forms = gfmat.gf_matmul(F, probes, ps.gram.T.astype(np.int64))
    XT = np.ascontiguousarray(
        np.asarray(ctx.points, dtype=np.int64)[np.flatnonzero(mask)].T)
    counts = np.empty(len(probes), dtype=np.int64)
    chunk = 4096
    for lo in range(0, len(probes), chunk):
        z = gfmat.gf_matmul(F, forms[lo:lo + chunk], XT)
        counts[lo:lo + chunk] = (z == 0).sum(axis=1)
    member = mask[ps.point_ids]
    if i is None:
        # infer from any probe, then verify everything against the pair
        if (~member).any():
            probe_val = int(counts[~member][0])
            off = 0
        else:
            probe_val = int(counts[0])
            off = q ** (ctx.r - 1) if ctx.r % 2 else q ** (ctx.r - 2)
        th = theta((ctx.r - 3) // 2 if ctx.r % 2 else (ctx.r - 4) // 2, ctx.q)
        if (probe_val - off) % th:
            i = None
        else:
            i = (probe_val - off) // th
    if i is None:
        return TightReport(ambient=f"{ps.kind}({ctx.r},{ctx.q})", i=None,
                           expected_in=-1, expected_out=-1,
                           hist_in=dict(Counter(counts[member].tolist())),
                           hist_out=dict(Counter(counts[~member].tolist())),
                           passed=False)
    exp_in, exp_out = tight_values(ctx.r, q, i)
    hist_in = Counter(counts[member].tolist())
    hist_out = Counter(counts[~member].tolist())
    passed = set(hist_in) <= {exp_in} and set(hist_out) <= {exp_out}
    return TightReport(ambient=f"{ps.kind}({ctx.r},{ctx.q})", i=i,
                       expected_in=exp_in, expected_out=exp_out,
                       hist_in=dict(hist_in), hist_out=dict(hist_out),
                       passed=passed)


# --- commuting-polarity bundles ----------------------------------------------

@dataclass(frozen=True)
class PolarityBundle:
    """The small polar space, its lift over GF(q^2), and the Hermitian
    companion whose polarity composes with the lifted one to the Baer
    involution (verified at construction time)."""

    emb: BaerEmbedding
    small: PolarSpace
    big_bilinear: PolarSpace
    big_hermitian: PolarSpace

    @property
    def q(self):
        return self.emb.q

    @property
    def r(self):
        return self.small.ctx.r


def _trace_zero_unit(pair):
    for x in range(1, pair.ext.q):
        if pair.trace[x] == 0:
            return x
    raise AnalysisError("no trace-zero unit in the extension")


def make_bundle(kind, r, q, emb=None):
    """Bundle for W(r,q) (odd r) or Q(r,q) (even r, odd q) with the lifted
    form and the Hermitian companion on the same big context."""
    emb = emb or build_embedding(r, q)
    pair = emb.pair
    ext = pair.ext
    n = r + 1
    if kind == SYMPLECTIC:
        G = np.zeros((n, n), dtype=np.int16)
        for i in range(0, n, 2):
            G[i, i + 1] = 1
            G[i + 1, i] = pair.base.neg[1]
        small = polar_space(emb.small, SYMPLECTIC, G)
        Gb = pair.embed[G]
        big_b = polar_space(emb.big, SYMPLECTIC, Gb)
        lam = _trace_zero_unit(pair)
        big_h = polar_space(emb.big, HERMITIAN, ext.mul[Gb, lam], pair=pair)
    elif kind == PARABOLIC:
        if q % 2 == 0:
            raise AnalysisError("parabolic bundles need odd q")
        U = np.zeros((n, n), dtype=np.int16)
        U[0, 0] = 1
        for i in range(1, n, 2):
            U[i, i + 1] = 1
        Gs = np.zeros((n, n), dtype=np.int16)
        for i in range(n):
            for j in range(n):
                Gs[i, j] = pair.base.add[U[i, j], U[j, i]]
        small = polar_space(emb.small, PARABOLIC, Gs, quad=U)
        big_b = polar_space(emb.big, PARABOLIC, pair.embed[Gs],
                            quad=pair.embed[U])
        big_h = polar_space(emb.big, HERMITIAN, pair.embed[Gs], pair=pair)
    else:
        raise AnalysisError(f"no bundle for kind {kind!r}")
    if not check_commuting(emb, big_b, big_h):
        raise AnalysisError("companion polarities do not compose to the "
                            "Baer involution")
    # the Hermitian variety must meet the subgeometry exactly in the small
    # polar space
    lifted = big_h.point_mask[emb.lift]
    if not np.array_equal(lifted, small.point_mask):
        raise AnalysisError("Hermitian companion has the wrong real trace")
    return PolarityBundle(emb=emb, small=small, big_bilinear=big_b,
                          big_hermitian=big_h)


# --- four point orbits under the small orthogonal group ----------------------

LABEL_Q, LABEL_O, LABEL_E, LABEL_S = "Q", "O", "E", "S"


def orbit_labels(bundle):
    """Label every point of the Hermitian companion as Q (on the small
    quadric), O (elsewhere on an extended quadric line), E or S (on an
    extended external / secant line of the subgeometry)."""
    if bundle.small.kind != PARABOLIC:
        raise AnalysisError("orbit labels need a parabolic bundle")
    emb = bundle.emb
    h = bundle.big_hermitian
    q = bundle.q
    labels = np.full(emb.big.num_points, "", dtype="<U1")
    by_count = {q + 1: LABEL_O, 0: LABEL_E, 2: LABEL_S}
    pts = emb.big.points
    for pid in h.point_ids:
        pid = int(pid)
        if emb.lift_mask[pid]:
            labels[pid] = LABEL_Q
            continue
        tp = int(emb.tau[pid])
        line = make_subspace(emb.big.field,
                             [tuple(pts[pid]), tuple(pts[tp])])
        real = [p for p in subspace_points(emb.big, line) if emb.lift_mask[p]]
        if len(real) != q + 1:
            raise AnalysisError("point off the subgeometry must lie on a "
                                "unique real line")
        hits = sum(bool(bundle.small.point_mask[emb.small_of_big[b]])
                   for b in real)
        if hits not in by_count:
            raise AnalysisError(f"real line meets the quadric in {hits} "
                                "points; tangents cannot occur here")
        labels[pid] = by_count[hits]
    return labels


def orbit_masks(bundle, labels=None):
    labels = labels if labels is not None else orbit_labels(bundle)
    return {lab: labels == lab for lab in (LABEL_Q, LABEL_O, LABEL_E, LABEL_S)}


def expected_orbit_sizes(r, q):
    return {
        LABEL_Q: theta(r - 1, q),
        LABEL_O: q * (q ** r - 1) * (q ** (r - 2) - 1) // (q * q - 1),
        LABEL_E: q ** (r - 1) * (q ** r - 1) // 2,
        LABEL_S: q ** (r - 1) * (q ** r - 1) // 2,
    }


def line_type_table(r, q):
    """Signature (#Q, #O, #E, #S) on a line of the Hermitian variety, by
    type; only the types that exist for this r."""
    q2 = q * q
    table = {
        "i": (q + 1, q2 - q, 0, 0),
        "ii": (1, 0, q2, 0),
        "iii": (1, 0, 0, q2),
        "viii": (0, 2, (q2 - 1) // 2, (q2 - 1) // 2),
        "ix": (0, 0, (q2 + 1) // 2, (q2 + 1) // 2),
    }
    if r >= 6:
        table["iv"] = (1, q2, 0, 0)
        table["vi"] = (0, 1, q2, 0)
        table["vii"] = (0, 1, 0, q2)
    if r >= 8:
        table["v"] = (0, q2 + 1, 0, 0)
    return table


def expected_line_census(r, q):
    """Number of Hermitian lines of each type through a point, by orbit."""
    t = theta(r - 3, q)
    half_big = q ** (r - 3) * (q ** (r - 2) - 1) // 2
    half_small = q ** (r - 3) * (q ** (r - 4) - 1) // 2
    mid = q * (q ** (r - 2) - 1) * (q ** (r - 4) - 1) // (q * q - 1)
    deep = (q ** 3 * (q ** (r - 6) - 1) * (q ** (r - 4) - 1) // (q * q - 1)
            if r >= 6 else 0)
    census = {
        LABEL_Q: {"i": t, "iv": mid, "ii": half_big, "iii": half_big},
        LABEL_O: {"i": 1, "iv": q * q * (q ** (r - 4) - 1) // (q - 1),
                  "v": deep, "vi": half_small, "vii": half_small,
                  "viii": q ** (2 * r - 5)},
        LABEL_E: {"ii": t, "vi": mid, "viii": half_big, "ix": half_big},
        LABEL_S: {"iii": t, "vii": mid, "viii": half_big, "ix": half_big},
    }
    return {lab: {ty: n for ty, n in row.items() if n}
            for lab, row in census.items()}


def classify_h_lines(bundle, labels=None):
    """(lineset, list of type names) over all lines of the Hermitian variety."""
    labels = labels if labels is not None else orbit_labels(bundle)
    h = bundle.big_hermitian
    table = {sig: name
             for name, sig in line_type_table(bundle.r, bundle.q).items()}
    lset = ti_lines(h)
    types = []
    for pts in lset.per_line_points:
        c = Counter(labels[p] for p in pts)
        sig = (c[LABEL_Q], c[LABEL_O], c[LABEL_E], c[LABEL_S])
        if sig not in table:
            raise AnalysisError(f"line signature {sig} matches no type")
        types.append(table[sig])
    return lset, types


def line_census_check(bundle, labels=None):
    """Verifies the per-point, per-orbit census of Hermitian line types."""
    labels = labels if labels is not None else orbit_labels(bundle)
    lset, types = classify_h_lines(bundle, labels)
    through = {}
    for ty, pts in zip(types, lset.per_line_points):
        for p in pts:
            through.setdefault(p, Counter())[ty] += 1
    expected = expected_line_census(bundle.r, bundle.q)
    observed = {}
    passed = True
    for p, cnt in through.items():
        lab = labels[p]
        row = dict(cnt)
        observed.setdefault(lab, set()).add(tuple(sorted(row.items())))
        if row != expected[lab]:
            passed = False
    return {"expected": expected,
            "observed": {lab: sorted(map(dict, rows))
                         for lab, rows in sorted(observed.items())},
            "passed": passed}


def orbit_tightness_check(bundle, labels=None):
    """Each orbit is an i-tight set of the Hermitian companion, with the
    prescribed parameters; returns per-orbit TightReports."""
    labels = labels if labels is not None else orbit_labels(bundle)
    q, r = bundle.q, bundle.r
    params = {LABEL_Q: q + 1, LABEL_O: q ** (r - 1) - q,
              LABEL_E: (q ** (r + 1) - q ** (r - 1)) // 2,
              LABEL_S: (q ** (r + 1) - q ** (r - 1)) // 2}
    masks = orbit_masks(bundle, labels)
    return {lab: tight_check(bundle.big_hermitian, masks[lab], i=params[lab])
            for lab in params}


def quadric_orbit_tightness_check(bundle, labels=None):
    """The orbits Q, O and the complement O' inside the big quadric are
    i-tight sets of the big quadric with the prescribed parameters."""
    labels = labels if labels is not None else orbit_labels(bundle)
    q, r = bundle.q, bundle.r
    masks = orbit_masks(bundle, labels)
    big_q = bundle.big_bilinear
    # the Hermitian variety meets the big quadric exactly in Q ∪ O
    hq = bundle.big_hermitian.point_mask & big_q.point_mask
    if not np.array_equal(hq, masks[LABEL_Q] | masks[LABEL_O]):
        raise AnalysisError("big quadric ∩ Hermitian variety is not Q ∪ O")
    oprime = big_q.point_mask & ~hq
    reports = {
        LABEL_Q: tight_check(big_q, masks[LABEL_Q], i=q + 1),
        LABEL_O: tight_check(big_q, masks[LABEL_O], i=q ** (r - 1) - q),
        "O'": tight_check(big_q, oprime, i=q ** r - q ** (r - 1)),
    }
    return reports


# --- equivalence theorems -----------------------------------------------------

@dataclass
class EquivalenceReport:
    theorem: str
    left: object
    right: object
    left_passed: bool
    right_passed: bool

    @property
    def agree(self):
        return self.left_passed == self.right_passed

    @property
    def both(self):
        return self.left_passed and self.right_passed


def bar_two_char_params(m, r, q):
    """(k, alpha, beta) of the extended point set of an m-cover of PG(r,q)."""
    k = (q * q - q) * m * theta(r, q) // (q + 1) + theta(r, q)
    alpha = (q * q - q) * m * theta(r - 2, q) // (q + 1) + theta(r - 1, q)
    beta = (q * q - q) * m * theta(r - 2, q) // (q + 1) + theta(r - 2, q)
    return k, alpha, beta


def verify_equivalence(theorem, lineset, bundle=None, emb=None):
    """Verifies both sides of one of the named equivalences independently.

    '2.3': dual codim-2 cover of PG(r,q)  <->  extended set two-character
    '3.3': symplectic-type dual cover     <->  tight in the Hermitian companion
    '3.5': symplectic-type dual cover     <->  tight in the lifted symplectic
    '4.8': parabolic type I dual cover    <->  tight in the Hermitian companion
    '4.9': parabolic type II dual cover   <->  tight in the big quadric
    """
    from . import covers
    if theorem == "2.3":
        emb = emb or (bundle.emb if bundle else
                      build_embedding(lineset.ctx.r, lineset.ctx.q))
        prof = covers.cover_profile(lineset)
        left = covers.is_dual_projective(lineset, profile=prof)
        mask = bar_set(emb, lineset)
        k, alpha, beta = bar_two_char_params(prof.m, lineset.ctx.r, emb.q)
        if int(mask.sum()) != k:
            raise AnalysisError(f"extended set has size {int(mask.sum())}, "
                                f"expected {k}")
        assert char_residual(k, alpha, beta, lineset.ctx.r, emb.q ** 2) == 0
        right = two_char_check(emb.big, mask, alpha=alpha, beta=beta)
        return EquivalenceReport(theorem, left, right, left.passed, right.passed)
    if bundle is None:
        raise AnalysisError(f"theorem {theorem} needs a polarity bundle")
    prof = covers.cover_profile(lineset, ps=bundle.small)
    m = prof.m
    q = bundle.q
    mask = bar_set(bundle.emb, lineset)
    if theorem in ("3.3", "3.5"):
        left = covers.is_dual_symplectic(lineset, bundle.small, profile=prof)
        ambient = (bundle.big_hermitian if theorem == "3.3"
                   else bundle.big_bilinear)
        right = tight_check(ambient, mask, i=m * (q * q - q) + q + 1)
    elif theorem in ("4.8", "4.9"):
        variant = "I" if theorem == "4.8" else "II"
        left = covers.is_dual_parabolic(lineset, bundle.small, variant,
                                        profile=prof)
        ambient = (bundle.big_hermitian if theorem == "4.8"
                   else bundle.big_bilinear)
        right = tight_check(ambient, mask, i=m * (q * q - q) + q + 1)
    else:
        raise AnalysisError(f"unknown theorem key {theorem!r}")
    return EquivalenceReport(theorem, left, right, left.passed, right.passed)
