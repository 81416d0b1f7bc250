"""Command-line driver: verify line-set files, build the named
constructions to disk, or run the whole verification battery.

Exit codes: 0 all requested checks pass, 1 a verification fails,
2 usage or parse error.  Reports are deterministic JSON (sorted keys,
sorted histograms); timing goes to stderr only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import constructions as cons
from .analysis import (bar_set, bar_two_char_params, make_bundle,
                       tight_check, two_char_check)
from .covers import (CoverError, check_lemma1, check_lemma4, cover_profile,
                     is_dual_parabolic, is_dual_projective,
                     is_dual_symplectic, parse_lineset, write_lineset)
from .polar import HERMITIAN, PARABOLIC, SYMPLECTIC, build_embedding, make_polar
from .projective import GeometryError, matrix_inverse
from .suite import run_battery

CHECKS = ("cover", "lemma1", "lemma4", "dual-proj", "dual-symp",
          "dual-par-I", "dual-par-II", "two-char", "tight-H", "tight-W",
          "tight-Q")

_COMPAT = {
    "cover": ("projective", "symplectic", "parabolic"),
    "lemma1": ("projective",),
    "dual-proj": ("projective",),
    "two-char": ("projective",),
    "dual-symp": ("symplectic",),
    "tight-H": ("symplectic", "parabolic"),
    "tight-W": ("symplectic",),
    "lemma4": ("parabolic",),
    "dual-par-I": ("parabolic",),
    "dual-par-II": ("parabolic",),
    "tight-Q": ("parabolic",),
}


def _hist(counter):
    return [[int(k), int(v)] for k, v in sorted(counter.items())]


def _pair_hist(items):
    return [[list(k), int(v)] for k, v in sorted(items)]


def _emit(report, out):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _spectrum_entry(spec):
    return {"x_in": spec.x_in, "x_out": spec.x_out,
            "hist_in": _hist(spec.hist_in), "hist_out": _hist(spec.hist_out)}


def _tight_entry(rep):
    return {"ambient": rep.ambient, "i": rep.i,
            "expected_in": rep.expected_in, "expected_out": rep.expected_out,
            "hist_in": _hist(rep.hist_in), "hist_out": _hist(rep.hist_out)}


def cmd_verify(args):
    try:
        lineset, kind = parse_lineset(args.file)
    except (CoverError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    for c in checks:
        if c not in CHECKS:
            print(f"error: unknown check {c!r}", file=sys.stderr)
            return 2
        if kind not in _COMPAT[c]:
            print(f"error: check {c!r} is incompatible with kind {kind!r}",
                  file=sys.stderr)
            return 2
    r, q = lineset.ctx.r, lineset.ctx.q
    ps = None
    if kind == "symplectic":
        ps = make_polar(SYMPLECTIC, r, q)
    elif kind == "parabolic":
        ps = make_polar(PARABOLIC, r, q)
    geometry = ps.describe() if ps else {
        "kind": kind, "r": r, "q": q,
        "modulus": list(lineset.ctx.field.modulus)}
    verdicts, params, spectra = {}, {}, {}
    bundle = None

    def get_bundle():
        nonlocal bundle
        if bundle is None:
            bkind = SYMPLECTIC if kind == "symplectic" else PARABOLIC
            bundle = make_bundle(bkind, r, q)
        return bundle

    try:
        profile = cover_profile(lineset, ps=ps)
    except CoverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for c in checks:
        t0 = time.perf_counter()
        if c == "cover":
            verdicts[c] = profile.m is not None and profile.divisibility_ok
            params[c] = {"m": profile.m, "size": profile.size}
        elif c == "lemma1":
            rep = check_lemma1(lineset, profile=profile)
            verdicts[c] = rep["passed"]
            params[c] = {"m": rep["m"], "size": rep["size"],
                         "hyperplane_count": rep["hyperplane_count"]}
            spectra[c] = _pair_hist(rep["xy_histogram"])
        elif c == "lemma4":
            rep = check_lemma4(lineset, ps, profile=profile)
            verdicts[c] = rep["passed"]
            params[c] = {"m": rep["m"], "size": rep["size"],
                         "hyperplane_counts": rep["hyperplane_counts"]}
            spectra[c] = _pair_hist(rep["xy_histogram"])
        elif c == "dual-proj":
            spec = is_dual_projective(lineset, profile=profile)
            verdicts[c] = spec.passed
            spectra[c] = _spectrum_entry(spec)
        elif c == "dual-symp":
            spec = is_dual_symplectic(lineset, ps, profile=profile)
            verdicts[c] = spec.passed
            spectra[c] = _spectrum_entry(spec)
        elif c in ("dual-par-I", "dual-par-II"):
            spec = is_dual_parabolic(lineset, ps, c.rsplit("-", 1)[1],
                                     profile=profile)
            verdicts[c] = spec.passed
            spectra[c] = _spectrum_entry(spec)
        elif c == "two-char":
            emb = build_embedding(r, q)
            if profile.m is None:
                print("error: two-char needs an m-cover", file=sys.stderr)
                return 2
            k, alpha, beta = bar_two_char_params(profile.m, r, q)
            mask = bar_set(emb, lineset)
            rep = two_char_check(emb.big, mask, alpha=alpha, beta=beta)
            verdicts[c] = rep.passed and rep.size == k
            params[c] = {"k": k, "alpha": alpha, "beta": beta}
            spectra[c] = _hist(rep.histogram)
        elif c in ("tight-H", "tight-W", "tight-Q"):
            if profile.m is None:
                print(f"error: {c} needs an m-cover", file=sys.stderr)
                return 2
            b = get_bundle()
            ambient = b.big_hermitian if c == "tight-H" else b.big_bilinear
            i = args.i if args.i is not None \
                else profile.m * (q * q - q) + q + 1
            rep = tight_check(ambient, bar_set(b.emb, lineset), i=i)
            verdicts[c] = rep.passed
            params[c] = {"i": i}
            spectra[c] = _tight_entry(rep)
        print(f"{c}: {'pass' if verdicts[c] else 'FAIL'} "
              f"({time.perf_counter() - t0:.2f}s)", file=sys.stderr)
    report = {"command": ["verify", args.file, "--checks", args.checks],
              "geometry": geometry, "verdicts": verdicts,
              "params": params, "spectra": spectra,
              "passed": all(verdicts.values())}
    _emit(report, args.out)
    return 0 if report["passed"] else 1


def write_pointset(path, ctx, mask, kind="points"):
    with open(path, "w") as fh:
        fh.write(f"q={ctx.q} r={ctx.r} kind={kind}\n")
        for pid in np.flatnonzero(np.asarray(mask, dtype=bool)):
            fh.write(",".join(str(int(c)) for c in ctx.points[pid]) + "\n")


def parse_pointset(path, ctx):
    with open(path) as fh:
        body = [s.strip() for s in fh if s.strip()
                and not s.strip().startswith("#")]
    fields = dict(tok.split("=", 1) for tok in body[0].split())
    if int(fields["q"]) != ctx.q or int(fields["r"]) != ctx.r:
        raise CoverError("context does not match the point-set header")
    mask = np.zeros(ctx.num_points, dtype=bool)
    for text in body[1:]:
        mask[ctx.point_id([int(c) for c in text.split(",")])] = True
    return mask


def _build_singer(args, out_dir):
    cyc = cons.singer_cycle(args.r, args.q)
    orbits = cons.singer_line_orbits(cyc)
    files = []
    for idx, o in enumerate(orbits):
        path = os.path.join(out_dir,
                            f"singer-r{args.r}q{args.q}-orbit{idx}.lns")
        write_lineset(path, o, kind="projective")
        files.append({"path": os.path.basename(path), "size": len(o)})
    return {"modulus": list(cyc.modulus),
            "orbit_sizes": sorted(len(o) for o in orbits),
            "files": files}, True


def _build_hexagon(args, out_dir):
    model = cons.hexagon_lines(args.q)
    if args.q % 2 == 0:
        proj = cons.hexagon_project_even(model)
        path = os.path.join(out_dir, f"hexagon-w5{args.q}.lns")
        write_lineset(path, proj, kind="symplectic")
        files = [{"path": os.path.basename(path), "size": len(proj)}]
    else:
        path = os.path.join(out_dir, f"hexagon-q{args.q}.lns")
        write_lineset(path, model.canonical, kind="parabolic")
        files = [{"path": os.path.basename(path), "size": len(model.canonical)}]
    return {"bullets": model.bullets, "files": files}, all(
        model.bullets.values())


def _build_dye(args, out_dir):
    bundle = cons.dye_build(args.n, args.q)
    F, O1, O2 = cons.dye_classify_lines(bundle)
    small = bundle.small
    Ff = small.ctx.field
    S = cons.symplectic_basis(Ff, small.gram)
    T = matrix_inverse(Ff, S)
    target = make_polar(SYMPLECTIC, small.ctx.r, args.q)
    files = []
    for name, ls in (("F", F), ("O1", O1), ("O2", O2)):
        canonical = cons.transform_lineset(ls, target.ctx, T)
        cover_profile(canonical, ps=target)
        path = os.path.join(out_dir, f"dye-{name}.lns")
        write_lineset(path, canonical, kind="symplectic")
        files.append({"path": os.path.basename(path), "size": len(ls)})
    mask, _, _, rreps = cons.dye_R(bundle)
    rpath = os.path.join(out_dir, "dye-R.pts")
    write_pointset(rpath, bundle.emb.big, mask)
    manifest = {
        "n": args.n, "q": args.q,
        "small_modulus": list(small.ctx.field.modulus),
        "big_modulus": list(bundle.emb.big.field.modulus),
        "pencil_grams": [[[int(x) for x in row] for row in w.gram]
                         for w in bundle.pencil],
        "hermitian_grams": [[[int(x) for x in row] for row in h.gram]
                            for h in bundle.hermitian],
        "canonical_frame": [[int(x) for x in row] for row in T],
        "files": files + [{"path": "dye-R.pts", "size": int(mask.sum())}],
        "R_tight": [r.passed for r in rreps],
    }
    with open(os.path.join(out_dir, "dye-manifest.json"), "w") as fh:
        fh.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest, all(r.passed for r in rreps)


def _build_simplex(args, out_dir):
    model = cons.simplex_tight(args.config)
    path = os.path.join(out_dir, f"simplex-{args.config}.pts")
    write_pointset(path, model.hermitian.ctx, model.mask)
    return {"config": args.config, "points": int(model.mask.sum()),
            "i": model.report.i,
            "files": [{"path": os.path.basename(path),
                       "size": int(model.mask.sum())}]}, model.report.passed


def cmd_build(args):
    out_dir = args.out_dir
    os.makedirs(out_dir, exist_ok=True)
    builders = {"singer": _build_singer, "hexagon": _build_hexagon,
                "dye": _build_dye, "simplex": _build_simplex}
    try:
        detail, passed = builders[args.what](args, out_dir)
    except (cons.ConstructionError, GeometryError, CoverError) as exc:
        print(f"build invariant failed: {exc}", file=sys.stderr)
        return 1
    report = {"command": ["build", args.what], "detail": detail,
              "passed": bool(passed)}
    _emit(report, args.out)
    return 0 if passed else 1


def cmd_paper_suite(args):
    t0 = time.perf_counter()
    results, passed = run_battery(scale=args.scale)
    for res in results:
        print(f"criterion {res['criterion']} ({res['name']}): "
              f"{'pass' if res['passed'] else 'FAIL'}", file=sys.stderr)
    print(f"total {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    report = {"command": ["paper-suite", "--scale", args.scale],
              "scale": args.scale, "criteria": results,
              "passed": bool(passed)}
    _emit(report, args.out)
    return 0 if passed else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="fgver",
        description="Exact verification of line covers of finite projective "
                    "and polar spaces.")
    parser.add_argument("--threads", type=int,
                        default=int(os.environ.get("FGVER_THREADS", 0)) or None,
                        help="cap worker parallelism (FGVER_THREADS); "
                             "results are independent of the setting")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("verify", help="run checks against a line-set file")
    p.add_argument("file")
    p.add_argument("--checks", required=True,
                   help="comma-separated subset of: " + ",".join(CHECKS))
    p.add_argument("--i", type=int, default=None,
                   help="override the tight parameter")
    p.add_argument("--out", default=None, help="write the JSON report here")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("build", help="construct a named family to disk")
    p.add_argument("what", choices=("singer", "hexagon", "dye", "simplex"))
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--config", choices=cons.SIMPLEX_CONFIGS, default="H44-L1")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("paper-suite", help="run the full verification battery")
    p.add_argument("--scale", choices=("small", "full-desk"),
                   default="full-desk")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_paper_suite)

    args = parser.parse_args(argv)
    if args.threads is not None and args.threads > 0:
        # cap BLAS parallelism; the outputs never depend on this
        os.environ.setdefault("OMP_NUM_THREADS", str(args.threads))
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
