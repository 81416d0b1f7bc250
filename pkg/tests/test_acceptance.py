"""Acceptance battery: one test (one pass/fail line under pytest -v) per
criterion, sharing built artifacts through a module-scoped context so the
expensive bundles are constructed once.  Budgets are wall-clock upper bounds.
"""

import time

import pytest

from fgver import suite

_CTX = {}


def _run(fn, budget, **kw):
    t0 = time.perf_counter()
    res = fn(_CTX, **kw)
    elapsed = time.perf_counter() - t0
    assert res["passed"], res
    assert elapsed < budget, f"{res['name']} took {elapsed:.1f}s"
    return res


def test_criterion_01_cover_counting_identities():
    _run(suite.criterion_1, 5)


def test_criterion_02_dual_covers_and_two_character_extensions():
    _run(suite.criterion_2, 30)


def test_criterion_03_symplectic_spread_tight_extension():
    _run(suite.criterion_3, 5)


def test_criterion_04_even_hexagon_projection():
    _run(suite.criterion_4, 60)


def test_criterion_05_odd_hexagon_dual_cover():
    _run(suite.criterion_5, 600)


def test_criterion_06_quadric_orbit_machinery():
    _run(suite.criterion_6, 120)


def test_criterion_07_field_reduction_spread_bundle():
    _run(suite.criterion_7, 900)


def test_criterion_08_self_polar_simplex_tight_sets():
    _run(suite.criterion_8, 600, scale="full-desk")


def test_criterion_09_line_count_identity():
    _run(suite.criterion_9, 10)


def test_criterion_10_property_suites():
    _run(suite.criterion_10, 300)
