"""Acceptance gate: one test per built-in criterion.

Each test runs the corresponding self-test criterion and reports a single
pass/fail line; failure messages carry the offending check and values.
"""

import pytest

from dynheights.acceptance import run_criterion


def _check(number):
    result = run_criterion(number)
    detail = "; ".join(result.failures)
    assert result.passed, (
        f"criterion {result.number} ({result.name}) failed "
        f"{len(result.failures)}/{result.checks} checks: {detail}")


def test_criterion_01_golden_constants():
    _check(1)


def test_criterion_02_mahler_cross_method():
    _check(2)


def test_criterion_03_two_variable_oracle():
    _check(3)


def test_criterion_04_canonical_height_properties():
    _check(4)


def test_criterion_05_good_reduction():
    _check(5)


def test_criterion_06_preperiodicity():
    _check(6)


def test_criterion_07_graph_exactness():
    _check(7)


def test_criterion_08_equidistribution():
    _check(8)


def test_criterion_09_level_curve_energy():
    _check(9)


def test_criterion_10_exception_scan():
    _check(10)
