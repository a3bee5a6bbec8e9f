"""Degree estimation: expected signed counts, scalar enumeration, stability."""

import math

import numpy as np
import pytest

import helpers
from tzgraph import (
    BoundsInapplicableError,
    Confidence,
    DegenerateRootError,
    Kind,
    ProblemSpec,
    SolverConfig,
    degree_single_vertex,
    estimate_degree,
    residual,
    verify_homotopy_invariance,
)

CFG = SolverConfig()


def constant_spec(kind, n, h1, h2, A=1.0, B=1.0):
    return ProblemSpec(kind, np.full(n, h1), np.full(n, h2), A, B)


def test_classic_negative_h2_degree_one():
    rng = np.random.default_rng(307)
    for _ in range(8):
        n = int(rng.integers(2, 7))
        g = helpers.random_graph(rng, n)
        spec = helpers.classic_spec(rng, n)
        report = estimate_degree(spec, g, CFG, n_starts=24)
        assert report.degree == 1
        assert report.exhaustive_confidence is Confidence.HEURISTIC


def test_classic_positive_h2_short_circuits_to_zero():
    rng = np.random.default_rng(311)
    g = helpers.random_graph(rng, 5)
    spec = helpers.classic_positive_spec(rng, 5)
    report = estimate_degree(spec, g, CFG)
    assert report.degree == 0
    assert report.solutions == ()
    assert report.exhaustive_confidence is Confidence.PROVEN


def test_generalized_degree_zero():
    rng = np.random.default_rng(313)
    for _ in range(6):
        n = int(rng.integers(2, 6))
        g = helpers.random_graph(rng, n)
        spec = helpers.generalized_spec(rng, n)
        report = estimate_degree(spec, g, CFG, n_starts=48)
        assert report.degree == 0


def test_reported_roots_recertify():
    rng = np.random.default_rng(317)
    g = helpers.random_graph(rng, 4)
    spec = helpers.branch1_spec(rng, 4)
    report = estimate_degree(spec, g, CFG, n_starts=32)
    assert report.solutions, "expected at least the zero root"
    for root in report.solutions:
        assert np.max(np.abs(residual(spec, g, root))) < CFG.tol
        assert np.max(np.abs(root)) < report.radius


def test_degree_stable_across_seeds():
    rng = np.random.default_rng(331)
    for maker in (helpers.classic_spec, helpers.generalized_spec, helpers.branch1_spec):
        n = int(rng.integers(2, 5))
        g = helpers.random_graph(rng, n)
        spec = maker(rng, n)
        degrees = {
            estimate_degree(spec, g, SolverConfig(seed=s), n_starts=24).degree
            for s in range(5)
        }
        assert len(degrees) == 1


def test_degree_invariant_under_radius_doubling():
    rng = np.random.default_rng(337)
    g = helpers.random_graph(rng, 3)
    spec = helpers.branch1_spec(rng, 3)
    base = estimate_degree(spec, g, CFG, n_starts=32)
    doubled = estimate_degree(spec, g, CFG, n_starts=32, radius=2.0 * base.radius)
    assert base.degree == doubled.degree


def test_degenerate_root_raises():
    # on unit-weight K2, A*h1 - B*h2 = -2 exactly cancels lambda1 = 2, so the
    # Jacobian at the zero root is singular
    g = helpers.k2()
    spec = constant_spec(Kind.GENERALIZED, 2, 1.0, 3.0)
    with pytest.raises(DegenerateRootError):
        estimate_degree(spec, g, CFG, n_starts=8)


def test_mixed_sign_h2_needs_explicit_radius():
    g = helpers.k2()
    spec = ProblemSpec(Kind.CLASSIC, np.ones(2), np.array([-1.0, 0.5]), 1.0, 1.0)
    with pytest.raises(BoundsInapplicableError):
        estimate_degree(spec, g, CFG)
    report = estimate_degree(spec, g, CFG, n_starts=16, radius=3.0)
    assert report.radius == 3.0


# ---------------------------------------------------------------------------
# single-vertex exhaustive enumeration


def test_scalar_classic_monotone_root():
    spec = constant_spec(Kind.CLASSIC, 1, 1.0, -1.0)
    report = degree_single_vertex(spec)
    assert report.degree == 1
    assert len(report.solutions) == 1
    assert abs(report.solutions[0][0]) < 1e-10
    assert report.exhaustive_confidence is Confidence.PROVEN


def test_scalar_generalized_two_roots_cancel():
    spec = constant_spec(Kind.GENERALIZED, 1, 1.0, 3.0)
    report = degree_single_vertex(spec)
    roots = sorted(float(r[0]) for r in report.solutions)
    assert len(roots) == 2
    assert abs(roots[0]) < 1e-10
    assert roots[1] == pytest.approx(math.log(3.0) / 3.0, abs=1e-9)
    assert report.degree == 0


def test_scalar_classic_positive_h2_no_roots():
    spec = constant_spec(Kind.CLASSIC, 1, 1.0, 1.0)
    report = degree_single_vertex(spec)
    assert report.degree == 0
    assert report.solutions == ()


def test_scalar_agreement_heuristic_vs_proven():
    rng = np.random.default_rng(347)
    g1 = helpers.build_graph({"ids": ["o"], "mu": [float(rng.uniform(0.5, 2.0))], "edges": []})
    for trial in range(200):
        if trial % 2 == 0:
            spec = helpers.classic_spec(rng, 1)
        else:
            spec = helpers.generalized_spec(rng, 1)
        proven = degree_single_vertex(spec)
        heuristic = estimate_degree(spec, g1, CFG, n_starts=6)
        assert heuristic.degree == proven.degree


# ---------------------------------------------------------------------------
# homotopy invariance


def test_homotopy_invariance_classic():
    rng = np.random.default_rng(349)
    g = helpers.random_graph(rng, 3)
    spec = helpers.classic_spec(rng, 3)
    assert verify_homotopy_invariance(spec, g, CFG, n_starts=24)


def test_homotopy_invariance_generalized():
    rng = np.random.default_rng(353)
    g = helpers.random_graph(rng, 3)
    spec = helpers.generalized_spec(rng, 3)
    assert verify_homotopy_invariance(spec, g, CFG, n_starts=32)


def test_homotopy_invariance_single_vertex_matches_proven():
    rng = np.random.default_rng(359)
    g1 = helpers.build_graph({"ids": ["o"], "mu": [1.3], "edges": []})
    spec = helpers.generalized_spec(rng, 1)
    assert verify_homotopy_invariance(spec, g1, CFG, n_starts=16)
    assert estimate_degree(spec, g1, CFG, n_starts=16).degree == degree_single_vertex(spec).degree
