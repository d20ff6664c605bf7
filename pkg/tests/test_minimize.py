import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from upsharp.errors import SolverError, UsageError
from upsharp.minimize import (
    GridSpec,
    QuotientKind,
    VariationalProblem,
    eigen_crosscheck,
    explore_conjecture,
    hardy_correction_factor,
    minimize_quotient,
    mode_combined_bound,
    n1_quotient_check,
)
from upsharp.profiles import AnalyticProfile, MixtureProfile, SampledProfile
from fractions import Fraction


def problem(kind, n, k=0, size=256):
    return VariationalProblem.for_mode(kind, n, k, size=size)


def test_grid_spec_validation():
    with pytest.raises(UsageError):
        GridSpec(r_min=0.0)
    with pytest.raises(UsageError):
        GridSpec(size=32)
    with pytest.raises(UsageError):
        GridSpec(spacing="random")
    nodes = GridSpec(0.001, 10.0, 128, "geometric").nodes()
    assert nodes[0] == pytest.approx(0.001) and nodes[-1] == pytest.approx(10.0)
    assert np.all(np.diff(np.log(nodes)) > 0)


def test_solver_soundness_and_history(rng):
    p = problem("product_hup2", 3, 0)
    dq = p.assemble()
    init_vals = (dq.r + 0.3) * np.exp(-0.7 * dq.r**2)
    init = SampledProfile(dq.r, init_vals, "cd2")
    res = minimize_quotient(p, init=init, budget=2000, seed=5, restarts=1)
    q_init = dq.value(dq.init_from_profile(init))
    assert res.min_value <= q_init
    hist = np.asarray(res.history)
    assert np.all(np.diff(hist) <= 1e-12 * np.abs(hist[:-1]))
    assert res.history[0] == pytest.approx(q_init, rel=1e-12)


def test_degenerate_init_raises():
    p = problem("product_hup2", 3, 0)
    zeros = SampledProfile(p.assemble().r, np.zeros(256), "cd2")
    with pytest.raises(SolverError):
        minimize_quotient(p, init=zeros, restarts=1)


@pytest.mark.parametrize(
    "kind,n,k",
    [
        ("product_hup2", 2, 0),
        ("product_hup2", 3, 1),
        ("product_hyup2", 5, 0),
        ("classic_hup", 3, 0),
        ("classic_hyup", 3, 0),
    ],
)
def test_descent_agrees_with_eigen_pencil(kind, n, k):
    p = problem(kind, n, k)
    res = minimize_quotient(p, budget=6000, seed=3, restarts=2)
    eig = eigen_crosscheck(p)
    assert res.converged
    assert abs(res.min_value - eig) / eig < 0.01


def test_per_mode_product_constants(rng):
    # (N+2k+2)^2/4 and (N+2k+1)^2/4 within 2% across dimensions and degrees.
    for n in (2, 3, 5):
        for k in (0, 1, 2):
            res = minimize_quotient(problem("product_hup2", n, k), budget=6000, seed=1, restarts=2)
            target = (n + 2 * k + 2) ** 2 / 4
            assert abs(res.min_value - target) / target < 0.02, ("hup2", n, k)
            res = minimize_quotient(problem("product_hyup2", n, k), budget=6000, seed=1, restarts=2)
            target = (n + 2 * k + 1) ** 2 / 4
            assert abs(res.min_value - target) / target < 0.02, ("hyup2", n, k)


def test_calibration_from_random_init(rng):
    # Generic random radial trial profiles (centered Gaussian mixtures).
    def random_init(r):
        amps = rng.uniform(0.2, 1.0, 3)
        rates = rng.uniform(0.3, 2.0, 3)
        vals = sum(a * np.exp(-b * r**2) for a, b in zip(amps, rates))
        return SampledProfile(r, vals, "cd2")

    for kind, dims, target_fn in (
        ("classic_hup", (1, 2, 3, 5), lambda n: n * n / 4),
        ("classic_hyup", (2, 3, 5), lambda n: (n - 1) ** 2 / 4),
    ):
        for n in dims:
            p = problem(kind, n, 0)
            res = minimize_quotient(
                p, init=random_init(p.assemble().r), budget=12000, seed=11,
                restarts=3, noise=0.3,
            )
            target = target_fn(n)
            assert abs(res.min_value - target) / target < 0.02, (kind, n)


def test_dilation_invariance():
    # Same profile dilated by 2 on the grid dilated by 1/2: identical quotient.
    base = VariationalProblem(
        mode=problem("classic_hup", 3).mode,
        kind=QuotientKind.CLASSIC_HUP,
        grid=GridSpec(1e-3, 14.0, 256, "geometric"),
    )
    halved = VariationalProblem(
        mode=base.mode, kind=base.kind, grid=GridSpec(5e-4, 7.0, 256, "geometric")
    )
    values = {}
    for prob, beta in ((base, 1.0), (halved, 4.0)):
        dq = prob.assemble()
        x = dq.init_from_profile(AnalyticProfile("gaussian", 1.0, beta))
        values[beta] = dq.value(x)
    assert abs(values[1.0] - values[4.0]) / values[1.0] < 1e-10


def test_lower_bound_and_shrinking_excess(rng):
    # Random admissible profiles never dip below the constant (minus the
    # discretization budget), and the excess of a fixed family shrinks as the
    # grid refines.
    p = problem("classic_hup", 3)
    dq = p.assemble()
    target = 9 / 4
    for _ in range(20):
        amps = rng.uniform(-1.0, 1.0, 3)
        rates = rng.uniform(0.4, 1.5, 3)
        vals = sum(a * np.exp(-b * dq.r**2) for a, b in zip(amps, rates))
        if np.max(np.abs(vals)) < 0.05:
            continue
        x = vals[dq.free]
        assert dq.value(x) >= target * (1 - 0.02)

    excesses = []
    for size in (128, 256, 512):
        dq = problem("classic_hup", 3, size=size).assemble()
        x = dq.init_from_profile(AnalyticProfile("gaussian", 1.0, 1.0))
        excesses.append(abs(dq.value(x) - target))
    assert excesses[0] > excesses[1] > excesses[2]


def test_hardy_problem_bounds():
    p = problem("hardy_1d", 4, 0)
    res = minimize_quotient(p, budget=4000, seed=2, restarts=2)
    target = 4.0
    # not attained: the truncated-grid minimum sits above the constant
    assert target - 5e-3 <= res.min_value < target * 1.2


def test_combined_bound_matches_exact_scan():
    cb = mode_combined_bound("hup2", 2, k_max=4, size=256, restarts=2, budget=4000)
    assert cb.argmin_degree == 0
    assert abs(cb.combined - 4.0) < 0.03 * 4.0
    assert cb.exact_combined == 4
    for row in cb.rows:
        assert row.converged
        assert abs(row.eigen_value - row.min_value) / row.eigen_value < 0.01
        assert abs(row.bound - float(row.exact_bound)) < 0.03 * float(row.exact_bound)
    blob = cb.to_json()
    assert blob["exact_combined"] == {"num": 4, "den": 1, "float": 4.0}
    with pytest.raises(UsageError):
        mode_combined_bound("hup", 3)
    with pytest.raises(UsageError):
        mode_combined_bound("hup2", 3, k_max=2)


def test_hardy_correction_factors():
    assert hardy_correction_factor("hup2", 2, 0) == 1
    assert hardy_correction_factor("hup2", 2, 1) == Fraction(1, 2)
    assert hardy_correction_factor("hyup2", 3, 0) == 1  # degree 0: no Hardy step
    assert hardy_correction_factor("hyup2", 5, 1) == Fraction(16, 20) ** 2
    with pytest.raises(UsageError):
        hardy_correction_factor("hup", 3, 1)


def test_explore_conjecture_calibration_quick():
    report = explore_conjecture(
        5, k_max=2, resolutions=(96, 192), seed=0, restarts=1, budget=2500, trials=25
    )
    assert report.argmin_degree == 0
    assert abs(report.estimated_infimum - 9.0) / 9.0 < 0.03
    assert report.counterexample is None
    assert report.multi_mode_trials["min_quotient"] >= report.estimated_infimum * 0.99
    rows = report.csv_rows()
    assert all(len(row) == 3 for row in rows)
    assert {entry["size"] for entry in report.ladder} == {96, 192}
    assert "evidence" in report.status


def test_explore_conjecture_flags_low_dimension_candidate():
    report = explore_conjecture(
        2, k_max=1, resolutions=(96, 192), seed=0, restarts=1, budget=2500, trials=10
    )
    # The degree-1 sector sits well below the reference value in dimension 2;
    # the explorer reports it as a candidate with the profile attached.
    assert report.counterexample is not None
    assert report.counterexample["degree"] == 1
    assert report.counterexample["min_value"] < report.conjectured
    assert "grid" in report.counterexample["profile"]
    assert report.estimated_infimum < report.conjectured


def test_degree_one_hydrogen_trial_quotients_closed_form():
    # Independent evidence for the explorer finding: the degree-1 trial
    # profile (1+r)e^{-r} evaluated through exact moments. At N=2 the value
    # is the exact rational 225/256; above N=4 it exceeds the constant.
    from upsharp.quadrature import CLOSED_FORM
    from upsharp.seminorms import Form, FunctionalId, eval_mode_functional
    from upsharp.profiles import make_mode

    v = AnalyticProfile("hydrogen_second", 1.0, 1.0)

    def full_quotient(n):
        mode = make_mode(n, 1)
        lap = eval_mode_functional(FunctionalId.LAPLACIAN_ENERGY, mode, v, Form.REDUCED, CLOSED_FORM).value
        grad = eval_mode_functional(FunctionalId.GRAD_ENERGY, mode, v, Form.REDUCED, CLOSED_FORM).value
        cou = eval_mode_functional(FunctionalId.COULOMB_GRAD_ENERGY, mode, v, Form.REDUCED, CLOSED_FORM).value
        return lap * grad / cou**2

    assert_allclose(full_quotient(2), 225 / 256, rtol=1e-12)
    assert full_quotient(2) < 9 / 4
    assert full_quotient(3) < 4.0
    assert full_quotient(4) > 25 / 4
    assert full_quotient(5) > 9.0


def test_n1_quotient():
    g = AnalyticProfile("gaussian", 1.0, 2.0)
    assert_allclose(n1_quotient_check(g), 2.25, rtol=1e-12)
    dilated = AnalyticProfile("gaussian", 1.0, 8.0)
    assert_allclose(n1_quotient_check(dilated), n1_quotient_check(g), rtol=1e-12)
    mixture = MixtureProfile(
        (
            AnalyticProfile("monomial_cutoff", 0.8, 0.7, power=2.0),
            AnalyticProfile("gaussian", -0.2, 1.3),
        )
    )
    assert n1_quotient_check(mixture) >= 2.25 - 1e-3
    with pytest.raises(UsageError):
        n1_quotient_check(AnalyticProfile("exponential", 1.0, 1.0))
    with pytest.raises(UsageError):
        n1_quotient_check(AnalyticProfile("monomial_cutoff", 1.0, 1.0, power=1.0))


def test_minimization_result_json():
    p = problem("product_hup2", 3, 1, size=128)
    res = minimize_quotient(p, budget=1500, seed=9, restarts=1)
    blob = res.to_json()
    assert blob["kind"] == "product_hup2"
    assert blob["mode"] == {"N": 3, "k": 1}
    assert blob["grid"]["size"] == 128
    assert blob["target"] == pytest.approx(49 / 4)
    assert blob["argmin"]["scheme"] == "cd2"
    assert len(blob["history"]) >= 1
