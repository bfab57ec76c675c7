"""Brute-force and Monte Carlo machinery that polices the fast paths."""

import math

import numpy as np
import pytest

from lefttail import (
    AtomLaw,
    ConstraintError,
    MomentBudget,
    MomentFunction,
    adaptive_simpson,
    empirical_tail,
    extremal_moment,
    extremal_sum,
    grid_infimum,
    left_tail_bound,
    mixture_sum,
    normal_moment_quadrature,
    normal_positive_part_moment,
    random_three_atom,
    run_verification,
    sample_sum,
    scaled_poisson,
    shifted_normal,
    two_point_law,
    SumSpec,
)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------


def test_adaptive_simpson_known_integrals():
    assert adaptive_simpson(lambda t: t * t, 0.0, 1.0) == pytest.approx(
        1.0 / 3.0, rel=1e-12
    )
    assert adaptive_simpson(math.sin, 0.0, math.pi) == pytest.approx(2.0, rel=1e-12)
    density = lambda t: math.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)
    assert adaptive_simpson(density, -12.0, 0.0) == pytest.approx(0.5, rel=1e-10)
    assert adaptive_simpson(math.sin, 1.0, 1.0) == 0.0
    assert adaptive_simpson(math.sin, 2.0, 1.0) == 0.0


def test_quadrature_matches_normal_closed_forms():
    budget = MomentBudget(1.0, 4.0)
    for alpha in (1, 2, 3):
        for w in (-3.0, 0.0, 1.0, 2.5, 9.0):
            direct = normal_positive_part_moment(budget, w, alpha)
            integrated = normal_moment_quadrature(budget, w, alpha)
            assert integrated == pytest.approx(direct, rel=1e-9, abs=1e-280)


# ---------------------------------------------------------------------------
# grid infimum
# ---------------------------------------------------------------------------


def test_grid_infimum_brackets_the_closed_form():
    law = scaled_poisson(1.0, 1.0)
    exact = left_tail_bound(law, 3, 0.5).value
    grid = grid_infimum(law, 3, 0.5, steps=20000)
    # a grid minimum can only overshoot the true infimum
    assert grid >= exact - 1e-9
    assert grid == pytest.approx(exact, rel=1e-6)

    normal = shifted_normal(0.0, 1.0)
    exact_n = left_tail_bound(normal, 2, -1.0).value
    grid_n = grid_infimum(normal, 2, -1.0, steps=20000)
    assert grid_n >= exact_n - 1e-9
    assert grid_n == pytest.approx(exact_n, rel=1e-4)


def test_grid_infimum_order_one_smoke():
    # alpha = 1 has no closed-form counterpart here; the grid value must
    # still be a probability-shaped number
    val = grid_infimum(shifted_normal(0.0, 1.0), 1, -1.0, steps=4000)
    assert 0.0 < val < 1.0


def test_grid_infimum_above_the_mean():
    law = scaled_poisson(4.0, 4.0)
    with pytest.raises(ConstraintError):
        grid_infimum(law, 3, 4.5)
    # with an explicit horizon the ratio tends to 1 from above
    val = grid_infimum(law, 3, 4.5, w_max=4000.0)
    assert 1.0 < val < 1.01


def test_grid_infimum_argument_errors():
    law = scaled_poisson(1.0, 1.0)
    with pytest.raises(ConstraintError):
        grid_infimum(law, 4, 0.5)
    with pytest.raises(ConstraintError):
        grid_infimum(law, 3, 0.5, w_max=0.5)


# ---------------------------------------------------------------------------
# extremal two-point comparisons
# ---------------------------------------------------------------------------


def test_moment_function_shapes():
    f = MomentFunction(2.0, 2)
    assert f(0.0) == 4.0
    assert f(1.5) == pytest.approx(0.25, rel=1e-15)
    assert f(2.0) == 0.0
    assert f(5.0) == 0.0
    np.testing.assert_allclose(
        f.of_array(np.array([0.0, 1.5, 2.0, 5.0])), [4.0, 0.25, 0.0, 0.0], rtol=1e-15
    )


def test_extremal_moment_values():
    assert extremal_moment(1.0, 2.0, MomentFunction(1.0, 2)) == pytest.approx(
        0.5, rel=1e-14
    )
    # kernels vanishing on [0, inf) integrate to zero
    assert extremal_moment(1.0, 2.0, MomentFunction(0.0, 2)) == 0.0
    assert extremal_moment(1.0, 2.0, MomentFunction(-3.0, 2)) == 0.0


def test_extremal_moment_is_attained_by_the_two_point_law():
    for m, s in ((1.0, 2.0), (0.7, 3.1), (4.0, 17.0)):
        y = two_point_law(m, s)
        atoms = AtomLaw((0.0, y.high), (1.0 - y.p_high, y.p_high))
        for w_frac in (0.3, 1.0, 1.7):
            f = MomentFunction(w_frac * y.high, 2)
            direct = sum(p * f(a) for a, p in zip(atoms.atoms, atoms.probs))
            assert direct == pytest.approx(extremal_moment(m, s, f), rel=1e-14)


def test_random_three_atom_meets_its_budget():
    rng = np.random.default_rng(606)
    for _ in range(300):
        m = float(rng.uniform(0.2, 6.0))
        s = m * m * float(rng.uniform(1.0, 8.0))
        law = random_three_atom(m, s, rng)
        assert all(a >= 0.0 for a in law.atoms)
        assert sum(law.probs) == pytest.approx(1.0, abs=1e-9)
        assert law.mean == pytest.approx(m, rel=1e-12)
        assert law.second_moment <= s * (1.0 + 1e-12)


def test_random_three_atom_edge_cases():
    rng = np.random.default_rng(1)
    degenerate = random_three_atom(2.0, 4.0, rng)
    assert degenerate.atoms == (2.0,)
    assert degenerate.probs == (1.0,)
    with pytest.raises(ConstraintError):
        random_three_atom(2.0, 3.0, rng)


def test_atom_law_validation():
    with pytest.raises(ConstraintError):
        AtomLaw((0.0, 1.0), (1.0,))
    with pytest.raises(ConstraintError):
        AtomLaw((-0.1, 1.0), (0.5, 0.5))
    with pytest.raises(ConstraintError):
        AtomLaw((0.0, 1.0), (-0.2, 1.2))
    with pytest.raises(ConstraintError):
        AtomLaw((0.0, 1.0), (0.5, 0.4))


# ---------------------------------------------------------------------------
# sums of independent summands
# ---------------------------------------------------------------------------


def test_extremal_sum_totals():
    spec = extremal_sum(3.0, 6.0, 4)
    assert spec.n == 4
    assert spec.kind == "extremal"
    assert sum(p.mean for p in spec.summands) == pytest.approx(3.0, rel=1e-12)
    assert sum(p.second_moment for p in spec.summands) == pytest.approx(6.0, rel=1e-12)


def test_mixture_sum_totals():
    rng = np.random.default_rng(77)
    for _ in range(20):
        m = float(rng.uniform(1.0, 10.0))
        s = m * m * float(rng.uniform(1.1, 2.5))
        n = int(rng.integers(2, 12))
        spec = mixture_sum(m, s, n, rng)
        assert spec.kind == "mixture"
        assert spec.n == n
        assert sum(p.mean for p in spec.summands) >= m * (1.0 - 1e-9)
        assert sum(p.second_moment for p in spec.summands) <= s * (1.0 + 1e-9)


def test_sum_spec_validation():
    part = AtomLaw((0.0, 1.0), (0.5, 0.5))  # mean 1/2, second moment 1/2
    with pytest.raises(ConstraintError):
        SumSpec((), 1.0, 1.0, "empty")
    with pytest.raises(ConstraintError):
        SumSpec((part,), 2.0, 4.0, "mean-deficit")
    with pytest.raises(ConstraintError):
        SumSpec((AtomLaw((2.0,), (1.0,)),), 2.0, 1.0, "second-excess")


def test_sample_sum_is_deterministic_per_seed():
    spec = extremal_sum(2.0, 8.0, 4)
    first = sample_sum(spec, 500, 99)
    again = sample_sum(spec, 500, 99)
    other = sample_sum(spec, 500, 100)
    np.testing.assert_array_equal(first, again)
    assert not np.array_equal(first, other)
    assert first.min() >= 0.0
    with pytest.raises(ConstraintError):
        sample_sum(spec, 0, 99)


def test_sample_sum_moments_and_atom_mass():
    spec = extremal_sum(2.0, 8.0, 4)
    sample = sample_sum(spec, 20000, 99)
    # Var(S) = s - sum of squared summand means = 8 - 4*(1/4) = 7
    stderr = math.sqrt(7.0 / sample.size)
    assert abs(float(sample.mean()) - 2.0) <= 4.0 * stderr
    # each summand vanishes with probability 1 - (m/n)^2/(s/n) = 7/8
    est, se = empirical_tail(sample, 0.0)
    assert abs(est - 0.875**4) <= 4.0 * se


def test_empirical_tail_edges():
    sample = np.array([1.0, 2.0, 3.0])
    assert empirical_tail(sample, 0.0) == (0.0, 0.0)
    assert empirical_tail(sample, 5.0) == (1.0, 0.0)
    est, se = empirical_tail(sample, 2.0)
    assert est == pytest.approx(2.0 / 3.0, rel=1e-15)
    assert se == pytest.approx(math.sqrt((2.0 / 3.0) * (1.0 / 3.0) / 3.0), rel=1e-12)
    with pytest.raises(ConstraintError):
        empirical_tail(np.array([]), 0.0)


# ---------------------------------------------------------------------------
# the full verification battery
# ---------------------------------------------------------------------------


def test_run_verification_all_green():
    results = run_verification(seed=3, grid_steps=4000)
    names = [r.name for r in results]
    assert len(names) == len(set(names))
    assert len(results) == 15
    for res in results:
        assert res.ok, f"{res.name}: {res.detail} (worst {res.worst})"
        assert res.checked > 0
