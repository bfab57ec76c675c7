"""Closed-form bound path: tangency roots, regimes, exponential limits.

The decimal constants were frozen from standalone recomputations (dense
w grids plus high-precision quadrature) that share no code with the
package; agreement here is the point of the test.
"""

import math

import numpy as np
import pytest

from lefttail import (
    BoundResult,
    ConstraintError,
    MomentBudget,
    Regime,
    RegimeError,
    UnsupportedOrderError,
    cantelli_combined,
    exponential_bound,
    exponential_tail_pair,
    lattice_pmf,
    lattice_tangency_root,
    left_tail_bound,
    log_concave_constant,
    normal_tangency_root,
    regime_of,
    scaled_binomial,
    scaled_poisson,
    shifted_normal,
    tangency_residual,
)
from lefttail.laws import std_normal_cdf


# ---------------------------------------------------------------------------
# lattice tangency
# ---------------------------------------------------------------------------


def test_lattice_root_frozen_poisson():
    law = scaled_poisson(1.0, 1.0)
    cell, root = lattice_tangency_root(law, 0.5)
    assert cell == 4
    assert root == pytest.approx(4.029021603180704, rel=1e-12)
    result = left_tail_bound(law, 3, 0.5)
    assert result.regime is Regime.INTERIOR
    assert result.cell == 4
    assert result.w_root == root
    assert result.value == pytest.approx(0.8165476702873911, rel=1e-12)


def test_lattice_root_kills_the_residual():
    rng = np.random.default_rng(13)
    for _ in range(40):
        lam = float(rng.uniform(0.6, 25.0))
        if rng.random() < 0.5:
            law = scaled_poisson(lam, lam)
        else:
            n = int(rng.integers(int(math.ceil(lam)) + 1, 8 * int(math.ceil(lam))))
            law = scaled_binomial(lam, lam, n)
        x = float(rng.uniform(0.05, 0.95)) * law.lam
        cell, root = lattice_tangency_root(law, x)
        assert cell < root <= cell + 1.0 + 1e-9
        # the law is already on the unit lattice here (step 1), so the
        # residual can be probed at unit-coordinate points directly
        assert law.step == pytest.approx(1.0, rel=1e-12)
        at_root = tangency_residual(law, 3, x, root)
        left_end = tangency_residual(law, 3, x, float(cell)) if cell > 0 else 0.0
        right_end = tangency_residual(law, 3, x, cell + 1.0)
        scale = max(abs(left_end), abs(right_end), 1e-30)
        assert abs(at_root) <= 1e-9 * scale
        # sign structure: negative strictly between x and the root,
        # positive beyond it
        if x < root - 0.02:
            assert tangency_residual(law, 3, x, root - 0.01) < 0.0
        assert tangency_residual(law, 3, x, root + 0.5) > 0.0


def test_lattice_root_domain_errors():
    law = scaled_poisson(2.0, 2.0)
    with pytest.raises(RegimeError):
        lattice_tangency_root(law, 0.0)
    with pytest.raises(RegimeError):
        lattice_tangency_root(law, law.lam)
    with pytest.raises(ConstraintError):
        lattice_tangency_root(shifted_normal(0.0, 1.0), -0.5)


# ---------------------------------------------------------------------------
# normal tangency
# ---------------------------------------------------------------------------


def test_normal_root_frozen():
    law = shifted_normal(0.0, 1.0)
    root = normal_tangency_root(law, 2, -1.0)
    assert root == pytest.approx(0.48105838703462833, abs=1e-8)
    result = left_tail_bound(law, 2, -1.0)
    assert result.regime is Regime.INTERIOR
    assert result.w_root == root
    assert result.value == pytest.approx(0.4623467277570676, rel=1e-10)
    assert left_tail_bound(law, 3, -1.0).value == pytest.approx(
        0.5044880770874502, rel=1e-10
    )


def test_normal_root_residual_and_monotonicity():
    rng = np.random.default_rng(404)
    for _ in range(300):
        m = float(rng.uniform(-2.0, 4.0))
        s = float(rng.uniform(0.3, 9.0))
        x = m - float(rng.uniform(0.3, 4.0)) * math.sqrt(s)
        alpha = int(rng.choice((2, 3)))
        law = shifted_normal(m, s)
        root = normal_tangency_root(law, alpha, x)
        assert root > x
        res = abs(tangency_residual(law, alpha, x, root))
        assert res <= 1e-9 * (1.0 + abs(x) + math.sqrt(s))
    # the tangency point moves up with the threshold
    law = shifted_normal(1.0, 2.0)
    for alpha in (2, 3):
        prev = -math.inf
        for x in np.linspace(-6.0, 0.9, 40):
            root = normal_tangency_root(law, alpha, float(x))
            assert root >= prev - 1e-10
            prev = root


def test_normal_root_domain_errors():
    law = shifted_normal(0.0, 1.0)
    with pytest.raises(RegimeError):
        normal_tangency_root(law, 2, 0.0)
    with pytest.raises(UnsupportedOrderError):
        normal_tangency_root(law, 1, -1.0)
    with pytest.raises(ConstraintError):
        normal_tangency_root(scaled_poisson(1.0, 1.0), 2, 0.5)


# ---------------------------------------------------------------------------
# regimes and exact endpoints
# ---------------------------------------------------------------------------


def test_regime_classification():
    law = scaled_poisson(2.0, 2.0)
    assert regime_of(law, -0.5) is Regime.BELOW_SUPPORT
    assert regime_of(law, 0.0) is Regime.BELOW_SUPPORT
    assert regime_of(law, 1.0) is Regime.INTERIOR
    assert regime_of(law, 2.0) is Regime.AT_OR_ABOVE_MEAN
    assert regime_of(law, 5.0) is Regime.AT_OR_ABOVE_MEAN
    normal = shifted_normal(0.0, 1.0)
    assert regime_of(normal, -40.0) is Regime.INTERIOR
    assert regime_of(normal, 0.0) is Regime.AT_OR_ABOVE_MEAN


def test_bound_is_exact_at_the_support_bottom():
    # at x = 0 the infimum collapses to the atom mass, with zero slack
    binom = scaled_binomial(10.0, 10.0, 11)
    res = left_tail_bound(binom, 3, 0.0)
    assert res.regime is Regime.BELOW_SUPPORT
    assert res.w_root is None and res.cell is None
    assert res.value == pytest.approx(11.0**-11, rel=1e-14)

    poisson = scaled_poisson(10.0, 10.0)
    assert left_tail_bound(poisson, 3, 0.0).value == math.exp(-10.0)

    # strictly below the support, on the lattice or off it, mass is zero
    assert left_tail_bound(poisson, 3, -3.0).value == 0.0
    assert left_tail_bound(poisson, 3, -0.4).value == 0.0
    # just above the support bottom the regime flips to interior and the
    # bound must still dominate the atom below the threshold
    above = left_tail_bound(binom, 3, 0.4)
    assert above.regime is Regime.INTERIOR
    assert above.value >= 11.0**-11


def test_bound_trivial_at_and_above_the_mean():
    for law in (scaled_poisson(3.0, 2.0), shifted_normal(1.0, 4.0)):
        alpha = 3 if law.is_lattice else 2
        at = left_tail_bound(law, alpha, law.mean)
        assert at.value == 1.0
        assert at.regime is Regime.AT_OR_ABOVE_MEAN
        assert left_tail_bound(law, alpha, law.mean + 5.0).value == 1.0


def test_degenerate_binomial_bound():
    law = scaled_binomial(2.0, 1.0, 4)  # point mass at the mean
    res = left_tail_bound(law, 3, 1.0)
    assert res.value == 0.0
    assert res.regime is Regime.BELOW_SUPPORT
    assert left_tail_bound(law, 3, 2.0).value == 1.0
    assert exponential_bound(law, 1.0) == 0.0


def test_unsupported_order_rejection():
    with pytest.raises(UnsupportedOrderError):
        left_tail_bound(scaled_poisson(1.0, 1.0), 2, 0.5)
    with pytest.raises(UnsupportedOrderError):
        left_tail_bound(scaled_binomial(2.0, 2.0, 5), 4, 0.5)
    with pytest.raises(UnsupportedOrderError):
        left_tail_bound(shifted_normal(0.0, 1.0), 1, -1.0)
    with pytest.raises(UnsupportedOrderError):
        left_tail_bound(shifted_normal(0.0, 1.0), 4, -1.0)


def test_bound_is_nondecreasing_in_the_threshold():
    rng = np.random.default_rng(5)
    for _ in range(10):
        lam = float(rng.uniform(1.0, 15.0))
        for law, alpha in (
            (scaled_poisson(lam, lam), 3),
            (scaled_binomial(lam, lam, int(math.ceil(lam)) + 3), 3),
            (shifted_normal(lam, lam), 2),
        ):
            xs = np.linspace(0.0, law.mean, 25)
            prev = 0.0
            for x in xs:
                val = left_tail_bound(law, alpha, float(x)).value
                assert 0.0 <= val <= 1.0
                assert val >= prev * (1.0 - 1e-10)
                prev = val


def test_bound_is_scale_invariant():
    # b*S satisfies the (b*m, b^2*s) budget exactly when S satisfies
    # (m, s), and the bound value only sees z = (x - m)/sqrt(s)
    rng = np.random.default_rng(42)
    for i in range(150):
        lam = float(rng.uniform(1.0, 12.0))
        frac = float(rng.uniform(0.1, 0.8))
        b = float(rng.uniform(0.2, 5.0))
        kind = i % 3
        if kind == 0:
            law = scaled_poisson(lam, lam)
            other = scaled_poisson(b * lam, b * b * lam)
            alpha = 3
        elif kind == 1:
            n = int(rng.integers(int(math.ceil(lam)) + 1, 8 * int(math.ceil(lam))))
            law = scaled_binomial(lam, lam, n)
            other = scaled_binomial(b * lam, b * b * lam, n)
            alpha = 3
        else:
            a = float(rng.uniform(-2.0, 2.0))
            law = shifted_normal(lam, lam)
            other = shifted_normal(a + b * lam, b * b * lam)
            alpha = int(rng.choice((2, 3)))
        x = lam - frac * lam
        base = left_tail_bound(law, alpha, x).value
        moved = left_tail_bound(
            other, alpha, (a + b * x) if kind == 2 else b * x
        ).value
        assert moved == pytest.approx(base, rel=1e-12)


# ---------------------------------------------------------------------------
# exponential limit
# ---------------------------------------------------------------------------


def test_exponential_bound_normal_closed_form():
    law = shifted_normal(0.0, 1.0)
    assert exponential_bound(law, -1.0) == pytest.approx(math.exp(-0.5), rel=1e-15)
    assert exponential_bound(law, 0.0) == 1.0
    assert exponential_bound(law, 3.0) == 1.0


def test_exponential_bound_lattice_boundary_values():
    poisson = scaled_poisson(4.0, 4.0)
    assert exponential_bound(poisson, 0.0) == pytest.approx(math.exp(-4.0), rel=1e-12)
    assert exponential_bound(poisson, -1e-6) == 0.0
    binom = scaled_binomial(10.0, 10.0, 11)
    assert exponential_bound(binom, 0.0) == pytest.approx(
        lattice_pmf(binom, 0), rel=1e-12
    )
    # the interior formula meets the boundary value continuously
    eps = 1e-6 * poisson.mean
    assert exponential_bound(poisson, eps) == pytest.approx(
        math.exp(-4.0), rel=1e-3
    )


def test_exponential_bound_dominates_order_three():
    rng = np.random.default_rng(21)
    for _ in range(60):
        lam = float(rng.uniform(1.0, 20.0))
        n = int(rng.integers(int(math.ceil(lam)) + 1, 8 * int(math.ceil(lam))))
        x = lam - float(rng.uniform(0.05, 0.95)) * lam
        for law in (
            scaled_poisson(lam, lam),
            scaled_binomial(lam, lam, n),
            shifted_normal(lam, lam),
        ):
            alphas = (3,) if law.is_lattice else (2, 3)
            cap = exponential_bound(law, x)
            for alpha in alphas:
                assert left_tail_bound(law, alpha, x).value <= cap + 1e-9


def test_exponential_pair_identity_and_order():
    budget = MomentBudget(2.0, 3.0)
    assert exponential_tail_pair(budget.m, budget) == (1.0, 1.0)
    law = scaled_poisson(budget.m, budget.s)
    for frac in (0.05, 0.2, 0.5, 0.8, 0.99):
        x = frac * budget.m
        poisson_form, gaussian_form = exponential_tail_pair(x, budget)
        assert poisson_form == pytest.approx(exponential_bound(law, x), rel=1e-12)
        assert poisson_form <= gaussian_form * (1.0 + 1e-12)
    # x -> 0 limit is exp(-lam)
    tiny, _ = exponential_tail_pair(1e-300, budget)
    assert tiny == pytest.approx(math.exp(-budget.lam), rel=1e-12)
    with pytest.raises(ConstraintError):
        exponential_tail_pair(0.0, budget)
    with pytest.raises(ConstraintError):
        exponential_tail_pair(budget.m * 1.0000001, budget)


# ---------------------------------------------------------------------------
# comparison constants
# ---------------------------------------------------------------------------


def test_log_concave_constant_values():
    assert log_concave_constant(1.0) == pytest.approx(math.e, rel=1e-14)
    assert log_concave_constant(2.0) == pytest.approx(math.e**2 / 2.0, rel=1e-14)
    assert log_concave_constant(3.0) == pytest.approx(2.0 * math.e**3 / 9.0, rel=1e-14)
    with pytest.raises(ConstraintError):
        log_concave_constant(0.0)
    with pytest.raises(ConstraintError):
        log_concave_constant(math.inf)


def test_cantelli_combined_values():
    assert cantelli_combined(0.0) == 1.0
    assert cantelli_combined(-1.0) == 0.5
    assert cantelli_combined(-3.0) == pytest.approx(0.0049872361417754195, rel=1e-13)
    assert cantelli_combined(-3.0) == pytest.approx(
        math.e**2 / 2.0 * std_normal_cdf(-3.0), rel=1e-14
    )
    grid = np.linspace(-8.0, 0.0, 200)
    vals = [cantelli_combined(float(z)) for z in grid]
    assert all(a <= b * (1.0 + 1e-12) for a, b in zip(vals, vals[1:]))


def test_log_concave_cap_on_the_normal_order_two_bound():
    # P2(normal) <= (e^2/2) Phi(z): the comparison constant is exactly
    # the worst-case ratio of the order-2 bound to the true normal tail
    law = shifted_normal(0.0, 1.0)
    cap = log_concave_constant(2.0)
    for z in np.linspace(-8.0, -1e-3, 120):
        val = left_tail_bound(law, 2, float(z)).value
        assert val <= cap * std_normal_cdf(float(z)) * (1.0 + 1e-12)


def test_bound_result_is_immutable():
    res = BoundResult(0.5, Regime.INTERIOR)
    with pytest.raises(AttributeError):
        res.value = 0.4
