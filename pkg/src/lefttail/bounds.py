"""Optimal left-tail bounds for moment-constrained nonnegative sums.

For a reference law eta with mean m and a moment order alpha, the bound
at threshold x is

    inf over w > x  of  E (w - eta)_+^alpha / (w - x)^alpha,

which dominates P(S <= x) for every sum S of independent nonnegative
random variables whose totals respect the budget of eta.  The infimum
has a three-regime closed description:

* x at or below the support bottom: the bound collapses to the exact
  atom mass P(eta = x), so there is zero slack at the left endpoint;
* x between the support bottom and the mean: the infimum is attained at
  the unique tangency point w_x where the residual
  E (w - eta)_+^(alpha-1) (eta - x) changes sign, and equals

      (E (w_x - eta)_+^(alpha-1))^alpha / (E (w_x - eta)_+^alpha)^(alpha-1);

* x at or above the mean: the bound is trivially 1.

Supported pairs: lattice families with alpha = 3 (where the residual is
piecewise quadratic in w and the tangency point has a closed form per
lattice cell) and the normal family with alpha in {2, 3}.  The alpha ->
infinity limit is the classical exponential (Chernoff) bound, available
in closed form for all three families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import laws
from .errors import (
    ConstraintError,
    NumericError,
    RegimeError,
    UnsupportedOrderError,
)
from .laws import Family, MomentBudget, ReferenceLaw

__all__ = [
    "Regime",
    "BoundResult",
    "regime_of",
    "lattice_tangency_root",
    "normal_tangency_root",
    "left_tail_bound",
    "exponential_bound",
    "exponential_tail_pair",
    "log_concave_constant",
    "cantelli_combined",
]

# Relative half-width of the band around the mean treated as the trivial
# regime, and the tolerance admitted on lattice cell membership of the
# tangency root.
_MEAN_BAND = 1e-12
_CELL_TOL = 1e-9
_MAX_SWEEP = 5_000_000


class Regime(str, Enum):
    BELOW_SUPPORT = "below-support"
    INTERIOR = "interior"
    AT_OR_ABOVE_MEAN = "at-or-above-mean"


@dataclass(frozen=True)
class BoundResult:
    """A left-tail bound value with its regime and tangency certificate.

    w_root is the tangency point (unit-lattice coordinates for lattice
    laws, original scale for the normal) and cell the lattice cell index
    with w_root in (cell, cell + 1]; both are None outside the interior
    regime.
    """

    value: float
    regime: Regime
    w_root: float | None = None
    cell: int | None = None


def _mean_cut(law: ReferenceLaw) -> float:
    return law.mean - _MEAN_BAND * max(1.0, abs(law.mean))


def regime_of(law: ReferenceLaw, x: float) -> Regime:
    """Which branch of the piecewise bound applies at threshold x."""
    if x >= _mean_cut(law):
        return Regime.AT_OR_ABOVE_MEAN
    if law.is_lattice and x / law.step <= law.lattice_support_min:
        return Regime.BELOW_SUPPORT
    return Regime.INTERIOR


# ---------------------------------------------------------------------------
# tangency solvers
# ---------------------------------------------------------------------------


def lattice_tangency_root(law: ReferenceLaw, x: float) -> tuple[int, float]:
    """Locate the tangency point of the alpha = 3 bound for a lattice law.

    Works in unit-lattice coordinates: x must lie strictly between the
    support bottom and the lattice mean lam.  On the cell (j, j+1] the
    residual is the quadratic a_j*w^2 - 2*b_j*w + c_j with truncated
    (K - x) moments a_j, b_j, c_j, so the sweep accumulates those
    moments one count at a time and stops at the first cell whose right
    endpoint makes the quadratic nonnegative.  The root inside that cell
    is then explicit: the greater quadratic root when a_j != 0, else the
    solution of the linear remainder 2*b*w = c.

    Returns:
        (cell, root) with root in (cell, cell + 1] up to a 1e-9
        right-endpoint tolerance.
    """
    if not law.is_lattice:
        raise ConstraintError("lattice tangency requires a lattice family")
    lam = law.lam
    if not (law.lattice_support_min < x < lam):
        raise RegimeError(
            f"threshold {x} outside the interior regime ({law.lattice_support_min}, {lam})"
        )
    s0 = s1 = s2 = s3 = 0.0
    k = 0
    while True:
        pk = laws.lattice_pmf(law, k)
        s0 += pk
        kp = k * pk
        s1 += kp
        s2 += k * kp
        s3 += k * k * kp
        a = s1 - x * s0
        b = s2 - x * s1
        c = s3 - x * s2
        edge = k + 1.0
        if s0 > 0.0 and a * edge * edge - 2.0 * b * edge + c >= 0.0:
            j = k
            break
        k += 1
        if k > _MAX_SWEEP:
            raise NumericError(
                f"tangency sweep exceeded {_MAX_SWEEP} cells; x = {x} is too close to the mean {lam}"
            )

    # the sweep guarantees a sign change strictly inside (j, j+1], but
    # cancellation in the root formulas can round a root sitting at a
    # cell edge to just outside it, so membership is tested with the
    # cell tolerance on both ends and the root clamped back in
    lo = float(j) - _CELL_TOL * max(1.0, float(j))
    hi = (j + 1.0) * (1.0 + _CELL_TOL) + _CELL_TOL
    if a != 0.0:
        disc = max(b * b - a * c, 0.0)
        rt = math.sqrt(disc)
        roots = sorted(((b - rt) / a, (b + rt) / a))
        # the residual changes sign exactly once inside the cell; prefer
        # the greater root when both land there
        inside = [r for r in roots if lo < r <= hi]
        if not inside:
            raise NumericError(
                f"tangency root escaped its lattice cell: roots {roots}, cell ({j}, {j + 1}]"
            )
        root = inside[-1]
    else:
        if b == 0.0:
            raise NumericError(f"degenerate quadratic in cell ({j}, {j + 1}]")
        root = c / (2.0 * b)
        if not (lo < root <= hi):
            raise NumericError(
                f"tangency root escaped its lattice cell: root {root}, cell ({j}, {j + 1}]"
            )
    root = min(max(root, math.nextafter(float(j), math.inf)), j + 1.0)
    return j, root


def normal_tangency_root(law: ReferenceLaw, alpha: int, x: float) -> float:
    """Tangency point of the normal-law bound, by bracketing bisection.

    The residual is strictly negative at w = x and eventually positive,
    so the bracket starts at x + sqrt(s) and doubles its width until the
    sign flips, then bisects to a relative width of 1e-12.
    """
    if law.family is not Family.NORMAL:
        raise ConstraintError("this solver handles the normal family only")
    if alpha not in (2, 3):
        raise UnsupportedOrderError(f"normal bounds support alpha in {{2,3}}, got {alpha}")
    if x >= _mean_cut(law):
        raise RegimeError(f"threshold {x} is not below the mean {law.mean}")

    def residual(w: float) -> float:
        return laws.tangency_residual(law, alpha, x, w)

    step = math.sqrt(law.s)
    lo = x
    hi = x + step
    for _ in range(200):
        if residual(hi) > 0.0:
            break
        lo = hi
        step *= 2.0
        hi = x + step
    else:
        raise NumericError(f"failed to bracket the tangency point above x = {x}")
    while hi - lo > 1e-12 * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        if residual(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# the optimal bound
# ---------------------------------------------------------------------------


def _supported(law: ReferenceLaw, alpha: int) -> None:
    if law.is_lattice:
        if alpha != 3:
            raise UnsupportedOrderError(
                f"lattice families support alpha = 3 only, got {alpha}"
            )
    elif alpha not in (2, 3):
        raise UnsupportedOrderError(
            f"the normal family supports alpha in {{2,3}}, got {alpha}"
        )


def _lattice_atom_mass(law: ReferenceLaw, u: float) -> float:
    """P(count = u): the pmf when u sits on the lattice, else 0."""
    k = round(u)
    if abs(u - k) <= 1e-12 * max(1.0, abs(u)):
        return laws.lattice_pmf(law, int(k))
    return 0.0


def _ratio_power(low: float, high: float, alpha: int) -> float:
    """low^alpha / high^(alpha-1) without intermediate under/overflow."""
    if low <= 0.0 or high <= 0.0:
        return 0.0
    if min(low, high) > 1e-80 and max(low, high) < 1e80:
        return low**alpha / high ** (alpha - 1)
    return math.exp(alpha * math.log(low) - (alpha - 1) * math.log(high))


def left_tail_bound(law: ReferenceLaw, alpha: int, x: float) -> BoundResult:
    """Optimal moment bound on P(S <= x), threshold x on the original scale.

    Dispatches on the regime of x.  Lattice laws are rescaled to the
    unit lattice first; the bound value itself is scale invariant, so no
    back-conversion is needed.
    """
    _supported(law, alpha)
    regime = regime_of(law, x)
    if regime is Regime.AT_OR_ABOVE_MEAN:
        return BoundResult(1.0, regime)
    if regime is Regime.BELOW_SUPPORT:
        return BoundResult(_lattice_atom_mass(law, x / law.step), regime)
    if law.is_lattice:
        cell, root = lattice_tangency_root(law, x / law.step)
        pm = laws.lattice_pmf_array(law, cell)
        diff = root - np.arange(cell + 1, dtype=np.float64)
        np.clip(diff, 0.0, None, out=diff)
        low = float((diff ** (alpha - 1) * pm).sum())
        high = float((diff**alpha * pm).sum())
        value = _ratio_power(low, high, alpha)
        return BoundResult(min(1.0, value), regime, w_root=root, cell=cell)
    root = normal_tangency_root(law, alpha, x)
    low = laws.normal_positive_part_moment(law.budget, root, alpha - 1)
    high = laws.normal_positive_part_moment(law.budget, root, alpha)
    value = _ratio_power(low, high, alpha)
    return BoundResult(min(1.0, value), regime, w_root=root)


# ---------------------------------------------------------------------------
# exponential (alpha -> infinity) bounds
# ---------------------------------------------------------------------------


def exponential_bound(law: ReferenceLaw, x: float) -> float:
    """Closed-form exponential left-tail bound, the alpha -> infinity limit.

    With z = (x - m)/sqrt(s) and lam = m^2/s:

        normal    exp(-z^2/2)
        Poisson   exp(-lam*((1 + u)*log(1 + u) - u)),  u = z/sqrt(lam)
        binomial  (lam/t)^t * ((n - lam)/(n - t))^(n - t),  t = lam + z*sqrt(lam)

    evaluated in log space.  For the lattice families z = -sqrt(lam)
    puts x at the support bottom; the formulas extend there by
    continuity (exp(-lam) and (1 - lam/n)^n) and vanish below it.
    """
    z = law.budget.z_of_x(x)
    if z >= 0.0:
        return 1.0
    if law.family is Family.NORMAL:
        return math.exp(-0.5 * z * z)
    lam = law.lam
    rl = math.sqrt(lam)
    if law.family is Family.BINOMIAL and law.p == 1.0:
        # degenerate point mass at the mean: no mass below it
        return 0.0
    if abs(z + rl) <= 1e-9:
        if law.family is Family.POISSON:
            return math.exp(-lam)
        return math.exp(law.n * math.log1p(-lam / law.n))
    if z < -rl:
        return 0.0
    u = z / rl
    if law.family is Family.POISSON:
        return math.exp(-lam * ((1.0 + u) * math.log1p(u) - u))
    n = law.n
    t = lam * (1.0 + u)
    exponent = t * math.log(lam / t) + (n - t) * math.log((n - lam) / (n - t))
    return math.exp(exponent)


def exponential_tail_pair(x: float, budget: MomentBudget) -> tuple[float, float]:
    """Classical exponential bound pair for P(S <= x), 0 < x <= m.

    Returns (poisson_form, gaussian_form):

        poisson_form   exp(-(m^2/s) * (1 + (x/m)*log(x/(e*m))))
        gaussian_form  exp(-(x - m)^2 / (2*s))

    The Poisson form coincides with exponential_bound of the scaled
    Poisson law and never exceeds the Gaussian form on this range.
    """
    if not (0.0 < x <= budget.m):
        raise ConstraintError(
            f"the exponential pair needs 0 < x <= m, got x = {x}, m = {budget.m}"
        )
    lam = budget.lam
    ratio = x / budget.m
    poisson_form = math.exp(-lam * (1.0 + ratio * (math.log(ratio) - 1.0)))
    gaussian_form = math.exp(-((x - budget.m) ** 2) / (2.0 * budget.s))
    return poisson_form, gaussian_form


def log_concave_constant(alpha: float) -> float:
    """Gamma(alpha + 1) * (e/alpha)^alpha, the log-concave comparison constant.

    For laws with a log-concave left tail, the optimal moment bound of
    order alpha exceeds the true tail probability by at most this
    factor; alpha = 2 gives e^2/2.
    """
    if not (alpha > 0.0 and math.isfinite(alpha)):
        raise ConstraintError(f"alpha must be finite and > 0, got {alpha}")
    return math.exp(math.lgamma(alpha + 1.0) + alpha * (1.0 - math.log(alpha)))


_C20 = math.exp(2.0) / 2.0


def cantelli_combined(z: float) -> float:
    """min(1, 1/(1 + z^2), (e^2/2)*Phi(z)) for standardized deviations z <= 0.

    The middle term is the one-sided Chebyshev bound; the last combines
    the order-2 normal bound with the log-concave comparison constant
    and wins for z below about -1.19.
    """
    return min(1.0, 1.0 / (1.0 + z * z), _C20 * laws.std_normal_cdf(z))
