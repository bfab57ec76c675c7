"""Reference laws sharing a first/second moment budget.

A sum of n independent nonnegative random variables with total mean at
least m and total second moment at most s is dominated, on its left
tail, by bounds computed against one of three reference laws matched to
the budget (m, s):

* scaled binomial   (s/m) * Binomial(n, m^2/(n*s)),
* scaled Poisson    (s/m) * Poisson(m^2/s), the limit of the binomial
  as n grows,
* shifted normal    m + Z*sqrt(s) with Z standard normal.

The lattice families live on the grid {0, d, 2d, ...} with step
d = s/m.  All lattice arithmetic in this package runs in unit-lattice
coordinates (counts k = value/d); conversion to the original scale
happens once, at the API boundary, through the scaling identity for the
bounds.  Writing lam = m^2/s, the unit-lattice skeletons are plain
Poisson(lam) and Binomial(n, lam/n) laws with mean lam.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

import numpy as np
from scipy.special import gammaln

from .errors import (
    ConstraintError,
    UnsupportedFamilyError,
    UnsupportedOrderError,
)

__all__ = [
    "Family",
    "MomentBudget",
    "TwoPointLaw",
    "ReferenceLaw",
    "two_point_law",
    "scaled_binomial",
    "scaled_poisson",
    "shifted_normal",
    "std_normal_cdf",
    "std_normal_pdf",
    "lattice_pmf",
    "lattice_pmf_array",
    "lattice_cdf",
    "truncation_index",
    "PartialMomentTriple",
    "partial_moment_triple",
    "partial_moment_sweep",
    "positive_part_moment",
    "normal_positive_part_moment",
    "tangency_residual",
    "tilted_mean",
]

_SQRT2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def std_normal_cdf(t: float) -> float:
    """Standard normal cdf via the complementary error function."""
    return 0.5 * math.erfc(-t / _SQRT2)


def std_normal_pdf(t: float) -> float:
    return math.exp(-0.5 * t * t) / _SQRT_2PI


# ---------------------------------------------------------------------------
# budgets and law descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentBudget:
    """First/second moment budget of a nonnegative sum.

    Attributes:
        m: total mean.  Lattice reference laws additionally need m > 0;
            the shifted normal accepts any finite value.
        s: total second moment, strictly positive.
        n: number of summands, or None when unbounded.  A finite n
            forces s >= m^2/n; single random variables need s >= m^2.
    """

    m: float
    s: float
    n: int | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.m):
            raise ConstraintError(f"mean budget m must be finite, got {self.m}")
        if not (math.isfinite(self.s) and self.s > 0.0):
            raise ConstraintError(
                f"second moment budget s must be finite and > 0, got {self.s}"
            )
        if self.n is not None:
            if self.n != int(self.n) or self.n < 1:
                raise ConstraintError(f"summand count n must be a positive integer, got {self.n}")
            if self.n * self.s < (1.0 - 1e-12) * self.m * self.m:
                raise ConstraintError(
                    f"infeasible budget: s = {self.s} is below m^2/n = "
                    f"{self.m * self.m / self.n}; n nonnegative summands with "
                    f"total mean m cannot have total second moment below m^2/n"
                )

    @property
    def step(self) -> float:
        """Lattice step d = s/m."""
        return self.s / self.m

    @property
    def lam(self) -> float:
        """Unit-lattice mean lam = m^2/s."""
        return self.m * self.m / self.s

    def z_of_x(self, x: float) -> float:
        return (x - self.m) / math.sqrt(self.s)

    def x_of_z(self, z: float) -> float:
        return self.m + z * math.sqrt(self.s)


@dataclass(frozen=True)
class TwoPointLaw:
    """The extremal two-point law with atoms {0, s/m} and P(s/m) = m^2/s.

    This law attains mean exactly m and second moment exactly s, and it
    maximizes E f(X) over nonnegative X with E X >= m, E X^2 <= s for
    every convex nonincreasing f with a convex nonincreasing derivative.
    """

    high: float
    p_high: float

    @property
    def mean(self) -> float:
        return self.high * self.p_high

    @property
    def second_moment(self) -> float:
        return self.high * self.high * self.p_high


def two_point_law(m: float, s: float) -> TwoPointLaw:
    if not (m > 0.0 and math.isfinite(m)):
        raise ConstraintError(f"m must be finite and > 0, got {m}")
    if not (s > 0.0 and math.isfinite(s)):
        raise ConstraintError(f"s must be finite and > 0, got {s}")
    if s < m * m * (1.0 - 1e-12):
        raise ConstraintError(
            f"infeasible single-variable budget: s = {s} < m^2 = {m * m}"
        )
    return TwoPointLaw(high=s / m, p_high=min(1.0, m * m / s))


class Family(str, Enum):
    BINOMIAL = "binomial"
    POISSON = "poisson"
    NORMAL = "normal"


@dataclass(frozen=True)
class ReferenceLaw:
    """One of the three reference laws for a given budget."""

    family: Family
    budget: MomentBudget

    def __post_init__(self) -> None:
        if self.family is not Family.NORMAL and self.budget.m <= 0.0:
            raise ConstraintError(
                f"lattice families need a mean budget m > 0, got {self.budget.m}"
            )
        if self.family is Family.BINOMIAL and self.budget.n is None:
            raise ConstraintError("the binomial family needs a finite summand count n")
        if self.family is not Family.BINOMIAL and self.budget.n is not None:
            raise ConstraintError(
                f"the {self.family.value} family takes no summand count"
            )

    @property
    def m(self) -> float:
        return self.budget.m

    @property
    def s(self) -> float:
        return self.budget.s

    @property
    def n(self) -> int | None:
        return self.budget.n

    @property
    def step(self) -> float:
        return self.budget.step

    @property
    def lam(self) -> float:
        return self.budget.lam

    @property
    def mean(self) -> float:
        return self.budget.m

    @property
    def is_lattice(self) -> bool:
        return self.family is not Family.NORMAL

    @property
    def p(self) -> float:
        """Binomial success probability lam/n, clamped at 1."""
        if self.family is not Family.BINOMIAL:
            raise UnsupportedFamilyError("success probability exists for the binomial family only")
        return min(1.0, self.lam / self.n)

    @property
    def lattice_support_min(self) -> int:
        """Smallest count carrying positive mass, in unit-lattice coordinates."""
        if not self.is_lattice:
            raise UnsupportedFamilyError("the normal family has no lattice support")
        if self.family is Family.BINOMIAL and self.p == 1.0:
            return self.n
        return 0

    @property
    def support_infimum(self) -> float:
        """Bottom of the support on the original scale (-inf for normal)."""
        if not self.is_lattice:
            return -math.inf
        return self.step * self.lattice_support_min


def scaled_binomial(m: float, s: float, n: int) -> ReferenceLaw:
    return ReferenceLaw(Family.BINOMIAL, MomentBudget(m, s, n))


def scaled_poisson(m: float, s: float) -> ReferenceLaw:
    return ReferenceLaw(Family.POISSON, MomentBudget(m, s))


def shifted_normal(m: float, s: float) -> ReferenceLaw:
    return ReferenceLaw(Family.NORMAL, MomentBudget(m, s))


# ---------------------------------------------------------------------------
# lattice pmf and partial moments (unit-lattice coordinates throughout)
# ---------------------------------------------------------------------------


def lattice_pmf(law: ReferenceLaw, k: int) -> float:
    """Probability of count k for a lattice law, evaluated in log space.

    Log-gamma arithmetic keeps the evaluation stable for lam and n into
    the millions; individual masses may still underflow to 0.0 in the
    far tails, which is the best double precision can represent.
    """
    if not law.is_lattice:
        raise UnsupportedFamilyError("pmf requires a lattice family")
    if k < 0 or k != int(k):
        return 0.0
    lam = law.lam
    if law.family is Family.POISSON:
        return math.exp(k * math.log(lam) - lam - math.lgamma(k + 1.0))
    n, p = law.n, law.p
    if k > n:
        return 0.0
    if p == 1.0:
        return 1.0 if k == n else 0.0
    logpmf = (
        math.lgamma(n + 1.0)
        - math.lgamma(k + 1.0)
        - math.lgamma(n - k + 1.0)
        + k * math.log(p)
        + (n - k) * math.log1p(-p)
    )
    return math.exp(logpmf)


def lattice_pmf_array(law: ReferenceLaw, kmax: int) -> np.ndarray:
    """Vector of pmf values for counts 0..kmax (zeros beyond the support)."""
    if not law.is_lattice:
        raise UnsupportedFamilyError("pmf requires a lattice family")
    if kmax < 0:
        return np.zeros(0)
    k = np.arange(kmax + 1, dtype=np.float64)
    lam = law.lam
    if law.family is Family.POISSON:
        return np.exp(k * math.log(lam) - lam - gammaln(k + 1.0))
    n, p = law.n, law.p
    if p == 1.0:
        out = np.zeros(kmax + 1)
        if kmax >= n:
            out[n] = 1.0
        return out
    top = min(kmax, n)
    k = k[: top + 1]
    # log of the falling factorial n*(n-1)*...*(n-k+1), accumulated one
    # factor at a time: the difference gammaln(n+1) - gammaln(n-k+1)
    # loses nine digits to cancellation once n reaches 1e6, while the
    # cumulative sum keeps the absolute log error near k*log(n)*eps
    log_fall = np.concatenate(([0.0], np.cumsum(np.log(float(n) - np.arange(top)))))
    logpmf = log_fall - gammaln(k + 1.0) + k * math.log(p) + (n - k) * math.log1p(-p)
    out = np.exp(logpmf)
    if kmax > n:
        out = np.concatenate((out, np.zeros(kmax - n)))
    return out


def lattice_cdf(law: ReferenceLaw, j: int) -> float:
    """P(count <= j), exact up to summation of the pmf."""
    if j < 0:
        return 0.0
    if law.family is Family.BINOMIAL:
        j = min(j, law.n)
    return float(lattice_pmf_array(law, j).sum())


def _tail_mass_cap(law: ReferenceLaw, j: int) -> float:
    """Geometric bound on the pmf mass strictly beyond index j > mean.

    Past the mean the ratio pmf(k+1)/pmf(k) is nonincreasing, so it
    stays below its value r at k = j and the neglected mass is at most
    pmf(j) * r / (1 - r).
    """
    if law.family is Family.POISSON:
        r = law.lam / (j + 1.0)
    else:
        r = (law.n - j) * law.p / ((j + 1.0) * (1.0 - law.p))
    if r >= 1.0:
        return math.inf
    return lattice_pmf(law, j) * r / (1.0 - r)


def truncation_index(law: ReferenceLaw) -> int:
    """Index at which lattice sums may stop.

    The cut starts past lam + 12*sqrt(lam) and grows until the
    geometric tail bound at the cut drops below 1e-16 (the binomial
    stops at n regardless).  The criterion is deliberately a bound on
    the neglected mass, not a demand that the summed pmf reach 1:
    rounding over a few hundred exp/lgamma evaluations can leave the
    total a few ulp short of 1 no matter how far the cut moves, and for
    binomials with huge n the cut must stay near the mean anyway, since
    summing the full support just piles up rounding error.
    """
    if not law.is_lattice:
        raise UnsupportedFamilyError("truncation applies to lattice families")
    lam = law.lam
    j = int(math.ceil(lam + 12.0 * math.sqrt(lam))) + 1
    if law.family is Family.BINOMIAL and (law.p == 1.0 or j >= law.n):
        return law.n
    while _tail_mass_cap(law, j) > 1e-16:
        j = 2 * j + 8
        if law.family is Family.BINOMIAL and j >= law.n:
            return law.n
    return j


def _cell_index(u: float) -> int:
    """Largest count strictly below u, i.e. ceil(u) - 1."""
    return int(math.ceil(u)) - 1


@dataclass(frozen=True)
class PartialMomentTriple:
    """Truncated moments of (K - x) against the unit-lattice pmf.

    For a lattice law with counts K and a threshold x in unit-lattice
    coordinates:

        a = E (K - x) 1{K <= j}
        b = E K (K - x) 1{K <= j}
        c = E K^2 (K - x) 1{K <= j}

    These are the coefficients of the piecewise quadratic
    a*w^2 - 2*b*w + c that the tangency residual reduces to on the cell
    (j, j+1].
    """

    j: int
    a: float
    b: float
    c: float


def partial_moment_sweep(law: ReferenceLaw, x: float) -> Iterator[PartialMomentTriple]:
    """Yield PartialMomentTriple for j = 0, 1, 2, ... at one pmf per step."""
    if not law.is_lattice:
        raise UnsupportedFamilyError("partial moments require a lattice family")
    a = b = c = 0.0
    k = 0
    while True:
        pk = lattice_pmf(law, k)
        base = (k - x) * pk
        a += base
        b += k * base
        c += k * k * base
        yield PartialMomentTriple(k, a, b, c)
        k += 1


def partial_moment_triple(law: ReferenceLaw, x: float, j: int) -> PartialMomentTriple:
    """Truncated (K - x) moments up to count j, x in unit-lattice coordinates."""
    if not law.is_lattice:
        raise UnsupportedFamilyError("partial moments require a lattice family")
    if j < 0:
        return PartialMomentTriple(j, 0.0, 0.0, 0.0)
    top = j if law.family is Family.POISSON else min(j, law.n)
    pm = lattice_pmf_array(law, top)
    k = np.arange(top + 1, dtype=np.float64)
    base = (k - x) * pm
    return PartialMomentTriple(
        j, float(base.sum()), float((k * base).sum()), float((k * k * base).sum())
    )


# ---------------------------------------------------------------------------
# positive-part moments E (w - eta)_+^alpha, original scale
# ---------------------------------------------------------------------------


def normal_positive_part_moment(budget: MomentBudget, w: float, alpha: int) -> float:
    """E (w - eta)_+^alpha for eta = m + Z*sqrt(s), in closed form.

    With t = (w - m)/sqrt(s), Phi and phi the standard normal cdf/pdf:

        alpha = 1:  sqrt(s)   * (t*Phi(t) + phi(t))
        alpha = 2:  s         * ((1 + t^2)*Phi(t) + t*phi(t))
        alpha = 3:  s^(3/2)   * (t*(t^2 + 3)*Phi(t) + (t^2 + 2)*phi(t))

    Deep in the left tail both terms cancel to a value far below either
    operand; double precision keeps roughly 1e-12 relative accuracy down
    to t near -8 and underflows to 0.0 past t of about -38.
    """
    if alpha not in (1, 2, 3):
        raise UnsupportedOrderError(f"normal positive-part moments support alpha in {{1,2,3}}, got {alpha}")
    rt = math.sqrt(budget.s)
    t = (w - budget.m) / rt
    big_phi = std_normal_cdf(t)
    small_phi = std_normal_pdf(t)
    if alpha == 1:
        return rt * (t * big_phi + small_phi)
    if alpha == 2:
        return budget.s * ((1.0 + t * t) * big_phi + t * small_phi)
    return budget.s * rt * (t * (t * t + 3.0) * big_phi + (t * t + 2.0) * small_phi)


def _lattice_positive_part_moment(law: ReferenceLaw, u: float, alpha: int) -> float:
    """E (u - K)_+^alpha against the unit-lattice pmf, direct positive sum."""
    j = _cell_index(u)
    if law.family is Family.BINOMIAL:
        j = min(j, law.n)
    if j < 0:
        return 0.0
    pm = lattice_pmf_array(law, j)
    diff = u - np.arange(j + 1, dtype=np.float64)
    np.clip(diff, 0.0, None, out=diff)
    return float((diff**alpha * pm).sum())


def positive_part_moment(law: ReferenceLaw, w: float, alpha: int) -> float:
    """E (w - eta)_+^alpha on the original scale, any reference family."""
    if alpha not in (1, 2, 3):
        raise UnsupportedOrderError(f"positive-part moments support alpha in {{1,2,3}}, got {alpha}")
    if law.family is Family.NORMAL:
        return normal_positive_part_moment(law.budget, w, alpha)
    d = law.step
    return d**alpha * _lattice_positive_part_moment(law, w / d, alpha)


def tangency_residual(law: ReferenceLaw, alpha: int, x: float, w: float) -> float:
    """E (w - eta)_+^(alpha-1) * (eta - x), the optimality residual.

    As a function of w this is negative on (x_*, w_x), zero at the
    tangency point w_x, and positive beyond it, so the optimal bound is
    obtained at its unique sign change.  Identically

        residual = (w - x) * E(w - eta)_+^(alpha-1) - E(w - eta)_+^alpha,

    which is how the normal branch evaluates it.  Lattice laws use the
    cell quadratic a*u^2 - 2*b*u + c built from truncated moments, with
    u = w/d and x rescaled the same way.  At or below the support bottom
    the residual is exactly 0.
    """
    if alpha not in (2, 3):
        raise UnsupportedOrderError(f"the tangency residual supports alpha in {{2,3}}, got {alpha}")
    if law.family is Family.NORMAL:
        a1 = normal_positive_part_moment(law.budget, w, alpha - 1)
        a2 = normal_positive_part_moment(law.budget, w, alpha)
        return (w - x) * a1 - a2
    d = law.step
    u = w / d
    if u <= law.lattice_support_min:
        return 0.0
    tri = partial_moment_triple(law, x / d, _cell_index(u))
    if alpha == 3:
        return d**3 * (tri.a * u * u - 2.0 * tri.b * u + tri.c)
    return d * d * (tri.a * u - tri.b)


def tilted_mean(law: ReferenceLaw, alpha: int, w: float) -> float:
    """E eta*(w - eta)_+^(alpha-1) / E (w - eta)_+^(alpha-1).

    The mean of eta reweighted by the left-tail kernel; continuous and
    nondecreasing in w, which is what makes the tangency point unique.
    Computed through w - M_alpha(w)/M_(alpha-1)(w), using the fact that
    eta = w - (w - eta) on the event eta < w.
    """
    if alpha not in (2, 3):
        raise UnsupportedOrderError(f"the tilted mean supports alpha in {{2,3}}, got {alpha}")
    low = positive_part_moment(law, w, alpha - 1)
    if low <= 0.0:
        raise ConstraintError(
            f"tilted mean undefined at w = {w}: no mass below w"
        )
    return w - positive_part_moment(law, w, alpha) / low
