"""Surfaces, complexity, and the closed-form intersection bounds.

Everything here is exact integer / rational arithmetic.  The central quantity
is the complexity ``3*genus + punctures - 4`` of an orientable surface; the
library's constructions are only meaningful when it is positive.  This module
also houses the minimal-filling-intersection bracket table (by genus/puncture
case), the log2 distance upper bound, and the polynomial growth threshold,
all of which are consumed by the construction and certification layers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class NonAdmissibleSurface(ValueError):
    """Raised when an operation requires complexity > 0 and does not get it."""


@dataclass(frozen=True, order=True)
class Surface:
    """An orientable surface of finite type, S_{genus, punctures}."""

    genus: int
    punctures: int

    def __post_init__(self):
        if self.genus < 0 or self.punctures < 0:
            raise ValueError("genus and punctures must be non-negative")

    @property
    def complexity(self) -> int:
        """3g + p - 4; may be negative."""
        return 3 * self.genus + self.punctures - 4

    @property
    def euler(self) -> int:
        """Euler characteristic 2 - 2g - p (punctures as removed points)."""
        return 2 - 2 * self.genus - self.punctures

    @property
    def epsilon(self) -> int:
        """Growth prefactor: 1 for positive genus, 4 for the sphere."""
        return 1 if self.genus >= 1 else 4

    @property
    def admissible(self) -> bool:
        return self.complexity > 0

    def require_admissible(self):
        if not self.admissible:
            raise NonAdmissibleSurface(
                f"S_{{{self.genus},{self.punctures}}} has complexity "
                f"{self.complexity} <= 0"
            )

    def __str__(self):
        return f"S_{{{self.genus},{self.punctures}}}"


def complexity(surface: Surface) -> int:
    return surface.complexity


def i3_bracket(surface: Surface) -> tuple[int, int]:
    """Bracket [lower, upper] for the minimal filling-pair intersection number.

    The five cases partition admissible (g, p); the lower end doubles as the
    Euler-characteristic lower bound for any filling pair on the surface.
    Raises NonAdmissibleSurface when complexity <= 0.
    """
    surface.require_admissible()
    g, p = surface.genus, surface.punctures
    if g == 0:
        # p >= 5 here since complexity > 0
        if p % 2 == 1:
            return (p - 1, p - 1)
        return (p - 2, p)
    if g == 2:
        if p <= 2:
            return (4, 4)
        if p % 2 == 0:
            return (2 * g + p - 2, 2 * g + p - 2)
        return (2 * g + p - 2, 2 * g + p - 1)
    # g == 1 forces p >= 2 once complexity > 0, so the p <= 1 branch is g >= 3
    if p <= 1:
        return (2 * g - 1, 2 * g - 1)
    return (2 * g + p - 2, 2 * g + p - 2)


def i3_case(surface: Surface) -> int:
    """Which of the five bracket cases (1..5) the surface falls in."""
    surface.require_admissible()
    g, p = surface.genus, surface.punctures
    if g == 0:
        return 5
    if g == 2:
        return 2 if p <= 2 else 4
    return 1 if p <= 1 else 3


@dataclass(frozen=True)
class BoundsProfile:
    """Exact bracket and growth constants attached to one surface."""

    i3_lower: int
    i3_upper: int
    epsilon: int
    eta3: int | None = None
    eta2: int | None = None

    def __post_init__(self):
        if not (self.i3_lower <= self.i3_upper):
            raise ValueError("bracket must satisfy lower <= upper")
        if self.i3_upper - self.i3_lower not in (0, 1, 2):
            raise ValueError("bracket width must be 0, 1 or 2")
        if self.epsilon not in (1, 4):
            raise ValueError("epsilon must be 1 or 4")


def bounds_profile(surface: Surface, eta3: int | None = None,
                   eta2: int | None = None) -> BoundsProfile:
    lo, hi = i3_bracket(surface)
    return BoundsProfile(lo, hi, surface.epsilon, eta3, eta2)


@dataclass(frozen=True)
class Config:
    """Run configuration: twist power and certification constants.

    ``bounded_image_M`` is the diameter constant of the bounded-geodesic-image
    property, taken as an axiom with a configurable value (default 100; an
    effective value exists in the literature but is not pinned down here).
    Geodesic certificates are conditional on ``twist_power_B >= M + 3``.
    """

    bounded_image_M: int = 100
    twist_power_B: int = 103
    lam: Fraction = field(default_factory=lambda: Fraction(1, 2))
    budget_crossings: int = 2_000_000

    def __post_init__(self):
        if self.bounded_image_M < 1:
            raise ValueError("M must be a positive integer")
        if self.twist_power_B < 3:
            raise ValueError("twist power B must be >= 3")
        if not (0 < self.lam < 1):
            raise ValueError("lambda must lie strictly between 0 and 1")

    @property
    def geodesic_conditional(self) -> bool:
        """Whether the ray levels carry the geodesic guarantee."""
        return self.twist_power_B >= self.bounded_image_M + 3


def floor_log2(n: int) -> int:
    if n < 1:
        raise ValueError("need n >= 1")
    return n.bit_length() - 1


def ceil_log2(n: int) -> int:
    if n < 1:
        raise ValueError("need n >= 1")
    return (n - 1).bit_length()


def distance_upper_bound(i: int) -> tuple[Fraction, bool]:
    """Upper bound 2*log2(i) + 2 for the curve-graph distance of a pair
    intersecting ``i`` times.

    Returns ``(value, exact)``: the exact rational when ``i`` is a power of
    two, otherwise the certified upper rounding ``2*ceil(log2 i) + 2`` with
    ``exact = False``.  Never a distance computation, only a consistency bound.
    """
    if i < 1:
        raise ValueError("disjoint curves: bound vacuous")
    exact = i & (i - 1) == 0
    return Fraction(2 * ceil_log2(i) + 2), exact


def distance_upper_bracket(i: int) -> tuple[Fraction, Fraction]:
    """Certified bracket [2*floor(log2 i)+2, 2*ceil(log2 i)+2]."""
    if i < 1:
        raise ValueError("disjoint curves: bound vacuous")
    return Fraction(2 * floor_log2(i) + 2), Fraction(2 * ceil_log2(i) + 2)


@dataclass(frozen=True)
class GrowthThreshold:
    """Value of omega**(lambda*(k-2)), exactly or as an integer bracket.

    Report-only: the validity threshold in complexity under which the matching
    lower-bound inequality holds is not known, so this number is never
    asserted against computed data.
    """

    lower: int
    upper: int
    exact: bool

    @property
    def value(self) -> int:
        if not self.exact:
            raise ValueError("threshold is a bracket, not an exact integer")
        return self.lower


def growth_threshold(omega: int, lam: Fraction, k: int) -> GrowthThreshold:
    """omega**(lam*(k-2)) with exact integer powers when the exponent is a
    whole number, integer floor/ceil bracketing otherwise."""
    if omega < 1:
        raise ValueError("omega must be positive")
    if not (0 < lam < 1):
        raise ValueError("lambda must lie strictly between 0 and 1")
    if k < 2:
        raise ValueError("k must be at least 2")
    exponent = Fraction(lam) * (k - 2)
    if exponent.denominator == 1:
        v = omega ** exponent.numerator
        return GrowthThreshold(v, v, True)
    # omega**(a/b): bracket by integer root bounds, floats never touched.
    a, b = exponent.numerator, exponent.denominator
    power = omega ** a
    lo = _integer_root_floor(power, b)
    hi = lo if lo ** b == power else lo + 1
    return GrowthThreshold(lo, hi, False)


def _integer_root_floor(n: int, r: int) -> int:
    """floor(n ** (1/r)) by Newton iteration on integers."""
    if n < 0 or r < 1:
        raise ValueError
    if n in (0, 1):
        return n
    x = 1 << ((n.bit_length() + r - 1) // r)
    while True:
        y = ((r - 1) * x + n // x ** (r - 1)) // r
        if y >= x:
            return x
        x = y
