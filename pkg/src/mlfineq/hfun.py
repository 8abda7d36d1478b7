"""The boundary function h.

h(x) is the unique y > 0 with 2 Gamma(x+y)**2 = Gamma(y) Gamma(2x+y), i.e. the
root of F(x, y) = log 2 + 2 lnG(x+y) - lnG(y) - lnG(2x+y).
"""

import math
from dataclasses import dataclass

from scipy import special

from .errors import BracketFailure

LOG2 = math.log(2.0)
EPS = 2.220446049250313e-16
SQRT2_M1 = math.sqrt(2.0) - 1.0


@dataclass(frozen=True)
class HSample:
    x: float
    h: float
    residual: float


@dataclass(frozen=True)
class HCurvature:
    x: float
    y: float
    z: float
    H_value: float


def _stirling_remainder(t):
    # lnG(t) - (t - 1/2) ln t + t - ln(2 pi)/2, accurate to rounding for t >= 20
    u = 1.0 / (t * t)
    return (1.0 / 12.0 - u * (1.0 / 360.0 - u * (1.0 / 1260.0 - u * (1.0 / 1680.0 - u / 1188.0)))) / t


def _lgamma_shift(y, a):
    # lnG(y+a) - lnG(y) - a ln y, without forming the large log-gammas
    return ((y + a - 0.5) * math.log1p(a / y) - a
            + _stirling_remainder(y + a) - _stirling_remainder(y))


def F_of(x, y):
    """log 2 + 2 lnG(x+y) - lnG(y) - lnG(2x+y), increasing in y."""
    x = float(x)
    y = float(y)
    if y >= 20.0:
        return LOG2 + 2.0 * _lgamma_shift(y, x) - _lgamma_shift(y, 2.0 * x)
    # the beta-function form keeps moderate log-gammas from cancelling
    return float(LOG2 - special.betaln(y, x) + special.betaln(x + y, x))


def dF_dy(x, y):
    return 2.0 * special.digamma(x + y) - special.digamma(y) - special.digamma(2.0 * x + y)


def dF_dx(x, y):
    return 2.0 * (special.digamma(x + y) - special.digamma(2.0 * x + y))


def _noise_floor(x, y):
    # rounding level of F_of
    if y >= 20.0:
        return 16.0 * EPS * (1.0 + x)
    return 8.0 * EPS * (1.0 + abs(special.betaln(y, x)) + abs(special.betaln(x + y, x)))


def solve_h(x, tol=1e-12):
    """Root of F(x, .) by bracketing and safeguarded Newton steps.

    The residual target is ``max(tol, rounding level of F)``; for large x the
    log-gamma terms are large enough that ``tol`` alone may be unreachable.
    """
    x = float(x)
    if not tol > 0:
        raise ValueError("tol must be positive")
    if x < 0 or not math.isfinite(x):
        raise ValueError(f"x must be a non-negative finite number, got {x!r}")
    if x == 0.0:
        return HSample(0.0, 0.0, 0.0)
    lo = min(1e-12, 1e-3 * x)
    hi = 10.0 * max(x * x, x)
    f_lo = F_of(x, lo)
    f_hi = F_of(x, hi)
    grow = 0
    while f_hi <= 0.0 and grow < 60:
        lo, f_lo = hi, f_hi
        hi *= 2.0
        f_hi = F_of(x, hi)
        grow += 1
    if not (f_lo < 0.0 < f_hi):
        raise BracketFailure(f"no sign change of F({x}, y) on [{lo}, {hi}]")

    # start from the quadratic asymptote for large x, the small-x slope otherwise
    y = x * x / LOG2 - x + 0.6 if x > 2.0 else max(SQRT2_M1 * x, x * x)
    if not lo < y < hi:
        y = 0.5 * (lo + hi)
    for _ in range(200):
        f = F_of(x, y)
        target = max(tol, _noise_floor(x, y))
        if abs(f) <= target:
            return HSample(x, y, f)
        if f < 0.0:
            lo = y
        else:
            hi = y
        if hi - lo <= 4.0 * EPS * hi:
            return HSample(x, y, f)
        step = f / dF_dy(x, y)
        y_new = y - step
        if not lo < y_new < hi:
            # bisect in log space when the bracket spans many decades
            y_new = math.sqrt(lo * hi) if hi > 4.0 * lo else 0.5 * (lo + hi)
        y = y_new
    return HSample(x, y, F_of(x, y))


def h(x, tol=1e-12):
    return solve_h(x, tol).h


def h_prime(x):
    """h'(x) = -dF/dx / dF/dy at (x, h(x)); the limit sqrt(2) - 1 at x = 0."""
    x = float(x)
    if x == 0.0:
        return SQRT2_M1
    y = solve_h(x).h
    return -dF_dx(x, y) / dF_dy(x, y)


def h_curvature(x, y, z):
    """H(x, y, z) = 2(z+1)^2 psi'(x+y) - z^2 psi'(y) - (z+2)^2 psi'(2x+y)."""
    tri = lambda t: special.polygamma(1, t)
    value = 2.0 * (z + 1.0) ** 2 * tri(x + y) - z * z * tri(y) - (z + 2.0) ** 2 * tri(2.0 * x + y)
    return HCurvature(float(x), float(y), float(z), float(value))


def h_second(x):
    """h''(x) from implicit differentiation: -H(x, h, h') / dF/dy."""
    x = float(x)
    y = solve_h(x).h
    hp = -dF_dx(x, y) / dF_dy(x, y)
    return -h_curvature(x, y, hp).H_value / dF_dy(x, y)


def asymptote_gap(x):
    """h(x) - x**2/log 2 + x."""
    x = float(x)
    if x < 2.0:
        raise ValueError("asymptote_gap is defined for x >= 2")
    return solve_h(x).h - x * x / LOG2 + x
