"""Sampled complete-monotonicity tests for E(-x) and 1/E(x).

A function f is completely monotone when (-1)**n f^(n)(x) >= 0 for every n.
Here the condition is checked for n <= N at a handful of points, which can
refute complete monotonicity but never prove it.
"""

import enum
import math
from dataclasses import dataclass

from . import core
from .core import EPS, Params, TaylorJet
from .errors import DivisionByZeroSeries

EPS_REL = 1e-9
MAX_ORDER = 24
DEFAULT_POINTS = (0.05, 0.2, 1.0, 5.0, 20.0)


class Target(str, enum.Enum):
    E_OF_MINUS_X = "E_of_minus_x"
    RECIPROCAL_E = "reciprocal_E"


_ALIASES = {"minus": Target.E_OF_MINUS_X, "reciprocal": Target.RECIPROCAL_E}


def as_target(target):
    if isinstance(target, Target):
        return target
    if target in _ALIASES:
        return _ALIASES[target]
    return Target(target)


def reciprocal_jet(j):
    """Coefficients b with sum_i a_i b_(k-i) = [k == 0]."""
    a = j.coeffs
    ea = j.errs
    if a[0] == 0.0 or abs(a[0]) <= ea[0]:
        raise DivisionByZeroSeries("leading coefficient of the jet vanishes")
    n = j.order
    b = [1.0 / a[0]]
    eb = [ea[0] / a[0] ** 2 + EPS * abs(b[0])]
    sb = [abs(b[0])]
    for k in range(1, n + 1):
        acc = 0.0
        mag = 0.0
        err = 0.0
        for i in range(1, k + 1):
            acc += a[i] * b[k - i]
            mag += abs(a[i] * b[k - i])
            err += ea[i] * abs(b[k - i]) + abs(a[i]) * eb[k - i]
        bk = -acc / a[0]
        b.append(bk)
        sb.append(mag / abs(a[0]))
        eb.append((err + 2.0 * k * EPS * mag) / abs(a[0]) + abs(bk) * ea[0] / abs(a[0]))
    return TaylorJet(j.center, tuple(b), n, tuple(eb), tuple(sb))


RECIPROCAL_RADII = (0.0625, 0.125, 0.25, 0.5, 0.75)
RECIPROCAL_FIXED_RADII = (0.5, 1.0, 2.0, 4.0, 8.0)


def reciprocal_taylor_jet(p, x, n_order):
    """Jet of 1/E at x, keeping per order the better of two routes.

    Series inversion of the jet of E loses about 2**k in relative accuracy at
    order k; Cauchy integrals of 1/E on zero-free circles do not.
    """
    p = p if isinstance(p, Params) else Params(*p)
    base = reciprocal_jet(core.taylor_jet(p, x, n_order))
    c, e, s = (list(v) for v in (base.coeffs, base.errs, base.scales))
    radii = [abs(x) * f for f in RECIPROCAL_RADII] + list(RECIPROCAL_FIXED_RADII)
    for rad in radii:
        if rad <= 0.0:
            continue
        cand = core._jet_cauchy(p.alpha, p.beta, x, n_order, rad, core.DEFAULT_TOL, reciprocal=True)
        if cand is None:
            continue
        for k, (ck, ek, sk) in enumerate(zip(*cand)):
            if ek < e[k]:
                c[k], e[k], s[k] = ck, ek, sk
    return TaylorJet(float(x), tuple(c), n_order, tuple(e), tuple(s))


@dataclass(frozen=True)
class CMSigns:
    x: float
    values: tuple       # (-1)**n f^(n)(x)
    errs: tuple
    scales: tuple
    doubtful: bool      # some error estimate exceeds 10% of its value


def cm_signs(p, target, x, n_order):
    """(-1)**n f^(n)(x), n = 0..N, for f = E(-x) or f = 1/E(x)."""
    p = p if isinstance(p, Params) else Params(*p)
    target = as_target(target)
    x = float(x)
    if not x > 0:
        raise ValueError("x must be positive")
    if int(n_order) != n_order or not 0 <= n_order <= MAX_ORDER:
        raise ValueError(f"order must be an integer in [0, {MAX_ORDER}]")
    n_order = int(n_order)
    if target is Target.E_OF_MINUS_X:
        # (-1)**n d^n/dx^n E(-x) = E^(n)(-x)
        jet = core.taylor_jet(p, -x, n_order)
        signs = [1.0] * (n_order + 1)
    else:
        jet = reciprocal_taylor_jet(p, x, n_order)
        signs = [(-1.0) ** n for n in range(n_order + 1)]
    fact = [math.factorial(n) for n in range(n_order + 1)]
    values = tuple(signs[n] * fact[n] * jet.coeffs[n] for n in range(n_order + 1))
    errs = tuple(fact[n] * jet.errs[n] for n in range(n_order + 1))
    scales = tuple(fact[n] * jet.scales[n] for n in range(n_order + 1))
    doubtful = any(e > 0.1 * abs(v) for v, e in zip(values, errs))
    return CMSigns(x, values, errs, scales, doubtful)


@dataclass(frozen=True)
class CMVerdict:
    target: Target
    points: tuple
    max_order: int
    passed: bool
    first_failure: tuple = None     # (point, order, value)
    doubtful: bool = False


def is_cm_sampled(p, target, xs=DEFAULT_POINTS, n_order=12):
    """Aggregate :func:`cm_signs` over sample points; records the first failure."""
    target = as_target(target)
    xs = tuple(float(x) for x in xs)
    if not xs:
        raise ValueError("need at least one sample point")
    failure = None
    doubtful = False
    for x in xs:
        s = cm_signs(p, target, x, n_order)
        doubtful |= s.doubtful
        for n, (v, sc) in enumerate(zip(s.values, s.scales)):
            if v < -EPS_REL * sc:
                failure = (x, n, v)
                break
        if failure is not None:
            break
    return CMVerdict(target, xs, int(n_order), failure is None, failure, doubtful)
