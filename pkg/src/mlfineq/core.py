"""Evaluation of the two-parameter Mittag-Leffler function.

E_{a,b}(z) = sum_k z**k / Gamma(a*k + b), with 1/Gamma vanishing at the poles.

Three evaluation routes are combined by :func:`eval`: closed forms for six
special parameter pairs, the power series near the origin and the asymptotic
expansion (exponential branches plus the algebraic tail) further out.  Every
result carries an absolute error estimate.
"""

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import _backend
from ._parallel import run_kernel
from .errors import DomainTooSmall, NonFinite

EPS = np.finfo(float).eps
DEFAULT_TOL = 1e-15
# below this radius the algebraic tail cannot reach useful accuracy
ASYMPTOTIC_MIN_RADIUS = 1.0
# results whose relative error estimate exceeds this get a second opinion
SECOND_OPINION_REL = 1e-13
# removable singularities of the closed forms are handled by Taylor sums below this
CLOSED_FORM_TAYLOR_RADIUS = 1e-4

CLOSED_FORM_PAIRS = frozenset({(1.0, 1.0), (1.0, 0.0), (2.0, 1.0), (2.0, 2.0), (2.0, 3.0), (2.0, 4.0)})


class Method(str, enum.Enum):
    SERIES = "series"
    ASYMPTOTIC = "asymptotic"
    CLOSED_FORM = "closed_form"


_METHOD_CODES = (Method.SERIES, Method.ASYMPTOTIC, Method.CLOSED_FORM)


@dataclass(frozen=True)
class Params:
    alpha: float
    beta: float

    def __post_init__(self):
        alpha = float(self.alpha)
        beta = float(self.beta)
        if not math.isfinite(alpha) or alpha <= 0.0:
            raise ValueError(f"alpha must be a positive finite number, got {self.alpha!r}")
        if not math.isfinite(beta):
            raise ValueError(f"beta must be finite, got {self.beta!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)


@dataclass(frozen=True)
class EvalResult:
    value: complex
    abs_err_est: float
    method: Method


@dataclass(frozen=True)
class EvalBatch:
    """Array version of :class:`EvalResult`; ``ok`` marks finite results."""

    values: np.ndarray
    abs_err_est: np.ndarray
    methods: np.ndarray
    ok: np.ndarray

    def method_names(self):
        return [_METHOD_CODES[m].value for m in self.methods.ravel()]


def _as_params(p):
    return p if isinstance(p, Params) else Params(*p)


def switch_radius(alpha):
    """Radius r*(a) = max(10, (38a)**a / 2) separating series and asymptotics."""
    log_r = alpha * math.log(38.0 * alpha) - math.log(2.0)
    return max(10.0, math.exp(min(log_r, 700.0)))


# -- closed forms -----------------------------------------------------------

def has_closed_form(p):
    p = _as_params(p)
    return (p.alpha, p.beta) in CLOSED_FORM_PAIRS


def _taylor_small(beta, z):
    # six terms of the defining series; |z|**6 < 1e-24 inside the Taylor radius
    out = np.zeros_like(z)
    for k in range(5, -1, -1):
        out = out * z + special.rgamma(2.0 * k + beta)
    return out


def _closed_form_many(alpha, beta, z):
    """Closed-form values and rounding-level error estimates."""
    with np.errstate(all="ignore"):
        if alpha == 1.0:
            ez = np.exp(z)
            if beta == 1.0:
                return ez, 4.0 * EPS * np.abs(ez)
            v = z * ez
            return v, 6.0 * EPS * np.abs(v)
        s = np.sqrt(z)
        ep = np.abs(np.exp(s))
        em = np.abs(np.exp(-s))
        cosh_scale = 0.5 * (ep + em)
        if beta == 1.0:
            v = np.cosh(s)
            return v, 8.0 * EPS * cosh_scale
        small = np.abs(z) < CLOSED_FORM_TAYLOR_RADIUS
        safe_s = np.where(small, 1.0, s)
        safe_z = np.where(small, 1.0, z)
        abs_s = np.abs(safe_s)
        if beta == 2.0:
            v = np.sinh(safe_s) / safe_s
            err = 8.0 * EPS * cosh_scale / abs_s
        elif beta == 3.0:
            v = (np.cosh(safe_s) - 1.0) / safe_z
            err = 8.0 * EPS * (cosh_scale + 1.0) / np.abs(safe_z)
        else:
            v = (np.sinh(safe_s) / safe_s - 1.0) / safe_z
            err = 8.0 * EPS * (cosh_scale / abs_s + 1.0) / np.abs(safe_z)
        if np.any(small):
            tv = _taylor_small(beta, z[small])
            v = np.where(small, 0.0, v)
            err = np.where(small, 0.0, err)
            v[small] = tv
            err[small] = 4.0 * EPS * np.abs(tv)
        return v, err


def closed_form(p, z):
    """Exact closed form for the six special pairs, ``None`` otherwise."""
    p = _as_params(p)
    if not has_closed_form(p):
        return None
    v, _ = _closed_form_many(p.alpha, p.beta, np.array([complex(z)]))
    return complex(v[0])


# -- single routes ----------------------------------------------------------

def _result_from(vals, errs, status, method, what):
    if status[0] != 0 or not np.isfinite(errs[0]):
        raise NonFinite(f"{what} failed (status {int(status[0])})")
    return EvalResult(complex(vals[0]), float(errs[0]), method)


def eval_series(p, z, tol=DEFAULT_TOL):
    """Power series with a geometric tail bound; NonFinite on overflow."""
    p = _as_params(p)
    if not tol > 0:
        raise ValueError("tol must be positive")
    vals, errs, status = _backend.series_kernel(np.array([complex(z)]), p.alpha, p.beta, float(tol))
    return _result_from(vals, errs, status, Method.SERIES, "series summation")


def eval_asymptotic(p, z, n_terms=None):
    """Asymptotic expansion.

    ``n_terms=None`` truncates the algebraic tail at its smallest term.  The
    exponential branches are those with |arg z + 2*pi*m| <= a*pi, the one on
    a Stokes line counted with weight 1/2.
    """
    p = _as_params(p)
    z = complex(z)
    if abs(z) < ASYMPTOTIC_MIN_RADIUS:
        raise DomainTooSmall(f"|z| = {abs(z):.3g} below {ASYMPTOTIC_MIN_RADIUS}")
    if n_terms is None:
        n = 0
    else:
        n = int(n_terms)
        if n < 1:
            raise ValueError("n_terms must be a positive integer")
    vals, errs, status = _backend.asymptotic_kernel(np.array([z]), p.alpha, p.beta, n)
    return _result_from(vals, errs, status, Method.ASYMPTOTIC, "asymptotic expansion")


# -- dispatcher -------------------------------------------------------------

def _dispatch(alpha, beta, z, tol):
    n = z.size
    vals = np.full(n, np.nan + 0j)
    errs = np.full(n, np.inf)
    methods = np.zeros(n, dtype=np.int8)
    r = np.abs(z)
    use_series = r <= switch_radius(alpha)

    idx = np.flatnonzero(use_series)
    if idx.size:
        v, e, _ = run_kernel(_backend.series_kernel, z[idx], alpha, beta, tol)
        vals[idx], errs[idx] = v, e
    idx = np.flatnonzero(~use_series)
    if idx.size:
        v, e, _ = run_kernel(_backend.asymptotic_kernel, z[idx], alpha, beta, 0)
        vals[idx], errs[idx] = v, e
        methods[idx] = 1

    with np.errstate(invalid="ignore"):
        doubtful = ~(errs <= SECOND_OPINION_REL * np.abs(vals))
    retry_asym = np.flatnonzero(doubtful & use_series & (r >= ASYMPTOTIC_MIN_RADIUS))
    if retry_asym.size:
        v, e, _ = run_kernel(_backend.asymptotic_kernel, z[retry_asym], alpha, beta, 0)
        better = e < errs[retry_asym]
        sel = retry_asym[better]
        vals[sel], errs[sel], methods[sel] = v[better], e[better], 1
    retry_series = np.flatnonzero(doubtful & ~use_series)
    if retry_series.size:
        v, e, _ = run_kernel(_backend.series_kernel, z[retry_series], alpha, beta, tol)
        better = e < errs[retry_series]
        sel = retry_series[better]
        vals[sel], errs[sel], methods[sel] = v[better], e[better], 0
    return vals, errs, methods


def eval_many(p, z, tol=DEFAULT_TOL, use_closed_form=True):
    """Vectorised :func:`eval`; never raises, failures have ``ok == False``."""
    p = _as_params(p)
    if not tol > 0:
        raise ValueError("tol must be positive")
    z = np.asarray(z, dtype=np.complex128)
    shape = z.shape
    zf = z.ravel()
    if use_closed_form and has_closed_form(p):
        vals, errs = _closed_form_many(p.alpha, p.beta, zf)
        methods = np.full(zf.size, 2, dtype=np.int8)
    elif p.beta == 0.0:
        # E_{a,0}(z) = z E_{a,a}(z)
        inner = eval_many(Params(p.alpha, p.alpha), zf, tol, use_closed_form)
        vals = zf * inner.values
        errs = np.abs(zf) * inner.abs_err_est + EPS * np.abs(vals)
        methods = inner.methods
    else:
        vals, errs, methods = _dispatch(p.alpha, p.beta, zf, float(tol))
    ok = np.isfinite(vals) & np.isfinite(errs)
    vals = np.where(ok, vals, np.nan + 0j)
    errs = np.where(ok, errs, np.inf)
    return EvalBatch(vals.reshape(shape), errs.reshape(shape), methods.reshape(shape), ok.reshape(shape))


def eval(p, z, tol=DEFAULT_TOL, use_closed_form=True):
    """Evaluate E_{a,b}(z) with an absolute error estimate."""
    b = eval_many(p, np.array([complex(z)]), tol, use_closed_form)
    if not b.ok[0]:
        q = _as_params(p)
        raise NonFinite(f"E_({q.alpha:g},{q.beta:g}) overflows at z = {complex(z)}")
    return EvalResult(complex(b.values[0]), float(b.abs_err_est[0]), _METHOD_CODES[b.methods[0]])


# -- derivatives ------------------------------------------------------------

@dataclass(frozen=True)
class DerivCoeffTable:
    """Coefficients a[j][i] of E^(i) = a**-i sum_j a[j][i] E_{a, i(a-1)+b+j}."""

    alpha: float
    beta: float
    a: tuple

    @property
    def i_max(self):
        return len(self.a) - 1


@functools.lru_cache(maxsize=256)
def _deriv_table(alpha, beta, i_max):
    a = [[0.0] * (i_max + 1) for _ in range(i_max + 1)]
    for i in range(i_max + 1):
        a[0][i] = 1.0
    for i in range(i_max):
        for j in range(1, i + 2):
            a[j][i + 1] = a[j][i] + (2.0 - beta + i * (1.0 - alpha) - j) * a[j - 1][i]
    return tuple(tuple(row) for row in a)


def deriv_coeffs(p, i_max):
    p = _as_params(p)
    if int(i_max) != i_max or i_max < 0:
        raise ValueError("i_max must be a non-negative integer")
    return DerivCoeffTable(p.alpha, p.beta, _deriv_table(p.alpha, p.beta, int(i_max)))


def derivative_many(p, z, order, tol=DEFAULT_TOL):
    """i-th derivative on an array of points, as an :class:`EvalBatch`."""
    p = _as_params(p)
    if int(order) != order or order < 0:
        raise ValueError("order must be a non-negative integer")
    i = int(order)
    z = np.asarray(z, dtype=np.complex128)
    if i == 0:
        return eval_many(p, z, tol)
    table = _deriv_table(p.alpha, p.beta, i)
    total = np.zeros(z.shape, dtype=np.complex128)
    err = np.zeros(z.shape)
    mag = np.zeros(z.shape)
    ok = np.ones(z.shape, dtype=bool)
    scale = p.alpha ** (-i)
    for j in range(i + 1):
        c = table[j][i]
        if c == 0.0:
            continue
        b = eval_many(Params(p.alpha, i * (p.alpha - 1.0) + p.beta + j), z, tol)
        total += c * b.values
        err += abs(c) * b.abs_err_est
        mag += abs(c) * np.abs(b.values)
        ok &= b.ok
    vals = scale * total
    errs = scale * (err + EPS * (i + 2) * mag)
    methods = np.zeros(z.shape, dtype=np.int8)
    return EvalBatch(vals, errs, methods, ok & np.isfinite(vals))


def derivative(p, z, order, tol=DEFAULT_TOL):
    """i-th derivative at one point as an :class:`EvalResult`."""
    b = derivative_many(p, np.array([complex(z)]), order, tol)
    if not b.ok[0]:
        raise NonFinite(f"derivative of order {order} overflows at z = {complex(z)}")
    return EvalResult(complex(b.values[0]), float(b.abs_err_est[0]), Method.SERIES)


def eval_derivative(p, x, order, tol=DEFAULT_TOL):
    """E^(i)(x): a float for real ``x``, complex otherwise."""
    v = derivative(p, x, order, tol).value
    if isinstance(x, complex) or np.iscomplexobj(x):
        return v
    return v.real


# -- Taylor jets ------------------------------------------------------------

@dataclass(frozen=True)
class TaylorJet:
    """Taylor coefficients c_k = f^(k)(center)/k!, k = 0..order.

    ``errs`` are absolute error estimates and ``scales`` the magnitude of the
    quantities cancelled while forming each coefficient (used as a rounding
    reference by the complete-monotonicity checks).
    """

    center: float
    coeffs: tuple
    order: int
    errs: tuple = None
    scales: tuple = None

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if len(coeffs) != self.order + 1:
            raise ValueError("jet needs order + 1 coefficients")
        object.__setattr__(self, "coeffs", coeffs)
        for name in ("errs", "scales"):
            val = getattr(self, name)
            val = (0.0,) * len(coeffs) if val is None else tuple(float(v) for v in val)
            object.__setattr__(self, name, val)

    def derivatives(self):
        return [math.factorial(k) * c for k, c in enumerate(self.coeffs)]


def _jet_direct(alpha, beta, x, n_order):
    """c_k = sum_n C(n,k) x**(n-k) / Gamma(a n + b) summed term by term."""
    n_max = 64
    lx = math.log(abs(x)) if x != 0.0 else -np.inf
    while True:
        n = np.arange(n_max + 1, dtype=float)
        arg = alpha * n + beta
        lrg = -special.gammaln(arg)
        sgn = special.gammasgn(arg)
        pole = (arg <= 0) & (arg == np.floor(arg))
        k = np.arange(n_order + 1, dtype=float)[:, None]
        m = n[None, :] - k
        valid = (m >= 0) & ~pole[None, :]
        with np.errstate(all="ignore"):
            lbin = special.gammaln(n + 1)[None, :] - special.gammaln(k + 1) - special.gammaln(np.maximum(m, 0) + 1)
            lpow = np.where(m > 0, m * lx, 0.0)
            lm = np.where(valid, lbin + lpow + lrg[None, :], -np.inf)
        peak = lm.max(axis=1)
        if np.any(peak > 700.0):
            return None
        # stop once the last term of every row is far below its peak and falling
        last, prev = lm[:, -1], lm[:, -2]
        if np.all((last < peak - 45.0) & (last <= prev)):
            break
        n_max *= 2
        if n_max > 20000:
            return None
    with np.errstate(all="ignore"):
        sign = sgn[None, :] * np.where((m % 2 == 1) & (x < 0), -1.0, 1.0)
        terms = np.where(valid, sign * np.exp(lm), 0.0)
    coeffs = terms.sum(axis=1)
    scales = np.abs(terms).sum(axis=1)
    lm_finite = np.where(np.isfinite(lm), lm, 0.0)
    errs = EPS * (np.abs(terms) * (8.0 + 2.0 * np.abs(lm_finite) + n[None, :])).sum(axis=1)
    return coeffs, errs, scales


def _jet_cauchy(alpha, beta, x, n_order, radius, tol, n_points=128, reciprocal=False):
    """Coefficients from the trapezoid rule on a circle, with aliasing check.

    With ``reciprocal`` the jet of 1/E is returned, provided the circle
    provably encloses no zero of E (resolved phase, winding number 0).
    """
    theta = 2.0 * np.pi * np.arange(n_points) / n_points
    w = x + radius * np.exp(1j * theta)
    b = eval_many(Params(alpha, beta), w, tol)
    if not np.all(b.ok):
        return None
    f = b.values
    ferr = b.abs_err_est
    if reciprocal:
        mag = np.abs(f)
        if np.any(mag <= 4.0 * ferr):
            return None
        step = np.angle(np.roll(f, -1) / f)
        if np.abs(step).max() >= 0.5 * np.pi or abs(step.sum()) > np.pi:
            return None
        ferr = ferr / (mag * (mag - ferr))
        f = 1.0 / f
    full = np.fft.fft(f) / n_points
    half = np.fft.fft(f[::2]) / (n_points // 2)
    k = np.arange(n_order + 1)
    rk = radius ** (-k.astype(float))
    coeffs = full[k] * rk
    alias = np.abs(full[k] - half[k]) * rk
    fmax = np.abs(f).max()
    noise = (ferr.max() + 8.0 * EPS * fmax) * rk
    errs = alias + noise + np.abs(coeffs.imag)
    return coeffs.real, errs, fmax * rk


def taylor_jet(p, x, n_order, tol=DEFAULT_TOL):
    """Taylor jet of E_{a,b} at real ``x``.

    Coefficients come from the direct derivative series where that is well
    conditioned and otherwise from Cauchy integrals on circles around ``x``;
    each order keeps the estimate with the smaller error.
    """
    p = _as_params(p)
    if int(n_order) != n_order or n_order < 0:
        raise ValueError("order must be a non-negative integer")
    n_order = int(n_order)
    x = float(x)
    best_c = np.full(n_order + 1, np.nan)
    best_e = np.full(n_order + 1, np.inf)
    best_s = np.full(n_order + 1, np.inf)

    def offer(cand):
        if cand is None:
            return
        c, e, s = cand
        better = e < best_e
        best_c[better], best_e[better], best_s[better] = c[better], e[better], s[better]

    offer(_jet_direct(p.alpha, p.beta, x, n_order))
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = best_e / np.abs(best_c)
    if not np.all(rel <= 1e-12):
        ax = abs(x)
        radii = [ax * f for f in (0.0625, 0.125, 0.25, 0.5, 0.75)] + [0.5, 1.0, 2.0]
        for rad in radii:
            if rad > 0.0:
                offer(_jet_cauchy(p.alpha, p.beta, x, n_order, rad, tol))
    if not np.all(np.isfinite(best_e)):
        raise NonFinite(f"no usable Taylor jet for {p} at x = {x}")
    return TaylorJet(x, tuple(best_c), n_order, tuple(best_e), tuple(best_s))
