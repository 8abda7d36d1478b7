"""Pure-Python summation kernels.

Reference implementation of the compiled kernels in ``_kernels.pyx``.  Both
modules expose the same two array functions and must agree to rounding.

Status codes: 0 ok, 1 overflow, 2 series did not converge.
"""

import math

import numpy as np

EPS = 2.220446049250313e-16
LOG_MAX = 709.0
DIRECT_MAX = 1e280
MAX_SERIES_TERMS = 200000
MAX_ALG_TERMS = 2000
TWO_PI = 2.0 * math.pi

OK, OVERFLOW, NO_CONVERGENCE = 0, 1, 2


def _nonpos_int(a):
    return a <= 0.0 and a == math.floor(a)


def _gamma_sign(a):
    if a > 0.0:
        return 1.0
    return 1.0 if int(math.floor(a)) % 2 == 0 else -1.0


def rgamma(a):
    """1/Gamma(a), zero at the poles."""
    if _nonpos_int(a):
        return 0.0
    if -170.0 < a < 170.0:
        return 1.0 / math.gamma(a)
    return _gamma_sign(a) * math.exp(-math.lgamma(a))


def _rgamma_envelope(b):
    # |1/Gamma(b)| <= Gamma(1-b)/pi by reflection; both sides meet at b = 1/2
    if b >= 0.5:
        return abs(rgamma(b))
    return math.exp(math.lgamma(1.0 - b)) / math.pi


def _arg_sensitivity(a):
    # relative rounding of a = alpha*k + beta, scaled by |d log(1/Gamma)/da|
    return EPS * (abs(a) + 1.0) * (math.pi + math.log(2.0 + abs(a)))


def _principal_arg(z):
    th = math.atan2(z.imag, z.real)
    if th == -math.pi:
        th = math.pi
    return th


def series_point(z, alpha, beta, tol):
    if z == 0:
        v = rgamma(beta)
        return complex(v, 0.0), EPS * abs(v), OK
    r = abs(z)
    logr = math.log(r)
    th = _principal_arg(z)
    s = 0j
    abs_sum = 0.0
    round_err = 0.0
    zk = 1 + 0j
    log_mode = False
    tail = 0.0
    for k in range(MAX_SERIES_TERMS):
        a = alpha * k + beta
        pole = _nonpos_int(a)
        if pole:
            t = 0j
        elif log_mode or not -170.0 < a < 170.0:
            lg = math.lgamma(a)
            logmag = k * logr - lg
            if logmag > LOG_MAX:
                return complex(math.nan, math.nan), math.inf, OVERFLOW
            ph = k * th
            mag = _gamma_sign(a) * math.exp(logmag)
            t = complex(mag * math.cos(ph), mag * math.sin(ph))
            round_err += abs(t) * EPS * (8.0 + 2.0 * (abs(k * logr) + abs(lg) + abs(ph)))
        else:
            t = zk * rgamma(a)
            # k roundings in z**k plus the sensitivity of 1/Gamma to the rounded argument
            round_err += abs(zk) * _rgamma_envelope(a) * _arg_sensitivity(a) + abs(t) * EPS * (4.0 + k)
        if not log_mode:
            zk *= z
            if abs(zk) > DIRECT_MAX:
                log_mode = True
        s += t
        tm = abs(t)
        abs_sum += tm
        if pole:
            continue
        if a > 0.0:
            ratio = r * math.exp(math.lgamma(a) - math.lgamma(a + alpha))
            if tm == 0.0:
                # underflowed term; later ones are smaller once the ratio drops below 1
                if ratio < 1.0:
                    tail = 0.0
                    break
            elif ratio < 1.0:
                tail = tm * ratio / (1.0 - ratio)
                if tail <= tol * max(abs(s), EPS * abs_sum):
                    break
    else:
        return s, math.inf, NO_CONVERGENCE
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        return complex(math.nan, math.nan), math.inf, OVERFLOW
    return s, tail + round_err + 4.0 * EPS * abs(s), OK


def asymptotic_point(z, alpha, beta, n_terms):
    """Exponential branches plus algebraic tail.

    ``n_terms <= 0`` selects optimal truncation of the algebraic tail.
    """
    r = abs(z)
    th = _principal_arg(z)
    logr = math.log(r)
    g = (1.0 - beta) / alpha
    rt = math.exp(logr / alpha)
    exact = alpha == math.floor(alpha) and beta == math.floor(beta)
    api = alpha * math.pi
    edge = 1e-13 * (1.0 + api)
    val = 0j
    err = 0.0
    m_lo = int(math.ceil((-1.5 * api - th) / TWO_PI))
    m_hi = int(math.floor((1.5 * api - th) / TWO_PI))
    for m in range(m_lo, m_hi + 1):
        thm = th + TWO_PI * m
        phi = thm / alpha
        cphi = math.cos(phi)
        logmag = g * logr + rt * cphi
        d = abs(thm) - api
        if d <= edge:
            if logmag > LOG_MAX:
                return complex(math.nan, math.nan), math.inf, OVERFLOW
            w = 0.5 if abs(d) <= edge else 1.0
            mag = math.exp(logmag) / alpha
            ph = g * thm + rt * math.sin(phi)
            val += w * mag * complex(math.cos(ph), math.sin(ph))
            err += w * mag * EPS * (8.0 + 2.0 * (abs(logmag) + abs(ph)) + rt * (4.0 + abs(logr) / alpha))
        elif logmag > LOG_MAX:
            continue
        else:
            mag = math.exp(logmag) / alpha
        if not exact and cphi < 0.0:
            sigma = math.sqrt(0.5 * rt) * abs(math.sin(phi)) / math.sqrt(-cphi)
            err += 2.0 * mag * math.erfc(sigma)
    w1 = 1.0 / z
    wk = 1 + 0j
    alg = 0j
    prev_env = math.inf
    omitted = 0.0
    k = 1
    while True:
        wk *= w1
        b = beta - alpha * k
        env = math.exp(-k * logr) * _rgamma_envelope(b)
        if exact and b <= 0.0:
            omitted = 0.0
            break
        if n_terms > 0:
            if k > n_terms:
                omitted = env
                break
        elif b < 0.5:
            # past the leading terms the envelope is log-convex in k, so the
            # first increase marks the optimal truncation point
            if env >= prev_env or k > MAX_ALG_TERMS:
                omitted = env
                break
            if env <= 0.1 * EPS * abs(val + alg):
                omitted = env
                break
        t = -rgamma(b) * wk
        alg += t
        err += abs(t) * EPS * (4.0 + k) + env * _arg_sensitivity(b)
        prev_env = env if b < 0.5 else math.inf
        k += 1
    out = val + alg
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        return complex(math.nan, math.nan), math.inf, OVERFLOW
    return out, err + 2.0 * omitted + 4.0 * EPS * abs(out), OK


def _blank_failures(vals, errs, status):
    bad = status != OK
    vals[bad] = complex(math.nan, math.nan)
    errs[bad] = math.inf


def series_kernel(z, alpha, beta, tol):
    z = np.asarray(z, dtype=np.complex128)
    n = z.shape[0]
    vals = np.empty(n, dtype=np.complex128)
    errs = np.empty(n, dtype=np.float64)
    status = np.empty(n, dtype=np.int8)
    for i in range(n):
        vals[i], errs[i], status[i] = series_point(complex(z[i]), alpha, beta, tol)
    _blank_failures(vals, errs, status)
    return vals, errs, status


def asymptotic_kernel(z, alpha, beta, n_terms):
    z = np.asarray(z, dtype=np.complex128)
    n = z.shape[0]
    vals = np.empty(n, dtype=np.complex128)
    errs = np.empty(n, dtype=np.float64)
    status = np.empty(n, dtype=np.int8)
    for i in range(n):
        vals[i], errs[i], status[i] = asymptotic_point(complex(z[i]), alpha, beta, n_terms)
    _blank_failures(vals, errs, status)
    return vals, errs, status
