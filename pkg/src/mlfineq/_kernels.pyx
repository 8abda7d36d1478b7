# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled summation kernels; mirrors ``_kernels_py`` line for line."""

import numpy as np

from libc.math cimport (atan2, ceil, cos, erfc, exp, fabs, floor, hypot,
                        isfinite, lgamma, log, sin, sqrt, tgamma, M_PI, INFINITY, NAN)

cdef double EPS = 2.220446049250313e-16
cdef double LOG_MAX = 709.0
cdef double DIRECT_MAX = 1e280
cdef long MAX_SERIES_TERMS = 200000
cdef long MAX_ALG_TERMS = 2000
cdef double TWO_PI = 2.0 * M_PI


cdef inline bint _nonpos_int(double a) nogil:
    return a <= 0.0 and a == floor(a)


cdef inline double _gamma_sign(double a) nogil:
    cdef long f
    if a > 0.0:
        return 1.0
    f = <long>floor(a)
    return 1.0 if f % 2 == 0 else -1.0


cdef inline double _rgamma(double a) nogil:
    if _nonpos_int(a):
        return 0.0
    if -170.0 < a < 170.0:
        return 1.0 / tgamma(a)
    return _gamma_sign(a) * exp(-lgamma(a))


cdef inline double _rgamma_envelope(double b) nogil:
    if b >= 0.5:
        return fabs(_rgamma(b))
    return exp(lgamma(1.0 - b)) / M_PI


cdef inline double _arg_sensitivity(double a) nogil:
    return EPS * (fabs(a) + 1.0) * (M_PI + log(2.0 + fabs(a)))


cdef inline double _principal_arg(double re, double im) nogil:
    cdef double th = atan2(im, re)
    if th == -M_PI:
        th = M_PI
    return th


cdef int _series_point(double zr, double zi, double alpha, double beta, double tol,
                       double *out_r, double *out_i, double *out_e) nogil:
    cdef double r, logr, th, a, lg, logmag, ph, mag, tm, ratio
    cdef double sr = 0.0, si = 0.0, abs_sum = 0.0, round_err = 0.0, tail = 0.0
    cdef double zkr = 1.0, zki = 0.0, tr, ti, tmp, rg
    cdef bint log_mode = False, pole, converged = False
    cdef long k
    if zr == 0.0 and zi == 0.0:
        rg = _rgamma(beta)
        out_r[0] = rg
        out_i[0] = 0.0
        out_e[0] = EPS * fabs(rg)
        return 0
    r = hypot(zr, zi)
    logr = log(r)
    th = _principal_arg(zr, zi)
    for k in range(MAX_SERIES_TERMS):
        a = alpha * k + beta
        pole = _nonpos_int(a)
        if pole:
            tr = 0.0
            ti = 0.0
        elif log_mode or not (-170.0 < a < 170.0):
            lg = lgamma(a)
            logmag = k * logr - lg
            if logmag > LOG_MAX:
                return 1
            ph = k * th
            mag = _gamma_sign(a) * exp(logmag)
            tr = mag * cos(ph)
            ti = mag * sin(ph)
            round_err += hypot(tr, ti) * EPS * (8.0 + 2.0 * (fabs(k * logr) + fabs(lg) + fabs(ph)))
        else:
            rg = _rgamma(a)
            tr = zkr * rg
            ti = zki * rg
            round_err += (hypot(zkr, zki) * _rgamma_envelope(a) * _arg_sensitivity(a)
                          + hypot(tr, ti) * EPS * (4.0 + k))
        if not log_mode:
            tmp = zkr * zr - zki * zi
            zki = zkr * zi + zki * zr
            zkr = tmp
            if hypot(zkr, zki) > DIRECT_MAX:
                log_mode = True
        sr += tr
        si += ti
        tm = hypot(tr, ti)
        abs_sum += tm
        if pole:
            continue
        if a > 0.0:
            ratio = r * exp(lgamma(a) - lgamma(a + alpha))
            if tm == 0.0:
                if ratio < 1.0:
                    tail = 0.0
                    converged = True
                    break
            elif ratio < 1.0:
                tail = tm * ratio / (1.0 - ratio)
                if tail <= tol * max(hypot(sr, si), EPS * abs_sum):
                    converged = True
                    break
    if not converged:
        out_r[0] = sr
        out_i[0] = si
        out_e[0] = INFINITY
        return 2
    if not (isfinite(sr) and isfinite(si)):
        return 1
    out_r[0] = sr
    out_i[0] = si
    out_e[0] = tail + round_err + 4.0 * EPS * hypot(sr, si)
    return 0


cdef int _asymptotic_point(double zr, double zi, double alpha, double beta, long n_terms,
                           double *out_r, double *out_i, double *out_e) nogil:
    cdef double r = hypot(zr, zi)
    cdef double th = _principal_arg(zr, zi)
    cdef double logr = log(r)
    cdef double g = (1.0 - beta) / alpha
    cdef double rt = exp(logr / alpha)
    cdef bint exact = alpha == floor(alpha) and beta == floor(beta)
    cdef double api = alpha * M_PI
    cdef double edge = 1e-13 * (1.0 + api)
    cdef double vr = 0.0, vi = 0.0, err = 0.0
    cdef double thm, phi, cphi, logmag, d, w, mag, ph, sigma
    cdef long m, m_lo, m_hi, k
    cdef double w1r, w1i, wkr = 1.0, wki = 0.0, tmp, b, env, prev_env = INFINITY
    cdef double omitted = 0.0, ar = 0.0, ai = 0.0, c, tr, ti, outr, outi
    m_lo = <long>ceil((-1.5 * api - th) / TWO_PI)
    m_hi = <long>floor((1.5 * api - th) / TWO_PI)
    for m in range(m_lo, m_hi + 1):
        thm = th + TWO_PI * m
        phi = thm / alpha
        cphi = cos(phi)
        logmag = g * logr + rt * cphi
        d = fabs(thm) - api
        if d <= edge:
            if logmag > LOG_MAX:
                return 1
            w = 0.5 if fabs(d) <= edge else 1.0
            mag = exp(logmag) / alpha
            ph = g * thm + rt * sin(phi)
            vr += w * mag * cos(ph)
            vi += w * mag * sin(ph)
            err += w * mag * EPS * (8.0 + 2.0 * (fabs(logmag) + fabs(ph)) + rt * (4.0 + fabs(logr) / alpha))
        elif logmag > LOG_MAX:
            continue
        else:
            mag = exp(logmag) / alpha
        if not exact and cphi < 0.0:
            sigma = sqrt(0.5 * rt) * fabs(sin(phi)) / sqrt(-cphi)
            err += 2.0 * mag * erfc(sigma)
    w1r = zr / (r * r)
    w1i = -zi / (r * r)
    k = 1
    while True:
        tmp = wkr * w1r - wki * w1i
        wki = wkr * w1i + wki * w1r
        wkr = tmp
        b = beta - alpha * k
        env = exp(-k * logr) * _rgamma_envelope(b)
        if exact and b <= 0.0:
            omitted = 0.0
            break
        if n_terms > 0:
            if k > n_terms:
                omitted = env
                break
        elif b < 0.5:
            if env >= prev_env or k > MAX_ALG_TERMS:
                omitted = env
                break
            if env <= 0.1 * EPS * hypot(vr + ar, vi + ai):
                omitted = env
                break
        c = -_rgamma(b)
        tr = c * wkr
        ti = c * wki
        ar += tr
        ai += ti
        err += hypot(tr, ti) * EPS * (4.0 + k) + env * _arg_sensitivity(b)
        prev_env = env if b < 0.5 else INFINITY
        k += 1
    outr = vr + ar
    outi = vi + ai
    if not (isfinite(outr) and isfinite(outi)):
        return 1
    out_r[0] = outr
    out_i[0] = outi
    out_e[0] = err + 2.0 * omitted + 4.0 * EPS * hypot(outr, outi)
    return 0


def series_kernel(z, double alpha, double beta, double tol):
    cdef double complex[::1] zv = np.ascontiguousarray(z, dtype=np.complex128)
    cdef Py_ssize_t n = zv.shape[0], i
    vals = np.empty(n, dtype=np.complex128)
    errs = np.empty(n, dtype=np.float64)
    status = np.empty(n, dtype=np.int8)
    cdef double complex[::1] vv = vals
    cdef double[::1] ev = errs
    cdef signed char[::1] sv = status
    cdef double orr, oi, oe
    cdef int st
    with nogil:
        for i in range(n):
            st = _series_point(zv[i].real, zv[i].imag, alpha, beta, tol, &orr, &oi, &oe)
            sv[i] = st
            if st == 0:
                vv[i] = orr + 1j * oi
                ev[i] = oe
            else:
                vv[i] = NAN + 1j * NAN
                ev[i] = INFINITY
    return vals, errs, status


def asymptotic_kernel(z, double alpha, double beta, long n_terms):
    cdef double complex[::1] zv = np.ascontiguousarray(z, dtype=np.complex128)
    cdef Py_ssize_t n = zv.shape[0], i
    vals = np.empty(n, dtype=np.complex128)
    errs = np.empty(n, dtype=np.float64)
    status = np.empty(n, dtype=np.int8)
    cdef double complex[::1] vv = vals
    cdef double[::1] ev = errs
    cdef signed char[::1] sv = status
    cdef double orr, oi, oe
    cdef int st
    with nogil:
        for i in range(n):
            st = _asymptotic_point(zv[i].real, zv[i].imag, alpha, beta, n_terms, &orr, &oi, &oe)
            sv[i] = st
            if st == 0:
                vv[i] = orr + 1j * oi
                ev[i] = oe
            else:
                vv[i] = NAN + 1j * NAN
                ev[i] = INFINITY
    return vals, errs, status
