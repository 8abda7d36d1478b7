"""Log-concavity quantities and grid checks of the modulus inequalities.

Three inequalities are checked on lattices of complex points:

* LE:  |E(z)| <= E(Re z)
* GE:  |E(z)| >= E(Re z)
* two-sided:  E(Re z) <= |E(z)| <= E((Re z**(1/a))**a)

A lattice point is reported only when the margin contradicts the inequality by
more than three times the summed error estimates of both sides.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import core
from .core import DEFAULT_TOL, Params, eval_many
from .errors import IllConditioned, NonFinite
from .hfun import solve_h

BUDGET_FACTOR = 3.0


def _as_params(p):
    return p if isinstance(p, Params) else Params(*p)


# -- F quantities -----------------------------------------------------------

def _derivs(p, x, n):
    return [core.derivative(p, x, i).value.real for i in range(n + 1)]


def F_ab(p, x):
    """(E')**2 - E E'' at real x."""
    e0, e1, e2 = _derivs(_as_params(p), float(x), 2)
    return e1 * e1 - e0 * e2


def F_ab_zero(p):
    """1/Gamma(a+b)**2 - 2/(Gamma(b) Gamma(2a+b))."""
    p = _as_params(p)
    if not p.beta > 0:
        raise ValueError("beta must be positive")
    a, b = p.alpha, p.beta
    return float(special.rgamma(a + b) ** 2 - 2.0 * special.rgamma(b) * special.rgamma(2 * a + b))


def _binomial_sum(d, k):
    return sum(math.comb(2 * k, i) * (-1) ** i * d[i] * d[2 * k - i] for i in range(2 * k + 1))


def F_k(p, x, k):
    """sum_i C(2k, i) (-1)**i E^(i) E^(2k-i); F_1 = -2 F_ab."""
    if int(k) != k or k < 1:
        raise ValueError("k must be a positive integer")
    k = int(k)
    return _binomial_sum(_derivs(_as_params(p), float(x), 2 * k), k)


def F_k_from_jet(p, x, k):
    """Same sum as :func:`F_k`, with derivatives taken from a Taylor jet."""
    k = int(k)
    jet = core.taylor_jet(_as_params(p), float(x), 2 * k)
    return _binomial_sum(jet.derivatives(), k)


@dataclass(frozen=True)
class LocalExpansionFit:
    constant: float
    deviation: float
    relative_deviation: float
    residual: float


def local_expansion_check(p, x, y_list):
    """Fit (|E(x+iy)|**2 - E(x)**2)/y**2 by a polynomial in y**2.

    The constant term should equal F_ab(x); ``deviation`` is the difference.
    """
    p = _as_params(p)
    x = float(x)
    ys = np.asarray(y_list, dtype=float)
    if ys.size < 2:
        raise ValueError("need at least two y values")
    if np.any(ys == 0) or np.any(np.abs(ys) > 0.1 * max(1.0, abs(x))):
        raise ValueError("y values must be non-zero and at most 0.1*max(1,|x|)")
    bz = eval_many(p, x + 1j * ys)
    ez = bz.values
    rx = core.eval(p, x)
    ex = rx.value.real
    # |E(z)|^2 - E(x)^2 = (Re E(z) - E(x))(Re E(z) + E(x)) + Im E(z)^2
    q = ((ez.real - ex) * (ez.real + ex) + ez.imag ** 2) / ys ** 2
    q_err = (2.0 * np.abs(ez) * bz.abs_err_est + 2.0 * abs(ex) * rx.abs_err_est
             + 4.0 * core.EPS * ex * ex) / ys ** 2
    degree = 2 if ys.size >= 4 else 1
    design = np.vander(ys ** 2, degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(design, q, rcond=None)
    fitted = design @ coef
    # misfit beyond the evaluation noise, relative to the data
    excess = max(0.0, float(np.abs(fitted - q).max() - 3.0 * q_err.max()))
    residual = excess / max(float(np.abs(q).max()), 1e-300)
    if residual > 1e-4:
        raise IllConditioned(f"fit residual {residual:.2e} exceeds 1e-4")
    constant = float(coef[0])
    f = F_ab(p, x)
    dev = constant - f
    rel = abs(dev) / abs(f) if f != 0 else math.inf if dev else 0.0
    return LocalExpansionFit(constant, dev, rel, residual)


# -- grid checks ------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    re_range: tuple
    im_range: tuple
    n_re: int
    n_im: int

    def __post_init__(self):
        if self.n_re < 2 or self.n_im < 2:
            raise ValueError("grids need at least two points per axis")
        if not (self.re_range[0] <= self.re_range[1] and self.im_range[0] <= self.im_range[1]):
            raise ValueError("ranges must be ordered")

    def axes(self):
        return (np.linspace(self.re_range[0], self.re_range[1], self.n_re),
                np.linspace(self.im_range[0], self.im_range[1], self.n_im))


@dataclass(frozen=True)
class ViolationRecord:
    z: complex
    lhs: float
    rhs: float
    margin: float
    budget: float
    kind: str = ""


def _values(p, z, tol):
    b = eval_many(p, z, tol)
    if not np.all(b.ok):
        bad = np.asarray(z).ravel()[~b.ok.ravel()][0]
        raise NonFinite(f"evaluation failed at z = {bad}")
    return b.values, b.abs_err_est


def _records(mask, z, lhs, rhs, budget, kind):
    out = []
    for idx in zip(*np.nonzero(mask)):
        out.append(ViolationRecord(complex(z[idx]), float(lhs[idx]), float(rhs[idx]),
                                   float(lhs[idx] - rhs[idx]), float(budget[idx]), kind))
    return out


def _modulus_vs_real_part(p, g, tol):
    xs, ys = g.axes()
    z = xs[None, :] + 1j * ys[:, None]
    ez, err_z = _values(p, z, tol)
    ex, err_x = _values(p, xs, tol)
    lhs = np.abs(ez)
    rhs = np.broadcast_to(ex.real[None, :], z.shape)
    budget = BUDGET_FACTOR * (err_z + err_x[None, :])
    return z, lhs, rhs, budget


def check_LE(p, g, tol=DEFAULT_TOL):
    """Lattice points where |E(z)| > E(Re z) beyond the error budget."""
    p = _as_params(p)
    z, lhs, rhs, budget = _modulus_vs_real_part(p, g, tol)
    return _records(lhs - rhs > budget, z, lhs, rhs, budget, "LE")


def check_GE(p, g, tol=DEFAULT_TOL):
    """Lattice points where |E(z)| < E(Re z) beyond the error budget."""
    p = _as_params(p)
    z, lhs, rhs, budget = _modulus_vs_real_part(p, g, tol)
    return _records(lhs - rhs < -budget, z, lhs, rhs, budget, "GE")


def two_sided_admissible(p):
    p = _as_params(p)
    a, b = p.alpha, p.beta
    return (1.0 <= a < 2.0 and 1.0 <= b <= a) or (a == 2.0 and 1.0 <= b <= 3.0)


def check_two_sided(p, g, tol=DEFAULT_TOL):
    """Both bounds of E(Re z) <= |E(z)| <= E((Re z**(1/a))**a).

    For a < 2 only lattice points with Re z >= 0 are used; for a = 2 the whole
    plane minus the closed negative real axis.
    """
    p = _as_params(p)
    if not two_sided_admissible(p):
        raise ValueError(f"two-sided bound not covered for {p}")
    xs, ys = g.axes()
    z = (xs[None, :] + 1j * ys[:, None]).ravel()
    if p.alpha == 2.0:
        keep = ~((z.imag == 0.0) & (z.real <= 0.0))
    else:
        keep = z.real >= 0.0
    z = z[keep]
    if z.size == 0:
        return []
    ez, err_z = _values(p, z, tol)
    ex, err_x = _values(p, z.real, tol)
    u = np.power(z, 1.0 / p.alpha).real ** p.alpha
    eu, err_u = _values(p, u, tol)
    lhs = np.abs(ez)
    low_budget = BUDGET_FACTOR * (err_z + err_x)
    up_budget = BUDGET_FACTOR * (err_z + err_u)
    out = _records(lhs - ex.real < -low_budget, z, lhs, ex.real, low_budget, "lower")
    out += _records(lhs - eu.real > up_budget, z, lhs, eu.real, up_budget, "upper")
    return out


# -- u_n and classification --------------------------------------------------

def u_seq(p, n):
    """u_n = (n+1) Gamma(b + a n) / Gamma(b + a + a n)."""
    p = _as_params(p)
    if not p.beta > 0:
        raise ValueError("beta must be positive")
    n = np.asarray(n, dtype=float)
    a, b = p.alpha, p.beta
    out = np.exp(np.log1p(n) + special.gammaln(b + a * n) - special.gammaln(b + a + a * n))
    return float(out) if out.ndim == 0 else out


class IneqLabel(str, enum.Enum):
    LE_HOLDS = "LE_holds"
    GE_HOLDS = "GE_holds"
    GE_CONJECTURED = "GE_conjectured"
    NEITHER = "neither"
    NEITHER_CONJECTURED = "neither_conjectured"


class AdditivityLabel(str, enum.Enum):
    SUPER = "super"
    SUB = "sub"
    NEITHER = "neither"


PROVED_INEQ = frozenset({IneqLabel.LE_HOLDS, IneqLabel.GE_HOLDS, IneqLabel.NEITHER})


@dataclass(frozen=True)
class RegionLabel:
    ineq: IneqLabel
    additivity: AdditivityLabel


def _ge_threshold(alpha):
    # largest beta with the GE inequality proved, for alpha >= 2
    return 2.0 * alpha if alpha >= 4.0 else 2.0 * alpha - 1.0


def ineq_label(alpha, beta, h_alpha=None):
    if alpha <= 1.0 and beta >= alpha:
        return IneqLabel.LE_HOLDS
    if alpha == 1.0 and beta <= 1.0:
        return IneqLabel.GE_HOLDS
    if alpha == 2.0 and beta <= 3.0:
        return IneqLabel.GE_HOLDS
    if alpha >= 2.0 and beta <= _ge_threshold(alpha):
        return IneqLabel.GE_HOLDS
    if 1.0 < alpha < 2.0 and alpha - 1.0 <= beta <= alpha:
        return IneqLabel.GE_CONJECTURED
    if alpha > 2.0:
        if h_alpha is None:
            h_alpha = solve_h(alpha).h
        if beta <= h_alpha:
            return IneqLabel.NEITHER_CONJECTURED
    return IneqLabel.NEITHER


def additivity_label(alpha, beta, h_alpha=None):
    if h_alpha is None:
        h_alpha = solve_h(alpha).h
    if alpha <= 1.0 and beta >= h_alpha:
        return AdditivityLabel.SUPER
    if alpha >= 1.0 and beta <= h_alpha:
        return AdditivityLabel.SUB
    return AdditivityLabel.NEITHER


def classify_point(p):
    p = _as_params(p)
    if p.beta < 0:
        raise ValueError("classification needs beta >= 0")
    h_alpha = solve_h(p.alpha).h
    return RegionLabel(ineq_label(p.alpha, p.beta, h_alpha), additivity_label(p.alpha, p.beta, h_alpha))


@dataclass(frozen=True)
class RegionMap:
    rows: list          # (alpha, beta, RegionLabel) in lattice order, alpha outer
    h_curve: list       # (alpha, h(alpha)) for every lattice alpha


def lattice(lo, hi, n):
    """n points from lo to hi inclusive, rounded to 12 decimals."""
    if n < 2:
        raise ValueError("need at least two lattice points")
    return [round(lo + (hi - lo) * i / (n - 1), 12) for i in range(n)]


def region_map(alpha_range, beta_range, resolution):
    """Classify every lattice point; ``resolution`` is an int or (n_alpha, n_beta)."""
    n_a, n_b = (resolution, resolution) if np.isscalar(resolution) else resolution
    if alpha_range[0] <= 0 or beta_range[0] < 0:
        raise ValueError("alpha range must be positive and beta range non-negative")
    alphas = lattice(alpha_range[0], alpha_range[1], int(n_a))
    betas = lattice(beta_range[0], beta_range[1], int(n_b))
    rows = []
    curve = []
    for a in alphas:
        ha = solve_h(a).h
        curve.append((a, ha))
        for b in betas:
            rows.append((a, b, RegionLabel(ineq_label(a, b, ha), additivity_label(a, b, ha))))
    return RegionMap(rows, curve)
