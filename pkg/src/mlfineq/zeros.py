"""Real zeros on the negative axis and zero counts in rectangles."""

import math
from dataclasses import dataclass, field

import numpy as np

from . import core
from .core import Params, eval_many
from .errors import ContourThroughZero

BOUNDARY_ZERO_LEVEL = 1e-13
DOUBLE_ZERO_LEVEL = 1e-9
MAX_BOUNDARY_SAMPLES = 2 ** 20


@dataclass(frozen=True)
class Rect:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"degenerate rectangle {self}")

    def contains(self, z):
        return self.re_min < z.real < self.re_max and self.im_min < z.imag < self.im_max

    def is_symmetric(self):
        scale = max(abs(self.im_min), abs(self.im_max))
        return abs(self.im_min + self.im_max) <= 1e-12 * scale


@dataclass(frozen=True)
class RealZero:
    location: float
    width: float
    multiplicity: int = 1


@dataclass(frozen=True)
class ZeroReport:
    real_zeros: list
    rect_count: int
    nonreal_count: int
    multiplicities: list = field(default_factory=list)

    @property
    def real_count(self):
        return sum(self.multiplicities)


def _as_params(p):
    return p if isinstance(p, Params) else Params(*p)


def _real_values(p, xs):
    b = eval_many(p, np.asarray(xs, dtype=float))
    return b.values.real, b.abs_err_est


def default_step(alpha, x):
    """A quarter of the asymptotic zero spacing at x, clamped to [1e-3, 1]."""
    if alpha <= 1.0:
        return 0.25
    spacing = alpha * math.pi * abs(x) ** (1.0 - 1.0 / alpha) / math.sin(math.pi / alpha)
    return min(1.0, max(1e-3, 0.25 * spacing))


def _sample_points(alpha, x_min, x_max, step_hint):
    xs = [x_max]
    while xs[-1] > x_min:
        step = step_hint if step_hint else default_step(alpha, xs[-1])
        xs.append(max(xs[-1] - step, x_min))
    return np.array(xs[::-1])


def _bisect(f, a, fa, b):
    # invariant: f(a) and f(b) have opposite signs
    while b - a > 1e-10 * max(1.0, abs(a), abs(b)):
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0:
            return m, 0.0
        if (fm < 0.0) == (fa < 0.0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b), b - a


def real_zero_scan(p, x_min, x_max=0.0, step_hint=None):
    """Real zeros of E_{a,b} in [x_min, x_max], sorted ascending.

    Simple zeros come from sign changes refined by bisection; a local minimum
    of |E| below 1e-9 without a sign change is reported as a double zero.
    """
    p = _as_params(p)
    x_min, x_max = float(x_min), float(x_max)
    if not x_min < x_max <= 0.0:
        raise ValueError("need x_min < x_max <= 0")
    if step_hint is not None and not step_hint > 0:
        raise ValueError("step_hint must be positive")
    xs = _sample_points(p.alpha, x_min, x_max, step_hint)
    fs, _ = _real_values(p, xs)

    def f(x):
        return core.eval(p, x).value.real

    def fprime(x):
        return core.eval_derivative(p, x, 1)

    found = []
    for i, (x, fx) in enumerate(zip(xs, fs)):
        if fx == 0.0:
            found.append(RealZero(float(x), 0.0, 1))
    for i in range(len(xs) - 1):
        if fs[i] * fs[i + 1] < 0.0:
            loc, width = _bisect(f, xs[i], fs[i], xs[i + 1])
            found.append(RealZero(loc, width, 1))
    absf = np.abs(fs)
    for i in range(1, len(xs) - 1):
        if not (absf[i] < absf[i - 1] and absf[i] <= absf[i + 1]):
            continue
        if fs[i - 1] * fs[i] <= 0.0 or fs[i] * fs[i + 1] <= 0.0:
            continue
        a, b = xs[i - 1], xs[i + 1]
        da, db = fprime(a), fprime(b)
        if da * db >= 0.0:
            continue
        loc, width = _bisect(fprime, a, da, b)
        if abs(f(loc)) < DOUBLE_ZERO_LEVEL:
            found.append(RealZero(loc, width, 2))
    found.sort(key=lambda zr: zr.location)
    return found


def first_negative_zero(p, x_floor):
    """Largest real zero in [x_floor, 0), or ``None``."""
    if not x_floor < 0:
        raise ValueError("x_floor must be negative")
    zs = [z for z in real_zero_scan(p, x_floor, 0.0) if z.location < 0.0]
    return zs[-1].location if zs else None


# -- argument principle -----------------------------------------------------

def _boundary_points(r, t):
    """Counter-clockwise boundary parametrised by t in [0, 4)."""
    side = np.minimum(np.floor(t).astype(int), 3)
    s = t - side
    w = r.re_max - r.re_min
    h = r.im_max - r.im_min
    re = np.select([side == 0, side == 1, side == 2, side == 3],
                   [r.re_min + s * w, np.full_like(s, r.re_max), r.re_max - s * w, np.full_like(s, r.re_min)])
    im = np.select([side == 0, side == 1, side == 2, side == 3],
                   [np.full_like(s, r.im_min), r.im_min + s * h, np.full_like(s, r.im_max), r.im_max - s * h])
    return re + 1j * im


def _initial_params(r, n_boundary):
    w = r.re_max - r.re_min
    h = r.im_max - r.im_min
    per = 2.0 * (w + h)
    parts = []
    for side, length in enumerate((w, h, w, h)):
        n = max(16, int(round(n_boundary * length / per)))
        parts.append(side + np.arange(n) / n)
    return np.concatenate(parts)


def _checked_values(p, z):
    b = eval_many(p, z)
    mag = np.abs(b.values)
    if not np.all(b.ok):
        raise core.NonFinite("function overflows on the contour")
    if np.any(mag < BOUNDARY_ZERO_LEVEL) or np.any(b.abs_err_est >= 0.5 * mag):
        raise ContourThroughZero("|E| too small on the contour to follow its phase")
    return b.values


def winding_number(p, r, n_boundary=256):
    """Winding number of E around 0 along the boundary of r (float, unrounded)."""
    p = _as_params(p)
    t = _initial_params(r, n_boundary)
    f = _checked_values(p, _boundary_points(r, t))
    while True:
        f_next = np.roll(f, -1)
        dphi = np.angle(f_next / f)
        jumps = np.flatnonzero(np.abs(dphi) >= 0.5 * np.pi)
        if jumps.size == 0:
            return float(dphi.sum() / (2.0 * np.pi))
        if t.size + jumps.size > MAX_BOUNDARY_SAMPLES:
            raise ContourThroughZero("phase refinement exceeded the sample cap")
        t_next = np.where(jumps + 1 < t.size, t[(jumps + 1) % t.size], 4.0)
        t_mid = 0.5 * (t[jumps] + t_next)
        f_mid = _checked_values(p, _boundary_points(r, t_mid))
        t = np.insert(t, jumps + 1, t_mid)
        f = np.insert(f, jumps + 1, f_mid)


def count_zeros_rect(p, r, n_boundary=256):
    """Number of zeros (with multiplicity) inside r by the argument principle."""
    if n_boundary < 64:
        raise ValueError("n_boundary must be at least 64")
    return int(round(winding_number(p, r, n_boundary)))


def classify_zero_reality(p, r, n_boundary=256):
    """Split the zero count in a real-symmetric rectangle into real and non-real parts."""
    p = _as_params(p)
    if not r.is_symmetric():
        raise ValueError("rectangle must be symmetric about the real axis")
    rect_count = count_zeros_rect(p, r, n_boundary)
    hi = min(r.re_max, 0.0)
    real = []
    if r.re_min < hi:
        real = [z for z in real_zero_scan(p, r.re_min, hi) if r.re_min < z.location < r.re_max]
    mults = [z.multiplicity for z in real]
    return ZeroReport([(z.location, z.width) for z in real], rect_count, rect_count - sum(mults), mults)


# -- complex zeros ----------------------------------------------------------

def newton_zero(p, z0, tol=1e-13, max_iter=60):
    """Newton iteration on E from z0; returns the root or ``None``."""
    p = _as_params(p)
    z = complex(z0)
    for _ in range(max_iter):
        f = core.eval(p, z).value
        d = core.derivative(p, z, 1).value
        if d == 0:
            return None
        step = f / d
        z -= step
        if abs(step) <= tol * max(1.0, abs(z)):
            return z
    return None


def find_complex_zeros(p, r, n_grid=64):
    """Zeros of E inside r located from grid minima of |E| and polished by Newton."""
    p = _as_params(p)
    re = np.linspace(r.re_min, r.re_max, n_grid)
    im = np.linspace(r.im_min, r.im_max, n_grid)
    zz = re[None, :] + 1j * im[:, None]
    mag = np.abs(eval_many(p, zz).values)
    roots = []
    for i in range(1, n_grid - 1):
        for j in range(1, n_grid - 1):
            block = mag[i - 1:i + 2, j - 1:j + 2]
            if mag[i, j] != block.min():
                continue
            z = newton_zero(p, zz[i, j])
            if z is None or not r.contains(z):
                continue
            if all(abs(z - w) > 1e-8 * max(1.0, abs(z)) for w in roots):
                roots.append(z)
    roots.sort(key=lambda z: (abs(z), z.imag))
    return roots
