"""Special functions and the gamma law for normalized Voronoi cell areas.

The exponential integral is evaluated with its convergent power series
below ``x = 1`` and with a continued fraction above it.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EULER_GAMMA",
    "CellAreaLaw",
    "euler_gamma",
    "exp_integral_e1",
    "cell_area_pdf",
    "cell_area_laplace",
    "sample_cell_area",
]

EULER_GAMMA = 0.57721566490153286061

_SERIES_CUTOFF = 1.0
_EPS = 1e-16
_MAX_ITER = 500


@dataclass(frozen=True)
class CellAreaLaw:
    """Gamma approximation of the area of a typical cell of a unit-density
    Poisson-Voronoi tessellation.

    Parameters
    ----------
    q : float
        Shape parameter.
    b : float
        Rate parameter. With ``q == b`` the mean area is one.
    """

    q: float = 3.61
    b: float = 3.61

    def __post_init__(self):
        if not (self.q > 0 and self.b > 0):
            raise ValueError(f"shape and rate must be positive, got q={self.q}, b={self.b}")

    @property
    def mean(self):
        return self.q / self.b

    @property
    def variance(self):
        return self.q / self.b**2


def euler_gamma():
    """Return the Euler-Mascheroni constant."""
    return EULER_GAMMA


def _e1_series(x):
    # E1(x) = -gamma - ln x + sum_{k>=1} (-1)^(k+1) x^k / (k k!)
    total = 0.0
    term = 1.0
    for k in range(1, _MAX_ITER):
        term *= -x / k
        contrib = -term / k
        total += contrib
        if abs(contrib) < _EPS * abs(total):
            break
    return -EULER_GAMMA - math.log(x) + total


def _e1_continued_fraction(x):
    # modified Lentz on e^x E1(x) = 1/(x+1- 1^2/(x+3- 2^2/(x+5- ...)))
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x)


def _e1_scalar(x):
    x = float(x)
    if not x > 0:
        raise ValueError(f"E1 is only defined here for x > 0, got {x}")
    if math.isinf(x):
        return 0.0
    if x <= _SERIES_CUTOFF:
        return _e1_series(x)
    return _e1_continued_fraction(x)


def exp_integral_e1(x):
    """Exponential integral ``E1(x) = int_x^inf exp(-t)/t dt`` for ``x > 0``.

    Accepts a scalar or an array; returns the same shape. Raises
    ``ValueError`` if any argument is not strictly positive.
    """
    if np.ndim(x) == 0:
        return _e1_scalar(x)
    arr = np.asarray(x, dtype=float)
    out = np.empty_like(arr)
    for idx, val in np.ndenumerate(arr):
        out[idx] = _e1_scalar(val)
    return out


def cell_area_pdf(law, v):
    """Density of the normalized cell area under the gamma fit."""
    v = np.asarray(v, dtype=float)
    if np.any(v <= 0):
        raise ValueError("cell area density requires v > 0")
    log_f = law.q * math.log(law.b) + (law.q - 1) * np.log(v) - law.b * v - math.lgamma(law.q)
    out = np.exp(log_f)
    return float(out) if out.ndim == 0 else out


def cell_area_laplace(law, s):
    """Laplace transform ``E[exp(-s V)] = (b / (b + s))**q`` of the gamma law."""
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("Laplace argument must be nonnegative")
    out = np.exp(-law.q * np.log1p(s / law.b))
    return float(out) if out.ndim == 0 else out


def sample_cell_area(law, rng, size=None):
    """Draw normalized cell areas from the gamma law.

    Parameters
    ----------
    law : CellAreaLaw
    rng : numpy.random.Generator
        Caller-owned stream.
    size : int or tuple, optional
        Output shape; a single float is returned when omitted.
    """
    return rng.gamma(law.q, 1.0 / law.b, size=size)
