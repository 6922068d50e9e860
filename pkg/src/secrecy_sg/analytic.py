"""Closed-form secrecy-rate CCDFs and mean secrecy rates for the four
base-station cooperation models.

All rates are in bits per channel use and all formulas assume the high-SNR
regime. Threshold arguments may be a :class:`Threshold`, a float, or an array
of thresholds; the result then has the same shape.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .specfun import CellAreaLaw, EULER_GAMMA, cell_area_laplace, exp_integral_e1, sample_cell_area

__all__ = [
    "NetworkParams",
    "Threshold",
    "ccdf_s1",
    "mean_s1",
    "ccdf_s2_upper_pgfl",
    "ccdf_s2_lower",
    "ccdf_s2_upper_voronoi",
    "coverage_s2_exact_r0zero",
    "mean_s2_upper",
    "mean_s2_lower",
    "mean_s2_upper_voronoi",
    "ccdf_s3_cell_lower",
    "mean_s3_cell_lower",
    "ccdf_s3_radius",
    "mean_s3_radius",
    "ru_pdf",
    "dmin_survival",
    "dmin_pdf",
]

LN2 = math.log(2.0)


def _growth(r0, alpha, power=2.0):
    # 2**(power * r0 / alpha); overflow to inf is the correct limit
    with np.errstate(over="ignore"):
        return np.exp2(power * r0 / alpha)


@dataclass(frozen=True)
class NetworkParams:
    """Network parameterization.

    Parameters
    ----------
    lambda_bs, lambda_e : float
        Densities of base stations and eavesdroppers per unit area.
    alpha : float
        Path-loss exponent, ``alpha > 2``.
    snr : float or None
        Linear ``P_BS / sigma**2`` at unit distance; ``None`` selects the
        high-SNR approximation.
    """

    lambda_bs: float = 1.0
    lambda_e: float = 1.0
    alpha: float = 4.0
    snr: float | None = None

    def __post_init__(self):
        if not (self.lambda_bs > 0 and self.lambda_e > 0):
            raise ValueError("densities must be positive")
        if not self.alpha > 2:
            raise ValueError(f"path-loss exponent must exceed 2, got {self.alpha}")
        if self.snr is not None and not self.snr > 0:
            raise ValueError(f"linear SNR must be positive, got {self.snr}")

    @property
    def high_snr(self):
        return self.snr is None

    @property
    def ratio(self):
        """``lambda_e / lambda_bs``."""
        return self.lambda_e / self.lambda_bs

    @classmethod
    def from_snr_db(cls, lambda_bs, lambda_e, alpha, snr_db):
        return cls(lambda_bs, lambda_e, alpha, 10.0 ** (snr_db / 10.0))

    def replace(self, **changes):
        fields = dict(lambda_bs=self.lambda_bs, lambda_e=self.lambda_e, alpha=self.alpha, snr=self.snr)
        fields.update(changes)
        return NetworkParams(**fields)


@dataclass(frozen=True)
class Threshold:
    """Secrecy-rate threshold ``r0`` and its linear form ``beta = 2**r0``."""

    r0: float = 0.0

    def __post_init__(self):
        if not self.r0 >= 0:
            raise ValueError(f"threshold must be nonnegative, got {self.r0}")

    @property
    def beta(self):
        return 2.0**self.r0


def _r0(t):
    r0 = t.r0 if isinstance(t, Threshold) else np.asarray(t, dtype=float)
    if np.any(np.asarray(r0) < 0):
        raise ValueError("threshold must be nonnegative")
    return r0


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _prefactor(p):
    return p.alpha / (2.0 * LN2)


def ccdf_s1(p, t):
    """Nearest BS, full eavesdropper information: exact CCDF."""
    r0 = _r0(t)
    return _out(1.0 / (1.0 + p.ratio * _growth(r0, p.alpha)))


def mean_s1(p):
    """Nearest BS, full eavesdropper information: exact mean."""
    return _prefactor(p) * math.log1p(p.lambda_bs / p.lambda_e)


def ccdf_s2_upper_pgfl(p, t):
    """Optimal BS: upper bound on the CCDF from Jensen's inequality on the
    probability generating functional."""
    r0 = _r0(t)
    x = p.lambda_bs / (p.lambda_e * _growth(r0, p.alpha))
    return _out(-np.expm1(-x))


def ccdf_s2_lower(p, t):
    """Optimal BS: lower bound on the CCDF (the nearest BS is one option)."""
    return ccdf_s1(p, t)


def _voronoi_shrink(p, r0):
    with np.errstate(over="ignore"):
        return 4.0 / (1.0 + _growth(r0, p.alpha, 1.0)) ** 2 * (p.lambda_bs / p.lambda_e)


def ccdf_s2_upper_voronoi(p, t, law=CellAreaLaw(), method="closed", n_samples=200_000, rng=None):
    """Optimal BS: upper bound on the CCDF via the shrunken Voronoi cell of
    the origin among the eavesdroppers.

    ``method="closed"`` uses the gamma-law Laplace transform; ``"sampled"``
    averages ``exp(-s V)`` over ``n_samples`` gamma draws from ``rng``
    instead, which exposes the Monte Carlo spread of that expectation.
    """
    s = _voronoi_shrink(p, _r0(t))
    if method == "closed":
        return _out(1.0 - cell_area_laplace(law, s))
    if method == "sampled":
        if rng is None:
            rng = np.random.default_rng()
        v = sample_cell_area(law, rng, size=n_samples)
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        vals = np.array([1.0 - np.mean(np.exp(-si * v)) for si in s_arr])
        return _out(vals.reshape(np.shape(s)))
    raise ValueError(f"unknown method {method!r}")


def coverage_s2_exact_r0zero(p, law=CellAreaLaw()):
    """Optimal BS: probability of a strictly positive secrecy rate.

    At zero threshold the shrunken cell equals the cell, so the Voronoi bound
    is tight (up to the gamma fit).
    """
    return ccdf_s2_upper_voronoi(p, 0.0, law)


def mean_s2_upper(p):
    """Optimal BS: upper bound on the mean, the integral of
    :func:`ccdf_s2_upper_pgfl` over the threshold."""
    x = p.lambda_bs / p.lambda_e
    return _prefactor(p) * _ein(x)


def _ein(x):
    # gamma + ln x + E1(x) = int_0^x (1 - e^-v)/v dv, summed directly for
    # small x where the three terms cancel
    if x < 0.5:
        total, term = 0.0, -1.0
        for k in range(1, 200):
            term *= -x / k
            total += term / k
            if abs(term / k) < 1e-17 * abs(total):
                break
        return total
    return EULER_GAMMA + math.log(x) + exp_integral_e1(x)


def mean_s2_lower(p):
    """Optimal BS: lower bound on the mean, identical to :func:`mean_s1`."""
    return mean_s1(p)


def mean_s2_upper_voronoi(p, law=CellAreaLaw(), r0_max=None):
    """Integral of the Voronoi-cell CCDF bound over the threshold.

    No closed form is available; adaptive quadrature is used.
    """
    def f(r0):
        return ccdf_s2_upper_voronoi(p, r0, law)

    upper = r0_max if r0_max is not None else np.inf
    val, _ = integrate.quad(f, 0.0, upper, limit=400, epsabs=1e-12, epsrel=1e-10)
    return val


def ccdf_s3_cell_lower(p, t):
    """Nearest BS, intracell information only: lower bound on the CCDF."""
    r0 = _r0(t)
    return _out(1.0 / (1.0 + (p.ratio + 4.0) * _growth(r0, p.alpha)))


def mean_s3_cell_lower(p):
    """Nearest BS, intracell information only: lower bound on the mean."""
    return _prefactor(p) * math.log1p(p.lambda_bs / (4.0 * p.lambda_bs + p.lambda_e))


def ccdf_s3_radius(p, t, d0):
    """Nearest BS, eavesdropper locations known within ``d0`` of the serving
    BS: exact CCDF."""
    r0 = _r0(t)
    d0 = np.asarray(d0, dtype=float)
    if np.any(d0 < 0):
        raise ValueError("detection radius must be nonnegative")
    g = _growth(r0, p.alpha)
    known = -np.expm1(-math.pi * (p.lambda_e + p.lambda_bs / g) * d0**2)
    return _out(known / (1.0 + p.ratio * g))


def mean_s3_radius(p, d0):
    """Nearest BS, eavesdropper locations known within ``d0``: exact mean.

    Requires ``d0 > 0``; at ``d0 == 0`` the rate is zero almost surely.
    """
    d0 = np.asarray(d0, dtype=float)
    if np.any(d0 <= 0):
        raise ValueError("mean over detection radius requires d0 > 0")
    a = math.pi * p.lambda_e * d0**2
    b = math.pi * (p.lambda_e + p.lambda_bs) * d0**2
    return _out(mean_s1(p) - _prefactor(p) * (exp_integral_e1(a) - exp_integral_e1(b)))


def ru_pdf(p, r):
    """Density of the distance from the typical user to its nearest BS."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("distance must be nonnegative")
    lam = p.lambda_bs
    return _out(2.0 * math.pi * lam * r * np.exp(-math.pi * lam * r**2))


def dmin_survival(p, r):
    """``P(D_min > r)`` for the distance from a BS to its cell boundary."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("distance must be nonnegative")
    return _out(np.exp(-4.0 * math.pi * p.lambda_bs * r**2))


def dmin_pdf(p, r):
    """Density of the distance from a BS to its cell boundary."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("distance must be nonnegative")
    lam = p.lambda_bs
    return _out(8.0 * math.pi * lam * r * np.exp(-4.0 * math.pi * lam * r**2))
