"""Special functions and the closed-form constants of the fractional theory.

Every constant is returned as a :class:`ConstantReport` so that the closed
form can travel together with an independent quadrature value.

The Gamma function is evaluated in the log domain with a Lanczos
approximation (g = 7, nine coefficients).  Working with logarithms keeps
``Gamma((n + p) / 2)`` finite for large ``n`` and lets the pole factors of
``G`` be cancelled analytically near the endpoints of ``(0, 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate
from scipy.special import roots_jacobi

from .errors import DomainError

__all__ = [
    "ConstantReport",
    "log_gamma",
    "gamma",
    "sphere_area",
    "ball_volume",
    "constant_K",
    "constant_M",
    "constant_G",
    "sigma_times_G",
    "one_minus_sigma_times_G",
    "limit_constant",
    "lambda_norm",
]

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class ConstantReport:
    name: str
    closed_form: float
    oracle: Optional[float] = None
    rel_err: Optional[float] = None
    inputs: dict = field(default_factory=dict)

    @classmethod
    def build(cls, name, closed_form, oracle=None, **inputs):
        rel = None
        if oracle is not None:
            rel = abs(closed_form - oracle) / abs(closed_form)
        return cls(name, float(closed_form), None if oracle is None else float(oracle), rel, inputs)


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for real ``x > 0``."""
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    if x < 0.5:
        # reflection; sin(pi x) > 0 on (0, 1/2)
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    x -= 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (x + 0.5) * math.log(t) - t + math.log(acc)


def gamma(x: float) -> float:
    return math.exp(log_gamma(x))


def _check_dim(n) -> int:
    if int(n) != n or n < 1:
        raise DomainError(f"dimension must be an integer >= 1, got {n!r}")
    return int(n)


def _check_sigma(sigma: float) -> float:
    sigma = float(sigma)
    if not 0.0 < sigma < 1.0:
        raise DomainError(f"sigma must lie in (0, 1), got {sigma!r}")
    return sigma


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere S_{n-1} in R^n."""
    n = _check_dim(n)
    return 2.0 * math.exp(0.5 * n * math.log(math.pi) - log_gamma(0.5 * n))


def ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n."""
    n = _check_dim(n)
    return math.exp(0.5 * n * math.log(math.pi) - log_gamma(0.5 * n + 1.0))


# --- K_{p,n} = integral over S_{n-1} of |omega . nu|^p -----------------------

def _log_K(p: float, n: int) -> float:
    return (math.log(2.0) + 0.5 * (n - 1) * math.log(math.pi)
            + log_gamma(0.5 * (p + 1.0)) - log_gamma(0.5 * (n + p)))


def _jacobi_on(a: float, b: float, order: int, left_exp: float = 0.0, right_exp: float = 0.0):
    """Gauss-Jacobi nodes on [a, b] for weight (t - a)^left_exp (b - t)^right_exp."""
    x, w = roots_jacobi(order, right_exp, left_exp)
    half = 0.5 * (b - a)
    t = a + half * (x + 1.0)
    return t, w * half ** (1.0 + left_exp + right_exp)


def _abs_cos_power_circle(p: float, order: int) -> float:
    # int_0^{2pi} |cos phi|^p dphi = 4 int_0^{pi/2} sin(s)^p ds, s = pi/2 - phi;
    # sin(s)^p = s^p (sin(s)/s)^p so the s^p factor becomes the Jacobi weight.
    s, w = _jacobi_on(0.0, 0.5 * math.pi, order, left_exp=p)
    smooth = (np.sin(s) / s) ** p
    return 4.0 * float(np.dot(w, smooth))


def _K_sphere_quadrature(p: float, n: int, order: int = 48, samples: int = 1_000_000,
                         seed: int = 20240611) -> float:
    if n == 1:
        return 2.0  # S_0 = {-1, +1}
    if n == 2:
        return _abs_cos_power_circle(p, order)
    if n == 3:
        # polar axis e_3, nu = e_1: omega_1 = sin(theta) cos(phi).
        # theta part: int_0^pi sin^{p+1} = int_{-1}^{1} (1-u^2)^{p/2} du (Jacobi weight).
        _, wt = roots_jacobi(order, 0.5 * p, 0.5 * p)
        return float(wt.sum()) * _abs_cos_power_circle(p, order)
    # n >= 4: symmetrised Monte Carlo over all 2n signed coordinate axes
    rng = np.random.Generator(np.random.Philox(seed))
    total = 0.0
    done = 0
    chunk = 200_000
    while done < samples:
        m = min(chunk, samples - done)
        g = rng.standard_normal((m, n))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        total += float(np.sum(np.abs(g) ** p)) / n
        done += m
    return sphere_area(n) * total / samples


def constant_K(p: float, n: int, method: str = "closed_form") -> ConstantReport:
    """K_{p,n}; ``method='sphere_quadrature'`` also integrates over the sphere."""
    n = _check_dim(n)
    p = float(p)
    if p < 0 or not math.isfinite(p):
        raise DomainError(f"K_(p,n) needs p >= 0, got {p!r}")
    closed = math.exp(_log_K(p, n))
    if method == "closed_form":
        return ConstantReport.build("K", closed, p=p, n=n)
    if method == "sphere_quadrature":
        return ConstantReport.build("K", closed, _K_sphere_quadrature(p, n), p=p, n=n)
    raise DomainError(f"unknown method {method!r}")


# --- M_sigma = int_0^inf 2 (1 - cos t) / t^{1 + 2 sigma} dt -------------------

_M_SPLIT = 50.0


def _M_line_quadrature(sigma: float) -> tuple[float, float]:
    """Returns (value, tail_bound) for the line-integral definition of M."""
    T = _M_SPLIT

    def smooth(t):
        # 2(1 - cos t)/t^2, written to avoid cancellation near 0
        if t < 1e-4:
            return 1.0 - t * t / 12.0
        return (2.0 * math.sin(0.5 * t) / t) ** 2

    # on [0, T]: t^{1-2 sigma} * smooth(t), algebraic endpoint weight at 0
    head, _ = integrate.quad(smooth, 0.0, T, weight="alg", wvar=(1.0 - 2.0 * sigma, 0.0),
                             limit=400, epsabs=0.0, epsrel=1e-13)
    # on [T, inf): 2/t^{1+2s} is exact, the cosine part is a Fourier integral
    plain = T ** (-2.0 * sigma) / sigma
    osc, _ = integrate.quad(lambda t: t ** (-1.0 - 2.0 * sigma), T, np.inf, weight="cos",
                            wvar=1.0, limlst=200, epsabs=1e-15)
    tail_bound = 4.0 / (2.0 * sigma * T ** (2.0 * sigma))
    return head + plain - 2.0 * osc, tail_bound


def _log_M(sigma: float) -> float:
    return math.log(math.pi) - log_gamma(1.0 + 2.0 * sigma) - math.log(math.sin(math.pi * sigma))


def constant_M(sigma: float, method: str = "closed_form") -> ConstantReport:
    sigma = _check_sigma(sigma)
    closed = math.exp(_log_M(sigma))
    if method == "closed_form":
        return ConstantReport.build("M", closed, sigma=sigma)
    if method == "line_quadrature":
        value, _ = _M_line_quadrature(sigma)
        return ConstantReport.build("M", closed, value, sigma=sigma)
    raise DomainError(f"unknown method {method!r}")


# --- G_{sigma,n} = K_{2 sigma, n} M_sigma ---------------------------------------

def _log_G_regular(sigma: float, n: int) -> float:
    """log of G without the 1/sin(pi sigma) factor."""
    return (math.log(2.0) + 0.5 * (n + 1) * math.log(math.pi) + log_gamma(sigma + 0.5)
            - log_gamma(sigma + 0.5 * n) - log_gamma(1.0 + 2.0 * sigma))


def constant_G(sigma: float, n: int) -> ConstantReport:
    """G_{sigma,n} with the factorisation K_{2 sigma,n} * M_sigma as oracle."""
    sigma = _check_sigma(sigma)
    n = _check_dim(n)
    closed = math.exp(_log_G_regular(sigma, n)) / math.sin(math.pi * sigma)
    product = constant_K(2.0 * sigma, n).closed_form * constant_M(sigma).closed_form
    return ConstantReport.build("G", closed, product, sigma=sigma, n=n)


def sigma_times_G(sigma: float, n: int) -> float:
    """sigma * G_{sigma,n}, finite as sigma -> 0+."""
    sigma = _check_sigma(sigma)
    n = _check_dim(n)
    # sigma / sin(pi sigma) = 1 / (pi sinc(sigma)); no cancellation at small sigma
    return math.exp(_log_G_regular(sigma, n)) / (math.pi * float(np.sinc(sigma)))


def one_minus_sigma_times_G(sigma: float, n: int) -> float:
    """(1 - sigma) * G_{sigma,n}, finite as sigma -> 1-."""
    sigma = _check_sigma(sigma)
    n = _check_dim(n)
    return math.exp(_log_G_regular(sigma, n)) / (math.pi * float(np.sinc(1.0 - sigma)))


def limit_constant(direction: str, p: float, n: int) -> float:
    """Constant c of the endpoint limit of sigma^{1-k} (1-sigma)^k |v|^p on R^n."""
    n = _check_dim(n)
    p = float(p)
    if p < 1:
        raise DomainError(f"limit theorems need p >= 1, got {p!r}")
    if direction == "to_one":
        return constant_K(p, n).closed_form / p
    if direction == "to_zero":
        return 4.0 * math.exp(0.5 * n * math.log(math.pi) - log_gamma(0.5 * n)) / p
    raise DomainError(f"direction must be 'to_zero' or 'to_one', got {direction!r}")


def lambda_norm(sigma: float, p: float) -> float:
    """Normalising factor (sigma (1 - sigma))^{1/p}, equal to 1 at sigma = 0."""
    sigma = float(sigma)
    if not 0.0 <= sigma < 1.0:
        raise DomainError(f"sigma must lie in [0, 1), got {sigma!r}")
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p!r}")
    if sigma == 0.0:
        return 1.0
    return (sigma * (1.0 - sigma)) ** (1.0 / p)
