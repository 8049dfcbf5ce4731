"""Integer, gradient, Gagliardo and Dini semi-norms plus the averaged modulus.

All results carry the p-th power ``value_p`` as the primary number; the
p-th root is derived from it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .domains import Domain
from .errors import DomainError
from .funcspace import TestFunction, closed_form_seminorm, derivative, evaluate, multi_indices
from .quad import (Estimate, QuadSpec, _Shifted, double_integral, gauss_legendre,
                   integrate_gagliardo_double, integrate_nd, lp_norm_power)
from .specfun import lambda_norm

__all__ = [
    "FracOrder",
    "SeminormResult",
    "integer_seminorm",
    "gradient_seminorm",
    "gagliardo_seminorm",
    "dini_seminorm",
    "averaged_modulus",
    "dini_via_modulus",
    "normalized_seminorm",
]

KINDS = ("integer", "gradient", "gagliardo", "dini", "normalized_lambda", "normalized_one_minus_sigma")


@dataclass(frozen=True)
class FracOrder:
    """Order r = l + sigma of a semi-norm together with its exponent p."""

    l: int
    sigma: float
    p: float = 2.0

    def __post_init__(self):
        if int(self.l) != self.l or self.l < 0:
            raise DomainError(f"l must be a natural number, got {self.l!r}")
        if not 0.0 <= self.sigma < 1.0:
            raise DomainError(f"sigma must lie in [0, 1), got {self.sigma!r}")
        if not self.p >= 1.0:
            raise DomainError(f"p must be >= 1, got {self.p!r}")

    @property
    def r(self) -> float:
        return self.l + self.sigma

    @classmethod
    def from_r(cls, r: float, p: float = 2.0) -> "FracOrder":
        if r < 0:
            raise DomainError(f"order must be nonnegative, got {r!r}")
        l = math.floor(r)
        return cls(l, r - l, p)


@dataclass(frozen=True)
class SeminormResult:
    value_p: float
    value: float
    estimate: Estimate
    order: FracOrder
    domain: Domain
    kind: str

    @classmethod
    def from_estimate(cls, est: Estimate, order: FracOrder, domain: Domain, kind: str,
                      factor: float = 1.0) -> "SeminormResult":
        # cancellation can leave tiny negative values for functions in the kernel
        value_p = float(max(est.value, 0.0) * factor)
        return cls(value_p, value_p ** (1.0 / order.p), est.scaled(factor), order, domain, kind)


def _nd_spec(spec: QuadSpec) -> QuadSpec:
    """Single integrals have no singular kernel; polar_singular falls back to Gauss tensor."""
    if spec.method == "polar_singular":
        return QuadSpec("gauss_tensor", spec.order_or_samples, spec.seed, spec.rel_tol)
    return spec


def _sum(estimates, method: str) -> Estimate:
    total = Estimate(0.0, 0.0, 0, method)
    for est in estimates:
        total = total + est
    return total


def _check_p(p: float) -> float:
    p = float(p)
    if not p >= 1.0:
        raise DomainError(f"p must be >= 1, got {p!r}")
    return p


def integer_seminorm(v: TestFunction, j: int, p: float, domain: Domain,
                     spec: QuadSpec = QuadSpec("gauss_tensor")) -> SeminormResult:
    """|v|_{j,p}^p = sum over |alpha| = j of int |d^alpha v|^p."""
    p = _check_p(p)
    order = FracOrder(j, 0.0, p)
    nd = _nd_spec(spec)
    parts = [lp_norm_power(derivative(v, a), domain, p, nd) for a in multi_indices(j, v.n)]
    return SeminormResult.from_estimate(_sum(parts, nd.method), order, domain, "integer")


def gradient_seminorm(v: TestFunction, j: int, p: float, domain: Domain,
                      spec: QuadSpec = QuadSpec("gauss_tensor")) -> SeminormResult:
    """|grad v|_{j,p}^p = sum over |alpha| = j of int |grad d^alpha v|^p (Euclidean norm)."""
    p = _check_p(p)
    order = FracOrder(j, 0.0, p)
    nd = _nd_spec(spec)
    parts = []
    for a in multi_indices(j, v.n):
        base = derivative(v, a)
        grads = [derivative(base, e) for e in multi_indices(1, v.n)]

        def integrand(x, grads=grads):
            sq = sum(np.abs(evaluate(g, x)) ** 2 for g in grads)
            return sq ** (0.5 * p)

        parts.append(integrate_nd(_Shifted(integrand, base), domain, nd))
    return SeminormResult.from_estimate(_sum(parts, nd.method), order, domain, "gradient")


def gagliardo_seminorm(v: TestFunction, order: FracOrder, domain: Domain,
                       spec: QuadSpec = QuadSpec(), *, radial_boost: int = 1,
                       swapped: bool = False) -> SeminormResult:
    """Sum over |alpha| = l of the double integral with kernel |x - y|^{-n - p sigma}."""
    if not order.sigma > 0:
        raise DomainError("the Gagliardo semi-norm needs sigma > 0")
    parts = [integrate_gagliardo_double(derivative(v, a), domain, order.sigma, order.p, spec,
                                        swapped=swapped, radial_boost=radial_boost)
             for a in multi_indices(order.l, v.n)]
    return SeminormResult.from_estimate(_sum(parts, spec.method), order, domain, "gagliardo")


def _require_bounded(domain: Domain, what: str):
    if not domain.bounded:
        raise DomainError(f"{what} is only defined on bounded domains")


def dini_seminorm(v: TestFunction, l: int, p: float, domain: Domain,
                  spec: QuadSpec = QuadSpec()) -> SeminormResult:
    """Sum over |alpha| = l of the double integral with kernel |x - y|^{-n}."""
    _require_bounded(domain, "the Dini semi-norm")
    p = _check_p(p)
    parts = [double_integral(derivative(v, a), domain, p, 0.0, spec) for a in multi_indices(l, v.n)]
    return SeminormResult.from_estimate(_sum(parts, spec.method), FracOrder(l, 0.0, p), domain, "dini")


def _modulus_estimate(v: TestFunction, t: float, p: float, domain: Domain, spec: QuadSpec) -> Estimate:
    # kernel exponent s = -n turns |x - y|^{-n-s} into 1; Delta_h vanishes off Omega cap (Omega - h)
    est = double_integral(v, domain, p, -float(domain.n), spec, radial_cap=float(t))
    return est.scaled(t ** (-domain.n))


def averaged_modulus(v: TestFunction, t: float, p: float, domain: Domain,
                     spec: QuadSpec = QuadSpec()) -> float:
    """The p-th power of the averaged modulus: t^{-n} int_{|h| <= t} int |Delta_h v|^p dx dh."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    p = _check_p(p)
    return float(max(_modulus_estimate(v, t, p, domain, spec).value, 0.0))


def _dini_from_modulus(v: TestFunction, p: float, domain: Domain, spec: QuadSpec,
                       levels: int, t_order: int) -> tuple[float, float]:
    """n int_0^inf wbar(t)/t dt on log-spaced panels of (0, d] plus the exact tail."""
    n = domain.n
    d = domain.diameter()
    t_hi, w_hi = gauss_legendre(t_order)
    t_lo, w_lo = gauss_legendre(max(2, t_order // 2))
    fine = coarse = 0.0
    for k in range(levels):
        a, b = d * 2.0 ** (-k - 1), d * 2.0 ** (-k)
        # in s = log t the panel integrand is wbar(e^s); GL in s
        la, lb = math.log(a), math.log(b)
        for nodes, weights, acc in ((t_hi, w_hi, "fine"), (t_lo, w_lo, "coarse")):
            s = la + (lb - la) * nodes
            vals = [_modulus_estimate(v, math.exp(si), p, domain, spec).value for si in s]
            part = (lb - la) * float(np.dot(weights, vals))
            if acc == "fine":
                fine += part
            else:
                coarse += part
    # below t_min the modulus behaves like t^p, so int_0^{t_min} wbar/t = wbar(t_min)/p
    t_min = d * 2.0 ** (-levels)
    head = _modulus_estimate(v, t_min, p, domain, spec).value / p
    # beyond d every admissible h is included: wbar(t) = t^{-n} J with J = d^n wbar(d)
    J = _modulus_estimate(v, d, p, domain, spec).value * d ** n
    tail = J * d ** (-n) / n
    value = n * (fine + head + tail)
    return value, n * (abs(fine - coarse) + head * 2.0 ** (-levels))


def dini_via_modulus(v: TestFunction, l: int, p: float, domain: Domain,
                     spec: QuadSpec = QuadSpec(), *, levels: int = 24, t_order: int = 8) -> float:
    """Dini semi-norm (p-th power) through n int_0^inf wbar(t)_p^p / t dt, per derivative."""
    _require_bounded(domain, "the Dini semi-norm")
    p = _check_p(p)
    total = 0.0
    for a in multi_indices(l, v.n):
        dv = derivative(v, a)
        if dv.is_zero:
            continue
        total += _dini_from_modulus(dv, p, domain, spec, levels, t_order)[0]
    return float(max(total, 0.0))


def normalized_seminorm(v: TestFunction, order: FracOrder, domain: Domain, flavor: str = "lambda",
                        spec: QuadSpec = QuadSpec(), *, radial_boost: int = 1) -> SeminormResult:
    """lambda_{sigma,p} |v|_{r,p} or, on bounded domains, (1 - sigma)^{1/p} |v|_{r,p}."""
    if flavor not in ("lambda", "one_minus_sigma"):
        raise DomainError(f"flavor must be 'lambda' or 'one_minus_sigma', got {flavor!r}")
    if flavor == "one_minus_sigma" and not domain.bounded:
        raise DomainError("the (1 - sigma) normalisation is used on bounded domains")
    if order.sigma == 0:
        base = integer_seminorm(v, order.l, order.p, domain, spec)
    else:
        base = gagliardo_seminorm(v, order, domain, spec, radial_boost=radial_boost)
    if flavor == "lambda":
        factor_p = lambda_norm(order.sigma, order.p) ** order.p
    else:
        factor_p = 1.0 - order.sigma
    kind = f"normalized_{flavor}"
    return SeminormResult.from_estimate(base.estimate, order, domain, kind, factor_p)


def closed_form_or_none(v: TestFunction, order: FracOrder, domain: Domain,
                        kind: str = "gagliardo") -> Optional[float]:
    """Registry lookup matching a SeminormResult kind (used for CLI references)."""
    mapping = {"integer": "sobolev", "gagliardo": "sobolev", "gradient": "gradient", "dini": "dini"}
    if kind not in mapping:
        return None
    return closed_form_seminorm(v, order.r, order.p, domain, mapping[kind])
