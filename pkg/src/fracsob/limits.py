"""Endpoint limit studies for the fractional semi-norms.

A study sweeps sigma toward 0 or 1, records

    sigma^{1-k} (1 - sigma)^k |v|_{l+sigma,p}^p

and extrapolates the sequence to the endpoint.  The reference value is the
right-hand side of the matching limit theorem:

    bounded or whole space, sigma -> 1, k = 1:  K_{p,n}/p * |grad v|_{l,p}^p
    whole space, sigma -> 0, k = 0:              4 pi^{n/2}/(p Gamma(n/2)) * |v|_{l,p}^p
    bounded, sigma -> 0, k = 1:                  |v|_{l,Dini(p)}^p
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .domains import Domain
from .errors import DomainError, EvaluationError, UsageError
from .funcspace import TestFunction
from .quad import QuadSpec, double_integral
from .seminorms import (FracOrder, dini_seminorm, gagliardo_seminorm, gradient_seminorm,
                        integer_seminorm)
from .specfun import limit_constant

__all__ = [
    "LimitStudy",
    "default_sigmas",
    "extrapolate",
    "reference_rhs",
    "limit_study",
    "dini_limit_study",
    "lateral_limits",
    "rho_epsilon",
    "bbm_mollified_functional",
]

DIRECTIONS = ("to_zero", "to_one")
EXTRAPOLATIONS = ("none", "linear", "richardson")
MAX_FAILED_FRACTION = 0.2
MAX_RADIAL_BOOST = 64


@dataclass(frozen=True)
class LimitStudy:
    direction: str
    k: int
    l: int
    p: float
    domain: Domain
    sigmas: tuple
    values: tuple
    extrapolated: float
    reference: float
    rel_err: float
    extrapolation: str = "richardson"
    extrapolation_err: float = 0.0
    label: str = "gagliardo"
    failures: tuple = field(default_factory=tuple)

    @property
    def distances(self) -> np.ndarray:
        s = np.asarray(self.sigmas)
        return 1.0 - s if self.direction == "to_one" else s


def _check_direction(direction: str):
    if direction not in DIRECTIONS:
        raise UsageError(f"direction must be one of {DIRECTIONS}, got {direction!r}")


def _check_case(domain: Domain, direction: str, k: int):
    _check_direction(direction)
    if k not in (0, 1):
        raise UsageError(f"k must be 0 or 1, got {k!r}")
    valid = {("to_zero", 1), ("to_one", 1)} if domain.bounded else {("to_zero", 0), ("to_one", 1)}
    if (direction, k) not in valid:
        where = "bounded domains" if domain.bounded else "the whole space"
        raise UsageError(f"({direction}, k={k}) is not a limit case on {where}; valid: {sorted(valid)}")


def default_sigmas(direction: str, j_min: int = 2, j_max: int = 8) -> tuple:
    """Geometric approach: distance 2^{-j} from the endpoint, j = j_min..j_max."""
    _check_direction(direction)
    d = [2.0 ** (-j) for j in range(j_min, j_max + 1)]
    return tuple(1.0 - x for x in d) if direction == "to_one" else tuple(d)


def _validate_sigmas(sigmas: Sequence[float], direction: str) -> tuple:
    s = tuple(float(x) for x in sigmas)
    if len(s) < 2:
        raise UsageError("a study needs at least two sigma values")
    if any(not 0.0 < x < 1.0 for x in s):
        raise UsageError("all sigmas must lie in (0, 1)")
    dist = [1.0 - x if direction == "to_one" else x for x in s]
    if any(b >= a for a, b in zip(dist, dist[1:])):
        raise UsageError("sigmas must approach the endpoint strictly monotonically")
    return s


def extrapolate(dist: Sequence[float], values: Sequence[float], scheme: str = "richardson") -> tuple[float, float]:
    """Estimate the limit of ``values`` as ``dist`` -> 0; returns (limit, error estimate).

    ``linear`` fits value = L + a * dist by least squares.  ``richardson``
    eliminates successive powers of ``dist`` (the Neville table at zero; on
    a ratio-2 geometric grid each column divides by 2^k - 1).
    """
    d = np.asarray(dist, float)
    y = np.asarray(values, float)
    if scheme == "none":
        return float(y[-1]), float(abs(y[-1] - y[-2])) if y.size > 1 else 0.0
    if scheme == "linear":
        A = np.stack([np.ones_like(d), d], axis=1)
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        resid = y - A @ coef
        return float(coef[0]), float(np.sqrt(np.mean(resid ** 2)))
    if scheme == "richardson":
        table = [list(y)]
        for k in range(1, y.size):
            prev = table[-1]
            col = []
            for i in range(k, y.size):
                # prev[i - k + 1] uses points i-k+1..i, prev[i - k] uses i-k..i-1
                a, b = prev[i - k], prev[i - k + 1]
                col.append(b + (b - a) * d[i] / (d[i - k] - d[i]))
            table.append(col)
        best = table[-1][-1]
        err = abs(best - table[-2][-1]) if len(table) > 1 else 0.0
        return float(best), float(err)
    raise UsageError(f"extrapolation must be one of {EXTRAPOLATIONS}, got {scheme!r}")


def reference_rhs(v: TestFunction, l: int, p: float, domain: Domain, direction: str, k: int,
                  spec: QuadSpec = QuadSpec()) -> float:
    """Right-hand side of the limit theorem for the (direction, k) case."""
    _check_case(domain, direction, k)
    n = domain.n
    if direction == "to_one":
        return limit_constant("to_one", p, n) * gradient_seminorm(v, l, p, domain, spec).value_p
    if not domain.bounded:
        return limit_constant("to_zero", p, n) * integer_seminorm(v, l, p, domain, spec).value_p
    return dini_seminorm(v, l, p, domain, spec).value_p


def _boost(sigma: float, direction: str) -> int:
    # quadrature budget ~ (1 - sigma)^{-1/2} near sigma = 1, capped
    if direction != "to_one":
        return 1
    return int(min(MAX_RADIAL_BOOST, math.ceil((1.0 - sigma) ** -0.5)))


def _sweep(v, l, p, domain, direction, sigmas, spec, weight):
    values, failures = [], []
    for s in sigmas:
        try:
            res = gagliardo_seminorm(v, FracOrder(l, s, p), domain, spec, radial_boost=_boost(s, direction))
            values.append(weight(s) * res.value_p)
        except (EvaluationError, ArithmeticError, FloatingPointError) as exc:
            values.append(math.nan)
            failures.append((s, str(exc)))
    if len(failures) > MAX_FAILED_FRACTION * len(sigmas):
        raise EvaluationError(f"{len(failures)} of {len(sigmas)} sigma points failed: {failures[0][1]}")
    return values, failures


def _finish(direction, k, l, p, domain, sigmas, values, failures, reference, extrapolation, label):
    ok = [(s, y) for s, y in zip(sigmas, values) if math.isfinite(y)]
    dist = [1.0 - s if direction == "to_one" else s for s, _ in ok]
    limit, err = extrapolate(dist, [y for _, y in ok], extrapolation)
    if reference != 0:
        rel = abs(limit - reference) / abs(reference)
    else:
        rel = abs(limit)
    return LimitStudy(direction, k, l, p, domain, tuple(sigmas), tuple(values), limit, reference, rel,
                      extrapolation, err, label, tuple(failures))


def limit_study(v: TestFunction, l: int, p: float, domain: Domain, direction: str, k: int,
                sigmas: Optional[Sequence[float]] = None, spec: QuadSpec = QuadSpec(),
                extrapolation: str = "richardson") -> LimitStudy:
    """Sweep sigma^{1-k} (1 - sigma)^k |v|_{l+sigma,p}^p toward the endpoint and extrapolate."""
    _check_case(domain, direction, k)
    if extrapolation not in EXTRAPOLATIONS:
        raise UsageError(f"extrapolation must be one of {EXTRAPOLATIONS}, got {extrapolation!r}")
    sigmas = _validate_sigmas(default_sigmas(direction) if sigmas is None else sigmas, direction)
    weight = (lambda s: s) if k == 0 else (lambda s: 1.0 - s)
    values, failures = _sweep(v, l, p, domain, direction, sigmas, spec, weight)
    reference = reference_rhs(v, l, p, domain, direction, k, spec)
    return _finish(direction, k, l, p, domain, sigmas, values, failures, reference, extrapolation, "gagliardo")


def dini_limit_study(v: TestFunction, l: int, p: float, domain: Domain,
                     sigmas: Optional[Sequence[float]] = None, spec: QuadSpec = QuadSpec(),
                     extrapolation: str = "richardson") -> LimitStudy:
    """Raw |v|_{l+sigma,p}^p as sigma -> 0 on a bounded domain, against the Dini value.

    The values carry no sigma prefactor, so the study is recorded with k = 0.
    """
    if not domain.bounded:
        raise UsageError("the Dini limit is a bounded-domain statement")
    sigmas = _validate_sigmas(default_sigmas("to_zero") if sigmas is None else sigmas, "to_zero")
    values, failures = _sweep(v, l, p, domain, "to_zero", sigmas, spec, lambda s: 1.0)
    reference = dini_seminorm(v, l, p, domain, spec).value_p
    return _finish("to_zero", 0, l, p, domain, sigmas, values, failures, reference, extrapolation, "dini")


def lateral_limits(v: TestFunction, l: int, p: float, domain: Domain, spec: QuadSpec = QuadSpec(),
                   extrapolation: str = "richardson") -> dict:
    """Extrapolated endpoint values of the normalised semi-norm lambda_{sigma,p}^p |v|^p.

    On the whole space lambda^p = sigma (1 - sigma), so both endpoints are finite.
    Only the computed limits are reported; no constant is asserted.
    """
    out = {}
    for direction in DIRECTIONS:
        sigmas = default_sigmas(direction)
        values, failures = _sweep(v, l, p, domain, direction, sigmas, spec, lambda s: s * (1.0 - s))
        dist = [1.0 - s if direction == "to_one" else s for s in sigmas]
        ok = [(d, y) for d, y in zip(dist, values) if math.isfinite(y)]
        limit, err = extrapolate([d for d, _ in ok], [y for _, y in ok], extrapolation)
        out[direction] = {"sigmas": sigmas, "values": tuple(values), "limit": limit, "err": err}
    return out


def rho_epsilon(t, eps: float, d: float, n: int):
    """Mollifier eps d^{-eps} t^{eps - n} on (0, d], zero beyond; int rho t^{n-1} dt = 1."""
    t = np.asarray(t, float)
    with np.errstate(divide="ignore"):
        val = eps * d ** (-eps) * t ** (eps - n)
    return np.where((t > 0) & (t <= d), val, 0.0)


def bbm_mollified_functional(v: TestFunction, p: float, domain: Domain, eps: float,
                             spec: QuadSpec = QuadSpec()) -> float:
    """int int |v(x) - v(y)|^p |x - y|^{-p} rho_eps(|x - y|) dx dy on a bounded domain.

    Every pair in the domain has |x - y| <= d, so the functional equals
    eps d^{-eps} times the double integral with kernel |x - y|^{-n - (p - eps)}.
    """
    if not domain.bounded:
        raise DomainError("the mollified functional is defined on bounded domains")
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps!r}")
    d = domain.diameter()
    est = double_integral(v, domain, p, p - eps, spec)
    return eps * d ** (-eps) * est.value
