"""Integration domains: the whole space, axis-aligned boxes and balls."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import DomainError
from .specfun import ball_volume

__all__ = ["Domain", "full_space", "box", "ball", "diameter", "scale_map", "parse_domain"]

DEFAULT_TRUNCATION = 8.0


@dataclass(frozen=True)
class Domain:
    kind: str  # "full_space" | "box" | "ball"
    n: int
    lo: Tuple[float, ...] = ()
    hi: Tuple[float, ...] = ()
    center: Tuple[float, ...] = ()
    radius: float = 0.0
    truncation_radius: float = DEFAULT_TRUNCATION

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("dimension must be >= 1")
        if self.kind == "box":
            if len(self.lo) != self.n or len(self.hi) != self.n:
                raise DomainError("box bounds must have one entry per axis")
            if any(not a < b for a, b in zip(self.lo, self.hi)):
                raise DomainError(f"box needs lo < hi componentwise, got {self.lo} / {self.hi}")
        elif self.kind == "ball":
            if len(self.center) != self.n:
                raise DomainError("ball center must have n entries")
            if not self.radius > 0:
                raise DomainError("ball radius must be positive")
        elif self.kind == "full_space":
            if not self.truncation_radius > 0:
                raise DomainError("truncation radius must be positive")
        else:
            raise DomainError(f"unknown domain kind {self.kind!r}")

    @property
    def bounded(self) -> bool:
        return self.kind != "full_space"

    def diameter(self) -> float:
        if self.kind == "box":
            return math.dist(self.lo, self.hi)
        if self.kind == "ball":
            return 2.0 * self.radius
        raise DomainError("the whole space has no diameter")

    def measure(self) -> float:
        if self.kind == "box":
            return float(np.prod(np.subtract(self.hi, self.lo)))
        if self.kind == "ball":
            return ball_volume(self.n) * self.radius ** self.n
        return math.inf

    def contains(self, x) -> np.ndarray:
        """Vectorised membership of the open domain; ``x`` has shape (..., n)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "box":
            return np.all((x > np.asarray(self.lo)) & (x < np.asarray(self.hi)), axis=-1)
        if self.kind == "ball":
            return np.sum((x - np.asarray(self.center)) ** 2, axis=-1) < self.radius ** 2
        return np.ones(x.shape[:-1], dtype=bool)

    def bounding_box(self, origin=None) -> tuple[np.ndarray, np.ndarray]:
        """Box enclosing the domain; for the whole space, the truncation cube around ``origin``."""
        if self.kind == "box":
            return np.asarray(self.lo, float), np.asarray(self.hi, float)
        if self.kind == "ball":
            c = np.asarray(self.center, float)
            return c - self.radius, c + self.radius
        c = np.zeros(self.n) if origin is None else np.asarray(origin, float)
        return c - self.truncation_radius, c + self.truncation_radius

    def scaled(self, factor: float) -> "Domain":
        """Image of the domain under x -> factor * x."""
        if self.kind == "box":
            return box(tuple(factor * a for a in self.lo), tuple(factor * b for b in self.hi))
        if self.kind == "ball":
            return ball(tuple(factor * c for c in self.center), factor * self.radius)
        return full_space(self.n, self.truncation_radius * factor)

    def to_text(self) -> str:
        fmt = lambda v: ",".join(repr(float(a)) for a in v)  # noqa: E731
        if self.kind == "box":
            return "box:" + ";".join(f"{a!r},{b!r}" for a, b in zip(map(float, self.lo), map(float, self.hi)))
        if self.kind == "ball":
            return f"ball:{fmt(self.center)};{float(self.radius)!r}"
        return f"rn:{float(self.truncation_radius)!r}:{self.n}"


def full_space(n: int, truncation_radius: float = DEFAULT_TRUNCATION) -> Domain:
    return Domain("full_space", int(n), truncation_radius=float(truncation_radius))


def box(lo, hi) -> Domain:
    lo = tuple(float(a) for a in np.atleast_1d(lo))
    hi = tuple(float(b) for b in np.atleast_1d(hi))
    return Domain("box", len(lo), lo=lo, hi=hi)


def ball(center, radius: float) -> Domain:
    center = tuple(float(c) for c in np.atleast_1d(center))
    return Domain("ball", len(center), center=center, radius=float(radius))


def diameter(domain: Domain) -> float:
    return domain.diameter()


def scale_map(domain: Domain) -> tuple[Domain, float]:
    """Rescale a bounded domain to unit diameter; returns (scaled domain, R)."""
    if not domain.bounded:
        raise DomainError("scale_map needs a bounded domain")
    R = domain.diameter()
    return domain.scaled(1.0 / R), R


def parse_domain(text: str, n: Optional[int] = None) -> Domain:
    """Parse ``box:0,1``, ``box:0,1;0,2``, ``ball:0,0;1`` or ``rn:8`` / ``rn:8:2``.

    ``n`` supplies the dimension for ``rn`` literals that do not carry one and
    is checked against the literal otherwise.
    """
    try:
        kind, _, body = text.strip().partition(":")
        kind = kind.lower()
        if kind == "box":
            lo, hi = [], []
            for axis in body.split(";"):
                a, b = (float(t) for t in axis.split(","))
                lo.append(a)
                hi.append(b)
            dom = box(lo, hi)
        elif kind == "ball":
            c_text, r_text = body.split(";")
            dom = ball([float(t) for t in c_text.split(",")], float(r_text))
        elif kind in ("rn", "full", "full_space"):
            parts = [t for t in body.split(":") if t]
            radius = float(parts[0]) if parts else DEFAULT_TRUNCATION
            dim = int(parts[1]) if len(parts) > 1 else (n or 1)
            dom = full_space(dim, radius)
        else:
            raise DomainError(f"unknown domain literal {text!r}")
    except DomainError:
        raise
    except (ValueError, TypeError) as exc:
        raise DomainError(f"cannot parse domain literal {text!r}: {exc}") from None
    if n is not None and dom.n != n:
        raise DomainError(f"domain {text!r} has dimension {dom.n}, expected {n}")
    return dom
