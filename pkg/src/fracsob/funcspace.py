"""Analytic test functions with exact derivatives and Fourier transforms.

Every catalog member has the form

    f(x) = P(x) * exp(-a |x - c|^2) * exp(-i k . x)

with ``P`` a polynomial in ``n`` variables (complex coefficients allowed),
``a >= 0`` an isotropic Gaussian rate, ``c`` a centre and ``k`` a phase
vector.  The class is closed under differentiation, and for ``a > 0`` and
``k = 0`` also under the Fourier transform

    f^(xi) = int f(x) exp(-i x . xi) dx,

whose image carries a phase ``k = c``.  Pure polynomials (``a = 0``) are
only meaningful on bounded domains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from .domains import Domain
from .errors import DomainError, UnsupportedFunctionError

__all__ = [
    "TestFunction",
    "multi_indices",
    "multinomial",
    "gaussian",
    "poly_gaussian",
    "affine",
    "polynomial",
    "constant",
    "zero",
    "tensor",
    "evaluate",
    "derivative",
    "fourier_transform",
    "times_monomial",
    "dilate",
    "closed_form_seminorm",
    "parse_function",
]

MultiIndex = Tuple[int, ...]


def multi_indices(order: int, n: int) -> Iterator[MultiIndex]:
    """All multi-indices alpha in N^n with |alpha| = order, in lexicographic order."""
    if order < 0:
        return
    if n == 1:
        yield (order,)
        return
    for first in range(order, -1, -1):
        for rest in multi_indices(order - first, n - 1):
            yield (first,) + rest


def multinomial(order: int, alpha: MultiIndex) -> int:
    if sum(alpha) != order or any(a < 0 for a in alpha):
        raise DomainError(f"{alpha} is not a multi-index of order {order}")
    out = math.factorial(order)
    for a in alpha:
        out //= math.factorial(a)
    return out


def _clean(terms: Dict[MultiIndex, complex]) -> Tuple[Tuple[MultiIndex, complex], ...]:
    return tuple(sorted((e, complex(c)) for e, c in terms.items() if c != 0))


@dataclass(frozen=True)
class TestFunction:
    __test__ = False  # not a pytest class

    n: int
    terms: Tuple[Tuple[MultiIndex, complex], ...]
    rate: float = 0.0
    center: Tuple[float, ...] = ()
    phase: Tuple[float, ...] = ()
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.center:
            object.__setattr__(self, "center", (0.0,) * self.n)
        if not self.phase:
            object.__setattr__(self, "phase", (0.0,) * self.n)
        if len(self.center) != self.n or len(self.phase) != self.n:
            raise DomainError("center/phase must have n entries")
        if self.rate < 0:
            raise DomainError("Gaussian rate must be >= 0")
        for e, _ in self.terms:
            if len(e) != self.n:
                raise DomainError("exponent tuples must have n entries")

    # -- properties ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_real(self) -> bool:
        return not any(self.phase) and all(c.imag == 0 for _, c in self.terms)

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=-1)

    @property
    def square_integrable(self) -> bool:
        return self.rate > 0 or self.is_zero

    @property
    def length_scale(self) -> float:
        """Standard deviation of the Gaussian envelope, 1 / sqrt(2 a)."""
        return 1.0 / math.sqrt(2.0 * self.rate) if self.rate > 0 else 1.0

    def coefficients(self) -> Dict[MultiIndex, complex]:
        return dict(self.terms)

    def with_label(self, label: str) -> "TestFunction":
        return TestFunction(self.n, self.terms, self.rate, self.center, self.phase, label)

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self):
        return self.label or repr(self)


# -- constructors -------------------------------------------------------------

def _vec(v, n: Optional[int] = None) -> Tuple[float, ...]:
    out = tuple(float(t) for t in np.atleast_1d(v))
    if n is not None and len(out) == 1 and n > 1:
        out = out * n
    return out


def gaussian(a: float = 0.5, center=0.0, n: int = 1) -> TestFunction:
    """exp(-a |x - center|^2)."""
    c = _vec(center, n)
    n = len(c)
    text = f"gauss:a={a!r},c=" + ";".join(repr(t) for t in c)
    return TestFunction(n, (((0,) * n, 1 + 0j),), float(a), c, label=text)


def poly_gaussian(alpha, a: float = 0.5) -> TestFunction:
    """x^alpha exp(-a |x|^2)."""
    alpha = tuple(int(t) for t in np.atleast_1d(alpha))
    text = f"polygauss:alpha={';'.join(map(str, alpha))},a={a!r}"
    return TestFunction(len(alpha), ((alpha, 1 + 0j),), float(a), label=text)


def affine(weights, offset: float = 0.0) -> TestFunction:
    """w . x + b, intended for bounded domains."""
    w = _vec(weights)
    n = len(w)
    terms = {}
    for i, wi in enumerate(w):
        e = [0] * n
        e[i] = 1
        terms[tuple(e)] = wi
    terms[(0,) * n] = offset
    text = f"affine:w={';'.join(repr(t) for t in w)},b={float(offset)!r}"
    return TestFunction(n, _clean(terms), label=text)


def polynomial(coeffs: Dict[MultiIndex, float], n: int) -> TestFunction:
    return TestFunction(n, _clean({tuple(e): c for e, c in coeffs.items()}))


def constant(value: float = 1.0, n: int = 1) -> TestFunction:
    return TestFunction(n, _clean({(0,) * n: value}), label=f"const:value={float(value)!r},n={n}")


def zero(n: int = 1) -> TestFunction:
    return TestFunction(n, (), label=f"zero:n={n}")


def tensor(f: TestFunction, g: TestFunction) -> TestFunction:
    """(x, y) -> f(x) g(y); both factors must share the Gaussian rate."""
    if f.rate != g.rate:
        raise UnsupportedFunctionError("tensor product needs equal Gaussian rates")
    terms: Dict[MultiIndex, complex] = {}
    for (e1, c1), (e2, c2) in product(f.terms, g.terms):
        terms[e1 + e2] = terms.get(e1 + e2, 0) + c1 * c2
    label = f"tensor({f.label})({g.label})" if f.label and g.label else ""
    return TestFunction(f.n + g.n, _clean(terms), f.rate, f.center + g.center, f.phase + g.phase, label)


# -- evaluation & calculus ---------------------------------------------------

def evaluate(f: TestFunction, x) -> np.ndarray:
    """Evaluate ``f`` at points ``x`` of shape (..., n); real output for real ``f``."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 or x.shape[-1] != f.n:
        if f.n == 1 and x.ndim <= 1 and (x.ndim == 0 or x.shape[-1] != 1):
            x = x[..., None]
        else:
            raise DomainError(f"point dimension {x.shape[-1:]} does not match n={f.n}")
    real = f.is_real
    out = np.zeros(x.shape[:-1], dtype=float if real else complex)
    for e, c in f.terms:
        mono = np.ones(x.shape[:-1])
        for i, k in enumerate(e):
            if k:
                mono = mono * x[..., i] ** k
        out = out + (c.real if real else c) * mono
    if f.rate:
        d = x - np.asarray(f.center)
        out = out * np.exp(-f.rate * np.sum(d * d, axis=-1))
    if any(f.phase):
        out = out * np.exp(-1j * (x @ np.asarray(f.phase)))
    return out


def _partial(f: TestFunction, i: int) -> TestFunction:
    # d_i [P E] = (d_i P - 2 a (x_i - c_i) P - i k_i P) E
    terms: Dict[MultiIndex, complex] = {}

    def add(e, c):
        terms[e] = terms.get(e, 0) + c

    for e, c in f.terms:
        if e[i]:
            lowered = e[:i] + (e[i] - 1,) + e[i + 1:]
            add(lowered, c * e[i])
        if f.rate:
            raised = e[:i] + (e[i] + 1,) + e[i + 1:]
            add(raised, -2.0 * f.rate * c)
            if f.center[i]:
                add(e, 2.0 * f.rate * f.center[i] * c)
        if f.phase[i]:
            add(e, -1j * f.phase[i] * c)
    return TestFunction(f.n, _clean(terms), f.rate, f.center, f.phase)


def derivative(f: TestFunction, alpha) -> TestFunction:
    """Exact mixed partial derivative d^alpha f."""
    alpha = tuple(int(a) for a in np.atleast_1d(alpha))
    if len(alpha) != f.n or any(a < 0 for a in alpha):
        raise DomainError(f"multi-index {alpha} invalid for n={f.n}")
    out = f
    for i, k in enumerate(alpha):
        for _ in range(k):
            out = _partial(out, i)
    if f.label and any(alpha):
        out = out.with_label(f"d{list(alpha)}({f.label})")
    elif f.label:
        out = out.with_label(f.label)
    return out


def _shift_polynomial(f: TestFunction) -> Dict[MultiIndex, complex]:
    """Coefficients of Q(y) = P(y + c)."""
    out: Dict[MultiIndex, complex] = {}
    c = f.center
    for e, coef in f.terms:
        # expand prod_i (y_i + c_i)^{e_i}
        for sub in product(*(range(k + 1) for k in e)):
            w = coef
            for i, (k, j) in enumerate(zip(e, sub)):
                if j < k:
                    w = w * math.comb(k, j) * c[i] ** (k - j)
            out[sub] = out.get(sub, 0) + w
    return out


def fourier_transform(f: TestFunction) -> TestFunction:
    """Closed-form transform f^(xi) = int f(x) exp(-i x . xi) dx."""
    if f.is_zero:
        return zero(f.n)
    if f.rate <= 0:
        raise UnsupportedFunctionError("only Gaussian-class functions have a closed-form transform")
    if any(f.phase):
        raise UnsupportedFunctionError("transform of phase-modulated functions is not supported")
    n, a = f.n, f.rate
    base = TestFunction(n, (((0,) * n, complex((math.pi / a) ** (0.5 * n))),), 1.0 / (4.0 * a))
    total: Dict[MultiIndex, complex] = {}
    for e, coef in _shift_polynomial(f).items():
        if coef == 0:
            continue
        # FT[y^e g] = (i d_xi)^e g^
        g = base
        for i, k in enumerate(e):
            for _ in range(k):
                g = _partial(g, i)
        factor = coef * (1j) ** sum(e)
        for ge, gc in g.terms:
            total[ge] = total.get(ge, 0) + factor * gc
    label = f"FT({f.label})" if f.label else ""
    return TestFunction(n, _clean(total), 1.0 / (4.0 * a), (0.0,) * n, f.center, label)


def dilate(f: TestFunction, factor: float) -> TestFunction:
    """x -> f(factor * x), i.e. the composition with the linear map x -> factor * x."""
    R = float(factor)
    if not R > 0:
        raise DomainError(f"dilation factor must be positive, got {factor!r}")
    terms = {e: c * R ** sum(e) for e, c in f.terms}
    return TestFunction(f.n, _clean(terms), f.rate * R * R, tuple(c / R for c in f.center),
                        tuple(k * R for k in f.phase))


def times_monomial(f: TestFunction, alpha, factor: complex = 1.0) -> TestFunction:
    """factor * x^alpha * f(x)."""
    alpha = tuple(int(a) for a in alpha)
    terms: Dict[MultiIndex, complex] = {}
    for e, c in f.terms:
        k = tuple(a + b for a, b in zip(e, alpha))
        terms[k] = terms.get(k, 0) + factor * c
    return TestFunction(f.n, _clean(terms), f.rate, f.center, f.phase)


# -- closed-form registry ------------------------------------------------------
#
# Every entry below is derived by hand (Gauss integrals, polar coordinates,
# elementary double integrals) and uses math.gamma only, never this package's
# own special functions.
#
#   Gaussian c*exp(-a|x|^2) on R^n:
#     |v|_{0,p}^p   = c^p (pi/(p a))^{n/2}
#     |v|_{1,2}^2   = c^2 a n (pi/(2a))^{n/2}     (= |grad v|_{0,2}^2)
#     |v|_{s,2}^2   = c^2 (pi/(2a))^{n/2} |S_{n-1}| (a/2)^s Gamma(1-s)/s,
#       from int |v(x+h)-v(x)|^2 dx = 2 c^2 (pi/2a)^{n/2} (1 - exp(-a|h|^2/2))
#       and int_0^inf (1 - exp(-b r^2)) r^{-1-2s} dr = b^s Gamma(1-s)/(2s).
#   Affine w x + b on an interval of length L (n = 1):
#     |v|_{s,p}^p       = |w|^p 2 L^{g+2}/((g+1)(g+2)),  g = p - 1 - p s
#     |v|_{0,Dini(p)}^p = |w|^p 2 L^{p+1}/(p(p+1))
#     |v|_{1,p}^p       = |w|^p L

def _sphere_area_ref(n: int) -> float:
    return 2.0 * math.pi ** (0.5 * n) / math.gamma(0.5 * n)


def _pure_gaussian(f: TestFunction) -> Optional[float]:
    if f.rate > 0 and len(f.terms) == 1 and not any(f.terms[0][0]) and not any(f.phase):
        c = f.terms[0][1]
        if c.imag == 0:
            return c.real
    return None


def _affine_1d(f: TestFunction) -> Optional[tuple[float, float]]:
    if f.n != 1 or f.rate or any(f.phase) or f.degree > 1 or not f.is_real:
        return None
    coef = f.coefficients()
    return coef.get((1,), 0j).real, coef.get((0,), 0j).real


def closed_form_seminorm(f: TestFunction, r: float, p: float, domain: Domain,
                         kind: str = "sobolev") -> Optional[float]:
    """Exact |f|^p for registered cases, ``None`` when no closed form is known.

    ``kind`` is ``"sobolev"`` (integer or Gagliardo semi-norm of order r),
    ``"gradient"`` (|grad f|_{r,p}, r integer) or ``"dini"`` (order r integer).
    """
    l = math.floor(r)
    sigma = r - l
    integer = sigma == 0

    if f.is_zero:
        return 0.0
    # polynomials of low degree are in the kernel
    if f.rate == 0 and not any(f.phase) and domain.bounded:
        deg = f.degree
        if kind == "dini" and deg <= l:
            return 0.0
        if kind == "sobolev" and not integer and deg <= l:
            return 0.0
        if kind == "sobolev" and integer and deg <= l - 1:
            return 0.0
        if kind == "gradient" and deg <= l:
            return 0.0

    c = _pure_gaussian(f)
    if c is not None and not domain.bounded:
        n, a = f.n, f.rate
        if kind == "sobolev" and r == 0:
            return abs(c) ** p * (math.pi / (p * a)) ** (0.5 * n)
        if p == 2 and ((kind == "sobolev" and r == 1) or (kind == "gradient" and r == 0)):
            return c * c * a * n * (math.pi / (2 * a)) ** (0.5 * n)
        if kind == "sobolev" and p == 2 and l == 0 and not integer:
            return (c * c * (math.pi / (2 * a)) ** (0.5 * n) * _sphere_area_ref(n)
                    * (0.5 * a) ** sigma * math.gamma(1 - sigma) / sigma)
        return None

    aff = _affine_1d(f)
    if aff is not None and domain.kind in ("box", "ball"):
        w, b = aff
        L = domain.diameter()
        if kind == "sobolev" and l == 0 and not integer:
            g = p - 1 - p * sigma
            return abs(w) ** p * 2 * L ** (g + 2) / ((g + 1) * (g + 2))
        if kind == "dini" and l == 0:
            return abs(w) ** p * 2 * L ** (p + 1) / (p * (p + 1))
        if (kind == "sobolev" and r == 1) or (kind == "gradient" and r == 0):
            return abs(w) ** p * L
        if kind == "sobolev" and r == 0:
            lo = domain.lo[0] if domain.kind == "box" else domain.center[0] - domain.radius
            hi = lo + L
            u, v = w * lo + b, w * hi + b
            if u * v < 0:
                return None
            if w == 0:
                return abs(b) ** p * L
            return abs(abs(v) ** (p + 1) - abs(u) ** (p + 1)) / (abs(w) * (p + 1))
    return None


# -- text format ---------------------------------------------------------------

def _parse_kv(body: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    if not body:
        return out
    for part in body.split(","):
        k, sep, v = part.partition("=")
        if not sep:
            raise DomainError(f"expected key=value, got {part!r}")
        out[k.strip()] = v.strip()
    return out


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(";")]


def parse_function(text: str, n: Optional[int] = None) -> TestFunction:
    """Parse a catalog literal.

    Accepted forms (vector entries separated by ``;``)::

        gauss                      exp(-|x|^2/2) in dimension n
        gauss:a=1,c=0;0            exp(-|x - c|^2)
        polygauss:alpha=1;0,a=0.5  x^alpha exp(-a|x|^2)
        affine                     x_1 (n = 1 unless given)
        affine:w=1;2,b=0.5         w . x + b
        const:value=2              constant
        zero                       zero function
    """
    name, _, body = text.strip().partition(":")
    name = name.lower()
    try:
        kv = _parse_kv(body)
        if name in ("gauss", "gaussian"):
            a = float(kv.get("a", 0.5))
            if "c" in kv:
                c = _floats(kv["c"])
                if n is not None and len(c) == 1:
                    c = c * n
            else:
                c = [0.0] * (n or 1)
            f = gaussian(a, c)
        elif name in ("polygauss", "poly_gaussian"):
            f = poly_gaussian([int(t) for t in kv["alpha"].split(";")], float(kv.get("a", 0.5)))
        elif name == "affine":
            w = _floats(kv["w"]) if "w" in kv else [1.0] + [0.0] * ((n or 1) - 1)
            f = affine(w, float(kv.get("b", 0.0)))
        elif name in ("const", "constant"):
            f = constant(float(kv.get("value", 1.0)), int(kv.get("n", n or 1)))
        elif name == "zero":
            f = zero(int(kv.get("n", n or 1)))
        else:
            raise DomainError(f"unknown test function {text!r}")
    except (KeyError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"cannot parse test function {text!r}: {exc}") from None
    if n is not None and f.n != n:
        raise DomainError(f"function {text!r} has dimension {f.n}, expected {n}")
    return f
