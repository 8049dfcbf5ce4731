import math

import numpy as np
from hypothesis import given, settings, strategies as st

from fracsob.domains import ball, box, full_space, scale_map
from fracsob.funcspace import (derivative, dilate, evaluate, gaussian, multi_indices, multinomial,
                               poly_gaussian)
from fracsob.limits import extrapolate
from fracsob.quad import QuadSpec, integrate_gagliardo_double
from fracsob.specfun import constant_G, constant_K, constant_M, sphere_area
from fracsob.spectral import gagliardo_via_spectral

FAST = settings(max_examples=30, deadline=None)
sigmas = st.floats(0.01, 0.99)
dims = st.integers(1, 4)


@FAST
@given(dims, st.integers(0, 5), st.floats(-2, 2), st.floats(-2, 2))
def test_multinomial_expansion(n, l, a, b):
    # (x_1 + ... + x_n)^l = sum over |alpha| = l of multinomial * x^alpha
    x = np.linspace(a, b, n) if n > 1 else np.array([a])
    lhs = float(np.sum(x)) ** l
    rhs = sum(multinomial(l, al) * float(np.prod(x ** np.array(al))) for al in multi_indices(l, n))
    assert math.isclose(lhs, rhs, rel_tol=1e-10, abs_tol=1e-10)


@FAST
@given(sigmas, dims)
def test_G_factorises(sigma, n):
    G = constant_G(sigma, n).closed_form
    K = constant_K(2 * sigma, n).closed_form
    M = constant_M(sigma).closed_form
    assert math.isclose(G, K * M, rel_tol=1e-12)


@FAST
@given(st.floats(0.1, 6.0), st.integers(2, 4))
def test_K_is_sphere_average_of_cos_power(p, n):
    # K_{p,n} = int_{S^{n-1}} |e . w|^p dw; at p = 2 that is |S^{n-1}| / n
    K2 = constant_K(2.0, n).closed_form
    assert math.isclose(K2 * n, sphere_area(n), rel_tol=1e-12)
    assert constant_K(p, n).closed_form <= sphere_area(n) * (1 + 1e-12)


@FAST
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=3), st.floats(0.1, 5.0))
def test_scale_map_gives_unit_diameter(center, radius):
    for dom in (ball(center, radius), box(center, [c + radius * (i + 1) for i, c in enumerate(center)])):
        scaled, R = scale_map(dom)
        assert math.isclose(scaled.diameter(), 1.0, rel_tol=1e-12)
        assert math.isclose(R, dom.diameter(), rel_tol=1e-12)


@FAST
@given(st.floats(-5, 5), st.lists(st.floats(-3, 3), min_size=1, max_size=4))
def test_richardson_exact_on_polynomials(limit, coeffs):
    d = [2.0 ** -j for j in range(2, 9)]
    y = [limit + sum(c * t ** (k + 1) for k, c in enumerate(coeffs)) for t in d]
    est, _ = extrapolate(d, y, "richardson")
    assert math.isclose(est, limit, rel_tol=1e-8, abs_tol=1e-8)


@FAST
@given(st.integers(0, 3), st.integers(0, 3), st.floats(0.2, 2.0))
def test_partial_derivatives_commute(i, j, a):
    f = poly_gaussian((1, 2), a)
    ab = derivative(derivative(f, (i, 0)), (0, j))
    ba = derivative(derivative(f, (0, j)), (i, 0))
    x = np.array([[0.3, -0.7], [1.1, 0.2]])
    assert np.allclose(evaluate(ab, x), evaluate(ba, x), rtol=1e-12, atol=1e-12)


@FAST
@given(sigmas, st.floats(0.3, 2.0))
def test_spectral_scaling_law(sigma, R):
    # |v(R .)|^2_{sigma,2} = R^{2 sigma - n} |v|^2_{sigma,2}
    v = gaussian(n=2)
    lhs = gagliardo_via_spectral(dilate(v, R), sigma)
    rhs = R ** (2 * sigma - 2) * gagliardo_via_spectral(v, sigma)
    assert math.isclose(lhs, rhs, rel_tol=1e-10)


@settings(max_examples=10, deadline=None)
@given(st.floats(0.1, 0.9), st.floats(1.0, 3.0), st.floats(-0.5, 0.5))
def test_double_integral_nonnegative_and_symmetric(sigma, p, c):
    v = gaussian(0.8, c)
    dom = box([-1.0], [1.5])
    spec = QuadSpec(order_or_samples=12)
    a = integrate_gagliardo_double(v, dom, sigma, p, spec).value
    b = integrate_gagliardo_double(v, dom, sigma, p, spec, swapped=True).value
    assert a >= 0
    assert math.isclose(a, b, rel_tol=1e-9)


@settings(max_examples=10, deadline=None)
@given(sigmas)
def test_whole_space_double_integral_nonnegative(sigma):
    est = integrate_gagliardo_double(gaussian(), full_space(1), sigma, 2.0, QuadSpec(order_or_samples=8))
    assert est.value >= 0 and est.err_abs >= 0
