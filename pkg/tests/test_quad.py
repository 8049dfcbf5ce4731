import math

import numpy as np
import pytest

from scipy import integrate

from fracsob.domains import ball, box, full_space
from fracsob.errors import DomainError, EvaluationError
from fracsob.funcspace import affine, closed_form_seminorm, gaussian
from fracsob.quad import (QuadSpec, double_integral, integrate_gagliardo_double, integrate_nd,
                          sphere_rule)


def affine_exact(sigma, p=2.0, L=1.0):
    g = p - 1 - p * sigma
    return 2 * L ** (g + 2) / ((g + 1) * (g + 2))


def test_quadspec_validation():
    with pytest.raises(DomainError):
        QuadSpec("simpson")
    with pytest.raises(DomainError):
        QuadSpec(order_or_samples=1)
    with pytest.raises(DomainError):
        QuadSpec(rel_tol=0.5)
    with pytest.raises(DomainError):
        QuadSpec(seed=-1)


def test_integrate_constant_on_square():
    est = integrate_nd(lambda x: np.ones(x.shape[0]), box([0, 0], [1, 1]), QuadSpec("gauss_tensor", 4))
    assert abs(est.value - 1.0) < 1e-14


def test_integrate_gaussian_on_line():
    est = integrate_nd(lambda x: np.exp(-x[:, 0] ** 2), full_space(1))
    assert est.value == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_integrate_monte_carlo_within_three_standard_errors():
    est = integrate_nd(lambda x: x[:, 0] ** 2, box([0], [1]), QuadSpec("monte_carlo", 1_000_000, seed=42))
    assert abs(est.value - 1 / 3) <= 3 * est.err_abs
    assert est.err_abs > 0


def test_integrate_ball_volume():
    est = integrate_nd(lambda x: np.ones(x.shape[0]), ball([0, 0, 0], 2.0), QuadSpec("gauss_tensor", 8))
    assert est.value == pytest.approx(4 * math.pi / 3 * 8, rel=1e-12)


def test_adaptive_refines():
    est = integrate_nd(lambda x: np.sqrt(x[:, 0]), box([0], [1]), QuadSpec("adaptive", 4, rel_tol=1e-6))
    assert est.value == pytest.approx(2 / 3, rel=1e-5)


def test_non_finite_integrand_reports_point():
    with pytest.raises(EvaluationError) as info:
        integrate_nd(lambda x: np.where(x[:, 0] > 0.5, np.inf, 1.0), box([0], [1]), QuadSpec("gauss_tensor", 4))
    assert info.value.point is not None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sphere_rule_moments(n):
    nodes, w = sphere_rule(n, 10)
    area = 2 * math.pi ** (n / 2) / math.gamma(n / 2)
    assert w.sum() == pytest.approx(area, rel=1e-13)
    assert np.allclose(np.linalg.norm(nodes, axis=1), 1.0)
    # second moment of one coordinate is area / n
    assert np.dot(w, nodes[:, 0] ** 2) == pytest.approx(area / n, rel=1e-12)


@pytest.mark.parametrize("sigma", [0.5, 0.25, 0.7, 0.95, 0.999])
@pytest.mark.parametrize("method", ["polar_singular", "gauss_tensor", "adaptive"])
def test_gagliardo_affine_interval(sigma, method):
    est = integrate_gagliardo_double(affine([1.0]), box([0], [1]), sigma, 2.0, QuadSpec(method, 16))
    exact = affine_exact(sigma)
    # the graded route loses accuracy as sigma -> 1 but says so in err_abs
    assert abs(est.value - exact) <= max(1e-4 * exact, 2 * est.err_abs)


@pytest.mark.parametrize("sigma", [0.25, 0.5, 0.75, 0.02])
def test_gagliardo_gaussian_line(sigma):
    est = integrate_gagliardo_double(gaussian(), full_space(1), sigma, 2.0)
    exact = closed_form_seminorm(gaussian(), sigma, 2.0, full_space(1))
    assert est.value == pytest.approx(exact, rel=1e-8)
    assert est.tail > 0


def test_gagliardo_known_point_two_pi():
    est = integrate_gagliardo_double(gaussian(), full_space(1), 0.5, 2.0, QuadSpec(rel_tol=1e-6))
    assert est.value == pytest.approx(2 * math.pi, rel=1e-6)


@pytest.mark.parametrize("p", [1.0, 3.0])
def test_gagliardo_affine_other_exponents(p):
    est = integrate_gagliardo_double(affine([2.0], 1.0), box([0], [1]), 0.4, p)
    assert est.value == pytest.approx(2 ** p * affine_exact(0.4, p), rel=1e-8)


def test_gagliardo_swapped_parametrisation_agrees():
    for dom, f in ((box([0], [1]), affine([1.0])), (full_space(1), gaussian(0.5, 0.3))):
        a = integrate_gagliardo_double(f, dom, 0.6, 2.0)
        b = integrate_gagliardo_double(f, dom, 0.6, 2.0, swapped=True)
        assert abs(a.value - b.value) <= max(a.err_abs, b.err_abs, 1e-12 * abs(a.value))


def test_deterministic_reproducibility():
    a = integrate_gagliardo_double(gaussian(), full_space(1), 0.3, 2.0)
    b = integrate_gagliardo_double(gaussian(), full_space(1), 0.3, 2.0)
    assert a == b
    spec = QuadSpec("monte_carlo", 50_000, seed=9)
    assert integrate_gagliardo_double(gaussian(n=2), full_space(2), 0.5, 2.0, spec) == \
        integrate_gagliardo_double(gaussian(n=2), full_space(2), 0.5, 2.0, spec)


def test_monte_carlo_seed_changes_value():
    va = integrate_gagliardo_double(gaussian(n=2), full_space(2), 0.5, 2.0, QuadSpec("monte_carlo", 20_000, 1))
    vb = integrate_gagliardo_double(gaussian(n=2), full_space(2), 0.5, 2.0, QuadSpec("monte_carlo", 20_000, 2))
    assert va.value != vb.value


def test_tighter_tolerance_never_worse():
    cases = [
        (affine([1.0]), box([0], [1]), 0.5, 1.0),
        (affine([1.0]), box([0], [1]), 0.25, 2 / (1.5 * 2.5)),
        (gaussian(), full_space(1), 0.5, 2 * math.pi),
    ]
    for f, dom, s, exact in cases:
        errs = [abs(integrate_gagliardo_double(f, dom, s, 2.0, QuadSpec("adaptive", 4, rel_tol=t)).value - exact)
                for t in (1e-2, 5e-3, 2.5e-3)]
        assert errs[1] <= errs[0] + 1e-15 and errs[2] <= errs[1] + 1e-15


def test_gagliardo_2d_gaussian_monte_carlo():
    exact = closed_form_seminorm(gaussian(n=2), 0.5, 2.0, full_space(2))
    assert exact == pytest.approx(2 * math.pi ** 2 * math.sqrt(math.pi), rel=1e-14)
    est = integrate_gagliardo_double(gaussian(n=2), full_space(2), 0.5, 2.0, QuadSpec("monte_carlo", 400_000, 42))
    assert abs(est.value - exact) <= 4 * est.err_abs
    assert abs(est.value / exact - 1) < 0.02


def test_gagliardo_2d_gaussian_deterministic():
    exact = closed_form_seminorm(gaussian(n=2), 0.3, 2.0, full_space(2))
    est = integrate_gagliardo_double(gaussian(n=2), full_space(2), 0.3, 2.0, QuadSpec("polar_singular", 8))
    assert est.value == pytest.approx(exact, rel=1e-6)


def test_gagliardo_on_square_and_disk_against_monte_carlo():
    f = affine([1.0, 0.5])
    for dom in (box([0, 0], [1, 1]), ball([0, 0], 0.5)):
        det = integrate_gagliardo_double(f, dom, 0.5, 2.0, QuadSpec("polar_singular", 12))
        mc = integrate_gagliardo_double(f, dom, 0.5, 2.0, QuadSpec("monte_carlo", 400_000, 3))
        assert abs(det.value - mc.value) <= 4 * mc.err_abs + det.err_abs


def test_double_integral_guards():
    with pytest.raises(DomainError):
        integrate_gagliardo_double(gaussian(), full_space(1), 1.0, 2.0)
    with pytest.raises(DomainError):
        integrate_gagliardo_double(gaussian(), full_space(1), 0.5, 0.5)
    with pytest.raises(DomainError):
        double_integral(gaussian(), full_space(1), 2.0, 0.0)
    with pytest.raises(DomainError):
        integrate_gagliardo_double(affine([1.0]), full_space(1), 0.5, 2.0)


def _lens_area_unit_disk(r):
    return 2 * math.acos(r / 2) - (r / 2) * math.sqrt(4 - r * r)


def _lens_volume_unit_ball(r):
    return math.pi / 12 * (4 + r) * (2 - r) ** 2


@pytest.mark.parametrize("s", [0.5, 1.0, 1.5])
def test_ball_double_integral_matches_lens_formula(s):
    # for v = x_1, |v(x + h) - v(x)|^2 = h_1^2 and the x-integral is h_1^2 times the lens measure
    disk = 0.5 * 2 * math.pi * integrate.quad(lambda r: r ** (1 - s) * _lens_area_unit_disk(r), 0, 2,
                                              epsabs=1e-14)[0]
    est = double_integral(affine([1.0, 0.0]), ball([0, 0], 1), 2.0, s)
    assert est.value == pytest.approx(disk, rel=1e-6)
    vol = 4 * math.pi / 3 * integrate.quad(lambda r: r ** (1 - s) * _lens_volume_unit_ball(r), 0, 2,
                                           epsabs=1e-14)[0]
    est = double_integral(affine([1.0, 0.0, 0.0]), ball([0, 0, 0], 1), 2.0, s, QuadSpec(order_or_samples=12))
    assert est.value == pytest.approx(vol, rel=1e-6)


def test_one_dimensional_ball_is_an_interval():
    a = double_integral(gaussian(0.7, 0.2), ball([0.5], 1.5), 2.0, 0.6).value
    b = double_integral(gaussian(0.7, 0.2), box([-1.0], [2.0]), 2.0, 0.6).value
    assert a == pytest.approx(b, rel=1e-12)
