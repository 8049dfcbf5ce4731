import math

import numpy as np
import pytest

from fracsob.domains import box, full_space
from fracsob.errors import DomainError, UsageError
from fracsob.funcspace import affine, constant, gaussian, poly_gaussian
from fracsob.limits import (bbm_mollified_functional, default_sigmas, dini_limit_study, extrapolate,
                            lateral_limits, limit_study, reference_rhs, rho_epsilon)
from fracsob.seminorms import FracOrder, gagliardo_seminorm
from scipy import integrate


def test_default_sigmas():
    assert default_sigmas("to_one") == tuple(1 - 2.0 ** -j for j in range(2, 9))
    assert default_sigmas("to_zero") == tuple(2.0 ** -j for j in range(2, 9))


def test_extrapolation_schemes_on_known_sequences():
    d = [2.0 ** -j for j in range(2, 9)]
    y = [1 / (1 + 2 * t) for t in d]
    lim, err = extrapolate(d, y, "richardson")
    assert abs(lim - 1) < 1e-8 and err < 1e-7
    lin, _ = extrapolate(d, y, "linear")
    assert abs(lin - 1) > 1e-3  # a straight line cannot follow 1/(1 + 2d) over this range
    assert extrapolate(d, y, "none")[0] == y[-1]
    # exact on polynomials of degree < number of points, any spacing
    d2 = [0.5, 0.3, 0.2, 0.05]
    assert extrapolate(d2, [3 - t + 2 * t ** 3 for t in d2])[0] == pytest.approx(3.0, abs=1e-12)
    with pytest.raises(UsageError):
        extrapolate(d, y, "pade")


def test_reference_rhs_examples():
    unit = box([0], [1])
    assert reference_rhs(affine([1.0]), 0, 2, unit, "to_one", 1) == pytest.approx(1.0)
    assert reference_rhs(gaussian(), 0, 2, full_space(1), "to_zero", 0) == pytest.approx(2 * math.sqrt(math.pi))
    assert reference_rhs(affine([1.0]), 0, 2, unit, "to_zero", 1) == pytest.approx(1 / 3)


def test_invalid_cases_rejected():
    unit = box([0], [1])
    with pytest.raises(UsageError):
        reference_rhs(affine([1.0]), 0, 2, unit, "to_zero", 0)
    with pytest.raises(UsageError):
        limit_study(affine([1.0]), 0, 2, unit, "to_zero", 0)
    with pytest.raises(UsageError):
        limit_study(gaussian(), 0, 2, full_space(1), "to_zero", 1)
    with pytest.raises(UsageError):
        limit_study(gaussian(), 0, 2, full_space(1), "to_one", 0)
    with pytest.raises(UsageError):
        limit_study(gaussian(), 0, 2, full_space(1), "to_one", 1, sigmas=[0.9, 0.8])
    with pytest.raises(UsageError):
        limit_study(gaussian(), 0, 2, full_space(1), "to_one", 1, sigmas=[0.9, 1.0])


def test_affine_to_one_study():
    st = limit_study(affine([1.0]), 0, 2, box([0], [1]), "to_one", 1)
    for s, v in zip(st.sigmas, st.values):
        assert v == pytest.approx(1 / (3 - 2 * s), rel=1e-8)
    assert st.rel_err < 1e-3
    assert all(np.diff(st.distances) < 0)


def test_gaussian_to_one_and_to_zero():
    st = limit_study(gaussian(), 0, 2, full_space(1), "to_one", 1)
    assert st.extrapolated == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-2)
    st = limit_study(gaussian(), 0, 2, full_space(1), "to_zero", 0)
    assert st.extrapolated == pytest.approx(2 * math.sqrt(math.pi), rel=1e-2)


def test_constant_study_is_zero():
    st = limit_study(constant(2.0), 0, 2, box([0], [1]), "to_one", 1)
    assert all(v == 0 for v in st.values) and st.extrapolated == 0.0


@pytest.mark.parametrize("p, limit", [(2.0, 1 / 3), (3.0, 1 / 6)])
def test_dini_limit_study(p, limit):
    st = dini_limit_study(affine([1.0]), 0, p, box([0], [1]))
    assert st.extrapolated == pytest.approx(limit, rel=1e-3)
    # on a unit-diameter domain the raw values increase with sigma
    assert all(a <= b for a, b in zip(st.values[1:], st.values[:-1]))
    with pytest.raises(UsageError):
        dini_limit_study(gaussian(), 0, 2, full_space(1))


def test_higher_order_study_is_sum_of_derivative_studies():
    sig = (0.75, 0.875, 0.9375)
    whole = limit_study(gaussian(), 1, 2, full_space(1), "to_one", 1, sig)
    part = limit_study(poly_gaussian((1,)), 0, 2, full_space(1), "to_one", 1, sig)
    assert np.allclose(whole.values, part.values, rtol=1e-12)


def test_rho_epsilon_normalisation():
    for eps, d, n in ((0.5, 1.0, 1), (0.1, 2.0, 2), (1e-2, 1.5, 3)):
        # mass on [a, d] in log t is smooth; the mass below a is (a/d)^eps
        a = d * 1e-8
        val, _ = integrate.quad(lambda s: float(rho_epsilon(math.exp(s), eps, d, n)) * math.exp(n * s),
                                math.log(a), math.log(d), epsabs=0, epsrel=1e-12)
        assert val == pytest.approx(1.0 - (a / d) ** eps, rel=1e-10)
        assert rho_epsilon(2 * d, eps, d, n) == 0.0
        assert rho_epsilon(0.0, eps, d, n) == 0.0


def test_bbm_functional_on_interval():
    unit = box([0], [1])
    for eps in (1.0, 0.1, 1e-3):
        assert bbm_mollified_functional(affine([1.0]), 2, unit, eps) == pytest.approx(2 / (1 + eps), rel=1e-10)
    with pytest.raises(DomainError):
        bbm_mollified_functional(gaussian(), 2, full_space(1), 0.1)


def test_bbm_substitution_identity_and_two_routes():
    dom = box([0], [2])
    v = gaussian(0.7, 1.0)
    p, sigma = 2.0, 0.99
    d = dom.diameter()
    gag = gagliardo_seminorm(v, FracOrder(0, sigma, p), dom).value_p
    eps = p * (1 - sigma)
    func = bbm_mollified_functional(v, p, dom, eps)
    assert func == pytest.approx(p * (1 - sigma) * d ** (-eps) * gag, rel=1e-10)
    # the two sigma -> 1 routes agree up to the factor d^{-p(1 - sigma)}
    unit = box([0], [1])
    x = affine([1.0])
    route_a = (1 - sigma) * gagliardo_seminorm(x, FracOrder(0, sigma, p), unit).value_p
    route_b = bbm_mollified_functional(x, p, unit, eps) / p
    assert abs(route_a / route_b - 1) <= 1e-3


def test_lateral_limits_reports_both_endpoints():
    out = lateral_limits(gaussian(), 0, 2, full_space(1))
    # lambda^p |v|^p = sigma (1 - sigma) |v|^p reaches the two theorem values
    assert out["to_zero"]["limit"] == pytest.approx(2 * math.sqrt(math.pi), rel=1e-6)
    assert out["to_one"]["limit"] == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-6)
