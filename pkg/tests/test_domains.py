import math

import numpy as np
import pytest

from fracsob.domains import ball, box, diameter, full_space, parse_domain, scale_map
from fracsob.errors import DomainError


def test_diameters():
    assert diameter(box([0], [1])) == 1.0
    assert diameter(box([0, 0], [1, 1])) == pytest.approx(math.sqrt(2))
    assert diameter(ball([0, 0, 0], 2.0)) == 4.0
    with pytest.raises(DomainError):
        diameter(full_space(2))


def test_scale_map_examples():
    dom, R = scale_map(box([0], [2]))
    assert R == 2.0 and dom == box([0], [1])
    dom, R = scale_map(ball([0, 0], 1.0))
    assert R == 2.0 and dom.radius == 0.5
    dom, R = scale_map(box([0, 0], [1, 1]))
    assert R == pytest.approx(math.sqrt(2))
    assert np.allclose(dom.hi, [1 / math.sqrt(2)] * 2)
    with pytest.raises(DomainError):
        scale_map(full_space(1))


@pytest.mark.parametrize("dom", [box([0], [3]), box([-1, 2], [1, 5]), ball([1, 1], 0.3), ball([0, 0, 0], 7.0)])
def test_scale_map_unit_diameter(dom):
    assert diameter(scale_map(dom)[0]) == pytest.approx(1.0, abs=1e-12)


def test_invalid_domains():
    with pytest.raises(DomainError):
        box([1], [0])
    with pytest.raises(DomainError):
        ball([0], 0.0)
    with pytest.raises(DomainError):
        full_space(0)


def test_contains_and_measure():
    b = box([0, 0], [1, 2])
    assert b.measure() == 2.0
    assert b.contains(np.array([[0.5, 1.5], [1.5, 0.5]])).tolist() == [True, False]
    disk = ball([0, 0], 1.0)
    assert disk.measure() == pytest.approx(math.pi)
    assert disk.contains([0.6, 0.6]) and not disk.contains([0.8, 0.8])


@pytest.mark.parametrize("text", ["box:0,1", "box:0,1;0,2", "ball:0,0;1", "rn:8", "rn:4:2"])
def test_parse_roundtrip(text):
    dom = parse_domain(text)
    assert parse_domain(dom.to_text()) == dom


def test_parse_errors():
    for bad in ("cube:0,1", "box:0", "ball:0;x", "box:1,0"):
        with pytest.raises(DomainError):
            parse_domain(bad)
    with pytest.raises(DomainError):
        parse_domain("box:0,1", n=2)
    assert parse_domain("rn:8", n=3).n == 3
