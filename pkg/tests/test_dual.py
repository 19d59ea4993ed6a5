import numpy as np
import pytest

from photon_bundle import dual as D


def f(x, y):
    return D.sin(x) * D.exp(y) / (1.0 + x * x) + D.sqrt(x * x + y * y) - D.log(2.0 + D.cos(y)) + D.arctan2(y, x)


def fd(g, x, y, h=1e-6):
    return (g(x + h, y) - g(x - h, y)) / (2 * h), (g(x, y + h) - g(x, y - h)) / (2 * h)


def test_first_derivatives_match_central_differences():
    for x, y in [(0.3, -1.2), (1.7, 0.4), (-0.8, 2.1)]:
        tag, (dx, dy) = D.seed((x, y))
        out = f(dx, dy)
        gx, gy = fd(f, x, y)
        assert abs(D.primal(out, tag) - f(x, y)) < 1e-15
        assert abs(D.partial(out, tag, 0) - gx) < 1e-8
        assert abs(D.partial(out, tag, 1) - gy) < 1e-8


def test_vectorised_and_complex_values():
    x = np.linspace(0.1, 2.0, 7)
    tag, (dx,) = D.seed((x,))
    out = D.exp(1j * dx) * dx ** 3
    expected = np.exp(1j * x) * (1j * x ** 3 + 3 * x ** 2)
    assert np.max(np.abs(D.partial(out, tag, 0) - expected)) < 1e-13
    c = D.conj(out)
    assert np.max(np.abs(D.partial(c, tag, 0) - np.conj(expected))) < 1e-13
    assert np.max(np.abs(D.partial(D.real(out), tag, 0) - expected.real)) < 1e-13


def test_nested_second_derivative():
    x0, y0 = 0.7, -0.3
    t1, (x, y) = D.seed((x0, y0))
    t2, (u, v) = D.seed((x, y))
    out = D.sin(u * v) + u * u * v
    mixed = D.partial(D.partial(out, t2, 1), t1, 0)
    exact = np.cos(x0 * y0) - x0 * y0 * np.sin(x0 * y0) + 2 * x0
    assert abs(mixed - exact) < 1e-13
    dxx = D.partial(D.partial(out, t2, 0), t1, 0)
    assert abs(dxx - (-y0 * y0 * np.sin(x0 * y0) + 2 * y0)) < 1e-13


def test_leibniz_rule_and_constants():
    tag, (x,) = D.seed((1.3,))
    a, b = D.sin(x), D.exp(x)
    assert abs(D.partial(a * b, tag, 0) - (np.cos(1.3) + np.sin(1.3)) * np.exp(1.3)) < 1e-12
    assert D.partial(5.0, tag, 0) == 0.0
    assert D.value(D.Dual(D.Dual(2.0, (1.0,), 1), (0.0,), 2)) == 2.0
    assert abs(D.partial(2.0 - x, tag, 0) + 1) < 1e-15
    assert abs(D.partial(1.0 / x, tag, 0) + 1 / 1.3 ** 2) < 1e-14
    assert abs(D.partial(D.arccos(x / 2), tag, 0) + 0.5 / np.sqrt(1 - 0.65 ** 2)) < 1e-13


def test_inner_tag_is_constant_for_outer():
    t1, (x,) = D.seed((2.0,))
    t2, (y,) = D.seed((3.0,))
    out = x * y + y * x
    assert D.partial(out, t2, 0).val == pytest.approx(4.0)
    assert D.partial(D.primal(out, t2), t1, 0) == pytest.approx(6.0)
