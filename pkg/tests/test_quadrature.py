import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rfuwoc.errors import ConvergenceError
from rfuwoc.quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, adaptive_gk15


def test_gauss_subset_matches_legendre_rule():
    x, w = np.polynomial.legendre.leggauss(7)
    mask = GAUSS_WEIGHTS > 0
    assert np.allclose(NODES[mask], x, atol=1e-15)
    assert np.allclose(GAUSS_WEIGHTS[mask], w, atol=1e-15)


def test_kronrod_rule_integrates_degree_22_exactly():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    for degree in range(23):
        exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
        assert np.dot(KRONROD_WEIGHTS, NODES ** degree) == pytest.approx(exact, abs=1e-14)


def test_smooth_integrand():
    res = adaptive_gk15(np.cos, [0.0, math.pi / 2], rel_tol=1e-12)
    assert float(res.value) == pytest.approx(1.0, abs=1e-14)


def test_oscillatory_complex_integrand():
    # int_0^20 e^{i 5 x} dx
    res = adaptive_gk15(lambda x: np.exp(5j * x), np.linspace(0, 20, 5), rel_tol=1e-11)
    exact = (np.exp(100j) - 1) / 5j
    assert abs(complex(res.value) - exact) < 1e-11


def test_vector_valued_components_converge_together():
    res = adaptive_gk15(lambda x: np.stack([x ** 2, np.exp(-x)], axis=1), [0.0, 3.0], rel_tol=1e-12)
    assert res.value[0] == pytest.approx(9.0, rel=1e-12)
    assert res.value[1] == pytest.approx(1 - math.exp(-3), rel=1e-12)


def test_node_budget_raises_with_axis():
    with pytest.raises(ConvergenceError) as info:
        adaptive_gk15(lambda x: np.abs(x - 0.3) ** -0.9, [0.0, 1.0], rel_tol=1e-14,
                      max_nodes=300, axis="t")
    assert info.value.axis == "t"


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 20.0), st.floats(-3.0, 3.0))
def test_gaussian_integral_property(width, centre):
    res = adaptive_gk15(lambda x: np.exp(-((x - centre) / width) ** 2),
                        [centre - 12 * width, centre + 12 * width], rel_tol=1e-10)
    assert float(res.value) == pytest.approx(width * math.sqrt(math.pi), rel=1e-9)
