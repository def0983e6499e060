import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hecketrace.chebyshev import cheb_coeffs, cheb_eval, cheb_matrix


def test_initial_values():
    assert cheb_eval(-2, 1.3) == -1.0
    assert cheb_eval(-1, 1.3) == 0.0
    assert cheb_eval(0, 1.3) == 1.0
    assert cheb_eval(1, 1.3) == pytest.approx(1.3)
    with pytest.raises(ValueError):
        cheb_eval(-3, 1.0)


@given(st.integers(0, 20), st.floats(0.05, math.pi - 0.05))
def test_trigonometric_form(ell, t):
    assert cheb_eval(ell, 2 * math.cos(t)) == pytest.approx(math.sin((ell + 1) * t) / math.sin(t), abs=1e-9)


@given(st.integers(0, 20), st.floats(-2.5, 2.5))
def test_coefficient_form_matches_recurrence(m, beta):
    c = cheb_coeffs(m)
    terms = [int(ci) * beta**i for i, ci in enumerate(c)]
    # monomial sums cancel heavily near |beta| = 2, so scale by the term size
    scale = sum(abs(t) for t in terms)
    assert abs(sum(terms) - cheb_eval(m, beta)) <= 1e-12 * max(1.0, scale)


def test_known_coefficients():
    assert cheb_coeffs(2).tolist() == [-1, 0, 1]
    assert cheb_coeffs(4).tolist() == [1, 0, -3, 0, 1]
    with pytest.raises(ValueError):
        cheb_coeffs(-1)


def test_array_and_complex_arguments():
    b = np.array([0.5, 1.0, 1.5])
    np.testing.assert_allclose(cheb_eval(3, b), b**3 - 2 * b)
    z = 1.2 + 0.3j
    assert cheb_eval(2, z) == pytest.approx(z * z - 1)


def test_matrix_polynomial_on_eigenbasis():
    A = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    evals, evecs = np.linalg.eigh(A)
    for m in range(-2, 6):
        M = cheb_matrix(m, A)
        expect = evecs @ np.diag([cheb_eval(m, e) for e in evals]) @ evecs.T
        np.testing.assert_allclose(M, expect, atol=1e-10)
