from fractions import Fraction

import numpy as np
import pytest

from hermod.qexp import (QSeries, WeightMismatch, delta, eisenstein, elliptic_filtration,
                         mod_poly_mul, monomial_basis, mul, sturm_bound)


def test_eisenstein_leading_coefficients():
    assert eisenstein(4, 3).coeffs == (1, 240, 2160, 6720)
    assert eisenstein(6, 3).coeffs == (1, -504, -16632, -122976)
    e2 = eisenstein(2, 2)
    assert e2.coeffs == (1, -24, -72) and e2.is_quasi


def test_delta_is_ramanujan_tau():
    assert delta(5).coeffs == (0, 1, -24, 252, -1472, 4830)


def test_products_match_higher_eisenstein_series():
    assert mul(eisenstein(4, 30), eisenstein(4, 30)).coeffs == eisenstein(8, 30).coeffs
    assert mul(eisenstein(4, 30), eisenstein(6, 30)).coeffs == eisenstein(10, 30).coeffs


def test_cauchy_product_against_schoolbook():
    f = QSeries.from_dict(4, 12, {0: 1, 3: Fraction(2, 3), 7: -5})
    g = QSeries.from_dict(6, 12, {1: 4, 2: Fraction(-1, 2), 11: 9})
    want = [Fraction(0)] * 13
    for i in range(13):
        for j in range(13):
            if i + j <= 12:
                want[i + j] += f.coeffs[i] * g.coeffs[j]
    assert list(mul(f, g).coeffs) == want


def test_mod_poly_mul_against_exact_product():
    a, b = eisenstein(4, 40), eisenstein(6, 40)
    exact = mul(a, b).mod_array(13)
    assert np.array_equal(mod_poly_mul(a.mod_array(13), b.mod_array(13), 13), exact)


def test_adding_different_weights_is_refused():
    with pytest.raises(WeightMismatch):
        eisenstein(4, 5) + eisenstein(6, 5)


def test_monomial_basis_and_sturm_bound():
    assert monomial_basis(12) == [(3, 0), (0, 2)]
    assert monomial_basis(2) == []
    assert monomial_basis(0) == [(0, 0)]
    assert sturm_bound(12) == 2


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_eisenstein_p_minus_one_has_filtration_zero(p):
    assert elliptic_filtration(eisenstein(p - 1, 40), p).value == 0


@pytest.mark.parametrize("p", [5, 7, 11])
def test_eisenstein_p_plus_one_keeps_its_weight(p):
    assert elliptic_filtration(eisenstein(p + 1, 40), p).value == p + 1


def test_filtration_examples():
    d = delta(40)
    assert elliptic_filtration(d, 5).value == 12
    e8 = eisenstein(8, 40)
    assert elliptic_filtration(e8, 5).value == 0
    assert elliptic_filtration(QSeries.from_dict(12, 40, {}), 7).zero_mod_p
    with pytest.raises(ValueError):
        elliptic_filtration(eisenstein(2, 40), 5)
