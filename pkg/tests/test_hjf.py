from fractions import Fraction

import pytest

from hermod.hjf import (HJForm, InvariantViolation, average, check_shift_class, choose_rho,
                        from_matrix_index, heat, heat_completed, index_raise, lattice_keys,
                        mul_hjf, mul_qseries, restrict, sturm_rows, to_matrix_index,
                        unit_rule_violations)

GENERATORS = {"phi4": (4, "+"), "phi6": (6, "-"), "phi8": (8, "+"), "phi10": (10, "+")}


@pytest.fixture(scope="module")
def small(corpus):
    return {name: corpus.hjf(name).truncate(8) for name in GENERATORS}


@pytest.mark.parametrize("name", sorted(GENERATORS))
def test_generators_obey_unit_rule_and_shift_class(corpus, name):
    f = corpus.hjf(name)
    assert (f.weight, f.parity, f.index) == GENERATORS[name] + (1,)
    assert unit_rule_violations(f) == []
    rep = check_shift_class(f.truncate(30))
    assert rep.ok and rep.compared > 0


def test_support_outside_cone_is_rejected():
    with pytest.raises(InvariantViolation):
        HJForm(4, 1, "+", 3, {(1, 2, 1): 1})


@pytest.mark.parametrize("k,parity,signs", [
    (8, "+", (1, 1, 1, 1)),
    (6, "-", (1, 1, 1, 1)),
    (6, "+", (1, -1, 1, -1)),
])
def test_average_of_single_term_gives_twisted_unit_orbit(k, parity, signs):
    # hand expansion of (1/4) sum over eps of sigma(eps) eps^(-k) c(n, eps^(-1) r)
    f = HJForm(k, 1, parity, 2, {(1, 1, 0): 1})
    g = average(f, k, 1, parity)
    orbit = [(1, 1, 0), (1, 0, 1), (1, -1, 0), (1, 0, -1)]
    assert g.coeffs == {key: Fraction(s, 4) for key, s in zip(orbit, signs)}
    assert unit_rule_violations(g) == []


def test_heat_multiplies_by_discriminant(small):
    f = small["phi4"]
    h = heat(f)
    assert (h.weight, h.parity, h.tag) == (6, "-", "heat-image")
    for (n, a1, a2), v in f.coeffs.items():
        assert h.coeffs.get((n, a1, a2), 0) == (4 * n - a1 * a1 - a2 * a2) * v


def test_completed_heat_image_of_phi4_is_a_multiple_of_phi6(corpus):
    # weight 6, parity -: the space is spanned by phi6 alone
    f = heat_completed(corpus.hjf("phi4").truncate(20), corpus.qseries("e2"))
    assert (f.weight, f.parity) == (6, "-")
    g = corpus.hjf("phi6").truncate(20)
    key = min(g.coeffs)
    c = f.coeffs[key] / g.coeffs[key]
    assert f == c * g


def naive_qseries_product(g, f):
    N = min(g.trunc, f.trunc)
    out = {}
    for j, a in enumerate(g.coeffs[:N + 1]):
        for (n, a1, a2), v in f.coeffs.items():
            if a and n + j <= N:
                key = (n + j, a1, a2)
                out[key] = out.get(key, 0) + a * v
    return {k: v for k, v in out.items() if v}


def naive_hjf_product(f, g):
    N = min(f.trunc, g.trunc)
    out = {}
    for (n1, a1, a2), v1 in f.coeffs.items():
        for (n2, b1, b2), v2 in g.coeffs.items():
            if n1 + n2 <= N:
                key = (n1 + n2, a1 + b1, a2 + b2)
                out[key] = out.get(key, 0) + v1 * v2
    return {k: v for k, v in out.items() if v}


def test_qseries_product_against_schoolbook(corpus, small):
    e6 = corpus.qseries("e6")
    prod = mul_qseries(e6, small["phi4"])
    assert prod.coeffs == naive_qseries_product(e6, small["phi4"])
    assert (prod.weight, prod.parity) == (10, "-")
    assert unit_rule_violations(prod) == []


def test_hjf_product_against_schoolbook(small):
    prod = mul_hjf(small["phi4"], small["phi6"])
    assert prod.coeffs == naive_hjf_product(small["phi4"], small["phi6"])
    assert (prod.weight, prod.index, prod.parity) == (10, 2, "-")
    assert unit_rule_violations(prod) == []


def test_weight_four_factor_keeps_parity(corpus, small):
    prod = mul_qseries(corpus.qseries("e4"), small["phi6"])
    assert (prod.weight, prod.parity) == (10, "-")
    assert unit_rule_violations(prod) == []


def test_restriction_with_chosen_rho_is_injective(small):
    f = small["phi10"]
    rho = choose_rho(f.trunc, f.index)
    g = restrict(f, rho)
    x, y = rho
    assert g.index == (x * x + y * y) * f.index
    for (n, a1, a2), v in f.coeffs.items():
        assert g.coeffs[(n, x * a1 - y * a2)] == v


def test_matrix_index_round_trip(small):
    for f in small.values():
        assert from_matrix_index(to_matrix_index(f), f.parity) == f


def test_index_raising_gives_index_two_form(corpus):
    f = index_raise(corpus.hjf("phi10").truncate(30), (1, 1))
    assert f.index == 2
    assert unit_rule_violations(f) == []
    assert check_shift_class(f).ok


def test_sturm_rows_pick_one_key_per_class():
    rows = sturm_rows(1, 12)
    classes = {(4 * n - a * a - b * b, a % 2, b % 2) for n, a, b in lattice_keys(1, 12)}
    assert len(rows) == len(classes)
    assert len({(4 * n - a * a - b * b, a % 2, b % 2) for n, a, b in rows}) == len(rows)
