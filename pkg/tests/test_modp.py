from fractions import Fraction

import numpy as np
import pytest

from hermod import modp
from hermod.hjf import heat, mul_qseries
from hermod.qexp import eisenstein

GENERATORS = ("phi4", "phi6", "phi8", "phi10")


def test_p_valuation_and_primitive_scale():
    assert modp.p_valuation(Fraction(50, 3), 5) == 2
    assert modp.p_valuation(Fraction(3, 25), 5) == -2
    assert modp.primitive_scale([Fraction(10), Fraction(25, 7)], 5) == Fraction(1, 5)
    assert modp.primitive_scale([Fraction(1, 5), Fraction(2)], 5) == 5


@pytest.mark.parametrize("name,k", [("phi4", 4), ("phi6", 6), ("phi10", 10)])
def test_generator_filtration_is_its_weight_mod_7(corpus, name, k):
    assert modp.hjf_filtration(corpus.hjf(name), 7, corpus=corpus).value == k


def test_phi8_mod_7_has_filtration_8(corpus):
    rep = modp.hjf_filtration(corpus.hjf("phi8"), 7, corpus=corpus)
    assert rep.value == 8 and rep.rigorous


@pytest.mark.parametrize("p", [5, 7])
def test_multiplying_by_hasse_eisenstein_keeps_filtration(corpus, p):
    phi = corpus.hjf("phi4")
    lifted = mul_qseries(eisenstein(p - 1, phi.trunc), phi)
    assert lifted.weight == 4 + p - 1
    assert modp.hjf_filtration(lifted, p, corpus=corpus).value == 4


def test_dependent_products_are_saturated(corpus):
    # mod 5 the weight-8 products are dependent, yet phi8 is still found
    basis = modp.index1_basis(5, 7, corpus)
    assert basis.rank_defect(8, 1) > 0
    rep = modp.hjf_filtration(corpus.hjf("phi8"), 5, corpus=corpus)
    assert rep.value in (4, 8)
    assert rep.witness


def test_zero_reduction_is_reported(corpus):
    rep = modp.hjf_filtration(5 * corpus.hjf("phi4"), 5, corpus=corpus)
    assert rep.zero_mod_p and rep.to_dict()["filtration"] == "ZeroModP"


def test_heat_images_are_refused(corpus):
    with pytest.raises(ValueError, match="heat-image"):
        modp.ModHJF.of(heat(corpus.hjf("phi4")), 5)


def test_insufficient_truncation_is_refused(corpus):
    with pytest.raises(modp.InsufficientTruncation):
        modp.hjf_filtration(corpus.hjf("phi10").truncate(5), 7, corpus=corpus)


def test_saturate_replaces_divisible_combination():
    V = np.array([[1, 1], [1, 6]])
    labels, W = modp.saturate(["u", "v"], V, 5, 25)
    # 4u + v = (5, 10), divided by 5
    assert labels == ["u", "(4*u + 1*v)/5"]
    assert np.array_equal(W, np.array([[1, 1], [1, 2]]))


def test_saturate_drops_exact_relation():
    # second column is twice the first
    V = np.array([[1, 2], [3, 6]])
    labels, W = modp.saturate(["u", "v"], V, 5, 125)
    assert labels == ["u"] and W.shape == (2, 1)


def test_saturate_needs_p_adic_precision():
    with pytest.raises(ValueError):
        modp.saturate(["u", "v"], np.array([[1, 1], [1, 6]]), 5, 5)


@pytest.fixture(scope="module")
def phi4_cycle(corpus):
    return modp.heat_cycle(corpus.hjf("phi4"), 5, corpus=corpus)


def test_heat_cycle_of_phi4_mod_5(phi4_cycle):
    assert phi4_cycle.start == 4
    assert phi4_cycle.filtrations == (10, 16, 10, 16)
    assert phi4_cycle.ok


def test_cycle_checks_catch_a_mutated_filtration(phi4_cycle):
    omegas = [phi4_cycle.start, *phi4_cycle.filtrations, phi4_cycle.filtrations[0]]
    checks, _, _ = modp._cycle_checks(omegas, 5, 1)
    assert all(checks.values())
    bad = list(omegas)
    bad[2] += 2
    checks, _, _ = modp._cycle_checks(bad, 5, 1)
    assert not all(checks.values())


def test_diagnostics_note_vanishing_heat_image(corpus):
    rep = modp.heat_cycle(corpus.hjf("phi8"), 7, corpus=corpus)
    assert rep.heat_zero
    diag = modp.heat_cycle_diagnostics(rep, [1, 2, 3, 4, 5, 6])
    assert diag == {"applies": "heat image vanishes mod p"}


def test_diagnostics_skip_bounds_when_remainder_is_small(corpus):
    rep = modp.heat_cycle(corpus.hjf("phi10"), 5, corpus=corpus)
    found = modp.ramanujan_scan_hjf(corpus.hjf("phi10"), 5).found
    diag = modp.heat_cycle_diagnostics(rep, found)
    assert diag["two low points"] is True
    assert diag["bound"].startswith("skipped")


@pytest.mark.parametrize("name", GENERATORS)
@pytest.mark.parametrize("p", [5, 7, 11])
def test_direct_scan_agrees_with_heat_criterion(corpus, name, p):
    s = modp.ramanujan_scan_hjf(corpus.hjf(name), p)
    assert s.agrees
    assert s.guard["consistent"]


def test_guard_predicts_no_congruence_for_large_p(corpus):
    s = modp.ramanujan_scan_hjf(corpus.hjf("phi8"), 17)
    assert s.guard["applies"] and s.found == []


def test_single_b_test_matches_scan(corpus):
    v = modp.ramanujan_test_hjf(corpus.hjf("phi8"), 13, 3)
    assert v.holds and v.details["criterion"]
    with pytest.raises(ValueError):
        modp.ramanujan_test_hjf(corpus.hjf("phi8"), 13, 13)


def test_up_of_zero_reduction_holds(corpus):
    assert modp.up_test_hjf(7 * corpus.hjf("phi4"), 7, corpus=corpus).holds


def test_up_failure_confirmed_by_filtration(corpus):
    v = modp.up_test_hjf(corpus.hjf("phi10"), 11, corpus=corpus)
    assert not v.holds
    assert v.details["agree"] and v.details["filtration check"]


def test_hermitian_filtration_of_h4_mod_5_is_zero(corpus):
    assert modp.hmf_filtration(corpus.hmf("h4", 6), 5, corpus=corpus).value == 0


def test_hermitian_filtration_of_chi8_mod_7(corpus):
    assert modp.hmf_filtration(corpus.hmf("chi8", 6), 7, corpus=corpus).value == 8


def test_hermitian_theorem_check_needs_witness(corpus):
    with pytest.raises(modp.MissingWitness):
        modp.up_test_hmf(corpus.hmf("chi8", 6), 7, theorem_check=True)


def test_hermitian_scan_agrees_with_criterion(corpus):
    s = modp.ramanujan_scan_hmf(corpus.hmf("f10", 6), 5)
    assert s.agrees


def test_hmf_rows_pick_orbit_minima():
    rows = modp.hmf_rows(3)
    assert len(rows) == len(set(rows.tolist()))
    t0 = 3
    idx = np.unravel_index(rows, (t0 + 1, t0 + 1, 2 * t0 + 1, 2 * t0 + 1))
    keys = {(int(n), int(a1) - t0, int(a2) - t0, int(m)) for n, m, a1, a2 in zip(*idx)}
    assert (0, 0, 0, 0) in keys and (1, 0, 0, 1) in keys
    assert (1, 1, 0, 1) in keys or (1, 0, 1, 1) in keys or (1, -1, 0, 1) in keys
