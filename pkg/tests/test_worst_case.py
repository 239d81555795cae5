import math
from fractions import Fraction

import pytest

from conftest import PANEL
from slucas.census import alpha_report, census_table, epsilon_decompose
from slucas.worst_case import (
    C3Tag,
    alpha_exact_formula,
    c_m_member,
    classify_c3,
    cm_density_bound,
    cm_hypothesis_holds,
    cm_members,
    frac_cm_empirical,
    twin_alpha,
)


def _composites(limit, D):
    for row in census_table(9, limit + 1, D):
        if row[6] >= 2 and row[3] != 0:
            yield int(row[0]), int(row[1]), int(row[2])


def test_c_m_examples():
    assert c_m_member(9, 5, 3)
    assert not c_m_member(13, 5, 3)  # prime
    assert not c_m_member(15, 5, 3)  # shares a factor with D
    for D in (-7, 13, 17, -11):
        assert not c_m_member(45, D, 3)
    with pytest.raises(ValueError):
        c_m_member(9, 5, -1)


def test_c2_holds_only_twin_products():
    """Outside the twin-product shape, alpha <= 1/4."""
    for D in PANEL:
        for n, sl, phi in _composites(50000, D):
            if 4 * sl > phi:
                assert classify_c3(n, D).tag is C3Tag.TWIN_PAIR, (n, D)


def test_classify_examples():
    f = classify_c3(15, 14)
    assert f.tag is C3Tag.TWIN_PAIR and f.params == {"k1": 2, "q1": 1}
    assert f.eps_signs == {3: -1, 5: 1}
    assert classify_c3(15, 19).tag is C3Tag.NOT_IN_C3
    assert classify_c3(9, 5).tag is C3Tag.SQUARE_OF_SMALL_PRIME
    assert classify_c3(13, 5).tag is C3Tag.NOT_IN_C3


def test_49_needs_alpha_strictly_above():
    assert alpha_report(49, 5).alpha == Fraction(1, 8)
    assert classify_c3(49, 5).tag is C3Tag.NOT_IN_C3
    assert classify_c3(49, 5, published_list=True).tag is C3Tag.SQUARE_OF_SMALL_PRIME
    assert not c_m_member(49, 5, 3)


@pytest.mark.parametrize("n,D,alpha", [(85, -7, Fraction(13, 108)), (2407, 5, Fraction(281, 2352))])
def test_triple_shift_counterexamples(n, D, alpha):
    assert alpha_report(n, D).alpha == alpha < Fraction(1, 8)
    assert classify_c3(n, D).tag is C3Tag.NOT_IN_C3
    assert classify_c3(n, D, published_list=True).tag is C3Tag.TRIPLE_SHIFT


def test_form_json():
    js = classify_c3(15, 14).to_json(15, 14)
    assert js == {"n": 15, "D": 14, "in_c3": True, "form": "TwinPair", "params": {"k1": 2, "q1": 1},
                  "eps_signs": {"3": -1, "5": 1}}


@pytest.mark.parametrize("n,D,alpha", [(9, 5, Fraction(1, 4)), (15, 14, Fraction(5, 16)), (25, 2, Fraction(1, 6))])
def test_alpha_formula_examples(n, D, alpha):
    assert alpha_exact_formula(epsilon_decompose(n, D)) == alpha


def test_alpha_formula_matches_census():
    for D in PANEL:
        for n in range(9, 5001, 2):
            if math.gcd(n, D) != 1:
                continue
            rep = alpha_report(n, D)
            assert alpha_exact_formula(rep.decomposition) == rep.alpha


def test_twin_alpha():
    assert twin_alpha(1) == Fraction(1, 4) and twin_alpha(2) == Fraction(5, 16)
    values = [twin_alpha(k) for k in range(1, 40)]
    assert all(a < b < Fraction(1, 3) for a, b in zip(values, values[1:]))
    with pytest.raises(ValueError):
        twin_alpha(0)


def test_form_properties_on_sweep():
    seen = set()
    for D in PANEL:
        for n, sl, phi in _composites(50000, D):
            if 8 * sl <= phi:
                continue
            form = classify_c3(n, D)
            seen.add(form.tag)
            alpha = Fraction(sl, phi)
            if form.tag is C3Tag.TWIN_PAIR:
                if form.params["q1"] == 1:
                    assert alpha == twin_alpha(form.params["k1"])
                else:
                    assert alpha > Fraction(1, 3)
            if form.tag is C3Tag.TRIPLE_LUCAS_CARMICHAEL:
                assert alpha > Fraction(1, 8)
    assert seen == set(C3Tag) - {C3Tag.NOT_IN_C3}


def test_classifier_completeness_small():
    for D in PANEL:
        for n, sl, phi in _composites(10000, D):
            assert (8 * sl > phi) == classify_c3(n, D).in_c3, (n, D)


def test_density_examples():
    chk = frac_cm_empirical(14, 3, 5)
    assert chk.holds and chk.observed == Fraction(chk.members, 1 << 12)
    assert frac_cm_empirical(16, 4, 13).holds
    with pytest.raises(ValueError):
        frac_cm_empirical(10, 6, 5)


def test_density_hypothesis_gate():
    assert cm_hypothesis_holds(14, 6) and not cm_hypothesis_holds(14, 7)
    assert cm_density_bound(14, 3) > 0


def test_cm_members_mask_matches_scalar():
    rows = census_table(1 << 11, 1 << 12, 5)
    mask = cm_members(rows, 4)
    for row, member in zip(rows, mask):
        assert bool(member) == c_m_member(int(row[0]), 5, 4)
