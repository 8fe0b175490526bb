import random

import pytest

from supercech.coeffs import EVEN, ODD
from supercech.errors import InputError
from supercech.geometry import (
    U0,
    U01,
    U1,
    ChartModel,
    SuperSpace,
    TwistList,
    bott_dim,
    chart_sections,
    structure_sheaf_component,
)


# Two-chart monomial-counting oracle for CP^1, independent of bott_dim.
def oracle_cp1_dims(d):
    lo, hi = -abs(d) - 3, abs(d) + 3
    h0 = len([k for k in range(lo, hi + 1) if k >= 0 and k <= d])
    h1 = len([k for k in range(lo, hi + 1) if k < 0 and k > d])
    return h0, h1


def test_bott_paper_values():
    assert bott_dim(1, -2, 1) == 1
    assert bott_dim(2, -1, 1) == 0


def test_bott_h0_on_cp1_matches_monomial_count():
    assert bott_dim(1, 3, 0) == 4
    for d in range(-6, 7):
        h0, h1 = oracle_cp1_dims(d)
        assert bott_dim(1, d, 0) == h0
        assert bott_dim(1, d, 1) == h1


def test_bott_vanishing_in_middle_degrees():
    for d in range(-8, 9):
        for q in (1, 2):
            if q != 3:
                assert bott_dim(3, d, q) == 0


def test_serre_duality_spot_check():
    rng = random.Random(4)
    for _ in range(40):
        n = rng.randint(1, 4)
        d = rng.randint(-8, 8)
        assert bott_dim(n, d, 0) == bott_dim(n, -d - n - 1, n)


def test_structure_sheaf_components():
    sp = SuperSpace(1, 2)
    assert structure_sheaf_component(sp, 1).entries == ((-1, ODD, 2),)
    assert structure_sheaf_component(sp, 0).entries == ((0, EVEN, 1),)
    assert structure_sheaf_component(sp, 3).is_empty()


def test_structure_sheaf_total_rank():
    for m in range(5):
        sp = SuperSpace(1, m)
        total = sum(
            structure_sheaf_component(sp, p).rank for p in range(m + 1)
        )
        assert total == 2 ** m


def test_chart_sections():
    assert chart_sections(U0, 2, (-3, 3)) == [0, 1, 2, 3]
    assert chart_sections(U1, 2, (-3, 3)) == [-3, -2, -1, 0, 1, 2]
    assert chart_sections(U01, 5, (-2, 2)) == [-2, -1, 0, 1, 2]


def test_chart_sections_bad_window():
    with pytest.raises(InputError):
        chart_sections(U0, 0, (2, 1))


def test_chart_model_transitions():
    cm = ChartModel(SuperSpace(1, 2))
    # twist 0, no zetas: the identity transition
    assert cm.transition_exponent(0, 0) == 0
    # each zeta lowers the effective twist by one
    assert cm.effective_twist(2, 1) == 1
    assert cm.sections(U1, 2, 1, (-3, 3)) == [-3, -2, -1, 0, 1]


def test_chart_model_requires_n1():
    with pytest.raises(InputError):
        ChartModel(SuperSpace(2, 1))


def test_twistlist_canonical_and_rank():
    t = TwistList.from_pairs([(0, EVEN), (-1, ODD), (0, EVEN)])
    assert t.entries == ((-1, ODD, 1), (0, EVEN, 2))
    assert t.rank == 3
    assert t.expanded() == [(-1, ODD), (0, EVEN), (0, EVEN)]


def test_twistlist_h_dim():
    t = TwistList.from_pairs([(-2, EVEN), (0, EVEN)])
    assert t.h_dim(1, 0) == 1
    assert t.h_dim(1, 1) == 1
