import itertools
import random

import pytest

from supercech.cech import (
    auto_window,
    build_split_complex,
    cohomology,
    split_cohomology_oracle,
    window_stability_check,
)
from supercech.errors import WindowTooSmall
from supercech.geometry import bott_dim
from supercech.sheaves import descriptor

FLAGSHIP = descriptor(1, 1, even=[0], odd=[-1])


def line_bundle(d):
    return descriptor(1, 0, even=[d])


def test_line_bundle_dims_match_bott():
    for d in range(-6, 7):
        table = cohomology(build_split_complex(line_bundle(d)))
        assert table.total(0) == max(d + 1, 0) == bott_dim(1, d, 0)
        assert table.total(1) == max(-d - 1, 0) == bott_dim(1, d, 1)


def test_o_minus_2_has_one_dimensional_h1():
    table = cohomology(build_split_complex(line_bundle(-2)))
    assert table.h == ((0, 0), (1, 0))


def test_trivial_bundle():
    table = cohomology(build_split_complex(line_bundle(0)))
    assert table.h == ((1, 0), (0, 0))


def test_flagship_split_dims():
    table = cohomology(build_split_complex(FLAGSHIP))
    assert table.h == ((1, 0), (1, 0))
    assert table.bigraded_total() == {(0, 0): 1, (1, 0): 1}


def test_empty_descriptor_gives_zero_complex():
    cx = build_split_complex(descriptor(1, 2))
    assert cx.dims() == (0, 0)
    assert cohomology(cx).h == ((0, 0), (0, 0))


TEST_GRID = [
    descriptor(1, 0, even=[3]),
    descriptor(1, 0, even=[-4]),
    descriptor(1, 1, even=[0], odd=[-1]),
    descriptor(1, 1, even=[0], odd=[0]),
    descriptor(1, 2, even=[1], odd=[]),
    descriptor(1, 2, even=[0, -2], odd=[1]),
    descriptor(1, 3, even=[0], odd=[-1, 2]),
    descriptor(1, 3, even=[4, -4], odd=[0]),
]


def test_split_dims_equal_closed_form_on_grid():
    for desc in TEST_GRID:
        table = cohomology(build_split_complex(desc))
        oracle = split_cohomology_oracle(desc)
        assert table.h == oracle.h, desc
        assert table.bigraded == oracle.bigraded, desc


def test_split_dims_equal_closed_form_random():
    rng = random.Random(31)
    for _ in range(15):
        m = rng.randint(0, 3)
        n_even = rng.randint(0, 2)
        n_odd = rng.randint(0, 2)
        desc = descriptor(
            1,
            m,
            even=[rng.randint(-4, 4) for _ in range(n_even)],
            odd=[rng.randint(-4, 4) for _ in range(n_odd)],
        )
        assert cohomology(build_split_complex(desc)).h == split_cohomology_oracle(desc).h


def test_differential_preserves_filtration_and_parity():
    for desc in TEST_GRID:
        cx = build_split_complex(desc)
        for (r, c) in cx.diff.entries:
            assert cx.basis1[r].filtration >= cx.basis0[c].filtration
            assert cx.parities1[r] == cx.parities0[c]


def test_window_auto_is_stable():
    for desc in TEST_GRID:
        assert window_stability_check(desc, padding=2)


def test_truncated_window_detected():
    assert not window_stability_check(line_bundle(-2), window=(0, 0))


def test_window_stability_trivial_case():
    assert window_stability_check(line_bundle(0), window=(-1, 1))


def test_auto_window_formula():
    lo, hi = auto_window(FLAGSHIP)
    # retract twists are {0,-1} at degree 0 and {-1,-2} at degree 1
    assert (lo, hi) == (-2 - 1 - 1, 0 + 1 + 1)
    # positive twists keep exponent 0 inside the hull
    assert auto_window(line_bundle(3)) == (-1, 4)


def test_basis_is_deterministic():
    a = build_split_complex(FLAGSHIP)
    b = build_split_complex(FLAGSHIP)
    assert a.basis0 == b.basis0
    assert a.diff == b.diff
