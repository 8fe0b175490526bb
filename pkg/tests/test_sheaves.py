import json

import pytest

from supercech.coeffs import EVEN, ODD
from supercech.errors import InputError
from supercech.geometry import SuperSpace, TwistList
from supercech.sheaves import (
    SheafDescriptor,
    automorphism_dims,
    descriptor,
    end_block,
    extend_descriptor,
    obstruction_dims,
    restrict_descriptor,
    retract_decomposition,
    tangent_descriptor,
    tangent_terms,
)

FLAGSHIP = descriptor(1, 1, even=[0], odd=[-1])


def test_retract_decomposition_flagship():
    pieces = retract_decomposition(FLAGSHIP)
    assert pieces[0].twists.entries == ((-1, ODD, 1), (0, EVEN, 1))
    assert pieces[1].twists.entries == ((-2, EVEN, 1), (-1, ODD, 1))


def test_retract_decomposition_purely_even_space():
    d = descriptor(1, 0, even=[2], odd=[-1])
    pieces = retract_decomposition(d)
    assert len(pieces) == 1
    assert pieces[0].twists == d.reduced_twist_list()


def test_retract_decomposition_top_degree():
    d = descriptor(1, 2, even=[1])
    pieces = retract_decomposition(d)
    # degree 2 piece: twist 1 - 2 = -1, parity even + 2 = even, C(2,2) = 1 copy
    assert pieces[2].twists.entries == ((-1, EVEN, 1),)


def test_retract_rank():
    for d in (FLAGSHIP, descriptor(1, 2, even=[1, 0], odd=[-1]), descriptor(1, 3, odd=[0])):
        total = sum(p.twists.rank for p in retract_decomposition(d))
        assert total == 2 ** d.space.m * d.total_rank


def test_end_block_flagship_degree1():
    block = end_block(FLAGSHIP, 1)
    assert sorted(t for t, _, _ in block.pairs) == [-2, 0]
    assert block.twists.entries == ((-2, EVEN, 1), (0, EVEN, 1))


def test_end_block_line_bundle_odd_degree_empty():
    block = end_block(descriptor(1, 1, even=[3]), 1)
    assert block.pairs == ()
    assert block.twists.is_empty()


def test_end_block_degree0_contains_identity_twists():
    d = descriptor(1, 2, even=[2, 0], odd=[-1])
    block = end_block(d, 0)
    twists = [t for t, _, _ in block.pairs]
    assert twists.count(0) == 3
    assert sorted(twists) == [-2, 0, 0, 0, 2]


def test_end_block_beyond_top_degree_empty():
    assert end_block(FLAGSHIP, 2).twists.is_empty()


def test_end_block_duality():
    # Odd p: the twist multiset is closed under swapping the Hom direction.
    d = descriptor(1, 3, even=[2, 0], odd=[-1, 1])
    for p in (1, 3):
        twists = sorted(t for t, _, _ in end_block(d, p).pairs)
        swapped = sorted(-t - 2 * p for t in twists)
        assert twists == swapped
    # Even p: {a_i - a_k} and {b_j - b_l} are negation-symmetric before the -p shift.
    for p in (0, 2):
        raw = sorted(t + p for t, _, _ in end_block(d, p).pairs)
        assert raw == sorted(-t for t in raw)


def test_obstruction_dims_flagship():
    assert obstruction_dims(FLAGSHIP) == [(1, 1)]


def test_obstruction_dims_line_bundles():
    assert obstruction_dims(descriptor(1, 1, even=[5])) == [(1, 0)]
    assert obstruction_dims(descriptor(1, 1, odd=[-2])) == [(1, 0)]


def test_obstruction_dims_vanish_for_higher_n():
    assert obstruction_dims(descriptor(2, 1, even=[0], odd=[-1])) == [(1, 0)]
    assert obstruction_dims(descriptor(3, 2, even=[2, -3], odd=[1])) == [(1, 0), (2, 0)]


def test_automorphism_dims_contains_rank():
    d = descriptor(1, 1, even=[0], odd=[0])
    dims = dict(automorphism_dims(d))
    # degree 0: two identity components plus nothing else for equal twists
    assert dims[0] == 2


def test_tangent_terms_basic():
    sub, quot = tangent_terms([-1], 0)
    assert sub.entries == ((0, EVEN, 1),)
    assert quot.entries == ((2, EVEN, 1),)


def test_tangent_terms_p_minus_one():
    sub, quot = tangent_terms([-1], -1)
    assert sub.entries == ((1, ODD, 1),)
    assert quot.is_empty()


def test_tangent_terms_top_degree():
    a, b = -1, 2
    sub, quot = tangent_terms([a, b], 2)
    assert sub.is_empty()
    assert quot.entries == ((a + b + 2, EVEN, 1),)


def test_tangent_terms_rank_additivity():
    g = [-1, 0, 2]
    for p in range(-1, 4):
        sub, quot = tangent_terms(g, p)
        from math import comb

        want = comb(3, p + 1) * 3 + (comb(3, p) if p >= 0 else 0)
        assert sub.rank + quot.rank == want


def test_tangent_descriptor():
    d = tangent_descriptor([-1])
    assert d.space == SuperSpace(1, 1)
    assert d.even_twists == (2,)
    assert d.odd_twists == (1,)


def test_extend_restrict_round_trip():
    ext = extend_descriptor(FLAGSHIP, 3)
    assert ext.space.m == 3
    assert ext.even_twists == FLAGSHIP.even_twists
    assert restrict_descriptor(ext, 1) == FLAGSHIP
    with pytest.raises(InputError):
        extend_descriptor(FLAGSHIP, 0)


def test_extension_grows_obstructions():
    ext = extend_descriptor(FLAGSHIP, 3)
    dims = dict(obstruction_dims(ext))
    assert dims[1] >= 1


def test_json_round_trip_and_canonical_order():
    d = descriptor(1, 2, even=[0, 3], odd=[-1, -1])
    data = json.loads(d.to_json())
    assert data["even_twists"] == [3, 0]
    assert SheafDescriptor.from_json_dict(data) == d


def test_json_validation():
    with pytest.raises(InputError):
        SheafDescriptor.from_json_dict({"n": 1, "m": 1, "even_twists": [0]})
    with pytest.raises(InputError):
        SheafDescriptor.from_json_dict(
            {"n": 1, "m": 1, "even_twists": ["x"], "odd_twists": []}
        )
