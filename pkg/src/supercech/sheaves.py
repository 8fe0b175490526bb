"""Sheaf descriptors and their structural decompositions.

A locally free sheaf on CP^{n|m} is described by its retract data: the twists
of the even and odd line-bundle summands of the reduced bundle.  From that we
derive the graded pieces of the retract, the degree-p endomorphism blocks,
the obstruction dimensions of the classification ladder, and the graded
pieces of the tangent sheaf of a split supermanifold over CP^1.
"""

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .coeffs import EVEN, ODD, parity_add
from .errors import InputError
from .geometry import SuperSpace, TwistList, bott_dim


@dataclass(frozen=True)
class SheafDescriptor:
    """Direct sum of twisted line bundles: O(a_i) even, parity-shifted O(b_j) odd.

    Twist lists are stored sorted descending (the canonical order of the file
    format).  An empty descriptor is allowed and denotes the zero sheaf.
    """

    space: SuperSpace
    even_twists: tuple
    odd_twists: tuple

    def __post_init__(self):
        object.__setattr__(self, "even_twists", tuple(sorted(self.even_twists, reverse=True)))
        object.__setattr__(self, "odd_twists", tuple(sorted(self.odd_twists, reverse=True)))

    @property
    def rank(self):
        return (len(self.even_twists), len(self.odd_twists))

    @property
    def total_rank(self):
        return len(self.even_twists) + len(self.odd_twists)

    def summands(self):
        """Reduced-bundle basis as (twist, parity), even block then odd block."""
        return tuple((t, EVEN) for t in self.even_twists) + tuple(
            (t, ODD) for t in self.odd_twists
        )

    def reduced_twist_list(self):
        return TwistList.from_pairs(self.summands())

    def to_json_dict(self):
        return {
            "n": self.space.n,
            "m": self.space.m,
            "even_twists": list(self.even_twists),
            "odd_twists": list(self.odd_twists),
        }

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, data):
        for field in ("n", "m", "even_twists", "odd_twists"):
            if field not in data:
                raise InputError("descriptor is missing field %r" % field)
        n, m = data["n"], data["m"]
        if not isinstance(n, int) or not isinstance(m, int):
            raise InputError("descriptor fields n, m must be integers")
        for field in ("even_twists", "odd_twists"):
            arr = data[field]
            if not isinstance(arr, list) or not all(isinstance(t, int) for t in arr):
                raise InputError("descriptor field %r must be an array of integers" % field)
        return cls(SuperSpace(n, m), tuple(data["even_twists"]), tuple(data["odd_twists"]))

    @classmethod
    def load(cls, path):
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError("cannot read descriptor file %s: %s" % (path, exc))
        if not isinstance(data, dict):
            raise InputError("descriptor file %s: expected a JSON object" % path)
        return cls.from_json_dict(data)


def descriptor(n, m, even=(), odd=()):
    return SheafDescriptor(SuperSpace(n, m), tuple(even), tuple(odd))


@dataclass(frozen=True)
class GradedPiece:
    """The degree-p piece of the retract, a direct sum of twisted line bundles."""

    degree: int
    twists: TwistList


def retract_decomposition(desc):
    """Graded pieces p = 0..m of the retract.

    Degree p tensors each reduced summand O(t) with O(-p)^C(m,p) and flips
    its parity by p.
    """
    m = desc.space.m
    pieces = []
    for p in range(m + 1):
        mult = comb(m, p)
        entries = [
            (t - p, parity_add(par, p), mult) for t, par in desc.summands()
        ]
        pieces.append(GradedPiece(p, TwistList.from_entries(entries) if entries else TwistList(())))
    return pieces


@dataclass(frozen=True)
class EndBlock:
    """Degree-p block of the even endomorphism sheaf of the retract.

    ``pairs`` lists one (twist, row_parity, col_parity) per ordered summand
    pair compatible with degree p; ``twists`` carries the full multiplicity
    including the C(m,p) exterior factor.
    """

    p: int
    pairs: tuple
    twists: TwistList


def end_block(desc, p):
    """Twisted-line-bundle content of degree-p endomorphisms, by parity matching.

    Odd p pairs even summands with odd ones; even p pairs like with like.
    Each pair (row t_r, col t_c) contributes a twist t_r - t_c - p with
    multiplicity C(m, p).
    """
    if p < 0:
        raise InputError("endomorphism degree must be >= 0")
    m = desc.space.m
    summands = desc.summands()
    pairs = []
    for tr, pr in summands:
        for tc, pc in summands:
            if parity_add(pr, pc) == p % 2:
                pairs.append((tr - tc - p, pr, pc))
    mult = comb(m, p)
    if mult == 0:
        return EndBlock(p, tuple(), TwistList(()))
    entries = [(t, EVEN, mult) for t, _, _ in pairs]
    twists = TwistList.from_entries(entries) if entries else TwistList(())
    return EndBlock(p, tuple(pairs), twists)


def obstruction_dims(desc):
    """Per degree p = 1..m, dim of the degree-1 cohomology of the p-block."""
    return [
        (p, end_block(desc, p).twists.h_dim(desc.space.n, 1))
        for p in range(1, desc.space.m + 1)
    ]


def automorphism_dims(desc):
    """Per degree p = 0..m, dim of the global sections of the p-block."""
    return [
        (p, end_block(desc, p).twists.h_dim(desc.space.n, 0))
        for p in range(desc.space.m + 1)
    ]


def tangent_terms(g_twists, p):
    """The two graded constituents of the degree-p tangent piece on CP^1.

    For the split supermanifold with odd bundle G = + O(g_i):
    a subsheaf wedge^{p+1} G (x) G^* and a quotient wedge^p G (x) Theta,
    with Theta = O(2).  At p = -1 the quotient term is the zero list.
    Entries carry the parity p mod 2 of degree-p vector fields.
    """
    if p < -1:
        raise InputError("tangent degree must be >= -1")
    g = list(g_twists)
    par = p % 2
    sub_pairs = []
    for subset in combinations(range(len(g)), p + 1):
        s = sum(g[i] for i in subset)
        for j in range(len(g)):
            sub_pairs.append((s - g[j], par))
    quot_pairs = []
    if p >= 0:
        for subset in combinations(range(len(g)), p):
            quot_pairs.append((sum(g[i] for i in subset) + 2, par))
    sub = TwistList.from_pairs(sub_pairs) if sub_pairs else TwistList(())
    quot = TwistList.from_pairs(quot_pairs) if quot_pairs else TwistList(())
    return sub, quot


def tangent_descriptor(g_twists):
    """Retract data of the tangent sheaf of (CP^1, wedge G): Theta = O(2) even,
    G^* = + O(-g_i) odd, over the superspace of odd dimension rank(G)."""
    g = tuple(g_twists)
    return SheafDescriptor(SuperSpace(1, len(g)), (2,), tuple(-t for t in g))


def extend_descriptor(desc, target_m):
    """Extension to a larger odd dimension: identical twist lists on CP^{n|target_m}."""
    if target_m < desc.space.m:
        raise InputError("extension target must not shrink the odd dimension")
    return SheafDescriptor(
        SuperSpace(desc.space.n, target_m), desc.even_twists, desc.odd_twists
    )


def restrict_descriptor(desc, target_m):
    """Restriction along the standard embedding; inverse of extend_descriptor."""
    if target_m > desc.space.m:
        raise InputError("restriction target must not grow the odd dimension")
    return SheafDescriptor(
        SuperSpace(desc.space.n, target_m), desc.even_twists, desc.odd_twists
    )
