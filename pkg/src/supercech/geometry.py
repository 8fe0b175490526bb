"""The model of CP^{n|m}.

Closed-form twisted-line-bundle cohomology dimensions for all n, and the
explicit two-chart cover of CP^1 with its transition conventions.  The
conventions used everywhere downstream:

* one affine coordinate z per chart, everything rewritten into the chart-0
  trivialization before comparison;
* a twist-d line bundle glues by  s^(1) = z^d s^(0);
* each odd generator zeta_a carries twist -1, i.e.  zeta^(1) = z^-1 zeta^(0).
"""

from dataclasses import dataclass
from math import comb

from .errors import InputError, InvariantViolation
from .coeffs import EVEN, ODD

ZETA_TWIST = -1

U0 = "U0"
U1 = "U1"
U01 = "U01"


@dataclass(frozen=True)
class SuperSpace:
    """Projective superspace with n even and m odd dimensions."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 1:
            raise InputError("even dimension n must be >= 1")
        if self.m < 0:
            raise InputError("odd dimension m must be >= 0")


@dataclass(frozen=True)
class TwistList:
    """Multiset of (twist, parity) pairs with multiplicities, canonically sorted."""

    entries: tuple  # of (twist, parity, multiplicity)

    @classmethod
    def from_pairs(cls, pairs):
        counts = {}
        for twist, parity in pairs:
            key = (twist, parity)
            counts[key] = counts.get(key, 0) + 1
        return cls(cls._canonical(counts))

    @classmethod
    def from_entries(cls, entries):
        counts = {}
        for twist, parity, mult in entries:
            if mult < 1:
                raise InvariantViolation("twist multiplicities must be >= 1")
            key = (twist, parity)
            counts[key] = counts.get(key, 0) + mult
        return cls(cls._canonical(counts))

    @staticmethod
    def _canonical(counts):
        return tuple(
            (twist, parity, counts[(twist, parity)])
            for twist, parity in sorted(counts)
        )

    @property
    def rank(self):
        return sum(mult for _, _, mult in self.entries)

    def expanded(self):
        """Flat list of (twist, parity) with multiplicity."""
        out = []
        for twist, parity, mult in self.entries:
            out.extend([(twist, parity)] * mult)
        return out

    def twists(self):
        return [twist for twist, _, _ in self.entries]

    def is_empty(self):
        return not self.entries

    def h_dim(self, n, q):
        """Sum of closed-form cohomology dimensions over the entries."""
        return sum(mult * bott_dim(n, twist, q) for twist, _, mult in self.entries)


def bott_dim(n, d, q):
    """dim H^q(CP^n, O(d)) by the closed formula.

    C(n+d, n) in degree 0 for d >= 0, C(-d-1, n) in degree n for d <= -n-1,
    zero otherwise.
    """
    if q < 0:
        raise InputError("cohomological degree must be >= 0")
    if q == 0 and d >= 0:
        return comb(n + d, n)
    if q == n and d <= -n - 1:
        return comb(-d - 1, n)
    return 0


def structure_sheaf_component(space, p):
    """Degree-p piece of the structure sheaf of CP^{n|m}: O(-p)^C(m,p)."""
    if p < 0:
        raise InputError("exterior degree must be >= 0")
    if p > space.m:
        return TwistList.from_entries([])
    return TwistList.from_entries([(-p, p % 2, comb(space.m, p))])


def chart_sections(chart, twist, window):
    """Laurent exponents of the chart sections of a twist-d line bundle.

    In the chart-0 trivialization: regular on U0 means exponent >= 0, regular
    on U1 means exponent <= twist, and everything is regular on the overlap.
    The result is intersected with the window [lo, hi].
    """
    lo, hi = window
    if lo > hi:
        raise InputError("window lower bound exceeds upper bound")
    if chart == U0:
        lo = max(lo, 0)
    elif chart == U1:
        hi = min(hi, twist)
    elif chart != U01:
        raise InputError("unknown chart %r" % (chart,))
    return list(range(lo, hi + 1))


@dataclass(frozen=True)
class ChartModel:
    """Two-chart cover of CP^{1|m} with the fixed transition conventions."""

    space: SuperSpace

    def __post_init__(self):
        if self.space.n != 1:
            raise InputError("explicit charts exist only for n = 1")

    def transition_exponent(self, twist, zeta_degree):
        """z-power relating chart-1 and chart-0 frames of O(twist) tensored
        with a zeta-monomial of the given exterior degree."""
        return twist + ZETA_TWIST * zeta_degree

    def effective_twist(self, twist, zeta_degree):
        """Twist governing U1-regularity of z^k zeta_I-sections: k <= twist - |I|."""
        return twist + ZETA_TWIST * zeta_degree

    def u1_max_exponent(self, twist, zeta_degree):
        return self.effective_twist(twist, zeta_degree)

    def sections(self, chart, twist, zeta_degree, window):
        return chart_sections(chart, self.effective_twist(twist, zeta_degree), window)


def parity_name(p):
    return "even" if p == EVEN else "odd"
