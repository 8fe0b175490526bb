"""Coefficient algebra of all cochains.

An element is a finite sum of terms  q * z^k * zeta_{i1}...zeta_{ip}  with
rational q, integer Laurent exponent k and a strictly increasing tuple of odd
generator indices.  The product is the super-commutative one: Laurent
exponents add and exterior monomials wedge with the Koszul sign.
"""

from fractions import Fraction

from .errors import InvariantViolation

EVEN = 0
ODD = 1

ZERO = Fraction(0)


def parity_add(a, b):
    return (a + b) % 2


def parity_flip(p):
    """The parity reversal underlying the functor that swaps even and odd."""
    return (p + 1) % 2


def validate_monomial(mono, num_generators=None):
    """Check strict increase (and range when the generator count is known)."""
    mono = tuple(mono)
    for a, b in zip(mono, mono[1:]):
        if a >= b:
            raise InvariantViolation("exterior monomial indices must strictly increase")
    if mono and mono[0] < 1:
        raise InvariantViolation("exterior generator indices start at 1")
    if num_generators is not None and mono and mono[-1] > num_generators:
        raise InvariantViolation("exterior generator index out of range")
    return mono


def wedge(mono_a, mono_b):
    """Wedge two strictly increasing monomials.

    Returns (sign, merged) with the Koszul sign from sorting the
    concatenation, or None when an index repeats.
    """
    if not mono_a:
        return 1, mono_b
    if not mono_b:
        return 1, mono_a
    merged = []
    sign = 1
    i = j = 0
    while i < len(mono_a) and j < len(mono_b):
        x, y = mono_a[i], mono_b[j]
        if x == y:
            return None
        if x < y:
            merged.append(x)
            i += 1
        else:
            merged.append(y)
            j += 1
            # y hops over the remaining entries of mono_a
            if (len(mono_a) - i) % 2:
                sign = -sign
    merged.extend(mono_a[i:])
    merged.extend(mono_b[j:])
    return sign, tuple(merged)


class GradedCoefficient:
    """Laurent polynomial in z with exterior-monomial coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for (k, mono), q in (terms or {}).items():
            q = q if isinstance(q, Fraction) else Fraction(q)
            if q:
                clean[(k, validate_monomial(mono))] = q
        self.terms = clean

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({(0, ()): Fraction(1)})

    @classmethod
    def monomial(cls, coeff, exp=0, zetas=()):
        return cls({(exp, tuple(zetas)): coeff})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, GradedCoefficient) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __add__(self, other):
        out = dict(self.terms)
        for key, q in other.terms.items():
            s = out.get(key, ZERO) + q
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return GradedCoefficient(out)

    def __neg__(self):
        return GradedCoefficient({key: -q for key, q in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, GradedCoefficient):
            q = other if isinstance(other, Fraction) else Fraction(other)
            return GradedCoefficient({key: v * q for key, v in self.terms.items()})
        out = {}
        for (ka, ma), qa in self.terms.items():
            for (kb, mb), qb in other.terms.items():
                w = wedge(ma, mb)
                if w is None:
                    continue
                sign, mono = w
                key = (ka + kb, mono)
                s = out.get(key, ZERO) + sign * qa * qb
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return GradedCoefficient(out)

    __rmul__ = __mul__

    def degree_component(self, p):
        """Terms of exterior degree exactly p."""
        return GradedCoefficient(
            {key: q for key, q in self.terms.items() if len(key[1]) == p}
        )

    def exterior_degrees(self):
        return sorted({len(mono) for _, mono in self.terms})

    def min_exterior_degree(self):
        """Least exterior degree present, or None for the zero element."""
        degs = self.exterior_degrees()
        return degs[0] if degs else None

    def parity(self):
        """EVEN/ODD for parity-homogeneous elements, None for mixed or zero."""
        pars = {len(mono) % 2 for _, mono in self.terms}
        if len(pars) == 1:
            return pars.pop()
        return None

    def laurent_exponents(self):
        return sorted({k for k, _ in self.terms})

    def shift(self, dk):
        """Multiply by z^dk."""
        return GradedCoefficient({(k + dk, mono): q for (k, mono), q in self.terms.items()})

    def weight(self, twist_of_zeta):
        """Common torus weight k + twist_of_zeta*|I|, or "inhomogeneous"."""
        weights = {k + twist_of_zeta * len(mono) for (k, mono) in self.terms}
        if not weights:
            return 0
        if len(weights) == 1:
            return weights.pop()
        return "inhomogeneous"

    def render(self):
        """Text form: terms like `3/2 z^-1 zeta1zeta2`, joined with ' + '."""
        if not self.terms:
            return "0"
        parts = []
        for (k, mono) in sorted(self.terms, key=lambda km: (km[0], km[1])):
            q = self.terms[(k, mono)]
            factors = []
            if k:
                factors.append("z^%d" % k)
            if mono:
                factors.append("".join("zeta%d" % i for i in mono))
            if not factors or q != 1:
                factors.insert(0, str(q))
            parts.append(" ".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return "GradedCoefficient(%s)" % self.render()


def multiply(a, b):
    """Module-level alias for the super-commutative product."""
    return a * b


def degree_component(a, p):
    return a.degree_component(p)


def weight(a, twist_of_zeta):
    return a.weight(twist_of_zeta)


def all_monomials(m, degree=None):
    """All strictly increasing monomials in generators 1..m (optionally of a
    fixed exterior degree), in lexicographic order."""
    from itertools import combinations

    degrees = range(m + 1) if degree is None else [degree]
    out = []
    for p in degrees:
        out.extend(combinations(range(1, m + 1), p))
    return out
