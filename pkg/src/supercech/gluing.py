"""Non-split gluing over the split base: cocycles, symbols, twisted complexes.

A non-split sheaf with a given retract is glued by a single overlap
automorphism that is the identity plus terms of positive exterior degree.
The exp/log dictionary moves between such automorphisms and nilpotent
endomorphism cochains; the degree-k layer of the log has a cohomology class
in the degree-k endomorphism sheaf, and the order of a cocycle is the first
degree whose layer is not a coboundary (lower layers are absorbed
constructively by adjusting the representative).
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .cech import AUTO, SlotComplex, auto_window, build_complex, resolve_window
from .coeffs import GradedCoefficient, all_monomials, parity_add, validate_monomial
from .errors import (
    InputError,
    InvariantViolation,
    NotInFiltration,
    NotUnipotent,
)

SPLIT_REPRESENTATIVE = "split-representative"


class GradedMatrix:
    """Square matrix with coefficient-algebra entries over the reduced basis."""

    __slots__ = ("size", "entries")

    def __init__(self, size, entries=None):
        self.size = size
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < size and 0 <= c < size):
                raise InvariantViolation("graded matrix index out of range")
            if v:
                clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def identity(cls, size):
        one = GradedCoefficient.one()
        return cls(size, {(i, i): one for i in range(size)})

    @classmethod
    def zero(cls, size):
        return cls(size)

    def __getitem__(self, rc):
        return self.entries.get(rc, GradedCoefficient.zero())

    def __eq__(self, other):
        return (
            isinstance(other, GradedMatrix)
            and self.size == other.size
            and self.entries == other.entries
        )

    def __add__(self, other):
        out = dict(self.entries)
        for k, v in other.entries.items():
            s = out.get(k)
            s = v if s is None else s + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return GradedMatrix(self.size, out)

    def __neg__(self):
        return GradedMatrix(self.size, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GradedMatrix):
            out = {}
            by_row = {}
            for (r, j), v in self.entries.items():
                by_row.setdefault(r, []).append((j, v))
            by_col = {}
            for (j, c), v in other.entries.items():
                by_col.setdefault(j, []).append((c, v))
            for r, row in by_row.items():
                for j, v in row:
                    for c, w in by_col.get(j, ()):
                        key = (r, c)
                        s = out.get(key)
                        prod = v * w
                        s = prod if s is None else s + prod
                        if s:
                            out[key] = s
                        else:
                            out.pop(key, None)
            return GradedMatrix(self.size, out)
        return GradedMatrix(
            self.size, {k: v * other for k, v in self.entries.items()}
        )

    __rmul__ = __mul__

    def degree_component(self, p):
        out = {}
        for k, v in self.entries.items():
            comp = v.degree_component(p)
            if comp:
                out[k] = comp
        return GradedMatrix(self.size, out)

    def min_degree(self):
        """Least exterior degree over all entries, None for the zero matrix."""
        degs = [v.min_exterior_degree() for v in self.entries.values()]
        return min(degs) if degs else None

    def max_exterior_degree(self):
        degs = [max(v.exterior_degrees()) for v in self.entries.values()]
        return max(degs) if degs else None

    def laurent_exponents(self):
        exps = set()
        for v in self.entries.values():
            exps.update(v.laurent_exponents())
        return sorted(exps)

    def is_zero(self):
        return not self.entries

    def exp(self, nilpotency_bound):
        """exp-series, truncated once powers vanish (nilpotent input only)."""
        if self.min_degree() is not None and self.min_degree() < 1:
            raise InvariantViolation("exp needs exterior degree >= 1")
        acc = GradedMatrix.identity(self.size)
        power = GradedMatrix.identity(self.size)
        for i in range(1, nilpotency_bound + 1):
            power = power * self
            if power.is_zero():
                break
            acc = acc + power * Fraction(1, factorial(i))
        return acc

    def log(self, nilpotency_bound):
        """log-series of a unipotent matrix."""
        n = self - GradedMatrix.identity(self.size)
        if n.degree_component(0).entries:
            raise NotUnipotent("exterior-degree-0 part is not the identity")
        acc = GradedMatrix.zero(self.size)
        power = GradedMatrix.identity(self.size)
        for i in range(1, nilpotency_bound + 1):
            power = power * n
            if power.is_zero():
                break
            acc = acc + power * Fraction((-1) ** (i + 1), i)
        return acc

    def neumann_inverse(self, bound):
        """(I + N)^-1 for nilpotent N; raises if the series does not terminate."""
        n = self - GradedMatrix.identity(self.size)
        acc = GradedMatrix.identity(self.size)
        power = GradedMatrix.identity(self.size)
        for _ in range(bound + 1):
            power = power * (-n)
            if power.is_zero():
                return acc
            acc = acc + power
        raise InvariantViolation("matrix is not unipotent; inverse series diverges")

    def inverse(self, bound):
        """Inverse of scalar-diagonal + nilpotent-off-diagonal matrices."""
        size = self.size
        diag = {}
        for i in range(size):
            d = self[(i, i)]
            terms = d.terms
            if list(terms.keys()) != [(0, ())]:
                raise InvariantViolation(
                    "inverse supports constant diagonal entries only"
                )
            diag[i] = terms[(0, ())]
        dinv = GradedMatrix(
            size,
            {
                (i, i): GradedCoefficient.monomial(Fraction(1) / diag[i])
                for i in range(size)
            },
        )
        unipotent = dinv * self
        return unipotent.neumann_inverse(bound) * dinv


def _validate_even_entries(desc, matrix, context):
    summands = desc.summands()
    m = desc.space.m
    for (r, c), coeff in matrix.entries.items():
        want = parity_add(summands[r][1], summands[c][1])
        for (_, mono) in coeff.terms:
            validate_monomial(mono, m)
            if len(mono) % 2 != want:
                raise InvariantViolation(
                    "%s entry (%d, %d) breaks the parity rule for its summand pair"
                    % (context, r, c)
                )


@dataclass(frozen=True)
class EndomorphismCochain:
    """Overlap cochain of endomorphisms with entries of exterior degree >= 1."""

    desc: object
    matrix: GradedMatrix
    support: str = "U01"

    def __post_init__(self):
        if self.matrix.size != self.desc.total_rank:
            raise InvariantViolation("cochain matrix size differs from the rank")
        md = self.matrix.min_degree()
        if md is not None and md < 1:
            raise InvariantViolation("cochain entries must have exterior degree >= 1")
        _validate_even_entries(self.desc, self.matrix, "cochain")

    @property
    def min_degree(self):
        return self.matrix.min_degree()

    def degree_component(self, k):
        return EndomorphismCochain(self.desc, self.matrix.degree_component(k))

    def is_zero(self):
        return self.matrix.is_zero()


@dataclass(frozen=True)
class GluingCocycle:
    """Overlap automorphism gluing a non-split sheaf over the split base.

    Unit exterior-degree-0 part plus nilpotent higher terms, so always
    invertible; with two charts the cocycle condition is vacuous and only the
    structural shape is validated.
    """

    desc: object
    matrix: GradedMatrix

    def __post_init__(self):
        if self.matrix.size != self.desc.total_rank:
            raise InvariantViolation("cocycle matrix size differs from the rank")
        if self.matrix.degree_component(0) != GradedMatrix.identity(self.matrix.size):
            raise NotUnipotent("cocycle degree-0 part must be the identity")
        _validate_even_entries(self.desc, self.matrix, "cocycle")

    def is_identity(self):
        return self.matrix == GradedMatrix.identity(self.matrix.size)


def identity_cocycle(desc):
    return GluingCocycle(desc, GradedMatrix.identity(desc.total_rank))


def exp(cochain):
    """Exponential of a nilpotent cochain; truncates at the odd dimension."""
    bound = cochain.desc.space.m + 1
    return GluingCocycle(cochain.desc, cochain.matrix.exp(bound))


def log(cocycle):
    """Logarithm of a unipotent cocycle; inverse bijection of exp."""
    bound = cocycle.desc.space.m + 1
    return EndomorphismCochain(cocycle.desc, cocycle.matrix.log(bound))


# ---------------------------------------------------------------------------
# The Cech complex of degree-k endomorphisms: one twisted line bundle per
# (row, col, monomial) slot, used for symbol classes and coboundary solving.
# ---------------------------------------------------------------------------

class EndCechComplex:
    """Degree-k endomorphism sheaf as labeled line-bundle slots: label
    (row, col, monomial), twist t_row - t_col - k over parity-matched pairs."""

    def __init__(self, desc, k, extra_exponents=()):
        if desc.space.n != 1:
            raise InputError("endomorphism complexes exist only over CP^1")
        if k < 1:
            raise InputError("endomorphism degree must be >= 1")
        self.desc = desc
        self.k = k
        summands = desc.summands()
        monos = all_monomials(desc.space.m, k)
        slots = []
        for r, (tr, pr) in enumerate(summands):
            for c, (tc, pc) in enumerate(summands):
                if parity_add(pr, pc) == k % 2:
                    for mono in monos:
                        slots.append(((r, c, mono), tr - tc - k))
        self._sc = SlotComplex(slots, extra_exponents)
        self.window = self._sc.window

    def h1_dim(self):
        return self._sc.h1_dim()

    def _cochain_of(self, matrix):
        cochain = {}
        for (r, c), coeff in matrix.entries.items():
            for (e, mono), q in coeff.terms.items():
                if len(mono) != self.k:
                    raise InvariantViolation("symbol cochain is not degree homogeneous")
                cochain[((r, c, mono), e)] = q
        return cochain

    def class_coords(self, matrix):
        """Cohomology-class coordinates keyed by surviving Cech slots."""
        out = {}
        for ((r, c, mono), e), v in self._sc.class_coords(self._cochain_of(matrix)).items():
            out[(r, c, mono, e)] = v
        return out

    def solve_coboundary(self, matrix):
        """Solve (B1 - B0) = matrix with B0, B1 regular on their charts.

        Returns (B0, B1) as graded matrices or None when the class is nonzero.
        """
        sol = self._sc.solve_coboundary(self._cochain_of(matrix))
        if sol is None:
            return None
        size = self.desc.total_rank
        out = []
        for half in sol:
            entries = {}
            for (r, c, mono), coeffs in half.items():
                acc = entries.get((r, c), GradedCoefficient.zero())
                for e, v in coeffs.items():
                    acc = acc + GradedCoefficient.monomial(v, e, mono)
                entries[(r, c)] = acc
            out.append(GradedMatrix(size, {k_: v for k_, v in entries.items() if v}))
        b0, b1 = out
        if b1 - b0 != matrix:
            raise InvariantViolation("coboundary solution failed verification")
        return b0, b1


@dataclass(frozen=True)
class SymbolClass:
    """Degree-k layer of a cocycle's log with its cohomology class."""

    k: int
    cochain: EndomorphismCochain
    cohomology_class: tuple  # sorted ((row, col, mono, exp), Fraction) pairs
    h1_dim: int

    def is_zero(self):
        return not self.cohomology_class

    def class_dict(self):
        return dict(self.cohomology_class)


def _symbol_class(desc, layer_matrix, k):
    ec = EndCechComplex(desc, k, extra_exponents=layer_matrix.laurent_exponents())
    coords = ec.class_coords(layer_matrix)
    return SymbolClass(
        k=k,
        cochain=EndomorphismCochain(desc, layer_matrix),
        cohomology_class=tuple(sorted(coords.items())),
        h1_dim=ec.h1_dim(),
    )


def mu_k(cocycle, k):
    """Degree-k layer of log(a) with its class in the degree-k obstruction space."""
    layer = log(cocycle).matrix.degree_component(k)
    return _symbol_class(cocycle.desc, layer, k)


def lambda_p(cocycle, p):
    """Degree-p layer of a cocycle in filtration level p.

    Agrees with mu_k at k = p over the split base; raises NotInFiltration when
    the log has terms below degree p.
    """
    a_log = log(cocycle).matrix
    md = a_log.min_degree()
    if md is not None and md < p:
        raise NotInFiltration(
            "cocycle log has exterior degree %d < requested level %d" % (md, p)
        )
    return _symbol_class(cocycle.desc, a_log.degree_component(p), p)


def order_with_representative(cocycle):
    """Order of a cocycle, its adjusted representative, and the corrections.

    Absorbs degree-k layers that are coboundaries by the two-sided adjustment
    a -> exp(-b0) a exp(b1) with (b1 - b0) = -layer, one degree at a time;
    stops at the first layer with a nonzero class.  Returns
    (order, representative, corrections) where order is the string
    "split-representative" when every layer absorbs.
    """
    desc = cocycle.desc
    m = desc.space.m
    bound = m + 1
    work = cocycle
    corrections = []
    guard = 0
    while True:
        a_log = work.matrix.log(bound)
        md = a_log.min_degree()
        if md is None:
            return SPLIT_REPRESENTATIVE, work, corrections
        layer = a_log.degree_component(md)
        ec = EndCechComplex(desc, md, extra_exponents=layer.laurent_exponents())
        sol = ec.solve_coboundary(-layer)
        if sol is None:
            return md, work, corrections
        b0, b1 = sol
        adjusted = b0.exp(bound).neumann_inverse(bound) * work.matrix * b1.exp(bound)
        work = GluingCocycle(desc, adjusted)
        new_md = work.matrix.log(bound).min_degree()
        if new_md is not None and new_md <= md:
            raise InvariantViolation("coboundary absorption failed to raise the degree")
        corrections.append((md, b0, b1))
        guard += 1
        if guard > m + 1:
            raise InvariantViolation("absorption loop exceeded the filtration length")


def order(cocycle):
    """The largest filtration level containing the cocycle's class
    (degree-wise), or "split-representative"."""
    result, _, _ = order_with_representative(cocycle)
    return result


# ---------------------------------------------------------------------------
# Twisted complexes
# ---------------------------------------------------------------------------

def cocycle_action(cocycle):
    """U1-rewrite map of the twisted coboundary: c |-> a(c) on overlap slots."""
    matrix = cocycle.matrix

    def u1_image(summand, laurent_exp, mono):
        section = GradedCoefficient.monomial(Fraction(1), laurent_exp, mono)
        out = {}
        for (r, c), entry in matrix.entries.items():
            if c != summand:
                continue
            prod = entry * section
            for (e, mo), q in prod.terms.items():
                key = (r, e, mo)
                out[key] = out.get(key, Fraction(0)) + q
        return {k: v for k, v in out.items() if v}

    return u1_image


def twisted_window(desc, cocycle):
    """Auto window of the split complex enlarged by the cocycle's Laurent span."""
    lo, hi = auto_window(desc)
    delta = cocycle.matrix - GradedMatrix.identity(cocycle.matrix.size)
    exps = delta.laurent_exponents()
    if exps:
        lo += min(0, min(exps))
        hi += max(0, max(exps))
    return (lo, hi)


def twisted_complex(desc, cocycle, window=AUTO, on_truncate=None):
    """Split complex with the coboundary replaced by c -> a(c_U1) - c_U0.

    The new coboundary never lowers the filtration index because a - id
    raises the exterior degree by at least the order of the cocycle.  With an
    explicit window, image terms falling outside it raise WindowTooSmall; the
    auto window is enlarged by the cocycle's Laurent span and projects away
    the residual edge leakage, which the stability check validates.
    """
    if cocycle.desc != desc:
        raise InputError("cocycle was built for a different descriptor")
    if window == AUTO or window is None:
        win = twisted_window(desc, cocycle)
        mode = on_truncate or "drop"
    else:
        win, _ = resolve_window(desc, window)
        mode = on_truncate or "error"
    if cocycle.is_identity():
        return build_complex(desc, window=win, u1_image=None)
    return build_complex(
        desc, window=win, u1_image=cocycle_action(cocycle), on_truncate=mode
    )


def conjugate(cocycle, aut, bound=None):
    """Conjugate by a global degree-0 automorphism: a -> g a g^-1."""
    size = cocycle.matrix.size
    if bound is None:
        bound = (cocycle.desc.space.m + 1) * (size + 1)
    inv = aut.inverse(bound)
    return GluingCocycle(cocycle.desc, aut * cocycle.matrix * inv)


def equivalent_adjust(cocycle, b0, b1):
    """Cocycle equivalence a -> exp(-b0) a exp(b1) by chartwise corrections."""
    bound = cocycle.desc.space.m + 1
    adjusted = (
        b0.exp(bound).neumann_inverse(bound)
        * cocycle.matrix
        * b1.exp(bound)
    )
    return GluingCocycle(cocycle.desc, adjusted)


# ---------------------------------------------------------------------------
# Randomized constructions (seeded; used by property suites and the demo)
# ---------------------------------------------------------------------------

def random_cochain(desc, rng, term_probability=0.6, exp_range=(-2, 2)):
    """Random nilpotent endomorphism cochain respecting the parity rule."""
    summands = desc.summands()
    m = desc.space.m
    entries = {}
    for r, (_, pr) in enumerate(summands):
        for c, (_, pc) in enumerate(summands):
            degrees = [
                d for d in range(1, m + 1) if d % 2 == parity_add(pr, pc)
            ]
            if not degrees or rng.random() > term_probability:
                continue
            d = rng.choice(degrees)
            monos = all_monomials(m, d)
            coeff = GradedCoefficient.monomial(
                Fraction(rng.randint(-2, 2), rng.randint(1, 2)),
                rng.randint(*exp_range),
                monos[rng.randrange(len(monos))],
            )
            if coeff:
                entries[(r, c)] = coeff
    return EndomorphismCochain(desc, GradedMatrix(desc.total_rank, entries))


def random_cocycle(desc, rng, **kwargs):
    return exp(random_cochain(desc, rng, **kwargs))


def random_global_automorphism(desc, rng):
    """Random global degree-0 automorphism: invertible constants on the
    diagonal plus monomial sections between strictly comparable twists."""
    summands = desc.summands()
    size = desc.total_rank
    entries = {}
    for i in range(size):
        entries[(i, i)] = GradedCoefficient.monomial(
            Fraction(rng.choice([-2, -1, 1, 2]), rng.choice([1, 2]))
        )
    for r, (tr, pr) in enumerate(summands):
        for c, (tc, pc) in enumerate(summands):
            if r == c or pr != pc or tr <= tc:
                continue
            if rng.random() < 0.5:
                e = rng.randint(0, tr - tc)
                entries[(r, c)] = GradedCoefficient.monomial(
                    Fraction(rng.randint(-2, 2)), e
                )
    mat = GradedMatrix(size, {k: v for k, v in entries.items() if v})
    return mat


# ---------------------------------------------------------------------------
# Cocycle file format: a JSON array of matrix entries of log(a)
# ---------------------------------------------------------------------------

def cochain_from_json(desc, data):
    if not isinstance(data, list):
        raise InputError("cocycle file: expected a JSON array of entries")
    size = desc.total_rank
    entries = {}
    for idx, item in enumerate(data):
        if not isinstance(item, dict):
            raise InputError("cocycle entry %d: expected an object" % idx)
        for field in ("row", "col", "terms"):
            if field not in item:
                raise InputError("cocycle entry %d: missing field %r" % (idx, field))
        r, c = item["row"], item["col"]
        if not isinstance(r, int) or not 0 <= r < size:
            raise InputError("cocycle entry %d: row out of range" % idx)
        if not isinstance(c, int) or not 0 <= c < size:
            raise InputError("cocycle entry %d: col out of range" % idx)
        coeff = GradedCoefficient.zero()
        if not isinstance(item["terms"], list):
            raise InputError("cocycle entry %d: terms must be an array" % idx)
        for t_idx, term in enumerate(item["terms"]):
            where = "cocycle entry %d term %d" % (idx, t_idx)
            if not isinstance(term, dict):
                raise InputError("%s: expected an object" % where)
            z = term.get("z", 0)
            if not isinstance(z, int):
                raise InputError("%s: field 'z' must be an integer" % where)
            zetas = term.get("zetas", [])
            if not isinstance(zetas, list) or not all(isinstance(i, int) for i in zetas):
                raise InputError("%s: field 'zetas' must be a list of indices" % where)
            if sorted(set(zetas)) != list(zetas):
                raise InputError("%s: zeta indices must strictly increase" % where)
            if not zetas:
                raise InputError("%s: constant terms are not allowed in the log" % where)
            if zetas and (zetas[0] < 1 or zetas[-1] > desc.space.m):
                raise InputError("%s: zeta index out of range" % where)
            try:
                q = Fraction(str(term.get("coeff", "1")))
            except (ValueError, ZeroDivisionError):
                raise InputError("%s: field 'coeff' is not a rational p/q" % where)
            coeff = coeff + GradedCoefficient.monomial(q, z, tuple(zetas))
        if coeff:
            key = (r, c)
            entries[key] = entries.get(key, GradedCoefficient.zero()) + coeff
    matrix = GradedMatrix(size, {k: v for k, v in entries.items() if v})
    try:
        return EndomorphismCochain(desc, matrix)
    except InvariantViolation as exc:
        raise InputError("cocycle file: %s" % exc)


def cochain_to_json(cochain):
    out = []
    for (r, c) in sorted(cochain.matrix.entries):
        coeff = cochain.matrix.entries[(r, c)]
        terms = [
            {"z": e, "zetas": list(mono), "coeff": str(q)}
            for (e, mono), q in sorted(coeff.terms.items())
        ]
        out.append({"row": r, "col": c, "terms": terms})
    return out


def load_cocycle(desc, path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError("cannot read cocycle file %s: %s" % (path, exc))
    return exp(cochain_from_json(desc, data))
