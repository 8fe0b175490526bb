"""Classification-level outputs: obstruction ladders, constructive reduction
of cocycles, holomorphic connections and their obstruction, and the
equivalence between the tangent-sheaf class, the splitting of the degree-0
tangent sequence, and the existence of a connection.

Connections on G = + O(g_i) over CP^1 are represented by chartwise matrices
of 1-form coefficients against the z-frame: entry (i, j) is a section of the
twist (g_i - g_j - 2) line bundle, regular exponents >= 0 on chart 0 and
<= g_i - g_j - 2 on chart 1.
"""

from dataclasses import dataclass
from fractions import Fraction

from .cech import SlotComplex, build_split_complex, cohomology
from .coeffs import EVEN, ODD, GradedCoefficient, all_monomials, parity_add, wedge
from .errors import InputError, InvariantViolation, NoConnection
from .geometry import bott_dim
from .gluing import (
    SPLIT_REPRESENTATIVE,
    GradedMatrix,
    mu_k,
    order_with_representative,
    twisted_complex,
)
from .sheaves import end_block, tangent_descriptor, tangent_terms


@dataclass(frozen=True)
class ObstructionLadder:
    """Global-sections and degree-1 dimensions of every endomorphism block."""

    rows: tuple  # of (p, dim H^0, dim H^1)
    verdict: str  # "rigid-split" or "non-rigid"

    def is_rigid(self):
        return self.verdict == "rigid-split"

    def to_json_dict(self):
        return {
            "rows": [{"p": p, "h0": h0, "h1": h1} for p, h0, h1 in self.rows],
            "verdict": self.verdict,
        }


def ladder(desc):
    """Obstruction dimensions per degree; rigid-split iff every H^1 vanishes."""
    n = desc.space.n
    rows = []
    rigid = True
    for p in range(1, desc.space.m + 1):
        block = end_block(desc, p)
        h0 = block.twists.h_dim(n, 0)
        h1 = block.twists.h_dim(n, 1)
        rows.append((p, h0, h1))
        if h1:
            rigid = False
    return ObstructionLadder(tuple(rows), "rigid-split" if rigid else "non-rigid")


@dataclass(frozen=True)
class SplittingCertificate:
    """Either an explicit trivialization of a cocycle or its first obstruction.

    Exactly one of ``trivialization`` (a pair of chart-regular matrices
    (b0, b1) with b0 b1^-1 equal to the cocycle) and ``obstruction`` (the
    first nonvanishing symbol class) is set.
    """

    desc: object
    cocycle: object
    trivialization: object = None
    obstruction: object = None

    @property
    def is_split(self):
        return self.trivialization is not None

    def to_json_dict(self):
        if self.is_split:
            return {"split": True}
        return {
            "split": False,
            "order": self.obstruction.k,
            "class": {
                "%d,%d,%s,%d" % (r, c, "".join(map(str, mono)), e): str(v)
                for (r, c, mono, e), v in sorted(self.obstruction.class_dict().items())
            },
        }


def _chart_regular(desc, matrix, chart):
    """Entries regular on a chart: exponent >= 0 on chart 0, and on chart 1
    at most t_row - t_col - |monomial|."""
    summands = desc.summands()
    for (r, c), coeff in matrix.entries.items():
        for (e, mono) in coeff.terms:
            if chart == 0 and e < 0:
                return False
            if chart == 1 and e > summands[r][0] - summands[c][0] - len(mono):
                return False
    return True


def reduce_cocycle(desc, cocycle):
    """Constructive degree-wise reduction of a cocycle to the identity.

    When every symbol class vanishes the collected corrections assemble to
    chart automorphisms b0, b1 with b0 b1^-1 = a (machine-checked, together
    with chart regularity and agreement of twisted and split cohomology);
    otherwise the first nonvanishing symbol class is returned.
    """
    if desc.space.n != 1:
        raise InputError("explicit reduction works over CP^1 only")
    k, reduced, corrections = order_with_representative(cocycle)
    if k != SPLIT_REPRESENTATIVE:
        sym = mu_k(reduced, k)
        if sym.is_zero():
            raise InvariantViolation("reduction stopped at a vanishing symbol class")
        return SplittingCertificate(desc, cocycle, obstruction=sym)
    size = desc.total_rank
    bound = desc.space.m + 1
    b0 = GradedMatrix.identity(size)
    b1 = GradedMatrix.identity(size)
    b1_inv = GradedMatrix.identity(size)
    for _, beta0, beta1 in corrections:
        b0 = b0 * beta0.exp(bound)
        b1 = b1 * beta1.exp(bound)
        b1_inv = (-beta1).exp(bound) * b1_inv
    if b0 * b1_inv != cocycle.matrix:
        raise InvariantViolation("trivialization failed the coboundary identity")
    if not _chart_regular(desc, b0, 0) or not _chart_regular(desc, b1, 1):
        raise InvariantViolation("trivialization halves are not chart regular")
    twisted = cohomology(twisted_complex(desc, cocycle))
    split = cohomology(build_split_complex(desc))
    if twisted.h != split.h:
        raise InvariantViolation(
            "trivialized cocycle has non-split cohomology dimensions"
        )
    return SplittingCertificate(desc, cocycle, trivialization=(b0, b1))


# ---------------------------------------------------------------------------
# Connections
# ---------------------------------------------------------------------------

def log_derivative_cochain(g_twists):
    """Overlap cochain of the transition data of + O(g_i) against the
    coordinate frame: the diagonal matrix with entries g_i z^-1."""
    return {
        ((i, i), -1): Fraction(g) for i, g in enumerate(g_twists) if g
    }


def _hom_theta_slots(g_twists):
    g = list(g_twists)
    return [
        ((i, j), g[i] - g[j] - 2) for i in range(len(g)) for j in range(len(g))
    ]


@dataclass(frozen=True)
class ConnectionProblem:
    """Extension data of the degree-0 tangent sequence for G = + O(g_i)."""

    g_twists: tuple
    atiyah_cocycle: dict  # ((i, j), exp) -> Fraction

    def per_summand_classes(self):
        return atiyah_obstruction(self.g_twists)


def connection_problem(g_twists):
    return ConnectionProblem(tuple(g_twists), log_derivative_cochain(g_twists))


def atiyah_obstruction(g_twists):
    """Per-summand obstruction classes against the degree-1 generator of the
    twist -2 line bundle; the full off-diagonal classes all vanish for
    diagonal transition data and are reduced alongside."""
    g = list(g_twists)
    if not g:
        return []
    sc = SlotComplex(_hom_theta_slots(g), extra_exponents=[-1])
    coords = sc.class_coords(log_derivative_cochain(g))
    for (label, e), v in coords.items():
        if label[0] != label[1] and v:
            raise InvariantViolation("diagonal transition produced off-diagonal classes")
    return [coords.get(((i, i), -1), Fraction(0)) for i in range(len(g))]


@dataclass(frozen=True)
class Connection:
    """Chartwise connection matrices in the z-frame, against the frame field.

    ``chart0`` and ``chart1`` are {(i, j): {exp: Fraction}} with
    chart1 - chart0 equal to the log-derivative cochain of the transitions.
    """

    g_twists: tuple
    chart0: dict
    chart1: dict


def _as_matrix_dict(half):
    return {label: dict(coeffs) for label, coeffs in half.items() if coeffs}


def construct_connection(g_twists):
    """Explicit chartwise connection, or None when the obstruction is nonzero."""
    g = tuple(g_twists)
    sc = SlotComplex(_hom_theta_slots(g), extra_exponents=[-1])
    sol = sc.solve_coboundary(log_derivative_cochain(g))
    if sol is None:
        return None
    h0, h1 = sol
    return Connection(g, _as_matrix_dict(h0), _as_matrix_dict(h1))


def leibniz_wedge_matrix(matrix, g_count, p):
    """Induced matrix on the p-th exterior power by the Leibniz rule.

    ``matrix`` is {(i, j): {exp: Fraction}} over 0-based indices; the result
    is indexed by strictly increasing p-tuples of 1-based indices.
    """
    bases = all_monomials(g_count, p)
    out = {}
    for col in bases:
        for pos, i1 in enumerate(col):
            i = i1 - 1
            for j in range(g_count):
                coeffs = matrix.get((j, i))
                if not coeffs:
                    continue
                rest = col[:pos] + col[pos + 1:]
                w = wedge((j + 1,), rest)
                if w is None:
                    continue
                sign, row = w
                # moving the factor back past pos earlier slots
                sign *= (-1) ** pos
                cell = out.setdefault((row, col), {})
                for e, v in coeffs.items():
                    cell[e] = cell.get(e, Fraction(0)) + sign * v
    return {
        key: {e: v for e, v in cell.items() if v}
        for key, cell in out.items()
        if any(cell.values())
    }


def wedge_connection(conn, p):
    """Connection induced on the p-th exterior power, Leibniz-consistent.

    Both chart halves are wedged; their full difference is checked to be the
    log-derivative cochain of the wedged twists, which is the gluing
    compatibility of the induced connection.
    """
    g = conn.g_twists
    if p < 0 or p > len(g):
        raise InputError("exterior power out of range")
    bases = all_monomials(len(g), p)
    wedged_twists = {mono: sum(g[i - 1] for i in mono) for mono in bases}
    chart0 = leibniz_wedge_matrix(conn.chart0, len(g), p)
    chart1 = leibniz_wedge_matrix(conn.chart1, len(g), p)
    difference = {}
    for sign, half in ((1, chart1), (-1, chart0)):
        for (r, c), coeffs in half.items():
            for e, v in coeffs.items():
                key = (r, c, e)
                s = difference.get(key, Fraction(0)) + sign * v
                if s:
                    difference[key] = s
                else:
                    difference.pop(key, None)
    want = {
        (mono, mono, -1): Fraction(wedged_twists[mono])
        for mono in bases
        if wedged_twists[mono]
    }
    if difference != want:
        raise InvariantViolation("wedge connection lost the transition data")
    relabel = {mono: i for i, mono in enumerate(bases)}
    return Connection(
        tuple(wedged_twists[mono] for mono in bases),
        {(relabel[r], relabel[c]): v for (r, c), v in chart0.items()},
        {(relabel[r], relabel[c]): v for (r, c), v in chart1.items()},
    )


def _laurent_mul(a, b):
    out = {}
    for e1, v1 in a.items():
        for e2, v2 in b.items():
            e = e1 + e2
            s = out.get(e, Fraction(0)) + v1 * v2
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _laurent_derivative(a):
    return {e - 1: e * v for e, v in a.items() if e}


@dataclass(frozen=True)
class CurvatureReport:
    """Curvature of a chartwise connection over a one-dimensional base.

    ``form_coefficient`` per chart is the formal coefficient of the
    curvature 2-form (entrywise derivative plus the matrix square); the
    alternating square of the single coordinate covector is zero, so the
    assembled curvature is the zero matrix, which is verified rather than
    assumed.
    """

    size: int
    form_coefficients: tuple  # per chart, {(i, j): {exp: Fraction}}
    matrix: dict  # {(i, j): {exp: Fraction}}, verified zero

    def is_zero(self):
        return not self.matrix


def curvature(conn):
    size = len(conn.g_twists)
    coefficients = []
    assembled = {}
    # the single coordinate covector pairs to zero under alternation
    alternating_factor = Fraction(1) * Fraction(1) - Fraction(1) * Fraction(1)
    for half in (conn.chart0, conn.chart1):
        coeff = {}
        for (i, j), a in half.items():
            d = _laurent_derivative(a)
            if d:
                cell = coeff.setdefault((i, j), {})
                for e, v in d.items():
                    cell[e] = cell.get(e, Fraction(0)) + v
        for (i, j), a in half.items():
            for (jj, k), b in half.items():
                if j != jj:
                    continue
                prod = _laurent_mul(a, b)
                cell = coeff.setdefault((i, k), {})
                for e, v in prod.items():
                    cell[e] = cell.get(e, Fraction(0)) + v
        coeff = {
            key: {e: v for e, v in cell.items() if v}
            for key, cell in coeff.items()
        }
        coeff = {key: cell for key, cell in coeff.items() if cell}
        coefficients.append(coeff)
        for key, cell in coeff.items():
            scaled = {e: v * alternating_factor for e, v in cell.items()}
            scaled = {e: v for e, v in scaled.items() if v}
            if scaled:
                assembled[key] = scaled
    if assembled:
        raise InvariantViolation("curvature 2-form is nonzero on a curve")
    return CurvatureReport(size, tuple(coefficients), assembled)


def connection_or_raise(g_twists):
    conn = construct_connection(g_twists)
    if conn is None:
        raise NoConnection("the twist obstruction is nonzero; no connection exists")
    return conn


def curvature_of(g_twists):
    return curvature(connection_or_raise(g_twists))


# ---------------------------------------------------------------------------
# Tangent sheaf equivalence
# ---------------------------------------------------------------------------

def _tangent_end1_slots(g_twists):
    """Degree-1 endomorphism slots of the tangent retract: parity-crossed
    pairs of (frame field, dual generators) tensored with one generator,
    whose twist enters with its own value rather than the uniform projective
    one."""
    g = list(g_twists)
    labels = [("theta", 2, EVEN)] + [
        (("gdual", i), -g[i], ODD) for i in range(len(g))
    ]
    slots = []
    for r, (lr, tr, pr) in enumerate(labels):
        for c, (lc, tc, pc) in enumerate(labels):
            if parity_add(pr, pc) != 1:
                continue
            for a in range(len(g)):
                slots.append(((lr, lc, a), tr - tc + g[a]))
    return slots


def tangent_symbol_cochain(g_twists):
    """Degree-1 layer of the tangent-sheaf gluing over the overlap.

    Expressing the chart-1 frame fields through the chart-0 ones leaves,
    beyond the reduced transitions, exactly the term that sends the frame
    field to -g_a z^-1 (generator a) (dual generator a), one summand per
    generator.
    """
    g = list(g_twists)
    return {
        ((("gdual", a), "theta", a), -1): Fraction(-g[a])
        for a in range(len(g))
        if g[a]
    }


@dataclass(frozen=True)
class Theorem7Report:
    g_twists: tuple
    tangent_class_trivial: bool
    sequence_splits: bool
    connection_exists: bool
    tangent_obstruction_dims: tuple
    all_equal: bool

    def to_json_dict(self):
        return {
            "g_twists": list(self.g_twists),
            "tangent_class_trivial": self.tangent_class_trivial,
            "sequence10_splits": self.sequence_splits,
            "connection_exists": self.connection_exists,
            "all_equal": self.all_equal,
        }


def theorem7_check(g_twists):
    """Three-way equivalence over CP^1 at the first-obstruction level.

    (1) the degree-1 symbol class of the tangent-sheaf gluing vanishes (and
    then the gluing is already the identity, so the full class is trivial
    constructively); (2) the extension class of the degree-0 tangent
    sequence vanishes; (3) an explicit chartwise connection exists.  The
    three booleans are computed independently and asserted equal.
    """
    g = tuple(g_twists)
    if not g:
        raise InputError("the odd bundle must have positive rank")
    cochain = tangent_symbol_cochain(g)
    sc = SlotComplex(_tangent_end1_slots(g), extra_exponents=[-1])
    coords = sc.class_coords(cochain)
    tangent_trivial = not coords
    if tangent_trivial and cochain:
        raise InvariantViolation(
            "vanishing tangent class with a nonzero diagonal gluing layer"
        )
    classes = atiyah_obstruction(g)
    seq_splits = all(v == 0 for v in classes)
    conn = construct_connection(g)
    connection_exists = conn is not None
    dims = _tangent_obstruction_dims(g)
    agree = tangent_trivial == seq_splits == connection_exists
    if not agree:
        raise InvariantViolation(
            "tangent class, extension class and connection existence disagree"
        )
    return Theorem7Report(
        g_twists=g,
        tangent_class_trivial=tangent_trivial,
        sequence_splits=seq_splits,
        connection_exists=connection_exists,
        tangent_obstruction_dims=dims,
        all_equal=agree,
    )


def _tangent_obstruction_dims(g_twists):
    """Degree-1 obstruction space dimension of the tangent retract, from the
    slot twists (summed per-slot line-bundle dimensions)."""
    total = sum(bott_dim(1, t, 1) for _, t in _tangent_end1_slots(g_twists))
    return ((1, total),)
