"""Two-chart Cech complexes of retract sheaves on CP^{1|m}.

Cochains are stored uniformly in the chart-0 trivialization, weight-windowed
to finite dimension.  Degree 0 holds sections over the two charts, degree 1
sections over the overlap, and the split coboundary is the sparse
subtraction (s0, s1) |-> s1 - s0.  Every basis vector carries its exterior
(filtration) degree and sheaf parity; the coboundary preserves both, which
makes it odd in the grading that mixes sheaf parity with Cech degree.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .coeffs import EVEN, ODD, all_monomials, parity_add
from .errors import InputError, InvariantViolation, WindowTooSmall
from .geometry import U0, U01, U1, ChartModel
from .linalg import Matrix

AUTO = "auto"


@dataclass(frozen=True)
class CochainBasisVector:
    """One monomial cochain: z^k zeta_I times a reduced-bundle summand."""

    cech_degree: int
    chart: str
    summand: int
    laurent_exp: int
    zeta: tuple

    @property
    def filtration(self):
        return len(self.zeta)


def auto_window(desc):
    """Window [min_twist - m - 1, max_twist + m + 1] over the retract pieces.

    The hull is widened to contain exponent 0, where degree-0 classes of
    positively twisted summands start; without this the stated slack does not
    cover them.
    """
    from .sheaves import retract_decomposition

    m = desc.space.m
    twists = []
    for piece in retract_decomposition(desc):
        twists.extend(piece.twists.twists())
    if not twists:
        return (0, 0)
    return (min(0, min(twists)) - m - 1, max(0, max(twists)) + m + 1)


def resolve_window(desc, window):
    if window == AUTO or window is None:
        return auto_window(desc), True
    lo, hi = window
    if lo > hi:
        raise InputError("window lower bound exceeds upper bound")
    return (int(lo), int(hi)), False


@dataclass(frozen=True)
class CechComplex:
    """Finite weight-windowed two-chart complex with filtration bookkeeping."""

    desc: object
    window: tuple
    basis0: tuple
    basis1: tuple
    diff: Matrix
    parities0: tuple
    parities1: tuple
    split: bool

    @property
    def space(self):
        return self.desc.space

    def index1(self):
        return {
            (v.summand, v.zeta, v.laurent_exp): i for i, v in enumerate(self.basis1)
        }

    def parity_indices(self, degree, parity):
        basis = self.basis0 if degree == 0 else self.basis1
        pars = self.parities0 if degree == 0 else self.parities1
        return [i for i, _ in enumerate(basis) if pars[i] == parity]

    def dims(self):
        return (len(self.basis0), len(self.basis1))


def _summand_parities(desc):
    return [par for _, par in desc.summands()]


def _enumerate_basis(desc, window):
    """Basis vectors of degrees 0 and 1, in a fixed canonical order."""
    lo, hi = window
    model = ChartModel(desc.space)
    m = desc.space.m
    summands = desc.summands()
    monos = all_monomials(m)
    basis0 = []
    basis1 = []
    for chart in (U0, U1):
        for i, (twist, _) in enumerate(summands):
            for mono in monos:
                for k in model.sections(chart, twist, len(mono), (lo, hi)):
                    basis0.append(CochainBasisVector(0, chart, i, k, mono))
    for i in range(len(summands)):
        for mono in monos:
            for k in range(lo, hi + 1):
                basis1.append(CochainBasisVector(1, U01, i, k, mono))
    return tuple(basis0), tuple(basis1)


def _sheaf_parity(desc, vector):
    pars = _summand_parities(desc)
    return parity_add(pars[vector.summand], len(vector.zeta))


def build_complex(desc, window=AUTO, u1_image=None, on_truncate="error"):
    """Assemble the complex; ``u1_image`` rewrites U1 sections into overlap
    sections (the identity inclusion when omitted).

    ``u1_image(summand, laurent_exp, zeta)`` must return a sparse dict
    {(summand', laurent_exp', zeta'): Fraction}.  Image slots outside the
    window raise WindowTooSmall under ``on_truncate='error'`` and are
    projected away under ``'drop'``.
    """
    if desc.space.n != 1:
        raise InputError("explicit complexes exist only over CP^1")
    (lo, hi), _ = resolve_window(desc, window)
    basis0, basis1 = _enumerate_basis(desc, (lo, hi))
    pos1 = {(v.summand, v.zeta, v.laurent_exp): i for i, v in enumerate(basis1)}
    entries = {}
    for j, v in enumerate(basis0):
        if v.chart == U0:
            entries[(pos1[(v.summand, v.zeta, v.laurent_exp)], j)] = Fraction(-1)
            continue
        if u1_image is None:
            image = {(v.summand, v.laurent_exp, v.zeta): Fraction(1)}
        else:
            image = u1_image(v.summand, v.laurent_exp, v.zeta)
        for (si, k, mono), coeff in image.items():
            if not coeff:
                continue
            slot = (si, mono, k)
            if slot not in pos1:
                if on_truncate == "error":
                    raise WindowTooSmall(
                        "image slot z^%d zeta%s of summand %d leaves window [%d, %d]"
                        % (k, "".join(map(str, mono)), si, lo, hi)
                    )
                continue
            key = (pos1[slot], j)
            s = entries.get(key, Fraction(0)) + coeff
            if s:
                entries[key] = s
            else:
                entries.pop(key, None)
    diff = Matrix(len(basis1), len(basis0), entries)
    parities0 = tuple(_sheaf_parity(desc, v) for v in basis0)
    parities1 = tuple(_sheaf_parity(desc, v) for v in basis1)
    cx = CechComplex(
        desc=desc,
        window=(lo, hi),
        basis0=basis0,
        basis1=basis1,
        diff=diff,
        parities0=parities0,
        parities1=parities1,
        split=u1_image is None,
    )
    _validate_complex(cx)
    return cx


def _validate_complex(cx):
    """Structural invariants: the coboundary raises Cech degree by one,
    never lowers the filtration index, and preserves sheaf parity (hence is
    odd in the combined grading)."""
    for (r, c) in cx.diff.entries:
        row, col = cx.basis1[r], cx.basis0[c]
        if row.filtration < col.filtration:
            raise InvariantViolation(
                "coboundary lowers the filtration index (%d -> %d)"
                % (col.filtration, row.filtration)
            )
        if cx.parities1[r] != cx.parities0[c]:
            raise InvariantViolation("coboundary mixes sheaf parities")


def build_split_complex(desc, window=AUTO):
    """The complex of the retract itself: U1 sections include into the overlap."""
    return build_complex(desc, window=window, u1_image=None)


@dataclass(frozen=True)
class CohomologyTable:
    """Cohomology dimensions per degree, split by sheaf parity.

    ``h[k]`` is a pair (even, odd).  For split complexes ``bigraded`` maps
    (p, q) to the per-parity dimensions of degree p+q classes of exterior
    degree p.
    """

    h: tuple
    bigraded: object = None

    def total(self, k):
        return sum(self.h[k])

    def bigraded_total(self):
        if self.bigraded is None:
            return None
        return {pq: sum(v) for pq, v in self.bigraded.items()}

    def to_json_dict(self):
        out = {
            "h": [{"even": ev, "odd": od} for ev, od in self.h],
        }
        if self.bigraded is not None:
            out["bigraded"] = {
                "%d,%d" % pq: sum(dims) for pq, dims in sorted(self.bigraded.items())
            }
        return out


def _sub_dims(cx, rows, cols):
    """Kernel dim and rank of the coboundary restricted to index subsets."""
    row_pos = {r: i for i, r in enumerate(rows)}
    col_pos = {c: j for j, c in enumerate(cols)}
    entries = {}
    for (r, c), v in cx.diff.entries.items():
        if r in row_pos and c in col_pos:
            entries[(row_pos[r], col_pos[c])] = v
        elif c in col_pos and r not in row_pos:
            raise InvariantViolation("coboundary leaves the selected subcomplex")
    sub = Matrix(len(rows), len(cols), entries)
    rank = sub.rank()
    return len(cols) - rank, rank


def cohomology(cx):
    """Kernel and cokernel of the coboundary, split by sheaf parity; for split
    complexes also bigraded by the exterior degree."""
    h = []
    dims_by_parity = {}
    for parity in (EVEN, ODD):
        rows = cx.parity_indices(1, parity)
        cols = cx.parity_indices(0, parity)
        k, rank = _sub_dims(cx, rows, cols)
        dims_by_parity[parity] = (k, len(rows) - rank)
    h = (
        (dims_by_parity[EVEN][0], dims_by_parity[ODD][0]),
        (dims_by_parity[EVEN][1], dims_by_parity[ODD][1]),
    )
    bigraded = None
    if cx.split:
        bigraded = {}
        for p in range(cx.desc.space.m + 1):
            for parity in (EVEN, ODD):
                rows = [
                    i
                    for i in cx.parity_indices(1, parity)
                    if cx.basis1[i].filtration == p
                ]
                cols = [
                    j
                    for j in cx.parity_indices(0, parity)
                    if cx.basis0[j].filtration == p
                ]
                kdim, rank = _sub_dims(cx, rows, cols)
                h0, h1 = kdim, len(rows) - rank
                for q, dim in ((0 - p, h0), (1 - p, h1)):
                    if dim:
                        cur = bigraded.get((p, q), (0, 0))
                        if parity == EVEN:
                            bigraded[(p, q)] = (cur[0] + dim, cur[1])
                        else:
                            bigraded[(p, q)] = (cur[0], cur[1] + dim)
    return CohomologyTable(h=h, bigraded=bigraded)


def split_cohomology_oracle(desc):
    """Closed-form table: sum line-bundle dimensions over the retract pieces,
    with the parity of each piece."""
    from .sheaves import retract_decomposition

    h = [[0, 0], [0, 0]]
    bigraded = {}
    for piece in retract_decomposition(desc):
        for twist, parity, mult in piece.twists.entries:
            for q in (0, 1):
                from .geometry import bott_dim

                dim = mult * bott_dim(1, twist, q)
                if dim:
                    h[q][parity] += dim
                    key = (piece.degree, q - piece.degree)
                    cur = bigraded.get(key, (0, 0))
                    if parity == EVEN:
                        bigraded[key] = (cur[0] + dim, cur[1])
                    else:
                        bigraded[key] = (cur[0], cur[1] + dim)
    return CohomologyTable(h=(tuple(h[0]), tuple(h[1])), bigraded=bigraded)


class SlotComplex:
    """Two-chart complex of a labeled direct sum of twisted line bundles.

    Each slot (label, twist) is one line-bundle summand; the window always
    covers every exponent that can carry a degree-1 class, so class
    coordinates are window-independent.  Used for obstruction classes and
    explicit coboundary solving.
    """

    def __init__(self, slots, extra_exponents=()):
        self.slots = tuple(slots)
        if len({label for label, _ in self.slots}) != len(self.slots):
            raise InvariantViolation("slot labels must be unique")
        twists = [t for _, t in self.slots]
        exps = list(extra_exponents)
        lo = min([-1] + [t + 1 for t in twists] + exps)
        hi = max([0] + exps)
        self.window = (lo, hi)
        from .geometry import chart_sections

        self.basis0 = []
        for chart in (U0, U1):
            for s, (_, twist) in enumerate(self.slots):
                for e in chart_sections(chart, twist, (lo, hi)):
                    self.basis0.append((chart, s, e))
        self.basis1 = [
            (s, e) for s in range(len(self.slots)) for e in range(lo, hi + 1)
        ]
        pos1 = {key: i for i, key in enumerate(self.basis1)}
        entries = {}
        for j, (chart, s, e) in enumerate(self.basis0):
            entries[(pos1[(s, e)], j)] = Fraction(1 if chart == U1 else -1)
        self.diff = Matrix(len(self.basis1), len(self.basis0), entries)
        self._pos1 = pos1
        self._slot_pos = {label: s for s, (label, _) in enumerate(self.slots)}
        self._quotient = None

    def h1_dim(self):
        dim, _, _ = self._h1()
        return dim

    def _h1(self):
        if self._quotient is None:
            full = linalg.Subspace.full(len(self.basis1))
            self._quotient = linalg.subquotient(full, linalg.image(self.diff))
        return self._quotient

    def vector_of(self, cochain):
        """Coordinates of a cochain given as {(label, exp): Fraction}."""
        vec = {}
        for (label, e), q in cochain.items():
            if not q:
                continue
            if label not in self._slot_pos:
                raise InvariantViolation("cochain uses an unknown slot label")
            idx = self._pos1.get((self._slot_pos[label], e))
            if idx is None:
                raise InvariantViolation("cochain exponent misses the window")
            vec[idx] = vec.get(idx, Fraction(0)) + q
        return {i: v for i, v in vec.items() if v}

    def class_coords(self, cochain):
        """Degree-1 class coordinates keyed by surviving (label, exp) slots."""
        _, projector, _ = self._h1()
        coords = projector.apply(self.vector_of(cochain))
        surviving = self._surviving_indices()
        out = {}
        for j, v in coords.items():
            s, e = self.basis1[surviving[j]]
            out[(self.slots[s][0], e)] = v
        return out

    def _surviving_indices(self):
        pivots = set(linalg.image(self.diff).pivot_rows)
        return [i for i in range(len(self.basis1)) if i not in pivots]

    def solve_coboundary(self, cochain):
        """Chart halves (h0, h1) with h1 - h0 = cochain, or None.

        Halves are returned as {label: {exp: Fraction}} and are regular on
        their charts by construction.
        """
        x = linalg.solve(self.diff, self.vector_of(cochain))
        if x is None:
            return None
        halves = {U0: {}, U1: {}}
        for j, v in x.items():
            chart, s, e = self.basis0[j]
            label = self.slots[s][0]
            half = halves[chart].setdefault(label, {})
            half[e] = half.get(e, Fraction(0)) + v
        delta = {}
        for sign, chart in ((-1, U0), (1, U1)):
            for label, coeffs in halves[chart].items():
                for e, v in coeffs.items():
                    key = (label, e)
                    delta[key] = delta.get(key, Fraction(0)) + sign * v
        want = {k: v for k, v in cochain.items() if v}
        if {k: v for k, v in delta.items() if v} != want:
            raise InvariantViolation("coboundary solution failed verification")
        return halves[U0], halves[U1]


def window_stability_check(desc, window=AUTO, padding=2, cocycle=None):
    """True iff cohomology dimensions are unchanged when the window widens by
    ``padding`` on both sides."""
    if padding < 1:
        raise InputError("padding must be >= 1")
    (lo, hi), _ = resolve_window(desc, window)

    def table(win):
        if cocycle is None:
            return cohomology(build_split_complex(desc, window=win)).h
        from .gluing import twisted_complex

        return cohomology(twisted_complex(desc, cocycle, window=win, on_truncate="drop")).h

    return table((lo, hi)) == table((lo - padding, hi + padding))
