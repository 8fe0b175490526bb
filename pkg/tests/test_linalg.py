import random
from fractions import Fraction

import pytest

from supercech.errors import NotContained
from supercech.linalg import (
    Matrix,
    Subspace,
    image,
    kernel,
    solve,
    span,
    subquotient,
    sum_subspaces,
)


# ---------------------------------------------------------------------------
# Independent oracle: dense fraction-free Gaussian elimination.  Kept separate
# from the library's sparse echelon engine on purpose.
# ---------------------------------------------------------------------------

def oracle_rank(dense):
    m = [row[:] for row in dense]
    if not m:
        return 0
    nr, nc = len(m), len(m[0])
    rank = 0
    for col in range(nc):
        piv = None
        for r in range(rank, nr):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(nr):
            if r != rank and m[r][col] != 0:
                f = Fraction(m[r][col], 1) / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def random_dense(rng, rows, cols, density=0.6):
    return [
        [
            Fraction(rng.randint(-4, 4), rng.randint(1, 3)) if rng.random() < density else Fraction(0)
            for _ in range(cols)
        ]
        for _ in range(rows)
    ]


def to_matrix(dense):
    return Matrix.from_rows(dense)


def test_kernel_identity_is_zero():
    assert kernel(Matrix.identity(3)).dim == 0


def test_kernel_zero_map_is_full():
    k = kernel(Matrix.zero(2, 3))
    assert k.dim == 3
    assert k == Subspace.full(3)


def test_kernel_dim_matches_oracle_on_random_matrices():
    rng = random.Random(7)
    for _ in range(25):
        dense = random_dense(rng, 5, 7)
        m = to_matrix(dense)
        assert kernel(m).dim == 7 - oracle_rank(dense)


def test_image_identity_and_zero():
    assert image(Matrix.identity(4)) == Subspace.full(4)
    assert image(Matrix.zero(3, 2)).dim == 0


def test_image_rank_matches_oracle():
    rng = random.Random(11)
    for _ in range(25):
        dense = random_dense(rng, 6, 5)
        m = to_matrix(dense)
        assert image(m).dim == oracle_rank(dense)


def test_rank_nullity():
    rng = random.Random(3)
    for _ in range(30):
        rows = rng.randint(1, 6)
        cols = rng.randint(1, 6)
        m = to_matrix(random_dense(rng, rows, cols))
        assert kernel(m).dim + image(m).dim == cols


def test_kernel_vectors_are_killed():
    rng = random.Random(5)
    for _ in range(10):
        m = to_matrix(random_dense(rng, 4, 6))
        for col in kernel(m).basis_columns():
            assert m.apply(col) == {}


def test_echelon_basis_is_insertion_order_independent():
    cols_a = [{0: Fraction(1), 1: Fraction(2)}, {1: Fraction(1), 2: Fraction(3)}]
    s1 = Subspace(3, cols_a)
    s2 = Subspace(3, list(reversed(cols_a)))
    assert s1 == s2
    mixed = Subspace(3, [{0: Fraction(2), 1: Fraction(4)}, {0: Fraction(1), 1: Fraction(3), 2: Fraction(3)}])
    assert mixed == s1


def test_subquotient_full_by_zero():
    dim, projector, section = subquotient(Subspace.full(3), Subspace.zero(3))
    assert dim == 3
    assert projector * section == Matrix.identity(3)


def test_subquotient_z_equals_b():
    z = span(4, [{0: Fraction(1), 2: Fraction(1)}, {1: Fraction(1)}])
    dim, projector, section = subquotient(z, z)
    assert dim == 0
    assert projector * z.basis_matrix() == Matrix.zero(0, 2)
    assert section.cols == 0


def test_subquotient_not_contained():
    z = span(3, [{0: Fraction(1)}])
    b = span(3, [{1: Fraction(1)}])
    with pytest.raises(NotContained):
        subquotient(z, b)


def oracle_quotient_dim(z_cols, b_cols, n):
    """Echelon-basis-extension oracle: dim(Z)-dim(B) via two dense ranks."""
    def dense(cols):
        return [[col.get(r, Fraction(0)) for col in cols] for r in range(n)]

    return oracle_rank(dense(z_cols)) - oracle_rank(dense(b_cols))


def test_subquotient_random_nested_pairs():
    rng = random.Random(13)
    for _ in range(20):
        n = rng.randint(2, 7)
        z = Subspace(n, [
            {r: Fraction(rng.randint(-3, 3)) for r in range(n) if rng.random() < 0.7}
            for _ in range(rng.randint(1, n))
        ])
        # B = span of random combinations of Z's basis, so B is inside Z.
        zc = z.basis_columns()
        b_cols = []
        for _ in range(rng.randint(0, len(zc))):
            acc = {}
            for col in zc:
                w = Fraction(rng.randint(-2, 2))
                for r, v in col.items():
                    acc[r] = acc.get(r, Fraction(0)) + w * v
            acc = {r: v for r, v in acc.items() if v}
            if acc:
                b_cols.append(acc)
        b = Subspace(n, b_cols)
        dim, projector, section = subquotient(z, b)
        assert dim == oracle_quotient_dim(zc, b.basis_columns(), n)
        assert dim == z.dim - b.dim
        assert projector * section == Matrix.identity(dim)
        for col in b.basis_columns():
            assert projector.apply(col) == {}


def test_subquotient_dim_stable_under_z_automorphism_fixing_b():
    # Functoriality spot check: re-presenting Z with a shuffled spanning set
    # that fixes B leaves the quotient dimension unchanged.
    z = span(4, [{0: Fraction(1)}, {1: Fraction(1)}, {2: Fraction(1)}])
    b = span(4, [{0: Fraction(1), 1: Fraction(1)}])
    dim1, _, _ = subquotient(z, b)
    z2 = span(4, [{0: Fraction(2), 1: Fraction(1)}, {1: Fraction(5)}, {2: Fraction(1), 0: Fraction(3)}])
    assert z == z2
    dim2, _, _ = subquotient(z2, b)
    assert dim1 == dim2 == 2


def test_solve_consistent_and_inconsistent():
    m = Matrix.from_rows([[1, 2], [2, 4]])
    x = solve(m, {0: Fraction(3), 1: Fraction(6)})
    assert x is not None
    assert m.apply(x) == {0: Fraction(3), 1: Fraction(6)}
    assert solve(m, {0: Fraction(1), 1: Fraction(0)}) is None


def test_solve_random_against_application():
    rng = random.Random(23)
    for _ in range(20):
        m = to_matrix(random_dense(rng, 5, 4))
        x0 = {c: Fraction(rng.randint(-3, 3)) for c in range(4)}
        rhs = m.apply(x0)
        x = solve(m, rhs)
        assert x is not None
        assert m.apply(x) == rhs


def test_sum_subspaces():
    a = span(3, [{0: Fraction(1)}])
    b = span(3, [{1: Fraction(1)}])
    assert sum_subspaces(a, b).dim == 2
    assert sum_subspaces(a, a) == a


def test_matrix_product_and_transpose():
    a = Matrix.from_rows([[1, 2], [0, 1]])
    b = Matrix.from_rows([[1, 0], [3, 1]])
    assert (a * b) == Matrix.from_rows([[7, 2], [3, 1]])
    assert a.transpose() == Matrix.from_rows([[1, 0], [2, 1]])
