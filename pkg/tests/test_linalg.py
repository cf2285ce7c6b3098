"""Common-denominator matrix layer against a direct field-arithmetic oracle."""

from conftest import seeded
from qreflect.linalg import Matrix, lift, residual
from qreflect.scalars import RationalExpression, ScalarContext
from test_scalars import rand_expr


def rand_matrix(ctx, rng, n, density=0.7):
    entries = {}
    for i in range(n):
        for j in range(n):
            if rng.random() < density:
                entries[(i, j)] = rand_expr(rng)
    return Matrix.from_scalar_entries(ctx, n, entries), entries


def dense_mul(a, b, n, zero):
    out = [[zero for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = zero
            for k in range(n):
                acc = acc + a.get((i, k), zero) * b.get((k, j), zero)
            out[i][j] = acc
    return out


def test_matmul_add_against_field_oracle(ctx):
    rng = seeded(17)
    zero = RationalExpression.constant(0)
    for _ in range(5):
        n = rng.randint(2, 4)
        ma, ea = rand_matrix(ctx, rng, n)
        mb, eb = rand_matrix(ctx, rng, n)
        prod = ma * mb
        expected = dense_mul(ea, eb, n, zero)
        for i in range(n):
            for j in range(n):
                assert prod.entry(i, j) == expected[i][j]
        total = ma + mb
        for i in range(n):
            for j in range(n):
                assert total.entry(i, j) == ea.get((i, j), zero) + eb.get((i, j), zero)


def test_scaled_divided_inverse(ctx):
    rng = seeded(23)
    m, _ = rand_matrix(ctx, rng, 3)
    s = rand_expr(rng)
    while s.is_zero():
        s = rand_expr(rng)
    assert m.scaled(s).divided(s).equals(m)


def test_kron_row_major(ctx):
    a = Matrix.from_scalar_entries(ctx, 2, {(0, 1): ctx.rational(2)})
    b = Matrix.from_scalar_entries(ctx, 2, {(1, 0): ctx.rational(3)})
    k = a.kron(b)
    # entry ((i,k),(j,l)) = a[i,j] b[k,l] at row 2 i + k, col 2 j + l
    assert k.entry(1, 2) == ctx.rational(6)
    assert sum(1 for _ in k.entries) == 1


def test_lift_adjacent_matches_kron(ctx):
    rng = seeded(5)
    m, _ = rand_matrix(ctx, rng, 4)  # on C^2 (x) C^2
    i2 = Matrix.identity(ctx, 2)
    lifted = lift(m, (2, 2, 2), (0, 1))
    assert lifted.equals(m.kron(i2))
    lifted23 = lift(m, (2, 2, 2), (1, 2))
    assert lifted23.equals(i2.kron(m))


def test_lift_nonadjacent_oracle(ctx):
    # legs (0, 2) of dims (2, 3, 2): entry ((a,b,c),(a',b',c')) =
    # m[(a,c),(a',c')] delta_{b b'}
    rng = seeded(9)
    m, _ = rand_matrix(ctx, rng, 4)
    lifted = lift(m, (2, 3, 2), (0, 2))
    for a in range(2):
        for b in range(3):
            for c in range(2):
                for a2 in range(2):
                    for c2 in range(2):
                        row = a * 6 + b * 2 + c
                        col = a2 * 6 + b * 2 + c2
                        assert lifted.entry(row, col) == m.entry(a * 2 + c,
                                                                 a2 * 2 + c2)


def test_transpose_and_residual(ctx):
    rng = seeded(31)
    m, _ = rand_matrix(ctx, rng, 3)
    assert m.transpose().transpose().equals(m)
    ok, res, worst = residual(m, m)
    assert ok is True and res is None and worst is None
    shifted = m + Matrix.identity(ctx, 3)
    ok, res, worst = residual(m, shifted)
    assert ok is False and worst is not None


def test_numeric_residual_normalization():
    nctx = ScalarContext(backend="numeric", q_value=2.0 + 0j)
    big = Matrix.from_scalar_entries(nctx, 2, {(0, 0): 1e8 + 0j})
    tiny = Matrix.from_scalar_entries(nctx, 2, {(0, 0): 1e8 + 1e-4j})
    ok, res, _ = residual(big, tiny)
    assert ok is None
    assert res < 1e-11  # scale-free: 1e-4 / 1e8


def test_entry_is_reduced(ctx):
    s = rand_expr(seeded(2))
    m = Matrix.diagonal(ctx, [s, s * s])
    e = m.entry(1, 1)
    assert e == s * s
    assert e.den.min_exp() == 0
