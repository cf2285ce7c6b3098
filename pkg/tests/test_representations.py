"""U_q(sl2) irreps: defining relations, Casimir, evaluation map, sigma/iota."""

from fractions import Fraction

import pytest

from conftest import seeded
from qreflect.linalg import Matrix
from qreflect.representations import (
    E_ATOM,
    F_ATOM,
    cartan_power,
    casimir,
    casimir_other_form,
    casimir_value,
    eval_generator,
    eval_word,
    h_atom,
    make_irrep,
    make_params,
    map_image,
    q_bracket,
    sigma_conjugator,
    weight_diagonal,
)
from qreflect.checks import finite_iota_matrix, iota_conjugator
from qreflect.scalars import Spectral


def test_fundamental_matches_convention(ctx):
    rep = make_irrep(ctx, 2)
    assert rep.weights == (1, -1)
    assert rep.e_mat.entry(0, 1) == ctx.one()
    assert rep.f_mat.entry(1, 0) == ctx.one()
    assert cartan_power(rep, 1).equals(
        Matrix.diagonal(ctx, [ctx.q(1), ctx.q(-1)]))


def test_trivial_representation(ctx):
    rep = make_irrep(ctx, 1)
    assert rep.e_mat.is_zero() and rep.f_mat.is_zero()
    assert rep.weights == (0,)
    assert casimir(rep).entry(0, 0) == casimir_value(ctx, 1)


def test_defining_relations_up_to_n8(ctx):
    lam = ctx.q(1) - ctx.q(-1)
    for n in range(1, 9):
        rep = make_irrep(ctx, n)
        for xi in (1, Fraction(1, 2), Fraction(-3, 2)):
            qxi = cartan_power(rep, xi)
            qxi_inv = cartan_power(rep, -xi)
            assert (qxi * rep.e_mat * qxi_inv).equals(
                rep.e_mat.scaled(ctx.q_half_power(int(4 * Fraction(xi)))))
            assert (qxi * rep.f_mat * qxi_inv).equals(
                rep.f_mat.scaled(ctx.q_half_power(int(-4 * Fraction(xi)))))
        comm = rep.e_mat * rep.f_mat - rep.f_mat * rep.e_mat
        target = weight_diagonal(rep, lambda h: (ctx.q(h) - ctx.q(-h)) / lam)
        assert comm.equals(target)
        # q^{xi H} q^{eta H} = q^{(xi+eta) H}, and xi = 0 gives the identity
        assert (cartan_power(rep, Fraction(1, 2)) * cartan_power(rep, 1)).equals(
            cartan_power(rep, Fraction(3, 2)))
        assert cartan_power(rep, 0).equals(Matrix.identity(ctx, n))


def test_ef_commutator_n3_diagonal(ctx):
    rep = make_irrep(ctx, 3)
    comm = rep.e_mat * rep.f_mat - rep.f_mat * rep.e_mat
    two = q_bracket(ctx, 2)
    assert comm.equals(Matrix.diagonal(ctx, [two, ctx.zero(), -two]))


def test_nilpotency_and_triangularity(ctx):
    for n in (2, 3, 5):
        rep = make_irrep(ctx, n)
        assert all(i < j for i, j in rep.e_mat.entries)
        assert all(i > j for i, j in rep.f_mat.entries)
        power = Matrix.identity(ctx, n)
        for _ in range(n):
            power = power * rep.e_mat
        assert power.is_zero()


def test_casimir_forms_and_centrality(ctx):
    for n in (1, 2, 4):
        rep = make_irrep(ctx, n)
        c1 = casimir(rep)
        assert c1.equals(casimir_other_form(rep))
        assert c1.equals(Matrix.identity(ctx, n).scaled(casimir_value(ctx, n)))
        assert (c1 * rep.e_mat).equals(rep.e_mat * c1)
        assert (c1 * rep.f_mat).equals(rep.f_mat * c1)
        half = cartan_power(rep, Fraction(1, 2))
        assert (c1 * half).equals(half * c1)


def test_cartan_rejects_non_half_integers(ctx):
    rep = make_irrep(ctx, 2)
    with pytest.raises(ValueError):
        cartan_power(rep, Fraction(1, 3))


def test_eval_generator_examples(ctx):
    params = make_params(ctx, 1, 1, s0=1, s1=2)
    rep2 = make_irrep(ctx, 2)
    x = Spectral.q_power(3)
    # e0 -> x^{s0} F
    assert eval_generator(rep2, params, "e0", x).equals(
        rep2.f_mat.scaled(ctx.x_power(x, 1)))
    assert eval_generator(rep2, params, "h0-power", x, xi=0).equals(
        Matrix.identity(ctx, 2))
    # h0 carries -H: q^{xi h0} -> q^{-xi H}
    assert eval_generator(rep2, params, "h1-power", x, xi=1).equals(
        cartan_power(rep2, 1))
    assert eval_generator(rep2, params, "h0-power", x, xi=1).equals(
        cartan_power(rep2, -1))
    rep3 = make_irrep(ctx, 3)
    xq = Spectral.q_power(1)
    assert eval_generator(rep3, params, "e1", xq).equals(
        rep3.e_mat.scaled(ctx.q(2)))
    assert eval_generator(rep3, params, "f1", xq).equals(
        rep3.f_mat.scaled(ctx.q(-2)))


def test_map_image_examples(ctx):
    rep = make_irrep(ctx, 2)
    assert map_image(rep, "sigma", (E_ATOM,)).equals(rep.f_mat)
    xi = Fraction(3, 2)
    assert map_image(rep, "iota", (h_atom(xi),)).equals(cartan_power(rep, xi))
    # iota(EF) = iota(F) iota(E) = E q^{H+1} q^{-H-1} F = EF
    assert map_image(rep, "iota", (E_ATOM, F_ATOM)).equals(
        rep.e_mat * rep.f_mat)


def test_sigma_iota_matrix_realizations(ctx):
    """Dual route: word-level images equal the W-conjugation (sigma) and the
    weighted-transpose conjugation (iota)."""
    rng = seeded(29)
    atoms = (E_ATOM, F_ATOM, h_atom(1), h_atom(Fraction(1, 2)), h_atom(-1))
    for n in (2, 3, 4):
        rep = make_irrep(ctx, n)
        w = sigma_conjugator(rep)
        for _ in range(6):
            word = tuple(rng.choice(atoms) for _ in range(rng.randint(1, 4)))
            m = eval_word(rep, word)
            assert map_image(rep, "sigma", word).equals(w * m * w)
            assert map_image(rep, "iota", word).equals(finite_iota_matrix(rep, m))


def test_iota_is_antimultiplicative(ctx):
    rep = make_irrep(ctx, 3)
    d = iota_conjugator(rep)
    # iota(E) = q^{-H-1} F and iota(F) = E q^{H+1} as matrices
    assert finite_iota_matrix(rep, rep.e_mat).equals(
        cartan_power(rep, -1).scaled(ctx.q(-1)) * rep.f_mat)
    assert finite_iota_matrix(rep, rep.f_mat).equals(
        rep.e_mat * cartan_power(rep, 1).scaled(ctx.q(1)))


def test_make_params_validation(ctx):
    with pytest.raises(ValueError):
        make_params(ctx, 0, 1)
    with pytest.raises(ValueError):
        make_params(ctx, 1, "0/5")
    p = make_params(ctx, "3/2", "-1/2", s0=2, s1=-1)
    assert p.s == 1
    assert p.raw["s0"] == 2


def test_params_are_backend_scalars(nctx):
    p = make_params(nctx, "3/2", "-5/7", k_plus="1/3")
    assert isinstance(p.eps_plus, complex)
    assert abs(p.eps_plus - 1.5) < 1e-15
