"""Finite-dimensional irreducible U_q(sl2) representations and the evaluation map.

Weight basis v_0 .. v_{n-1} with v_0 the highest weight, so that E is strictly
upper triangular and F strictly lower triangular:

    H v_k = (n-1-2k) v_k,   E v_k = [k]_q v_{k-1},   F v_k = [n-1-k]_q v_{k+1},

with [m]_q = (q^m - q^-m)/(q - q^-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix
from .scalars import ScalarContext, Spectral


@dataclass(frozen=True)
class ParamSet:
    """Boundary and gradation parameters of the K-matrices and K-operators.

    eps_plus/eps_minus/k_plus/k_minus/p_tilde are backend scalars; s0, s1 are
    the gradation integers (s = s0 + s1 is always derived, never stored).
    """

    eps_plus: object
    eps_minus: object
    k_plus: object
    k_minus: object
    s0: int
    s1: int
    p_tilde: object
    raw: dict

    @property
    def s(self) -> int:
        return self.s0 + self.s1

    def describe(self) -> dict:
        return dict(self.raw)


def make_params(ctx: ScalarContext, eps_plus, eps_minus, k_plus=0, k_minus=0,
                s0=1, s1=1, p_tilde=0) -> ParamSet:
    """Validate and embed the boundary parameters into the active backend."""
    raw = {
        "eps_plus": str(eps_plus), "eps_minus": str(eps_minus),
        "k_plus": str(k_plus), "k_minus": str(k_minus),
        "s0": int(s0), "s1": int(s1), "p_tilde": str(p_tilde),
    }
    ep = ctx.scalar(eps_plus)
    em = ctx.scalar(eps_minus)
    if ctx.is_scalar_zero(ep) or ctx.is_scalar_zero(em):
        raise ValueError("eps_plus and eps_minus must be nonzero (eps_plus*eps_minus != 0)")
    return ParamSet(
        eps_plus=ep,
        eps_minus=em,
        k_plus=ctx.scalar(k_plus),
        k_minus=ctx.scalar(k_minus),
        s0=int(s0),
        s1=int(s1),
        p_tilde=ctx.scalar(p_tilde),
        raw=raw,
    )


@dataclass(frozen=True)
class Irrep:
    """An n-dimensional irreducible representation in the weight basis."""

    dim: int
    weights: tuple
    e_mat: Matrix
    f_mat: Matrix
    ctx: ScalarContext


def q_bracket(ctx: ScalarContext, m: int):
    """[m]_q = (q^m - q^-m)/(q - q^-1) = q^(m-1) + q^(m-3) + ... + q^(1-m)."""
    acc = ctx.zero()
    for j in range(m):
        acc = acc + ctx.q(m - 1 - 2 * j)
    return acc


def make_irrep(ctx: ScalarContext, n: int) -> Irrep:
    if n < 1:
        raise ValueError("representation dimension must be >= 1")
    weights = tuple(n - 1 - 2 * k for k in range(n))
    e_entries = {}
    f_entries = {}
    for k in range(1, n):
        e_entries[(k - 1, k)] = q_bracket(ctx, k)
    for k in range(n - 1):
        f_entries[(k + 1, k)] = q_bracket(ctx, n - 1 - k)
    e_mat = Matrix.from_scalar_entries(ctx, n, e_entries)
    f_mat = Matrix.from_scalar_entries(ctx, n, f_entries)
    return Irrep(dim=n, weights=weights, e_mat=e_mat, f_mat=f_mat, ctx=ctx)


def cartan_power(rep: Irrep, xi) -> Matrix:
    """q^(xi*H) as a diagonal matrix; requires 2*xi integral on the exact backend."""
    ctx = rep.ctx
    xi = Fraction(xi) if not isinstance(xi, Fraction) else xi
    two_xi = xi * 2
    if two_xi.denominator != 1:
        if ctx.is_exact:
            raise ValueError(f"exact backend needs 2*xi integral, got xi={xi}")
        q = ctx.q_value
        return Matrix.diagonal(ctx, [q ** (float(xi) * h) for h in rep.weights])
    two_xi = int(two_xi)
    return Matrix.diagonal(ctx, [ctx.q_half_power(two_xi * h) for h in rep.weights])


def weight_diagonal(rep: Irrep, fn) -> Matrix:
    """Diagonal matrix with entry fn(h) on the weight-h eigenvector."""
    return Matrix.diagonal(rep.ctx, [fn(h) for h in rep.weights])


def spectral_cartan(rep: Irrep, x: Spectral, coeff: int) -> Matrix:
    """x^(coeff*H) as a diagonal matrix (integer powers of x on each weight)."""
    ctx = rep.ctx
    return Matrix.diagonal(ctx, [ctx.x_power(x, coeff * h) for h in rep.weights])


def casimir(rep: Irrep) -> Matrix:
    """FE + (q^(H+1) + q^(-H-1))/(q - q^-1)^2, central in U_q(sl2)."""
    ctx = rep.ctx
    lam = ctx.q(1) - ctx.q(-1)
    lam2 = lam * lam
    corr = weight_diagonal(rep, lambda h: (ctx.q(h + 1) + ctx.q(-h - 1)) / lam2)
    return rep.f_mat * rep.e_mat + corr


def casimir_other_form(rep: Irrep) -> Matrix:
    """EF + (q^(H-1) + q^(-H+1))/(q - q^-1)^2; equal to `casimir`."""
    ctx = rep.ctx
    lam = ctx.q(1) - ctx.q(-1)
    lam2 = lam * lam
    corr = weight_diagonal(rep, lambda h: (ctx.q(h - 1) + ctx.q(-h + 1)) / lam2)
    return rep.e_mat * rep.f_mat + corr


def casimir_value(ctx: ScalarContext, n: int):
    """The scalar (q^n + q^-n)/(q - q^-1)^2 by which the Casimir acts on dim n."""
    lam = ctx.q(1) - ctx.q(-1)
    return (ctx.q(n) + ctx.q(-n)) / (lam * lam)


# ---------------------------------------------------------------------------
# Generator words: the finite U_q(sl2) vocabulary and the affine one
# ---------------------------------------------------------------------------
#
# Finite atoms:  ("E",)  ("F",)  ("H", xi)      -- xi with 2*xi integral
# Affine atoms:  ("e", i)  ("f", i)  ("h", i, xi)   for i in {0, 1}
#
# A word is a tuple of atoms (product left to right); an expression is a
# tuple of (coefficient, word) terms.  sigma acts multiplicatively, iota
# anti-multiplicatively; both fix scalar coefficients (the parameter maps on
# eps/k/s are applied by the caller).

E_ATOM = ("E",)
F_ATOM = ("F",)


def h_atom(xi) -> tuple:
    return ("H", Fraction(xi))


def eval_word(rep: Irrep, word, coeff=None) -> Matrix:
    """Evaluate a finite generator word to a matrix, optionally scaled."""
    out = Matrix.identity(rep.ctx, rep.dim)
    for atom in word:
        if atom[0] == "E":
            out = out * rep.e_mat
        elif atom[0] == "F":
            out = out * rep.f_mat
        elif atom[0] == "H":
            out = out * cartan_power(rep, atom[1])
        else:
            raise ValueError(f"unknown atom {atom!r}")
    if coeff is not None:
        out = out.scaled(coeff)
    return out


def eval_expr(rep: Irrep, expr) -> Matrix:
    out = Matrix.zero(rep.ctx, rep.dim)
    for coeff, word in expr:
        out = out + eval_word(rep, word, coeff)
    return out


def sigma_word(ctx: ScalarContext, word):
    """sigma: E <-> F, q^(xi H) -> q^(-xi H), extended multiplicatively."""
    out = []
    for atom in word:
        if atom[0] == "E":
            out.append(F_ATOM)
        elif atom[0] == "F":
            out.append(E_ATOM)
        else:
            out.append(("H", -atom[1]))
    return ctx.one(), tuple(out)


def iota_word(ctx: ScalarContext, word):
    """iota: E -> q^(-H-1) F, F -> E q^(H+1), q^(xi H) fixed, order reversed."""
    coeff = ctx.one()
    out = []
    for atom in reversed(word):
        if atom[0] == "E":
            coeff = coeff * ctx.q(-1)
            out.extend([h_atom(-1), F_ATOM])
        elif atom[0] == "F":
            coeff = coeff * ctx.q(1)
            out.extend([E_ATOM, h_atom(1)])
        else:
            out.append(atom)
    return coeff, tuple(out)


def map_image(rep: Irrep, which: str, word, coeff=None) -> Matrix:
    """Matrix image of sigma(word) or iota(word) in the given representation."""
    ctx = rep.ctx
    if which == "sigma":
        c, w = sigma_word(ctx, word)
    elif which == "iota":
        c, w = iota_word(ctx, word)
    else:
        raise ValueError("map must be 'sigma' or 'iota'")
    m = eval_word(rep, w, c)
    if coeff is not None:
        m = m.scaled(coeff)
    return m


def sigma_conjugator(rep: Irrep) -> Matrix:
    """The antidiagonal matrix W with sigma(a) = W a W^-1 on this irrep."""
    n = rep.dim
    one = rep.ctx.one()
    return Matrix.from_scalar_entries(
        rep.ctx, n, {(i, n - 1 - i): one for i in range(n)})


# -- affine layer ------------------------------------------------------------

def e_atom(i: int) -> tuple:
    return ("e", i)


def f_atom(i: int) -> tuple:
    return ("f", i)


def hq_atom(i: int, xi) -> tuple:
    return ("h", i, Fraction(xi))


def eval_affine_word(rep: Irrep, params: ParamSet, x: Spectral, word) -> Matrix:
    """Evaluation map: e0 -> x^s0 F, f0 -> x^-s0 E, q^(xi h0) -> q^(-xi H),
    e1 -> x^s1 E, f1 -> x^-s1 F, q^(xi h1) -> q^(xi H)."""
    ctx = rep.ctx
    out = Matrix.identity(ctx, rep.dim)
    for atom in word:
        kind = atom[0]
        if kind == "e":
            if atom[1] == 0:
                out = (out * rep.f_mat).scaled(ctx.x_power(x, params.s0))
            else:
                out = (out * rep.e_mat).scaled(ctx.x_power(x, params.s1))
        elif kind == "f":
            if atom[1] == 0:
                out = (out * rep.e_mat).scaled(ctx.x_power(x, -params.s0))
            else:
                out = (out * rep.f_mat).scaled(ctx.x_power(x, -params.s1))
        elif kind == "h":
            xi = atom[2] if atom[1] == 1 else -atom[2]
            out = out * cartan_power(rep, xi)
        else:
            raise ValueError(f"unknown affine atom {atom!r}")
    return out


def eval_affine_expr(rep: Irrep, params: ParamSet, x: Spectral, expr) -> Matrix:
    out = Matrix.zero(rep.ctx, rep.dim)
    for coeff, word in expr:
        out = out + eval_affine_word(rep, params, x, word).scaled(coeff)
    return out


def eval_generator(rep: Irrep, params: ParamSet, gen: str, x: Spectral,
                   xi=1) -> Matrix:
    """Evaluation-map image of a single affine generator.

    gen is one of e0, f0, e1, f1, h0-power, h1-power; xi applies to the
    Cartan powers q^(xi h_i).
    """
    table = {
        "e0": (e_atom(0),), "f0": (f_atom(0),),
        "e1": (e_atom(1),), "f1": (f_atom(1),),
        "h0-power": (hq_atom(0, xi),), "h1-power": (hq_atom(1, xi),),
    }
    if gen not in table:
        raise ValueError(f"unknown generator {gen!r}")
    return eval_affine_word(rep, params, x, table[gen])


def affine_sigma(word):
    """Index swap 0 <-> 1 on affine atoms."""
    out = []
    for atom in word:
        if atom[0] == "h":
            out.append(("h", 1 - atom[1], atom[2]))
        else:
            out.append((atom[0], 1 - atom[1]))
    return tuple(out)


def affine_iota(ctx: ScalarContext, word):
    """iota(e_i) = q^(-1-h_i) f_i, iota(f_i) = e_i q^(1+h_i), order reversed."""
    coeff = ctx.one()
    out = []
    for atom in reversed(word):
        if atom[0] == "e":
            coeff = coeff * ctx.q(-1)
            out.extend([hq_atom(atom[1], -1), f_atom(atom[1])])
        elif atom[0] == "f":
            coeff = coeff * ctx.q(1)
            out.extend([e_atom(atom[1]), hq_atom(atom[1], 1)])
        else:
            out.append(atom)
    return coeff, tuple(out)


def expr_sigma(ctx: ScalarContext, expr):
    return tuple((c, affine_sigma(w)) for c, w in expr)


def expr_iota(ctx: ScalarContext, expr):
    out = []
    for c, w in expr:
        ic, iw = affine_iota(ctx, w)
        out.append((c * ic, iw))
    return tuple(out)


def expr_mul(expr_a, expr_b):
    return tuple((ca * cb, wa + wb) for ca, wa in expr_a for cb, wb in expr_b)


def expr_add(*exprs):
    out = []
    for e in exprs:
        out.extend(e)
    return tuple(out)


def expr_scale(expr, s):
    return tuple((c * s, w) for c, w in expr)


def expr_qcomm(expr_a, expr_b, p):
    """[A, B]_p = AB - p BA at expression level."""
    return expr_add(expr_mul(expr_a, expr_b), expr_scale(expr_mul(expr_b, expr_a), -p))


# -- coproduct ----------------------------------------------------------------

def delta_atom(ctx: ScalarContext, atom):
    """Coproduct of one affine atom as ((coeff, left-word, right-word), ...)."""
    one = ctx.one()
    if atom[0] == "e":
        i = atom[1]
        return ((one, (atom,), ()), (one, (hq_atom(i, -1),), (atom,)))
    if atom[0] == "f":
        i = atom[1]
        return ((one, (atom,), (hq_atom(i, 1),)), (one, (), (atom,)))
    if atom[0] == "h":
        return ((one, (atom,), (atom,)),)
    raise ValueError(f"unknown affine atom {atom!r}")


def delta_expr(ctx: ScalarContext, expr):
    """Coproduct of an affine expression as ((coeff, left, right), ...) terms."""
    out = []
    for coeff, word in expr:
        terms = [(coeff, (), ())]
        for atom in word:
            datom = delta_atom(ctx, atom)
            terms = [(c * dc, lw + dl, rw + dr)
                     for c, lw, rw in terms
                     for dc, dl, dr in datom]
        out.extend(terms)
    return tuple(out)


def tensor_qcomm(ta, tb, p):
    prod_ab = tuple((ca * cb, la + lb, ra + rb)
                    for ca, la, ra in ta for cb, lb, rb in tb)
    prod_ba = tuple((cb * ca * (-p), lb + la, rb + ra)
                    for ca, la, ra in ta for cb, lb, rb in tb)
    return prod_ab + prod_ba


def eval_tensor_expr(rep1: Irrep, rep2: Irrep, params: ParamSet,
                     x: Spectral, y: Spectral, terms) -> Matrix:
    """(ev_x (x) ev_y) of coproduct terms on rep1 (x) rep2."""
    ctx = rep1.ctx
    out = Matrix.zero(ctx, rep1.dim * rep2.dim)
    for coeff, left, right in terms:
        lm = eval_affine_word(rep1, params, x, left)
        rm = eval_affine_word(rep2, params, y, right)
        out = out + lm.kron(rm).scaled(coeff)
    return out


# -- realizations --------------------------------------------------------------

def triangular_onsager_generators(ctx: ScalarContext, k, eps_plus, eps_minus,
                                  p_tilde) -> dict:
    """The T0, T1, P1t generators realized in the affine algebra.

    T0  = k q e1 q^{h1} + eps_plus q^{h1}
    T1  = k f0 + eps_minus q^{h0}
    P1t = -(q^2 - q^-2)(eps_minus q f1 q^{h0} + eps_plus e0)
          + k q^-1 ([f1, f0]_{q^2} + [e1, e0]_{q^2}) + p_tilde
    """
    q1 = ctx.q(1)
    t0 = ((k * q1, (e_atom(1), hq_atom(1, 1))), (eps_plus, (hq_atom(1, 1),)))
    t1 = ((k, (f_atom(0),)), (eps_minus, (hq_atom(0, 1),)))
    q2 = ctx.q(2)
    pre = -(q2 - ctx.q(-2))
    ff = expr_qcomm(((ctx.one(), (f_atom(1),)),), ((ctx.one(), (f_atom(0),)),), q2)
    ee = expr_qcomm(((ctx.one(), (e_atom(1),)),), ((ctx.one(), (e_atom(0),)),), q2)
    p1 = expr_add(
        ((pre * eps_minus * q1, (f_atom(1), hq_atom(0, 1))),),
        ((pre * eps_plus, (e_atom(0),)),),
        expr_scale(expr_add(ff, ee), k * ctx.q(-1)),
        ((p_tilde, ()),),
    )
    return {"T0": tuple(t0), "T1": tuple(t1), "P1t": tuple(p1)}


def onsager_generators(ctx: ScalarContext, params: ParamSet) -> dict:
    """The W0, W1 generators of the q-Onsager realization.

    W0 = k_plus q e1 q^{h1} + k_minus f1 + eps_plus q^{h1}
    W1 = k_minus q e0 q^{h0} + k_plus f0 + eps_minus q^{h0}
    """
    q1 = ctx.q(1)
    w0 = ((params.k_plus * q1, (e_atom(1), hq_atom(1, 1))),
          (params.k_minus, (f_atom(1),)),
          (params.eps_plus, (hq_atom(1, 1),)))
    w1 = ((params.k_minus * q1, (e_atom(0), hq_atom(0, 1))),
          (params.k_plus, (f_atom(0),)),
          (params.eps_minus, (hq_atom(0, 1),)))
    return {"W0": w0, "W1": w1}
