"""Boundary K-operators on U_q(sl2) modules.

Five families are built here, each pinned to one literal normalization (no
overall-factor freedom is used):

* diagonal       x^{s0 H} K0(x)
* upper          x^{s0 H} exp^-1(a+ E q^H) K0(x) exp(a+ E q^H),   needs k- = 0
* lower          x^{s0 H} exp(a- F) K0(x) exp^-1(a- F),           needs k+ = 0
* upper_alt      x^{-s1 H} exp^-1(b- F q^-H) K0+(x) exp(b- F q^-H), needs k+ = 0
* lower_alt      x^{-s1 H} exp(b+ E) K0+(x) exp^-1(b+ E),         needs k- = 0

plus the q-Onsager candidate for k+ k- != 0 (spectral function of the
evaluated W1 generator), which is diagonalizable in the exact field only in
its triangular degenerations.

Every family also has an unfactored form: the spectral function

    z -> (-q^-1 x^s  z / eps; q^-2)_inf / (-q^-1 x^-s z / eps; q^-2)_inf

applied to the eigenvalues of a (triangular) one-generator argument.  With
x = q^m the ratio telescopes, so the exact backend needs no infinite series.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Matrix
from .representations import (
    Irrep,
    ParamSet,
    cartan_power,
    spectral_cartan,
    weight_diagonal,
)
from .scalars import (
    PoleError,
    ScalarContext,
    Spectral,
    poch_infinite_truncated,
    poch_ratio_numeric,
    poch_ratio_telescoped,
    q_factorial_base,
)

VARIANTS = ("diagonal", "upper", "lower", "upper_alt", "lower_alt",
            "onsager_candidate")


class NonNilpotentError(ValueError):
    """q_exp_nilpotent got a non-nilpotent matrix on the exact backend."""


class RepeatedEigenvalueError(ValueError):
    """The spectral-function argument has colliding eigenvalues."""


@dataclass(frozen=True)
class KOperatorSpec:
    variant: str
    params: ParamSet
    x: Spectral

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown K-operator variant {self.variant!r}")

    def validate(self, ctx: ScalarContext):
        p = self.params
        kp0 = ctx.is_scalar_zero(p.k_plus)
        km0 = ctx.is_scalar_zero(p.k_minus)
        need = {
            "diagonal": kp0 and km0,
            "upper": km0,
            "lower": kp0,
            "upper_alt": kp0,
            "lower_alt": km0,
            "onsager_candidate": True,
        }[self.variant]
        if not need:
            raise ValueError(
                f"variant {self.variant!r} violates its k-constraint "
                f"(k_plus={p.raw['k_plus']}, k_minus={p.raw['k_minus']})")


@dataclass(frozen=True)
class KOperator:
    matrix: Matrix
    spec: KOperatorSpec
    form: str


def q_exp_nilpotent(ctx: ScalarContext, mat: Matrix, inverse: bool = False) -> Matrix:
    """q-exponential exp_{q^-2}(M) of a nilpotent matrix (finite sum).

    inverse=True returns exp_{q^-2}^-1(M) = exp_{q^2}(-M); the two are exact
    two-sided inverses.  On the numeric backend a non-nilpotent argument is
    summed until the term norm drops below the truncation tolerance.
    """
    base = 2 if inverse else -2
    sign = -1 if inverse else 1
    acc = Matrix.identity(ctx, mat.size)
    power = Matrix.identity(ctx, mat.size)
    k = 0
    while True:
        k += 1
        power = power * mat
        if power.is_zero():
            break
        if ctx.is_exact and k > mat.size:
            raise NonNilpotentError(
                f"matrix is not nilpotent: M^{k} != 0 past the size bound")
        term = power.divided(q_factorial_base(ctx, k, base))
        if sign < 0 and k % 2:
            term = -term
        acc = acc + term
        if not ctx.is_exact:
            if term.max_abs() < ctx.truncation_tol * max(acc.max_abs(), 1.0):
                break
            if k > ctx.max_terms:
                raise NonNilpotentError("numeric q-exponential did not converge")
    return acc


def build_K0_diagonal(rep: Irrep, params: ParamSet, x: Spectral,
                      sign: str = "minusH") -> Matrix:
    """Generic diagonal Pochhammer-ratio operator.

    On the weight-h eigenvector the entry is

        (A_h x^s; q^-2)_inf / (A_h x^-s; q^-2)_inf

    with A_h = -(eps-/eps+) q^(-h-1) for sign="minusH" (the K0 of the upper
    and lower families) or A_h = -(eps+/eps-) q^(h-1) for sign="plusH" (the
    K0 used by the alternate families, whose ratio carries q^(H-1)).
    """
    ctx = rep.ctx
    p = params
    if sign == "minusH":
        ratio = p.eps_minus / p.eps_plus
        h_sign, shift = -1, -1
    elif sign == "plusH":
        ratio = p.eps_plus / p.eps_minus
        h_sign, shift = 1, -1
    else:
        raise ValueError("sign must be 'minusH' or 'plusH'")

    if ctx.is_exact:
        if x.exp is None:
            raise ValueError("exact backend needs x = q^m")
        t = x.exp * p.s

        def entry(h):
            a = -(ratio * ctx.q(h_sign * h + shift))
            return poch_ratio_telescoped(ctx, a, t)
    else:
        xs = ctx.x_power(x, p.s)

        def entry(h):
            a = -(ratio * ctx.q(h_sign * h + shift))
            return poch_ratio_numeric(ctx, a, xs, 1 / xs)

    return weight_diagonal(rep, entry)


def kappa(ctx: ScalarContext, params: ParamSet, x: Spectral):
    """Overall factor of the fundamental-representation K-matrix reduction:

        kappa(x) = (-(e-/e+) x^s q^-2; q^-2)_inf / (e+ (-(e-/e+) x^-s; q^-2)_inf)

    Exactly the telescoped ratio of B = -(e-/e+) q^-1 at offset m*s - 1,
    divided by eps+.
    """
    p = params
    ratio = p.eps_minus / p.eps_plus
    if ctx.is_exact:
        if x.exp is None:
            raise ValueError("exact backend needs x = q^m")
        b = -(ratio * ctx.q(-1))
        return poch_ratio_telescoped(ctx, b, x.exp * p.s - 1) / p.eps_plus
    xs = ctx.x_power(x, p.s)
    step = ctx.q(-2)
    num = poch_infinite_truncated(ctx, -(ratio * xs * step), step)
    den = poch_infinite_truncated(ctx, -(ratio / xs), step)
    if abs(den) < 1e-300:
        raise PoleError("kappa denominator product vanished")
    return num / (p.eps_plus * den)


def _exp_argument(rep: Irrep, spec: KOperatorSpec):
    """Coefficient and nilpotent word of the conjugating q-exponential."""
    ctx = rep.ctx
    p = spec.params
    x = spec.x
    lam = ctx.q(1) - ctx.q(-1)
    v = spec.variant
    if v == "upper":
        coeff = -(ctx.q(1) * p.k_plus * ctx.x_power(x, -p.s0)) / (lam * p.eps_minus)
        return coeff, rep.e_mat * cartan_power(rep, 1)
    if v == "lower":
        coeff = -(p.k_minus * ctx.x_power(x, p.s0)) / (lam * p.eps_minus)
        return coeff, rep.f_mat
    if v == "upper_alt":
        coeff = -(ctx.q(1) * p.k_minus * ctx.x_power(x, -p.s1)) / (lam * p.eps_plus)
        return coeff, rep.f_mat * cartan_power(rep, -1)
    if v == "lower_alt":
        coeff = -(p.k_plus * ctx.x_power(x, p.s1)) / (lam * p.eps_plus)
        return coeff, rep.e_mat
    raise ValueError(f"variant {v!r} has no factored form")


def build_K(spec: KOperatorSpec, rep: Irrep) -> KOperator:
    """Factored K-operator: Cartan prefactor, conjugating q-exponentials,
    diagonal Pochhammer core."""
    ctx = rep.ctx
    spec.validate(ctx)
    p = spec.params
    x = spec.x
    v = spec.variant
    if v == "onsager_candidate":
        raise ValueError("the q-Onsager candidate has no factored form; "
                         "use build_K_onsager_candidate")
    if v == "diagonal":
        mat = spectral_cartan(rep, x, p.s0) * build_K0_diagonal(rep, p, x, "minusH")
        return KOperator(mat, spec, "factored")

    coeff, word_mat = _exp_argument(rep, spec)
    arg = word_mat.scaled(coeff)
    exp_plus = q_exp_nilpotent(ctx, arg, inverse=False)
    exp_minus = q_exp_nilpotent(ctx, arg, inverse=True)
    if v in ("upper", "lower"):
        core = build_K0_diagonal(rep, p, x, "minusH")
        prefix = spectral_cartan(rep, x, p.s0)
    else:
        core = build_K0_diagonal(rep, p, x, "plusH")
        prefix = spectral_cartan(rep, x, -p.s1)
    if v in ("upper", "upper_alt"):
        mat = prefix * exp_minus * core * exp_plus
    else:
        mat = prefix * exp_plus * core * exp_minus
    return KOperator(mat, spec, "factored")


# -- unfactored (spectral-function) form --------------------------------------

def _spectral_argument(rep: Irrep, spec: KOperatorSpec) -> Matrix:
    """The one-generator argument whose spectral function gives the K-operator."""
    ctx = rep.ctx
    p = spec.params
    x = spec.x
    v = spec.variant
    q1 = ctx.q(1)
    em_qmh = weight_diagonal(rep, lambda h: p.eps_minus * ctx.q(-h))
    ep_qh = weight_diagonal(rep, lambda h: p.eps_plus * ctx.q(h))
    if v in ("upper", "diagonal"):
        m = em_qmh
        if v == "upper":
            m = m + rep.e_mat.scaled(p.k_plus * ctx.x_power(x, -p.s0))
        return m
    if v == "lower":
        fqmh = rep.f_mat * cartan_power(rep, -1)
        return em_qmh + fqmh.scaled(p.k_minus * q1 * ctx.x_power(x, p.s0))
    if v == "upper_alt":
        return ep_qh + rep.f_mat.scaled(p.k_minus * ctx.x_power(x, -p.s1))
    if v == "lower_alt":
        eqh = rep.e_mat * cartan_power(rep, 1)
        return ep_qh + eqh.scaled(p.k_plus * q1 * ctx.x_power(x, p.s1))
    # onsager candidate: ev_x(W1) = k+ x^-s0 E + k- q x^s0 F q^-H + e- q^-H
    fqmh = rep.f_mat * cartan_power(rep, -1)
    return (em_qmh
            + rep.e_mat.scaled(p.k_plus * ctx.x_power(x, -p.s0))
            + fqmh.scaled(p.k_minus * q1 * ctx.x_power(x, p.s0)))


def _variant_eps_prefix(spec: KOperatorSpec):
    """(eps in the spectral function's denominator, Cartan prefactor exponent)."""
    p = spec.params
    if spec.variant in ("upper", "lower", "diagonal", "onsager_candidate"):
        return p.eps_plus, p.s0
    return p.eps_minus, -p.s1


def _triangular_shape(mat: Matrix):
    upper = all(i <= j for i, j in mat.entries)
    lower = all(i >= j for i, j in mat.entries)
    if upper:
        return "upper"
    if lower:
        return "lower"
    return None


def _triangular_eig(mat: Matrix):
    """Exact eigendecomposition of a triangular matrix with distinct diagonal.

    Returns (V, eigenvalues, V^-1) with V unit-triangular.
    """
    ctx = mat.ctx
    n = mat.size
    shape = _triangular_shape(mat)
    if shape is None:
        raise ValueError("argument is not triangular")
    grid = mat.to_dense()
    eigs = [grid[i][i] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            diff = eigs[i] - eigs[j]
            collide = diff.is_zero() if ctx.is_exact else abs(diff) < 1e-12
            if collide:
                raise RepeatedEigenvalueError(
                    f"eigenvalues {i} and {j} collide; the spectral function "
                    "is ambiguous")
    cols = {}
    zero = ctx.zero()
    for i in range(n):
        w = [zero] * n
        w[i] = ctx.one()
        if shape == "upper":
            order = range(i - 1, -1, -1)
        else:
            order = range(i + 1, n)
        for j in order:
            if shape == "upper":
                s = sum((grid[j][k] * w[k] for k in range(j + 1, i + 1)),
                        start=zero)
            else:
                s = sum((grid[j][k] * w[k] for k in range(i, j)), start=zero)
            w[j] = s / (eigs[i] - grid[j][j])
        cols[i] = w
    v_entries = {(r, c): cols[c][r] for c in range(n) for r in range(n)
                 if not _is_zero_scalar(ctx, cols[c][r])}
    v = Matrix.from_scalar_entries(ctx, n, v_entries)
    v_inv = _unitriangular_inverse(ctx, cols, n, shape)
    return v, eigs, v_inv


def _is_zero_scalar(ctx, s):
    return s.is_zero() if ctx.is_exact else s == 0


def _unitriangular_inverse(ctx, cols, n, shape):
    """Invert the unit-triangular eigenvector matrix by substitution."""
    zero = ctx.zero()
    inv_cols = {}
    for j in range(n):
        w = [zero] * n
        w[j] = ctx.one()
        if shape == "upper":
            order = range(j - 1, -1, -1)
        else:
            order = range(j + 1, n)
        for i in order:
            if shape == "upper":
                s = sum((cols[k][i] * w[k] for k in range(i + 1, j + 1)),
                        start=zero)
            else:
                s = sum((cols[k][i] * w[k] for k in range(j, i)), start=zero)
            w[i] = -s
        inv_cols[j] = w
    entries = {(r, c): inv_cols[c][r] for c in range(n) for r in range(n)
               if not _is_zero_scalar(ctx, inv_cols[c][r])}
    return Matrix.from_scalar_entries(ctx, n, entries)


def _spectral_function(ctx: ScalarContext, spec: KOperatorSpec, eps, z):
    """f(z) = (-q^-1 x^s z/eps; q^-2)_inf / (-q^-1 x^-s z/eps; q^-2)_inf."""
    p = spec.params
    x = spec.x
    b = -(ctx.q(-1) * z / eps)
    if ctx.is_exact:
        return poch_ratio_telescoped(ctx, b, x.exp * p.s)
    xs = ctx.x_power(x, p.s)
    return poch_ratio_numeric(ctx, b, xs, 1 / xs)


def build_K_unfactored(spec: KOperatorSpec, rep: Irrep) -> KOperator:
    """K-operator as the spectral function of its one-generator argument.

    Triangular arguments are diagonalized exactly (their eigenvalues sit on
    the diagonal).  The non-triangular k+ k- != 0 candidate needs no
    eigenvalues at all on the exact backend: with x = q^m the telescoped
    spectral function is a polynomial in the argument (t >= 0) or the inverse
    of one (t < 0), so it is evaluated as a finite matrix product; the
    numeric backend diagonalizes instead, giving an independent route.
    """
    ctx = rep.ctx
    spec.validate(ctx)
    if ctx.is_exact and spec.x.exp is None:
        raise ValueError("exact backend needs x = q^m")
    arg = _spectral_argument(rep, spec)
    eps, prefix_exp = _variant_eps_prefix(spec)

    if _triangular_shape(arg) is not None:
        v, eigs, v_inv = _triangular_eig(arg)
        fvals = [_spectral_function(ctx, spec, eps, z) for z in eigs]
        core = v * Matrix.diagonal(ctx, fvals) * v_inv
    elif ctx.is_exact:
        core = _polynomial_spectral_core(ctx, spec, eps, arg)
    else:
        core = _numeric_spectral_core(ctx, spec, eps, arg)
    mat = spectral_cartan(rep, spec.x, prefix_exp) * core
    return KOperator(mat, spec, "unfactored")


def _polynomial_spectral_core(ctx, spec, eps, arg: Matrix) -> Matrix:
    """f(M) = prod_{j<|t|} (1 + q^{|t|-2j-1} M / eps), inverted when t < 0.

    This is the telescoped spectral function applied directly to the matrix
    argument; no eigenvalues are needed.
    """
    t = spec.x.exp * spec.params.s
    n = arg.size
    core = Matrix.identity(ctx, n)
    for j in range(abs(t)):
        coeff = ctx.q(abs(t) - 2 * j - 1) / eps
        core = core * (Matrix.identity(ctx, n) + arg.scaled(coeff))
    if t < 0:
        try:
            core = core.inverse()
        except ZeroDivisionError:
            raise PoleError("spectral-function pole: an eigenvalue of the "
                            "argument meets a vanishing telescoping factor")
    return core


def _numeric_spectral_core(ctx, spec, eps, arg: Matrix) -> Matrix:
    import numpy as np

    a = arg.to_numpy()
    eigvals, vecs = np.linalg.eig(a)
    scale = max(abs(eigvals)) if len(eigvals) else 1.0
    n = arg.size
    for i in range(n):
        for j in range(i + 1, n):
            if abs(eigvals[i] - eigvals[j]) < 1e-8 * max(scale, 1.0):
                raise RepeatedEigenvalueError(
                    "numeric eigenvalues collide; cannot apply the spectral "
                    "function reliably")
    fv = np.array([_spectral_function(ctx, spec, eps, complex(z))
                   for z in eigvals])
    core = vecs @ np.diag(fv) @ np.linalg.inv(vecs)
    entries = {(i, j): complex(core[i, j]) for i in range(n) for j in range(n)
               if core[i, j] != 0}
    return Matrix(ctx, n, entries)


def build_K_onsager_candidate(rep: Irrep, params: ParamSet, x: Spectral) -> KOperator:
    """The k+ k- != 0 candidate: x^{s0 H} times the spectral function of the
    evaluated W1 generator.  Reduces to the upper family at k- = 0 and to the
    lower family at k+ = 0.

    The candidate intertwines W1 identically but fails the W0 relation for
    generic spectral points; at x^s = q^{-1}, 1, q (where the spectral
    function is constant or a single linear factor) it satisfies both.
    """
    spec = KOperatorSpec("onsager_candidate", params, x)
    return build_K_unfactored(spec, rep)


def build_K_upper_split(rep: Irrep, params: ParamSet, x: Spectral) -> KOperator:
    """Upper K-operator assembled from one-sided prefactors at x and 1/x:

        exp^-1(d x^{s0} E q^H) . x^{s0 H} . K0(x) . exp(d x^{-s0} E q^H)

    with d = -q k+ / ((q - q^-1) eps-).  This is the product H(1/x)^-1
    x^{s0 H} H(x) of the one-sided factor H(x) = exp(c x^{-s} q^-H)
    exp(d x^{-s0} E q^H): the two diagonal q-exponentials combine into the
    K0 Pochhammer ratio, which keeps the exact backend finite.
    """
    ctx = rep.ctx
    spec = KOperatorSpec("upper", params, x)
    spec.validate(ctx)
    p = params
    lam = ctx.q(1) - ctx.q(-1)
    d = -(ctx.q(1) * p.k_plus) / (lam * p.eps_minus)
    eqh = rep.e_mat * cartan_power(rep, 1)
    left = q_exp_nilpotent(ctx, eqh.scaled(d * ctx.x_power(x, p.s0)), inverse=True)
    right = q_exp_nilpotent(ctx, eqh.scaled(d * ctx.x_power(x, -p.s0)), inverse=False)
    mat = (left * spectral_cartan(rep, x, p.s0)
           * build_K0_diagonal(rep, p, x, "minusH") * right)
    return KOperator(mat, spec, "split")


def variant_scalar_k(variant: str):
    """Which (k+, k-) pair survives in the 2x2 fundamental image of a variant."""
    return {
        "diagonal": (False, False),
        "upper": (True, False),
        "lower": (False, True),
        "upper_alt": (False, True),
        "lower_alt": (True, False),
        "onsager_candidate": (True, True),
    }[variant]
