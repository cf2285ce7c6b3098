"""Small dense-square matrices over the active scalar backend.

Exact matrices are stored fraction-free: a sparse map of Laurent-polynomial
entries plus one common denominator polynomial.  Products then never touch a
gcd; reduced `RationalExpression` values appear only when an individual entry
is requested.  Numeric matrices use the same layout with complex entries.
"""

from __future__ import annotations

from collections import defaultdict

from .scalars import (
    RationalExpression,
    ScalarContext,
    poly_divexact,
    poly_gcd,
    poly_one,
)


class Matrix:
    """Square matrix on a backend ring, entries/den in common-denominator form."""

    __slots__ = ("ctx", "size", "entries", "den")

    def __init__(self, ctx: ScalarContext, size: int, entries: dict, den=None):
        self.ctx = ctx
        self.size = size
        self.entries = entries
        if den is None:
            den = poly_one() if ctx.is_exact else 1 + 0j
        self.den = den

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(ctx: ScalarContext, size: int) -> "Matrix":
        return Matrix(ctx, size, {})

    @staticmethod
    def identity(ctx: ScalarContext, size: int) -> "Matrix":
        one = poly_one() if ctx.is_exact else 1 + 0j
        return Matrix(ctx, size, {(i, i): one for i in range(size)})

    @staticmethod
    def from_scalar_entries(ctx: ScalarContext, size: int, mapping: dict) -> "Matrix":
        """Build from field scalars, clearing them to one common denominator."""
        if not ctx.is_exact:
            return Matrix(ctx, size,
                          {k: complex(v) for k, v in mapping.items() if v != 0})
        dens = []
        for v in mapping.values():
            if not v.is_zero() and not v.den.is_one() and v.den not in dens:
                dens.append(v.den)
        common = poly_one()
        for d in dens:
            g = poly_gcd(common, d)
            common = common * poly_divexact(d, g)
        entries = {}
        for k, v in mapping.items():
            if v.is_zero():
                continue
            entries[k] = v.num * poly_divexact(common, v.den)
        return Matrix(ctx, size, entries, common)

    @staticmethod
    def diagonal(ctx: ScalarContext, values) -> "Matrix":
        values = list(values)
        return Matrix.from_scalar_entries(
            ctx, len(values), {(i, i): v for i, v in enumerate(values)})

    # -- ring operations ------------------------------------------------------

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.size != other.size:
            raise ValueError("matrix size mismatch")
        rows_b = defaultdict(list)
        for (k, j), b in other.entries.items():
            rows_b[k].append((j, b))
        acc = {}
        for (i, k), a in self.entries.items():
            row = rows_b.get(k)
            if not row:
                continue
            for j, b in row:
                key = (i, j)
                p = a * b
                if key in acc:
                    acc[key] = acc[key] + p
                else:
                    acc[key] = p
        if self.ctx.is_exact:
            acc = {k: v for k, v in acc.items() if not v.is_zero()}
        return Matrix(self.ctx, self.size, acc, self.den * other.den)

    def _same_den(self, other) -> bool:
        return self.den is other.den or self.den == other.den

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.size != other.size:
            raise ValueError("matrix size mismatch")
        if self._same_den(other):
            out = dict(self.entries)
            for k, v in other.entries.items():
                if k in out:
                    s = out[k] + v
                    if self.ctx.is_exact and s.is_zero():
                        del out[k]
                    else:
                        out[k] = s
                else:
                    out[k] = v
            return Matrix(self.ctx, self.size, out, self.den)
        out = {k: v * other.den for k, v in self.entries.items()}
        for k, v in other.entries.items():
            w = v * self.den
            if k in out:
                s = out[k] + w
                if self.ctx.is_exact and s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = w
        return Matrix(self.ctx, self.size, out, self.den * other.den)

    def __neg__(self):
        return Matrix(self.ctx, self.size,
                      {k: -v for k, v in self.entries.items()}, self.den)

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self + (-other)

    def scaled(self, s) -> "Matrix":
        """Multiply by a field scalar."""
        if self.ctx.is_exact:
            if not isinstance(s, RationalExpression):
                s = self.ctx.scalar(s)
            if s.is_zero():
                return Matrix.zero(self.ctx, self.size)
            entries = {k: v * s.num for k, v in self.entries.items()}
            return Matrix(self.ctx, self.size, entries, self.den * s.den)
        s = complex(s)
        if s == 0:
            return Matrix.zero(self.ctx, self.size)
        return Matrix(self.ctx, self.size,
                      {k: v * s for k, v in self.entries.items()}, self.den)

    def divided(self, s) -> "Matrix":
        """Divide by a nonzero field scalar."""
        if self.ctx.is_exact:
            if not isinstance(s, RationalExpression):
                s = self.ctx.scalar(s)
            return self.scaled(s.inverse())
        return self.scaled(1 / complex(s))

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product, row-major composite index (self is the major leg)."""
        n2 = other.size
        entries = {}
        for (i, j), a in self.entries.items():
            for (k, l), b in other.entries.items():
                entries[(i * n2 + k, j * n2 + l)] = a * b
        return Matrix(self.ctx, self.size * n2, entries, self.den * other.den)

    # -- inspection -----------------------------------------------------------

    def entry(self, i: int, j: int):
        """Entry (i, j) as a reduced field scalar."""
        v = self.entries.get((i, j))
        if self.ctx.is_exact:
            if v is None:
                return RationalExpression.constant(0)
            return RationalExpression(v, self.den)
        return 0j if v is None else v / self.den

    def is_zero(self) -> bool:
        if self.ctx.is_exact:
            return not self.entries
        return all(v == 0 for v in self.entries.values())

    def max_abs(self) -> float:
        """Numeric: largest entry magnitude."""
        if not self.entries:
            return 0.0
        d = abs(self.den)
        return max(abs(v) for v in self.entries.values()) / d

    def worst_entry(self):
        """Locate the 'most nonzero' entry: (i, j) for diagnostics."""
        if not self.entries:
            return None
        if self.ctx.is_exact:
            return next(iter(sorted(self.entries)))
        return max(self.entries, key=lambda k: abs(self.entries[k]))

    def equals(self, other: "Matrix") -> bool:
        if self.ctx.is_exact:
            return (self - other).is_zero()
        diff = self - other
        scale = max(self.max_abs(), other.max_abs(), 1e-300)
        return diff.max_abs() / scale < 1e-9

    def transpose(self) -> "Matrix":
        return Matrix(self.ctx, self.size,
                      {(j, i): v for (i, j), v in self.entries.items()}, self.den)

    def inverse(self) -> "Matrix":
        """Field-exact inverse by Gauss-Jordan elimination (both backends)."""
        ctx = self.ctx
        n = self.size
        grid = self.to_dense()
        aug = [[ctx.one() if i == j else ctx.zero() for j in range(n)]
               for i in range(n)]
        for col in range(n):
            pivot = None
            if ctx.is_exact:
                for r in range(col, n):
                    if not grid[r][col].is_zero():
                        pivot = r
                        break
            else:
                best = 0.0
                for r in range(col, n):
                    mag = abs(grid[r][col])
                    if mag > best:
                        best, pivot = mag, r
                if best == 0.0:
                    pivot = None
            if pivot is None:
                raise ZeroDivisionError("matrix is singular")
            if pivot != col:
                grid[col], grid[pivot] = grid[pivot], grid[col]
                aug[col], aug[pivot] = aug[pivot], aug[col]
            inv_p = (grid[col][col].inverse() if ctx.is_exact
                     else 1 / grid[col][col])
            grid[col] = [v * inv_p for v in grid[col]]
            aug[col] = [v * inv_p for v in aug[col]]
            for r in range(n):
                if r == col:
                    continue
                f = grid[r][col]
                if ctx.is_exact and f.is_zero():
                    continue
                grid[r] = [a - f * b for a, b in zip(grid[r], grid[col])]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        entries = {}
        for i in range(n):
            for j in range(n):
                v = aug[i][j]
                keep = (not v.is_zero()) if ctx.is_exact else v != 0
                if keep:
                    entries[(i, j)] = v
        return Matrix.from_scalar_entries(ctx, n, entries)

    def to_dense(self):
        """List-of-lists of field scalars."""
        return [[self.entry(i, j) for j in range(self.size)] for i in range(self.size)]

    def to_numpy(self):
        import numpy as np

        out = np.zeros((self.size, self.size), dtype=complex)
        for (i, j), v in self.entries.items():
            out[i, j] = v
        return out / complex(self.den)

    def __repr__(self):
        return f"Matrix(size={self.size}, nnz={len(self.entries)})"


def lift(mat: Matrix, dims: tuple, legs: tuple) -> Matrix:
    """Embed an operator acting on the tensor legs `legs` into the full product.

    `mat` acts on the product of dims[l] for l in legs (in that order);
    the result acts on the row-major product of all dims.
    """
    ctx = mat.ctx
    full = 1
    for d in dims:
        full *= d
    strides = []
    acc = 1
    for d in reversed(dims):
        strides.append(acc)
        acc *= d
    strides = list(reversed(strides))

    leg_dims = [dims[l] for l in legs]
    spect = [l for l in range(len(dims)) if l not in legs]

    def split_leg_index(idx):
        out = []
        for d in reversed(leg_dims):
            out.append(idx % d)
            idx //= d
        return list(reversed(out))

    spectator_ranges = [range(dims[l]) for l in spect]

    def spectator_tuples():
        if not spect:
            yield ()
            return
        import itertools

        yield from itertools.product(*spectator_ranges)

    entries = {}
    spec_list = list(spectator_tuples())
    for (r, c), v in mat.entries.items():
        r_parts = split_leg_index(r)
        c_parts = split_leg_index(c)
        for sp in spec_list:
            row = col = 0
            for l, val in zip(spect, sp):
                row += val * strides[l]
                col += val * strides[l]
            for l, rv, cv in zip(legs, r_parts, c_parts):
                row += rv * strides[l]
                col += cv * strides[l]
            entries[(row, col)] = v
    return Matrix(ctx, full, entries, mat.den)


def residual(lhs: Matrix, rhs: Matrix):
    """Compare two matrices: (exact_zero, residual, worst) per backend.

    Exact backend: residual is None and exact_zero is the verdict.  Numeric:
    exact_zero is None and residual is the max-entry difference normalized by
    the larger max-entry magnitude of the two sides.
    """
    diff = lhs - rhs
    if lhs.ctx.is_exact:
        ok = diff.is_zero()
        return ok, None, (None if ok else diff.worst_entry())
    scale = max(lhs.max_abs(), rhs.max_abs())
    raw = diff.max_abs()
    res = raw / scale if scale > 0 else raw
    return None, res, diff.worst_entry()
