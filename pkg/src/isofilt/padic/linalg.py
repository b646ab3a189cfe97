"""Certified linear algebra over a tower level.

Matrices are plain lists of lists of Scalars sharing one descriptor.  Rank,
kernel, span and determinant-valuation decisions follow a certify-or-fail
contract: a pivot is accepted only when its (exact) valuation is backed by at
least ``guard`` spare pi-adic digits, and anything discarded as zero is zero
to within the working precision.  When a decision cannot be certified a
PrecisionError escapes and the caller retries at doubled precision.

Pivoting always selects a minimal-valuation entry, which is the p-adic
analogue of partial pivoting and keeps precision loss linear.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import PrecisionError, ValidationError
from . import scalar as sc
from .scalar import Scalar, sc_add, sc_sub, sc_mul, sc_neg, sc_inv, sc_zero


DEFAULT_GUARD = 8


def mat_dims(m):
    return len(m), len(m[0]) if m else 0


def zeros(field, r, c):
    return [[sc_zero(field) for _ in range(c)] for _ in range(r)]


def identity(field, n):
    one = field.one()
    return [[one if i == j else sc_zero(field) for j in range(n)]
            for i in range(n)]


def from_rows_of_fractions(field, rows):
    return [[field.scalar(x) for x in row] for row in rows]


def mat_add(a, b):
    return [[sc_add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[sc_sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_neg(a):
    return [[sc_neg(x) for x in row] for row in a]


def mat_mul(a, b):
    n, k = mat_dims(a)
    k2, m = mat_dims(b)
    assert k == k2, "inner dimensions mismatch"
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for t in range(k):
                term = sc_mul(a[i][t], b[t][j])
                acc = term if acc is None else sc_add(acc, term)
            row.append(acc)
        out.append(row)
    return out


def mat_scalar(s, a):
    return [[sc_mul(s, x) for x in row] for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_map(a, fn):
    return [[fn(x) for x in row] for row in a]


def mat_frobenius(a):
    return mat_map(a, sc.sc_frobenius)


def hstack(a, b):
    return [ra + rb for ra, rb in zip(a, b)]


def vstack(a, b):
    return list(a) + list(b)


def columns(a, idx):
    return [[row[j] for j in idx] for row in a]


class RankCertificate:
    """Outcome of a certified elimination."""

    def __init__(self, rank, pivot_vals, guard, residual_bound):
        self.rank = rank
        self.pivot_vals = pivot_vals          # exact valuations of the pivots
        self.guard = guard                    # spare pi-digits backing them
        self.residual_bound = residual_bound  # all discarded entries vanish
                                              # to at least this valuation

    def as_dict(self):
        return {"rank": self.rank,
                "pivot_valuations": [str(v) for v in self.pivot_vals],
                "guard": self.guard,
                "residual_zero_to": (str(self.residual_bound)
                                     if self.residual_bound is not None else None)}


def certified_row_reduce(m, guard: int = DEFAULT_GUARD, reduced: bool = True):
    """Row reduce a copy of m; returns (echelon, pivot_cols, certificate).

    Raises PrecisionError when a pivot decision cannot be backed by ``guard``
    spare pi-adic digits.
    """
    if not m or not m[0]:
        return [], [], RankCertificate(0, [], guard, None)
    field = _field_of(m)
    rows = [list(r) for r in m]
    nr, nc = len(rows), len(rows[0])
    pivot_cols = []
    pivot_vals = []
    r = 0
    for c in range(nc):
        best = None
        for i in range(r, nr):
            x = rows[i][c]
            if x.kind == sc.REG and (best is None or x.val < rows[best][c].val):
                best = i
        if best is None:
            continue
        piv = rows[best][c]
        if piv.relpi < guard:
            raise PrecisionError(
                f"pivot at column {c} has only {piv.relpi} spare pi-digits "
                f"(guard {guard}); escalate precision")
        rows[r], rows[best] = rows[best], rows[r]
        inv = sc_inv(piv)
        rows[r] = [sc_mul(inv, x) for x in rows[r]]
        lo = 0 if reduced else r + 1
        for i in range(lo, nr):
            if i == r:
                continue
            x = rows[i][c]
            if x.kind == sc.ZERO:
                continue
            factor = x
            rows[i] = [sc_sub(y, sc_mul(factor, z))
                       for y, z in zip(rows[i], rows[r])]
        pivot_cols.append(c)
        pivot_vals.append(piv.val)
        r += 1
        if r == nr:
            break
    residual_bound = None
    for i in range(r, nr):
        for x in rows[i]:
            if x.kind == sc.IZERO:
                residual_bound = x.zb if residual_bound is None else min(residual_bound, x.zb)
            elif x.kind == sc.REG:
                # unreachable: every remaining reg entry would have produced
                # a pivot in its column
                raise PrecisionError("uncertified nonzero residual after elimination")
    cert = RankCertificate(r, pivot_vals, guard, residual_bound)
    return rows[:r] if reduced else rows, pivot_cols, cert


def certified_rank(m, guard: int = DEFAULT_GUARD) -> int:
    _, _, cert = certified_row_reduce(m, guard)
    return cert.rank


def rank_certificate(m, guard: int = DEFAULT_GUARD) -> RankCertificate:
    return certified_row_reduce(m, guard)[2]


def row_space_basis(m, guard: int = DEFAULT_GUARD):
    ech, _, _ = certified_row_reduce(m, guard)
    return ech


def column_space_basis(m, guard: int = DEFAULT_GUARD):
    """Columns of m spanning its column space (as a matrix of columns)."""
    _, pivot_cols, _ = certified_row_reduce(m, guard)
    return columns(m, pivot_cols)


def kernel_basis(m, guard: int = DEFAULT_GUARD):
    """Basis of the right kernel, as a list of column vectors (each a list)."""
    if not m or not m[0]:
        n = len(m[0]) if m else 0
        field = _field_of(m) if m and m[0] else None
        return [[field.one() if i == j else sc_zero(field) for i in range(n)]
                for j in range(n)] if field else []
    field = _field_of(m)
    ech, pivot_cols, _ = certified_row_reduce(m, guard, reduced=True)
    nc = len(m[0])
    free = [c for c in range(nc) if c not in pivot_cols]
    basis = []
    for fc in free:
        vec = [sc_zero(field) for _ in range(nc)]
        vec[fc] = field.one()
        for r, pc in enumerate(pivot_cols):
            vec[pc] = sc_neg(ech[r][fc])
        basis.append(vec)
    return basis


def solve_right(a, b, guard: int = DEFAULT_GUARD):
    """One solution x of a*x = b (b a matrix of columns); raises if none
    certified.  Returns the matrix x."""
    field = _field_of(a)
    na, nc = mat_dims(a)
    nb = len(b[0])
    aug = hstack(a, b)
    ech, pivots, _ = certified_row_reduce(aug, guard, reduced=True)
    for r, pc in enumerate(pivots):
        if pc >= nc:
            raise ValidationError("linear system certified inconsistent")
    x = zeros(field, nc, nb)
    for r, pc in enumerate(pivots):
        for j in range(nb):
            x[pc][j] = ech[r][nc + j]
    return x


def intersection_dim(a_cols, b_cols, guard: int = DEFAULT_GUARD) -> int:
    """dim(span(a) ∩ span(b)) for two column-span matrices over one level."""
    ra = certified_rank(transpose(a_cols), guard)
    rb = certified_rank(transpose(b_cols), guard)
    rab = certified_rank(transpose(hstack(a_cols, b_cols)), guard)
    return ra + rb - rab


def intersection_basis(a_cols, b_cols, guard: int = DEFAULT_GUARD):
    """Columns spanning span(a) ∩ span(b)."""
    field = _field_of(a_cols)
    n = len(a_cols)
    ka, kb = len(a_cols[0]), len(b_cols[0])
    ker = kernel_basis(hstack(a_cols, mat_map(b_cols, sc_neg)), guard)
    out = []
    for vec in ker:
        col = []
        for i in range(n):
            acc = None
            for j in range(ka):
                t = sc_mul(a_cols[i][j], vec[j])
                acc = t if acc is None else sc_add(acc, t)
            col.append(acc if acc is not None else sc_zero(field))
        out.append(col)
    if not out:
        return [[] for _ in range(n)]
    cols = [[out[j][i] for j in range(len(out))] for i in range(n)]
    return column_space_basis(cols, guard)


def subspace_leq(a_cols, b_cols, guard: int = DEFAULT_GUARD) -> bool:
    """span(a) <= span(b), certified."""
    rb = certified_rank(transpose(b_cols), guard)
    rab = certified_rank(transpose(hstack(a_cols, b_cols)), guard)
    return rb == rab


def subspace_equal(a_cols, b_cols, guard: int = DEFAULT_GUARD) -> bool:
    ra = certified_rank(transpose(a_cols), guard)
    rb = certified_rank(transpose(b_cols), guard)
    if ra != rb:
        return False
    rab = certified_rank(transpose(hstack(a_cols, b_cols)), guard)
    return rab == ra


def det_valuation(m, guard: int = DEFAULT_GUARD) -> Fraction:
    """Exact valuation of det(m); PrecisionError if m is not certified
    invertible."""
    n = len(m)
    _, pivots, cert = certified_row_reduce(m, guard, reduced=False)
    if cert.rank != n:
        raise PrecisionError("matrix not certified invertible")
    return sum(cert.pivot_vals, Fraction(0))


def mat_inverse(m, guard: int = DEFAULT_GUARD):
    field = _field_of(m)
    n = len(m)
    return solve_right(m, identity(field, n), guard)


def charpoly(m):
    """Characteristic polynomial det(xI - m), ascending coefficients.

    Division-free (Berkowitz), so precision behaves like products and sums of
    the entries; no pivoting decisions are involved.
    """
    field = _field_of(m)
    n = len(m)
    if n == 0:
        return [field.one()]
    # Berkowitz: iteratively build the characteristic polynomial vector
    # http://en.wikipedia.org/wiki/Samuelson-Berkowitz_algorithm
    poly = [field.one(), sc_neg(m[0][0])]
    for k in range(1, n):
        a = m[k][k]
        row = [m[k][j] for j in range(k)]       # R: 1 x k
        col = [m[i][k] for i in range(k)]       # C: k x 1
        sub = [[m[i][j] for j in range(k)] for i in range(k)]
        # Toeplitz column: [1, -a, -R C, -R sub C, -R sub^2 C, ...]
        t = [field.one(), sc_neg(a)]
        v = col
        for _ in range(k):
            dot = None
            for x, y in zip(row, v):
                term = sc_mul(x, y)
                dot = term if dot is None else sc_add(dot, term)
            t.append(sc_neg(dot))
            v = [_dot_row(sub[i], v, field) for i in range(k)]
        new = []
        for i in range(k + 2):
            acc = None
            for j in range(len(t)):
                if 0 <= i - j <= k:
                    term = sc_mul(t[j], poly[i - j])
                    acc = term if acc is None else sc_add(acc, term)
            new.append(acc if acc is not None else sc_zero(field))
        poly = new
    # poly is [1, c_{n-1}, ..., c_0] in degree-descending order; flip
    return list(reversed(poly))


def _dot_row(row, v, field):
    acc = None
    for x, y in zip(row, v):
        term = sc_mul(x, y)
        acc = term if acc is None else sc_add(acc, term)
    return acc if acc is not None else sc_zero(field)


def poly_eval_matrix(coeffs, m):
    """Evaluate a scalar-coefficient polynomial at a matrix."""
    field = _field_of(m)
    n = len(m)
    out = zeros(field, n, n)
    for c in reversed(coeffs):
        out = mat_mul(out, m)
        for i in range(n):
            out[i][i] = sc_add(out[i][i], c)
    return out


def pi_power(field, v) -> Scalar:
    """The scalar pi^(e*v) (valuation v, unit one, full precision)."""
    v = Fraction(v)
    assert (v * field.e).denominator == 1
    return Scalar(field, sc.REG, val=v, unit=field.ring.one(),
                  relpi=field.relpi_max)


def normalize_columns(cols, integral: bool = False):
    """Scale each column by a power of the uniformizer so its minimal
    valuation becomes zero; keeps spans and improves zero-certification.

    With integral=True only integer powers of p are used (Galois-invariant
    scaling), so the minimal valuation lands in [0, 1).
    """
    if not cols or not cols[0]:
        return cols
    field = _field_of(cols)
    n, k = len(cols), len(cols[0])
    out = [[None] * k for _ in range(n)]
    for j in range(k):
        vmin = None
        for i in range(n):
            x = cols[i][j]
            if x.kind == sc.REG and (vmin is None or x.val < vmin):
                vmin = x.val
        if vmin is not None and integral:
            import math
            vmin = Fraction(math.floor(vmin))
        if vmin is None or vmin == 0:
            for i in range(n):
                out[i][j] = cols[i][j]
            continue
        s = pi_power(field, -vmin)
        for i in range(n):
            out[i][j] = sc_mul(s, cols[i][j])
    return out


def mat_is_zero(m, min_bound) -> bool:
    """Every entry certified to vanish to valuation at least min_bound."""
    for row in m:
        for x in row:
            if not sc.sc_certified_zero(x, min_bound):
                return False
    return True


def zero_status(m, min_bound) -> str:
    """'zero' when every entry vanishes to min_bound; 'nonzero' when some
    entry is certified nonzero; 'shallow' when the matrix is zero to within
    precision but the bound is not deep enough (retry at higher precision)."""
    shallow = False
    for row in m:
        for x in row:
            if x.kind == sc.REG:
                return "nonzero"
            if not sc.sc_certified_zero(x, min_bound):
                shallow = True
    return "shallow" if shallow else "zero"


def _field_of(m):
    for row in m:
        for x in row:
            return x.field
    raise ValueError("empty matrix has no field")
