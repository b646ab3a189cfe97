"""Finite-dimensional spaces with an invertible Frobenius-semilinear operator.

A PhiModule over an unramified level K_q is a matrix A in a fixed basis with
the semantics phi(x) = A * sigma(x) on coordinate columns.  The linearization
B = A sigma(A) ... sigma^(f-1)(A) is the (honestly linear) matrix of phi^f and
drives all slope computations.

Polarized modules carry an alternating Gram matrix J; the Frobenius
compatibility constant is eps * p with eps in {+1, -1} detected at validation
(both signs occur among natural examples and nothing downstream depends on
the sign, only on the twist by p).
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import ValidationError, PrecisionError
from ..padic import linalg as la
from ..padic import scalar as sc
from ..padic.scalar import sc_add, sc_mul, sc_neg
from ..padic.descriptors import UnramifiedFieldDescriptor


class PhiModule:
    def __init__(self, field: UnramifiedFieldDescriptor, frobenius_matrix,
                 validate: bool = True, guard: int = la.DEFAULT_GUARD):
        self.field = field
        self.A = frobenius_matrix
        self.n = len(frobenius_matrix)
        if validate:
            if any(len(r) != self.n for r in self.A):
                raise ValidationError("Frobenius matrix must be square")
            la.det_valuation(self.A, guard)  # certified invertible

    @classmethod
    def from_rational(cls, field, rows):
        return cls(field, la.from_rows_of_fractions(field, rows))

    @classmethod
    def simple(cls, field, s: int, r: int):
        """The simple module of slope s/r: companion matrix of x^r - p^s."""
        rows = [[0] * r for _ in range(r)]
        for i in range(1, r):
            rows[i][i - 1] = 1
        rows[0][r - 1] = Fraction(field.p) ** s
        return cls.from_rational(field, rows)

    def apply_phi(self, cols):
        """phi on a matrix of column vectors."""
        return la.mat_mul(self.A, la.mat_frobenius(cols))

    def linearization(self):
        """Matrix of phi^f: A sigma(A) ... sigma^(f-1)(A)."""
        B = self.A
        Ak = self.A
        for _ in range(self.field.f - 1):
            Ak = la.mat_frobenius(Ak)
            B = la.mat_mul(B, Ak)
        return B

    def t_N(self, guard: int = la.DEFAULT_GUARD) -> Fraction:
        """v_p(det A); basis independent."""
        return la.det_valuation(self.A, guard)

    def base_change(self, P, guard: int = la.DEFAULT_GUARD) -> "PhiModule":
        """A -> P^{-1} A sigma(P)."""
        Pinv = la.mat_inverse(P, guard)
        return PhiModule(self.field,
                         la.mat_mul(Pinv, la.mat_mul(self.A, la.mat_frobenius(P))),
                         validate=False)

    def dual(self, twist: int = 0) -> "PhiModule":
        """Dual Frobenius p^twist * (A^T)^{-1}; slopes become twist - mu."""
        At = la.transpose(self.A)
        Ainv_t = la.mat_inverse(At)
        pt = self.field.scalar(Fraction(self.field.p) ** twist)
        return PhiModule(self.field, la.mat_scalar(pt, Ainv_t), validate=False)

    def direct_sum(self, other: "PhiModule") -> "PhiModule":
        assert self.field == other.field
        n, m = self.n, other.n
        z = self.field.zero()
        rows = []
        for i in range(n):
            rows.append(list(self.A[i]) + [z] * m)
        for i in range(m):
            rows.append([z] * n + list(other.A[i]))
        return PhiModule(self.field, rows, validate=False)

    def is_stable(self, basis_cols, guard: int = la.DEFAULT_GUARD) -> bool:
        """Certified phi-stability of the span of the given columns."""
        if not basis_cols or not basis_cols[0]:
            return True
        img = self.apply_phi(basis_cols)
        return la.subspace_leq(img, basis_cols, guard)

    def restricted_frobenius(self, basis_cols, guard: int = la.DEFAULT_GUARD):
        """Matrix C with A sigma(N) = N C for a phi-stable N; the Frobenius of
        the submodule in the given basis."""
        img = self.apply_phi(basis_cols)
        return la.solve_right(basis_cols, img, guard)

    def submodule(self, basis_cols, guard: int = la.DEFAULT_GUARD) -> "PhiModule":
        C = self.restricted_frobenius(basis_cols, guard)
        return PhiModule(self.field, C, validate=False)


def standard_symplectic_gram(field, g: int):
    """Block diagonal sum of g copies of [[0,-1],[1,0]]."""
    n = 2 * g
    rows = [[0] * n for _ in range(n)]
    for k in range(g):
        rows[2 * k][2 * k + 1] = -1
        rows[2 * k + 1][2 * k] = 1
    return la.from_rows_of_fractions(field, rows)


class PolarizedPhiModule:
    """phi-module with an alternating invertible Gram matrix J satisfying
    A^T J A = eps * p * sigma(J)."""

    def __init__(self, module: PhiModule, gram, validate: bool = True,
                 guard: int = la.DEFAULT_GUARD):
        self.module = module
        self.J = gram
        self.eps = None
        if validate:
            self._validate(guard)

    def _validate(self, guard):
        D = self.module
        n = D.n
        if n % 2 != 0:
            raise ValidationError("polarized module must have even dimension")
        F = D.field
        thr = Fraction(F.prec, 2)
        skew = la.mat_add(self.J, la.transpose(self.J))
        if not la.mat_is_zero(skew, thr):
            raise ValidationError("Gram matrix is not alternating")
        la.det_valuation(self.J, guard)
        lhs = la.mat_mul(la.transpose(D.A), la.mat_mul(self.J, D.A))
        p_sigma_J = la.mat_scalar(F.scalar(F.p), la.mat_frobenius(self.J))
        for eps in (1, -1):
            target = p_sigma_J if eps == 1 else la.mat_neg(p_sigma_J)
            if la.mat_is_zero(la.mat_sub(lhs, target), thr):
                self.eps = eps
                return
        raise ValidationError("Frobenius is not compatible with the pairing "
                              "(A^T J A != +-p sigma(J))")

    @property
    def g(self):
        return self.module.n // 2

    def pairing(self, x_col, y_col):
        """<x, y> = x^T J y."""
        Jy = la.mat_mul(self.J, [[v] for v in y_col])
        acc = None
        for xi, row in zip(x_col, Jy):
            t = sc_mul(xi, row[0])
            acc = t if acc is None else sc_add(acc, t)
        return acc


class SemiAbelianPhiModule:
    """Extension of an abelian polarized module by a pure slope-1 part.

    toric_cols spans the phi-stable sub D_T; the complement columns chosen at
    validation give a section of the quotient D_B, on which gram_B lives.
    """

    def __init__(self, module: PhiModule, toric_cols, gram_B,
                 lambda_T=None, validate: bool = True,
                 guard: int = la.DEFAULT_GUARD):
        self.module = module
        self.toric_cols = toric_cols
        self.t_dim = len(toric_cols[0]) if toric_cols and toric_cols[0] else 0
        self.gram_B = gram_B
        F = module.field
        if lambda_T is None and self.t_dim:
            lambda_T = la.identity(F, self.t_dim)
        self.lambda_T = lambda_T
        self._build_section(guard)
        if validate:
            self._validate(guard)

    def _build_section(self, guard):
        D = self.module
        F = D.field
        n = D.n
        t = self.t_dim
        if t == 0:
            self.section_cols = la.identity(F, n)
            self.B_dim = n
            self.full_basis = la.identity(F, n)
            self.full_inv = la.identity(F, n)
            return
        # complete toric basis with standard vectors to a full basis
        cols = [list(r) for r in self.toric_cols]
        chosen = []
        for j in range(n):
            cand = la.hstack(cols, _std_cols(F, n, chosen + [j]))
            if la.certified_rank(la.transpose(cand), guard) == t + len(chosen) + 1:
                chosen.append(j)
            if t + len(chosen) == n:
                break
        if t + len(chosen) != n:
            raise ValidationError("could not complete toric basis")
        self.section_cols = _std_cols(F, n, chosen)
        self.B_dim = n - t
        # full basis matrix [T | S] and its inverse for projections
        self.full_basis = la.hstack(self.toric_cols, self.section_cols)
        self.full_inv = la.mat_inverse(self.full_basis, guard)

    def _validate(self, guard):
        D = self.module
        F = D.field
        if self.t_dim:
            if not D.is_stable(self.toric_cols, guard):
                raise ValidationError("toric part is not phi-stable")
            from .slopes import newton_slopes
            prof = newton_slopes(D.submodule(self.toric_cols, guard))
            if prof.pairs != ((Fraction(1), self.t_dim),):
                raise ValidationError("toric part is not pure of slope 1")
            la.det_valuation(self.lambda_T, guard)
        if self.B_dim:
            PolarizedPhiModule(self.quotient_module(guard), self.gram_B,
                               guard=guard)

    def quotient_frobenius(self, guard: int = la.DEFAULT_GUARD):
        """Frobenius induced on D_B in the section basis."""
        D = self.module
        img = D.apply_phi(self.section_cols)
        coords = la.mat_mul(self.full_inv, img)
        return [row[:] for row in coords[self.t_dim:]]

    def quotient_module(self, guard: int = la.DEFAULT_GUARD) -> PhiModule:
        return PhiModule(self.module.field, self.quotient_frobenius(guard),
                         validate=False)

    def project_to_quotient(self, cols, guard: int = la.DEFAULT_GUARD):
        """Quotient coordinates (B_dim rows) of ambient columns."""
        coords = la.mat_mul(self.full_inv, cols)
        return [row[:] for row in coords[self.t_dim:]]


def _std_cols(field, n, idx):
    cols = []
    for j in idx:
        col = [field.zero() if i != j else field.one() for i in range(n)]
        cols.append(col)
    return [[cols[k][i] for k in range(len(idx))] for i in range(n)]
