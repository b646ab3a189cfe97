"""Sub-phi-module enumeration and sampling.

Exact mode lists all 2^k sums of the isoclinic components and requires every
component to be simple (dimension equal to the denominator of its slope);
that makes the enumeration complete at the working level, since a submodule
meets each simple component in 0 or everything.

Sampled mode adds pseudo-random phi-stable subspaces obtained as kernels and
images of random elements of the endomorphism algebra, which is computed by
solving U A = A sigma(U) coordinatewise over Q_p.  Every sampled candidate is
re-checked for phi-stability before being returned.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from ..errors import MultiplicityError, PrecisionError
from ..padic import linalg as la
from ..padic import scalar as sc
from ..padic.convert import coords_to_qp_scalars
from ..padic.descriptors import UnramifiedFieldDescriptor
from ..errors import PrecisionError as _PrecisionError
from .module import PhiModule
from .slopes import isoclinic_decompose, _qp_level


def endomorphism_algebra(D: PhiModule, guard: int = la.DEFAULT_GUARD):
    """Q_p-basis of {U : U A = A sigma(U)}, as matrices over the field."""
    field = D.field
    n, f = D.n, field.f
    qp = _qp_level(field)
    gen = field.gen()
    gens = [sc.sc_pow(gen, k) for k in range(f)]
    unknowns = []  # (i, j, k) -> basis matrix E_ij * z^k
    images = []
    for i in range(n):
        for j in range(n):
            for k in range(f):
                U = la.zeros(field, n, n)
                U[i][j] = gens[k]
                V = la.mat_sub(la.mat_mul(U, D.A),
                               la.mat_mul(D.A, la.mat_frobenius(U)))
                col = []
                for a in range(n):
                    for b in range(n):
                        col.extend(coords_to_qp_scalars(V[a][b], qp))
                unknowns.append((i, j, k))
                images.append(col)
    big = [[images[c][r] for c in range(len(images))] for r in range(len(images[0]))]
    ker = la.kernel_basis(big, guard)
    basis = []
    for vec in ker:
        U = la.zeros(field, n, n)
        for (i, j, k), coeff in zip(unknowns, vec):
            if coeff.kind != sc.REG:
                continue
            term = sc.sc_mul(_lift_qp(field, coeff), gens[k])
            U[i][j] = sc.sc_add(U[i][j], term)
        basis.append(U)
    return basis


def _lift_qp(field, x):
    from ..padic.convert import embed_qp
    return embed_qp(x, field)


class SubmoduleSet:
    def __init__(self, components, subspaces, mode, seed=None):
        self.components = components  # [(slope, basis_cols)]
        self.subspaces = subspaces    # [basis_cols] including 0 and D
        self.mode = mode
        self.seed = seed


def exact_submodules(D: PhiModule, guard: int = la.DEFAULT_GUARD) -> SubmoduleSet:
    comps = isoclinic_decompose(D, guard)
    for slope, cols in comps:
        b = slope.denominator
        if len(cols[0]) != b:
            raise MultiplicityError(
                f"slope {slope} component has dimension {len(cols[0])} != {b}; "
                "component is not simple at this level, use sampled mode")
    subs = []
    k = len(comps)
    for r in range(k + 1):
        for pick in combinations(range(k), r):
            cols = _concat_cols(D, [comps[i][1] for i in pick])
            subs.append(cols)
    return SubmoduleSet(comps, subs, "exact")


def sampled_submodules(D: PhiModule, seed: int, budget: int,
                       guard: int = la.DEFAULT_GUARD) -> SubmoduleSet:
    comps = isoclinic_decompose(D, guard)
    rng = random.Random(seed)
    subs = []
    seen = set()

    def push(cols):
        key = _canonical_key(cols, guard)
        if key in seen:
            return False
        seen.add(key)
        subs.append(cols)
        return True

    k = len(comps)
    for r in range(k + 1):
        for pick in combinations(range(k), r):
            push(_concat_cols(D, [comps[i][1] for i in pick]))
    endo = endomorphism_algebra(D, guard)
    tries = 0
    while tries < budget:
        tries += 1
        U = _random_combination(D.field, endo, rng)
        cands = [_kernel_cols(D, U, guard), _image_cols(D, U, guard)]
        # right-multiple of a random vector under the algebra, closed under phi
        w = [[D.field.scalar(rng.randrange(-9, 10))] for _ in range(D.n)]
        if U is not None:
            w = la.mat_mul(U, w)
        cands.append(phi_span(D, w, guard))
        for cand in cands:
            if cand is None:
                continue
            d = len(cand[0]) if cand and cand[0] else 0
            if d in (0, D.n):
                continue
            if D.is_stable(cand, guard):
                push(cand)
    return SubmoduleSet(comps, subs, "sampled", seed)


def phi_span(D: PhiModule, cols, guard: int = la.DEFAULT_GUARD):
    """Smallest phi-stable subspace containing the given columns."""
    try:
        cur = la.column_space_basis(cols, guard)
        for _ in range(D.n + 1):
            r = len(cur[0]) if cur and cur[0] else 0
            if r == 0:
                return cur
            nxt = la.column_space_basis(la.hstack(cur, D.apply_phi(cur)), guard)
            if len(nxt[0]) == r:
                return nxt
            cur = nxt
    except PrecisionError:
        return None
    return cur


def submodules(D: PhiModule, mode: str = "exact", budget: int = 0,
               seed: int = 0, guard: int = la.DEFAULT_GUARD) -> SubmoduleSet:
    if mode == "exact":
        return exact_submodules(D, guard)
    if mode == "sampled":
        return sampled_submodules(D, seed, budget, guard)
    raise ValueError(f"unknown mode {mode!r}")


def _concat_cols(D, col_list):
    field = D.field
    n = D.n
    if not col_list:
        return [[] for _ in range(n)]
    out = [[] for _ in range(n)]
    for cols in col_list:
        for i in range(n):
            out[i].extend(cols[i])
    return out


def _random_combination(field, basis, rng):
    U = None
    for M in basis:
        c = rng.randrange(-3, 4)
        if c == 0:
            continue
        term = la.mat_scalar(field.scalar(c), M)
        U = term if U is None else la.mat_add(U, term)
    if U is None and basis:
        U = basis[rng.randrange(len(basis))]
    return U


def _kernel_cols(D, U, guard):
    if U is None:
        return None
    try:
        ker = la.kernel_basis(U, guard)
    except PrecisionError:
        return None
    if not ker:
        return [[] for _ in range(D.n)]
    return [[v[i] for v in ker] for i in range(D.n)]


def _image_cols(D, U, guard):
    if U is None:
        return None
    try:
        return la.column_space_basis(U, guard)
    except PrecisionError:
        return None


class SplitReport:
    """Outcome of ensure_split: the (possibly base-changed) module, the
    unramified degree reached, whether every isoclinic component is realized
    as explicit simple summands of dimension equal to its slope denominator,
    and those summands when found.  Whether a level is large enough is a
    per-instance fact, and for some unit-root modules no finite level works
    at all (the linearization can have eigenvalues of infinite multiplicative
    order, e.g. [[0,1],[1,1]] over Q_2, which splits only over the
    algebraically closed residue level) -- the report records the failure
    rather than pretending otherwise."""

    def __init__(self, module, f, split, summands):
        self.module = module
        self.f = f
        self.split = split
        self.summands = summands  # [(slope, [basis_cols of each simple])]

    def multiplicities(self):
        return [(s, len(parts)) for s, parts in self.summands]


def ensure_split(D: PhiModule, max_factor: int = 6, seed: int = 0,
                 guard: int = la.DEFAULT_GUARD) -> SplitReport:
    """Try unramified levels f, 2f, ..., max_factor*f until every isoclinic
    component decomposes into explicit simple summands of dimension equal to
    the denominator of its slope; the report says which level was reached and
    whether it sufficed."""
    from ..padic.convert import UnramifiedEmbedding
    field = D.field
    last = D
    for k in range(1, max_factor + 1):
        if field.p ** (field.f * k) > 512:
            break  # desk-scale residue fields only
        if k == 1:
            cur = D
        else:
            bigger = UnramifiedFieldDescriptor.create(field.p, field.f * k,
                                                      field.prec)
            emb = UnramifiedEmbedding(field, bigger)
            cur = PhiModule(bigger, la.mat_map(D.A, emb), validate=False)
        out = _try_split(cur, seed, guard)
        if out is not None:
            return SplitReport(cur, cur.field.f, True, out)
        last = cur
    return SplitReport(last, last.field.f, False, [])


def _try_split(D, seed, guard):
    import random as _random
    rng = _random.Random(seed)
    comps = isoclinic_decompose(D, guard)
    out = []
    for slope, cols in comps:
        b = slope.denominator
        dim = len(cols[0])
        if dim % b:
            return None
        want = dim // b
        found = _split_by_random_spans(D, cols, b, want, rng, guard)
        if found is None and b == 1:
            found = _split_by_residue_roots(D, cols, slope, guard)
        if found is None and b == 1:
            found = _split_by_norm_equation(D, cols, slope, guard)
        if found is None:
            return None
        out.append((slope, found))
    return out


def _split_by_norm_equation(D, cols, slope, guard):
    """Split an integer-slope component whose linearization is a certified
    scalar p^(f s) * lam: solve Norm(c) = lam for a unit c of K_q and take
    the solution space of the semilinear system phi(x) = p^s c x, which is
    spanned over Q_p by vectors generating the simple lines."""
    field = D.field
    sub = D.submodule(cols, guard)
    f = field.f
    s = int(slope) * f
    B = la.mat_scalar(field.scalar(Fraction(1, field.p ** s)),
                      sub.linearization())
    dim = len(cols[0])
    lam = B[0][0]
    if lam.kind != sc.REG or lam.val != 0:
        return None
    thr = Fraction(field.prec, 2)
    scal = la.mat_scalar(lam, la.identity(field, dim))
    if la.zero_status(la.mat_sub(B, scal), thr) != "zero":
        return None
    c = _solve_norm(field, lam)
    if c is None:
        return None
    cp = sc.sc_mul(c, field.scalar(field.p ** int(slope)))
    # solutions of A sigma(x) = cp * x over Q_p
    from ..padic.convert import coords_to_qp_scalars
    from .slopes import _qp_level
    qp = _qp_level(field)
    A = sub.A
    colsys = []
    gens = [sc.sc_pow(field.gen(), k) for k in range(f)]
    for j in range(dim):
        for k in range(f):
            x = [[sc.sc_zero(field)] for _ in range(dim)]
            x[j][0] = gens[k]
            img = la.mat_sub(sub.apply_phi(x),
                             la.mat_scalar(cp, x))
            vec = []
            for i in range(dim):
                vec.extend(coords_to_qp_scalars(img[i][0], qp))
            colsys.append(vec)
    big = [[colsys[cc][r] for cc in range(len(colsys))]
           for r in range(len(colsys[0]))]
    try:
        ker = la.kernel_basis(big, guard)
    except PrecisionError:
        return None
    if not ker:
        return None
    from ..padic.convert import embed_qp
    lines = []
    span = [[] for _ in range(D.n)]
    for vec in ker:
        x = [[sc.sc_zero(field)] for _ in range(dim)]
        for idx, coeff in enumerate(vec):
            if coeff.kind != sc.REG:
                continue
            j, k = divmod(idx, f)
            t = sc.sc_mul(embed_qp(coeff, field), gens[k])
            x[j][0] = sc.sc_add(x[j][0], t)
        amb = [[None] for _ in range(D.n)]
        for i in range(D.n):
            acc = None
            for j in range(dim):
                t = sc.sc_mul(cols[i][j], x[j][0])
                acc = t if acc is None else sc.sc_add(acc, t)
            amb[i][0] = acc
        if all(v[0].kind != sc.REG for v in amb):
            continue
        joined = la.hstack(span, amb) if span[0] else amb
        try:
            if la.certified_rank(la.transpose(joined), guard) != \
               len(span[0]) + 1:
                continue
        except PrecisionError:
            continue
        if not D.is_stable(amb, guard):
            continue
        lines.append(amb)
        span = joined
        if len(lines) == dim:
            break
    if len(lines) != dim:
        return None
    return lines


def _solve_norm(field, lam, tries: int = None):
    """A unit c of K_q with Norm_{K_q/Q_p}(c) = lam (a unit of Q_p embedded
    diagonally); digit-by-digit lift, None if the residue norm misses."""
    f = field.f
    p = field.p
    if f == 1:
        return lam

    def norm(x):
        out = x
        y = x
        for _ in range(f - 1):
            y = sc.sc_frobenius(y)
            out = sc.sc_mul(out, y)
        return out

    # residue solution by Teichmuller scan
    c = None
    z = field.gen()
    cand = field.one()
    for t in range(field.q - 1):
        if t:
            cand = sc.sc_mul(cand, z)
        d = sc.sc_sub(norm(cand), lam)
        if d.kind != sc.REG or d.val >= 1:
            c = cand
            break
    if c is None:
        return None
    # direction with unit trace
    w = None
    zp = field.one()
    for _ in range(f):
        tr = zp
        y = zp
        for _ in range(f - 1):
            y = sc.sc_frobenius(y)
            tr = sc.sc_add(tr, y)
        if tr.kind == sc.REG and tr.val == 0:
            w = zp
            tr_w = tr
            break
        zp = sc.sc_mul(zp, z)
    if w is None:
        return None
    pk = Fraction(1)
    for _ in range(field.prec + 1):
        d = sc.sc_sub(sc.sc_div(lam, norm(c)), field.one())
        if d.kind != sc.REG:
            return c
        k = d.val
        if k >= field.prec:
            return c
        # multiply by 1 + u with Tr(u) matching the defect direction
        coeff = sc.sc_div(d, tr_w)
        u = sc.sc_mul(coeff, w)
        c = sc.sc_mul(c, sc.sc_add(field.one(), u))
    return c


def _split_by_random_spans(D, cols, b, want, rng, guard):
    """Collect simple summands as phi-spans of random vectors; succeeds when
    the component is isotypic (copies of one simple)."""
    field = D.field
    dim = len(cols[0])
    found = []
    span_cols = [[] for _ in range(D.n)]
    tries = 0
    while len(found) < want:
        tries += 1
        if tries > 8 * want + 8:
            return None
        coeffs = [field.scalar(rng.randrange(-9, 10)) for _ in range(dim)]
        v = [[None] for _ in range(D.n)]
        for i in range(D.n):
            acc = None
            for j in range(dim):
                t = sc.sc_mul(cols[i][j], coeffs[j])
                acc = t if acc is None else sc.sc_add(acc, t)
            v[i][0] = acc
        S = phi_span(D, v, guard)
        if S is None or not S[0] or len(S[0]) != b:
            continue
        joined = la.hstack(span_cols, S) if span_cols[0] else S
        try:
            if la.certified_rank(la.transpose(joined), guard) != \
               (len(span_cols[0]) + b):
                continue
        except PrecisionError:
            continue
        found.append(S)
        span_cols = joined
    return found


def _split_by_residue_roots(D, cols, slope, guard):
    """Split an integer-slope component by Hensel-lifting the (distinct)
    residue roots of the characteristic polynomial of the normalized
    linearization and taking eigen-kernels; None when the residue roots do
    not separate at this level."""
    field = D.field
    sub = D.submodule(cols, guard)
    B = sub.linearization()
    s = int(slope) * field.f
    scale = field.scalar(Fraction(1, field.p ** s))
    B = la.mat_scalar(scale, B)
    chi = la.charpoly(B)
    dim = len(cols[0])
    roots = _residue_roots(chi, field)
    if roots is None or len(roots) != dim:
        return None
    out = []
    for lam in roots:
        lam = _newton_root(chi, lam, field)
        M = [[sc.sc_sub(B[i][j], lam) if i == j else B[i][j]
              for j in range(dim)] for i in range(dim)]
        ker = la.kernel_basis(M, guard)
        if len(ker) != 1:
            return None
        vec = [[None] for _ in range(D.n)]
        for i in range(D.n):
            acc = None
            for j in range(dim):
                t = sc.sc_mul(cols[i][j], ker[0][j])
                acc = t if acc is None else sc.sc_add(acc, t)
            vec[i][0] = acc
        S = phi_span(D, vec, guard)
        if S is None or not S[0] or len(S[0]) != 1:
            return None
        out.append(S)
    return out


def _residue_roots(chi, field):
    """Distinct residue-field roots of a unit-content scalar polynomial,
    as exact Teichmuller-digit representatives; None if any multiplicity."""
    p = field.p
    ring = field.ring
    reps = [ring.zero()]
    z = ring.gen_z()
    cur = ring.one()
    for _ in range(field.q - 1):
        reps.append(cur)
        cur = ring.mul(cur, z)
    roots = []
    seen = set()
    for rep_elem in reps:
        acc = ring.zero()
        for c in reversed(chi):
            acc = ring.mul(acc, rep_elem)
            if c.kind == sc.REG and c.val >= 0:
                shift = ring.shift_up(c.unit, int(c.val) * field.e)
                acc = ring.add(acc, shift)
            elif c.kind == sc.REG:
                return None  # non-integral coefficient: not unit content
        if all(x % p == 0 for x in acc):
            key = tuple(x % p for x in rep_elem)
            if key in seen:
                return None
            seen.add(key)
            roots.append(rep_elem)
    out = []
    for r in roots:
        out.append(sc.Scalar(field, sc.REG, val=Fraction(0), unit=r,
                             relpi=field.relpi_max)
                   if any(r) else sc.sc_zero(field))
    return out


def _newton_root(chi, x0, field):
    """Lift a simple residue root of chi to working precision."""
    def ev(poly, x):
        acc = sc.sc_zero(field)
        for c in reversed(poly):
            acc = sc.sc_add(sc.sc_mul(acc, x), c)
        return acc

    dchi = [sc.sc_mul(field.scalar(i), chi[i]) for i in range(1, len(chi))]
    x = x0
    for _ in range(field.prec.bit_length() + 2):
        fx = ev(chi, x)
        if fx.kind != sc.REG:
            break
        x = sc.sc_sub(x, sc.sc_div(fx, ev(dchi, x)))
    return x


def _canonical_key(cols, guard):
    if not cols or not cols[0]:
        return ("dim", 0)
    ech, _, _ = la.certified_row_reduce(la.transpose(cols), guard)
    key = []
    for row in ech:
        for x in row:
            if x.kind == sc.REG:
                key.append((str(x.val), tuple(c % x.field.p ** 8 for c in x.unit)))
            else:
                key.append(("z",))
    return tuple(key)
