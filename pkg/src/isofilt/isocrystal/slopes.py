"""Newton slopes, isoclinic decomposition, slope factorization.

newton_slopes linearizes phi (matrix of phi^f), takes the characteristic
polynomial, and reads root valuations off the lower Newton polygon; slopes of
the module are those divided by f.  The characteristic polynomial of the
linearization always has Q_p coefficients (sigma conjugates B into itself),
which is certified and exploited: slope factors are computed over Q_p.

Slope factors are split off one at a time by a Hensel lift in the tame ring
Z_p[t]/(t^b - p) that makes the minimal root valuation integral: after the
substitution lambda = t^a * mu the wanted factor is the unit-root part, its
mod-pi reduction is coprime to the rest, and plain quadratic Hensel applies.
Kernels of the factors evaluated at the linearization give the isoclinic
pieces; these are phi-stable because the factors have sigma-fixed
coefficients.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import PrecisionError, ValidationError
from ..padic import linalg as la
from ..padic import scalar as sc
from ..padic.descriptors import UnramifiedFieldDescriptor, EisensteinExtensionDescriptor
from ..padic.convert import project_to_rational_level, project_to_base, embed_qp
from .module import PhiModule


class SlopeProfile:
    """Multiset of slopes with multiplicities, plus Newton polygon vertices."""

    def __init__(self, pairs, vertices):
        self.pairs = tuple(sorted(pairs))            # ((slope, mult), ...)
        self.vertices = tuple(vertices)

    def __eq__(self, other):
        return isinstance(other, SlopeProfile) and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __repr__(self):
        return " ".join(f"{s} x{m}" for s, m in self.pairs)

    @property
    def dim(self):
        return sum(m for _, m in self.pairs)

    def total(self) -> Fraction:
        return sum((Fraction(s) * m for s, m in self.pairs), Fraction(0))

    def multiset(self):
        out = []
        for s, m in self.pairs:
            out.extend([s] * m)
        return tuple(out)

    def is_sub_multiset_of(self, other) -> bool:
        from collections import Counter
        a, b = Counter(self.multiset()), Counter(other.multiset())
        return all(b[k] >= v for k, v in a.items())


def lower_newton_polygon(points, uncertain=None):
    """Lower convex hull of exact points (i, v); verifies that every
    uncertain point (i, lower-bound) lies on or above the hull.

    Returns the hull vertices left to right.  Raises PrecisionError when an
    uncertain point could cut below the hull.
    """
    pts = sorted(points)
    hull = []
    for x, y in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep hull lower-convex: drop middle point if not strictly below
            if (y2 - y1) * (x - x1) >= (y - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append((x, y))
    for x, b in (uncertain or []):
        hv = _hull_value_at(hull, x)
        if hv is None:
            raise PrecisionError(
                f"Newton polygon endpoint at {x} not certified")
        if b < hv:
            raise PrecisionError(
                f"Newton polygon vertex ambiguous: coefficient {x} only known "
                f"to vanish to valuation {b} < hull {hv}")
    return hull


def _hull_value_at(hull, x):
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= x <= x2:
            return y1 + Fraction(y2 - y1, 1) * Fraction(x - x1, x2 - x1)
    return None


def root_valuations_from_hull(hull):
    """[(root valuation, multiplicity)] from hull vertices, ascending order
    of valuation (the segment nearest the leading coefficient carries the
    smallest root valuation)."""
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        rv = Fraction(y1 - y2, x2 - x1)
        out.append((rv, x2 - x1))
    out.sort()
    return out


def charpoly_points(coeffs):
    """Exact and uncertain (i, v) data from a scalar coefficient list."""
    exact, uncertain = [], []
    for i, c in enumerate(coeffs):
        if c.kind == sc.REG:
            exact.append((i, c.val))
        elif c.kind == sc.IZERO:
            uncertain.append((i, c.zb))
        # exact zeros never constrain the hull
    return exact, uncertain


def newton_slopes(D: PhiModule, guard: int = la.DEFAULT_GUARD) -> SlopeProfile:
    B = D.linearization()
    chi = la.charpoly(B)
    exact, uncertain = charpoly_points(chi)
    if not exact or exact[-1][0] != D.n:
        raise PrecisionError("leading coefficient not certified")
    hull = lower_newton_polygon(exact, uncertain)
    if hull[0][0] != 0:
        # det B is zero-ish: contradicts invertibility of phi
        raise PrecisionError("constant coefficient of the linearization "
                             "not certified nonzero")
    rv = root_valuations_from_hull(hull)
    f = D.field.f
    pairs = [(v / f, m) for v, m in rv]
    prof = SlopeProfile(pairs, hull)
    if prof.dim != D.n:
        raise ValidationError("slope multiplicities do not sum to the dimension")
    if prof.total() != D.t_N(guard):
        raise ValidationError("slope sum does not match det valuation")
    return prof


# -- slope factorization over Q_p ------------------------------------------------


def _rational_charpoly(D: PhiModule, guard):
    """Characteristic polynomial of the linearization, certified rational."""
    qp = _qp_level(D.field)
    chi = la.charpoly(D.linearization())
    return [project_to_rational_level(c, qp) for c in chi], qp


def _qp_level(field, _cache={}):
    key = (field.p, field.prec)
    if key not in _cache:
        _cache[key] = UnramifiedFieldDescriptor.create(field.p, 1, field.prec)
    return _cache[key]


def slope_factors(D: PhiModule, guard: int = la.DEFAULT_GUARD):
    """Monic factors of the linearization's charpoly over Q_p, one per root
    valuation, as (root_valuation, coefficient list at the Q_p level)."""
    chi, qp = _rational_charpoly(D, guard)
    return _split_by_valuation(chi, qp, guard)


def _split_by_valuation(chi, qp, guard):
    exact, uncertain = charpoly_points(chi)
    hull = lower_newton_polygon(exact, uncertain)
    rv = root_valuations_from_hull(hull)
    if len(rv) == 1:
        return [(rv[0][0], chi)]
    s0, m0 = rv[0]  # minimal root valuation and multiplicity
    b = s0.denominator
    a = s0.numerator
    n = len(chi) - 1
    if b == 1:
        lift = lambda x: x
        proj = lambda x: x
        tval = lambda j: _qp_tpow(qp, a * j)
        tvali = lambda j: _qp_tpow(qp, -a * j)
    else:
        # tame Kummer ring t^b = p; no automorphism table needed here
        T = EisensteinExtensionDescriptor(
            qp, (-qp.p,) + (0,) * (b - 1) + (1,), validate=False)
        lift = T.lift
        proj = project_to_base
        tval = lambda j: _t_power(T, a * j)
        tvali = lambda j: _t_power(T, -a * j)

    # psi(mu) = chi(t^a mu) / t^(a n): coefficient i gets t^(a(i-n))
    psi = []
    for i, c in enumerate(chi):
        ci = lift(c)
        psi.append(sc.sc_mul(ci, tvali(n - i)))
    # mod pi, psi = mu^(n-m0) * (unit-root part); Hensel split
    i1 = n - m0
    g0, h0 = _residual_split(psi, i1)
    G, H = _hensel_split_scalar(psi, g0, h0, guard)
    # minimal-valuation factor: g(lambda) = t^(a m0) G(lambda / t^a)
    fac0 = [proj(sc.sc_mul(G[j], tval(m0 - j))) for j in range(len(G))]
    rest = [proj(sc.sc_mul(H[j], tval(i1 - j))) for j in range(len(H))]
    out = [(s0, fac0)]
    out.extend(_split_by_valuation(rest, qp, guard))
    return out


def _qp_tpow(qp, k):
    return qp.scalar(Fraction(qp.p) ** k)


def _t_power(T, k):
    x = T.uniformizer()
    if k >= 0:
        return sc.sc_pow(x, k)
    return sc.sc_pow(sc.sc_inv(x), -k)


def _residual_split(psi, i1):
    """Mod-pi factorization mu^i1 * rho(mu) as integer polynomials mod p."""
    field = None
    for c in psi:
        if c.kind == sc.REG:
            field = c.field
            break
    p = field.p
    n = len(psi) - 1
    rho = []
    for j in range(i1, n + 1):
        c = psi[j]
        if c.kind != sc.REG or c.val > 0:
            rho.append(0)
        else:
            # residue of the unit: constant coordinate mod p
            rho.append(c.unit[0] % p if c.val == 0 else 0)
    h0 = [0] * i1 + [1]          # mu^i1
    g0 = rho                      # unit-root part, degree m0, rho[0] != 0
    return g0, h0


def _hensel_split_scalar(F_poly, g0_int, h0_int, guard):
    """Quadratic Hensel over the scalar level of F_poly's coefficients."""
    field = None
    for c in F_poly:
        if c.kind == sc.REG:
            field = c.field
            break
    p = field.p

    def emb(ints):
        return [field.scalar(v) for v in ints]

    # Bezout over F_p[x]
    s_int, t_int = _fp_bezout(g0_int, h0_int, p)
    g, h = emb(g0_int), emb(h0_int)
    s, t = emb(s_int), emb(t_int)
    one = [field.one()]
    total = field.relpi_max
    k = 1
    while k < total:
        k = min(2 * k, total)
        e = _sp_sub(F_poly, _sp_mul(g, h))
        q, r = _sp_divmod_monic(_sp_mul(s, e), h, field)
        g = _sp_add(g, _sp_add(_sp_mul(t, e), _sp_mul(q, g)))
        h = _sp_add(h, r)
        g = _sp_fit(g, len(g0_int), field)
        h = _sp_fit(h, len(h0_int), field)
        b = _sp_sub(_sp_add(_sp_mul(s, g), _sp_mul(t, h)), one)
        c2, d2 = _sp_divmod_monic(_sp_mul(s, b), h, field)
        s = _sp_sub(s, d2)
        t = _sp_sub(t, _sp_add(_sp_mul(t, b), _sp_mul(c2, g)))
    # the iteration certifies the factors modulo pi^total only; anything the
    # plain arithmetic claims beyond that is uncontrolled
    g = [_cap_abs(c, total) for c in g]
    h = [_cap_abs(c, total) for c in h]
    return g, h


def _cap_abs(x, total_pi):
    if x.kind != sc.REG:
        if x.kind == sc.IZERO and x.zb * x.field.e > total_pi:
            return sc.sc_izero(x.field, Fraction(total_pi, x.field.e))
        return x
    e = x.field.e
    cap = total_pi - int(x.val * e)
    if cap <= 0:
        return sc.sc_izero(x.field, Fraction(total_pi, e))
    if x.relpi <= cap:
        return x
    return sc.Scalar(x.field, sc.REG, val=x.val, unit=x.unit,
                     relpi=cap)


def _fp_bezout(g, h, p):
    from ..padic.hensel import _fp_trim, _fp_mul, _fp_divmod, _fp_sub

    r0, r1 = _fp_trim(list(g), p), _fp_trim(list(h), p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, rem = _fp_divmod(r0, r1, p)
        r0, r1 = r1, rem
        s0, s1 = s1, _fp_sub(s0, _fp_mul(q, s1, p), p)
        t0, t1 = t1, _fp_sub(t0, _fp_mul(q, t1, p), p)
    inv = pow(r0[0], -1, p)
    return [c * inv % p for c in s0], [c * inv % p for c in t0]


# polynomial helpers over scalars (ascending lists)

def _sp_add(a, b):
    n = max(len(a), len(b))
    field = (a or b)[0].field
    z = sc.sc_zero(field)
    return [sc.sc_add(a[i] if i < len(a) else z, b[i] if i < len(b) else z)
            for i in range(n)]


def _sp_sub(a, b):
    return _sp_add(a, [sc.sc_neg(x) for x in b])


def _sp_mul(a, b):
    if not a or not b:
        return []
    field = a[0].field
    out = [sc.sc_zero(field)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.kind != sc.ZERO:
            for j, y in enumerate(b):
                out[i + j] = sc.sc_add(out[i + j], sc.sc_mul(x, y))
    return out


def _sp_divmod_monic(a, b, field):
    a = list(a)
    nb = len(b)
    q = [sc.sc_zero(field)] * max(len(a) - nb + 1, 0)
    for k in range(len(a) - nb, -1, -1):
        c = a[k + nb - 1]
        if c.kind != sc.ZERO:
            q[k] = c
            for j in range(nb):
                a[k + j] = sc.sc_sub(a[k + j], sc.sc_mul(c, b[j]))
    return q, a[:nb - 1]


def _sp_fit(a, length, field):
    a = list(a[:length])
    while len(a) < length:
        a.append(sc.sc_zero(field))
    a[-1] = field.one()
    return a


def isoclinic_decompose(D: PhiModule, guard: int = la.DEFAULT_GUARD):
    """[(slope, basis columns of the slope component)], phi-stable pieces
    spanning D, one per distinct slope."""
    prof = newton_slopes(D, guard)
    if len(prof.pairs) == 1:
        return [(prof.pairs[0][0], la.identity(D.field, D.n))]
    factors = slope_factors(D, guard)
    B = D.linearization()
    out = []
    for rv, fac in factors:
        coeffs = [embed_qp(c, D.field) for c in fac]
        M = la.poly_eval_matrix(coeffs, B)
        ker = la.kernel_basis(M, guard)
        if not ker:
            raise PrecisionError("slope factor has trivial kernel")
        cols = [[vec[i] for vec in ker] for i in range(D.n)]
        slope = rv / D.field.f
        if not D.is_stable(cols, guard):
            raise PrecisionError("slope component not certified phi-stable")
        out.append((slope, cols))
    total = sum(len(c[0]) for _, c in out)
    if total != D.n:
        raise PrecisionError("slope components do not span")
    return sorted(out, key=lambda t: t[0])
