"""Cross-level scalar conversions and unramified embeddings."""

from __future__ import annotations

from fractions import Fraction

from ..errors import PrecisionError, ValidationError
from .ring import int_valuation
from . import scalar as sc
from .scalar import Scalar
from .descriptors import UnramifiedFieldDescriptor


def scalar_coords(x: Scalar):
    """Coordinates of a K_q-scalar over the z-power basis, as Q_p-ish data:
    a list of f pairs (valuation, unit-int) with None for zero slots, plus
    the global valuation shift.  Only for unramified levels."""
    F = x.field
    assert F.e == 1
    if x.kind != sc.REG:
        return None
    p = F.p
    out = []
    for i in range(F.f):
        c = x.unit[i]
        if c == 0:
            out.append(None)
        else:
            v = int_valuation(c, p)
            out.append((x.val + v, c // p ** v))
    return out


def coords_to_qp_scalars(x: Scalar, qp: UnramifiedFieldDescriptor):
    """Decompose a K_q scalar into f scalars over Q_p (the z-coordinates)."""
    F = x.field
    assert F.e == 1 and qp.f == 1 and qp.p == F.p
    outs = []
    if x.kind == sc.ZERO:
        return [sc.sc_zero(qp) for _ in range(F.f)]
    if x.kind == sc.IZERO:
        return [sc.sc_izero(qp, x.zb) for _ in range(F.f)]
    p = F.p
    for i in range(F.f):
        c = x.unit[i]
        if c == 0:
            outs.append(sc.sc_izero(qp, x.val + x.relpi))
        else:
            v = int_valuation(c, p)
            relpi = x.relpi - v
            if relpi <= 0:
                outs.append(sc.sc_izero(qp, x.val + x.relpi))
            else:
                outs.append(Scalar(qp, sc.REG, val=x.val + v,
                                   unit=(c // p ** v % p ** qp.prec,),
                                   relpi=min(relpi, qp.prec)))
    return outs


def embed_qp(x: Scalar, target) -> Scalar:
    """Embed a Q_p-level scalar into any level over the same p."""
    F = x.field
    assert F.f == 1 and F.e == 1
    if x.kind == sc.ZERO:
        return sc.sc_zero(target)
    if x.kind == sc.IZERO:
        return sc.sc_izero(target, x.zb)
    ring = target.ring
    unit = [0] * ring.dim
    unit[0] = x.unit[0] % ring.pn
    return Scalar(target, sc.REG, val=x.val, unit=tuple(unit),
                  relpi=min(target.e * x.relpi, target.relpi_max))


def project_to_base(x: Scalar, slack: int = 4) -> Scalar:
    """Project an Eisenstein-level scalar known to lie in the base back to the
    base level; certified (the u-coordinates must vanish at precision)."""
    L = x.field
    base = L.base
    if x.kind == sc.ZERO:
        return sc.sc_zero(base)
    if x.kind == sc.IZERO:
        return sc.sc_izero(base, x.zb)
    if x.val.denominator != 1:
        raise ValidationError("fractional valuation cannot live in the base")
    e = L.e
    p = L.p
    thresh = max(x.relpi - slack * e, L.floor_relpi)
    base_vec = []
    for i in range(L.f):
        base_vec.append(x.unit[i * e + 0])
        for j in range(1, e):
            c = x.unit[i * e + j]
            if c:
                w = e * int_valuation(c, p) + j
                if w < thresh:
                    raise PrecisionError(
                        "scalar does not descend to the base at working precision")
    unit = tuple(c % p ** base.prec for c in base_vec)
    if all(c == 0 for c in unit):
        return sc.sc_izero(base, x.val + Fraction(x.relpi, e))
    v0 = min(int_valuation(c, p) for c in unit if c)
    if v0 > 0:
        unit = tuple(c // p ** v0 for c in unit)
    relp = (x.relpi // e) - v0
    if relp < base.floor_relpi:
        raise PrecisionError("projection lost all meaningful digits")
    return Scalar(base, sc.REG, val=x.val + v0, unit=unit,
                  relpi=min(relp, base.prec))


def project_to_rational_level(x: Scalar, qp: UnramifiedFieldDescriptor,
                              slack: int = 4) -> Scalar:
    """Certify that an unramified-level scalar is rational (z-coordinates
    beyond slot 0 vanish) and return it at the Q_p level."""
    F = x.field
    assert F.e == 1 and qp.f == 1
    if x.kind == sc.ZERO:
        return sc.sc_zero(qp)
    if x.kind == sc.IZERO:
        return sc.sc_izero(qp, x.zb)
    p = F.p
    thresh = max(x.relpi - slack, F.floor_relpi)
    for i in range(1, F.f):
        c = x.unit[i]
        if c:
            v = int_valuation(c, p)
            if v < thresh:
                raise PrecisionError("scalar is not rational at working precision")
    c0 = x.unit[0] % p ** qp.prec
    if c0 == 0:
        return sc.sc_izero(qp, x.val + x.relpi)
    v0 = int_valuation(c0, p)
    if v0 > 0:
        c0 //= p ** v0
    relp = x.relpi - v0
    if relp < qp.floor_relpi:
        raise PrecisionError("projection lost all meaningful digits")
    return Scalar(qp, sc.REG, val=x.val + v0, unit=(c0,),
                  relpi=min(relp, qp.prec))


class UnramifiedEmbedding:
    """K_q -> K_{q^s}: the Teichmuller generator goes to the first power of
    the big generator that is a root of the small modulus."""

    def __init__(self, small: UnramifiedFieldDescriptor,
                 big: UnramifiedFieldDescriptor):
        assert small.p == big.p and big.f % small.f == 0
        assert small.prec == big.prec
        self.small = small
        self.big = big
        ring = big.ring
        step = (big.q - 1) // (small.q - 1)
        base = ring.pow(ring.gen_z(), step)
        w = None
        cand = ring.one()
        for t in range(small.q - 1):
            if t > 0:
                cand = ring.mul(cand, base)
            acc = ring.zero()
            xp = ring.one()
            for c in small.modulus:
                acc = ring.add(acc, ring.scalar_mul(c, xp))
                xp = ring.mul(xp, cand)
            if ring.val_pi(acc) is None:
                w = cand
                break
        if w is None:
            raise ValidationError("no compatible root of the small modulus found")
        pw = [ring.one()]
        for _ in range(small.f - 1):
            pw.append(ring.mul(pw[-1], w))
        self.gen_powers = tuple(pw)

    def __call__(self, x: Scalar) -> Scalar:
        big = self.big
        if x.kind == sc.ZERO:
            return sc.sc_zero(big)
        if x.kind == sc.IZERO:
            return sc.sc_izero(big, x.zb)
        ring = big.ring
        acc = ring.zero()
        for i in range(self.small.f):
            c = x.unit[i]
            if c:
                acc = ring.add(acc, ring.scalar_mul(c, self.gen_powers[i]))
        return Scalar(big, sc.REG, val=x.val, unit=acc, relpi=min(x.relpi, big.prec))

    def pull_back(self, y: Scalar, slack: int = 4) -> Scalar:
        """Inverse on the image, certified by solving the coordinate system."""
        small, big = self.small, self.big
        if y.kind == sc.ZERO:
            return sc.sc_zero(small)
        if y.kind == sc.IZERO:
            return sc.sc_izero(small, y.zb)
        pn = big.ring.pn
        p = big.p
        # solve sum_i c_i * gen_powers[i] == unit (mod p^N) for integers c_i
        cols = [list(g) for g in self.gen_powers]
        target = list(y.unit)
        c = _solve_int_system(cols, target, p, pn)
        if c is None:
            raise PrecisionError("element does not descend along the embedding")
        unit = tuple(ci % pn for ci in c)
        resid = big.ring.sub(y.unit, _combine(big.ring, self.gen_powers, c))
        v = big.ring.val_pi(resid)
        if v is not None and v < max(y.relpi - slack, 1):
            raise PrecisionError("descent residual too large")
        return Scalar(small, sc.REG, val=y.val, unit=unit,
                      relpi=min(y.relpi, small.prec))


def _combine(ring, gens, coeffs):
    acc = ring.zero()
    for g, c in zip(gens, coeffs):
        if c:
            acc = ring.add(acc, ring.scalar_mul(c, g))
    return acc


def _solve_int_system(cols, target, p, pn):
    """Solve sum_j x_j cols[j] = target over Z/pn, unit-pivot elimination.
    The columns reduce to independent vectors mod p, so pivots are units."""
    m = len(cols[0])
    k = len(cols)
    rows = [[cols[j][i] for j in range(k)] + [target[i]] for i in range(m)]
    piv = []
    r = 0
    for c in range(k):
        sel = None
        for i in range(r, m):
            if rows[i][c] % p != 0:
                sel = i
                break
        if sel is None:
            return None
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = pow(rows[r][c], -1, pn)
        rows[r] = [(x * inv) % pn for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] % pn:
                f = rows[i][c]
                rows[i] = [(x - f * yv) % pn for x, yv in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    sol = [0] * k
    for rr, c in enumerate(piv):
        sol[c] = rows[rr][k]
    return sol
