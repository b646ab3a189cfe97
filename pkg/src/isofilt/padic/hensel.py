"""Hensel lifting and polynomial utilities over the quotient rings.

Polynomials are lists of TowerRing elements in ascending degree.  Everything
here works at the unramified level (e == 1); lifting happens against the cap
p^N of the ring and the mod-p layer is the residue field F_q.
"""

from __future__ import annotations

from .ring import TowerRing, _fq_inverse

# -- integer polynomial helpers ------------------------------------------------


def cyclotomic_int(n: int, _cache={}) -> list[int]:
    """Coefficients of the n-th cyclotomic polynomial over Z, ascending."""
    if n in _cache:
        return _cache[n]
    # (x^n - 1) / product of proper cyclotomic divisors, exact division over Z
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _int_poly_exact_div(poly, cyclotomic_int(d))
    _cache[n] = poly
    return poly


def _int_poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    num = num[:]
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1] // den[-1]
        out[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    assert all(c == 0 for c in num), "non-exact polynomial division"
    return out


# -- F_p[x] helpers (plain int coefficients) ------------------------------------


def _fp_trim(a, p):
    a = [c % p for c in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        if c:
            for j, d in enumerate(b):
                out[i + j] = (out[i + j] + c * d) % p
    return _fp_trim(out, p)


def _fp_divmod(a, b, p):
    a = _fp_trim(a, p)
    b = _fp_trim(b, p)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while a and len(a) >= len(b):
        c = (a[-1] * inv) % p
        k = len(a) - len(b)
        q[k] = c
        for j, d in enumerate(b):
            a[k + j] = (a[k + j] - c * d) % p
        a = _fp_trim(a, p)
    return q, a


def _fp_powmod(a, n, mod, p):
    r = [1]
    b = _fp_divmod(a, mod, p)[1]
    while n:
        if n & 1:
            r = _fp_divmod(_fp_mul(r, b, p), mod, p)[1]
        b = _fp_divmod(_fp_mul(b, b, p), mod, p)[1]
        n >>= 1
    return r


def _fp_sub(a, b, p):
    n = max(len(a), len(b))
    return _fp_trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p
                     for i in range(n)], p)


def fp_is_irreducible(g, p) -> bool:
    """Deterministic irreducibility test for monic g over F_p."""
    f = len(g) - 1
    if f <= 0:
        return False
    x = [0, 1]
    xq = x
    for _ in range(f):
        xq = _fp_powmod(xq, p, g, p)
    if _fp_sub(xq, x, p):
        return False  # x^(p^f) != x mod g
    # no factor of proper degree: gcd(x^(p^d) - x, g) trivial for d | f, d < f
    for d in range(1, f):
        if f % d == 0:
            xd = x
            for _ in range(d):
                xd = _fp_powmod(xd, p, g, p)
            diff = _fp_sub(xd, x, p)
            if not diff:
                return False
            if len(_fp_gcd(diff, g, p)) > 1:
                return False
    return True


def _fp_gcd(a, b, p):
    a, b = _fp_trim(a, p), _fp_trim(b, p)
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def find_unramified_modulus(p: int, f: int, prec: int) -> tuple[int, ...]:
    """Monic integral modulus for K_q: a Hensel lift of the lexicographically
    first monic irreducible degree-f factor of the (q-1)-st cyclotomic
    polynomial mod p, so the generator is a primitive (q-1)-st Teichmuller
    root and Frobenius is exactly z -> z^p."""
    if f == 1:
        return ((-1) % p ** prec, 1)
    q = p ** f
    phi_int = cyclotomic_int(q - 1)
    phi = [c % p for c in phi_int]
    from itertools import product as iproduct
    for tail in iproduct(range(p), repeat=f):
        g = list(tail) + [1]
        if not fp_is_irreducible(g, p):
            continue
        if _fp_divmod(phi, g, p)[1]:
            continue
        # lift against the (q-1)-st cyclotomic polynomial (squarefree mod p,
        # much smaller than x^(q-1) - 1)
        h = _fp_divmod(phi, g, p)[0]
        ring = TowerRing(p, prec, ((-1) % p ** prec, 1))  # plain Z/p^N
        G, _H = hensel_lift_pair(ring,
                                 [ring.from_int(c) for c in phi_int],
                                 [ring.from_int(c) for c in g],
                                 [ring.from_int(c) for c in h])
        return tuple(x[0] for x in G)
    raise RuntimeError("no irreducible factor found (impossible)")


# -- polynomials over a TowerRing (unramified level) ----------------------------


def rp_trim(ring, a):
    a = list(a)
    while a and all(c == 0 for c in a[-1]):
        a.pop()
    return a


def rp_add(ring, a, b):
    n = max(len(a), len(b))
    z = ring.zero()
    return [ring.add(a[i] if i < len(a) else z, b[i] if i < len(b) else z)
            for i in range(n)]


def rp_sub(ring, a, b):
    n = max(len(a), len(b))
    z = ring.zero()
    return [ring.sub(a[i] if i < len(a) else z, b[i] if i < len(b) else z)
            for i in range(n)]


def rp_mul(ring, a, b):
    if not a or not b:
        return []
    out = [ring.zero()] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        if any(c):
            for j, d in enumerate(b):
                if any(d):
                    out[i + j] = ring.add(out[i + j], ring.mul(c, d))
    return out


def rp_divmod_monic(ring, a, b):
    """Division by a monic b (leading coefficient literally one)."""
    a = list(a)
    nb = len(b)
    q = [ring.zero()] * max(len(a) - nb + 1, 0)
    for k in range(len(a) - nb, -1, -1):
        c = a[k + nb - 1]
        if any(c):
            q[k] = c
            for j in range(nb):
                a[k + j] = ring.sub(a[k + j], ring.mul(c, b[j]))
    return q, a[:nb - 1]


def rp_eval(ring, a, x):
    r = ring.zero()
    for c in reversed(a):
        r = ring.add(ring.mul(r, x), c)
    return r


def rp_mod_p(ring, a):
    p = ring.p
    return [tuple(c % p for c in coeff) for coeff in a]


def _rp_fq_xgcd(ring, a, b):
    """Extended gcd of polynomials over the residue field F_q (coefficients as
    ring elements reduced mod p).  Returns (gcd, s, t) with gcd monic."""
    p = ring.p

    def red(poly):
        poly = [tuple(c % p for c in coeff) for coeff in poly]
        while poly and all(c == 0 for c in poly[-1]):
            poly.pop()
        return poly

    def fq_inv(coeff):
        e = ring.e
        vec = [coeff[i * e] for i in range(ring.f)]
        inv = _fq_inverse(vec, [c % p for c in ring.modulus], p)
        out = [0] * ring.dim
        for i in range(ring.f):
            out[i * e] = inv[i]
        return tuple(out)

    def divmod_(x, y):
        x = red(x)
        y = red(y)
        inv_lead = fq_inv(y[-1])
        q = [ring.zero()] * max(len(x) - len(y) + 1, 0)
        while x and len(x) >= len(y):
            c = tuple(v % p for v in ring.mul(x[-1], inv_lead))
            k = len(x) - len(y)
            q[k] = c
            for j, d in enumerate(y):
                x[k + j] = tuple(v % p for v in ring.sub(x[k + j], ring.mul(c, d)))
            x = red(x)
        return red(q), x

    def mul_(x, y):
        return red(rp_mul(ring, x, y))

    def sub_(x, y):
        return red(rp_sub(ring, x, y))

    r0, r1 = red(a), red(b)
    s0, s1 = [ring.one()], []
    t0, t1 = [], [ring.one()]
    while r1:
        q, rem = divmod_(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, sub_(s0, mul_(q, s1))
        t0, t1 = t1, sub_(t0, mul_(q, t1))
    c = fq_inv(r0[-1])
    return ([tuple(v % p for v in ring.mul(x, c)) for x in r0],
            [tuple(v % p for v in ring.mul(x, c)) for x in s0],
            [tuple(v % p for v in ring.mul(x, c)) for x in t0])


def hensel_lift_pair(ring, F, g0, h0):
    """Lift a coprime factorization F = g0*h0 mod p to mod p^N.

    F, g0, h0 monic (leading coefficient one); returns (g, h) monic with
    F = g*h in the ring and g = g0, h = h0 mod p.  Quadratic iteration with
    Bezout update.
    """
    one = [ring.one()]
    _gcd, s, t = _rp_fq_xgcd(ring, g0, h0)
    if len(_gcd) != 1:
        raise ValueError("factors are not coprime mod p")
    g, h = list(g0), list(h0)
    k = 1
    while k < ring.prec:
        k = min(2 * k, ring.prec)
        e = rp_sub(ring, F, rp_mul(ring, g, h))
        q, r = rp_divmod_monic(ring, rp_mul(ring, s, e), h)
        g = rp_add(ring, g, rp_add(ring, rp_mul(ring, t, e), rp_mul(ring, q, g)))
        h = rp_add(ring, h, r)
        g = g[:len(g0)]
        h = h[:len(h0)]
        g[-1] = ring.one()
        h[-1] = ring.one()
        b = rp_sub(ring, rp_add(ring, rp_mul(ring, s, g), rp_mul(ring, t, h)), one)
        c, d = rp_divmod_monic(ring, rp_mul(ring, s, b), h)
        s = rp_sub(ring, s, d)
        t = rp_sub(ring, t, rp_add(ring, rp_mul(ring, t, b), rp_mul(ring, c, g)))
    return g, h


# -- integer square roots -------------------------------------------------------


def sqrt_mod_ppow(a: int, p: int, prec: int) -> int:
    """A square root of the unit a modulo p^prec; raises if none exists."""
    a %= p ** prec
    if a % p == 0:
        raise ValueError("not a unit")
    if p == 2:
        if prec <= 1:
            return 1
        if a % min(8, 2 ** prec) != 1 % min(8, 2 ** prec):
            raise ValueError("not a square in Z_2")
        x = 1
        k = 3
        while k < prec:
            # x odd, x^2 = a mod 2^k; correct the next bit
            t = (((a - x * x) >> k) & 1)
            x = (x + (t << (k - 1))) % (1 << prec)
            k += 1
        return x % (1 << prec)
    # p odd: find a root mod p by scanning (desk-scale p), then Newton
    r = None
    for c in range(1, p):
        if (c * c) % p == a % p:
            r = c
            break
    if r is None:
        raise ValueError("not a square mod p")
    x = r
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        pk = p ** k
        inv = pow(2 * x, -1, pk)
        x = (x - (x * x - a) * inv) % pk
    return x
