"""Isotypic decomposition over unramified p-adic fields, exact eigenvalue
multiplicities of finite-order matrices, and perturbation witnesses.

The inertia group acts transitively on primitive p-power roots of unity and
an unramified Frobenius acts by q on the prime-to-p ones, so the Galois
orbits of characters over K_q are cut out by the multiplier subgroup
Gamma = (Z/p^k)^* x <q mod e'> of (Z/e)^*.  Summing the central idempotents
over such an orbit collapses all p-power cyclotomic contributions to Mobius
integers and leaves Gauss periods of prime-to-p roots, which live in K_q by
construction; the projectors therefore evaluate exactly at the working level
and no ramified extension is ever required.

Per-eigenvalue multiplicities of a finite-order matrix are kernel dimensions
of the K_q-irreducible cyclotomic factors evaluated at the matrix; within one
Galois orbit the eigenvalue multiplicities agree, so kernel dimension divided
by orbit length is the per-eigenvalue count.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from ..errors import (ValidationError, FieldIncompatibilityError,
                      NotFiniteOrderError, InternalContradictionError)
from ..padic import linalg as la
from ..padic import scalar as sc
from ..padic.convert import UnramifiedEmbedding
from ..padic.descriptors import UnramifiedFieldDescriptor
from ..padic.hensel import cyclotomic_int
from .core import FiniteGroup, GroupRepresentation
from .characters import CharacterTable


def euler_phi(n: int) -> int:
    out = 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out *= p - 1
            m //= p
            while m % p == 0:
                out *= p
                m //= p
        p += 1
    if m > 1:
        out *= m - 1
    return out


def _v_p(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def split_p_part(d: int, p: int) -> tuple[int, int]:
    """d = p^k * d' -> (p^k, d')."""
    k = _v_p(d, p)
    return p ** k, d // p ** k


def galois_multipliers(e: int, p: int, frob: int) -> list[int]:
    """The subgroup of (Z/e)^* generated by the inertia action (everything on
    the p-part) and x -> x^frob on the prime-to-p part, as a sorted list."""
    pk, ep = split_p_part(e, p)
    group = set()
    # CRT enumeration
    units_p = [u for u in range(pk) if gcd(u, pk) == 1] if pk > 1 else [0]
    qs = []
    t = 1 % ep if ep > 1 else 0
    seen = set()
    while t not in seen:
        seen.add(t)
        qs.append(t)
        t = (t * frob) % ep if ep > 1 else 0
    for u in units_p:
        for y in qs:
            a = _crt(u, pk, y, ep)
            group.add(a % e if e > 1 else 0)
    return sorted(group)


def _crt(a, m, b, n):
    if m == 1:
        return b % n if n > 1 else 0
    if n == 1:
        return a % m
    inv = pow(m, -1, n)
    return (a + m * ((b - a) * inv % n)) % (m * n)


def character_orbits(ct: CharacterTable, field) -> list[tuple[int, ...]]:
    """Partition of the irreducible characters into Galois orbits over the
    field (an unramified level)."""
    e = ct.e
    mults = galois_multipliers(e, field.p, field.q % e if e > 1 else 1)
    seen = set()
    orbits = []
    for chi in range(ct.k):
        if chi in seen:
            continue
        orb = set()
        stack = [chi]
        while stack:
            x = stack.pop()
            if x in orb:
                continue
            orb.add(x)
            for a in mults:
                if e == 1 or gcd(a, e) == 1:
                    y = ct.twist(x, a if e > 1 else 1)
                    if y not in orb:
                        stack.append(y)
        orbits.append(tuple(sorted(orb)))
        seen |= orb
    return orbits


def _mobius_prime_power(d0: int) -> int:
    if d0 == 1:
        return 1
    # d0 = p^j
    p = 2
    while d0 % p:
        p += 1
    return -1 if d0 == p else 0


def teichmuller_root(field, d: int):
    """Primitive d-th root of unity at an unramified level; raises
    FieldIncompatibilityError off the prime-to-p case."""
    if d % field.p == 0:
        raise FieldIncompatibilityError(
            f"a primitive {d}-th root of unity has p-power order and lives in "
            "no unramified extension")
    if (field.q - 1) % d != 0:
        raise FieldIncompatibilityError(
            f"no {d}-th root of unity at level f={field.f}")
    return field.teichmuller(d)


_EMBED_CACHE: dict = {}


def _embedding_for(field, dprime: int):
    """(big field, embedding) with dprime | q_big - 1."""
    s = 1
    while (field.q ** s - 1) % dprime != 0:
        s += 1
        if s > 64:
            raise FieldIncompatibilityError("runaway unramified degree")
    if s == 1:
        return field, None
    key = (field.p, field.f, field.prec, s)
    if key not in _EMBED_CACHE:
        big = UnramifiedFieldDescriptor.create(field.p, field.f * s, field.prec)
        _EMBED_CACHE[key] = (big, UnramifiedEmbedding(field, big))
    return _EMBED_CACHE[key]


def gauss_period(field, dprime: int, exps) -> "sc.Scalar":
    """sum of zeta_{d'}^y over the given exponent set, evaluated in the field
    (via a bigger unramified level and certified descent when needed)."""
    if dprime == 1:
        return field.scalar(len(list(exps)))
    big, emb = _embedding_for(field, dprime)
    z = big.teichmuller(dprime)
    acc = big.scalar(0)
    for y in exps:
        acc = sc.sc_add(acc, sc.sc_pow(z, y % dprime))
    if emb is None:
        return acc
    return emb.pull_back(acc)


def orbit_character_value(ct: CharacterTable, field, orbit, c: int):
    """sum over the orbit of chi(g_c), as a K_q scalar."""
    e = ct.e
    if e == 1:
        return field.scalar(sum(ct.degrees[chi] for chi in orbit))
    M = [0] * e
    for chi in orbit:
        for j, m in enumerate(ct.mult[chi][c]):
            M[j] += m
    mults = galois_multipliers(e, field.p, field.q % e)
    pk, ep = split_p_part(e, field.p)
    seen = [False] * e
    total = field.scalar(0)
    for j in range(e):
        if seen[j]:
            continue
        orb = sorted({(a * j) % e for a in mults})
        for jj in orb:
            seen[jj] = True
            if M[jj] != M[j]:
                raise InternalContradictionError(
                    "orbit-summed multiplicities are not Galois invariant")
        if M[j] == 0:
            continue
        x = (j * pow(ep, -1, pk)) % pk if pk > 1 else 0
        y = (j * pow(pk, -1, ep)) % ep if ep > 1 else 0
        d0 = pk // gcd(x, pk) if pk > 1 else 1
        mu = _mobius_prime_power(d0)
        if mu == 0:
            continue
        yset = sorted({(y * pow(field.q, t, ep)) % ep
                       for t in range(ep)}) if ep > 1 else [0]
        per = gauss_period(field, ep, yset)
        term = sc.sc_mul(field.scalar(M[j] * mu), per)
        total = sc.sc_add(total, term)
    return total


class IsotypicComponent:
    def __init__(self, basis_cols, orbit, degree, dim):
        self.basis_cols = basis_cols
        self.orbit = tuple(orbit)
        self.degree = degree          # complex irreducible degree
        self.dim = dim                # dimension over the field

    def __repr__(self):
        return f"IsotypicComponent(dim={self.dim}, orbit={self.orbit})"


def isotypic_decomposition(rep: GroupRepresentation,
                           guard: int = la.DEFAULT_GUARD):
    """G-stable, pairwise non-isomorphic components over the field, summing
    to the whole space; computed from orbit-summed central idempotents."""
    G = rep.group
    field = rep.field
    ct = get_character_table(G)
    orbits = character_orbits(ct, field)
    n = rep.dim
    # class sums of the representation
    class_sums = []
    for cls in ct.classes:
        acc = la.zeros(field, n, n)
        for x in cls:
            acc = la.mat_add(acc, rep.mats[x])
        class_sums.append(acc)
    inv_order = field.scalar(Fraction(1, G.n))
    comps = []
    for orbit in orbits:
        deg = ct.degrees[orbit[0]]
        P = la.zeros(field, n, n)
        for c in range(ct.r):
            val = orbit_character_value(ct, field, orbit, ct.inverse_class(c))
            if val.kind == sc.ZERO:
                continue
            P = la.mat_add(P, la.mat_scalar(val, class_sums[c]))
        P = la.mat_scalar(sc.sc_mul(field.scalar(deg), inv_order), P)
        cols = la.column_space_basis(P, guard)
        dim = len(cols[0]) if cols and cols[0] else 0
        if dim:
            comps.append(IsotypicComponent(cols, orbit, deg, dim))
    total = sum(c.dim for c in comps)
    if total != n:
        raise InternalContradictionError(
            f"isotypic components sum to {total} != {n}")
    return comps


_CT_CACHE: dict = {}


def get_character_table(G: FiniteGroup) -> CharacterTable:
    key = id(G)
    if key not in _CT_CACHE:
        _CT_CACHE[key] = CharacterTable(G)
    return _CT_CACHE[key]


# -- eigenvalue multiplicities of finite-order matrices ---------------------------


def matrix_order(m, field, cap: int = 4096) -> int:
    ident = la.identity(field, len(m))
    thr = Fraction(field.prec, 2)
    x = m
    for k in range(1, cap + 1):
        if la.mat_is_zero(la.mat_sub(x, ident), thr):
            return k
        x = la.mat_mul(x, m)
    raise NotFiniteOrderError(f"matrix has no order up to {cap}")


def cyclotomic_factors_prime_to_p(field, dprime: int, guard=la.DEFAULT_GUARD):
    """Monic K_q-irreducible factors of the d'-th cyclotomic polynomial
    (p not dividing d'), as scalar coefficient lists."""
    if dprime == 1:
        return [[sc.sc_neg(field.one()), field.one()]]
    if dprime % field.p == 0:
        raise ValidationError("prime-to-p order expected")
    ep = dprime
    big, emb = _embedding_for(field, ep)
    z = big.teichmuller(ep)
    exps = [a for a in range(1, ep) if gcd(a, ep) == 1]
    seen = set()
    factors = []
    for a in exps:
        if a in seen:
            continue
        orbit = []
        t = a
        while t not in orbit:
            orbit.append(t)
            t = (t * field.q) % ep
        seen |= set(orbit)
        poly = [big.one()]
        for aa in orbit:
            root = sc.sc_pow(z, aa)
            poly = _poly_mul_linear(poly, root, big)
        if emb is None:
            factors.append(poly)
        else:
            factors.append([emb.pull_back(cf) for cf in poly])
    return factors


def _poly_mul_linear(poly, root, field):
    """poly * (x - root)."""
    out = [sc.sc_zero(field)] * (len(poly) + 1)
    for i, cf in enumerate(poly):
        out[i + 1] = sc.sc_add(out[i + 1], cf)
        out[i] = sc.sc_sub(out[i], sc.sc_mul(cf, root))
    return out


def _mixed_order_factor(field, factor, pk: int, guard=la.DEFAULT_GUARD):
    """The K_q-irreducible factor whose roots are (primitive p^k-th root) *
    (roots of ``factor``): prod over roots w of w^phi(pk) Phi_{pk}(x / w),
    computed as an interpolated determinant of the companion matrix."""
    s = len(factor) - 1
    phi_k = euler_phi(pk)
    cyc = cyclotomic_int(pk)
    # companion matrix of the prime-to-p factor
    M = la.zeros(field, s, s)
    for i in range(1, s):
        M[i][i - 1] = field.one()
    for i in range(s):
        M[i][s - 1] = sc.sc_neg(factor[i]) if i < s else None
    # fix column: companion has -c_i in the last column
    for i in range(s):
        M[i][s - 1] = sc.sc_neg(factor[i])
    deg = phi_k * s
    pts = list(range(deg + 1))
    vals = []
    Mpows = [la.identity(field, s)]
    for _ in range(phi_k):
        Mpows.append(la.mat_mul(Mpows[-1], M))
    for x0 in pts:
        # sum_i cyc[i] x0^i M^(phi_k - i)
        acc = la.zeros(field, s, s)
        for i, ci in enumerate(cyc):
            if ci:
                coeff = field.scalar(Fraction(ci) * Fraction(x0) ** i)
                acc = la.mat_add(acc, la.mat_scalar(coeff, Mpows[phi_k - i]))
        chi = la.charpoly(acc)
        det = chi[0]
        if s % 2 == 1:
            det = sc.sc_neg(det)
        vals.append(det)
    # interpolate: Vandermonde inverse over Q
    Vinv = _vandermonde_inverse(pts)
    coeffs = []
    for i in range(deg + 1):
        acc = sc.sc_zero(field)
        for j in range(deg + 1):
            cij = Vinv[i][j]
            if cij:
                acc = sc.sc_add(acc, sc.sc_mul(field.scalar(cij), vals[j]))
        coeffs.append(acc)
    return coeffs


def _vandermonde_inverse(pts):
    n = len(pts)
    V = [[Fraction(x) ** i for i in range(n)] for x in pts]
    # invert over Q
    aug = [row[:] + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
           for i, row in enumerate(V)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    inv_rows = [row[n:] for row in aug]
    # we need columns of V^{-1} applied to value vectors: c = V^{-1} v
    return [[inv_rows[i][j] for j in range(n)] for i in range(n)]


def eigen_multiplicities(h, field, order: int | None = None,
                         guard: int = la.DEFAULT_GUARD):
    """[(root-of-unity order d, multiplicity)] per eigenvalue of h over the
    algebraic closure; h must have finite order (diagonalizable, so the
    eigenspace dimensions are the root multiplicities)."""
    n = len(h)
    m = order if order is not None else matrix_order(h, field)
    out = []
    total = 0
    for d in _divisors(m):
        phi_d = _int_poly_to_scalars(cyclotomic_int(d), field)
        tot_d = n - la.certified_rank(la.poly_eval_matrix(phi_d, h), guard)
        if tot_d == 0:
            continue
        pk, dp = split_p_part(d, field.p)
        phi_k = euler_phi(pk)
        for factor in cyclotomic_factors_prime_to_p(field, dp, guard):
            s = len(factor) - 1
            if pk == 1:
                gpoly = factor
            else:
                gpoly = _mixed_order_factor(field, factor, pk, guard)
            kern = n - la.certified_rank(la.poly_eval_matrix(gpoly, h), guard)
            if kern == 0:
                continue
            orbit_len = phi_k * s
            if kern % orbit_len:
                raise InternalContradictionError(
                    "kernel dimension not divisible by the orbit length")
            per = kern // orbit_len
            out.extend([(d, per)] * orbit_len)
            total += kern
    if total != n:
        raise InternalContradictionError(
            f"eigenvalue multiplicities sum to {total} != {n}")
    return sorted(out)


def _divisors(m):
    return [d for d in range(1, m + 1) if m % d == 0]


def _int_poly_to_scalars(poly, field):
    return [field.scalar(c) for c in poly]


class PerturbationWitness:
    def __init__(self, element_name, multiplicities, dim):
        self.element = element_name
        self.multiplicities = tuple(multiplicities)  # [(order, mult)] per eigenvalue
        self.dim = dim

    def holds(self) -> bool:
        return all(2 * m <= self.dim for _, m in self.multiplicities)

    def as_dict(self):
        return {"element": self.element, "dim": self.dim,
                "eigenvalues": [{"order": d, "multiplicity": m}
                                for d, m in self.multiplicities]}


def is_perturbateur(h, field, order: int | None = None,
                    name: str = "?", guard: int = la.DEFAULT_GUARD):
    """True iff every eigenspace of h over the closure has dimension at most
    half the space; returns (bool, witness)."""
    mults = eigen_multiplicities(h, field, order, guard)
    w = PerturbationWitness(name, mults, len(h))
    return w.holds(), w


def find_perturbateur(rep: GroupRepresentation, guard: int = la.DEFAULT_GUARD):
    """Scan the group for a perturbing element (deterministic first match in
    element-index order); 'homothety-action' when the image is scalar.

    The dichotomy is a theorem for elementary representations; a third
    outcome raises InternalContradictionError.
    """
    G = rep.group
    orders = G.element_orders()
    for x in range(G.n):
        if x == G.identity:
            continue
        ok, w = is_perturbateur(rep.mats[x], rep.field, orders[x],
                                G.names[x], guard)
        if ok:
            return G.names[x], w
    if rep.is_scalar_image():
        return "homothety-action", None
    raise InternalContradictionError(
        "no perturbing element and the action is not by homotheties; "
        "the input is not an elementary representation")


# -- K-elementarity at character level --------------------------------------------


def is_K_elementary(rep_or_group, components, base_frobenius: int | None = None,
                    field=None) -> bool:
    """All pairs of components conjugate over the base subfield to each other
    or to each other's duals, decided at character level.

    components come from isotypic_decomposition; the base is Q_p by default
    (base_frobenius = p), matching the decomposition driver's needs.
    """
    if isinstance(rep_or_group, GroupRepresentation):
        G = rep_or_group.group
        field = rep_or_group.field
    else:
        G = rep_or_group
    ct = get_character_table(G)
    e = ct.e
    p = field.p
    frob = base_frobenius if base_frobenius is not None else p
    mults = galois_multipliers(e, p, frob % e if e > 1 else 1)
    # sanity: same dimension everywhere
    dims = {c.dim for c in components}
    if len(dims) > 1:
        return False
    orbits = [set(c.orbit) for c in components]
    for i in range(len(orbits)):
        for j in range(len(orbits)):
            if i == j:
                continue
            chi = next(iter(orbits[i]))
            ok = False
            for a in mults:
                if e > 1 and gcd(a, e) != 1:
                    continue
                t = ct.twist(chi, a if e > 1 else 1)
                if t in orbits[j] or ct.dual(t) in orbits[j]:
                    ok = True
                    break
            if not ok:
                return False
    return True
