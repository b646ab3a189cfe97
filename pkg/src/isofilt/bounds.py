"""Exact integer arithmetic for the Minkowski bound and the semistability
degree.

M(n) = prod over primes p of p^r(n,p) with r(n,p) = sum_i floor(n / (p^i (p-1)))
is the lcm of the orders of the finite subgroups of GL_n(Q); the semistability
degree in dimension g is M(2g).  Everything here is big-integer arithmetic
with no word-size assumptions.

The order-p cyclic subgroup census implements the set count
#{x : x^p = e} = (p-1) * #C + 1, which is the reading under which the
counting identity is a theorem (the subgroup generated by the order-p
elements can be strictly larger than the counted set).
"""

from __future__ import annotations

from math import gcd

from .errors import ValidationError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def minkowski_exponent(n: int, p: int) -> int:
    """r(n, p) = sum_{i >= 0} floor(n / (p^i (p-1))); zero once p-1 > n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if not is_prime(p):
        raise ValidationError(f"{p} is not prime")
    r = 0
    q = p - 1
    while q <= n:
        r += n // q
        q *= p
    return r


def minkowski_bound(n: int) -> int:
    """M(n) as an exact integer (M(0) = 1)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    m = 1
    for p in range(2, n + 2):
        if is_prime(p):
            m *= p ** minkowski_exponent(n, p)
    return m


def minkowski_factorization(n: int) -> dict[int, int]:
    return {p: minkowski_exponent(n, p)
            for p in range(2, n + 2)
            if is_prime(p) and minkowski_exponent(n, p) > 0}


class MinkowskiTable:
    def __init__(self, n: int):
        self.n = n
        self.exponents = minkowski_factorization(n)
        self.value = minkowski_bound(n)

    def as_dict(self):
        return {"n": self.n, "M": self.value,
                "factorization": {str(p): r for p, r in self.exponents.items()}}


def semistability_degree(g: int) -> int:
    """The degree bound for semistable reduction in dimension g: M(2g)."""
    if g < 1:
        raise ValueError("g must be >= 1")
    return minkowski_bound(2 * g)


def divisibility_checks(a: int, b: int, g: int, n: int) -> dict:
    """Certificates for M(a)M(b) | M(a+b) and M(n)^2 M(2g-2n) | M(2g).

    These are theorems; a False anywhere is a bug trap, so the certificates
    carry the exact quotients for inspection.
    """
    if not (0 <= n <= g):
        raise ValueError("need 0 <= n <= g")
    mab = minkowski_bound(a) * minkowski_bound(b)
    msum = minkowski_bound(a + b)
    prod_ok = msum % mab == 0
    mg = minkowski_bound(2 * g)
    mnn = minkowski_bound(n) ** 2 * minkowski_bound(2 * g - 2 * n)
    split_ok = mg % mnn == 0
    return {
        "product": {"holds": prod_ok, "divisor": mab, "multiple": msum,
                    "quotient": msum // mab if prod_ok else None},
        "split": {"holds": split_ok, "divisor": mnn, "multiple": mg,
                  "quotient": mg // mnn if split_ok else None},
    }


def two_part(n: int) -> int:
    t = 1
    while n % 2 == 0:
        n //= 2
        t *= 2
    return t


def wreath_sylow_order(g: int) -> int:
    """2^r(2g,2): the 2-part of the order of the quaternion wreath group
    Q8 wr S_g, cross-checked against the direct order computation."""
    if g < 1:
        raise ValueError("g must be >= 1")
    val = 2 ** minkowski_exponent(2 * g, 2)
    fact = 1
    for k in range(2, g + 1):
        fact *= k
    direct = two_part(8 ** g * fact)
    if direct != val:
        raise ValidationError("wreath 2-part cross-check failed")
    return val


def lcm_degree_formulas(local_data) -> tuple[int, int]:
    """(d_upper, d_dep_upper) from local invariants (t_v, card Phi_v):
    the lcm of the monodromy orders, and the lcm of M(t_v) * card Phi_v.
    The empty list gives (1, 1)."""
    d_upper = 1
    d_dep = 1
    for t_v, card in local_data:
        if t_v < 0 or card < 1:
            raise ValueError("need t_v >= 0 and card >= 1")
        d_upper = d_upper * card // gcd(d_upper, card)
        m = minkowski_bound(t_v) * card
        d_dep = d_dep * m // gcd(d_dep, m)
    return d_upper, d_dep


# -- cyclic subgroup census for p-groups -----------------------------------------


def _element_orders(table):
    n = len(table)
    e = _identity_of(table)
    orders = []
    for x in range(n):
        k = 1
        y = x
        while y != e:
            y = table[y][x]
            k += 1
            if k > n:
                raise ValidationError("not a group table")
        orders.append(k)
    return orders, e


def _identity_of(table):
    n = len(table)
    for e in range(n):
        if all(table[e][x] == x and table[x][e] == x for x in range(n)):
            return e
    raise ValidationError("table has no identity")


def _p_of_order(n: int):
    for p in range(2, n + 1):
        if is_prime(p) and n % p == 0:
            q = n
            while q % p == 0:
                q //= p
            return (p, q == 1)
    return (None, n == 1)


def cyclic_subgroup_census(table, action=None) -> dict:
    """Census of order-p cyclic subgroups of a p-group.

    table: multiplication table (table[a][b] = index of a*b).
    action: optional list of permutations of element indices, the generators
    of a p-group acting by automorphisms; when given, a subgroup with a
    singleton orbit is exhibited (one always exists).

    Returns {"p", "count", "solutions_of_x_p": #{x : x^p = e},
    "identity_holds", "fixed_subgroup"}.
    """
    n = len(table)
    p, is_pgroup = _p_of_order(n)
    if not is_pgroup or p is None:
        raise ValidationError("census requires a nontrivial p-group")
    orders, e = _element_orders(table)
    subs = set()
    for x in range(n):
        if orders[x] == p:
            h = []
            y = e
            for _ in range(p):
                h.append(y)
                y = table[y][x]
            subs.add(frozenset(h))
    count = len(subs)
    sols = sum(1 for x in range(n) if orders[x] in (1, p) and
               _power(table, x, p, e) == e)
    identity_holds = (sols == (p - 1) * count + 1) and (count % p != 0)
    fixed = None
    if action is not None:
        for H in sorted(subs, key=sorted):
            if all(frozenset(perm[x] for x in H) == H for perm in action):
                fixed = sorted(H)
                break
    return {"p": p, "count": count, "solutions_of_x_p": sols,
            "identity_holds": identity_holds, "fixed_subgroup": fixed}


def _power(table, x, k, e):
    y = e
    for _ in range(k):
        y = table[y][x]
    return y
