"""Finite groups as multiplication tables, with representation data.

Groups are index-based: elements 0..n-1 with a Cayley table.  Construction
goes through closure of generator sets under an abstract multiplication, so
permutation groups, matrix groups and symbolic wreath elements all share one
code path.  A GroupRepresentation attaches matrices over a tower level and
validates the action axioms (respects the table, phi-commutes, preserves a
pairing or a toric subspace, faithful when declared).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from ..errors import ValidationError
from ..padic import linalg as la
from ..padic import scalar as sc


class FiniteGroup:
    def __init__(self, names, table):
        self.names = list(names)
        self.n = len(names)
        self.table = [list(r) for r in table]
        self.identity = self._find_identity()
        self.inverse = self._find_inverses()
        self._classes = None
        self._orders = None

    @classmethod
    def from_generators(cls, gens, mul, name_of=str, cap: int = 100000):
        """Closure of hashable generator objects under ``mul``."""
        if not gens:
            raise ValidationError("need at least one generator")
        elems = list(gens)
        index = {g: i for i, g in enumerate(elems)}
        frontier = list(elems)
        while frontier:
            new = []
            for a in frontier:
                for b in list(elems):
                    for prod in (mul(a, b), mul(b, a)):
                        if prod not in index:
                            index[prod] = len(elems)
                            elems.append(prod)
                            new.append(prod)
                            if len(elems) > cap:
                                raise ValidationError("closure exceeded cap")
            frontier = new
        table = [[index[mul(a, b)] for b in elems] for a in elems]
        g = cls([name_of(x) for x in elems], table)
        g.raw_elements = elems
        return g

    def _find_identity(self):
        for e in range(self.n):
            if all(self.table[e][x] == x and self.table[x][e] == x
                   for x in range(self.n)):
                return e
        raise ValidationError("no identity element")

    def _find_inverses(self):
        inv = [None] * self.n
        e = self.identity
        for x in range(self.n):
            for y in range(self.n):
                if self.table[x][y] == e:
                    inv[x] = y
                    break
            if inv[x] is None:
                raise ValidationError("element without inverse")
        return inv

    def mul(self, a, b):
        return self.table[a][b]

    def power(self, x, k):
        if k < 0:
            x, k = self.inverse[x], -k
        y = self.identity
        for _ in range(k):
            y = self.table[y][x]
        return y

    def element_orders(self):
        if self._orders is None:
            out = []
            for x in range(self.n):
                k = 1
                y = x
                while y != self.identity:
                    y = self.table[y][x]
                    k += 1
                out.append(k)
            self._orders = out
        return self._orders

    def exponent(self):
        e = 1
        for k in self.element_orders():
            e = e * k // gcd(e, k)
        return e

    def conjugacy_classes(self):
        """(classes as sorted tuples, class_of index array)."""
        if self._classes is None:
            seen = [False] * self.n
            classes = []
            class_of = [None] * self.n
            for x in range(self.n):
                if seen[x]:
                    continue
                orbit = set()
                for g in range(self.n):
                    y = self.table[self.table[g][x]][self.inverse[g]]
                    orbit.add(y)
                orbit = tuple(sorted(orbit))
                for y in orbit:
                    seen[y] = True
                    class_of[y] = len(classes)
                classes.append(orbit)
            self._classes = (classes, class_of)
        return self._classes

    def center_size(self):
        z = 0
        for x in range(self.n):
            if all(self.table[x][g] == self.table[g][x] for g in range(self.n)):
                z += 1
        return z

    def derived_subgroup_order(self):
        comms = {self.identity}
        for a in range(self.n):
            for b in range(self.n):
                c = self.table[self.table[self.table[a][b]][self.inverse[a]]][self.inverse[b]]
                comms.add(c)
        # close under multiplication
        elems = set(comms)
        frontier = list(elems)
        while frontier:
            new = []
            for x in frontier:
                for y in list(elems):
                    for z in (self.table[x][y], self.table[y][x]):
                        if z not in elems:
                            elems.add(z)
                            new.append(z)
            frontier = new
        return len(elems)

    def fingerprint(self):
        """Isomorphism-invariant signature used to tell fixtures apart."""
        orders = self.element_orders()
        classes, _ = self.conjugacy_classes()
        csizes = tuple(sorted(len(c) for c in classes))
        # how many distinct squares the elements of each order have
        sq = {}
        for x in range(self.n):
            sq.setdefault(orders[x], set()).add(self.table[x][x])
        sq_profile = tuple(sorted((k, len(v)) for k, v in sq.items()))
        return (self.n, tuple(sorted(orders)), csizes, self.center_size(),
                self.derived_subgroup_order(), sq_profile)

    def is_p_group(self):
        n = self.n
        for p in range(2, n + 1):
            if n % p == 0:
                while n % p == 0:
                    n //= p
                return (p, n == 1)
        return (None, self.n == 1)

    def subgroup_table(self, idx):
        """Multiplication table of a subgroup given by element indices."""
        pos = {x: i for i, x in enumerate(idx)}
        return [[pos[self.table[a][b]] for b in idx] for a in idx]


class GroupRepresentation:
    """A finite group acting by matrices over one tower level."""

    def __init__(self, group: FiniteGroup, field, mats, faithful: bool = True):
        self.group = group
        self.field = field
        self.mats = mats  # list indexed like group elements
        self.dim = len(mats[group.identity])
        self.faithful = faithful

    @classmethod
    def from_named(cls, group, field, named_mats, faithful=True):
        mats = [None] * group.n
        for name, m in named_mats.items():
            mats[group.names.index(name)] = m
        if any(m is None for m in mats):
            raise ValidationError("representation misses elements")
        return cls(group, field, mats, faithful)

    @classmethod
    def from_generator_matrices(cls, group, field, gen_mats: dict,
                                faithful=True, guard=la.DEFAULT_GUARD):
        """Extend matrices given on generator *names* along the table by a
        breadth-first product sweep."""
        mats = [None] * group.n
        mats[group.identity] = la.identity(field, _dim_of(gen_mats))
        for name, m in gen_mats.items():
            mats[group.names.index(name)] = m
        changed = True
        while changed:
            changed = False
            for a in range(group.n):
                if mats[a] is None:
                    continue
                for b in range(group.n):
                    if mats[b] is None:
                        continue
                    c = group.table[a][b]
                    if mats[c] is None:
                        mats[c] = la.mat_mul(mats[a], mats[b])
                        changed = True
        if any(m is None for m in mats):
            raise ValidationError("generator matrices do not reach all elements")
        return cls(group, field, mats, faithful)

    def mat(self, x):
        return self.mats[x]

    # -- validation ----------------------------------------------------------

    def validate(self, phi_module=None, gram=None, toric_cols=None,
                 guard=la.DEFAULT_GUARD, check_phi: bool = True,
                 table_mode: str = "full", table_samples: int = 512):
        thr = self._zero_threshold()
        G = self.group
        if table_mode == "full":
            pairs = ((a, b) for a in range(G.n) for b in range(G.n))
        elif table_mode == "sample":
            import random
            rng = random.Random(0xC0FFEE ^ G.n)
            pairs = ((rng.randrange(G.n), rng.randrange(G.n))
                     for _ in range(table_samples))
        elif table_mode == "off":
            pairs = ()
        else:
            raise ValueError("table_mode must be full, sample or off")
        for a, b in pairs:
            prod = la.mat_mul(self.mats[a], self.mats[b])
            if not la.mat_is_zero(la.mat_sub(prod, self.mats[G.table[a][b]]), thr):
                raise ValidationError(
                    f"representation breaks the table at "
                    f"({G.names[a]}, {G.names[b]})")
        if self.faithful:
            for a in range(G.n):
                if a != G.identity and self._is_identity(a, thr):
                    raise ValidationError("declared faithful but kernel is nontrivial")
        if phi_module is not None and check_phi:
            A = phi_module.A
            for a in range(G.n):
                lhs = la.mat_mul(self.mats[a], A)
                rhs = la.mat_mul(A, la.mat_frobenius(self.mats[a]))
                if not la.mat_is_zero(la.mat_sub(lhs, rhs), thr):
                    raise ValidationError(
                        f"element {G.names[a]} does not phi-commute")
        if gram is not None:
            for a in range(G.n):
                m = self.mats[a]
                lhs = la.mat_mul(la.transpose(m), la.mat_mul(gram, m))
                if not la.mat_is_zero(la.mat_sub(lhs, gram), thr):
                    raise ValidationError(
                        f"element {G.names[a]} is not compatible with the pairing")
        if toric_cols is not None and toric_cols and toric_cols[0]:
            for a in range(G.n):
                img = la.mat_mul(self.mats[a], toric_cols)
                if not la.subspace_leq(img, toric_cols, guard):
                    raise ValidationError(
                        f"element {G.names[a]} does not preserve the toric part")
        return True

    def _zero_threshold(self):
        F = self.field
        return Fraction(F.prec, 2)

    def _is_identity(self, a, thr):
        ident = la.identity(self.field, self.dim)
        return la.mat_is_zero(la.mat_sub(self.mats[a], ident), thr)

    def is_scalar_image(self) -> bool:
        """True when every element acts by a scalar matrix."""
        thr = self._zero_threshold()
        for a in range(self.group.n):
            m = self.mats[a]
            lead = m[0][0]
            scal = la.mat_scalar(lead, la.identity(self.field, self.dim))
            if not la.mat_is_zero(la.mat_sub(m, scal), thr):
                return False
        return True


def _dim_of(gen_mats):
    for m in gen_mats.values():
        return len(m)
    raise ValidationError("no generator matrices")
