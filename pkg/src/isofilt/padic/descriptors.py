"""Tower level descriptors: Q_p, unramified K_q, Eisenstein steps L/K_q.

An UnramifiedFieldDescriptor fixes a Teichmuller presentation: the modulus is
a Hensel lift of an irreducible degree-f factor of the (q-1)-st cyclotomic
polynomial mod p, so the generator z is a primitive (q-1)-st root of unity,
Frobenius is exactly z -> z^p, and the prime-to-p roots of unity available at
this level are exact monomials z^k.

An EisensteinExtensionDescriptor adds a totally ramified step cut out by an
Eisenstein polynomial E(u) over the base, together with a validated table of
automorphisms given by their action on the uniformizer.  Galois groups are
never computed here; the table is input and checked (closure, group of order
e, E(tau(u)) = 0 at working precision, transitive on the listed roots).

Descriptors are immutable; ``at_precision`` rebuilds the same level at a
different cap from the original exact integer data.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import ValidationError, PrecisionError
from .ring import TowerRing, int_valuation
from .hensel import find_unramified_modulus
from . import scalar as sc


class UnramifiedFieldDescriptor:
    level = "unramified"

    def __init__(self, p: int, f: int, prec: int, modulus: tuple[int, ...],
                 floor_relpi: int = 1):
        self.p = p
        self.f = f
        self.prec = prec
        self.e = 1
        self.modulus = tuple(c % p ** prec for c in modulus)
        self.ring = TowerRing(p, prec, self.modulus)
        self.floor_relpi = floor_relpi
        self.relpi_max = prec
        self._teich_cache: dict[int, "sc.Scalar"] = {}

    @classmethod
    def create(cls, p: int, f: int, prec: int) -> "UnramifiedFieldDescriptor":
        return cls(p, f, prec, find_unramified_modulus(p, f, prec))

    @property
    def q(self) -> int:
        return self.p ** self.f

    def __eq__(self, other):
        return (isinstance(other, UnramifiedFieldDescriptor)
                and (self.p, self.f, self.prec, self.modulus)
                == (other.p, other.f, other.prec, other.modulus))

    def __hash__(self):
        return hash((self.p, self.f, self.prec, self.modulus))

    def __repr__(self):
        return f"Q_{self.p}^({self.f}) @N={self.prec}"

    # scalar constructors
    def zero(self):
        return sc.sc_zero(self)

    def one(self):
        return sc.sc_from_int(self, 1)

    def scalar(self, q):
        return sc.sc_from_fraction(self, q)

    def gen(self):
        """The Teichmuller generator z as a scalar."""
        return sc.Scalar(self, sc.REG, val=Fraction(0),
                         unit=self.ring.gen_z(), relpi=self.relpi_max)

    def teichmuller(self, d: int):
        """A primitive d-th root of unity, exact at working precision.

        Requires d | q - 1.  For divisors of p - 1 an integer Teichmuller
        lift is used, otherwise a power of the generator.
        """
        if d in self._teich_cache:
            return self._teich_cache[d]
        if d == 1:
            return self.one()
        qm1 = self.q - 1
        if qm1 % d != 0:
            raise ValidationError(f"no primitive {d}-th root of unity in {self!r}")
        if (self.p - 1) % d == 0:
            a = None
            for c in range(2, self.p):
                if _mult_order(c, self.p) == d:
                    a = c
                    break
            if a is None:
                raise ValidationError("no generator found (impossible for d | p-1)")
            x = a % self.p ** self.prec
            for _ in range(self.prec + 1):
                x = pow(x, self.p, self.p ** self.prec)
            out = sc.Scalar(self, sc.REG, val=Fraction(0),
                            unit=self.ring.from_int(x), relpi=self.relpi_max)
        else:
            g = self.gen()
            out = sc.sc_pow(g, qm1 // d)
        self._teich_cache[d] = out
        return out

    def at_precision(self, prec: int) -> "UnramifiedFieldDescriptor":
        if prec == self.prec:
            return self
        return UnramifiedFieldDescriptor.create(self.p, self.f, prec)

    def serialize(self) -> dict:
        return {"p": self.p, "f": self.f, "precision": self.prec,
                "modulus": list(self.modulus)}


def _mult_order(a: int, p: int) -> int:
    x = a % p
    k = 1
    while x != 1:
        x = (x * a) % p
        k += 1
        if k > p:
            raise RuntimeError("order computation ran away")
    return k


class _AutRecord:
    """Precomputed action of one automorphism of the Eisenstein step."""

    __slots__ = ("name", "image", "upowers", "tu_pow")

    def __init__(self, name, image, ring):
        self.name = name
        self.image = image  # ring element: the image of u
        pw = [ring.one()]
        for _ in range(ring.e - 1):
            pw.append(ring.mul(pw[-1], image))
        self.upowers = tuple(pw)
        if ring.e == 1:
            self.tu_pow = (ring.one(),)
            return
        # (T/u)^b for b < e; T/u = T * w0 / p, exact integer division
        tu = ring.divide_pi_exact(ring.mul(image, ring.w0()), ring.e)
        tp = [ring.one()]
        for _ in range(ring.e - 1):
            tp.append(ring.mul(tp[-1], tu))
        self.tu_pow = tuple(tp)


class EisensteinExtensionDescriptor:
    level = "eisenstein"

    def __init__(self, base: UnramifiedFieldDescriptor,
                 eis_coeffs: tuple, automorphisms: dict | None = None,
                 floor_relpi: int = 1, validate: bool = True):
        """eis_coeffs: ascending, length e+1, each entry an int or a length-f
        tuple of ints over the base power basis; leading coefficient 1.
        automorphisms: name -> polynomial in u (ascending, entries ints or
        base vectors) giving the image of the uniformizer."""
        self.base = base
        self.p = base.p
        self.f = base.f
        self.prec = base.prec
        self.raw_eis = tuple(eis_coeffs)
        self.raw_auts = dict(automorphisms or {})
        coeffs = tuple(self._coerce_base_vec(c) for c in eis_coeffs)
        if coeffs[-1] != self._coerce_base_vec(1):
            raise ValidationError("Eisenstein polynomial must be monic")
        self.e = len(coeffs) - 1
        self.eis = coeffs
        self.ring = TowerRing(base.p, base.prec, base.modulus, coeffs)
        self.floor_relpi = floor_relpi
        self.relpi_max = self.e * base.prec
        self.automorphisms: dict[str, _AutRecord] = {}
        for name, poly in self.raw_auts.items():
            image = self._poly_to_element(poly)
            self.automorphisms[name] = _AutRecord(name, image, self.ring)
        if validate:
            self._validate()

    def _coerce_base_vec(self, c):
        pn = self.base.p ** self.prec
        if isinstance(c, int):
            vec = [c % pn] + [0] * (self.f - 1)
            return tuple(vec)
        vec = [int(x) % pn for x in c]
        if len(vec) != self.f:
            raise ValidationError("base coefficient vector has wrong length")
        return tuple(vec)

    def _poly_to_element(self, poly):
        # polynomial in u with base coefficients -> ring element
        out = [0] * (self.f * self.e)
        for j, c in enumerate(poly):
            vec = self._coerce_base_vec(c)
            if j >= self.e:
                raise ValidationError("automorphism image degree exceeds e-1")
            for i in range(self.f):
                out[i * self.e + j] = vec[i]
        return tuple(out)

    def _validate(self):
        ring = self.ring
        # Eisenstein shape
        v0 = _vec_valuation(self.eis[0], self.p)
        if v0 != 1:
            raise ValidationError("constant term must have valuation exactly 1")
        for j in range(1, self.e):
            vj = _vec_valuation(self.eis[j], self.p)
            if vj is not None and vj < 1:
                raise ValidationError("middle coefficients must have valuation >= 1")
        if not self.automorphisms:
            return
        thresh = self.e * max(self.prec - 4, 1)
        images = {}
        for name, rec in self.automorphisms.items():
            val = ring.val_pi(self._eval_eis(rec.image))
            if val is not None and val < thresh:
                raise ValidationError(f"automorphism {name!r} does not map the "
                                      f"uniformizer to a root of E")
            images[name] = rec.image
        names = list(self.automorphisms)
        if len(names) != self.e:
            raise ValidationError("automorphism table must have e entries")
        ident = [n for n in names
                 if self._images_equal(images[n], ring.gen_u(), thresh)]
        if len(ident) != 1:
            raise ValidationError("table must contain the identity exactly once")
        # closure under composition, and each composite is in the table
        self.compose_table: dict[tuple[str, str], str] = {}
        for n1 in names:
            seen = set()
            for n2 in names:
                img = ring.apply_u_map(images[n2], self.automorphisms[n1].upowers)
                match = [m for m in names if self._images_equal(img, images[m], thresh)]
                if len(match) != 1:
                    raise ValidationError("automorphism table is not closed")
                self.compose_table[(n1, n2)] = match[0]
                seen.add(match[0])
            if len(seen) != self.e:
                raise ValidationError("automorphism table rows are not permutations")
        self.identity_name = ident[0]

    def _eval_eis(self, x):
        ring = self.ring
        acc = ring.zero()
        xp = ring.one()
        for j in range(self.e):
            coeff = _base_vec_to_elem(self.eis[j], self.f, self.e)
            acc = ring.add(acc, ring.mul(coeff, xp))
            xp = ring.mul(xp, x)
        return ring.add(acc, xp)  # + x^e (monic)

    def _images_equal(self, a, b, thresh):
        d = self.ring.sub(a, b)
        v = self.ring.val_pi(d)
        return v is None or v >= thresh

    # -- public API ------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, EisensteinExtensionDescriptor)
                and self.base == other.base and self.raw_eis == other.raw_eis
                and tuple(sorted(self.raw_auts)) == tuple(sorted(other.raw_auts)))

    def __hash__(self):
        return hash((self.base, self.raw_eis, tuple(sorted(self.raw_auts))))

    def __repr__(self):
        return f"{self.base!r}[u]/E(deg {self.e})"

    def zero(self):
        return sc.sc_zero(self)

    def one(self):
        return sc.sc_from_int(self, 1)

    def scalar(self, q):
        return sc.sc_from_fraction(self, q)

    def uniformizer(self):
        return sc.Scalar(self, sc.REG, val=Fraction(1, self.e),
                         unit=self.ring.one(), relpi=self.relpi_max)

    def lift(self, x):
        """Lift a scalar from the base level."""
        if x.field is not self.base and x.field != self.base:
            raise ValidationError("scalar is not at the base level")
        if x.kind == sc.ZERO:
            return self.zero()
        if x.kind == sc.IZERO:
            return sc.sc_izero(self, x.zb)
        unit = _base_vec_unit_to_elem(x.unit, self.f, self.e)
        return sc.Scalar(self, sc.REG, val=x.val, unit=unit,
                         relpi=min(self.e * x.relpi, self.relpi_max))

    def apply(self, name: str, x):
        return sc.sc_apply_aut(x, self.automorphisms[name])

    def frobenius_ok(self) -> bool:
        return self.ring.frobenius_ok()

    def at_precision(self, prec: int) -> "EisensteinExtensionDescriptor":
        if prec == self.prec:
            return self
        return EisensteinExtensionDescriptor(self.base.at_precision(prec),
                                             self.raw_eis, self.raw_auts,
                                             self.floor_relpi)

    def serialize(self) -> dict:
        d = self.base.serialize()
        d["eisenstein"] = {
            "degree": self.e,
            "coeffs": [list(c) if not isinstance(c, int) else c
                       for c in self.raw_eis],
            "automorphisms": {k: [list(c) if not isinstance(c, int) else c
                                  for c in v]
                              for k, v in self.raw_auts.items()},
        }
        return d


def _vec_valuation(vec, p):
    best = None
    for c in vec:
        v = int_valuation(c, p)
        if v is not None and (best is None or v < best):
            best = v
    return best


def _base_vec_to_elem(vec, f, e):
    out = [0] * (f * e)
    for i in range(f):
        out[i * e] = vec[i]
    return tuple(out)


def _base_vec_unit_to_elem(unit, f, e):
    # unit at base level has shape f*1; re-index into f*e
    out = [0] * (f * e)
    for i in range(f):
        out[i * e] = unit[i]
    return tuple(out)
