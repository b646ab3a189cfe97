"""JSON formats for field descriptors, modules, groups, extensions and
certificates.

Scalars serialize either as exact rational strings (inputs) or as digit data
(valuation + integer coefficient vector + known relative precision); matrix
entries in input files may be rational strings or coordinate vectors over the
unramified power basis.  Certificates embed every input document and all
parameters, so re-verification needs no flags; their digest is the sha256 of
the canonical JSON with the timestamp field removed.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .errors import ValidationError
from .padic import scalar as sc
from .padic.descriptors import UnramifiedFieldDescriptor, EisensteinExtensionDescriptor
from .padic import linalg as la
from .isocrystal.module import PhiModule, SemiAbelianPhiModule
from .groups.core import FiniteGroup, GroupRepresentation
from .filtration.galois import GaloisSetup


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def digest(doc) -> str:
    doc = {k: v for k, v in doc.items() if k != "timestamp"} \
        if isinstance(doc, dict) else doc
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()


def load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: parse error at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}") from exc
    except OSError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


# -- scalars ---------------------------------------------------------------------


def scalar_to_json(x):
    if x.kind == sc.ZERO:
        return "0"
    if x.kind == sc.IZERO:
        return {"izero": str(x.zb)}
    return {"v": str(x.val), "unit": list(x.unit), "relpi": x.relpi}


def scalar_from_json(field, doc):
    if doc == "0":
        return sc.sc_zero(field)
    if isinstance(doc, str):
        return field.scalar(Fraction(doc))
    if isinstance(doc, (int, float)):
        return field.scalar(Fraction(doc))
    if isinstance(doc, list):
        # coordinates over the z-power basis
        gen = field.gen() if field.e == 1 else None
        if gen is None:
            raise ValidationError("coordinate vectors need an unramified level")
        acc = field.scalar(0)
        zp = field.one()
        for c in doc:
            acc = sc.sc_add(acc, sc.sc_mul(field.scalar(Fraction(str(c))), zp))
            zp = sc.sc_mul(zp, gen)
        return acc
    if "izero" in doc:
        return sc.sc_izero(field, Fraction(doc["izero"]))
    return sc.Scalar(field, sc.REG, val=Fraction(doc["v"]),
                     unit=tuple(int(c) % field.ring.pn for c in doc["unit"]),
                     relpi=min(int(doc["relpi"]), field.relpi_max))


def matrix_to_json(m):
    return [[scalar_to_json(x) for x in row] for row in m]


def matrix_from_json(field, doc):
    return [[scalar_from_json(field, x) for x in row] for row in doc]


# -- descriptors -----------------------------------------------------------------


def field_from_json(doc, prec_override=None) -> UnramifiedFieldDescriptor:
    p = int(doc["p"])
    f = int(doc["f"])
    prec = int(prec_override or doc.get("precision", 64))
    if "modulus" in doc and doc["modulus"]:
        return UnramifiedFieldDescriptor(p, f, prec,
                                         tuple(int(c) for c in doc["modulus"]))
    return UnramifiedFieldDescriptor.create(p, f, prec)


def extension_from_json(doc, prec_override=None):
    base = field_from_json(doc, prec_override)
    eis = doc.get("eisenstein")
    if not eis:
        raise ValidationError("extension document lacks an 'eisenstein' entry")
    coeffs = tuple(c if isinstance(c, int) else tuple(int(x) for x in c)
                   for c in eis["coeffs"])
    auts = {name: [c if isinstance(c, int) else tuple(int(x) for x in c)
                   for c in poly]
            for name, poly in eis.get("automorphisms", {}).items()}
    return EisensteinExtensionDescriptor(base, coeffs, auts)


def extension_to_json(ext) -> dict:
    return ext.serialize()


# -- modules ---------------------------------------------------------------------


def module_from_json(doc, prec_override=None):
    """Returns (SemiAbelianPhiModule, field).  Plain abelian and bare modules
    are wrapped with an empty toric part."""
    field = field_from_json(doc["field"], prec_override)
    A = matrix_from_json(field, doc["frobenius"])
    D = PhiModule(field, A)
    n = D.n
    toric = doc.get("toric_sub")
    pol = doc.get("polarization")
    toric_cols = (matrix_from_json(field, toric) if toric
                  else [[] for _ in range(n)])
    gram = matrix_from_json(field, pol) if pol else []
    sa = SemiAbelianPhiModule(D, toric_cols, gram,
                              validate=bool(toric) or bool(pol))
    return sa, field


def module_to_json(sa: SemiAbelianPhiModule) -> dict:
    doc = {"field": sa.module.field.serialize(),
           "frobenius": matrix_to_json(sa.module.A)}
    if sa.t_dim:
        doc["toric_sub"] = matrix_to_json(sa.toric_cols)
    if sa.gram_B:
        doc["polarization"] = matrix_to_json(sa.gram_B)
    return doc


# -- groups ----------------------------------------------------------------------


def group_from_json(doc, field):
    names = list(doc["elements"])
    table = [[int(x) for x in row] for row in doc["table"]]
    G = FiniteGroup(names, table)
    rep_doc = doc.get("rep", {})
    faithful = bool(doc.get("faithful", True))
    if doc.get("generators_only"):
        gen_mats = {name: matrix_from_json(field, m)
                    for name, m in rep_doc.items()}
        rep = GroupRepresentation.from_generator_matrices(G, field, gen_mats,
                                                          faithful)
    else:
        named = {name: matrix_from_json(field, m)
                 for name, m in rep_doc.items()}
        rep = GroupRepresentation.from_named(G, field, named, faithful)
    return G, rep


def group_to_json(rep: GroupRepresentation, faithful=True) -> dict:
    G = rep.group
    return {"elements": list(G.names),
            "table": [list(r) for r in G.table],
            "faithful": faithful,
            "rep": {G.names[x]: matrix_to_json(rep.mats[x])
                    for x in range(G.n)}}


def setup_from_json(ext_doc, group: FiniteGroup, ext) -> GaloisSetup:
    corr = ext_doc.get("correspondence")
    if not corr:
        raise ValidationError("extension document lacks a 'correspondence'")
    return GaloisSetup(group, ext, dict(corr))


# -- certificates ----------------------------------------------------------------


CERT_SCHEMA = "isofilt-filtration-certificate-v1"


def build_certificate(operation, inputs, params, outputs, timestamp=None):
    doc = {
        "schema": CERT_SCHEMA,
        "operation": operation,
        "version": 1,
        "inputs": inputs,
        "input_digests": {k: digest(v) for k, v in inputs.items()},
        "params": params,
        "outputs": outputs,
    }
    doc["digest"] = digest(doc)
    if timestamp is not None:
        doc["timestamp"] = timestamp
    return doc


def certificate_body(doc) -> dict:
    return {k: v for k, v in doc.items() if k not in ("timestamp", "digest")}


def certificate_digest(doc) -> str:
    return digest(certificate_body(doc))
