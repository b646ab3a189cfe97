"""Construction driver for admissible, Galois-stable Lagrangian filtrations.

The driver reduces a polarized semi-abelian module to its abelian quotient
(pulling the found filtration back over the toric part), splits the quotient
into orthogonal, phi-stable, G-stable pieces with at most two slopes that are
elementary as representations over Q_p, solves each piece by one of two
routes, and glues:

* two slopes {mu, 1-mu}, mu != 1/2: sample rational points of the Lagrangian
  chart atlas inside the descended invariant space until the filtration is
  transverse to both isoclinic components; admissibility follows and is
  re-verified, stability holds by construction and is re-verified;
* one slope (necessarily 1/2): if the group acts by homotheties, sample
  base-rational Lagrangians until F is transverse to its twisted-Frobenius
  image (which forces admissibility); otherwise scan for a perturbing
  element h, certify the seed construction, and sample stable Lagrangians
  until dim(F cap h F) <= 1, which again forces admissibility.

Every certificate re-verifies all properties through code paths independent
of the construction; searches are seeded and budgeted, and the emitted
descent datum is the family f_h = rho(h^{-1}) whose cocycle law is an exact
consequence of the multiplication table.
"""

from __future__ import annotations

import random
from fractions import Fraction

from ..errors import (ValidationError, BudgetExhaustedError,
                      InternalContradictionError, PrecisionError,
                      MultiplicityError)
from ..padic import linalg as la
from ..padic import scalar as sc
from ..padic.convert import project_to_base
from ..isocrystal.module import PhiModule, PolarizedPhiModule, SemiAbelianPhiModule
from ..isocrystal.slopes import newton_slopes, isoclinic_decompose
from ..groups.core import GroupRepresentation
from ..groups.isotypic import (isotypic_decomposition, is_K_elementary,
                               find_perturbateur, get_character_table,
                               galois_multipliers)
from ..symplectic.space import SymplecticSpace, LagrangianSubspace
from ..symplectic.lagrangian import (random_rational_lagrangian,
                                     lagrangian_h_small_intersection)
from .galois import (GaloisSetup, galois_descend, is_diagonally_stable,
                     lift_matrix)
from .admissible import is_admissible, AdmissibilityReport


DEFAULT_SAMPLE_BUDGET = 200


class PieceData:
    def __init__(self, ambient_cols, module, gram, rep, slopes):
        self.ambient_cols = ambient_cols   # columns in the ambient space (K_q)
        self.module = module               # PhiModule in piece coordinates
        self.gram = gram                   # Gram matrix in piece coordinates
        self.rep = rep                     # induced action in piece coordinates
        self.slopes = slopes               # tuple of slopes

    @property
    def dim(self):
        return self.module.n


def induced_rep(rep: GroupRepresentation, cols,
                guard: int = la.DEFAULT_GUARD) -> GroupRepresentation:
    mats = []
    for x in range(rep.group.n):
        img = la.mat_mul(rep.mats[x], cols)
        mats.append(la.solve_right(cols, img, guard))
    return GroupRepresentation(rep.group, rep.field, mats, faithful=False)


def restrict_gram(J, cols):
    return la.mat_mul(la.transpose(cols), la.mat_mul(J, cols))


def decompose_polarized(D: PhiModule, J, rep: GroupRepresentation,
                        guard: int = la.DEFAULT_GUARD, refine: bool = True):
    """Orthogonal, phi-stable, G-stable pieces with at most two slopes,
    each elementary over Q_p as a representation.

    refine=False stops at the slope-pair blocks (used by the relaxed mode,
    where the action need not be phi-compatible and isotypic components need
    not be phi-stable)."""
    comps = isoclinic_decompose(D, guard)
    by_slope = {s: cols for s, cols in comps}
    used = set()
    blocks = []
    for s in sorted(by_slope):
        if s in used:
            continue
        partner = 1 - s
        used.add(s)
        cols = by_slope[s]
        if partner != s and partner in by_slope:
            used.add(partner)
            cols = _concat(cols, by_slope[partner])
            blocks.append((tuple(sorted({s, partner})), cols))
        elif partner == s:
            blocks.append(((s,), cols))
        else:
            raise ValidationError(f"slope {s} has no dual partner {partner}")
    pieces = []
    for slopes, cols in blocks:
        if refine:
            pieces.extend(_split_block(D, J, rep, cols, slopes, guard))
        else:
            pieces.append(_make_piece(D, J, rep, la.normalize_columns(
                cols, integral=True), guard, check_elementary=False))
    total = sum(p.dim for p in pieces)
    if total != D.n:
        raise InternalContradictionError("pieces do not sum to the space")
    return pieces


def _concat(a, b):
    return [ra + rb for ra, rb in zip(a, b)]


def _split_block(D, J, rep, cols, slopes, guard):
    field = rep.field
    out = []
    current = la.normalize_columns(cols, integral=True)
    space = SymplecticSpace(field, J, validate=False)
    while current and current[0]:
        rep_c = induced_rep(rep, current, guard)
        comps = isotypic_decomposition(rep_c, guard)
        if len(comps) == 1:
            chosen_idx = [0]
        else:
            chosen_idx = _elementary_closure(rep_c, comps, field)
        chosen_cols = None
        for i in chosen_idx:
            chosen_cols = comps[i].basis_cols if chosen_cols is None \
                else _concat(chosen_cols, comps[i].basis_cols)
        ambient = la.normalize_columns(la.mat_mul(current, chosen_cols),
                                       integral=True)
        piece = _make_piece(D, J, rep, ambient, guard)
        _validate_piece(piece, guard)
        out.append(piece)
        if len(chosen_idx) == len(comps):
            break
        perp = space.orthogonal_complement(ambient, guard)
        current = la.normalize_columns(
            la.intersection_basis(perp, current, guard), integral=True)
    return out


def _elementary_closure(rep_c, comps, field):
    """Indices of the components spanned by one isotypic component together
    with its duals and Frobenius conjugates over Q_p."""
    ct = get_character_table(rep_c.group)
    e = ct.e
    mults = galois_multipliers(e, field.p, field.p % e if e > 1 else 1)
    orbit_sets = [set(c.orbit) for c in comps]
    chosen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        targets = set()
        for chi in orbit_sets[i]:
            targets.add(ct.dual(chi))
            for a in mults:
                if e == 1:
                    targets.add(chi)
                else:
                    from math import gcd
                    if gcd(a, e) == 1:
                        t = ct.twist(chi, a)
                        targets.add(t)
                        targets.add(ct.dual(t))
        for j in range(len(comps)):
            if j in chosen:
                continue
            if orbit_sets[j] & targets:
                chosen.add(j)
                frontier.append(j)
    return sorted(chosen)


def _make_piece(D, J, rep, ambient, guard, check_elementary=True):
    module = D.submodule(ambient, guard)
    gram = restrict_gram(J, ambient)
    rep_p = induced_rep(rep, ambient, guard)
    slopes = tuple(s for s, _ in newton_slopes(module, guard).pairs)
    piece = PieceData(ambient, module, gram, rep_p, slopes)
    piece.check_elementary = check_elementary
    return piece


def _validate_piece(piece, guard):
    la.det_valuation(piece.gram, guard)  # nondegenerate restriction
    comps = isotypic_decomposition(piece.rep, guard)
    if not is_K_elementary(piece.rep, comps):
        raise InternalContradictionError(
            "piece is not elementary over Q_p; decomposition bug")


# -- the two per-piece routes -------------------------------------------------------


def two_slope_filtration(piece: PieceData, setup: GaloisSetup, seed: int,
                         budget: int = DEFAULT_SAMPLE_BUDGET,
                         adm_mode: str = "exact", adm_budget: int = 200,
                         guard: int = la.DEFAULT_GUARD):
    """Lagrangian, admissible, diagonally stable filtration for a two-slope
    piece with slopes {mu, 1-mu}, mu != 1/2."""
    D, J, rep = piece.module, piece.gram, piece.rep
    ext = setup.ext
    comps = isoclinic_decompose(D, guard)
    if len(comps) != 2:
        raise ValidationError("two-slope route requires exactly two slopes")
    (s1, c1), (s2, c2) = comps
    if s1 + s2 != 1 or s1 == Fraction(1, 2):
        raise ValidationError("slopes must pair to {mu, 1-mu}, mu != 1/2")
    rng = random.Random(seed)
    B = galois_descend(rep, setup, guard=guard)
    desc_space = _descended_symplectic(rep.field, ext, J, B, guard)
    c1L, c2L = lift_matrix(ext, c1), lift_matrix(ext, c2)
    for _ in range(budget):
        F = _sample_stable_lagrangian(B, desc_space, ext, rng, guard)
        try:
            if la.intersection_dim(F, c1L, guard) != 0:
                continue
            if la.intersection_dim(F, c2L, guard) != 0:
                continue
        except PrecisionError:
            continue
        return _finish_piece(piece, setup, F, adm_mode, adm_budget, seed,
                             guard, expect_admissible=True)
    raise BudgetExhaustedError(
        f"two-slope sampling exhausted {budget} tries; retry with a larger "
        "budget or another seed")


def supersingular_filtration(piece: PieceData, setup: GaloisSetup, seed: int,
                             budget: int = DEFAULT_SAMPLE_BUDGET,
                             adm_mode: str = "sampled", adm_budget: int = 200,
                             guard: int = la.DEFAULT_GUARD):
    """Filtration for an isoclinic slope-1/2 piece: base-rational sampling
    against the twisted Frobenius under a homothety action, perturbing
    element route otherwise."""
    D, J, rep = piece.module, piece.gram, piece.rep
    ext = setup.ext
    prof = newton_slopes(D, guard)
    if prof.pairs != ((Fraction(1, 2), D.n),):
        raise ValidationError("supersingular route requires pure slope 1/2")
    rng = random.Random(seed)
    scan, witness = find_perturbateur(rep, guard)
    field = rep.field
    if scan == "homothety-action":
        if not ext.frobenius_ok():
            raise ValidationError(
                "homothety route needs a sigma-stable Eisenstein polynomial")
        space_K = SymplecticSpace(field, J, validate=False)
        for _ in range(budget):
            C = random_rational_lagrangian(space_K, rng, guard)
            FK = C.basis_cols
            img = D.apply_phi(FK)  # phi_tau(F) at the base level
            try:
                if la.intersection_dim(FK, img, guard) != 0:
                    continue
            except PrecisionError:
                continue
            F = lift_matrix(ext, FK)
            return _finish_piece(piece, setup, F, adm_mode, adm_budget, seed,
                                 guard, expect_admissible=True)
        raise BudgetExhaustedError(
            f"homothety-route sampling exhausted {budget} tries")
    # perturbing element route: certify the seed construction first
    h_idx = rep.group.names.index(scan)
    space_K = SymplecticSpace(field, J, validate=False)
    lagrangian_h_small_intersection(space_K, rep.mats[h_idx], guard)
    B = galois_descend(rep, setup, guard=guard)
    desc_space = _descended_symplectic(field, ext, J, B, guard)
    hL = lift_matrix(ext, rep.mats[h_idx])
    for _ in range(budget):
        F = _sample_stable_lagrangian(B, desc_space, ext, rng, guard)
        try:
            if la.intersection_dim(F, la.mat_mul(hL, F), guard) > 1:
                continue
        except PrecisionError:
            continue
        return _finish_piece(piece, setup, F, adm_mode, adm_budget, seed,
                             guard, expect_admissible=True,
                             witness=(scan, witness))
    raise BudgetExhaustedError(
        f"perturbing-element sampling exhausted {budget} tries")


def _descended_symplectic(field, ext, J, B, guard):
    JL = lift_matrix(ext, J)
    G = la.mat_mul(la.transpose(B), la.mat_mul(JL, B))
    GK = la.mat_map(G, project_to_base)
    return SymplecticSpace(field, GK, validate=False)


def _sample_stable_lagrangian(B, desc_space, ext, rng, guard):
    C = random_rational_lagrangian(desc_space, rng, guard)
    CL = lift_matrix(ext, C.basis_cols)
    return la.normalize_columns(la.mat_mul(B, CL))


def _finish_piece(piece, setup, F, adm_mode, adm_budget, seed, guard,
                  expect_admissible=False, witness=None):
    """Re-verify all three properties through independent code paths."""
    D, J, rep = piece.module, piece.gram, piece.rep
    ext = setup.ext
    space_L = SymplecticSpace(ext, lift_matrix(ext, J), validate=False)
    LagrangianSubspace(space_L, F, validate=True, guard=guard)
    try:
        report = is_admissible(D, F, ext, adm_mode, seed=seed,
                               budget=adm_budget, guard=guard)
    except MultiplicityError:
        report = is_admissible(D, F, ext, "sampled", seed=seed,
                               budget=adm_budget, guard=guard)
    if not report.verdict:
        if expect_admissible:
            raise InternalContradictionError(
                "construction route guarantees admissibility but the check "
                "found a violating submodule")
        raise ValidationError("filtration is not admissible")
    stable = is_diagonally_stable(rep, F, setup, guard)
    if not stable:
        raise InternalContradictionError(
            "sampled filtration is not diagonally stable")
    return {"filtration": F, "admissibility": report, "stable": True,
            "lagrangian": True, "witness": witness}


# -- gluing and the full driver -----------------------------------------------------


class DescentDatum:
    """f_h = rho(h^{-1}): (D, F) -> (D, h.gal F); the cocycle law
    f_{gh} = g.gal f_h o f_g holds exactly because rho respects the table
    and the Galois action fixes the coefficient field of the maps."""

    def __init__(self, rep: GroupRepresentation, setup: GaloisSetup):
        self.rep = rep
        self.setup = setup
        G = rep.group
        self.maps = {G.names[x]: rep.mats[G.inverse[x]] for x in range(G.n)}
        self.targets = {G.names[x]: setup.aut_of(G.inverse[x])
                        for x in range(G.n)}

    def verify_cocycle(self) -> bool:
        """Index-level identity: (gh)^{-1} = h^{-1} g^{-1} in the table."""
        G = self.rep.group
        for a in range(G.n):
            for b in range(G.n):
                lhs = G.inverse[G.table[a][b]]
                rhs = G.table[G.inverse[b]][G.inverse[a]]
                if lhs != rhs:
                    return False
        return True

    def verify_filtration_targets(self, F_cols, guard=la.DEFAULT_GUARD) -> bool:
        ext = self.setup.ext
        G = self.rep.group
        for x in range(G.n):
            name = G.names[x]
            img = la.mat_mul(lift_matrix(ext, self.maps[name]), F_cols)
            tgt = self.setup.gal_apply_name(self.targets[name], F_cols)
            if not la.subspace_equal(img, tgt, guard):
                return False
        return True

    def serialize(self, serializer):
        return {name: {"matrix": serializer(self.maps[name]),
                       "galois": self.targets[name]}
                for name in self.maps}


def find_admissible_stable_filtration(sa: SemiAbelianPhiModule,
                                      setup: GaloisSetup,
                                      rep: GroupRepresentation,
                                      seed: int = 0,
                                      budget: int = DEFAULT_SAMPLE_BUDGET,
                                      adm_mode: str = "exact",
                                      adm_budget: int = 200,
                                      guard: int = la.DEFAULT_GUARD,
                                      allow_non_phi_compatible: bool = False,
                                      validate_inputs: bool = True,
                                      table_mode: str = "full"):
    """The full driver: reduce to the abelian quotient, decompose, solve each
    piece, glue, pull back over the toric part, and emit a verified
    certificate with its descent datum."""
    D = sa.module
    field = D.field
    ext = setup.ext
    if validate_inputs:
        rep.validate(phi_module=None if allow_non_phi_compatible else D,
                     gram=None, toric_cols=sa.toric_cols if sa.t_dim else None,
                     guard=guard, check_phi=not allow_non_phi_compatible,
                     table_mode=table_mode)
    results = {"pieces": []}
    t = sa.t_dim
    if sa.B_dim == 0:
        FL = lift_matrix(ext, la.identity(field, D.n))
        report = _admissible_with_fallback(D, FL, ext, "exact", seed,
                                           adm_budget, guard)
        if not report.verdict:
            raise InternalContradictionError("full filtration on a torus "
                                             "failed admissibility")
        datum = DescentDatum(rep, setup)
        stable = is_diagonally_stable(rep, FL, setup, guard)
        return {
            "filtration": FL, "admissibility": report,
            "graded": {"toric": True, "quotient": True},
            "stable": stable, "lagrangian": True,
            "descent": datum, "cocycle": datum.verify_cocycle(),
            "descent_targets": datum.verify_filtration_targets(FL, guard),
            "pieces": [], "seed": seed, "budget": budget,
        }
    DB = sa.quotient_module(guard)
    repB = _quotient_rep(sa, rep, guard)
    if validate_inputs:
        repB.validate(phi_module=None if allow_non_phi_compatible else DB,
                      gram=sa.gram_B, guard=guard,
                      check_phi=not allow_non_phi_compatible,
                      table_mode=table_mode)
    pieces = decompose_polarized(DB, sa.gram_B, repB, guard,
                                 refine=not allow_non_phi_compatible)
    rng = random.Random(seed)
    piece_results = []
    for k, piece in enumerate(pieces):
        sub_seed = rng.randrange(1 << 30)
        if len(piece.slopes) == 2:
            res = two_slope_filtration(piece, setup, sub_seed, budget,
                                       adm_mode, adm_budget, guard)
        else:
            res = supersingular_filtration(piece, setup, sub_seed, budget,
                                           "sampled" if adm_mode != "exact"
                                           else _mode_for(piece), adm_budget,
                                           guard)
        piece_results.append((piece, res))
    # glue in D_B coordinates
    FB = None
    for piece, res in piece_results:
        ambient_L = lift_matrix(ext, piece.ambient_cols)
        FP = la.mat_mul(ambient_L, res["filtration"])
        FB = FP if FB is None else _concat(FB, FP)
    FB = la.normalize_columns(FB)
    # verify the glued quotient filtration end to end
    spaceB = SymplecticSpace(ext, lift_matrix(ext, sa.gram_B), validate=False)
    LagrangianSubspace(spaceB, FB, validate=True, guard=guard)
    reportB = _admissible_with_fallback(DB, FB, ext, adm_mode, seed,
                                        adm_budget, guard)
    if not reportB.verdict:
        raise InternalContradictionError("glued quotient filtration failed "
                                         "admissibility re-verification")
    if not is_diagonally_stable(repB, FB, setup, guard):
        raise InternalContradictionError("glued quotient filtration is not "
                                         "diagonally stable")
    # pull back over the toric part
    toric_L = lift_matrix(ext, sa.toric_cols) if t else None
    section_L = lift_matrix(ext, sa.section_cols)
    lifted = la.mat_mul(section_L, FB)
    F = _concat(toric_L, lifted) if t else lifted
    F = la.normalize_columns(F)
    report = _admissible_with_fallback(D, F, ext, adm_mode, seed, adm_budget,
                                       guard)
    if not report.verdict:
        raise InternalContradictionError("pulled-back filtration failed "
                                         "admissibility")
    graded_toric = True
    if t:
        graded_toric = la.subspace_leq(toric_L, F, guard)
        if not graded_toric:
            raise InternalContradictionError("toric part is not inside the "
                                             "pulled-back filtration")
    stable = is_diagonally_stable(rep, F, setup, guard)
    if not stable and not allow_non_phi_compatible:
        raise InternalContradictionError("full filtration is not stable")
    datum = DescentDatum(rep, setup)
    return {
        "filtration": F,
        "quotient_filtration": FB,
        "admissibility": report,
        "quotient_admissibility": reportB,
        "graded": {"toric": graded_toric, "quotient": bool(reportB.verdict)},
        "stable": stable,
        "lagrangian": True,
        "descent": datum,
        "cocycle": datum.verify_cocycle(),
        "descent_targets": datum.verify_filtration_targets(F, guard),
        "pieces": [{"dim": p.dim, "slopes": [str(s) for s in p.slopes],
                    "witness": (r["witness"][0] if r.get("witness") else None),
                    "admissibility": r["admissibility"].as_dict()}
                   for p, r in piece_results],
        "seed": seed, "budget": budget,
        "descent_datum_guaranteed": not allow_non_phi_compatible,
    }


def _mode_for(piece):
    # exact admissibility needs multiplicity-free pieces
    for s in piece.slopes:
        b = s.denominator
        # piece isoclinic: dim == b iff simple
        if piece.dim != b * len(piece.slopes):
            return "sampled"
    return "exact"


def _admissible_with_fallback(D, F, ext, mode, seed, budget, guard):
    try:
        return is_admissible(D, F, ext, mode, seed=seed, budget=budget,
                             guard=guard)
    except MultiplicityError:
        return is_admissible(D, F, ext, "sampled", seed=seed,
                             budget=budget, guard=guard)


def _quotient_rep(sa: SemiAbelianPhiModule, rep: GroupRepresentation,
                  guard) -> GroupRepresentation:
    if sa.t_dim == 0:
        return rep
    mats = []
    for x in range(rep.group.n):
        coords = la.mat_mul(sa.full_inv,
                            la.mat_mul(rep.mats[x], sa.section_cols))
        mats.append([row[:] for row in coords[sa.t_dim:]])
    return GroupRepresentation(rep.group, rep.field, mats, faithful=False)
