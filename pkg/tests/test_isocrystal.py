"""Slope theory: t_N, Newton slopes, isoclinic decomposition, duality,
submodule enumeration, polarized structure."""

import random
from fractions import Fraction

import pytest

from isofilt.errors import MultiplicityError, ValidationError
from isofilt.padic import UnramifiedFieldDescriptor, linalg as la
from isofilt.isocrystal.module import (PhiModule, PolarizedPhiModule,
                                       SemiAbelianPhiModule,
                                       standard_symplectic_gram)
from isofilt.isocrystal.slopes import newton_slopes, isoclinic_decompose, SlopeProfile
from isofilt.isocrystal.submodules import submodules, endomorphism_algebra

N = 24


@pytest.fixture(scope="module")
def Q2():
    return UnramifiedFieldDescriptor.create(2, 1, N)


@pytest.fixture(scope="module")
def Q4():
    return UnramifiedFieldDescriptor.create(2, 2, N)


def ss_module(field):
    return PhiModule.from_rational(field, [[0, 2], [1, 0]])


def test_t_N_examples(Q2):
    assert ss_module(Q2).t_N() == 1
    assert PhiModule.from_rational(Q2, [[1, 0], [0, 1]]).t_N() == 0
    D = PhiModule.from_rational(Q2, [[1, 0, 0], [0, 2, 0], [0, 0, 2]])
    assert D.t_N() == 2


def test_newton_slopes_examples(Q2):
    assert newton_slopes(ss_module(Q2)).pairs == ((Fraction(1, 2), 2),)
    I = PhiModule.from_rational(Q2, [[1, 0], [0, 1]])
    assert newton_slopes(I).pairs == ((Fraction(0), 2),)
    Dp = PhiModule.from_rational(Q2, [[1, 0], [0, 2]])
    assert newton_slopes(Dp).pairs == ((Fraction(0), 1), (Fraction(1), 1))


def test_slopes_divided_by_f(Q4):
    # same matrix over Q_4: still pure 1/2
    assert newton_slopes(ss_module(Q4)).pairs == ((Fraction(1, 2), 2),)


def test_simple_module_constructor(Q2):
    D = PhiModule.simple(Q2, 1, 3)
    assert newton_slopes(D).pairs == ((Fraction(1, 3), 3),)
    D2 = PhiModule.simple(Q2, 2, 3)
    assert newton_slopes(D2).pairs == ((Fraction(2, 3), 3),)


def test_basis_change_invariance(Q2):
    rng = random.Random(21)
    for _ in range(20):
        n = rng.randrange(2, 5)
        D = _random_module(Q2, n, rng)
        prof = newton_slopes(D)
        P = _random_invertible(Q2, n, rng)
        D2 = D.base_change(P)
        assert newton_slopes(D2).pairs == prof.pairs


def _random_module(field, n, rng):
    while True:
        rows = [[Fraction(rng.randrange(-8, 9), rng.choice([1, 1, 2]))
                 for _ in range(n)] for _ in range(n)]
        try:
            return PhiModule.from_rational(field, rows)
        except Exception:
            continue


def _random_invertible(field, n, rng):
    while True:
        rows = [[rng.randrange(-5, 6) for _ in range(n)] for _ in range(n)]
        m = la.from_rows_of_fractions(field, rows)
        try:
            la.det_valuation(m)
            return m
        except Exception:
            continue


def test_isoclinic_decompose_examples(Q2):
    Dp = PhiModule.from_rational(Q2, [[1, 0], [0, 2]])
    dec = isoclinic_decompose(Dp)
    assert [(s, len(c[0])) for s, c in dec] == [(Fraction(0), 1), (Fraction(1), 1)]
    S = ss_module(Q2)
    dec = isoclinic_decompose(S)
    assert len(dec) == 1 and len(dec[0][1][0]) == 2
    mixed = PhiModule.from_rational(
        Q2, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 2], [0, 0, 1, 0]])
    dec = isoclinic_decompose(mixed)
    assert [(s, len(c[0])) for s, c in dec] == [(Fraction(0), 2), (Fraction(1, 2), 2)]


def test_isoclinic_pieces_are_pure():
    from isofilt.precision import with_escalation
    rng = random.Random(22)
    slopes_pool = [(0, 1), (1, 1), (1, 2), (1, 3), (2, 3)]
    for _ in range(10):
        picks = rng.sample(slopes_pool, rng.randrange(2, 4))
        rows_list = [PhiModule.simple(UnramifiedFieldDescriptor.create(2, 1, 8),
                                      s, r).A for s, r in picks]
        dims = [len(a) for a in rows_list]
        seed_state = rng.getstate()

        def run(prec):
            rng.setstate(seed_state)
            field = UnramifiedFieldDescriptor.create(2, 1, prec)
            D = None
            for s, r in picks:
                M = PhiModule.simple(field, s, r)
                D = M if D is None else D.direct_sum(M)
            P = _random_invertible(field, D.n, rng)
            D = D.base_change(P)
            for slope, cols in isoclinic_decompose(D):
                sub = D.submodule(cols)
                assert newton_slopes(sub).pairs == ((slope, len(cols[0])),)

        with_escalation(run, N)


def test_dual_examples(Q2):
    Dp = PhiModule.from_rational(Q2, [[1, 0], [0, 2]])
    assert newton_slopes(Dp.dual(1)).pairs == ((Fraction(0), 1), (Fraction(1), 1))
    I = PhiModule.from_rational(Q2, [[1, 0], [0, 1]])
    assert newton_slopes(I.dual(0)).pairs == ((Fraction(0), 2),)
    assert newton_slopes(Dp.dual(0)).pairs == ((Fraction(-1), 1), (Fraction(0), 1))


def test_double_dual_is_identity(Q2):
    rng = random.Random(23)
    for _ in range(10):
        D = _random_module(Q2, 3, rng)
        dd = D.dual(1).dual(1)
        diff = la.mat_sub(dd.A, D.A)
        assert la.mat_is_zero(diff, Fraction(N - 6))


def test_t_N_additive_and_slope_union(Q2):
    A = PhiModule.simple(Q2, 1, 2)
    B = PhiModule.from_rational(Q2, [[1, 0], [0, 2]])
    S = A.direct_sum(B)
    assert S.t_N() == A.t_N() + B.t_N()
    pa = newton_slopes(A).multiset()
    pb = newton_slopes(B).multiset()
    ps = newton_slopes(S).multiset()
    assert tuple(sorted(pa + pb)) == ps


def test_exact_submodules_examples(Q2):
    Dp = PhiModule.from_rational(Q2, [[1, 0], [0, 2]])
    subs = submodules(Dp, "exact").subspaces
    assert sorted(len(c[0]) if c and c[0] else 0 for c in subs) == [0, 1, 1, 2]
    S = ss_module(Q2)
    subs = submodules(S, "exact").subspaces
    assert sorted(len(c[0]) if c and c[0] else 0 for c in subs) == [0, 2]


def test_exact_mode_rejects_multiplicity(Q4):
    DD = ss_module(Q4).direct_sum(ss_module(Q4))
    with pytest.raises(MultiplicityError):
        submodules(DD, "exact")


def test_sampled_submodules_stable_and_seeded(Q4):
    DD = ss_module(Q4).direct_sum(ss_module(Q4))
    s1 = submodules(DD, "sampled", budget=20, seed=5)
    s2 = submodules(DD, "sampled", budget=20, seed=5)
    assert len(s1.subspaces) == len(s2.subspaces)
    for c in s1.subspaces:
        if c and c[0]:
            assert DD.is_stable(c)
    dims = {len(c[0]) for c in s1.subspaces if c and c[0]}
    assert 2 in dims  # found proper submodules


def test_submodule_slopes_are_sub_multisets(Q2):
    Dp = PhiModule.from_rational(Q2, [[1, 0], [0, 2]]).direct_sum(
        PhiModule.simple(Q2, 1, 2))
    prof = newton_slopes(Dp)
    for cols in submodules(Dp, "exact").subspaces:
        if not (cols and cols[0]):
            continue
        sub = Dp.submodule(cols)
        assert newton_slopes(sub).is_sub_multiset_of(prof)


def test_endomorphism_algebra_dimensions(Q2, Q4):
    # slope-1/2 simple: commutative Q_2[A] at f=1, quaternion at f=2
    assert len(endomorphism_algebra(ss_module(Q2))) == 2
    assert len(endomorphism_algebra(ss_module(Q4))) == 4


def test_polarized_validation_and_eps(Q2):
    S = ss_module(Q2)
    J = standard_symplectic_gram(Q2, 1)
    P = PolarizedPhiModule(S, J)
    assert P.eps == -1
    Dp = PhiModule.from_rational(Q2, [[1, 0], [0, 2]])
    P2 = PolarizedPhiModule(Dp, la.from_rows_of_fractions(Q2, [[0, 1], [-1, 0]]))
    assert P2.eps == 1


def test_polarized_rejects_incompatible(Q2):
    D = PhiModule.from_rational(Q2, [[1, 0], [0, 4]])  # slopes 0,2
    with pytest.raises(ValidationError):
        PolarizedPhiModule(D, la.from_rows_of_fractions(Q2, [[0, 1], [-1, 0]]))


def test_polarized_slope_symmetry(Q2, Q4):
    rng = random.Random(24)
    for field in (Q2, Q4):
        for g in (1, 2):
            D, J = _random_polarized(field, g, rng)
            prof = newton_slopes(D)
            ms = list(prof.multiset())
            assert sorted(ms) == sorted(1 - s for s in ms)


def _random_polarized(field, g, rng):
    # build an abelian polarized module by symplectic base change of a
    # standard one
    base = None
    for _ in range(g):
        pick = rng.choice(["ss", "ord"])
        M = (ss_module(field) if pick == "ss"
             else PhiModule.from_rational(field, [[1, 0], [0, field.p]]))
        base = M if base is None else base.direct_sum(M)
    J = _gram_for(field, base, g)
    return base, J


def _gram_for(field, D, g):
    rows = [[0] * (2 * g) for _ in range(2 * g)]
    for k in range(g):
        blk = D.A[2 * k][2 * k + 1]
        # [[0,1],[-1,0]] works for diag(1,p); [[0,-1],[1,0]] for the 1/2 block
        if blk.kind == "reg":  # [[0,2],[1,0]] block
            rows[2 * k][2 * k + 1] = -1
            rows[2 * k + 1][2 * k] = 1
        else:
            rows[2 * k][2 * k + 1] = 1
            rows[2 * k + 1][2 * k] = -1
    P = PolarizedPhiModule(D, la.from_rows_of_fractions(field, rows))
    return P.J


def test_semi_abelian_structure(Q2):
    # D = torus (slope 1) + diag(1,p)
    A = [[2, 0, 0], [0, 1, 0], [0, 0, 2]]
    D = PhiModule.from_rational(Q2, A)
    toric = la.from_rows_of_fractions(Q2, [[1], [0], [0]])
    gram_B = la.from_rows_of_fractions(Q2, [[0, 1], [-1, 0]])
    SA = SemiAbelianPhiModule(D, toric, gram_B)
    assert SA.t_dim == 1 and SA.B_dim == 2
    QB = SA.quotient_module()
    assert newton_slopes(QB).pairs == ((Fraction(0), 1), (Fraction(1), 1))


def test_semi_abelian_rejects_bad_toric(Q2):
    A = [[1, 0, 0], [0, 1, 0], [0, 0, 2]]
    D = PhiModule.from_rational(Q2, A)
    toric = la.from_rows_of_fractions(Q2, [[1], [0], [0]])  # slope 0, not 1
    gram_B = la.from_rows_of_fractions(Q2, [[0, 1], [-1, 0]])
    with pytest.raises(ValidationError):
        SemiAbelianPhiModule(D, toric, gram_B)
