"""Tower arithmetic: valuations, Frobenius, automorphism tables, certified rank."""

import random
from fractions import Fraction

import pytest

from isofilt.errors import PrecisionError, ValidationError
from isofilt.padic import (UnramifiedFieldDescriptor, EisensteinExtensionDescriptor,
                           sc_add, sc_sub, sc_mul, sc_div, sc_inv, sc_pow,
                           sc_frobenius, linalg as la)
from oracles import rational_rank

N = 24


@pytest.fixture(scope="module")
def Q2():
    return UnramifiedFieldDescriptor.create(2, 1, N)


@pytest.fixture(scope="module")
def Q4():
    return UnramifiedFieldDescriptor.create(2, 2, N)


@pytest.fixture(scope="module")
def Q7():
    return UnramifiedFieldDescriptor.create(7, 1, N)


@pytest.fixture(scope="module")
def L_sqrt2(Q2):
    return EisensteinExtensionDescriptor(Q2, (-2, 0, 1), {"e": [0, 1], "s": [0, -1]})


def rand_fraction(rng, p):
    num = rng.randrange(-200, 201)
    den = rng.choice([1, 1, 1, p, p * p, 3, 5]) * rng.randrange(1, 12)
    return Fraction(num, den)


def test_exact_valuations_rationals(Q2):
    assert Q2.scalar(Fraction(3, 4)).val == -2
    assert Q2.scalar(48).val == 4
    assert Q2.scalar(Fraction(5, 7)).val == 0


def test_valuation_multiplicativity(Q2):
    rng = random.Random(11)
    for _ in range(200):
        a = rand_fraction(rng, 2)
        b = rand_fraction(rng, 2)
        if a == 0 or b == 0:
            continue
        x, y = Q2.scalar(a), Q2.scalar(b)
        assert sc_mul(x, y).val == x.val + y.val


def test_valuation_ultrametric(Q2):
    rng = random.Random(12)
    for _ in range(200):
        a = rand_fraction(rng, 2)
        b = rand_fraction(rng, 2)
        if a == 0 or b == 0 or a + b == 0:
            continue
        x, y = Q2.scalar(a), Q2.scalar(b)
        s = sc_add(x, y)
        assert s.val >= min(x.val, y.val)
        if x.val != y.val:
            assert s.val == min(x.val, y.val)


def test_arithmetic_matches_rationals(Q4):
    rng = random.Random(13)
    for _ in range(100):
        a = rand_fraction(rng, 2)
        b = rand_fraction(rng, 2)
        if b == 0:
            continue
        got = sc_div(Q4.scalar(a), Q4.scalar(b))
        want = Q4.scalar(a / b)
        d = sc_sub(got, want)
        assert d.kind != "reg"


def test_frobenius_fixes_rationals(Q4):
    x = Q4.scalar(7)
    fx = sc_frobenius(x)
    assert sc_sub(fx, x).kind != "reg"


def test_frobenius_is_squaring_on_generator(Q4):
    w = Q4.gen()
    assert sc_sub(sc_frobenius(w), sc_pow(w, 2)).kind != "reg"


def test_frobenius_order_f(Q4):
    rng = random.Random(14)
    for _ in range(100):
        coeffs = [rand_fraction(rng, 2) for _ in range(2)]
        x = sc_add(Q4.scalar(coeffs[0]), sc_mul(Q4.scalar(coeffs[1]), Q4.gen()))
        if x.kind != "reg":
            continue
        y = sc_frobenius(sc_frobenius(x))
        assert sc_sub(y, x).kind != "reg"


def test_teichmuller_roots(Q7, Q4):
    z6 = Q7.teichmuller(6)
    assert sc_sub(sc_pow(z6, 6), Q7.one()).kind != "reg"
    assert sc_sub(sc_pow(z6, 3), Q7.one()).kind == "reg"  # primitive
    z3 = Q4.teichmuller(3)
    assert sc_sub(sc_pow(z3, 3), Q4.one()).kind != "reg"


def test_eisenstein_validation_rejects_non_eisenstein(Q2):
    with pytest.raises(ValidationError):
        EisensteinExtensionDescriptor(Q2, (-3, 0, 1))  # v(3) = 0 at p=2
    with pytest.raises(ValidationError):
        EisensteinExtensionDescriptor(Q2, (-4, 0, 1))  # v(4) = 2


def test_automorphism_table_group(L_sqrt2):
    assert L_sqrt2.identity_name == "e"
    assert L_sqrt2.compose_table[("s", "s")] == "e"
    # images permute the roots of E transitively: e(u) = u, s(u) = -u distinct
    imgs = {n: rec.image for n, rec in L_sqrt2.automorphisms.items()}
    assert imgs["e"] != imgs["s"]


def test_automorphism_table_rejects_broken_table(Q2):
    with pytest.raises(ValidationError):
        EisensteinExtensionDescriptor(Q2, (-2, 0, 1), {"e": [0, 1], "bad": [1, 1]})


def test_c4_cyclotomic_fixture_table(Q2):
    C4 = EisensteinExtensionDescriptor(
        Q2, (2, 0, -4, 0, 1),
        {"e": [0, 1], "g": [0, -3, 0, 1], "g2": [0, -1], "g3": [0, 3, 0, -1]})
    assert C4.compose_table[("g", "g")] == "g2"
    assert C4.compose_table[("g", "g3")] == "e"
    pi = C4.uniformizer()
    img = C4.apply("g", pi)
    assert img.val == Fraction(1, 4)


def test_value_group_of_eisenstein(L_sqrt2):
    s2 = L_sqrt2.uniformizer()
    assert s2.val == Fraction(1, 2)
    assert sc_mul(s2, s2).val == 1
    x = sc_add(L_sqrt2.scalar(2), s2)  # val 1/2 wins
    assert x.val == Fraction(1, 2)


def test_galois_conjugate_of_uniformizer(L_sqrt2):
    s2 = L_sqrt2.uniformizer()
    c = L_sqrt2.apply("s", s2)
    assert c.val == Fraction(1, 2)
    assert sc_add(s2, c).kind == "izero"  # s + (-s)


# -- certified rank -------------------------------------------------------------


def test_rank_identity(Q2):
    assert la.certified_rank(la.identity(Q2, 3)) == 3


def test_rank_zero_matrix(Q2):
    z = [[Q2.scalar(0)] * 2 for _ in range(2)]
    assert la.certified_rank(z) == 0


def test_rank_refuses_pivot_below_guard(Q2):
    hidden = sc_add(Q2.scalar(1), Q2.scalar(2 ** (N - 1)))
    m = [[Q2.scalar(1), Q2.scalar(1)], [Q2.scalar(1), hidden]]
    with pytest.raises(PrecisionError):
        la.certified_rank(m, guard=N // 2)


def test_rank_agrees_with_rational_oracle(Q2, Q4):
    rng = random.Random(15)
    for field in (Q2, Q4):
        for _ in range(60):
            nr = rng.randrange(1, 5)
            nc = rng.randrange(1, 5)
            rows = [[rand_fraction(rng, 2) for _ in range(nc)] for _ in range(nr)]
            if rng.random() < 0.5:
                # force rank deficiency: duplicate a row combination
                if nr >= 2:
                    rows[-1] = [a + b for a, b in zip(rows[0], rows[nr // 2])]
            m = la.from_rows_of_fractions(field, rows)
            assert la.certified_rank(m) == rational_rank(rows)


def test_det_valuation(Q2):
    m = la.from_rows_of_fractions(Q2, [[2, 0], [0, Fraction(3, 4)]])
    assert la.det_valuation(m) == -1


def test_kernel_and_solve(Q2):
    rows = [[1, 2, 3], [2, 4, 6]]
    m = la.from_rows_of_fractions(Q2, rows)
    ker = la.kernel_basis(m)
    assert len(ker) == 2
    for v in ker:
        img = la.mat_mul(m, [[x] for x in v])
        assert all(cell[0].kind != "reg" for cell in img)


def test_intersection_dim(Q2):
    a = la.from_rows_of_fractions(Q2, [[1, 0], [0, 1], [0, 0]])
    b = la.from_rows_of_fractions(Q2, [[0], [1], [1]])
    assert la.intersection_dim(a, b) == 0
    c = la.from_rows_of_fractions(Q2, [[1], [1], [0]])
    assert la.intersection_dim(a, c) == 1


def test_guard_certificate_reported(Q2):
    m = la.from_rows_of_fractions(Q2, [[4, 0], [0, 8]])
    cert = la.rank_certificate(m, guard=8)
    assert cert.rank == 2
    assert sorted(cert.pivot_vals) == [2, 3]
    assert cert.guard == 8
