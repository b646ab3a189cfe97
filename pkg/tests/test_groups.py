"""Group constructions, representation validation, character tables."""

import pytest
from fractions import Fraction

from isofilt.errors import ValidationError
from isofilt.fixtures import (unramified, quaternion_pair, quaternion_rep,
                              wreath_block_rep, block_frobenius_module,
                              scalar_c2_rep)
from isofilt.groups.constructions import (all_groups_up_to_16, quaternion,
                                          cyclic, dihedral, dicyclic,
                                          wreath_q8_sylow)
from isofilt.groups.characters import CharacterTable
from isofilt.groups.core import GroupRepresentation
from isofilt.isocrystal.module import standard_symplectic_gram
from isofilt.padic import linalg as la


def test_classification_counts():
    gs = all_groups_up_to_16()
    assert len(gs) == 42
    by_order = {}
    for lbl, g in gs:
        by_order.setdefault(g.n, []).append(lbl)
    expected = {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2,
                11: 1, 12: 5, 13: 1, 14: 2, 15: 1, 16: 14}
    assert {n: len(v) for n, v in by_order.items()} == expected


def test_fingerprints_distinguish_all():
    fps = {}
    for lbl, g in all_groups_up_to_16():
        fp = g.fingerprint()
        assert fp not in fps, (lbl, fps.get(fp))
        fps[fp] = lbl


def test_quaternion_table():
    q8 = quaternion()
    nm = q8.names
    mul = lambda a, b: nm[q8.table[nm.index(a)][nm.index(b)]]
    assert mul("i", "j") == "k"
    assert mul("j", "i") == "-k"
    assert mul("i", "i") == "-1"
    assert mul("k", "k") == "-1"
    assert sorted(q8.element_orders()) == [1, 2, 4, 4, 4, 4, 4, 4]


def test_dicyclic_is_q8():
    assert dicyclic(2).fingerprint() == quaternion().fingerprint()


def test_wreath_sylow_orders():
    assert wreath_q8_sylow(1).n == 8
    assert wreath_q8_sylow(2).n == 128


def test_quaternion_rep_validates():
    Q4 = unramified(2, 2, 24)
    rep = quaternion_rep(Q4)
    from isofilt.fixtures import supersingular_module
    D = supersingular_module(Q4)
    J = standard_symplectic_gram(Q4, 1)
    assert rep.validate(phi_module=D, gram=J)


def test_rep_validation_rejects_broken_table():
    Q4 = unramified(2, 2, 24)
    G = cyclic(2)
    bad = GroupRepresentation(G, Q4, [la.identity(Q4, 2),
                                      la.from_rows_of_fractions(Q4, [[1, 1], [0, 1]])])
    with pytest.raises(ValidationError):
        bad.validate()


def test_rep_validation_rejects_unfaithful_claim():
    Q4 = unramified(2, 2, 24)
    G = cyclic(2)
    bad = GroupRepresentation(G, Q4, [la.identity(Q4, 2)] * 2, faithful=True)
    with pytest.raises(ValidationError):
        bad.validate()


def test_rep_validation_rejects_non_phi_commuting():
    Q4 = unramified(2, 2, 24)
    from isofilt.fixtures import supersingular_module
    D = supersingular_module(Q4)
    G = cyclic(2)
    m = la.from_rows_of_fractions(Q4, [[1, 0], [0, -1]])  # not in End(D)
    rep = GroupRepresentation(G, Q4, [la.identity(Q4, 2), m])
    with pytest.raises(ValidationError):
        rep.validate(phi_module=D)


def test_wreath_block_rep_g2():
    Q4 = unramified(2, 2, 24)
    rep = wreath_block_rep(Q4, 2)
    D = block_frobenius_module(Q4, 2)
    J = standard_symplectic_gram(Q4, 2)
    assert rep.validate(phi_module=D, gram=J, table_mode="sample")
    assert rep.group.n == 128


def test_is_scalar_image():
    Q4 = unramified(2, 2, 24)
    assert scalar_c2_rep(Q4, 3).is_scalar_image()
    assert not quaternion_rep(Q4).is_scalar_image()


def test_character_tables_small_groups():
    for lbl, g in all_groups_up_to_16():
        ct = CharacterTable(g)
        assert sum(d * d for d in ct.degrees) == g.n, lbl
        assert ct.orthogonality_check(), lbl


def test_character_table_q8():
    ct = CharacterTable(quaternion())
    assert sorted(ct.degrees) == [1, 1, 1, 1, 2]
    chi2 = ct.degrees.index(2)
    q8 = quaternion()
    kcls = ct.class_of[q8.names.index("k")]
    assert ct.eigenvalue_multiplicities(chi2, kcls) == [(4, 1), (4, 1)]
    mcls = ct.class_of[q8.names.index("-1")]
    assert ct.eigenvalue_multiplicities(chi2, mcls) == [(2, 2)]


def test_twist_and_dual_are_characters():
    ct = CharacterTable(dihedral(4))
    for chi in range(ct.k):
        assert 0 <= ct.dual(chi) < ct.k
        for a in (1, 3):
            assert 0 <= ct.twist(chi, a) < ct.k
