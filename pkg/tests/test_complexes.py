import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from c2mackey.complexes import (U, ChainMap, FreeComplex, box_chain_map,
                                box_complex, canonicalize, compose_chain_maps,
                                cone, cotens_H, direct_sum_complexes,
                                ecompose, hom_complex_dim, homology_counts,
                                identity_chain_map, is_null_homotopic,
                                null_homotopy, realize, shift_complex,
                                strand, validate_chain_map, validate_complex)


# -- arrow algebra ---------------------------------------------------------

def test_arrow_composition_identities():
    # u . u = 0, p . u = 0, u . p = 0 in both F/H windings
    assert ecompose("F", "F", "F", U, U) == 0
    assert ecompose("F", "F", "H", U, 1) == 0
    assert ecompose("H", "F", "F", 1, U) == 0
    # p . p through H is u; through F (up then down) it is 2 = 0
    assert ecompose("F", "H", "F", 1, 1) == U
    assert ecompose("H", "F", "H", 1, 1) == 0
    # t is an involution and t . u = u
    assert ecompose("F", "F", "F", 2, 2) == 1
    assert ecompose("F", "F", "F", U, 2) == U
    assert ecompose("F", "F", "F", 2, U) == U


@settings(max_examples=80, deadline=None)
@given(st.sampled_from("FH"), st.sampled_from("FH"), st.sampled_from("FH"),
       st.sampled_from("FH"), st.integers(0, 3), st.integers(0, 3),
       st.integers(0, 3))
def test_arrow_composition_associative(ka, kb, kc, kd, e1, e2, e3):
    def clip(ks, kt, e):
        return e if (ks == "F" and kt == "F") else (e & 1)
    e1, e2, e3 = clip(ka, kb, e1), clip(kb, kc, e2), clip(kc, kd, e3)
    left = ecompose(ka, kc, kd, ecompose(ka, kb, kc, e1, e2), e3)
    right = ecompose(ka, kb, kd, e1, ecompose(kb, kc, kd, e2, e3))
    assert left == right


# -- canonical strands -------------------------------------------------------

def test_strand_shapes():
    a2 = strand("A", 2)
    assert a2.min_degree == 0 and a2.gens == [["F"], ["F"], ["F"]]
    assert a2.diffs == [[[U]], [[U]]]
    h2 = strand("Hn", 2)
    assert h2.min_degree == -2 and h2.gens == [["H"], ["F"], ["F"]]
    hm2 = strand("Hn", -2)
    assert hm2.min_degree == 0 and hm2.gens == [["F"], ["F"], ["H"]]
    b0 = strand("B", 0)
    assert b0.min_degree == -2 and b0.gens == [["H"], ["F"], ["H"]]
    for c in (a2, h2, hm2, b0):
        assert validate_complex(c) == []


def test_validate_rejects_broken_differential():
    c = FreeComplex(0, [["F"], ["F"], ["F"]], [[[1]], [[1]]])
    errs = validate_complex(c)
    assert any("d*d" in e for e in errs)


def test_shift_and_sum():
    c = direct_sum_complexes([shift_complex(strand("A", 1), 2), strand("B", 0)])
    assert validate_complex(c) == []
    assert c.min_degree == -2 and c.max_degree == 3
    assert c.num_gens() == 2 + 3


def test_canonicalize_orders_f_before_h():
    c = FreeComplex(0, [["H", "F"]], [])
    assert canonicalize(c).gens == [["F", "H"]]


def test_complex_json_roundtrip():
    c = direct_sum_complexes([strand("Hn", -3), shift_complex(strand("A", 2), 1)])
    again = FreeComplex.from_json(json.loads(json.dumps(c.to_json())))
    assert again == c


# -- realization and homology -------------------------------------------------

def test_realize_differentials_square_to_zero():
    from c2mackey.mackey import validate_module
    for s, p in (("A", 3), ("Hn", 2), ("Hn", -3), ("B", 2)):
        c = strand(s, p)
        mods, maps = realize(c, 2)
        assert all(validate_module(m) == [] for m in mods)
        for i in range(len(maps) - 1):
            comp = maps[i].compose(maps[i + 1])
            assert comp.f_theta.is_zero() and comp.f_dot.is_zero()


def a_homology(k):
    if k == 0:
        return {0: {"F": 1}}
    if k == 1:
        return {1: {"H": 1}, 0: {"Hop": 1}}
    out = {k: {"H": 1}, 0: {"Hop": 1}}
    for i in range(1, k):
        out[i] = {"SDot": 1}
    return out


def hn_homology(n):
    if n == 0:
        return {0: {"H": 1}}
    if n > 0:
        out = {0: {"H": 1}}
        for i in range(-n, 0):
            out[i] = {"SDot": 1}
        return out
    j = -n
    if j == 1:
        return {0: {"STheta": 1}}
    if j == 2:
        return {0: {"Hop": 1}}
    out = {0: {"Hop": 1}}
    for i in range(1, j - 1):
        out[i] = {"SDot": 1}
    return out


def b_homology(r):
    return {i: {"SDot": 1} for i in range(-(r + 2), -1)}


def test_strand_homology_all_families():
    for k in range(0, 7):
        assert homology_counts(strand("A", k)) == a_homology(k), ("A", k)
    for n in range(-7, 8):
        assert homology_counts(strand("Hn", n)) == hn_homology(n), ("Hn", n)
    for r in range(0, 7):
        assert homology_counts(strand("B", r)) == b_homology(r), ("B", r)


def test_homology_shift_invariance():
    c = strand("B", 1)
    shifted = homology_counts(shift_complex(c, 3))
    assert shifted == {d + 3: v for d, v in homology_counts(c).items()}


def test_cone_of_identity_is_acyclic():
    for s, p in (("A", 2), ("Hn", -2), ("B", 0)):
        c = cone(identity_chain_map(strand(s, p)))
        assert validate_complex(c) == []
        assert homology_counts(c) == {}


# -- chain maps ---------------------------------------------------------------

def test_chain_map_validation_and_composition():
    a1 = strand("A", 1)
    f = identity_chain_map(a1)
    assert validate_chain_map(f) == []
    g = compose_chain_maps(f, f)
    assert g.components == f.components
    # a non-commuting assignment is rejected
    bad = ChainMap(strand("Hn", 0), strand("Hn", 1), {0: [[0], [1]]}, 0)
    assert bad.components[0] == [[0], [1]] and validate_chain_map(bad)


def test_chain_map_json_roundtrip():
    c = strand("Hn", 1)
    f = identity_chain_map(c)
    again = ChainMap.from_json(json.loads(json.dumps(f.to_json())))
    assert again.components == f.components
    assert again.source == c and again.target == c


def test_null_homotopy_witness():
    # the identity of a disk is null-homotopic: dh + hd = f
    disk = cone(identity_chain_map(strand("A", 0)))
    f = identity_chain_map(disk)
    h = null_homotopy(f)
    assert h is not None and h.degree == 1
    for d in disk.degrees():
        ks = disk.gens_at(d)
        acc = [[0] * len(ks) for _ in ks]
        dn = disk.diff(d + 1)
        if dn is not None:       # d . h at degree d
            hm = h.component(d)
            up = disk.gens_at(d + 1)
            for r in range(len(ks)):
                for c in range(len(ks)):
                    for q in range(len(up)):
                        acc[r][c] ^= ecompose(ks[c], up[q], ks[r],
                                              hm[q][c], dn[r][q])
        dd = disk.diff(d)
        if dd is not None:       # h . d at degree d
            hm1 = h.component(d - 1)
            dn1 = disk.gens_at(d - 1)
            for r in range(len(ks)):
                for c in range(len(ks)):
                    for q in range(len(dn1)):
                        acc[r][c] ^= ecompose(ks[c], dn1[q], ks[r],
                                              dd[q][c], hm1[r][q])
        assert acc == f.component(d), d
    assert is_null_homotopic(f)
    assert not is_null_homotopic(identity_chain_map(strand("Hn", 0)))
    assert null_homotopy(identity_chain_map(strand("Hn", 0))) is None


def test_hom_group_dimensions():
    unit = strand("Hn", 0)
    assert hom_complex_dim(unit, unit, 0) == 1
    assert hom_complex_dim(unit, strand("Hn", -1), 0) == 0
    assert hom_complex_dim(unit, shift_complex(strand("Hn", 1), 1), 0) == 1
    a0 = strand("A", 0)
    # endomorphisms of F: spanned by 1 and t
    assert hom_complex_dim(a0, a0, 0) == 2


# -- box products -------------------------------------------------------------

def test_box_with_unit():
    unit = strand("Hn", 0)
    for s, p in (("A", 2), ("Hn", 3), ("Hn", -2), ("B", 1)):
        c = strand(s, p)
        prod = box_complex(c, unit)
        assert validate_complex(prod) == []
        assert homology_counts(prod) == homology_counts(c), (s, p)


def test_box_symmetric_dimensions():
    x, y = strand("A", 1), strand("B", 0)
    xy, yx = box_complex(x, y), box_complex(y, x)
    assert [len(g) for g in xy.gens] == [len(g) for g in yx.gens]
    assert homology_counts(xy) == homology_counts(yx)


def test_box_chain_map_functorial():
    x = strand("A", 1)
    idx = identity_chain_map(x)
    f = box_chain_map(idx, idx)
    assert f.source == box_complex(x, x) == f.target
    assert validate_chain_map(f) == []
    assert not is_null_homotopic(f)


def test_cotens_inspection_formulas():
    for k in range(0, 5):
        assert cotens_H(strand("A", k)) == shift_complex(strand("A", k), -k)
    for n in range(-5, 6):
        assert cotens_H(strand("Hn", n)) == strand("Hn", -n)
    for r in range(0, 5):
        assert cotens_H(strand("B", r)) == shift_complex(strand("B", r), r + 2)


def test_cotens_is_an_involution_on_strands():
    for s, p in (("A", 3), ("Hn", 2), ("B", 1)):
        c = strand(s, p)
        assert cotens_H(cotens_H(c)) == c
