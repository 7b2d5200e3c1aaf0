"""Derived-category layer: box/cotensor formulas, cohomology windows,
the bigraded ring of the unit, Toda witness, Picard classes, and support."""

import itertools
import random
from collections import Counter

import pytest

from c2mackey.complexes import validate_chain_map
from c2mackey.derived import (
    balmer_support,
    class_rep,
    cohomology_formula,
    cohomology_window,
    dbox,
    dbox_formula_pair,
    dbox_pair,
    dcotens_formula_pair,
    dcotens_pair,
    invertible_class,
    is_invertible,
    m2_dim,
    m2_product_nonzero,
    m2_product_rule,
    m2_ring_window,
    op_dual_strand,
    serre_check,
    sufficient_window,
    toda_witness,
)
from c2mackey.split import Strand, decomposition_sum

PARAMS = 4

STRANDS = (
    [Strand("A", k, s) for k in range(PARAMS + 1) for s in (-2, 0, 1)]
    + [Strand("Hn", n, s) for n in range(-PARAMS, PARAMS + 1) for s in (-1, 0, 2)]
    + [Strand("B", r, s) for r in range(PARAMS + 1) for s in (0, -3)]
)

BASE = [
    Strand(kind, param, 0)
    for kind, param in [
        ("A", 0),
        ("A", 2),
        ("Hn", -3),
        ("Hn", -1),
        ("Hn", 0),
        ("Hn", 2),
        ("B", 0),
        ("B", 2),
    ]
]


def _pairs():
    rng = random.Random(7)
    pairs = [(rng.choice(STRANDS), rng.choice(STRANDS)) for _ in range(60)]
    pairs += list(itertools.product(BASE, BASE))
    return pairs


PAIRS = _pairs()


def test_dbox_computed_matches_formula():
    for sx, sy in PAIRS:
        got = dbox_pair(sx, sy)
        want = sorted(dbox_formula_pair(sx, sy))
        assert got == want, (sx, sy, got, want)


def test_dbox_symmetric_and_unital():
    for sx, sy in PAIRS[:40]:
        assert Counter(dbox_pair(sx, sy)) == Counter(dbox_pair(sy, sx))
    unit = Strand("Hn", 0, 0)
    for s in BASE:
        assert dbox_pair(unit, s) == [s]


def test_dcotens_computed_matches_formula():
    for sx, sy in PAIRS:
        got = dcotens_pair(sx, sy)
        want = sorted(dcotens_formula_pair(sx, sy))
        assert got == want, (sx, sy, got, want)


def test_op_dual_is_an_involution_on_strands():
    for s in STRANDS:
        assert op_dual_strand(op_dual_strand(s)) == s


def test_serre_twist_relation_holds_on_pairs():
    for sx, sy in PAIRS[:50]:
        rep = serre_check([sx], [sy])
        assert rep["ok"], (sx, sy, rep)


WINDOW = (-5, 5, -5, 5)


def test_cohomology_formula_matches_honest_window_per_strand():
    extra = [Strand("A", 1, -2), Strand("Hn", -2, 1), Strand("B", 1, 2)]
    for s in BASE + extra:
        c = decomposition_sum([s])
        honest = cohomology_window(c, *WINDOW)
        formula = cohomology_formula([s], *WINDOW)
        assert honest == formula, (s, honest, formula)


def test_cohomology_window_is_additive_over_strands():
    two = [Strand("A", 2, -1), Strand("B", 1, 0)]
    c2 = decomposition_sum(two)
    assert cohomology_window(c2, *WINDOW) == cohomology_formula(two, *WINDOW)


def test_unit_ring_labels():
    w = m2_ring_window(-3, 3, -4, 4)
    assert w["labels"]["0,0"] == "1"
    assert w["labels"]["0,1"] == "tau"
    assert w["labels"]["1,1"] == "rho"
    assert w["labels"]["0,-2"] == "theta"
    assert w["labels"]["0,-3"] == "theta/(tau)"
    assert w["labels"]["-1,-3"] == "theta/(rho)"
    assert "1,0" not in w["labels"]


def test_unit_ring_products_match_rule():
    nonzero = [
        (p, q) for p in range(-2, 3) for q in range(-4, 4) if m2_dim(p, q)
    ]
    # tau and rho postcomposition against everything in the patch
    for p1, q1 in [(0, 1), (1, 1)]:
        for p2, q2 in nonzero:
            got = m2_product_nonzero(p1, q1, p2, q2)
            want = m2_product_rule(p1, q1, p2, q2)
            assert got == want, ((p1, q1), (p2, q2), got, want)


def test_unit_ring_product_edge_cases():
    # the negative-cone generator squares to zero
    assert not m2_product_nonzero(0, -2, 0, -2)
    # lower * lower dies
    assert not m2_product_nonzero(-1, -3, 0, -2)
    # upper * lower landing back in the lower cone survives
    assert m2_product_nonzero(0, 1, 0, -3)
    # upper * lower landing in the gap between the cones dies
    assert not m2_product_nonzero(1, 1, 0, -2)


def test_class_representatives_are_chain_maps():
    for p, q in [(0, 0), (0, 1), (1, 1), (2, 5), (0, -2), (-2, -5)]:
        f = class_rep(p, q)
        assert validate_chain_map(f) == [], (p, q)


def test_toda_witness_report():
    rep = toda_witness()
    assert rep["theta_rho_strictly_zero"]
    assert rep["tau_theta_null_homotopic"]
    assert rep["bracket_nonzero"]
    assert rep["zero_indeterminacy"]
    assert rep["indeterminacy_dims"] == (0, 0)


def test_invertible_classes():
    assert invertible_class([Strand("Hn", 3, -2)]) == (-2, 3)
    # contractible summands do not change the class
    assert invertible_class([Strand("Hn", 3, -2), Strand("DiskF", 0, 5)]) == (-2, 3)
    assert invertible_class([Strand("A", 0, 0)]) is None
    assert not is_invertible([Strand("Hn", 1, 0), Strand("Hn", 2, 0)])


@pytest.mark.parametrize(
    "first,second",
    [((0, 1), (2, -3)), ((1, 1), (1, 1)), ((-2, 4), (3, -4))],
)
def test_picard_group_law(first, second):
    (m1, n1), (m2, n2) = first, second
    prod = dbox([Strand("Hn", n1, m1)], [Strand("Hn", n2, m2)])
    assert invertible_class(prod) == (m1 + m2, n1 + n2)


def test_balmer_support():
    assert balmer_support([Strand("Hn", 0, 0)]) == ["<A>", "<B>", "<A,B>"]
    assert balmer_support([Strand("A", 2, 1)]) == ["<B>"]
    assert balmer_support([Strand("B", 0, 0)]) == ["<A>"]
    assert balmer_support([Strand("A", 1, 0), Strand("B", 1, 0)]) == ["<A>", "<B>"]
    assert balmer_support([Strand("DiskF", 0, 0)]) == []


def test_disjoint_support_strands_box_to_zero():
    assert dbox([Strand("A", 2, 0)], [Strand("B", 3, 0)]) == []


def test_sufficient_window_is_nondegenerate():
    for s in [Strand("B", 2, 1), Strand("Hn", -3, 2)]:
        p0, p1, q0, q1 = sufficient_window([s])
        assert p0 < p1 and q0 < q1
