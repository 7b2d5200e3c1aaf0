import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from c2mackey.complexes import (FreeComplex, compose_chain_maps,
                                direct_sum_complexes, homology_counts,
                                shift_complex, strand, validate_chain_map,
                                validate_complex)
from c2mackey.split import (BasisMove, Decomposition, Strand, apply_move,
                            certificate_isos, components_of,
                            decomposition_sum, random_odd_complex,
                            random_scrambled_complex, replay, split,
                            split_odd, split_odd_mackey, verify_certificate)

ALL_SHAPES = ([("A", k) for k in range(7)] + [("Hn", n) for n in range(-6, 7)]
             + [("B", r) for r in range(7)] + [("DiskF", 0), ("DiskH", 0)])


def test_identity_recovery_on_canonical_strands():
    for kind, param in ALL_SHAPES:
        for shift in (-3, 0, 2):
            c = shift_complex(strand(kind, param), shift)
            dec = split(c)
            assert dec.strands == [Strand(kind, param, shift)], (kind, param)
            assert dec.certificate == []
            assert verify_certificate(c, dec)


def test_twist_normalizes_t_disk():
    c = FreeComplex(min_degree=0, gens=[["F"], ["F"]], diffs=[[[2]]])
    assert validate_complex(c) == []
    dec = split(c)
    assert dec.strands == [Strand("DiskF", 0, 0)]
    assert any(m.variant == "twist_t" for m in dec.certificate)
    assert verify_certificate(c, dec)


# a five-level complex mixing all four peel steps: expected strands
# {B_1 @ 0, H(3) @ 0, A_1 @ -2, H(3) @ -1}
FIXTURE = FreeComplex(
    min_degree=-4,
    gens=[["H"], ["H", "H", "F"], ["F", "F", "F", "F"],
          ["F", "F", "F", "F"], ["H", "F"]],
    diffs=[
        [[0, 0, 1]],
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 3]],
        [[3, 0, 0, 0], [0, 3, 0, 0], [0, 0, 3, 0], [0, 0, 0, 3]],
        [[1, 0], [1, 0], [1, 3], [1, 3]],
    ])


def test_worked_fixture_decomposition():
    assert validate_complex(FIXTURE) == []
    dec = split(FIXTURE)
    assert Counter(dec.strands) == Counter(
        [Strand("B", 1, 0), Strand("Hn", 3, 0),
         Strand("A", 1, -2), Strand("Hn", 3, -1)])
    assert verify_certificate(FIXTURE, dec)


def _assert_identity(comp, shape):
    for d in shape.degrees():
        m = comp.component(d)
        n = len(shape.gens_at(d))
        for i in range(n):
            for j in range(n):
                assert m[i][j] == (1 if i == j else 0), (d, i, j)


def test_certificate_isos_are_mutually_inverse():
    dec = split(FIXTURE)
    v, u = certificate_isos(FIXTURE, dec.certificate)
    assert validate_chain_map(v) == []
    assert validate_chain_map(u) == []
    _assert_identity(compose_chain_maps(u, v), FIXTURE)
    _assert_identity(compose_chain_maps(v, u), v.target)


def test_scramble_roundtrips():
    rng = random.Random(20260818)
    for trial in range(150):
        c, planted = random_scrambled_complex(rng, max_strands=6, max_param=5,
                                              max_moves=60)
        dec = split(c)
        assert Counter(dec.strands) == planted, trial
        assert verify_certificate(c, dec), trial


def test_scramble_preserves_homology():
    rng = random.Random(7)
    for trial in range(40):
        c, _ = random_scrambled_complex(rng, max_strands=5, max_param=4,
                                        max_moves=50)
        dec = split(c)
        live = [s for s in dec.strands if not s.kind.startswith("Disk")]
        assert homology_counts(c) == homology_counts(
            decomposition_sum(live)), trial


def test_certificate_isos_on_scrambles():
    rng = random.Random(99)
    for trial in range(20):
        c, _ = random_scrambled_complex(rng, max_strands=4, max_param=4,
                                        max_moves=40)
        dec = split(c)
        v, u = certificate_isos(c, dec.certificate)
        assert validate_chain_map(v) == [], trial
        assert validate_chain_map(u) == [], trial
        _assert_identity(compose_chain_maps(u, v), c)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 30))
def test_scramble_roundtrip_property(seed):
    rng = random.Random(seed)
    c, planted = random_scrambled_complex(rng, max_strands=4, max_param=4,
                                          max_moves=30)
    dec = split(c)
    assert Counter(dec.strands) == planted
    assert verify_certificate(c, dec)


def test_verify_rejects_wrong_answers():
    dec = split(FIXTURE)
    assert not verify_certificate(FIXTURE, Decomposition(dec.strands[:-1],
                                                         dec.certificate))
    assert dec.certificate  # the fixture needs genuine moves
    assert not verify_certificate(FIXTURE, Decomposition(dec.strands,
                                                         dec.certificate[:-1]))


def test_replay_matches_components():
    dec = split(FIXTURE)
    final = replay(FIXTURE, dec.certificate)
    assert Counter(components_of(final)) == Counter(dec.strands)


def test_apply_move_bounds_checking():
    c = strand("A", 1)
    with pytest.raises(ValueError):
        apply_move(c, BasisMove(5, "add", 0, 0))
    with pytest.raises(ValueError):
        apply_move(c, BasisMove(0, "add", 0, 3))
    with pytest.raises(ValueError):
        apply_move(strand("Hn", 0), BasisMove(0, "twist_t", 0, 0))


def test_decomposition_json_roundtrip():
    import json
    dec = split(FIXTURE)
    again = Decomposition.from_json(json.loads(json.dumps(dec.to_json())))
    assert again.strands == dec.strands
    assert again.certificate == dec.certificate
    assert verify_certificate(FIXTURE, again)


# -- odd modulus ----------------------------------------------------------------

def test_odd_mackey_fuzz():
    rng = random.Random(20260818)
    for trial in range(50):
        ell = rng.choice((3, 5, 7))
        mods, maps, planted, lo = random_odd_complex(rng, ell)
        got = Counter(split_odd_mackey(mods, maps, ell, lo))
        assert got == planted, (trial, ell)


def test_odd_symbol_splits():
    # the free orbit splits into a fixed point and a sign point
    assert Counter(split_odd(strand("A", 0), 3)) == Counter(
        [Strand("PtH", 0, 0), Strand("PtSTheta", 0, 0)])
    assert Counter(split_odd(strand("DiskF", 0), 5)) == Counter(
        [Strand("DiskH", 0, 0), Strand("DiskSTheta", 0, 0)])
    # 1 + t is invertible on the fixed summand away from 2
    assert Counter(split_odd(strand("A", 1), 3)) == Counter(
        [Strand("DiskH", 0, 0), Strand("PtSTheta", 0, 0),
         Strand("PtSTheta", 0, 1)])
    assert Counter(split_odd(strand("Hn", 1), 3)) == Counter(
        [Strand("DiskH", 0, -1), Strand("PtSTheta", 0, 0)])


def test_odd_rejects_unliftable_differentials():
    # composable nonzero arrows never square to zero mod an odd prime
    for kind, param in (("A", 2), ("Hn", 2), ("B", 0)):
        with pytest.raises(ValueError):
            split_odd(strand(kind, param), 3)
    with pytest.raises(ValueError):
        split_odd(strand("A", 1), 4)   # modulus must be an odd prime
