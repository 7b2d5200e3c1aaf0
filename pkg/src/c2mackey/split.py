"""Strand splitting for perfect symbol complexes, with replayable
certificates.

Every bounded complex of F/H sums over GF(2) is isomorphic to a direct
sum of strands (A_k, H(n), B_r) and contractible disks.  ``split``
finds such a decomposition by sweeping levels bottom-up and peeling, at
each level: identity disks, then B-strands, then the two H(n) families,
then A-extensions.  Each basis change is recorded as a ``BasisMove``;
replaying the certificate on the input complex reproduces the literal
direct sum, which is what ``verify_certificate`` checks.

The move vocabulary: for generators i, j in one degree, ``add*`` moves
replace the inclusion of generator i by (iota_i + iota_j . phi) for an
arrow phi: kind_i -> kind_j, namely

    add       phi = 1   (F to F)      add_dot    phi = 1 (H to H)
    add_t     phi = t   (F to F)      add_pup    phi = p (F to H)
    add_u     phi = 1+t (F to F)      add_pdown  phi = p (H to F)

and ``twist_t`` (with j = i) replaces an F generator by its involution
image, which is what normalizes t-valued disk entries to literal 1's.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field

from .complexes import (U, ChainMap, FreeComplex, ecompose, shift_complex,
                        strand, direct_sum_complexes, realize,
                        validate_complex, zero_matrix, _subquotient)
from .gf2core import FMatrix, is_prime, random_invertible
from .mackey import (MackeyMap, MackeyModule, classify, conjugate, direct_sum,
                     indecomposable, zero_module)

log = logging.getLogger("c2mackey.split")


class SplitError(RuntimeError):
    """Internal invariant of the splitting sweep violated (a bug, or an
    input that is not a valid complex)."""


@dataclass(frozen=True, order=True)
class Strand:
    kind: str     # "A" | "Hn" | "B" | "DiskF" | "DiskH" (+ odd-modulus kinds)
    param: int
    shift: int

    def to_json(self) -> dict:
        return {"kind": self.kind, "param": self.param, "shift": self.shift}

    @classmethod
    def from_json(cls, data: dict) -> "Strand":
        return cls(str(data["kind"]), int(data["param"]), int(data["shift"]))


DISK_KINDS = ("DiskF", "DiskH", "DiskSTheta")


@dataclass(frozen=True)
class BasisMove:
    degree: int
    variant: str
    i: int
    j: int

    def to_json(self) -> dict:
        return {"degree": self.degree, "variant": self.variant,
                "i": self.i, "j": self.j}

    @classmethod
    def from_json(cls, data: dict) -> "BasisMove":
        return cls(int(data["degree"]), str(data["variant"]),
                   int(data["i"]), int(data["j"]))


# variant -> (kind_i, kind_j, arrow code)
_VARIANTS = {
    "add": ("F", "F", 1),
    "add_t": ("F", "F", 2),
    "add_u": ("F", "F", 3),
    "add_dot": ("H", "H", 1),
    "add_pup": ("F", "H", 1),
    "add_pdown": ("H", "F", 1),
}


def _variant_for(ki: str, kj: str, phi: int) -> str:
    for name, (a, b, e) in _VARIANTS.items():
        if (a, b, e) == (ki, kj, phi):
            return name
    raise SplitError(f"no move variant for arrow {phi} : {ki} -> {kj}")


@dataclass
class Decomposition:
    strands: list[Strand]
    certificate: list[BasisMove] = field(default_factory=list)

    def counts(self) -> Counter:
        return Counter(self.strands)

    def non_disk(self) -> list[Strand]:
        return [s for s in self.strands if s.kind not in DISK_KINDS]

    def to_json(self) -> dict:
        return {"strands": [s.to_json() for s in self.strands],
                "certificate": [m.to_json() for m in self.certificate]}

    @classmethod
    def from_json(cls, data: dict) -> "Decomposition":
        return cls([Strand.from_json(s) for s in data["strands"]],
                   [BasisMove.from_json(m) for m in data.get("certificate", [])])


def apply_move(c: FreeComplex, mv: BasisMove) -> None:
    """Apply one basis move in place (differential bookkeeping only)."""
    if not c.in_range(mv.degree):
        raise ValueError(f"move degree {mv.degree} outside the complex")
    li = mv.degree - c.min_degree
    kinds = c.gens[li]
    n = len(kinds)
    if not (0 <= mv.i < n and 0 <= mv.j < n):
        raise ValueError("move indices out of range")
    d_out = c.diffs[li - 1] if li - 1 >= 0 else None
    d_in = c.diffs[li] if li < len(c.diffs) else None
    if mv.variant == "twist_t":
        if kinds[mv.i] != "F":
            raise ValueError("twist_t only applies to F generators")
        i = mv.i
        if d_out is not None:
            low = c.gens[li - 1]
            for r in range(len(d_out)):
                d_out[r][i] = ecompose("F", "F", low[r], 2, d_out[r][i])
        if d_in is not None:
            up = c.gens[li + 1]
            for s in range(len(up)):
                d_in[i][s] = ecompose(up[s], "F", "F", d_in[i][s], 2)
        return
    rule = _VARIANTS.get(mv.variant)
    if rule is None:
        raise ValueError(f"unknown move variant {mv.variant!r}")
    ki, kj, phi = rule
    if mv.i == mv.j:
        raise ValueError("add moves need distinct generators")
    if kinds[mv.i] != ki or kinds[mv.j] != kj:
        raise ValueError(f"{mv.variant} needs kinds ({ki}, {kj}) at "
                         f"degree {mv.degree}")
    if d_out is not None:
        low = c.gens[li - 1]
        for r in range(len(d_out)):
            e = d_out[r][mv.j]
            if e:
                d_out[r][mv.i] ^= ecompose(ki, kj, low[r], phi, e)
    if d_in is not None:
        up = c.gens[li + 1]
        for s in range(len(up)):
            e = d_in[mv.i][s]
            if e:
                d_in[mv.j][s] ^= ecompose(up[s], ki, kj, e, phi)


def replay(c: FreeComplex, certificate: list[BasisMove]) -> FreeComplex:
    out = c.copy()
    for mv in certificate:
        apply_move(out, mv)
    return out


# -- the sweep -----------------------------------------------------------

def split(c: FreeComplex, validate: bool = True) -> Decomposition:
    """Decompose a complex into strands and disks, with a certificate.

    Deterministic; raises ValueError on an invalid complex and SplitError
    if an internal invariant breaks (which would be a bug).
    """
    if validate:
        bad = validate_complex(c)
        if bad:
            raise ValueError("not a valid complex: " + "; ".join(bad))
    work = c.copy()
    lo = work.min_degree
    moves: list[BasisMove] = []

    members: dict[int, list[tuple[int, int]]] = {}
    strand_of: dict[tuple[int, int], int] = {}
    disk_sids: set[int] = set()
    next_sid = 0

    def new_strand(elems: list[tuple[int, int]]) -> int:
        nonlocal next_sid
        sid = next_sid
        next_sid += 1
        members[sid] = elems
        for e in elems:
            strand_of[e] = sid
        return sid

    def do_move(degree: int, variant: str, i: int, j: int) -> None:
        mv = BasisMove(degree, variant, i, j)
        apply_move(work, mv)
        moves.append(mv)

    for g in range(len(work.gens[0])):
        new_strand([(0, g)])

    for li in range(1, len(work.gens)):
        D = work.diffs[li - 1]
        src_kinds = work.gens[li]
        tgt_kinds = work.gens[li - 1]
        nsrc, ntgt = len(src_kinds), len(tgt_kinds)
        assigned = [False] * nsrc

        def top_info(r: int):
            """(type, length) of the strand whose top is target r, or None
            if r cannot absorb a new element (disk / completed strand)."""
            sid = strand_of[(li - 1, r)]
            if sid in disk_sids:
                return None
            mem = members[sid]
            if mem[0] != (li - 1, r):
                raise SplitError("level generator is not a strand top")
            seq = [work.gens[L][g] for (L, g) in mem]
            if all(k == "F" for k in seq):
                return ("A", len(seq) - 1)
            if seq == ["H"]:
                return ("H0", 0)
            if seq[-1] == "H" and all(k == "F" for k in seq[:-1]):
                return ("HEND", len(seq) - 1)
            return None    # completed B / H(-n): never a target again

        def phase_a(alpha: int, beta: int, e0: int) -> None:
            """Clear every other source entry into the pivot target beta,
            by adding to it a phi-multiple of alpha with e0 . phi matching
            the stray entry."""
            ka = src_kinds[alpha]
            kb = tgt_kinds[beta]
            for c2 in range(nsrc):
                if c2 == alpha:
                    continue
                e2 = D[beta][c2]
                if not e2:
                    continue
                kc = src_kinds[c2]
                if kc == "H" and ka == "H":
                    variant = "add_dot"
                elif kc == "H":
                    # only a literal F-F disk pivot can absorb an H source;
                    # in steps 4-5 the H pivots have already been exhausted
                    if not (kb == "F" and e0 == 1):
                        raise SplitError("H source entry survived past the "
                                         "H-pivot steps")
                    variant = "add_pdown"
                elif ka == "H":
                    variant = "add_pup"
                else:
                    phi = e2 if (kb == "F" and e0 == 1) else 1
                    variant = {1: "add", 2: "add_t", 3: "add_u"}[phi]
                do_move(lo + li, variant, c2, alpha)
                if D[beta][c2]:
                    raise SplitError("phase A failed to clear a source")

        def phase_b_disk(alpha: int, beta: int) -> None:
            kb = tgt_kinds[beta]
            for r2 in range(ntgt):
                if r2 == beta:
                    continue
                e2 = D[r2][alpha]
                if not e2:
                    continue
                kr = tgt_kinds[r2]
                if kb == "F":
                    variant = ({1: "add", 2: "add_t", 3: "add_u"}[e2]
                               if kr == "F" else "add_pup")
                else:
                    variant = "add_dot" if kr == "H" else "add_pdown"
                do_move(lo + li - 1, variant, beta, r2)
                if D[r2][alpha]:
                    raise SplitError("disk phase B failed to clear a target")

        def absorb_cascade(alpha: int, mem: list[tuple[int, int]]) -> None:
            pred = alpha
            for (L, cur) in mem:
                Dm = work.diffs[L]
                e_cur = Dm[cur][pred]
                if not e_cur:
                    raise SplitError("cascade lost the strand entry")
                k_cur = work.gens[L][cur]
                for r in range(len(Dm)):
                    if r == cur:
                        continue
                    e_r = Dm[r][pred]
                    if not e_r:
                        continue
                    k_r = work.gens[L][r]
                    if k_cur == "F":
                        if k_r != "F":
                            raise SplitError("a parallel strand ends above "
                                             "the selected one")
                        variant = "add"
                    else:
                        variant = "add_dot" if k_r == "H" else "add_pdown"
                    do_move(lo + L, variant, cur, r)
                    if Dm[r][pred]:
                        raise SplitError("cascade failed to clear a parallel")
                pred = cur

        def do_split(alpha: int, beta: int) -> None:
            e0 = D[beta][alpha]
            phase_a(alpha, beta, e0)
            sid = strand_of[(li - 1, beta)]
            absorb_cascade(alpha, members[sid])
            members[sid] = [(li, alpha)] + members[sid]
            strand_of[(li, alpha)] = sid
            assigned[alpha] = True

        # -- step 1: disks ------------------------------------------------
        while True:
            found = None
            for c2 in range(nsrc):
                if assigned[c2] or src_kinds[c2] != "H":
                    continue
                for r in range(ntgt):
                    if tgt_kinds[r] == "H" and D[r][c2] == 1:
                        found = (c2, r)
                        break
                if found:
                    break
            if not found:
                for c2 in range(nsrc):
                    if assigned[c2] or src_kinds[c2] != "F":
                        continue
                    for r in range(ntgt):
                        if tgt_kinds[r] == "F" and D[r][c2] in (1, 2):
                            found = (c2, r)
                            break
                    if found:
                        break
            if not found:
                break
            alpha, beta = found
            sid = strand_of[(li - 1, beta)]
            if members[sid] != [(li - 1, beta)] or sid in disk_sids:
                raise SplitError("iso entry into a non-singleton generator")
            if D[beta][alpha] == 2:
                do_move(lo + li, "twist_t", alpha, alpha)
            if D[beta][alpha] != 1:
                raise SplitError("disk entry failed to normalize")
            phase_a(alpha, beta, 1)
            phase_b_disk(alpha, beta)
            for r in range(ntgt):
                want = 1 if r == beta else 0
                if D[r][alpha] != want:
                    raise SplitError("disk column not clean")
            members[sid] = [(li, alpha), (li - 1, beta)]
            strand_of[(li, alpha)] = sid
            disk_sids.add(sid)
            assigned[alpha] = True

        # -- steps 2..5: strand extensions ---------------------------------
        def best_candidate(src_kind: str, tgt_types: tuple[str, ...],
                           longest: bool):
            best = None
            for a in range(nsrc):
                if assigned[a] or src_kinds[a] != src_kind:
                    continue
                for r in range(ntgt):
                    if not D[r][a]:
                        continue
                    info = top_info(r)
                    if info is None or info[0] not in tgt_types:
                        continue
                    key = ((-info[1] if longest else info[1]), r, a)
                    if best is None or key < best:
                        best = key
            return best

        for src_kind, tgt_types, longest in (
                ("H", ("HEND",), False),        # step 2 -> B strands
                ("H", ("A",), True),            # step 3 -> H(-n)
                ("F", ("HEND", "H0"), False),   # step 4 -> H(n)
                ("F", ("A",), True)):           # step 5 -> longer A
            while True:
                best = best_candidate(src_kind, tgt_types, longest)
                if best is None:
                    break
                _, r, a = best
                do_split(a, r)

        for a in range(nsrc):
            if assigned[a]:
                continue
            for r in range(ntgt):
                if D[r][a]:
                    raise SplitError("unassigned generator still has "
                                     "differential entries")
            new_strand([(li, a)])

    strands = []
    for sid, mem in members.items():
        top = lo + mem[0][0]
        if sid in disk_sids:
            kind = "DiskF" if work.gens[mem[0][0]][mem[0][1]] == "F" else "DiskH"
            strands.append(Strand(kind, 0, top - 1))
            continue
        seq = [work.gens[L][g] for (L, g) in mem]
        strands.append(_strand_of_sequence(seq, top))
    strands.sort()
    log.debug("split: %d generators -> %d strands in %d moves",
              c.num_gens(), len(strands), len(moves))
    return Decomposition(strands, moves)


def _strand_of_sequence(seq: list[str], top: int) -> Strand:
    n = len(seq)
    if all(k == "F" for k in seq):
        return Strand("A", n - 1, top - (n - 1))
    if seq == ["H"]:
        return Strand("Hn", 0, top)
    if seq[-1] == "H" and all(k == "F" for k in seq[:-1]):
        return Strand("Hn", n - 1, top)
    if seq[0] == "H" and all(k == "F" for k in seq[1:]):
        return Strand("Hn", -(n - 1), top - (n - 1))
    if (n >= 3 and seq[0] == "H" and seq[-1] == "H"
            and all(k == "F" for k in seq[1:-1])):
        return Strand("B", n - 3, top)
    raise SplitError(f"generator path {seq} is not a strand shape")


# -- verification -----------------------------------------------------------

def strand_paths(c: FreeComplex) -> list[tuple[Strand, list[tuple[int, int]]]] | None:
    """Parse a complex as a literal disjoint sum of strands and disks,
    keeping the generator path of each piece (as (level, index) pairs,
    top first).  None if the complex is not in literal split form.
    """
    out_edge: dict[tuple[int, int], tuple[int, int, int]] = {}
    in_deg: dict[tuple[int, int], int] = {}
    for li in range(len(c.gens) - 1):
        m = c.diffs[li]
        for r in range(len(c.gens[li])):
            for s in range(len(c.gens[li + 1])):
                e = m[r][s]
                if not e:
                    continue
                src, tgt = (li + 1, s), (li, r)
                if src in out_edge or in_deg.get(tgt):
                    return None
                out_edge[src] = (li, r, e)
                in_deg[tgt] = 1
    pieces = []
    for li in range(len(c.gens)):
        for g in range(len(c.gens[li])):
            node = (li, g)
            if in_deg.get(node):
                continue            # not a path top
            seq = [c.gens[li][g]]
            edges = []
            nodes = [node]
            cur = node
            while cur in out_edge:
                l2, g2, e = out_edge[cur]
                edges.append(e)
                seq.append(c.gens[l2][g2])
                cur = (l2, g2)
                nodes.append(cur)
            top = c.min_degree + li
            s = _parse_path(seq, edges, top)
            if s is None:
                return None
            pieces.append((s, nodes))
    return pieces


def components_of(c: FreeComplex) -> list[Strand] | None:
    """The strand multiset of a complex in literal split form (sorted),
    or None if it is not such a sum."""
    pieces = strand_paths(c)
    if pieces is None:
        return None
    strands = [s for s, _ in pieces]
    strands.sort()
    return strands


def _parse_path(seq: list[str], edges: list[int], top: int) -> Strand | None:
    if len(seq) == 2 and edges == [1] and seq[0] == seq[1]:
        return Strand("DiskF" if seq[0] == "F" else "DiskH", 0, top - 1)
    n = len(seq)
    if all(k == "F" for k in seq):
        if all(e == U for e in edges):
            return Strand("A", n - 1, top - (n - 1))
        return None
    if seq == ["H"]:
        return Strand("Hn", 0, top)
    if seq[-1] == "H" and all(k == "F" for k in seq[:-1]):
        if all(e == U for e in edges[:-1]) and edges[-1] == 1:
            return Strand("Hn", n - 1, top)
        return None
    if seq[0] == "H" and all(k == "F" for k in seq[1:]):
        if edges[0] == 1 and all(e == U for e in edges[1:]):
            return Strand("Hn", -(n - 1), top - (n - 1))
        return None
    if (n >= 3 and seq[0] == "H" and seq[-1] == "H"
            and all(k == "F" for k in seq[1:-1])):
        if (edges[0] == 1 and edges[-1] == 1
                and all(e == U for e in edges[1:-1])):
            return Strand("B", n - 3, top)
        return None
    return None


def verify_certificate(c: FreeComplex, dec: Decomposition) -> bool:
    """Replay the certificate and check the result is literally the listed
    sum of strands and disks (up to generator numbering)."""
    try:
        final = replay(c, dec.certificate)
    except ValueError:
        return False
    got = components_of(final)
    if got is None:
        return False
    return Counter(got) == Counter(dec.strands)


def certificate_isos(c: FreeComplex,
                     certificate: list[BasisMove]) -> tuple[ChainMap, ChainMap]:
    """The inverse isomorphisms (V : c -> replayed, U : replayed -> c)
    realized by a certificate, as degree-0 chain maps."""
    work = c.copy()
    V = {}
    Umats = {}
    for d in c.degrees():
        ks = c.gens_at(d)
        ident = zero_matrix(len(ks), len(ks))
        for i in range(len(ks)):
            ident[i][i] = 1
        V[d] = ident
        Umats[d] = [row[:] for row in ident]
    for mv in certificate:
        kinds = c.gens_at(mv.degree)
        vm, um = V[mv.degree], Umats[mv.degree]
        n = len(kinds)
        if mv.variant == "twist_t":
            i = mv.i
            for s in range(n):
                vm[i][s] = ecompose(kinds[s], "F", "F", vm[i][s], 2)
            for r in range(n):
                um[r][i] = ecompose("F", "F", kinds[r], 2, um[r][i])
        else:
            ki, kj, phi = _VARIANTS[mv.variant]
            i, j = mv.i, mv.j
            for s in range(n):
                e = vm[i][s]
                if e:
                    vm[j][s] ^= ecompose(kinds[s], ki, kj, e, phi)
            for r in range(n):
                e = um[r][j]
                if e:
                    um[r][i] ^= ecompose(ki, kj, kinds[r], phi, e)
        apply_move(work, mv)
    vmap = ChainMap(c, work, V, 0)
    umap = ChainMap(work, c, Umats, 0)
    return vmap, umap


def decomposition_sum(strands: list[Strand]) -> FreeComplex:
    """The canonical complex realizing a strand multiset."""
    return direct_sum_complexes(
        [shift_complex(strand(s.kind, s.param), s.shift) for s in strands])


# -- random generation -------------------------------------------------------

_RANDOM_KINDS = ("A", "Hn", "B", "DiskF", "DiskH")


def random_strand(rng, max_param: int, shift_lo: int = -4,
                  shift_hi: int = 4) -> Strand:
    kind = rng.choice(_RANDOM_KINDS)
    if kind == "A" or kind == "B":
        param = rng.randint(0, max_param)
    elif kind == "Hn":
        param = rng.randint(-max_param, max_param)
    else:
        param = 0
    return Strand(kind, param, rng.randint(shift_lo, shift_hi))


def random_legal_moves(c: FreeComplex, rng, count: int) -> list[BasisMove]:
    """Generate and apply `count` random legal moves to a copy; returns the
    moves (the caller replays them)."""
    moves = []
    degrees = [d for d in c.degrees() if len(c.gens_at(d)) > 0]
    attempts = 0
    while len(moves) < count and attempts < count * 50:
        attempts += 1
        d = rng.choice(degrees)
        kinds = c.gens_at(d)
        n = len(kinds)
        variant = rng.choice(list(_VARIANTS) + ["twist_t"])
        if variant == "twist_t":
            fs = [i for i, k in enumerate(kinds) if k == "F"]
            if not fs:
                continue
            i = rng.choice(fs)
            moves.append(BasisMove(d, variant, i, i))
            continue
        ki, kj, _ = _VARIANTS[variant]
        si = [i for i, k in enumerate(kinds) if k == ki]
        sj = [j for j, k in enumerate(kinds) if k == kj]
        if not si or not sj:
            continue
        i, j = rng.choice(si), rng.choice(sj)
        if i == j:
            continue
        moves.append(BasisMove(d, variant, i, j))
    return moves


def random_scrambled_complex(rng, max_strands: int = 8, max_param: int = 6,
                             max_moves: int = 200):
    """(complex, planted multiset): a random strand sum hit with random
    legal moves."""
    n = rng.randint(1, max_strands)
    planted = [random_strand(rng, max_param) for _ in range(n)]
    c = decomposition_sum(planted)
    moves = random_legal_moves(c, rng, rng.randint(0, max_moves))
    scrambled = replay(c, moves)
    return scrambled, Counter(planted)


# -- odd modulus --------------------------------------------------------------

def split_odd(c: FreeComplex, ell: int) -> list[Strand]:
    """Decompose a symbol complex mod an odd prime: points and disks.

    The symbol arrows lift canonically mod l; d*d = 0 is re-checked there
    (it can fail mod l even when the mod-2 complex is valid), and a
    failure raises ValueError.
    """
    if ell == 2 or not is_prime(ell):
        raise ValueError("split_odd needs an odd prime modulus")
    mods, maps = realize(c, ell)
    for i in range(len(maps) - 1):
        comp = maps[i].compose(maps[i + 1])
        if not (comp.f_theta.is_zero() and comp.f_dot.is_zero()):
            raise ValueError(f"d*d != 0 mod {ell} between degrees "
                             f"{c.min_degree + i + 2} and {c.min_degree + i}")
    return split_odd_mackey(mods, maps, ell, c.min_degree)


def split_odd_mackey(mods: list[MackeyModule], maps: list[MackeyMap],
                     ell: int, min_degree: int) -> list[Strand]:
    """Semisimple splitting of a Mackey chain complex over an odd prime:
    one point per homology summand, one disk per image summand."""
    strands: list[Strand] = []
    for i, mod in enumerate(mods):
        h = _subquotient({
            "module": mod,
            "out": maps[i - 1] if i - 1 >= 0 else None,
            "into": maps[i] if i < len(maps) else None,
        }, ell)
        counts = classify(h)
        d = min_degree + i
        strands.extend([Strand("PtH", 0, d)] * counts.get("H", 0))
        strands.extend([Strand("PtSTheta", 0, d)] * counts.get("STheta", 0))
    for i, f in enumerate(maps):
        img = _image_module(f, ell)
        counts = classify(img)
        shift = min_degree + i
        strands.extend([Strand("DiskH", 0, shift)] * counts.get("H", 0))
        strands.extend([Strand("DiskSTheta", 0, shift)] * counts.get("STheta", 0))
    strands.sort()
    return strands


def _image_module(f: MackeyMap, ell: int) -> MackeyModule:
    tgt = f.target
    piv_t = f.f_theta.column_space_pivots()
    piv_d = f.f_dot.column_space_pivots()
    Bt = f.f_theta.submatrix(list(range(tgt.dim_theta)), piv_t)
    Bd = f.f_dot.submatrix(list(range(tgt.dim_dot)), piv_d)

    def restrict(mat, src_basis, tgt_basis):
        X = tgt_basis.solve_many(mat.mul(src_basis))
        if X is None:
            raise SplitError("image is not closed under the structure maps")
        return X

    return MackeyModule(ell,
                        restrict(tgt.t, Bt, Bt),
                        restrict(tgt.p_up, Bd, Bt),
                        restrict(tgt.p_down, Bt, Bd))


def random_odd_complex(rng, ell: int, max_points: int = 6,
                       max_disks: int = 4, span: int = 4):
    """(modules, differentials, planted multiset, min_degree) for the odd
    splitter fuzz: planted points and disks conjugated by arbitrary
    levelwise basis changes."""
    pts = [(rng.choice(("PtH", "PtSTheta")), rng.randint(-span, span))
           for _ in range(rng.randint(1, max_points))]
    disks = [(rng.choice(("DiskH", "DiskSTheta")), rng.randint(-span, span - 1))
             for _ in range(rng.randint(0, max_disks))]
    planted = Counter([Strand(k, 0, d) for k, d in pts]
                      + [Strand(k, 0, s) for k, s in disks])
    lo = min([d for _, d in pts] + [s for _, s in disks])
    hi = max([d for _, d in pts] + [s + 1 for _, s in disks])

    slots: list[list[tuple[str, int]]] = [[] for _ in range(hi - lo + 1)]
    # (module kind, disk partner tag): tag pairs disk tops with bottoms
    pair_tag = 0
    for kind, d in pts:
        slots[d - lo].append(("H" if kind == "PtH" else "STheta", -1))
    disk_pairs = []
    for kind, s in disks:
        mk = "H" if kind == "DiskH" else "STheta"
        slots[s + 1 - lo].append((mk, pair_tag))
        slots[s - lo].append((mk, pair_tag))
        disk_pairs.append(pair_tag)
        pair_tag += 1

    mods = []
    for level in slots:
        if level:
            mods.append(direct_sum(*[indecomposable(mk, ell)
                                     for mk, _ in level]))
        else:
            mods.append(zero_module(ell))
    maps = []
    for i in range(len(slots) - 1):
        src_level, tgt_level = slots[i + 1], slots[i]
        src, tgt = mods[i + 1], mods[i]
        f_theta = FMatrix.zeros(tgt.dim_theta, src.dim_theta, ell)
        f_dot = FMatrix.zeros(tgt.dim_dot, src.dim_dot, ell)

        def offsets(level):
            td, dd, out = 0, 0, []
            for mk, tag in level:
                out.append((td, dd))
                td += 1
                dd += 1 if mk == "H" else 0
            return out
        soff, toff = offsets(src_level), offsets(tgt_level)
        for si, (mk_s, tag_s) in enumerate(src_level):
            if tag_s < 0:
                continue
            for ti, (mk_t, tag_t) in enumerate(tgt_level):
                if tag_t == tag_s:
                    f_theta.set(toff[ti][0], soff[si][0], 1)
                    if mk_s == "H":
                        f_dot.set(toff[ti][1], soff[si][1], 1)
        maps.append(MackeyMap(src, tgt, f_theta, f_dot))

    gts = [random_invertible(m.dim_theta, ell, rng) for m in mods]
    gds = [random_invertible(m.dim_dot, ell, rng) for m in mods]
    new_mods = [conjugate(m, gt, gd) for m, gt, gd in zip(mods, gts, gds)]
    new_maps = []
    for i, f in enumerate(maps):
        ft = gts[i].mul(f.f_theta).mul(gts[i + 1].invert())
        fd = gds[i].mul(f.f_dot).mul(gds[i + 1].invert())
        new_maps.append(MackeyMap(new_mods[i + 1], new_mods[i], ft, fd))
    return new_mods, new_maps, planted, lo


def decomposition_from_file(path: str) -> Decomposition:
    with open(path) as fh:
        return Decomposition.from_json(json.load(fh))
