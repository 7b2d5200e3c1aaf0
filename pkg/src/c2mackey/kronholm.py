"""Representation-cell chain complexes and the freeness pipeline.

A representation cell (m, q) with 0 <= q <= m stands for the complex
Sigma^m H(q): F's in degrees m down to m-q+1 and an H in degree m-q.  A
build script attaches cells one at a time, in nondecreasing topological
dimension (ties by weight), each along a chain map from Sigma^{m-1}H(q)
into the running complex; a cell with a null attachment is adjoined as a
direct summand.  An attaching map is *spacelike* when the cone it builds
splits without B-type strands.

``kronholm_split`` runs a script, re-splits after every attachment, and
checks the freeness conclusions as it goes: every summand is again a
cell Sigma^k H(r) with 0 <= r <= k, dimension multiset and total weight
are conserved, and each attachment of an (m, q) cell only produces
dimension-m cells of weight <= q.  The final report pairs input and
output cells dimension by dimension (sorted by weight) to expose the
weight shifts.
"""

from __future__ import annotations

import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .complexes import (ChainMap, FreeComplex, cone, entry_code, entry_name,
                        shift_complex, strand, validate_chain_map)
from .split import DISK_KINDS, Decomposition, split

log = logging.getLogger("c2mackey.kronholm")


class ScriptError(ValueError):
    """A build script is malformed or degenerate: bad cell order, invalid
    attaching data, a non-spacelike attachment, or an attachment that
    annihilates existing cells."""


@dataclass(frozen=True, order=True)
class RepCell:
    m: int    # topological dimension
    q: int    # weight

    def check(self) -> None:
        if not 0 <= self.q <= self.m:
            raise ScriptError(f"cell ({self.m}, {self.q}) violates "
                              f"0 <= weight <= dimension")

    def to_json(self) -> dict:
        return {"m": self.m, "q": self.q}

    @classmethod
    def from_json(cls, data: dict) -> "RepCell":
        return cls(int(data["m"]), int(data["q"]))


# attach data: components of the attaching map keyed by source degree,
# entries as arrow names ("0", "1", "t", "1+t", "p") against the
# canonical bases of Sigma^{m-1}H(q) and the running complex
AttachData = dict[int, list[list[str]]]


@dataclass
class RepBuildScript:
    cells: list[tuple[RepCell, AttachData | None]]

    def to_json(self) -> dict:
        out = []
        for cell, attach in self.cells:
            entry: dict = cell.to_json()
            if attach is None:
                entry["attach"] = None
            else:
                entry["attach"] = {str(d): [list(row) for row in mat]
                                   for d, mat in attach.items()}
            out.append(entry)
        return {"cells": out}

    @classmethod
    def from_json(cls, data: dict) -> "RepBuildScript":
        cells = []
        for entry in data["cells"]:
            cell = RepCell.from_json(entry)
            raw = entry.get("attach")
            attach = None
            if raw is not None:
                attach = {int(d): [[str(e) for e in row] for row in mat]
                          for d, mat in raw.items()}
            cells.append((cell, attach))
        return cls(cells)


def script_from_file(path: str) -> RepBuildScript:
    with open(path) as fh:
        return RepBuildScript.from_json(json.load(fh))


def rep_cell_complex(cell: RepCell) -> FreeComplex:
    cell.check()
    return shift_complex(strand("Hn", cell.q), cell.m)


def classify_cell_map(v: RepCell, target: tuple[int, int]) -> int:
    """Homotopy class of maps Sigma^{m-1}H(q) -> Sigma^s H(t), by the
    band inequalities: 1 = the identity class (dimension and coweight
    both match), 2 = the upper band (weight raise), 3 = the lower band
    (weight drop by at least two), 4 = only the zero map."""
    v.check()
    s, t = target
    RepCell(s, t).check()
    a, b = v.m, v.q
    if a - 1 == s and b == t:
        return 1
    if t - b >= 0 and -(t - b) <= a - 1 - s <= 0:
        return 2
    if t - b <= -2 and 0 <= a - 1 - s <= -(t - b) - 2:
        return 3
    return 4


def attach_source(cell: RepCell) -> FreeComplex:
    return shift_complex(strand("Hn", cell.q), cell.m - 1)


def attach_map(y: FreeComplex, cell: RepCell,
               attach: AttachData | None) -> ChainMap:
    """The attaching map of a cell against the running complex (zero map
    for a null attachment), validated."""
    src = attach_source(cell)
    comps: dict[int, list[list[int]]] = {}
    if attach:
        for d, mat in attach.items():
            tk = y.gens_at(d)
            sk = src.gens_at(d)
            if len(mat) != len(tk) or any(len(r) != len(sk) for r in mat):
                raise ScriptError(
                    f"attach component at degree {d} must be "
                    f"{len(tk)} x {len(sk)}")
            try:
                comps[d] = [[entry_code(sk[c], tk[r], mat[r][c])
                             for c in range(len(sk))] for r in range(len(tk))]
            except ValueError as exc:
                raise ScriptError(f"attach component at degree {d}: {exc}")
    f = ChainMap(src, y, comps, 0)
    errs = validate_chain_map(f)
    if errs:
        raise ScriptError("invalid attaching map: " + "; ".join(errs))
    return f


def attach_cell(y: FreeComplex, cell: RepCell,
                attach: AttachData | None) -> FreeComplex:
    """Cofiber of the attaching map; a null attachment adjoins the cell
    as a summand."""
    cell.check()
    return cone(attach_map(y, cell, attach))


def is_spacelike(f: ChainMap) -> bool:
    """Whether the cofiber of f splits without B-type strands."""
    errs = validate_chain_map(f)
    if errs:
        raise ValueError("invalid chain map: " + "; ".join(errs))
    dec = split(cone(f), validate=False)
    return not any(s.kind == "B" for s in dec.strands)


@dataclass
class ShiftReport:
    input_cells: list[RepCell]
    output_cells: list[RepCell]
    # per dimension: [(q_in, q_out)] paired by sorted weight
    deltas: dict[int, list[tuple[int, int]]] = field(default_factory=dict)

    @property
    def total_weight_in(self) -> int:
        return sum(c.q for c in self.input_cells)

    @property
    def total_weight_out(self) -> int:
        return sum(c.q for c in self.output_cells)

    def to_json(self) -> dict:
        return {
            "input_cells": [c.to_json() for c in self.input_cells],
            "output_cells": [c.to_json() for c in self.output_cells],
            "deltas": {str(m): [[qi, qo, qo - qi] for qi, qo in pairs]
                       for m, pairs in sorted(self.deltas.items())},
            "total_weight": self.total_weight_in,
        }


def _make_report(inp: list[RepCell], outp: list[RepCell]) -> ShiftReport:
    by_dim_in: dict[int, list[int]] = defaultdict(list)
    by_dim_out: dict[int, list[int]] = defaultdict(list)
    for c in inp:
        by_dim_in[c.m].append(c.q)
    for c in outp:
        by_dim_out[c.m].append(c.q)
    deltas = {}
    for m in sorted(by_dim_in):
        deltas[m] = list(zip(sorted(by_dim_in[m]), sorted(by_dim_out[m])))
    return ShiftReport(sorted(inp), sorted(outp), deltas)


def _cells_of(dec: Decomposition) -> list[RepCell]:
    out = []
    for s in dec.strands:
        if s.kind in DISK_KINDS:
            continue
        if s.kind != "Hn" or not 0 <= s.param <= s.shift:
            raise RuntimeError(
                "freeness failed: decomposition contains a non-cell "
                f"summand {s} (full list: {dec.strands})")
        out.append(RepCell(s.shift, s.param))
    return out


def kronholm_split(script: RepBuildScript) -> tuple[Decomposition, ShiftReport]:
    """Run a build script: attach cells in order, re-split after every
    step, enforce spacelikeness, conservation, and the weight bound, and
    return the final decomposition with the weight-shift report."""
    if not script.cells:
        raise ScriptError("empty script")
    order = [cell for cell, _ in script.cells]
    if order != sorted(order):
        raise ScriptError("cells must be attached in nondecreasing "
                          "(dimension, weight) order")
    y: FreeComplex | None = None
    seen: list[RepCell] = []
    dec: Decomposition | None = None
    for idx, (cell, attach) in enumerate(script.cells):
        cell.check()
        if y is None:
            if attach:
                raise ScriptError("the first cell has nothing to attach to")
            y = rep_cell_complex(cell)
        else:
            f = attach_map(y, cell, attach)
            if not is_spacelike(f):
                raise ScriptError(
                    f"cell {idx} = ({cell.m}, {cell.q}): attaching map is "
                    f"not spacelike")
            y = cone(f)
        seen.append(cell)
        dec = split(y, validate=False)
        out_cells = _cells_of(dec)
        log.debug("cell %d = (%d, %d): %d live summands", idx, cell.m,
                  cell.q, len(out_cells))
        if Counter(c.m for c in out_cells) != Counter(c.m for c in seen):
            raise ScriptError(
                f"cell {idx} = ({cell.m}, {cell.q}): attachment annihilates "
                f"existing cells (dimension multiset not conserved)")
        if sum(c.q for c in out_cells) != sum(c.q for c in seen):
            raise ScriptError(
                f"cell {idx} = ({cell.m}, {cell.q}): total weight not "
                f"conserved")
        for oc in out_cells:
            if oc.m == cell.m and oc.q > cell.q:
                raise RuntimeError(
                    f"weight bound failed after cell {idx}: output cell "
                    f"({oc.m}, {oc.q}) exceeds attached weight {cell.q} "
                    f"(full list: {out_cells})")
    assert dec is not None
    return dec, _make_report(seen, _cells_of(dec))


# -- fuzzing -------------------------------------------------------------------

def random_spacelike_script(rng, max_cells: int = 8,
                            max_dim: int = 5) -> RepBuildScript:
    """A random sorted script whose attachments are random spacelike,
    non-annihilating mapping-complex cocycles (null when none is found)."""
    from .complexes import hom_delta, chain_map_from_vector

    n = rng.randint(1, max_cells)
    cells = sorted(RepCell(m, rng.randint(0, m))
                   for m in (rng.randint(0, max_dim) for _ in range(n)))
    script: list[tuple[RepCell, AttachData | None]] = []
    y: FreeComplex | None = None
    seen: list[RepCell] = []
    for cell in cells:
        attach: AttachData | None = None
        if y is not None and rng.random() < 0.7:
            src = attach_source(cell)
            kern = hom_delta(src, y, 0).kernel_basis()
            cols = list(range(kern.ncols))
            for _ in range(6):
                if not cols:
                    break
                vec = [0] * kern.nrows
                for j in cols:
                    if rng.random() < 0.5:
                        for i in range(kern.nrows):
                            vec[i] ^= kern.get(i, j)
                if not any(vec):
                    continue
                f = chain_map_from_vector(src, y, 0, vec)
                trial = split(cone(f), validate=False)
                if any(s.kind == "B" for s in trial.strands):
                    continue
                try:
                    out = _cells_of(trial)
                except RuntimeError:
                    continue
                want = Counter(c.m for c in seen) + Counter([cell.m])
                if Counter(c.m for c in out) != want:
                    continue
                if sum(c.q for c in out) != sum(c.q for c in seen) + cell.q:
                    continue
                attach = {}
                for d, mat in f.components.items():
                    sk, tk = src.gens_at(d), y.gens_at(d)
                    if not sk or not tk:
                        continue
                    attach[d] = [[entry_name(sk[c], tk[r], mat[r][c])
                                  for c in range(len(sk))]
                                 for r in range(len(tk))]
                break
        script.append((cell, attach))
        seen.append(cell)
        if y is None:
            y = rep_cell_complex(cell)
        else:
            y = cone(attach_map(y, cell, attach))
    return RepBuildScript(script)
