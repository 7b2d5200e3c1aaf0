"""Derived-category operations on strand decompositions.

Everything here works with multisets of ``Strand`` records (what
``split`` produces, disks discarded) and, for the honest computational
routes, with the chain-level machinery: box products of complexes,
mapping complexes, and explicit chain-map witnesses.  Each binary
operation comes in two flavors that the tests play against each other:

* a computed route (build the complexes, take the box/cotensor, split,
  drop the contractible disks), and
* a closed-form route (the strand-pair multiplication tables).

On top of these sit the bigraded cohomology windows, the closed model
of the cohomology ring of the unit with honest chain-map products, the
three-fold bracket witness, invertibility/Picard bookkeeping, support,
and the twisted duality check.
"""

from __future__ import annotations

from collections import Counter

from .complexes import (ChainMap, FreeComplex, box_chain_map, box_complex,
                        compose_chain_maps, cotens_H, hom_complex_dim,
                        hom_delta, chain_map_from_vector, identity_chain_map,
                        is_null_homotopic, null_homotopy, shift_complex,
                        strand, zero_matrix)
from .split import DISK_KINDS, Strand, certificate_isos, split, strand_paths


# -- duality -----------------------------------------------------------------

def op_dual_strand(s: Strand) -> Strand:
    """The opposite dual, strandwise."""
    if s.kind == "A":
        return Strand("A", s.param, -s.shift - s.param)
    if s.kind == "Hn":
        return Strand("Hn", -(s.param + 2), -s.shift)
    if s.kind == "B":
        return Strand("B", s.param, s.param + 4 - s.shift)
    if s.kind in ("DiskF", "DiskH"):
        return Strand(s.kind, 0, -s.shift - 1)
    raise ValueError(f"no dual for strand kind {s.kind!r}")


def op_dual_decomp(strands: list[Strand]) -> list[Strand]:
    return sorted(op_dual_strand(s) for s in strands)


# -- box and cotensor: computed routes ----------------------------------------

def _canon(s: Strand) -> FreeComplex:
    return shift_complex(strand(s.kind, s.param), s.shift)


def _split_drop_disks(c: FreeComplex) -> list[Strand]:
    return [s for s in split(c, validate=False).strands
            if s.kind not in DISK_KINDS]


def dbox_pair(sx: Strand, sy: Strand) -> list[Strand]:
    """Derived box of two strands, via an explicit box complex."""
    return sorted(_split_drop_disks(box_complex(_canon(sx), _canon(sy))))


def dbox(xs: list[Strand], ys: list[Strand]) -> list[Strand]:
    out: list[Strand] = []
    for sx in xs:
        for sy in ys:
            out.extend(dbox_pair(sx, sy))
    return sorted(out)


def dcotens_pair(sx: Strand, sz: Strand) -> list[Strand]:
    """Derived cotensor (maps-out variable first), via the arrow-reversal
    dual on the first argument."""
    return sorted(_split_drop_disks(
        box_complex(cotens_H(_canon(sx)), _canon(sz))))


def dcotens(xs: list[Strand], zs: list[Strand]) -> list[Strand]:
    out: list[Strand] = []
    for sx in xs:
        for sz in zs:
            out.extend(dcotens_pair(sx, sz))
    return sorted(out)


# -- box and cotensor: closed forms -------------------------------------------

def dbox_formula_pair(sx: Strand, sy: Strand) -> list[Strand]:
    if sx.kind in DISK_KINDS or sy.kind in DISK_KINDS:
        return []
    a, b = sx.shift, sy.shift
    kx, ky = sx.kind, sy.kind
    if (kx, ky) in (("B", "A"), ("A", "B")):
        return []
    if kx == "Hn" and ky == "Hn":
        return [Strand("Hn", sx.param + sy.param, a + b)]
    if kx == "A" and ky == "Hn":
        return [Strand("A", sx.param, a + b)]
    if kx == "Hn" and ky == "A":
        return [Strand("A", sy.param, a + b)]
    if kx == "A" and ky == "A":
        k, l = sorted((sx.param, sy.param))
        return sorted([Strand("A", k, a + b), Strand("A", k, a + b + l)])
    if kx == "Hn" and ky == "B":
        return [Strand("B", sy.param, a + b - sx.param)]
    if kx == "B" and ky == "Hn":
        return [Strand("B", sx.param, a + b - sy.param)]
    if kx == "B" and ky == "B":
        r, l = sorted((sx.param, sy.param))
        return sorted([Strand("B", r, a + b - l - 2), Strand("B", r, a + b)])
    raise ValueError(f"no box rule for {kx}, {ky}")


def dbox_formula(xs: list[Strand], ys: list[Strand]) -> list[Strand]:
    out: list[Strand] = []
    for sx in xs:
        for sy in ys:
            out.extend(dbox_formula_pair(sx, sy))
    return sorted(out)


def dcotens_formula_pair(sx: Strand, sz: Strand) -> list[Strand]:
    if sx.kind in DISK_KINDS or sz.kind in DISK_KINDS:
        return []
    s = sz.shift - sx.shift
    kx, kz = sx.kind, sz.kind
    if (kx, kz) in (("A", "B"), ("B", "A")):
        return []
    if kx == "Hn" and kz == "Hn":
        return [Strand("Hn", sz.param - sx.param, s)]
    if kx == "Hn" and kz == "B":
        return [Strand("B", sz.param, s + sx.param)]
    if kx == "Hn" and kz == "A":
        return [Strand("A", sz.param, s)]
    if kx == "A" and kz == "Hn":
        return [Strand("A", sx.param, s - sx.param)]
    if kx == "B" and kz == "Hn":
        return [Strand("B", sx.param, s + sx.param - sz.param + 2)]
    if kx == "A" and kz == "A":
        k, l = sx.param, sz.param
        m, hi = min(k, l), max(k, l)
        return sorted([Strand("A", m, s - k), Strand("A", m, s + hi - k)])
    if kx == "B" and kz == "B":
        r, l = sx.param, sz.param
        m, hi = min(r, l), max(r, l)
        return sorted([Strand("B", m, s + r - hi), Strand("B", m, s + r + 2)])
    raise ValueError(f"no cotensor rule for {kx}, {kz}")


def dcotens_formula(xs: list[Strand], zs: list[Strand]) -> list[Strand]:
    out: list[Strand] = []
    for sx in xs:
        for sz in zs:
            out.extend(dcotens_formula_pair(sx, sz))
    return sorted(out)


# -- twisted duality -----------------------------------------------------------

TWIST = Strand("Hn", -2, 0)


def serre_check(xs: list[Strand], ys: list[Strand]) -> dict:
    """Natural equivalence: maps X -> Y twisted by Hn(-2) against the
    dual of maps Y -> X, both by the computed route."""
    lhs = dcotens(xs, dbox(ys, [TWIST]))
    rhs = op_dual_decomp(dcotens(ys, xs))
    return {"lhs": lhs, "rhs": rhs, "ok": Counter(lhs) == Counter(rhs)}


# -- bigraded cohomology --------------------------------------------------------

def m2_dim(p: int, q: int) -> int:
    """Cohomology of the unit at bidegree (p, q): an upper cone of
    monomials and a disjoint lower cone of divided classes."""
    if 0 <= p <= q:
        return 1
    if p <= 0 and q <= p - 2:
        return 1
    return 0


def m2_label(p: int, q: int) -> str | None:
    """Monomial name of the (at most one) basis class at (p, q)."""
    if 0 <= p <= q:
        a, b = q - p, p
        if a == 0 and b == 0:
            return "1"
        parts = [f"tau^{a}" if a > 1 else "tau" if a == 1 else "",
                 f"rho^{b}" if b > 1 else "rho" if b == 1 else ""]
        return " ".join(x for x in parts if x)
    if p <= 0 and q <= p - 2:
        a, b = p - q - 2, -p
        if a == 0 and b == 0:
            return "theta"
        denom = [f"tau^{a}" if a > 1 else "tau" if a == 1 else "",
                 f"rho^{b}" if b > 1 else "rho" if b == 1 else ""]
        return "theta/(" + " ".join(x for x in denom if x) + ")"
    return None


def strand_cohomology_dim(s: Strand, p: int, q: int) -> int:
    """Closed-form bigraded cohomology of one strand."""
    if s.kind in DISK_KINDS:
        return 0
    if s.kind == "A":
        return 1 if s.shift <= p <= s.shift + s.param else 0
    if s.kind == "Hn":
        return m2_dim(p - s.shift, q - s.param)
    if s.kind == "B":
        return 1 if 0 <= q - p + s.shift <= s.param else 0
    raise ValueError(f"no cohomology rule for strand kind {s.kind!r}")


def cohomology_formula(strands: list[Strand], p0: int, p1: int,
                       q0: int, q1: int) -> list[list[int]]:
    """dims[i][j] = total dimension at (p0 + i, q0 + j)."""
    return [[sum(strand_cohomology_dim(s, p, q) for s in strands)
             for q in range(q0, q1 + 1)]
            for p in range(p0, p1 + 1)]


def cohomology_window(c: FreeComplex, p0: int, p1: int,
                      q0: int, q1: int) -> list[list[int]]:
    """dims[i][j] = dim of maps from the complex into the (p, q) twist of
    the unit, computed from mapping complexes."""
    out = []
    for p in range(p0, p1 + 1):
        row = []
        for q in range(q0, q1 + 1):
            tw = shift_complex(strand("Hn", q), p)
            row.append(hom_complex_dim(c, tw, 0))
        out.append(row)
    return out


def sufficient_window(strands: list[Strand]) -> tuple[int, int, int, int]:
    """A display window guaranteed to contain every feature corner of the
    given strands' cohomology (their support may be unbounded)."""
    if not strands:
        return (0, 0, 0, 0)
    live = [s for s in strands if s.kind not in DISK_KINDS] or strands
    ps, qs = [0], [0]
    for s in live:
        ps += [s.shift, s.shift + max(s.param, 0)]
        if s.kind == "Hn":
            qs += [s.param - 2, s.param + 2]
        else:
            qs += [s.shift - s.param - 2, s.shift + s.param + 2]
    pad = 2
    return (min(ps) - pad, max(ps) + pad, min(qs) - pad, max(qs) + pad)


# -- the cohomology ring of the unit, with witnesses ---------------------------

def class_rep(p: int, q: int) -> ChainMap:
    """An explicit cocycle representing the basis class at (p, q): a chain
    map from the unit to its (p, q) twist.  Raises if the group is zero."""
    if not m2_dim(p, q):
        raise ValueError(f"the cohomology of the unit vanishes at ({p}, {q})")
    unit = strand("Hn", 0)
    tw = shift_complex(strand("Hn", q), p)
    return _transported_class(unit, tw)


def _project_onto(final: FreeComplex, target: Strand) -> ChainMap:
    """Projection of a literal split-form complex onto one strand summand,
    as a chain map to that strand's canonical complex."""
    pieces = strand_paths(final)
    if pieces is None:
        raise ValueError("complex is not in literal split form")
    path = None
    for s, nodes in pieces:
        if s == target:
            path = nodes
            break
    if path is None:
        raise ValueError(f"no summand {target} present")
    cn = _canon(target)
    comps: dict[int, list[list[int]]] = {}
    for d in final.degrees():
        rows = len(cn.gens_at(d))
        comps[d] = zero_matrix(rows, len(final.gens_at(d)))
    for (li, gi) in path:
        d = final.min_degree + li
        comps[d][0][gi] = 1
    return ChainMap(final, cn, comps, 0)


def m2_product_map(p1: int, q1: int, p2: int, q2: int) -> ChainMap:
    """The composite witness for the product of the classes at (p1, q1)
    and (p2, q2): a chain map from the unit to the (p1+p2, q1+q2) twist."""
    f = class_rep(p1, q1)                      # unit -> S1
    g = class_rep(p2, q2)                      # unit -> S2
    s1 = f.target
    bg = box_chain_map(g, identity_chain_map(s1))   # unit x S1 -> S2 x S1
    if bg.source != s1:
        raise RuntimeError("unit box complex is not literal")
    dec = split(bg.target, validate=False)
    target = Strand("Hn", q1 + q2, p1 + p2)
    if target not in dec.strands:
        raise RuntimeError("box of twists did not split as expected")
    v, _ = certificate_isos(bg.target, dec.certificate)
    proj = _project_onto(v.target, target)
    return compose_chain_maps(proj, compose_chain_maps(
        v, compose_chain_maps(bg, f)))


def m2_product_nonzero(p1: int, q1: int, p2: int, q2: int) -> bool:
    """Honest product: nonzero iff the composite witness is not a
    boundary."""
    return not is_null_homotopic(m2_product_map(p1, q1, p2, q2))


def m2_product_rule(p1: int, q1: int, p2: int, q2: int) -> bool:
    """Closed-form product: upper-cone classes multiply freely; a product
    with a lower-cone class survives exactly when the target bidegree is
    nonzero; two lower-cone classes annihilate."""
    if not (m2_dim(p1, q1) and m2_dim(p2, q2)):
        return False
    lower1 = not (0 <= p1 <= q1)
    lower2 = not (0 <= p2 <= q2)
    if lower1 and lower2:
        return False
    return m2_dim(p1 + p2, q1 + q2) == 1


def m2_ring_window(p0: int, p1: int, q0: int, q1: int) -> dict:
    dims = [[m2_dim(p, q) for q in range(q0, q1 + 1)]
            for p in range(p0, p1 + 1)]
    labels = {f"{p},{q}": m2_label(p, q)
              for p in range(p0, p1 + 1) for q in range(q0, q1 + 1)
              if m2_dim(p, q)}
    return {"p0": p0, "p1": p1, "q0": q0, "q1": q1,
            "dims": dims, "labels": labels}


# -- the three-fold bracket witness --------------------------------------------

def toda_witness() -> dict:
    """The bracket < tau, theta, rho > on the unit: strict vanishing of
    theta.rho, an explicit homotopy for tau.theta, and the resulting
    composite, which is the identity class with zero indeterminacy."""
    unit = strand("Hn", 0)
    s_up = shift_complex(strand("Hn", 1), 1)      # (1,1) twist
    s_dn = shift_complex(strand("Hn", -1), 1)     # (1,-1) twist
    s_unit1 = shift_complex(unit, 1)

    rho = class_rep(1, 1)                          # unit -> s_up
    # theta as a map s_up -> s_dn: the (0,-2) class acting at weight 1
    theta = _transported_class(s_up, s_dn)
    # tau as a map s_dn -> shifted unit: the (0,1) class acting at weight -1
    tau = _transported_class(s_dn, s_unit1)

    comp_theta_rho = compose_chain_maps(theta, rho)
    strictly_zero = all(not any(v for row in m for v in row)
                        for m in comp_theta_rho.components.values())

    comp_tau_theta = compose_chain_maps(tau, theta)
    h = null_homotopy(comp_tau_theta)
    bracket = compose_chain_maps(h, rho) if h is not None else None
    bracket_nonzero = bracket is not None and not is_null_homotopic(bracket)

    # degree-one mapping groups whose images are the bracket's ambiguity
    indet_left = hom_complex_dim(s_up, s_unit1, 1)     # postcompose with tau
    indet_right = hom_complex_dim(unit, s_dn, 1)       # precompose with rho
    return {
        "theta_rho_strictly_zero": strictly_zero,
        "tau_theta_null_homotopic": h is not None,
        "bracket_nonzero": bracket_nonzero,
        "indeterminacy_dims": (indet_left, indet_right),
        "zero_indeterminacy": indet_left == 0 and indet_right == 0,
        "maps": {"rho": rho, "theta": theta, "tau": tau, "homotopy": h,
                 "bracket": bracket},
    }


def _transported_class(src: FreeComplex, tgt: FreeComplex) -> ChainMap:
    """A degree-zero chain map src -> tgt that is a cocycle but not a
    boundary, for mapping groups known to be one-dimensional."""
    if hom_complex_dim(src, tgt, 0) != 1:
        raise RuntimeError("transported class is not one-dimensional")
    delta0 = hom_delta(src, tgt, 0)
    delta1 = hom_delta(src, tgt, 1)
    kern = delta0.kernel_basis()
    for j in range(kern.ncols):
        vec = kern.col(j)
        if any(vec) and delta1.solve(vec) is None:
            return chain_map_from_vector(src, tgt, 0, vec)
    raise RuntimeError("no nonzero cocycle found")


# -- invertibles, Picard, support ------------------------------------------------

def invertible_class(strands: list[Strand]) -> tuple[int, int] | None:
    """(shift, weight) if the strand list is a single weight strand (hence
    box-invertible), else None."""
    live = [s for s in strands if s.kind not in DISK_KINDS]
    if len(live) == 1 and live[0].kind == "Hn":
        return (live[0].shift, live[0].param)
    return None


def is_invertible(strands: list[Strand]) -> bool:
    return invertible_class(strands) is not None


SUPPORT_POINTS = ("<A>", "<B>", "<A,B>")


def balmer_support(strands: list[Strand]) -> list[str]:
    """Support of an object in the tensor-triangular spectrum: the primes
    that do NOT contain it.  Weight strands avoid all three; an A strand
    avoids <B>; a B strand avoids <A>."""
    live = [s for s in strands if s.kind not in DISK_KINDS]
    has_a = any(s.kind == "A" for s in live)
    has_b = any(s.kind == "B" for s in live)
    has_h = any(s.kind == "Hn" for s in live)
    out = []
    if has_b or has_h:
        out.append("<A>")
    if has_a or has_h:
        out.append("<B>")
    if has_h:
        out.append("<A,B>")
    return out
