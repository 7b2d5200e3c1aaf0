"""Mackey modules for the group of order two over GF(l).

A module M here is a pair of GF(l) vector spaces M_theta (the free-orbit
level, carrying an involution t) and M_dot (the fixed level), connected
by a transfer p_down : M_theta -> M_dot and a restriction
p_up : M_dot -> M_theta subject to

    t * t = 1,      t * p_up = p_up,      p_down * t = p_down,
    p_up * p_down = 1 + t,                p_down * p_up = 2.

Everything is matrix-level and exact: ``validate_module`` checks all five
relations, ``classify`` returns the multiset of indecomposable summands,
and ``box`` / ``internal_hom`` construct the monoidal product and its
adjoint concretely (no lookup tables on this route; the tables live in
``ext``/``tor`` where the spectral answer is a finite dictionary).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .gf2core import FMatrix, is_prime, random_invertible

KINDS = ("H", "F", "Hop", "SDot", "STheta")


@dataclass
class MackeyModule:
    ell: int
    t: FMatrix        # theta -> theta
    p_up: FMatrix     # dot -> theta (restriction)
    p_down: FMatrix   # theta -> dot (transfer)

    @property
    def dim_theta(self) -> int:
        return self.t.nrows

    @property
    def dim_dot(self) -> int:
        return self.p_down.nrows

    def __eq__(self, other):
        if not isinstance(other, MackeyModule):
            return NotImplemented
        return (self.ell == other.ell and self.t == other.t
                and self.p_up == other.p_up and self.p_down == other.p_down)

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "dim_theta": self.dim_theta,
            "dim_dot": self.dim_dot,
            "t": self.t.to_rows(),
            "p_up": self.p_up.to_rows(),
            "p_down": self.p_down.to_rows(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "MackeyModule":
        ell = int(data["ell"])
        nt = int(data["dim_theta"])
        nd = int(data["dim_dot"])
        t = FMatrix.from_rows(data["t"], ell, ncols=nt)
        p_up = FMatrix.from_rows(data["p_up"], ell, ncols=nd)
        p_down = FMatrix.from_rows(data["p_down"], ell, ncols=nt)
        if t.nrows != nt or p_up.nrows != nt or p_down.nrows != nd:
            raise ValueError("matrix shapes disagree with stated dimensions")
        return cls(ell, t, p_up, p_down)


@dataclass
class MackeyMap:
    """A map of Mackey modules, given by its two level components."""
    source: MackeyModule
    target: MackeyModule
    f_theta: FMatrix
    f_dot: FMatrix

    def compose(self, earlier: "MackeyMap") -> "MackeyMap":
        """self after earlier."""
        return MackeyMap(earlier.source, self.target,
                         self.f_theta.mul(earlier.f_theta),
                         self.f_dot.mul(earlier.f_dot))


def validate_module(m: MackeyModule) -> list[str]:
    """All five relations (and shape sanity); returns human-readable violations."""
    out = []
    if not is_prime(m.ell):
        return [f"modulus {m.ell} is not prime"]
    nt, nd = m.dim_theta, m.dim_dot
    if m.t.nrows != nt or m.t.ncols != nt:
        out.append("t is not square on the theta level")
    if m.p_up.nrows != nt or m.p_up.ncols != nd:
        out.append("p_up must map the dot level to the theta level")
    if m.p_down.nrows != nd or m.p_down.ncols != nt:
        out.append("p_down must map the theta level to the dot level")
    if out:
        return out
    idt = FMatrix.identity(nt, m.ell)
    if m.t.mul(m.t) != idt:
        out.append("t*t != 1")
    if m.t.mul(m.p_up) != m.p_up:
        out.append("t*p_up != p_up")
    if m.p_down.mul(m.t) != m.p_down:
        out.append("p_down*t != p_down")
    if m.p_up.mul(m.p_down) != idt.add(m.t):
        out.append("p_up*p_down != 1 + t")
    two = FMatrix.identity(nd, m.ell).scale(2)
    if m.p_down.mul(m.p_up) != two:
        out.append("p_down*p_up != 2")
    return out


def validate_map(f: MackeyMap) -> list[str]:
    out = []
    m, n = f.source, f.target
    if m.ell != n.ell:
        return ["source and target moduli differ"]
    if f.f_theta.nrows != n.dim_theta or f.f_theta.ncols != m.dim_theta:
        out.append("theta component has wrong shape")
    if f.f_dot.nrows != n.dim_dot or f.f_dot.ncols != m.dim_dot:
        out.append("dot component has wrong shape")
    if out:
        return out
    if f.f_theta.mul(m.t) != n.t.mul(f.f_theta):
        out.append("theta component does not commute with t")
    if f.f_theta.mul(m.p_up) != n.p_up.mul(f.f_dot):
        out.append("components do not commute with p_up")
    if f.f_dot.mul(m.p_down) != n.p_down.mul(f.f_theta):
        out.append("components do not commute with p_down")
    return out


def indecomposable(kind: str, ell: int = 2) -> MackeyModule:
    """The standard small modules: H, F, Hop, SDot (l=2 only), STheta."""
    if not is_prime(ell):
        raise ValueError(f"modulus must be prime, got {ell}")
    if kind == "H":
        return MackeyModule(ell,
                            FMatrix.from_rows([[1]], ell),
                            FMatrix.from_rows([[1]], ell),
                            FMatrix.from_rows([[2 % ell]], ell))
    if kind == "F":
        return MackeyModule(ell,
                            FMatrix.from_rows([[0, 1], [1, 0]], ell),
                            FMatrix.from_rows([[1], [1]], ell),
                            FMatrix.from_rows([[1, 1]], ell))
    if kind == "Hop":
        return MackeyModule(ell,
                            FMatrix.from_rows([[1]], ell),
                            FMatrix.from_rows([[2 % ell]], ell),
                            FMatrix.from_rows([[1]], ell))
    if kind == "SDot":
        if ell != 2:
            raise ValueError("SDot only exists for l = 2")
        return MackeyModule(ell,
                            FMatrix.zeros(0, 0, ell),
                            FMatrix.zeros(0, 1, ell),
                            FMatrix.zeros(1, 0, ell))
    if kind == "STheta":
        return MackeyModule(ell,
                            FMatrix.from_rows([[(-1) % ell]], ell),
                            FMatrix.zeros(1, 0, ell),
                            FMatrix.zeros(0, 1, ell))
    raise ValueError(f"unknown kind {kind!r}")


def direct_sum(*mods: MackeyModule) -> MackeyModule:
    if not mods:
        raise ValueError("empty direct sum (pass the zero module explicitly)")
    ell = mods[0].ell
    if any(m.ell != ell for m in mods):
        raise ValueError("mixed moduli in direct sum")

    def blockdiag(mats, nr, nc):
        out = FMatrix.zeros(sum(nr), sum(nc), ell)
        ro = co = 0
        for mat, r, c in zip(mats, nr, nc):
            for i in range(r):
                for j in range(c):
                    v = mat.get(i, j)
                    if v:
                        out.set(ro + i, co + j, v)
            ro += r
            co += c
        return out

    nts = [m.dim_theta for m in mods]
    nds = [m.dim_dot for m in mods]
    return MackeyModule(
        ell,
        blockdiag([m.t for m in mods], nts, nts),
        blockdiag([m.p_up for m in mods], nts, nds),
        blockdiag([m.p_down for m in mods], nds, nts),
    )


def zero_module(ell: int = 2) -> MackeyModule:
    return MackeyModule(ell, FMatrix.zeros(0, 0, ell),
                        FMatrix.zeros(0, 0, ell), FMatrix.zeros(0, 0, ell))


def classify(m: MackeyModule) -> dict[str, int]:
    """Multiset of indecomposable summands, as a kind -> count dict.

    Rank-based: over l = 2 the five counts are determined by
    dim M_theta, dim M_dot, rank(1 + t), dim ker p_down and
    dim ker p_up; for odd l the category is semisimple on H and STheta.
    Zero counts are omitted.
    """
    nt, nd = m.dim_theta, m.dim_dot
    if m.ell != 2:
        counts = {"H": nd, "STheta": nt - nd}
    else:
        f = m.t.add(FMatrix.identity(nt, 2)).rank()
        kd = m.p_down.nullity()
        ku = m.p_up.nullity()
        counts = {
            "F": f,
            "Hop": nt - f - kd,
            "H": nd - ku - f,
            "SDot": ku - nt + f + kd,
            "STheta": kd - nd + ku,
        }
    if any(v < 0 for v in counts.values()):
        raise ValueError("rank data is not consistent with any module "
                         "(is the input a valid Mackey module?)")
    return {k: v for k, v in counts.items() if v}


def module_of_counts(counts: dict[str, int], ell: int = 2) -> MackeyModule:
    """The canonical direct sum realizing a classification dict."""
    parts = []
    for kind in KINDS:
        parts.extend(indecomposable(kind, ell) for _ in range(counts.get(kind, 0)))
    if not parts:
        return zero_module(ell)
    return direct_sum(*parts)


def conjugate(m: MackeyModule, g_theta: FMatrix, g_dot: FMatrix) -> MackeyModule:
    """Transport of structure along an arbitrary levelwise basis change."""
    gti = g_theta.invert()
    gdi = g_dot.invert()
    return MackeyModule(m.ell,
                        g_theta.mul(m.t).mul(gti),
                        g_theta.mul(m.p_up).mul(gdi),
                        g_dot.mul(m.p_down).mul(gti))


def random_scrambled_module(counts: dict[str, int], ell: int, rng) -> MackeyModule:
    m = module_of_counts(counts, ell)
    g_theta = random_invertible(m.dim_theta, ell, rng)
    g_dot = random_invertible(m.dim_dot, ell, rng)
    return conjugate(m, g_theta, g_dot)


# -- monoidal structure ------------------------------------------------

def box(m: MackeyModule, n: MackeyModule) -> MackeyModule:
    """The monoidal (box) product, built as an explicit quotient.

    The theta level is M_theta (x) N_theta.  The dot level is the quotient
    of (M_dot (x) N_dot) + (M_theta (x) N_theta) by the Frobenius
    relations

        m . p_down(n)   ~  [p_up(m) (x) n],
        p_down(m) . n   ~  [m (x) p_up(n)],
        [t m (x) t n]   ~  [m (x) n],

    with p_down the projection of the theta-theta block and p_up induced
    by (p_up (x) p_up, 1 + t (x) t) on the two blocks.
    """
    if m.ell != n.ell:
        raise ValueError("mixed moduli in box")
    ell = m.ell
    mt, md = m.dim_theta, m.dim_dot
    nt, nd = n.dim_theta, n.dim_dot
    dd = md * nd            # dot-dot block, index i*nd + j
    tt = mt * nt            # theta-theta block, index a*nt + b
    V = dd + tt

    rels: list[list[int]] = []
    for i in range(md):
        for j in range(nt):
            v = [0] * V
            for b in range(nd):
                c = n.p_down.get(b, j)
                if c:
                    v[i * nd + b] = (v[i * nd + b] + c) % ell
            for a in range(mt):
                c = m.p_up.get(a, i)
                if c:
                    k = dd + a * nt + j
                    v[k] = (v[k] - c) % ell
            rels.append(v)
    for i in range(mt):
        for j in range(nd):
            v = [0] * V
            for b in range(md):
                c = m.p_down.get(b, i)
                if c:
                    v[b * nd + j] = (v[b * nd + j] + c) % ell
            for a in range(nt):
                c = n.p_up.get(a, j)
                if c:
                    k = dd + i * nt + a
                    v[k] = (v[k] - c) % ell
            rels.append(v)
    for i in range(mt):
        for j in range(nt):
            v = [0] * V
            for a in range(mt):
                ca = m.t.get(a, i)
                if not ca:
                    continue
                for b in range(nt):
                    cb = n.t.get(b, j)
                    if cb:
                        k = dd + a * nt + b
                        v[k] = (v[k] + ca * cb) % ell
            k = dd + i * nt + j
            v[k] = (v[k] - 1) % ell
            rels.append(v)

    proj, sec = _quotient_maps(rels, V, ell)
    t_box = m.t.kron(n.t)
    p_down_box = proj.submatrix(list(range(proj.nrows)),
                                list(range(dd, V)))
    a_up = FMatrix.hstack([
        m.p_up.kron(n.p_up),
        FMatrix.identity(tt, ell).add(t_box),
    ])
    p_up_box = a_up.mul(sec)
    return MackeyModule(ell, t_box, p_up_box, p_down_box)


def _quotient_maps(rels: list[list[int]], V: int, ell: int) -> tuple[FMatrix, FMatrix]:
    """Projection V -> V/span(rels) and a section, in explicit coordinates."""
    if rels:
        R = FMatrix.from_rows(rels, ell, ncols=V)
    else:
        R = FMatrix.zeros(0, V, ell)
    red, pivots = R.rref()
    pivset = set(pivots)
    free = [c for c in range(V) if c not in pivset]
    proj = FMatrix.zeros(len(free), V, ell)
    for fi, f in enumerate(free):
        proj.set(fi, f, 1)
        for ri, p in enumerate(pivots):
            c = red.get(ri, f)
            if c:
                proj.set(fi, p, -c)
    sec = FMatrix.zeros(V, len(free), ell)
    for fi, f in enumerate(free):
        sec.set(f, fi, 1)
    return proj, sec


def internal_hom(m: MackeyModule, n: MackeyModule) -> MackeyModule:
    """The hom object: dot level = Mackey maps m -> n, theta level =
    plain linear maps between the theta levels."""
    if m.ell != n.ell:
        raise ValueError("mixed moduli in internal_hom")
    ell = m.ell
    mt, md = m.dim_theta, m.dim_dot
    nt, nd = n.dim_theta, n.dim_dot
    dim_th = nt * mt    # vec(f_theta), row-major
    dim_dt = nd * md    # vec(f_dot)

    it_m = FMatrix.identity(mt, ell)
    it_n = FMatrix.identity(nt, ell)
    id_md = FMatrix.identity(md, ell)
    id_nd = FMatrix.identity(nd, ell)

    # constraint rows: [theta-part | dot-part] acting on (vec f_theta, vec f_dot)
    eq1 = FMatrix.hstack([n.t.kron(it_m).add(it_n.kron(m.t.transpose()).scale(-1)),
                          FMatrix.zeros(dim_th, dim_dt, ell)])
    eq2 = FMatrix.hstack([it_n.kron(m.p_up.transpose()),
                          n.p_up.kron(id_md).scale(-1)])
    eq3 = FMatrix.hstack([n.p_down.kron(it_m).scale(-1),
                          id_nd.kron(m.p_down.transpose())])
    system = FMatrix.vstack([eq1, eq2, eq3])
    K = system.kernel_basis()   # columns = Mackey maps

    t_h = n.t.kron(m.t.transpose())
    p_up_h = K.submatrix(list(range(dim_th)), list(range(K.ncols)))

    # p_down sends phi to the Mackey map (phi + t phi t, p_down phi p_up)
    top = FMatrix.identity(dim_th, ell).add(t_h)
    bot = n.p_down.kron(m.p_up.transpose())
    stacked = FMatrix.vstack([top, bot])
    p_down_h = K.solve_many(stacked)
    if p_down_h is None:
        raise AssertionError("norm of a linear map failed to be a Mackey map")
    return MackeyModule(ell, t_h, p_up_h, p_down_h)


def op_dual(m: MackeyModule) -> MackeyModule:
    """Levelwise dual with restriction and transfer swapped."""
    return MackeyModule(m.ell, m.t.transpose(),
                        m.p_down.transpose(), m.p_up.transpose())


# -- derived functors (finite tables, classification does the work) ----

def _counts_mul(ca: dict[str, int], cb: dict[str, int],
                table: dict[tuple[str, str], dict[str, int]]) -> dict[str, int]:
    out: dict[str, int] = {}
    for ka, va in ca.items():
        for kb, vb in cb.items():
            for kr, vr in table.get((ka, kb), {}).items():
                out[kr] = out.get(kr, 0) + va * vb * vr
    return {k: v for k, v in out.items() if v}


def _sym(d: dict[tuple[str, str], dict[str, int]]):
    out = dict(d)
    for (a, b), v in d.items():
        out.setdefault((b, a), v)
    return out


_HOM0 = {
    ("H", "H"): {"H": 1}, ("H", "F"): {"F": 1}, ("H", "Hop"): {"Hop": 1},
    ("H", "SDot"): {"SDot": 1}, ("H", "STheta"): {"STheta": 1},
    ("F", "H"): {"F": 1}, ("F", "F"): {"F": 2}, ("F", "Hop"): {"F": 1},
    ("F", "SDot"): {}, ("F", "STheta"): {"F": 1},
    ("Hop", "H"): {"H": 1}, ("Hop", "F"): {"F": 1}, ("Hop", "Hop"): {"H": 1},
    ("Hop", "SDot"): {}, ("Hop", "STheta"): {"H": 1},
    ("SDot", "H"): {}, ("SDot", "F"): {}, ("SDot", "Hop"): {"SDot": 1},
    ("SDot", "SDot"): {"SDot": 1}, ("SDot", "STheta"): {},
    ("STheta", "H"): {"H": 1}, ("STheta", "F"): {"F": 1},
    ("STheta", "Hop"): {"STheta": 1}, ("STheta", "SDot"): {},
    ("STheta", "STheta"): {"H": 1},
}

_EXT = {
    0: _HOM0,
    1: {("Hop", "H"): {"SDot": 1}, ("Hop", "STheta"): {"SDot": 1},
        ("STheta", "H"): {"SDot": 1}, ("STheta", "SDot"): {"SDot": 1},
        ("SDot", "STheta"): {"SDot": 1}},
    2: {("Hop", "H"): {"SDot": 1}, ("Hop", "SDot"): {"SDot": 1},
        ("SDot", "H"): {"SDot": 1}, ("SDot", "SDot"): {"SDot": 1}},
}

_BOX0 = _sym({
    ("H", "H"): {"H": 1}, ("H", "F"): {"F": 1}, ("H", "Hop"): {"Hop": 1},
    ("H", "SDot"): {"SDot": 1}, ("H", "STheta"): {"STheta": 1},
    ("F", "F"): {"F": 2}, ("F", "Hop"): {"F": 1}, ("F", "SDot"): {},
    ("F", "STheta"): {"F": 1},
    ("Hop", "Hop"): {"Hop": 1}, ("Hop", "SDot"): {}, ("Hop", "STheta"): {"Hop": 1},
    ("SDot", "SDot"): {"SDot": 1}, ("SDot", "STheta"): {},
    ("STheta", "STheta"): {"Hop": 1},
})

_TOR = {
    0: _BOX0,
    1: _sym({("Hop", "Hop"): {"SDot": 1}, ("Hop", "STheta"): {"SDot": 1},
             ("STheta", "SDot"): {"SDot": 1}}),
    2: _sym({("Hop", "Hop"): {"SDot": 1}, ("Hop", "SDot"): {"SDot": 1},
             ("SDot", "SDot"): {"SDot": 1}}),
}

_HOM0_ODD = {
    ("H", "H"): {"H": 1}, ("H", "STheta"): {"STheta": 1},
    ("STheta", "H"): {"STheta": 1}, ("STheta", "STheta"): {"H": 1},
}

_BOX0_ODD = {
    ("H", "H"): {"H": 1}, ("H", "STheta"): {"STheta": 1},
    ("STheta", "H"): {"STheta": 1}, ("STheta", "STheta"): {"H": 1},
}


def ext(a: MackeyModule, b: MackeyModule, i: int) -> dict[str, int]:
    """uExt^i(a, b) as a classification dict (vanishes for i >= 3)."""
    if i < 0:
        raise ValueError("ext degree must be >= 0")
    ca, cb = classify(a), classify(b)
    if a.ell != b.ell:
        raise ValueError("mixed moduli in ext")
    if a.ell != 2:
        return _counts_mul(ca, cb, _HOM0_ODD) if i == 0 else {}
    return _counts_mul(ca, cb, _EXT.get(i, {}))


def tor(a: MackeyModule, b: MackeyModule, i: int) -> dict[str, int]:
    """uTor_i(a, b) as a classification dict (vanishes for i >= 3)."""
    if i < 0:
        raise ValueError("tor degree must be >= 0")
    ca, cb = classify(a), classify(b)
    if a.ell != b.ell:
        raise ValueError("mixed moduli in tor")
    if a.ell != 2:
        return _counts_mul(ca, cb, _BOX0_ODD) if i == 0 else {}
    return _counts_mul(ca, cb, _TOR.get(i, {}))


def module_from_file(path: str) -> MackeyModule:
    with open(path) as fh:
        return MackeyModule.from_json(json.load(fh))
