"""Command-line front end.

One subcommand per pipeline; JSON in, JSON out (``--format text`` switches
to a human rendering, including ASCII dot charts for bigraded windows).
Exit codes: 0 success, 1 validation or computation failure (with a
machine-readable violation list), 2 usage errors.  Set MACKEY_LOG to a
level name (or number) for diagnostics on standard error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from collections import Counter

from .complexes import (FreeComplex, complex_from_file, homology_counts,
                        validate_complex)
from .derived import (balmer_support, cohomology_window, dbox, dcotens,
                      invertible_class, op_dual_decomp, serre_check,
                      sufficient_window, toda_witness)
from .kronholm import kronholm_split, script_from_file
from .mackey import (MackeyModule, box, classify, ext, internal_hom,
                     module_from_file, tor, validate_module)
from .split import (DISK_KINDS, random_scrambled_complex, split,
                    verify_certificate)

log = logging.getLogger("c2mackey.cli")


class Failure(Exception):
    """A reportable failure: carries the machine-readable payload."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


# -- text renderings -----------------------------------------------------------

def strand_text(s) -> str:
    if s.kind in DISK_KINDS:
        return f"{s.kind} @ {s.shift}"
    name = f"H({s.param})" if s.kind == "Hn" else f"{s.kind}({s.param})"
    return f"{name} @ {s.shift}"


def strands_text(strands) -> str:
    return "\n".join(strand_text(s) for s in strands) if strands else "0"


def counts_text(counts: dict) -> str:
    parts = []
    for kind in ("H", "F", "Hop", "SDot", "STheta", "PtH", "PtSTheta"):
        n = counts.get(kind, 0)
        if n == 1:
            parts.append(kind)
        elif n > 1:
            parts.append(f"{n}{kind}")
    for kind, n in sorted(counts.items()):
        if kind not in ("H", "F", "Hop", "SDot", "STheta", "PtH", "PtSTheta") \
                and n:
            parts.append(f"{n}{kind}" if n > 1 else kind)
    return " + ".join(parts) if parts else "0"


def render_window(dims: list[list[int]], p0: int, p1: int,
                  q0: int, q1: int) -> str:
    """ASCII dot chart: one glyph per lattice point (``.`` for zero,
    digits for small dimensions, ``*`` past 9), p across, q up."""
    ps = list(range(p0, p1 + 1))
    qs = list(range(q0, q1 + 1))
    width = max([len(str(p)) for p in ps] + [1]) + 1
    qw = max([len(str(q)) for q in qs] + [1])
    lines = [" " * qw + " q"]
    for q in reversed(qs):
        cells = []
        for p in ps:
            d = dims[p - p0][q - q0]
            glyph = "." if d == 0 else (str(d) if d < 10 else "*")
            cells.append(glyph.rjust(width))
        lines.append(str(q).rjust(qw) + " |" + "".join(cells))
    lines.append(" " * qw + " +" + "-" * (width * len(ps) + 2))
    lines.append(" " * qw + "  "
                 + "".join(str(p).rjust(width) for p in ps) + "  p")
    return "\n".join(lines)


# -- input helpers -------------------------------------------------------------

def _load_complex(path: str) -> FreeComplex:
    c = complex_from_file(path)
    errs = validate_complex(c)
    if errs:
        raise Failure([f"{path}: {e}" for e in errs])
    return c


def _load_module(path: str, want_ell: int | None) -> MackeyModule:
    m = module_from_file(path)
    errs = validate_module(m)
    if errs:
        raise Failure([f"{path}: {e}" for e in errs])
    if want_ell is not None and m.ell != want_ell:
        raise Failure([f"{path}: modulus is {m.ell}, expected {want_ell}"])
    return m


def _split_file(path: str):
    return split(_load_complex(path))


# -- subcommand handlers: each returns (payload, text, exit_code) ---------------

def cmd_validate(args):
    with open(args.file) as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "generators" in data:
        c = FreeComplex.from_json(data)
        errs = validate_complex(c)
    elif isinstance(data, dict) and "dim_theta" in data:
        m = MackeyModule.from_json(data)
        errs = validate_module(m)
    else:
        errs = ["unrecognized input: expected a complex or a module"]
    if errs:
        raise Failure([f"{args.file}: {e}" for e in errs])
    return {"ok": True, "violations": []}, "ok", 0


def cmd_split(args):
    dec = _split_file(args.file)
    text = strands_text(dec.strands) + f"\nmoves: {len(dec.certificate)}"
    return dec.to_json(), text, 0


def cmd_homology(args):
    c = _load_complex(args.file)
    hom = homology_counts(c)
    payload = {"homology": {str(d): hom[d] for d in sorted(hom)}}
    text = "\n".join(f"degree {d}: {counts_text(hom[d])}"
                     for d in sorted(hom)) or "0"
    return payload, text, 0


def cmd_cohomology(args):
    c = _load_complex(args.file)
    if args.window:
        p0, p1, q0, q1 = args.window
    else:
        p0, p1, q0, q1 = sufficient_window(split(c).strands)
    if p0 > p1 or q0 > q1:
        raise Failure([f"empty window ({p0}..{p1}) x ({q0}..{q1})"])
    dims = cohomology_window(c, p0, p1, q0, q1)
    payload = {"p0": p0, "p1": p1, "q0": q0, "q1": q1, "dims": dims}
    return payload, render_window(dims, p0, p1, q0, q1), 0


def cmd_box(args):
    xs = _split_file(args.file).strands
    ys = _split_file(args.other).strands
    out = dbox(xs, ys)
    return {"strands": [s.to_json() for s in out]}, strands_text(out), 0


def cmd_cotens(args):
    xs = _split_file(args.file).strands
    zs = _split_file(args.other).strands
    out = dcotens(xs, zs)
    return {"strands": [s.to_json() for s in out]}, strands_text(out), 0


def cmd_dual(args):
    out = op_dual_decomp(_split_file(args.file).strands)
    return {"strands": [s.to_json() for s in out]}, strands_text(out), 0


def cmd_invertible(args):
    cls = invertible_class(_split_file(args.file).strands)
    payload = {"invertible": cls is not None,
               "class": None if cls is None else {"shift": cls[0],
                                                  "weight": cls[1]}}
    text = ("not invertible" if cls is None
            else f"invertible: Sigma^{cls[0]} H({cls[1]})")
    return payload, text, 0


def cmd_support(args):
    supp = balmer_support(_split_file(args.file).strands)
    return {"support": supp}, " ".join(supp) if supp else "(empty)", 0


def cmd_serre(args):
    xs = _split_file(args.file).strands
    ys = _split_file(args.other).strands
    res = serre_check(xs, ys)
    payload = {"ok": res["ok"],
               "lhs": [s.to_json() for s in res["lhs"]],
               "rhs": [s.to_json() for s in res["rhs"]]}
    return payload, "ok" if res["ok"] else "MISMATCH", 0 if res["ok"] else 1


def cmd_toda(args):
    w = toda_witness()
    bracket = w["maps"]["bracket"]
    payload = {
        "theta_rho_strictly_zero": w["theta_rho_strictly_zero"],
        "tau_theta_null_homotopic": w["tau_theta_null_homotopic"],
        "bracket_nonzero": w["bracket_nonzero"],
        "indeterminacy_dims": list(w["indeterminacy_dims"]),
        "zero_indeterminacy": w["zero_indeterminacy"],
        "bracket": None if bracket is None
        else bracket.to_json()["components"],
    }
    text = "\n".join(f"{k}: {payload[k]}" for k in
                     ("theta_rho_strictly_zero", "tau_theta_null_homotopic",
                      "bracket_nonzero", "indeterminacy_dims"))
    return payload, text, 0


def cmd_module(args):
    a = _load_module(args.file, args.ell)
    if args.mop == "classify":
        counts = classify(a)
        return {"counts": counts}, counts_text(counts), 0
    b = _load_module(args.other, args.ell)
    if args.mop == "box":
        counts = classify(box(a, b))
        return {"counts": counts}, counts_text(counts), 0
    if args.mop == "hom":
        counts = classify(internal_hom(a, b))
        return {"counts": counts}, counts_text(counts), 0
    fn = ext if args.mop == "ext" else tor
    if args.degree is not None:
        counts = fn(a, b, args.degree)
        return {"counts": counts}, counts_text(counts), 0
    table = {str(i): fn(a, b, i) for i in range(3)}
    text = "\n".join(f"{args.mop}^{i}: {counts_text(table[str(i)])}"
                     for i in ("0", "1", "2"))
    return {args.mop: table}, text, 0


def cmd_kronholm(args):
    script = script_from_file(args.file)
    dec, report = kronholm_split(script)
    payload = dec.to_json()
    payload["report"] = report.to_json()
    cells = " ".join(f"({c.m},{c.q})" for c in report.output_cells)
    text = (strands_text(dec.strands)
            + f"\ncells: {cells}\ntotal weight: {report.total_weight_in}")
    return payload, text, 0


def cmd_gen(args):
    instances = []
    for i in range(args.count):
        rng = random.Random(f"{args.seed}:{i}")
        c, planted = random_scrambled_complex(rng, max_strands=args.max_strands)
        instances.append({"complex": c.to_json(),
                          "planted": [s.to_json()
                                      for s in sorted(planted.elements())]})
    payload = instances[0] if args.count == 1 else {"instances": instances}
    text = "\n".join(json.dumps(inst["complex"]) for inst in instances)
    return payload, text, 0


def cmd_fuzz(args):
    recovered, failures = 0, []
    for i in range(args.count):
        rng = random.Random(f"{args.seed}:{i}")
        c, planted = random_scrambled_complex(rng, max_strands=args.max_strands)
        try:
            dec = split(c)
            ok = (Counter(dec.strands) == planted
                  and verify_certificate(c, dec))
        except Exception as exc:        # a fuzz failure is a report, not a crash
            log.info("instance %d raised: %s", i, exc)
            ok = False
        if ok:
            recovered += 1
        else:
            failures.append(i)
            log.info("instance %d not recovered", i)
    payload = {"count": args.count, "recovered": recovered,
               "failures": failures[:20], "ok": recovered == args.count}
    text = f"{recovered}/{args.count} recovered"
    return payload, text, 0 if recovered == args.count else 1


HANDLERS = {
    "validate": cmd_validate, "split": cmd_split, "homology": cmd_homology,
    "cohomology": cmd_cohomology, "box": cmd_box, "cotens": cmd_cotens,
    "dual": cmd_dual, "invertible": cmd_invertible, "support": cmd_support,
    "serre": cmd_serre, "toda": cmd_toda, "module": cmd_module,
    "kronholm": cmd_kronholm, "gen": cmd_gen, "fuzz": cmd_fuzz,
}


# -- argument parsing ------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=None,
                        help="output rendering (default json; fuzz: text)")

    p = argparse.ArgumentParser(
        prog="c2mackey",
        description="Exact algebra for modules and perfect complexes over "
                    "the constant Mackey ring of the group of order two.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_, **kw):
        sp = sub.add_parser(name, parents=[common], help=help_, **kw)
        return sp

    sp = add("validate", "check a complex or module file")
    sp.add_argument("file")
    sp = add("split", "decompose a complex into strands with a certificate")
    sp.add_argument("file")
    sp = add("homology", "classified homology of a complex, per degree")
    sp.add_argument("file")
    sp = add("cohomology", "bigraded cohomology window of a complex")
    sp.add_argument("file")
    sp.add_argument("--window", nargs=4, type=int,
                    metavar=("P0", "P1", "Q0", "Q1"))
    for name, help_ in (("box", "derived product of two complexes"),
                        ("cotens", "derived cotensor of two complexes"),
                        ("serre", "check the duality identity on two files")):
        sp = add(name, help_)
        sp.add_argument("file")
        sp.add_argument("other")
    for name, help_ in (("dual", "opposite dual of a complex"),
                        ("invertible", "test for box-invertibility"),
                        ("support", "tensor-triangular support")):
        sp = add(name, help_)
        sp.add_argument("file")
    add("toda", "three-fold bracket witness on the unit")
    sp = add("module", "module-level operations")
    msub = sp.add_subparsers(dest="mop", required=True)
    for mop, nargs_ in (("classify", 1), ("box", 2), ("hom", 2),
                        ("ext", 2), ("tor", 2)):
        mp = msub.add_parser(mop, parents=[common])
        mp.add_argument("file")
        if nargs_ == 2:
            mp.add_argument("other")
        if mop in ("ext", "tor"):
            mp.add_argument("-i", "--degree", type=int, default=None)
        mp.add_argument("--ell", type=int, default=None,
                        help="expected modulus of the input modules")
    sp = add("kronholm", "run a cell build script and report weight shifts")
    sp.add_argument("file")
    sp = add("gen", "emit random scrambled complexes")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--max-strands", type=int, default=8)
    sp = add("fuzz", "construct-scramble-recover campaign")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--max-strands", type=int, default=8)
    return p


def _configure_logging() -> None:
    level = os.environ.get("MACKEY_LOG")
    if not level:
        return
    try:
        value = int(level)
    except ValueError:
        value = level.upper()
    logging.basicConfig(level=value, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    fmt = args.format or ("text" if args.command == "fuzz" else "json")
    log.debug("command %s", args.command)
    try:
        payload, text, code = HANDLERS[args.command](args)
    except Failure as exc:
        _emit(fmt, {"ok": False, "violations": exc.violations},
              "error: " + "; ".join(exc.violations))
        return 1
    except Exception as exc:  # noqa: BLE001 - report, never a traceback
        msg = f"{type(exc).__name__}: {exc}"
        _emit(fmt, {"ok": False, "violations": [msg]}, "error: " + msg)
        return 1
    _emit(fmt, payload, text)
    return code


def _emit(fmt: str, payload, text: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


if __name__ == "__main__":
    sys.exit(main(argv=None))
