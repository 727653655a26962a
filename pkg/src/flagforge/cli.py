"""Command-line front end.

Exit codes: 0 success, 1 domain error, 2 usage error.  Commands that build
a module print its JSON on stdout; the others print a short text summary.
``--json-out`` always receives the full run report.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from pathlib import Path
from typing import Sequence

from . import __version__
from .betti import BettiTable, betti_table, ci_deficiency_degrees, pure_deficiency_degrees, slope_pairs
from .complexes import Complex, check_complex, end_cohomology_dim
from .deform import (
    LiftState,
    Obstructed,
    assemble,
    dim_bounds,
    enumerate_flags,
    lift,
    lift_space,
)
from .diffmod import (
    DifferentialModule,
    anchor_h0_hilbert,
    default_window,
    fold,
    homology_hilbert,
    minimize,
    validate_flag,
)
from .errors import FlagforgeError
from .io import dm_to_json, dumps, parse_input
from .rigidity import (
    CompleteIntersection,
    ci_ext_dim,
    is_a_rigid,
    nonrigidity_witness,
    rigid_thresholds,
    rigidity_window,
    socle_degree,
)

__all__ = ["main", "run", "RunReport", "build_parser"]


@dataclass
class RunReport:
    command: str
    inputs_digest: str
    log: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "log": self.log,
            "results": self.results,
            "timing": self.timing,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True, default=_jsonable) + "\n"


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, tuple):
        return list(x)
    return str(x)


class Usage(Exception):
    """Bad command-line usage detected after argument parsing."""


# ---------------------------------------------------------------------------
# argument types


def _field_arg(s: str) -> int:
    s = s.strip().lower()
    if s in ("q", "qq", "0"):
        return 0
    try:
        p = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError("field must be 'q' or a prime number") from None
    if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _window_arg(s: str) -> tuple[int, int]:
    try:
        a, b = s.split(":")
        lo, hi = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError("window must look like j0:j1") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("window start exceeds its end")
    return lo, hi


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError("expected a comma-separated list of integers") from None


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=_field_arg, default=None,
                        help="'q' for the rationals or a prime p for GF(p)")
    common.add_argument("--degree", "-a", type=int, default=None, help="internal degree a of the differential")
    common.add_argument("--window", type=_window_arg, default=None, help="internal degree range j0:j1")
    common.add_argument("--budget", type=int, default=None, help="enumeration budget (FLAGFORGE_BUDGET overrides)")
    common.add_argument("--json-out", default=None, help="write the run report as JSON to this path")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    ap = argparse.ArgumentParser(prog="flagforge", description="Exact computations with free flags.")
    ap.add_argument("--version", action="version", version=f"flagforge {__version__}")
    sub = ap.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name, help_, inp=True, inp_required=True):
        p = sub.add_parser(name, parents=[common], help=help_)
        if inp:
            p.add_argument("--in", dest="inp", required=inp_required, help="input JSON file")
        return p

    add("check", "validate a complex, module, complete intersection or Betti table")
    add("fold", "fold a complex into a differential module")
    p = add("deform", "lift a complex stage by stage to a free flag")
    p.add_argument("--strategy", choices=("canonical", "enumerate"), default="canonical")
    p.add_argument("--coords", default=None, help="JSON file {\"stages\": [[cocycle coordinates], ...]}")
    add("enumerate", "enumerate flag classes over a finite field")
    add("minimize", "strip unit entries from a differential module")
    add("homology", "Hilbert function of the homology")
    p = add("ext-dims", "Ext (or endomorphism cohomology) dimensions", inp_required=False)
    p.add_argument("--degrees", type=_int_list, default=None)
    p.add_argument("--vars", type=int, default=None)
    p.add_argument("--i", dest="coh", type=_int_list, default=None, help="cohomological degrees")
    p = add("rigidity-window", "non-rigid interval of an Artinian complete intersection", inp_required=False)
    p.add_argument("--degrees", type=_int_list, default=None)
    p.add_argument("--vars", type=int, default=None)
    p.add_argument("--thresholds", action="store_true", help="also report rigidity thresholds")
    add("witness", "non-rigidity witness flag for a complete intersection")
    p = add("betti-deficiency", "degrees where Betti deficiency is possible", inp_required=False)
    p.add_argument("--degrees", type=_int_list, default=None, help="complete intersection degree list")
    p.add_argument("--pure", type=_int_list, default=None, help="pure degree sequence")
    add("dim-bounds", "integer bounds on the dimension of the flag variety")
    p = add("paper-examples", "run the worked-example gallery", inp=False)
    p.add_argument("--only", action="append", default=None, help="run only the named check (repeatable)")
    return ap


# ---------------------------------------------------------------------------


def _digest(args: argparse.Namespace) -> str:
    h = hashlib.sha256()
    opts = {k: v for k, v in sorted(vars(args).items()) if k not in ("json_out",)}
    h.update(json.dumps(opts, sort_keys=True, default=_jsonable).encode())
    for key in ("inp", "coords"):
        path = getattr(args, key, None)
        if path and Path(path).is_file():
            h.update(Path(path).read_bytes())
    return h.hexdigest()


def _load(args, kinds: tuple):
    obj = parse_input(args.inp)
    if not isinstance(obj, kinds):
        names = " or ".join(k.__name__ for k in kinds)
        raise Usage(f"{args.inp} holds a {type(obj).__name__}, expected {names}")
    if args.field is not None:
        if isinstance(obj, Complex):
            obj = obj.over_characteristic(args.field)
        elif isinstance(obj, DifferentialModule):
            obj = _dm_over(obj, args.field)
    return obj


def _dm_over(D: DifferentialModule, p: int) -> DifferentialModule:
    R = D.ring.with_characteristic(p)
    from .polyring import GradedFreeModule, HomMap

    F = GradedFreeModule(R, D.module.degrees)
    M = HomMap(F, F, D.degree, [[e.change_ring(R) for e in row] for row in D.d.entries])
    return DifferentialModule(F, D.degree, M, D.flag_levels)


def _need_degree(args) -> int:
    if args.degree is None:
        raise Usage("--degree is required for this command")
    return args.degree


def _hilb(h: dict) -> dict:
    return {str(j): v for j, v in sorted(h.items())}


def _ci_from_args(args) -> CompleteIntersection:
    if args.inp:
        return _load(args, (CompleteIntersection,))
    if args.degrees is None:
        raise Usage("give --in or --degrees (with --vars, default: one variable per degree)")
    return CompleteIntersection(args.degrees, n=args.vars if args.vars is not None else len(args.degrees))


# -- commands ---------------------------------------------------------------


def cmd_check(args, rep: RunReport, out: list) -> int:
    obj = _load(args, (Complex, DifferentialModule, CompleteIntersection, BettiTable))
    res: dict = {"kind": type(obj).__name__}
    if isinstance(obj, Complex):
        res["ranks"] = obj.ranks()
        res["square_zero"] = bool(check_complex(obj))
        res["minimal"] = obj.is_minimal()
    elif isinstance(obj, DifferentialModule):
        res["rank"] = obj.rank
        res["square_zero"] = True
        if obj.flag_levels is not None:
            anchor = validate_flag(obj)
            res["flag"] = True
            res["anchor_ranks"] = anchor.ranks()
    elif isinstance(obj, CompleteIntersection):
        res["degrees"] = list(obj.degrees)
        res["artinian"] = obj.is_artinian
    else:
        res["total"] = obj.total
    rep.results = res
    out.append(f"ok: {res['kind']} passes validation")
    return 0


def cmd_fold(args, rep, out) -> int:
    C = _load(args, (Complex,))
    D = fold(C, _need_degree(args))
    rep.results = {"module": dm_to_json(D)}
    out.append(dumps(D).rstrip())
    return 0


def _space_entry(s: LiftState) -> dict:
    ls = lift_space(s)
    return {"stage": s.stage, "cocycle_dim": ls.cocycle_dim, "coboundary_dim": ls.coboundary_dim,
            "quotient_dim": ls.quotient_dim}


def cmd_deform(args, rep, out) -> int:
    C = _load(args, (Complex,))
    a = _need_degree(args)
    if args.strategy == "enumerate":
        return cmd_enumerate(args, rep, out)
    coords = None
    if args.coords:
        try:
            coords = json.loads(Path(args.coords).read_text())["stages"]
        except (OSError, KeyError, json.JSONDecodeError) as exc:
            raise Usage(f"cannot read cocycle coordinates: {exc}") from None
    s = LiftState.initial(C, a)
    while s.stage < C.length:
        entry = _space_entry(s)
        k = s.stage - 1
        choice = coords[k] if coords is not None and k < len(coords) else "canonical"
        nxt = lift(s, choice)
        if isinstance(nxt, Obstructed):
            entry["event"] = "obstructed"
            entry["message"] = nxt.message
            rep.log.append(entry)
            rep.results = {"obstructed": True, "stage": nxt.stage}
            out.append(f"obstructed at stage {nxt.stage}: {nxt.message}")
            return 1
        entry["event"] = "lifted"
        rep.log.append(entry)
        s = nxt
    D = assemble(s)
    rep.results = {"module": dm_to_json(D), "fold": s.is_fold()}
    out.append(dumps(D).rstrip())
    return 0


def cmd_enumerate(args, rep, out) -> int:
    C = parse_input(args.inp)
    if not isinstance(C, Complex):
        raise Usage("enumeration needs a complex")
    a = _need_degree(args)
    p = args.field if args.field else 2
    res = enumerate_flags(C, a, p, budget=args.budget)
    rep.log.extend(res.log)
    rep.results = {
        "field": p,
        "classes": len(res),
        "label": res.label,
        "multiplicities": [c.multiplicity for c in res.classes],
        "modules": [dm_to_json(c.flag) for c in res.classes],
    }
    out.append(f"{len(res)} {res.label} over GF({p}) at degree {a}")
    for k, c in enumerate(res.classes):
        out.append(f"  class {k}: multiplicity {c.multiplicity}, fold={c.state.is_fold()}")
    return 0


def cmd_minimize(args, rep, out) -> int:
    D = _load(args, (DifferentialModule,))
    Dm, rec = minimize(D)
    rep.results = {"module": dm_to_json(Dm), "betti": rec.as_dict(), "total": rec.total,
                   "input_rank": D.rank}
    out.append(dumps(Dm).rstrip())
    return 0


def cmd_homology(args, rep, out) -> int:
    obj = _load(args, (DifferentialModule, Complex))
    if isinstance(obj, Complex):
        D = fold(obj, args.degree or 0)
        win = args.window or default_window(D)
        rep.results = {"anchor_h0": _hilb(anchor_h0_hilbert(obj, win))}
    else:
        D = obj
        win = args.window or default_window(D)
    h = homology_hilbert(D, win)
    rep.results["window"] = list(win)
    rep.results["homology"] = _hilb(h)
    out.append("j: " + " ".join(f"{j}:{v}" for j, v in sorted(h.items())))
    return 0


def cmd_ext_dims(args, rep, out) -> int:
    if args.inp:
        obj = _load(args, (CompleteIntersection, Complex))
    else:
        obj = _ci_from_args(args)
    if isinstance(obj, CompleteIntersection):
        length = obj.c
        fn = partial(ci_ext_dim, obj)
        tot = sum(obj.degrees)
    else:
        length = obj.length
        fn = partial(end_cohomology_dim, obj)
        tot = sum(max(F.degrees, default=0) for F in obj.modules)
    win = args.window or (-tot - 2, 2)
    coh = args.coh or list(range(0, length + 1))
    table = {str(i): {str(j): fn(i, j) for j in range(win[0], win[1] + 1)} for i in coh}
    rep.results = {"window": list(win), "dims": table}
    for i in coh:
        out.append(f"i={i}: " + " ".join(f"{j}:{table[str(i)][str(j)]}" for j in range(win[0], win[1] + 1)))
    return 0


def cmd_rigidity_window(args, rep, out) -> int:
    ci = _ci_from_args(args)
    w = rigidity_window(ci)
    res = {"degrees": list(ci.degrees), "n": ci.n, "nonrigid": [w.lo, w.hi], "linear": w.linear,
           "socle_degree": socle_degree(ci)}
    if args.degree is not None:
        r = is_a_rigid(ci, args.degree)
        res["a"] = args.degree
        res["rigid"] = r.rigid
        res["ext_slices"] = [list(t) for t in r.rows]
    if args.thresholds:
        t = rigid_thresholds(ci)
        res["thresholds"] = {"lower": t.lower, "upper": t.upper, "lower_is_derived": t.lower_is_derived}
    rep.results = res
    out.append(f"non-rigid interval [{w.lo}, {w.hi}]")
    if "rigid" in res:
        out.append(f"a={args.degree}: {'rigid' if res['rigid'] else 'not rigid'}")
    return 0


def cmd_witness(args, rep, out) -> int:
    ci = _load(args, (CompleteIntersection,))
    a = _need_degree(args)
    w = nonrigidity_witness(ci, a)
    win = args.window or (0, socle_degree(ci) + 2)
    h = homology_hilbert(w.module, win)
    rep.results = {
        "a": a,
        "pair": list(w.pair),
        "internal_degree_j": w.j,
        "monomial": str(w.monomial),
        "class": f"{w.monomial}*e{w.pair[0]}^e{w.pair[1]}",
        "class_internal_degree": w.class_degree,
        "orientation": "module degree a = d_i + d_(i+1) - j; the Ext class sits in internal degree -a",
        "homology": _hilb(h),
        "quotient_hilbert": _hilb({j: ci.hilbert(j) for j in range(win[0], win[1] + 1)}),
        "module": dm_to_json(w.module),
    }
    rep.log.append({"event": "non-conjugate to the fold", "stage": 2})
    out.append(dumps(w.module).rstrip())
    return 0


def cmd_betti_deficiency(args, rep, out) -> int:
    res: dict = {}
    if args.pure is not None:
        res["pure"] = sorted(pure_deficiency_degrees(args.pure))
        out.append(f"pure sequence {args.pure}: deficiency possible only at a in {res['pure']}")
    if args.degrees is not None:
        res["complete_intersection"] = sorted(ci_deficiency_degrees(args.degrees))
        out.append(f"degrees {args.degrees}: deficiency possible only at a in {res['complete_intersection']}")
    if args.inp:
        obj = _load(args, (BettiTable, Complex, CompleteIntersection))
        if isinstance(obj, CompleteIntersection):
            res["complete_intersection"] = sorted(ci_deficiency_degrees(obj.degrees))
            out.append(f"deficiency possible only at a in {res['complete_intersection']}")
        else:
            t = obj if isinstance(obj, BettiTable) else betti_table(obj)
            res["betti_total"] = t.total
            if args.degree is None:
                raise Usage("--degree is required with a Betti table or complex")
            pairs = slope_pairs(t, args.degree)
            res["a"] = args.degree
            res["pairs"] = [{"upper": list(p.upper), "lower": list(p.lower), "j": p.j, "slope": str(p.slope)}
                            for p in pairs]
            out.append(str(t))
            if pairs:
                out.append(f"a={args.degree}: deficiency possible only via {len(pairs)} admissible pair(s)")
                for p in pairs:
                    out.append(f"  beta{p.upper} and beta{p.lower}, slope {p.slope}")
            else:
                out.append(f"a={args.degree}: no Betti-deficient module with this homology")
    if not res:
        raise Usage("give --in, --degrees or --pure")
    rep.results = res
    return 0


def cmd_dim_bounds(args, rep, out) -> int:
    C = _load(args, (Complex,))
    a = _need_degree(args)
    b = dim_bounds(C, a)
    rep.results = {"lower": b.lower, "upper": b.upper,
                   "upper_terms": [list(t) for t in b.upper_terms],
                   "correction_terms": [list(t) for t in b.correction_terms]}
    out.append(f"dimension bounds at a={a}: lower {b.lower}, upper {b.upper}")
    return 0


def cmd_gallery(args, rep, out) -> int:
    from .gallery import run_gallery

    checks = run_gallery(args.only, seed=args.seed)
    rep.results = {c.key: {"passed": c.passed, "title": c.title, "detail": c.detail} for c in checks}
    rep.timing["checks"] = {c.key: c.seconds for c in checks}
    out.extend(c.line() for c in checks)
    failed = [c.key for c in checks if not c.passed]
    out.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return 0 if not failed else 1


COMMANDS = {
    "check": cmd_check,
    "fold": cmd_fold,
    "deform": cmd_deform,
    "enumerate": cmd_enumerate,
    "minimize": cmd_minimize,
    "homology": cmd_homology,
    "ext-dims": cmd_ext_dims,
    "rigidity-window": cmd_rigidity_window,
    "witness": cmd_witness,
    "betti-deficiency": cmd_betti_deficiency,
    "dim-bounds": cmd_dim_bounds,
    "paper-examples": cmd_gallery,
}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> tuple[int, RunReport | None]:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    rep = RunReport(args.command, _digest(args))
    out: list[str] = []
    t = time.perf_counter()
    try:
        code = COMMANDS[args.command](args, rep, out)
    except Usage as exc:
        print(f"flagforge {args.command}: usage error: {exc}", file=stderr)
        return 2, rep
    except FlagforgeError as exc:
        print(f"flagforge {args.command}: {type(exc).__name__}: {exc}", file=stderr)
        rep.results = {"error": type(exc).__name__, "message": str(exc)}
        code = 1
    except ValueError as exc:
        print(f"flagforge {args.command}: error: {exc}", file=stderr)
        rep.results = {"error": "ValueError", "message": str(exc)}
        code = 1
    rep.timing["seconds"] = round(time.perf_counter() - t, 6)
    if out:
        print("\n".join(out), file=stdout)
    if args.json_out:
        Path(args.json_out).write_text(rep.to_json(), encoding="utf-8")
    return code, rep


def main(argv: Sequence[str] | None = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
