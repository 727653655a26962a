"""JSON reading and writing for rings, complexes, differential modules and more.

Polynomials travel as exact strings such as ``"3*x1^2*x2 - x3"``.
Twists follow the S(-k) convention, so a generator of degree k has twist -k.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .betti import BettiTable
from .complexes import Complex, check_complex
from .diffmod import DifferentialModule
from .errors import FlagforgeError, ParseError, ValidationError
from .polyring import GradedFreeModule, HomMap, Poly, PolyRing
from .rigidity import CompleteIntersection

__all__ = [
    "ring_to_json",
    "ring_from_json",
    "complex_to_json",
    "complex_from_json",
    "dm_to_json",
    "dm_from_json",
    "ci_to_json",
    "ci_from_json",
    "betti_to_json",
    "betti_from_json",
    "to_json",
    "from_json",
    "dumps",
    "loads",
    "parse_input",
    "write_output",
]


def _field(obj: dict, name: str, where: str = ""):
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object", field=where or None)
    if name not in obj:
        raise ParseError("missing field", field=f"{where}.{name}" if where else name)
    return obj[name]


def _validated(fn, *args):
    """Run a constructor, turning domain failures into ValidationError."""
    try:
        return fn(*args)
    except (ParseError, ValidationError):
        raise
    except FlagforgeError as exc:
        raise ValidationError(type(exc).__name__, str(exc)) from None


# ---------------------------------------------------------------------------


def ring_to_json(R: PolyRing) -> dict:
    return {"variables": list(R.variables), "characteristic": R.field.characteristic}


def ring_from_json(obj: Any) -> PolyRing:
    variables = _field(obj, "variables", "ring")
    char = obj.get("characteristic", 0)
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise ParseError("variables must be a list of names", field="ring.variables")
    if not isinstance(char, int):
        raise ParseError("characteristic must be an integer", field="ring.characteristic")
    try:
        return PolyRing(variables, char)
    except FlagforgeError as exc:
        raise ParseError(str(exc), field="ring") from None
    except ValueError as exc:
        raise ParseError(str(exc), field="ring") from None


def _poly(R: PolyRing, s: Any, where: str) -> Poly:
    if isinstance(s, int):
        return R(s)
    if not isinstance(s, str):
        raise ParseError("polynomial entries must be strings", field=where)
    try:
        return R.parse(s)
    except ParseError as exc:
        raise ParseError(str(exc), field=where) from None


def _matrix(R: PolyRing, rows: Any, where: str) -> list[list[Poly]]:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError("matrix must be a list of rows", field=where)
    return [[_poly(R, e, f"{where}[{r}][{c}]") for c, e in enumerate(row)] for r, row in enumerate(rows)]


def _twists(tw: Any, where: str) -> list[int]:
    if not isinstance(tw, list) or not all(isinstance(t, int) for t in tw):
        raise ParseError("twists must be a list of integers", field=where)
    return tw


def _rows_json(M: HomMap) -> list[list[str]]:
    return [[str(e) for e in row] for row in M.entries]


# ---------------------------------------------------------------------------


def complex_to_json(C: Complex) -> dict:
    return {
        "ring": ring_to_json(C.ring),
        "twists": [list(F.twists) for F in C.modules],
        "maps": [_rows_json(m) for m in C.maps],
    }


def complex_from_json(obj: Any) -> Complex:
    R = ring_from_json(_field(obj, "ring"))
    tw = _field(obj, "twists")
    if not isinstance(tw, list) or not tw:
        raise ParseError("twists must be a nonempty list", field="twists")
    modules = [GradedFreeModule.from_twists(R, _twists(t, f"twists[{i}]")) for i, t in enumerate(tw)]
    raw = obj.get("maps", [])
    if not isinstance(raw, list):
        raise ParseError("maps must be a list", field="maps")
    if len(raw) != len(modules) - 1:
        raise ValidationError("ShapeMismatch", f"{len(modules)} modules need {len(modules) - 1} maps")
    maps = []
    for i, rows in enumerate(raw, start=1):
        ent = _matrix(R, rows, f"maps[{i - 1}]")
        maps.append(_validated(HomMap, modules[i], modules[i - 1], 0, ent))
    C = _validated(Complex, R, modules, maps)
    rep = check_complex(C)
    if not rep:
        raise ValidationError("SquareNonzero", rep.message or f"composite differential nonzero at index {rep.index}")
    return C


def dm_to_json(D: DifferentialModule) -> dict:
    out = {
        "ring": ring_to_json(D.ring),
        "degree": D.degree,
        "twists": list(D.module.twists),
        "matrix": _rows_json(D.d),
    }
    if D.flag_levels is not None:
        out["flag_levels"] = [list(L) for L in D.flag_levels]
    return out


def dm_from_json(obj: Any) -> DifferentialModule:
    R = ring_from_json(_field(obj, "ring"))
    a = _field(obj, "degree")
    if not isinstance(a, int):
        raise ParseError("degree must be an integer", field="degree")
    F = GradedFreeModule.from_twists(R, _twists(_field(obj, "twists"), "twists"))
    ent = _matrix(R, _field(obj, "matrix"), "matrix")
    levels = obj.get("flag_levels")
    if levels is not None and (
        not isinstance(levels, list) or not all(isinstance(L, list) and all(isinstance(g, int) for g in L)
                                                for L in levels)
    ):
        raise ParseError("flag_levels must be lists of generator indices", field="flag_levels")
    M = _validated(HomMap, F, F, a, ent)
    try:
        return _validated(DifferentialModule, F, a, M, levels)
    except ValueError as exc:
        raise ValidationError("FlagViolation", str(exc)) from None


def ci_to_json(ci: CompleteIntersection) -> dict:
    if ci.gens is None:
        return {"n": ci.n, "degrees": list(ci.degrees)}
    return {"ring": ring_to_json(ci.ring), "gens": [str(g) for g in ci.gens]}


def ci_from_json(obj: Any) -> CompleteIntersection:
    if isinstance(obj, dict) and "gens" in obj:
        R = ring_from_json(_field(obj, "ring"))
        gens = obj["gens"]
        if not isinstance(gens, list):
            raise ParseError("gens must be a list", field="gens")
        polys = [_poly(R, g, f"gens[{k}]") for k, g in enumerate(gens)]
        for k, p in enumerate(polys):
            if not p.is_homogeneous():
                raise ValidationError("HomogeneityViolation", f"gens[{k}] is not homogeneous")
        try:
            return CompleteIntersection(ring=R, gens=polys)
        except ValueError as exc:
            raise ValidationError("CompleteIntersection", str(exc)) from None
    n = _field(obj, "n")
    degs = _field(obj, "degrees")
    if not isinstance(n, int) or not isinstance(degs, list) or not all(isinstance(d, int) for d in degs):
        raise ParseError("degrees-only mode needs an integer n and integer degrees")
    try:
        return CompleteIntersection(degs, n=n)
    except ValueError as exc:
        raise ValidationError("CompleteIntersection", str(exc)) from None


def betti_to_json(t: BettiTable) -> dict:
    return {"betti": [[i, k, v] for (i, k), v in t.entries.items()]}


def betti_from_json(obj: Any) -> BettiTable:
    raw = _field(obj, "betti")
    if not isinstance(raw, list) or not all(
        isinstance(e, list) and len(e) == 3 and all(isinstance(x, int) for x in e) for e in raw
    ):
        raise ParseError("betti must be a list of [i, k, value] triples", field="betti")
    try:
        return BettiTable({(i, k): v for i, k, v in raw})
    except ValueError as exc:
        raise ValidationError("BettiTable", str(exc)) from None


# ---------------------------------------------------------------------------


def to_json(obj) -> dict:
    if isinstance(obj, Complex):
        return complex_to_json(obj)
    if isinstance(obj, DifferentialModule):
        return dm_to_json(obj)
    if isinstance(obj, CompleteIntersection):
        return ci_to_json(obj)
    if isinstance(obj, BettiTable):
        return betti_to_json(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_json(obj: Any):
    """Dispatch on the keys present."""
    if not isinstance(obj, dict):
        raise ParseError("top level must be a JSON object")
    if "maps" in obj:
        return complex_from_json(obj)
    if "matrix" in obj:
        return dm_from_json(obj)
    if "gens" in obj or "degrees" in obj:
        return ci_from_json(obj)
    if "betti" in obj:
        return betti_from_json(obj)
    if "twists" in obj:
        raise ParseError("missing field", field="maps or matrix")
    raise ParseError("unrecognized object: expected a complex, module, complete intersection or Betti table")


def dumps(obj) -> str:
    data = obj if isinstance(obj, dict) else to_json(obj)
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return from_json(data)


def parse_input(path) -> Any:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {p}: {exc.strerror}") from None
    return loads(text)


def write_output(obj, path) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")
