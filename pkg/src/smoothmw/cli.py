"""Command-line front end.

Every command writes one JSON document to standard output (a plain table
with ``--pretty``).  Exit codes: 0 success, 1 ``reproduce`` found a
failing check, 2 invalid input (with a JSON diagnostic), 3 a bounded
search found nothing.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from . import __version__
from .abelian import FgAbelianGroup
from .fibration import (
    FibrationDescription,
    FibrationError,
    disk_report,
    fiber_connected_sum,
    mw_sphere,
)
from .lattice import (
    Lattice,
    LatticeError,
    classify_even_unimodular,
    discriminant_group,
    eichler,
    is_even,
    isotropic_quotient,
    make_standard,
    roots,
    signature,
    spinor_orientation_sign,
)
from .mapclass import WordError, parse_word, report as modpi_report
from .monodromy import (
    MonodromyError,
    apply_moves,
    classify_sl2,
    cycles_from_json,
    find_equinodal_pairs,
    product_monodromy,
    torus_bundle_mw,
)
from .unipotent import NotUnipotentError, WordSyntaxError, fix_report, parse_lambda

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_NOT_FOUND = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- input helpers --------------------------------------------------------------

def _read_json(path: str) -> Any:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from exc


def _vector(text: str) -> tuple[int, ...]:
    s = text.strip()
    if s.startswith("["):
        try:
            data = json.loads(s)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad vector {text!r}") from exc
    else:
        data = [x for x in s.replace(" ", ",").split(",") if x]
    try:
        return tuple(int(x) for x in data)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad vector {text!r}; expected comma-separated integers") from exc


def _lattice(path: str) -> Lattice:
    return Lattice.from_dict(_read_json(path))


def _fibration(path: str) -> FibrationDescription:
    return FibrationDescription.from_dict(_read_json(path))


def _group(G: FgAbelianGroup) -> dict:
    return G.to_dict()


# -- commands ---------------------------------------------------------------------

def cmd_mw_disk(args) -> tuple[dict, int]:
    F = _fibration(args.file)
    if F.base != "disk":
        raise FibrationError(f"expected a disk description, got base {F.base!r}")
    return disk_report(F).to_dict(), EXIT_OK


def cmd_mw_sphere(args) -> tuple[dict, int]:
    return mw_sphere(_fibration(args.file)).to_dict(), EXIT_OK


def cmd_mw_glue(args) -> tuple[dict, int]:
    F, G = _fibration(args.first), _fibration(args.second)
    S = fiber_connected_sum(F, G)
    rF, rG, rS = mw_sphere(F), mw_sphere(G), mw_sphere(S)
    return {
        "fibration": S.to_dict(),
        "genus": S.genus,
        "mw": _group(rS.mw),
        "lattice_label": rS.lattice_label,
        "rank_check": {
            "rank": rF.mw.free_rank,
            "rank'": rG.mw.free_rank,
            "rank_sum": rS.mw.free_rank,
            "additive_plus_4": rS.mw.free_rank == rF.mw.free_rank + rG.mw.free_rank + 4,
        },
    }, EXIT_OK


def cmd_lattice_make(args) -> tuple[dict, int]:
    return make_standard(args.expr).to_dict(), EXIT_OK


def cmd_lattice_quotient(args) -> tuple[dict, int]:
    L = _lattice(args.file)
    e = _vector(args.e) if args.e else None
    quot = isotropic_quotient(L, e)
    Q = quot.quotient
    return {
        "e": list(quot.e),
        "quotient": Q.to_dict(),
        "complement": [list(c) for c in quot.complement.columns()],
        "signature": list(signature(Q)),
        "even": is_even(Q),
        "determinant": Q.determinant,
        "label": _label_or_none(Q),
    }, EXIT_OK


def _label_or_none(L: Lattice) -> str | None:
    if not (is_even(L) and L.is_unimodular()):
        return None
    try:
        return classify_even_unimodular(L)
    except LatticeError:
        return None


def cmd_lattice_classify(args) -> tuple[dict, int]:
    L = _lattice(args.file)
    out = {
        "rank": L.rank,
        "signature": list(signature(L)),
        "even": is_even(L),
        "determinant": L.determinant,
        "discriminant_group": _group(discriminant_group(L)),
    }
    out["label"] = _label_or_none(L)
    return out, EXIT_OK


def cmd_lattice_roots(args) -> tuple[dict, int]:
    L = _lattice(args.file)
    rts = roots(L, args.norm)
    return {"norm": args.norm, "count": len(rts), "vectors": [list(v) for v in rts]}, EXIT_OK


def cmd_eichler_apply(args) -> tuple[dict, int]:
    L = _lattice(args.file)
    e, c = _vector(args.e), _vector(args.c)
    for name, v in (("e", e), ("c", c)):
        if len(v) != L.rank:
            raise LatticeError(f"--{name} has length {len(v)}, expected {L.rank}")
    g = eichler(L, e, c)
    out = {
        "matrix": g.matrix.tolist(),
        "fixes_e": g(e) == e,
        "preserves_gram": g.matrix.T @ L.gram @ g.matrix == L.gram,
    }
    if signature(L)[0] > 0 and signature(L)[0] + signature(L)[1] == L.rank:
        out["spinor_sign"] = spinor_orientation_sign(L, g)
    if args.x:
        x = _vector(args.x)
        if len(x) != L.rank:
            raise LatticeError(f"--x has length {len(x)}, expected {L.rank}")
        out["x"] = list(x)
        out["image"] = list(g(x))
    return out, EXIT_OK


def cmd_modpi_eval(args) -> tuple[dict, int]:
    w = parse_word(args.word)
    out = {"word": args.word}
    out.update(modpi_report(w))
    return out, EXIT_OK


def _cycles(path: str):
    data = _read_json(path)
    if isinstance(data, dict):
        data = data.get("cycles")
    if not isinstance(data, list):
        raise MonodromyError("expected a list of integer pairs or a fibration description")
    return cycles_from_json(json.dumps(data))


def cmd_monodromy_product(args) -> tuple[dict, int]:
    cycles = _cycles(args.file)
    A = product_monodromy(cycles)
    return {"monodromy": A.tolist(), "trace": A[0, 0] + A[1, 1]}, EXIT_OK


def cmd_monodromy_classify(args) -> tuple[dict, int]:
    cycles = _cycles(args.file)
    A = product_monodromy(cycles)
    return {
        "monodromy": A.tolist(),
        "class": classify_sl2(A).to_dict(),
        "coinvariants": _group(torus_bundle_mw(A)),
    }, EXIT_OK


def cmd_monodromy_hurwitz(args) -> tuple[dict, int]:
    cycles = _cycles(args.file)
    if args.apply:
        moved = apply_moves(cycles, args.apply.split())
        return {
            "moves": args.apply.split(),
            "cycles": [list(c) for c in moved],
            "monodromy_preserved": product_monodromy(moved) == product_monodromy(cycles),
        }, EXIT_OK
    if args.moves < 0:
        raise UsageError("--moves must be nonnegative")
    hits = find_equinodal_pairs(cycles, args.moves)
    out = {
        "max_moves": args.moves,
        "found": bool(hits),
        "depth": len(hits[0].moves) if hits else None,
        "hits": [h.to_dict() for h in hits[: args.limit]],
        "hit_count": len(hits),
    }
    return out, EXIT_OK if hits else EXIT_NOT_FOUND


def cmd_unipotent_fix(args) -> tuple[dict, int]:
    d = parse_lambda(args.lattice)
    if args.bound < 1:
        raise UsageError("--bound must be positive")
    rep = fix_report(d, args.word, args.bound)
    if not rep["unipotent"]:
        raise NotUnipotentError(f"word {args.word!r} does not give a unipotent isometry")
    return rep, EXIT_OK if rep["found"] else EXIT_NOT_FOUND


def cmd_reproduce(args) -> tuple[dict, int]:
    from .acceptance import run_all

    results = run_all(seed=args.seed)
    ok = all(r.passed for r in results)
    notes = []
    for r in results:
        q2 = r.detail.get("q=±2")
        if q2 and q2["all_parabolic"]:
            notes.append("two-nodal disk with |q| = 2: trace is -2 (parabolic), so a bound trace <= -3 fails there")
    return {
        "passed": ok,
        "table": [r.line() for r in results],
        "notes": notes,
        "criteria": [r.to_dict(timings=args.timings) for r in results],
    }, EXIT_OK if ok else EXIT_FAILED


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="print a table instead of JSON")

    p = _Parser(prog="smoothmw", description="Mordell-Weil groups, lattices and monodromy of genus-one fibrations.",
                parents=[common])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    mw = sub.add_parser("mw", help="Mordell-Weil groups").add_subparsers(dest="action", required=True)
    q = mw.add_parser("disk", parents=[common], help="disk fibration report")
    q.add_argument("file")
    q.set_defaults(func=cmd_mw_disk)
    q = mw.add_parser("sphere", parents=[common], help="sphere fibration report")
    q.add_argument("file")
    q.set_defaults(func=cmd_mw_sphere)
    q = mw.add_parser("glue", parents=[common], help="fiber connected sum of two sphere fibrations")
    q.add_argument("first")
    q.add_argument("second")
    q.set_defaults(func=cmd_mw_glue)

    lat = sub.add_parser("lattice", help="lattice tools").add_subparsers(dest="action", required=True)
    q = lat.add_parser("make", parents=[common], help="build a standard lattice, e.g. '2E8(-1) + 2U'")
    q.add_argument("expr")
    q.set_defaults(func=cmd_lattice_make)
    q = lat.add_parser("quotient", parents=[common], help="isotropic quotient e^perp / Ze")
    q.add_argument("file")
    q.add_argument("--e", help="isotropic vector (defaults to the marked e)")
    q.set_defaults(func=cmd_lattice_quotient)
    q = lat.add_parser("classify", parents=[common], help="invariants and even unimodular label")
    q.add_argument("file")
    q.set_defaults(func=cmd_lattice_classify)
    q = lat.add_parser("roots", parents=[common], help="vectors of a given norm in a definite lattice")
    q.add_argument("file")
    q.add_argument("--norm", type=int, default=-2)
    q.set_defaults(func=cmd_lattice_roots)

    eich = sub.add_parser("eichler", help="Eichler transformations").add_subparsers(dest="action", required=True)
    q = eich.add_parser("apply", parents=[common], help="matrix of E(e ^ c), optionally applied to x")
    q.add_argument("file")
    q.add_argument("--e", required=True)
    q.add_argument("--c", required=True)
    q.add_argument("--x")
    q.set_defaults(func=cmd_eichler_apply)

    modpi = sub.add_parser("modpi", help="relative mapping classes").add_subparsers(dest="action", required=True)
    q = modpi.add_parser("eval", parents=[common], help="normal form and actions of a word in F, F', t, t'")
    q.add_argument("word")
    q.set_defaults(func=cmd_modpi_eval)

    mono = sub.add_parser("monodromy", help="vanishing-cycle tuples").add_subparsers(dest="action", required=True)
    q = mono.add_parser("product", parents=[common], help="total monodromy")
    q.add_argument("file")
    q.set_defaults(func=cmd_monodromy_product)
    q = mono.add_parser("classify", parents=[common], help="conjugacy type of the total monodromy")
    q.add_argument("file")
    q.set_defaults(func=cmd_monodromy_classify)
    q = mono.add_parser("hurwitz", parents=[common], help="search the Hurwitz orbit for equinodal pairs")
    q.add_argument("file")
    q.add_argument("--moves", type=int, default=6)
    q.add_argument("--limit", type=int, default=20, help="number of hits to list")
    q.add_argument("--apply", help="apply a move word such as 'R1 L3' instead of searching")
    q.set_defaults(func=cmd_monodromy_hurwitz)

    uni = sub.add_parser("unipotent", help="unipotent isometries").add_subparsers(dest="action", required=True)
    q = uni.add_parser("fix", parents=[common], help="find a primitive isotropic fixed vector")
    q.add_argument("--lattice", required=True, help="Lambda(d)")
    q.add_argument("--word", required=True, help="e.g. \"E1 E5' R3\"")
    q.add_argument("--bound", type=int, default=4)
    q.set_defaults(func=cmd_unipotent_fix)

    q = sub.add_parser("reproduce", parents=[common], help="run the acceptance checks")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--timings", action="store_true", help="include run times (output no longer byte-stable)")
    q.set_defaults(func=cmd_reproduce)
    return p


# -- output -----------------------------------------------------------------------

def _cell(v: Any) -> str:
    if isinstance(v, dict) and set(v) == {"rank", "torsion"}:
        return str(FgAbelianGroup(v["rank"], tuple(v["torsion"])))
    if isinstance(v, (dict, list)):
        return json.dumps(v, ensure_ascii=False)
    return str(v)


def render_pretty(doc: dict) -> str:
    if "table" in doc:
        width = max(len(line) for line in doc["table"])
        rule = "-" * width
        notes = [f"note: {n}" for n in doc.get("notes", [])]
        return "\n".join([rule, *doc["table"], rule, *notes, "ALL PASS" if doc["passed"] else "SOME CHECKS FAILED"])
    rows = [(str(k), _cell(v)) for k, v in doc.items()]
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def emit(doc: dict, pretty: bool, stream=None) -> None:
    stream = stream or sys.stdout
    text = render_pretty(doc) if pretty else json.dumps(doc, ensure_ascii=False, indent=2)
    stream.write(text + "\n")


def diagnostic(code: str, message: str, details: list | None = None) -> dict:
    out = {"error": {"code": code, "message": message}}
    if details:
        out["error"]["details"] = details
    return out


def main(argv: Sequence[str] | None = None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    argv = list(sys.argv[1:] if argv is None else argv)
    pretty = "--pretty" in argv
    try:
        args = build_parser().parse_args(argv)
        doc, code = args.func(args)
    except UsageError as exc:
        doc, code = diagnostic("usage", str(exc)), EXIT_INVALID
    except FibrationError as exc:
        doc, code = diagnostic("invalid_fibration", str(exc), exc.violations), EXIT_INVALID
    except LatticeError as exc:
        doc, code = diagnostic("invalid_lattice", str(exc)), EXIT_INVALID
    except MonodromyError as exc:
        doc, code = diagnostic("invalid_cycles", str(exc)), EXIT_INVALID
    except (WordError, WordSyntaxError) as exc:
        doc, code = diagnostic("invalid_word", str(exc)), EXIT_INVALID
    except NotUnipotentError as exc:
        doc, code = diagnostic("not_unipotent", str(exc)), EXIT_INVALID
    except (ValueError, TypeError, KeyError) as exc:
        doc, code = diagnostic("invalid_input", f"{type(exc).__name__}: {exc}"), EXIT_INVALID
    emit(doc, pretty)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
