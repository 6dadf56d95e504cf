"""``filtra`` command line: JSON in, JSON or text tables out.

Object-producing verbs (gr, complete, tensor, hom, dual, algebra-gr, example)
print JSON unless ``--format table`` is given; report verbs (is-complete, geq,
ss, abutment, validate) print tables unless ``--format json`` is given.
Exit codes: 0 success, 1 invalid input, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Any, Callable

from . import serialize as ser
from .chain import ChainComplex, betti
from .errors import FieldMismatch, FiltraError
from .exactlin import Field
from .filtalg import FilteredAlgebra, diff_ops_example, gr_algebra, validate_algebra, algebra_defects
from .generators import (
    postnikov_example,
    random_monic_sequence,
    t_adic_endomorphism,
    t_adic_sequence,
)
from .graded import GradedObject
from .monoidal import completed_tensor, internal_hom_fil, is_dualizable_filtered, sequence_reflector
from .sequence import (
    Sequence,
    SequenceMap,
    completion,
    gr,
    is_complete,
    is_graded_equivalence,
    levelwise_quasi_iso,
)
from .specseq import abutment, page_table, pages

__all__ = ["main", "run", "TABLE_WIDTH"]

TABLE_WIDTH = 120

OBJECT_VERBS = {"gr", "complete", "tensor", "hom", "dual", "algebra-gr", "example"}
EXAMPLES = ("t-adic", "diff-ops", "postnikov", "random")


class _Usage(Exception):
    """Raised for argument combinations argparse cannot express."""


def _parse_field(text: str) -> Field:
    if text == "q":
        return Field("rational")
    if text.startswith("fp:"):
        try:
            return Field("prime", int(text[3:]))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad prime field {text!r}: {exc}") from exc
    raise argparse.ArgumentTypeError(f"field must be q or fp:P, got {text!r}")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default=None)
    common.add_argument("--field", type=_parse_field, default=None)

    parser = argparse.ArgumentParser(prog="filtra", description="Exact computations with filtered chain complexes.")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="verb")

    def one(name: str, help_: str):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("input", help="JSON file, or - for standard input")
        return p

    def two(name: str, help_: str):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("left")
        p.add_argument("right")
        return p

    one("gr", "associated graded of a sequence")
    one("complete", "completion of a sequence")
    one("is-complete", "whether a sequence is complete")
    one("geq", "whether a sequence map is a graded equivalence")
    two("tensor", "completed tensor of two sequences")
    two("hom", "internal hom of two sequences")
    one("dual", "dual Hom(X, 1) of a sequence")
    ss = one("ss", "spectral sequence pages")
    ss.add_argument("--max-page", type=_positive, default=3)
    one("abutment", "abutment check for a bounded-below monic sequence")
    one("algebra-gr", "associated graded algebra")
    one("validate", "check the invariants of any supported JSON value")
    ex = sub.add_parser("example", parents=[common], help="emit an example object")
    ex.add_argument("name", choices=EXAMPLES)
    ex.add_argument("input", nargs="?", help="complex file for postnikov")
    ex.add_argument("--d", type=_positive, default=None)
    ex.add_argument("--seed", type=int, default=7)
    return parser


# input


def _load(path: str, stdin) -> Any:
    if path == "-":
        text = stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def _check_field(expected: Field | None, actual: Field) -> None:
    if expected is not None and expected != actual:
        raise FieldMismatch(f"input is over {actual.kind} but --field asked for {expected.kind}")


def _as_sequence(obj: Any, field: Field | None) -> Sequence:
    x = ser.decode_sequence(obj)
    _check_field(field, x.field)
    return x


def _as_map(obj: Any, field: Field | None) -> SequenceMap:
    if "endomorphism" in obj and "source" not in obj:
        # the t-adic example ships its endomorphism next to the sequence
        f = ser.decode_sequence_map({"source": obj, "target": obj, **obj["endomorphism"]})
    else:
        f = ser.decode_sequence_map(obj)
    _check_field(field, f.source.field)
    return f


def _kind(obj: Any) -> str:
    if not isinstance(obj, dict):
        return "unknown"
    if "carrier" in obj:
        return "algebra"
    if "source" in obj and "window" in obj:
        return "sequence-map"
    if "source" in obj:
        return "chain-map"
    if "levels" in obj:
        return "sequence"
    if "degrees" in obj:
        return "complex"
    if "components" in obj:
        return "graded"
    return "unknown"


# table rendering


def _clip(text: str, width: int) -> str:
    return "\n".join(line if len(line) <= width else line[: width - 1] + "…" for line in text.splitlines()) + "\n"


def _dims(d: dict) -> str:
    return " ".join(f"{k}:{v}" for k, v in sorted(d.items())) or "0"


def _complex_row(c: ChainComplex) -> str:
    return f"dims {_dims(c.dims)}  betti {_dims(betti(c))}"


def _sequence_table(x: Sequence) -> str:
    lines = [f"window {x.N}..{x.M}"]
    for n in x.indices():
        lines.append(f"  X({n}): {_complex_row(x.at(n))}")
    return "\n".join(lines) + "\n"


def _graded_table(g: GradedObject) -> str:
    if g.is_zero:
        return "zero graded object\n"
    return "".join(f"  gr {n}: {_complex_row(g.at(n))}\n" for n in g.support)


def _algebra_table(a: FilteredAlgebra) -> str:
    ok = validate_algebra(a)
    return _sequence_table(a.carrier) + f"valid: {'yes' if ok else 'no'}\n"


def _bool_table(rows: list[tuple[str, bool]]) -> str:
    return "".join(f"{k}: {'yes' if v else 'no'}\n" for k, v in rows)


# verbs


def _cmd_gr(args, stdin):
    g = gr(_as_sequence(_load(args.input, stdin), args.field))
    return ser.encode_graded(g), lambda: _graded_table(g)


def _cmd_complete(args, stdin):
    x = _as_sequence(_load(args.input, stdin), args.field)
    xc, _ = completion(x)
    return ser.encode_sequence(xc), lambda: _sequence_table(xc)


def _cmd_is_complete(args, stdin):
    ok = is_complete(_as_sequence(_load(args.input, stdin), args.field))
    return {"complete": ok}, lambda: _bool_table([("complete", ok)])


def _cmd_geq(args, stdin):
    f = _as_map(_load(args.input, stdin), args.field)
    geq, lw = is_graded_equivalence(f), levelwise_quasi_iso(f)
    return (
        {"graded_equivalence": geq, "levelwise_quasi_iso": lw},
        lambda: _bool_table([("graded equivalence", geq), ("levelwise quasi-isomorphism", lw)]),
    )


def _cmd_tensor(args, stdin):
    x = _as_sequence(_load(args.left, stdin), args.field)
    y = _as_sequence(_load(args.right, stdin), args.field)
    t = completed_tensor(x, y)
    return ser.encode_sequence(t), lambda: _sequence_table(t)


def _cmd_hom(args, stdin):
    x = _as_sequence(_load(args.left, stdin), args.field)
    y = _as_sequence(_load(args.right, stdin), args.field)
    h = internal_hom_fil(x, y)
    return ser.encode_sequence(h), lambda: _sequence_table(h)


def _cmd_dual(args, stdin):
    x = _as_sequence(_load(args.input, stdin), args.field)
    dual = sequence_reflector(x, ChainComplex.unit(x.field), "unit-step")
    return ser.encode_sequence(dual), lambda: _sequence_table(dual) + _bool_table(
        [("dualizable", is_dualizable_filtered(x))]
    )


def _cmd_ss(args, stdin):
    x = _as_sequence(_load(args.input, stdin), args.field)
    ps = pages(x, args.max_page)
    return ser.encode_pages(ps), lambda: "\n".join(page_table(p) for p in ps)


def _cmd_abutment(args, stdin):
    x = _as_sequence(_load(args.input, stdin), args.field)
    g, ok = abutment(x)
    obj = {"graded": ser.encode_graded(g), "agrees_with_stable_page": ok}

    def table():
        lines = [f"  F_{p}/F_{p - 1}: {_dims(c.dims)}" for p, c in sorted(g.comps.items())]
        return "\n".join(lines + [f"agrees with E_{x.M - x.N + 1}: {'yes' if ok else 'no'}"]) + "\n"

    return obj, table


def _cmd_algebra_gr(args, stdin):
    a = ser.decode_algebra(_load(args.input, stdin))
    _check_field(args.field, a.carrier.field)
    g = gr_algebra(a)
    return ser.encode_graded_algebra(g), lambda: _graded_table(g.carrier)


def _cmd_validate(args, stdin):
    obj = _load(args.input, stdin)
    kind = _kind(obj)
    decoders: dict[str, Callable] = {
        "complex": ser.decode_complex,
        "chain-map": ser.decode_chain_map,
        "sequence": ser.decode_sequence,
        "sequence-map": ser.decode_sequence_map,
        "graded": ser.decode_graded,
        "algebra": ser.decode_algebra,
    }
    if kind not in decoders:
        raise FiltraError("unrecognized JSON value: expected a complex, map, sequence, graded object or algebra")
    value = decoders[kind](obj)
    if kind == "algebra":
        defects = algebra_defects(value)
        if defects:
            raise FiltraError("algebra axioms fail: " + "; ".join(defects[:5]))
    return {"valid": True, "kind": kind}, lambda: f"valid {kind}\n"


def _cmd_example(args, stdin):
    field = args.field or Field("rational")
    name = args.name
    if name != "postnikov" and args.input is not None:
        raise _Usage(f"example {name} takes no input file")
    if name == "t-adic":
        x = t_adic_sequence(args.d or 2, field)
        f = t_adic_endomorphism(x)
        obj = ser.encode_sequence(x)
        obj["endomorphism"] = {"components": ser.encode_sequence_map(f)["components"]}
        return obj, lambda: _sequence_table(x)
    if name == "diff-ops":
        a = diff_ops_example(args.d or 2, field)
        return ser.encode_algebra(a), lambda: _algebra_table(a)
    if name == "postnikov":
        if args.input is None:
            raise _Usage("example postnikov needs a complex file")
        c = ser.decode_complex(_load(args.input, stdin))
        _check_field(args.field, c.field)
        x = postnikov_example(c)
        return ser.encode_sequence(x), lambda: _sequence_table(x)
    rng = random.Random(args.seed)
    x = random_monic_sequence(rng, field, max_dim=3, max_window=4)
    return ser.encode_sequence(x), lambda: _sequence_table(x)


COMMANDS = {
    "gr": _cmd_gr,
    "complete": _cmd_complete,
    "is-complete": _cmd_is_complete,
    "geq": _cmd_geq,
    "tensor": _cmd_tensor,
    "hom": _cmd_hom,
    "dual": _cmd_dual,
    "ss": _cmd_ss,
    "abutment": _cmd_abutment,
    "algebra-gr": _cmd_algebra_gr,
    "validate": _cmd_validate,
    "example": _cmd_example,
}


def run(argv: list[str], stdin=None, stdout=None, stderr=None, width: int = TABLE_WIDTH) -> int:
    """Run one command and return its exit code."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        obj, table = COMMANDS[args.verb](args, stdin)
        fmt = args.format or ("json" if args.verb in OBJECT_VERBS else "table")
        stdout.write(ser.dumps(obj) if fmt == "json" else _clip(table(), width))
        return 0
    except _Usage as exc:
        stderr.write(f"filtra: usage error: {exc}\n")
        return 2
    except FiltraError as exc:
        stderr.write(f"filtra: {type(exc).__name__}: {exc}\n")
        return 1
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        stderr.write(f"filtra: cannot read input: {exc}\n")
        return 1
    except (KeyError, TypeError, ValueError, AttributeError, IndexError) as exc:
        stderr.write(f"filtra: malformed input: {type(exc).__name__}: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))
