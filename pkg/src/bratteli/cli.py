"""Command-line surface: batch inspection of diagrams and their invariants.

Exit codes: 0 success, 1 domain error (invalid input semantics, failed
preconditions, failed validation), 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .diagram import BratteliDiagram, OrderedDiagram, telescope
from .dimension import Sign, gamma_intertwine_check, interpolate, k0_of
from .equivalence import (
    apply_finite_change,
    change_stationary_top,
    first_return_check,
    induce_on_top,
)
from .serialize import (
    Diagram,
    ParseError,
    export_dot,
    format_element,
    parse_diagram,
    parse_element,
    parse_finite_change,
    serialize_diagram,
    serialize_kr,
    serialize_substitution,
    _load_json,
)
from .stationary import (
    StationaryOrderedDiagram,
    properly_ordered,
    substitution_of,
    symbol_split,
)
from .towers import nested_from_diagram
from .vershik import orbit_sequence

SIGN_LABEL = {
    Sign.POSITIVE: "POS",
    Sign.NEGATIVE: "NEG",
    Sign.ZERO: "ZERO",
    Sign.UNDETERMINED: "UNDET",
}


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _load(args) -> Diagram:
    return parse_diagram(_read_input(args.diagram))


def _explicit(args, default_depth: int = 6) -> OrderedDiagram | BratteliDiagram:
    d = _load(args)
    if isinstance(d, StationaryOrderedDiagram):
        depth = getattr(args, "depth", None) or default_depth
        return d.truncate(depth)
    return d


def _parse_cuts(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ParseError(f"malformed cut list {text!r}") from None


def _parse_keep(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ParseError(f"malformed edge id list {text!r}") from None


def cmd_validate(args) -> int:
    d = _load(args)
    if isinstance(d, StationaryOrderedDiagram):
        print("valid")  # stationary descriptors are validated while parsing
        return 0
    report = d.validate()
    if not report:
        print("valid")
        return 0
    for v in report:
        print(f"{v.clause} at {v.where}: {v.message}")
    return 1


def cmd_matrix(args) -> int:
    d = _load(args)
    if isinstance(d, StationaryOrderedDiagram):
        d = d.truncate(max(args.level, 1))
    m = d.incidence(args.level)
    for row in m:
        print(" ".join(str(x) for x in row))
    return 0


def cmd_telescope(args) -> int:
    d = _explicit(args)
    print(serialize_diagram(telescope(d, _parse_cuts(args.cuts))))
    return 0


def cmd_proper(args) -> int:
    d = _load(args)
    if not isinstance(d, StationaryOrderedDiagram):
        raise ValueError("proper ordering is decided on stationary descriptors")
    verdict = properly_ordered(d)
    print("YES" if verdict else f"NO: {verdict.reason}")
    return 0


def cmd_substitution(args) -> int:
    d = _load(args)
    if not isinstance(d, StationaryOrderedDiagram):
        raise ValueError("substitutions are read off stationary descriptors")
    print(serialize_substitution(substitution_of(d)))
    return 0


def cmd_orbit(args) -> int:
    d = _load(args)
    if not isinstance(d, StationaryOrderedDiagram):
        raise ValueError("orbit generation needs a stationary descriptor")
    symbols = orbit_sequence(d, args.length)
    if all(len(s) == 1 for s in d.alphabet):
        print("".join(symbols))
    else:
        print("".join(f"{len(s)}:{s}" for s in symbols))
    return 0


def cmd_towers(args) -> int:
    d = _explicit(args, default_depth=args.depth or 4)
    depth = args.depth or min(d.depth, 4)
    print(serialize_kr(nested_from_diagram(d, depth)))
    return 0


def cmd_k0(args) -> int:
    d = _load(args)
    p = k0_of(d)
    if p.is_stationary:
        print(f"stationary presentation, {p.dim(1)} generators per stage")
        print("top: " + " ".join(str(r[0]) for r in p.matrix(1)))
        for row in p.stationary_matrix:
            print(" ".join(str(x) for x in row))
    else:
        print("stage dimensions: " + " ".join(str(x) for x in p.dims))
        for n in range(1, len(p.dims)):
            print(f"matrix {n}:")
            for row in p.matrix(n):
                print("  " + " ".join(str(x) for x in row))
    return 0


def cmd_positive(args) -> int:
    p = k0_of(_load(args))
    g = parse_element(args.element)
    print(SIGN_LABEL[p.sign_of(g, args.horizon)])
    return 0


def cmd_equal(args) -> int:
    p = k0_of(_load(args))
    a, b = parse_element(args.left), parse_element(args.right)
    print("EQUAL" if p.equal(a, b) else "DIFFERENT")
    return 0


def cmd_interpolate(args) -> int:
    p = k0_of(_load(args))
    c = interpolate(
        p,
        parse_element(args.a1),
        parse_element(args.a2),
        parse_element(args.b1),
        parse_element(args.b2),
        horizon=args.horizon,
    )
    print("NONE" if c is None else format_element(c))
    return 0


def cmd_gamma_check(args) -> int:
    d = _explicit(args, default_depth=args.depth + 1 if args.depth else 5)
    depth = args.depth or min(d.depth, 4)
    seq = nested_from_diagram(d, depth)
    ok = True
    for n in range(depth):
        good = gamma_intertwine_check(seq, n)
        ok = ok and good
        print(f"levels {n},{n + 1}: {'OK' if good else 'FAIL'}")
    return 0 if ok else 1


def cmd_split_top(args) -> int:
    d = _load(args)
    if not isinstance(d, StationaryOrderedDiagram):
        raise ValueError("symbol splitting needs a stationary descriptor")
    split, witness = symbol_split(d)
    print(serialize_diagram(split))
    if args.witness_out:
        Path(args.witness_out).write_text(serialize_diagram(witness) + "\n")
    return 0


def cmd_induce(args) -> int:
    d = _explicit(args)
    print(serialize_diagram(induce_on_top(d, _parse_keep(args.keep))))
    return 0


def cmd_change(args) -> int:
    d = _load(args)
    spec_text = _read_input(args.spec)
    spec = _load_json(spec_text)
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ParseError("change spec needs a 'kind' field")
    if spec["kind"] == "top":
        if not isinstance(d, StationaryOrderedDiagram):
            raise ValueError("a 'top' change applies to stationary descriptors")
        print(serialize_diagram(change_stationary_top(d, tuple(spec["top"]))))
        return 0
    if spec["kind"] == "prefix":
        if isinstance(d, StationaryOrderedDiagram):
            d = d.truncate(getattr(args, "depth", None) or 6)
        ch = parse_finite_change(spec_text, d.label(0, 0))
        print(serialize_diagram(apply_finite_change(d, ch)))
        return 0
    raise ParseError(f"unknown change kind {spec['kind']!r}")


def cmd_first_return(args) -> int:
    d = _load(args)
    if not isinstance(d, StationaryOrderedDiagram):
        raise ValueError("first-return checks need a stationary descriptor")
    ok = first_return_check(d, _parse_keep(args.keep), args.length)
    print("TRUE" if ok else "FALSE")
    return 0


def cmd_dot(args) -> int:
    d = _load(args)
    sys.stdout.write(export_dot(d, args.depth))
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="bratteli",
        description="Inspect graded diagrams, their successor dynamics, and their ordered groups.",
    )
    sub = top.add_subparsers(dest="command")

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("diagram", help="diagram file (interchange JSON) or - for stdin")
        p.set_defaults(func=fn)
        return p

    add("validate", cmd_validate, "report defining-clause violations")
    p = add("matrix", cmd_matrix, "print one incidence matrix")
    p.add_argument("--level", type=int, required=True)
    p = add("telescope", cmd_telescope, "telescope to a cut schedule")
    p.add_argument("--cuts", required=True, help="comma-separated cuts starting at 0")
    p.add_argument("--depth", type=int, help="truncation depth for stationary input")
    add("proper", cmd_proper, "decide proper ordering of a stationary descriptor")
    add("substitution", cmd_substitution, "read the substitution off a descriptor")
    p = add("orbit", cmd_orbit, "emit the minimal-path orbit reading")
    p.add_argument("--length", type=int, required=True)
    p = add("towers", cmd_towers, "tower heights and traversal words")
    p.add_argument("--depth", type=int)
    add("k0", cmd_k0, "print the stage-group presentation")
    p = add("positive", cmd_positive, "order verdict for an element (POS/NEG/ZERO/UNDET)")
    p.add_argument("--element", required=True, help="stage:[v1,v2,...]")
    p.add_argument("--horizon", type=int)
    p = add("equal", cmd_equal, "decide equality of two elements")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p = add("interpolate", cmd_interpolate, "find c with a1,a2 <= c <= b1,b2")
    for name in ("a1", "a2", "b1", "b2"):
        p.add_argument(f"--{name}", required=True)
    p.add_argument("--horizon", type=int, default=8)
    p = add("gamma-check", cmd_gamma_check, "tower-sum/lift intertwining check")
    p.add_argument("--depth", type=int)
    p = add("split-top", cmd_split_top, "split symbols to remove multiple top edges")
    p.add_argument("--witness-out", help="write the interleaving witness here")
    p = add("induce", cmd_induce, "induce on a union of top-edge cylinders")
    p.add_argument("--keep", required=True, help="comma-separated top edge ids")
    p.add_argument("--depth", type=int, help="truncation depth for stationary input")
    p = add("change", cmd_change, "apply a finite change from a spec file")
    p.add_argument("--spec", required=True)
    p.add_argument("--depth", type=int)
    p = add("first-return", cmd_first_return, "induced orbit vs first-return reading")
    p.add_argument("--keep", required=True)
    p.add_argument("--length", type=int, default=1000)
    p = add("dot", cmd_dot, "emit a layered DOT rendering")
    p.add_argument("--depth", type=int)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
