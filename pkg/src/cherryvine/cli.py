"""``cherryvine`` command-line tool.

Exit codes: 0 success, 1 domain-negative result (invalid structure under
``validate``, negative ``check``, failed ``backward``), 2 usage or syntax
error, 3 semantic error in an input file.
"""
from __future__ import annotations

import argparse
import functools
import math
import sys
import time
from pathlib import Path
from typing import Callable, Sequence, TextIO

import numpy as np

from .density import unit_point, vine_log_density
from .exceptions import BackwardFailure, CherryVineError, NotTruncatedRVineError
from .fileformat import (
    InvariantError,
    ParseError,
    SemanticError,
    emit_dot,
    format_structure,
    parse,
    parse_assignment,
)
from .fixtures import example22, fig1, fig3, fig5, fig7a
from .structures import CherryTree, separator_table
from .transforms import backward, embed, is_truncated_rvine, two_separator_check
from .vine import TruncatedRVine, edge_labels, validate_sequence

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_SEMANTIC = 0, 1, 2, 3


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Fail(EXIT_USAGE, f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Fail(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from None


def _load(path: str, *, invariant_code: int = EXIT_SEMANTIC):
    try:
        return parse(_read(path))
    except InvariantError as exc:
        raise _Fail(invariant_code, f"{path}:{exc}") from None
    except SemanticError as exc:
        raise _Fail(EXIT_SEMANTIC, f"{path}:{exc}") from None
    except ParseError as exc:
        raise _Fail(EXIT_USAGE, f"{path}:{exc}") from None


def _load_cherry(path: str) -> CherryTree:
    s = _load(path)
    if not isinstance(s, CherryTree):
        raise _Fail(EXIT_USAGE, f"{path}: expected a cherry-tree file, got {_kind(s)}")
    return s


def _kind(s) -> str:
    if isinstance(s, TruncatedRVine):
        return f"vine on {s.d} vertices, truncation level {s.truncation}"
    if isinstance(s, CherryTree):
        return f"cherry-tree of order {s.order} on {len(s.vertices)} vertices, {len(s.clusters)} clusters"
    return f"junction-tree on {len(s.vertices)} vertices, {len(s.clusters)} clusters"


def _witness_lines(w) -> list[str]:
    seps = " ".join(repr(s) for s in w.offender_separators)
    return [f"offender {w.offender!r} separators {seps}"]


def _check_text(ct: CherryTree, out: TextIO, err: TextIO) -> int:
    w = is_truncated_rvine(ct)
    if w.verdict:
        out.write("truncated R-vine: yes\n")
        if w.separator_tree is not None:
            out.write(f"# separator tree, order {w.separator_tree.order}\n")
            out.write(_plain(w.separator_tree))
        return EXIT_OK
    out.write("truncated R-vine: no\n")
    if w.offender is not None:
        for line in _witness_lines(w):
            err.write(line + "\n")
    else:
        err.write("separators form no cherry-tree; no cluster has three distinct separators\n")
    return EXIT_NEGATIVE


def _plain(ct: CherryTree) -> str:
    lines = [f"cluster {c!r}" for c in ct.clusters]
    lines += [f"link {ct.clusters[i]!r} {ct.clusters[j]!r}" for i, j in ct.edges]
    return "\n".join(lines) + "\n"


def cmd_validate(args, out, err) -> int:
    s = _load(args.file, invariant_code=EXIT_NEGATIVE)
    out.write(f"ok: {_kind(s)}\n")
    return EXIT_OK


def cmd_check(args, out, err) -> int:
    return _check_text(_load_cherry(args.file), out, err)


def cmd_backward(args, out, err) -> int:
    ct = _load_cherry(args.file)
    try:
        vine = backward(ct)
    except NotTruncatedRVineError as exc:
        err.write(f"{exc}\n")
        return EXIT_NEGATIVE
    except BackwardFailure as exc:
        err.write(f"{exc}\n")
        return EXIT_NEGATIVE
    except CherryVineError as exc:
        raise _Fail(EXIT_USAGE, str(exc)) from None
    out.write(format_structure(vine))
    return EXIT_OK


def cmd_embed(args, out, err) -> int:
    ct = _load_cherry(args.file)
    try:
        out.write(format_structure(embed(ct)))
    except CherryVineError as exc:
        raise _Fail(EXIT_USAGE, str(exc)) from None
    return EXIT_OK


def _parse_point(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise _Fail(EXIT_USAGE, f"--point: expected comma-separated reals, got {text!r}") from None


def cmd_density(args, out, err) -> int:
    vine = _load(args.file)
    if not isinstance(vine, TruncatedRVine):
        raise _Fail(EXIT_USAGE, f"{args.file}: expected a vine file, got {_kind(vine)}")
    try:
        assignment = parse_assignment(_read(args.assign))
    except SemanticError as exc:
        raise _Fail(EXIT_SEMANTIC, f"{args.assign}:{exc}") from None
    except ParseError as exc:
        raise _Fail(EXIT_USAGE, f"{args.assign}:{exc}") from None
    point = _parse_point(args.point)
    try:
        u = unit_point(point, vine.d)
    except ValueError as exc:
        raise _Fail(EXIT_USAGE, f"--point: {exc}") from None
    try:
        value = float(vine_log_density(vine, assignment, u))
    except ValueError as exc:
        raise _Fail(EXIT_SEMANTIC, f"{args.assign}: {exc}") from None
    out.write(f"{math.exp(value) if args.linear else value:.12g}\n")
    return EXIT_OK


def cmd_dot(args, out, err) -> int:
    out.write(emit_dot(_load(args.file)))
    return EXIT_OK


def _demo_fig1(out, err):
    ct = fig1()
    out.write(format_structure(ct))
    out.write("# separators\n")
    for sep, nu in separator_table(ct.base):
        out.write(f"# {sep!r} nu={nu}\n")


def _demo_fig3(out, err):
    ct = fig3()
    out.write(format_structure(ct))
    _check_text(ct, out, out)


def _demo_fig4(out, err):
    vine = backward(fig3())
    out.write(format_structure(vine))
    for label in edge_labels(vine):
        out.write(f"# T{label.level}: {label}\n")


def _demo_fig5(out, err):
    ct = fig5()
    out.write(format_structure(ct))
    _check_text(ct, out, out)
    out.write("# embedding\n")
    out.write(format_structure(embed(ct)))


def _demo_fig7(out, err):
    ct = fig7a()
    out.write(format_structure(ct))
    _check_text(ct, out, out)
    up = embed(ct)
    out.write("# embedding\n")
    out.write(format_structure(up))
    _check_text(up, out, out)


def _demo_example22(out, err):
    for label in edge_labels(example22()):
        out.write(f"T{label.level}: {label}\n")


DEMOS: dict[str, Callable[[TextIO, TextIO], None]] = {
    "fig1": _demo_fig1,
    "fig3": _demo_fig3,
    "fig4": _demo_fig4,
    "fig5": _demo_fig5,
    "fig7": _demo_fig7,
    "example22": _demo_example22,
}


def cmd_demo(args, out, err) -> int:
    DEMOS[args.name](out, err)
    return EXIT_OK


def cmd_selfcheck(args, out, err) -> int:
    from .generators import random_cherry_tree, random_vine

    rng = np.random.default_rng(args.seed)
    counts = {"backward": [0, 0], "recognition": [0, 0], "embed": [0, 0]}
    start = time.perf_counter()
    for _ in range(args.trials):
        d = int(rng.integers(4, 11))
        k = int(rng.integers(3, min(5, d - 1) + 1))
        top = random_vine(rng, d, k).top
        try:
            v = backward(top)
            ok = bool(validate_sequence(v)) and v.top.same_structure(top)
        except CherryVineError:
            ok = False
        counts["backward"][ok] += 1

        ct = random_cherry_tree(rng, d, k)
        agree = is_truncated_rvine(ct).verdict == two_separator_check(ct).verdict
        counts["recognition"][agree] += 1
        up = embed(ct)
        counts["embed"][bool(is_truncated_rvine(up).verdict)] += 1
    elapsed = time.perf_counter() - start
    failed = 0
    for name, (bad, good) in counts.items():
        out.write(f"{name}: {good}/{good + bad} passed\n")
        failed += bad
    err.write(f"seed {args.seed}, {args.trials} trials, {elapsed:.2f}s\n")
    return EXIT_OK if failed == 0 else EXIT_NEGATIVE


@functools.lru_cache(maxsize=None)
def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cherryvine", description="Cherry-tree and truncated R-vine structure tool.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, file_help="structure file ('-' for stdin)"):
        sp = sub.add_parser(name, help=help_text)
        if file_help:
            sp.add_argument("file", help=file_help)
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "parse a structure file and check its invariants")
    add("check", cmd_check, "test whether a cherry-tree is a truncated R-vine")
    add("backward", cmd_backward, "print the vine sequence of a truncated R-vine cherry-tree")
    add("embed", cmd_embed, "print the order-(k+1) cherry-tree obtained by joining neighbours")
    sp = add("density", cmd_density, "evaluate a vine copula log density at one point", "vine file")
    sp.add_argument("--assign", required=True, help="pair-copula assignment file")
    sp.add_argument("--point", required=True, help="u1,...,ud in (0,1)")
    sp.add_argument("--linear", action="store_true", help="print the density instead of its log")
    add("dot", cmd_dot, "export Graphviz DOT text")
    sp = add("demo", cmd_demo, "print a worked example", None)
    sp.add_argument("name", choices=sorted(DEMOS))
    sp = add("selfcheck", cmd_selfcheck, "randomized consistency checks", None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=100)
    return p


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out, err)
    except _Fail as exc:
        err.write(f"error: {exc}\n")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
