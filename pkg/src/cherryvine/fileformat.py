"""Line-oriented structure and assignment files, and DOT export.

Structure files::

    # an order-3 cherry-tree
    kind cherry-tree
    order 3
    vertices 6
    cluster a: 1 2 3
    cluster b: 2 3 4
    link a b

``kind junction-tree`` drops the ``order`` line. ``kind vine`` files hold
``level <l>`` blocks: level 1 lists ``edge <i> <j>`` lines, higher levels
list ``cluster``/``link`` lines whose names are local to the block.

Assignment files hold one ``pair <a> <b> | <S> : <family> [param]`` line per
vine label, ``S`` a comma list (empty for base-tree edges).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from .exceptions import CherryTreeError, CherryVineError, StructureError
from .structures import CherryTree, JunctionTree, VertexSet, check_rip
from .density import PairCopulaSpec
from .vine import BaseTree, EdgeLabel, TruncatedRVine, validate_sequence

__all__ = [
    "ParseError",
    "SemanticError",
    "InvariantError",
    "parse",
    "format_structure",
    "emit_dot",
    "parse_assignment",
    "format_assignment",
]

Structure = Union[JunctionTree, CherryTree, TruncatedRVine]

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.-]*$")
_KINDS = ("junction-tree", "cherry-tree", "vine")


class ParseError(CherryVineError):
    """Text does not follow the grammar."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line, self.col, self.reason = line, col, message
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)


class SemanticError(ParseError):
    """Well-formed text describing an inconsistent structure."""


class InvariantError(SemanticError):
    """The described structure violates a junction-tree, cherry-tree or vine invariant."""


@dataclass
class _Token:
    text: str
    col: int


def _tokens(line: str) -> list[_Token]:
    return [_Token(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _int(tok: _Token, lineno: int, what: str = "integer") -> int:
    if not re.fullmatch(r"[0-9]+", tok.text):
        raise ParseError(f"expected {what}, got {tok.text!r}", lineno, tok.col)
    return int(tok.text)


@dataclass
class _Block:
    line: int
    clusters: dict[str, tuple[VertexSet, int]] = field(default_factory=dict)
    order: list[str] = field(default_factory=list)
    links: list[tuple[str, str, int, int]] = field(default_factory=list)
    edges: list[tuple[int, int, int]] = field(default_factory=list)


def parse(text: str) -> Structure:
    """Parse a structure file into a :class:`JunctionTree`, :class:`CherryTree`
    or :class:`TruncatedRVine`, enforcing that type's invariants."""
    kind = order = d = None
    kind_line = 0
    blocks: dict[int, _Block] = {}
    flat = _Block(0)
    current: _Block | None = None
    seen_header: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        head = toks[0]
        word = head.text
        if kind is None and word != "kind":
            raise ParseError("file must start with a 'kind' line", lineno, head.col)
        if word in ("kind", "order", "vertices"):
            if len(toks) != 2:
                raise ParseError(f"'{word}' takes exactly one argument", lineno, head.col)
            if word in seen_header:
                raise SemanticError(f"repeated '{word}' line (first on line {seen_header[word]})", lineno, head.col)
            seen_header[word] = lineno
            if word == "kind":
                if toks[1].text not in _KINDS:
                    raise ParseError(f"unknown kind {toks[1].text!r}", lineno, toks[1].col)
                kind, kind_line = toks[1].text, lineno
            elif word == "order":
                if kind != "cherry-tree":
                    raise SemanticError("'order' is only valid for cherry-tree files", lineno, head.col)
                order = _int(toks[1], lineno, "order")
            else:
                d = _int(toks[1], lineno, "vertex count")
            continue
        if word == "level":
            if kind != "vine":
                raise SemanticError("'level' is only valid in vine files", lineno, head.col)
            if len(toks) != 2:
                raise ParseError("'level' takes exactly one argument", lineno, head.col)
            lvl = _int(toks[1], lineno, "level number")
            if lvl != len(blocks) + 1:
                raise SemanticError(f"expected level {len(blocks) + 1}, got {lvl}", lineno, toks[1].col)
            current = blocks[lvl] = _Block(lineno)
            continue
        target = flat
        if kind == "vine":
            if current is None:
                raise SemanticError(f"'{word}' outside a level block", lineno, head.col)
            target = current
        in_level1 = kind == "vine" and len(blocks) == 1
        if word == "edge":
            if not in_level1:
                raise SemanticError("'edge' lines belong to level 1 of a vine", lineno, head.col)
            if len(toks) != 3:
                raise ParseError("'edge' takes two vertex ids", lineno, head.col)
            target.edges.append((_int(toks[1], lineno, "vertex id"), _int(toks[2], lineno, "vertex id"), lineno))
        elif word == "cluster":
            if in_level1:
                raise SemanticError("level 1 holds 'edge' lines, not clusters", lineno, head.col)
            m = re.match(r"\s*cluster\s+([^:\s]+)\s*:(.*)$", line)
            if not m:
                raise ParseError("expected 'cluster <name>: <id> <id> ...'", lineno, head.col)
            name = m.group(1)
            name_col = line.index(name, head.col + 6) + 1
            if not _NAME.match(name):
                raise ParseError(f"bad cluster name {name!r}", lineno, name_col)
            ids = []
            offset = m.start(2)
            for t in _tokens(m.group(2)):
                ids.append(_int(_Token(t.text, t.col + offset), lineno, "vertex id"))
            if not ids:
                raise ParseError(f"cluster {name!r} lists no vertices", lineno, name_col)
            if len(set(ids)) != len(ids):
                raise SemanticError(f"cluster {name!r} repeats a vertex", lineno, name_col)
            if name in target.clusters:
                first = target.clusters[name][1]
                raise SemanticError(f"duplicate cluster name {name!r} (first on line {first})", lineno, name_col)
            target.clusters[name] = (VertexSet(ids), lineno)
            target.order.append(name)
        elif word == "link":
            if in_level1:
                raise SemanticError("level 1 holds 'edge' lines, not links", lineno, head.col)
            if len(toks) != 3:
                raise ParseError("'link' takes two cluster names", lineno, head.col)
            target.links.append((toks[1].text, toks[2].text, lineno, toks[1].col))
        else:
            raise ParseError(f"unknown directive {word!r}", lineno, head.col)

    if kind is None:
        raise ParseError("empty file: missing 'kind' line", 1, 1)
    if d is None:
        raise SemanticError("missing 'vertices' line", kind_line, 1)
    if kind == "cherry-tree" and order is None:
        raise SemanticError("cherry-tree files need an 'order' line", kind_line, 1)

    V = VertexSet(range(1, d + 1))
    if kind == "vine":
        return _build_vine(blocks, V)
    jt = _build_tree(flat, V)
    if kind == "junction-tree":
        report = check_rip(jt)
        if not report:
            raise InvariantError(report.message, flat.line or kind_line, 1)
        return jt
    try:
        return CherryTree(jt, order)
    except CherryTreeError as exc:
        raise InvariantError(str(exc), kind_line, 1) from exc


def _check_ids(vs: VertexSet, V: VertexSet, line: int) -> None:
    bad = [i for i in vs if i not in V]
    if bad:
        raise SemanticError(f"vertex {bad[0]} outside 1..{len(V)}", line, 1)


def _build_tree(block: _Block, V: VertexSet) -> JunctionTree:
    if not block.clusters:
        raise SemanticError("no clusters", block.line or 1, 1)
    index = {name: i for i, name in enumerate(block.order)}
    for name in block.order:
        vs, line = block.clusters[name]
        _check_ids(vs, V, line)
    edges = []
    for a, b, line, col in block.links:
        for n in (a, b):
            if n not in index:
                raise SemanticError(f"link to unknown cluster {n!r}", line, col)
        if a == b:
            raise SemanticError(f"cluster {a!r} linked to itself", line, col)
        edges.append((index[a], index[b]))
    clusters = tuple(block.clusters[n][0] for n in block.order)
    jt = JunctionTree(clusters, tuple(edges), V)
    try:
        check_rip(jt)
    except StructureError as exc:
        raise SemanticError(str(exc), block.line or 1, 1) from exc
    return jt


def _build_vine(blocks: dict[int, _Block], V: VertexSet) -> TruncatedRVine:
    if 1 not in blocks:
        raise SemanticError("vine files need a 'level 1' block", 1, 1)
    for a, b, line in blocks[1].edges:
        _check_ids(VertexSet([a, b]), V, line)
        if a == b:
            raise SemanticError(f"edge ({a}, {b}) is a loop", line, 1)
    base = BaseTree(V, tuple((a, b) for a, b, _ in blocks[1].edges))
    levels = []
    for lvl in range(2, len(blocks) + 1):
        block = blocks[lvl]
        jt = _build_tree(block, V)
        try:
            levels.append(CherryTree(jt, lvl))
        except CherryTreeError as exc:
            raise InvariantError(f"level {lvl}: {exc}", block.line, 1) from exc
    vine = TruncatedRVine(base, tuple(levels))
    report = validate_sequence(vine)
    if not report:
        line = blocks[report.level].line if report.level in blocks else 1
        raise InvariantError(f"level {report.level}: {report.message}", line, 1)
    return vine


def _require_standard_vertices(vs: VertexSet) -> int:
    d = len(vs)
    if vs != VertexSet(range(1, d + 1)):
        raise ValueError(f"file format needs vertices 1..d, got {vs!r}")
    return d


def _tree_lines(jt: JunctionTree) -> list[str]:
    lines = [f"cluster c{i + 1}: {' '.join(map(str, c))}" for i, c in enumerate(jt.clusters)]
    lines += [f"link c{i + 1} c{j + 1}" for i, j in jt.edges]
    return lines


def format_structure(s: Structure) -> str:
    """Canonical text of a structure; ``parse`` inverts it."""
    if isinstance(s, TruncatedRVine):
        lines = ["kind vine", f"vertices {_require_standard_vertices(s.vertices)}", "level 1"]
        lines += [f"edge {a} {b}" for a, b in s.base.edges]
        for offset, tree in enumerate(s.levels):
            lines.append(f"level {offset + 2}")
            lines += _tree_lines(tree.base)
    elif isinstance(s, CherryTree):
        lines = ["kind cherry-tree", f"order {s.order}", f"vertices {_require_standard_vertices(s.vertices)}"]
        lines += _tree_lines(s.base)
    elif isinstance(s, JunctionTree):
        lines = ["kind junction-tree", f"vertices {_require_standard_vertices(s.vertices)}"]
        lines += _tree_lines(s)
    else:
        raise TypeError(f"cannot format {type(s).__name__}")
    return "\n".join(lines) + "\n"


def _q(s: str) -> str:
    return '"' + s.replace('"', r"\"") + '"'


def _dot_tree(jt: JunctionTree, indent: str, prefix: str = "") -> list[str]:
    out = []
    for c in jt.clusters:
        name = prefix + c.label()
        out.append(f"{indent}{_q(name)}" + (f" [label={_q(c.label())}];" if prefix else ";"))
    for (i, j), sep in zip(jt.edges, jt.separators):
        a, b = prefix + jt.clusters[i].label(), prefix + jt.clusters[j].label()
        out.append(f"{indent}{_q(a)} -- {_q(b)} [label={_q(sep.label())}];")
    return out


def emit_dot(s: Structure) -> str:
    """DOT text: clusters as nodes, separators as edge labels, one subgraph per vine tree."""
    if isinstance(s, TruncatedRVine):
        lines = ["graph vine {"]
        lines += ["  subgraph cluster_T1 {", '    label="T1";']
        lines += [f'    {_q(f"T1:{x}")} [label={_q(str(x))}];' for x in s.vertices]
        lines += [f'    {_q(f"T1:{a}")} -- {_q(f"T1:{b}")};' for a, b in s.base.edges]
        lines.append("  }")
        for offset, tree in enumerate(s.levels):
            name = f"T{offset + 2}"
            lines += [f"  subgraph cluster_{name} {{", f"    label={_q(name)};"]
            lines += _dot_tree(tree.base, "    ", prefix=f"{name}:")
            lines.append("  }")
        lines.append("}")
    else:
        jt = s.base if isinstance(s, CherryTree) else s
        lines = ["graph cherrytree {" if isinstance(s, CherryTree) else "graph junctiontree {"]
        lines += _dot_tree(jt, "  ")
        lines.append("}")
    return "\n".join(lines) + "\n"


_PAIR = re.compile(
    r"^\s*pair\s+(\d+)\s+(\d+)\s*\|\s*([\d,\s]*?)\s*:\s*([A-Za-z]+)(?:\s+(\S+))?\s*$"
)


def parse_assignment(text: str) -> dict[EdgeLabel, PairCopulaSpec]:
    """Parse an assignment file into ``{label: spec}``."""
    out: dict[EdgeLabel, PairCopulaSpec] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _PAIR.match(line)
        if not m:
            raise ParseError("expected 'pair <a> <b> | <S> : <family> [param]'", lineno, 1)
        a, b = int(m.group(1)), int(m.group(2))
        cond_text = m.group(3).strip()
        cond = [int(x) for x in re.split(r"[,\s]+", cond_text) if x] if cond_text else []
        param = None
        if m.group(5) is not None:
            try:
                param = float(m.group(5))
            except ValueError:
                raise ParseError(f"bad parameter {m.group(5)!r}", lineno, m.start(5) + 1) from None
        try:
            label = EdgeLabel.of(a, b, cond)
            spec = PairCopulaSpec(m.group(4), param)
        except ValueError as exc:
            raise SemanticError(str(exc), lineno, 1) from exc
        if label in out:
            raise SemanticError(f"label {label} assigned twice", lineno, 1)
        out[label] = spec
    return out


def format_assignment(assignment: dict[EdgeLabel, PairCopulaSpec]) -> str:
    lines = []
    for label in sorted(assignment):
        a, b = label.conditioned
        lines.append(f"pair {a} {b} | {label.conditioning.label()} : {assignment[label]}")
    return "\n".join(lines) + "\n"
