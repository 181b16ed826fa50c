#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Quiver model

Acyclic bound quivers, the toupie specialisation with its validator, the
bridge between the two, and the line-oriented input grammar:

    field rational | field prime P
    branches T
    lengths L1 ... LT
    relation mono I A B
    relation comb C1 ... CT

Branches are numbered 1..t, positions along branch i run from 0 (the source)
to l_i (the sink). Internal vertices are labelled "i.j", the source "0" and the
sink "inf".
"""

import sys
import logging
from dataclasses import dataclass, field as dataclass_field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .errors import ParseError, PresentationError
from .exact_linalg import FieldSpec, RATIONAL

logger = logging.getLogger(__name__)

SOURCE = "0"
SINK = "inf"

Path = Tuple[str, ...]
RelationTerm = Tuple[Any, Path]
Relation = Tuple[RelationTerm, ...]


# ---------------------------------------------------------------------------
# General bound quivers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Arrow:
    label: str
    source: str
    target: str


@dataclass(frozen=True)
class GeneralBoundQuiver:
    """Acyclic quiver with relations given as combinations of parallel paths."""

    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]
    relations: Tuple[Relation, ...] = ()
    field: FieldSpec = RATIONAL

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise PresentationError("duplicate vertex labels")
        labels = [a.label for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise PresentationError("duplicate arrow labels")
        known = set(self.vertices)
        for arrow in self.arrows:
            if arrow.source not in known or arrow.target not in known:
                raise PresentationError(f"arrow {arrow.label} joins unknown vertices")
        if not nx.is_directed_acyclic_graph(self.graph):
            raise PresentationError("quiver has an oriented cycle")
        for index, relation in enumerate(self.relations, 1):
            if not relation:
                raise PresentationError(f"relation {index} is empty")
            ends = set()
            for _, path in relation:
                if len(path) < 2:
                    raise PresentationError(f"relation {index} contains a path of length {len(path)}")
                ends.add(self.path_ends(path))
            if len(ends) != 1:
                raise PresentationError(f"relation {index} combines non-parallel paths")

    @cached_property
    def arrow_map(self) -> Dict[str, Arrow]:
        return {a.label: a for a in self.arrows}

    @cached_property
    def graph(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for arrow in self.arrows:
            graph.add_edge(arrow.source, arrow.target, key=arrow.label)
        return graph

    @cached_property
    def topological_order(self) -> Tuple[str, ...]:
        return tuple(nx.lexicographical_topological_sort(
            self.graph, key=lambda v: self.vertices.index(v)))

    def path_ends(self, path: Path) -> Tuple[str, str]:
        """Source and target of a non-trivial path, checking it is composable."""
        try:
            arrows = [self.arrow_map[label] for label in path]
        except KeyError as e:
            raise PresentationError(f"unknown arrow {e.args[0]}")
        for first, second in zip(arrows, arrows[1:]):
            if first.target != second.source:
                raise PresentationError(f"arrows {first.label} and {second.label} do not compose")
        return arrows[0].source, arrows[-1].target

    def paths(self, x: str, y: str) -> List[Path]:
        """All paths from x to y in depth-first, arrow-declaration order."""
        if x not in self.graph or y not in self.graph:
            raise PresentationError(f"unknown vertex: {x if x not in self.graph else y}")
        if x == y:
            return [()]
        return [tuple(key for _, _, key in edges)
                for edges in nx.all_simple_edge_paths(self.graph, x, y)]

    def out_arrows(self, x: str) -> List[Arrow]:
        return [a for a in self.arrows if a.source == x]

    def in_arrows(self, x: str) -> List[Arrow]:
        return [a for a in self.arrows if a.target == x]

    def opposite(self) -> "GeneralBoundQuiver":
        """Quiver with every arrow and relation path reversed."""
        return GeneralBoundQuiver(
            vertices=self.vertices,
            arrows=tuple(Arrow(a.label, a.target, a.source) for a in self.arrows),
            relations=tuple(tuple((c, tuple(reversed(p))) for c, p in rel) for rel in self.relations),
            field=self.field,
        )


def serialize_general(quiver: GeneralBoundQuiver) -> str:
    """Text form of a general bound quiver (used for truncation output)."""
    lines = [f"field {quiver.field.describe()}", "vertices " + " ".join(quiver.vertices)]
    for arrow in quiver.arrows:
        lines.append(f"arrow {arrow.label} {arrow.source} {arrow.target}")
    for relation in quiver.relations:
        terms = " ".join(f"{quiver.field.format_scalar(c)} [{' '.join(p)}]" for c, p in relation)
        lines.append(f"relation {terms}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Toupie quivers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ToupieQuiver:
    lengths: Tuple[int, ...]

    @property
    def t(self) -> int:
        return len(self.lengths)

    def vertex_at(self, branch: int, position: int) -> str:
        if position == 0:
            return SOURCE
        if position == self.lengths[branch - 1]:
            return SINK
        return f"{branch}.{position}"

    @property
    def vertices(self) -> Tuple[str, ...]:
        internal = [f"{i}.{j}" for i, length in enumerate(self.lengths, 1) for j in range(1, length)]
        return (SOURCE, *internal, SINK)

    def arrow_label(self, branch: int, step: int) -> str:
        """Label of the step-th arrow (1-based) of a branch."""
        return f"a{branch}_{step}"

    def locate(self, vertex: str) -> Optional[Tuple[int, int]]:
        """(branch, position) of an internal vertex; None for the source and sink."""
        if vertex in (SOURCE, SINK):
            return None
        try:
            branch_text, position_text = vertex.split('.')
            branch, position = int(branch_text), int(position_text)
        except ValueError:
            raise PresentationError(f"unknown vertex: {vertex}")
        if not (1 <= branch <= self.t and 1 <= position < self.lengths[branch - 1]):
            raise PresentationError(f"unknown vertex: {vertex}")
        return branch, position


@dataclass(frozen=True)
class PathRef:
    """Subpath (start, end] of a branch, or the trivial path at a vertex."""

    branch: int = 0
    start: int = 0
    end: int = 0
    vertex: Optional[str] = None

    @classmethod
    def trivial(cls, vertex: str) -> "PathRef":
        return cls(vertex=vertex)

    @property
    def is_trivial(self) -> bool:
        return self.vertex is not None

    @property
    def length(self) -> int:
        return 0 if self.is_trivial else self.end - self.start


@dataclass(frozen=True)
class Monomial:
    branch: int
    start: int
    end: int

    @property
    def path(self) -> PathRef:
        return PathRef(self.branch, self.start, self.end)


@dataclass(frozen=True)
class Combination:
    coefficients: Tuple[Any, ...]

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coefficients, 1) if c != 0)


ToupieRelation = Union[Monomial, Combination]


@dataclass(frozen=True)
class ToupiePresentation:
    quiver: ToupieQuiver
    relations: Tuple[ToupieRelation, ...] = ()
    field: FieldSpec = RATIONAL

    @property
    def t(self) -> int:
        return self.quiver.t

    @property
    def lengths(self) -> Tuple[int, ...]:
        return self.quiver.lengths

    @property
    def monomials(self) -> List[Monomial]:
        return [r for r in self.relations if isinstance(r, Monomial)]

    @property
    def combinations(self) -> List[Combination]:
        return [r for r in self.relations if isinstance(r, Combination)]


def make_presentation(lengths: Sequence[int], monomials: Sequence[Tuple[int, int, int]] = (),
                      combinations: Sequence[Sequence[Any]] = (),
                      field: FieldSpec = RATIONAL) -> ToupiePresentation:
    """Convenience constructor: monomials as (branch, start, end), combinations as vectors."""
    relations: List[ToupieRelation] = [Combination(tuple(field.coerce(c) for c in v)) for v in combinations]
    relations += [Monomial(*m) for m in monomials]
    return ToupiePresentation(ToupieQuiver(tuple(lengths)), tuple(relations), field)


@dataclass
class ValidationIssue:
    location: str
    message: str


@dataclass
class ValidationReport:
    issues: List[ValidationIssue] = dataclass_field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.issues

    def add(self, location: str, message: str) -> None:
        self.issues.append(ValidationIssue(location, message))

    def summary(self) -> str:
        return "; ".join(f"{i.location}: {i.message}" for i in self.issues)


def validate(p: ToupiePresentation) -> ValidationReport:
    """Check every toupie invariant and report each violation with its location."""
    report = ValidationReport()
    if p.t < 1:
        report.add("branches", "a toupie quiver needs at least one branch")
    for i, length in enumerate(p.lengths, 1):
        if length < 1:
            report.add(f"lengths[{i}]", f"branch {i} has length {length}, expected at least 1")
    for k, relation in enumerate(p.relations, 1):
        location = f"relation {k}"
        if isinstance(relation, Monomial):
            if not 1 <= relation.branch <= p.t:
                report.add(location, f"branch {relation.branch} does not exist")
                continue
            length = p.lengths[relation.branch - 1]
            if not 0 <= relation.start < relation.end <= length:
                report.add(location, f"positions {relation.start}..{relation.end} lie outside branch "
                                     f"{relation.branch} of length {length}")
            elif relation.end - relation.start < 2:
                report.add(location, "monomial of length < 2 violates I in R^2")
        else:
            if len(relation.coefficients) != p.t:
                report.add(location, f"combination has {len(relation.coefficients)} entries, expected {p.t}")
                continue
            if not relation.support:
                report.add(location, "combination has no nonzero coefficient")
            short = [i for i in relation.support if p.lengths[i - 1] < 2]
            if short:
                report.add(location, f"combination touches a length-1 branch {short[0]}, violates I in R^2")
    return report


def require_valid(p: ToupiePresentation) -> None:
    report = validate(p)
    if not report.valid:
        raise PresentationError(f"invalid presentation: {report.summary()}")


def enumerate_paths(p: ToupiePresentation, x: str, y: str) -> List[PathRef]:
    """All paths x ~> y; in a toupie there is at most one unless (x, y) = (0, inf)."""
    q = p.quiver
    if x not in q.vertices or y not in q.vertices:
        raise PresentationError(f"unknown vertex: {x if x not in q.vertices else y}")
    if x == y:
        return [PathRef.trivial(x)]
    if x == SOURCE and y == SINK:
        return [PathRef(i, 0, length) for i, length in enumerate(q.lengths, 1)]
    if x == SINK or y == SOURCE:
        return []
    start = q.locate(x)
    end = q.locate(y)
    if start is None and end is not None:
        return [PathRef(end[0], 0, end[1])]
    if end is None and start is not None:
        return [PathRef(start[0], start[1], q.lengths[start[0] - 1])]
    if start and end and start[0] == end[0] and start[1] < end[1]:
        return [PathRef(start[0], start[1], end[1])]
    return []


def path_labels(q: ToupieQuiver, ref: PathRef) -> Path:
    return tuple(q.arrow_label(ref.branch, step) for step in range(ref.start + 1, ref.end + 1))


def to_general(p: ToupiePresentation) -> GeneralBoundQuiver:
    q = p.quiver
    arrows = []
    for i, length in enumerate(q.lengths, 1):
        for j in range(1, length + 1):
            arrows.append(Arrow(q.arrow_label(i, j), q.vertex_at(i, j - 1), q.vertex_at(i, j)))
    relations: List[Relation] = []
    for relation in p.relations:
        if isinstance(relation, Monomial):
            relations.append(((p.field.one, path_labels(q, relation.path)),))
        else:
            relations.append(tuple((c, path_labels(q, PathRef(i, 0, q.lengths[i - 1])))
                                   for i, c in enumerate(relation.coefficients, 1) if c != 0))
    return GeneralBoundQuiver(q.vertices, tuple(arrows), tuple(relations), p.field)


def recognize_toupie(g: GeneralBoundQuiver) -> Optional[ToupiePresentation]:
    """
    Read a general bound quiver as a toupie presentation.

    Branches are sorted by decreasing length, ties broken by their relation
    data and then by declaration order. Returns None on any other shape.
    A relation with a single path is read back as a monomial, also when the
    path spans a whole branch.
    """
    graph = g.graph
    sources = [v for v in g.vertices if graph.in_degree(v) == 0]
    sinks = [v for v in g.vertices if graph.out_degree(v) == 0]
    if len(sources) != 1 or len(sinks) != 1 or sources == sinks:
        return None
    source, sink = sources[0], sinks[0]
    for v in g.vertices:
        if v not in (source, sink) and (graph.in_degree(v) != 1 or graph.out_degree(v) != 1):
            return None

    branches: List[List[str]] = []
    for first in g.out_arrows(source):
        branch = [first.label]
        current = first.target
        while current != sink:
            step = g.out_arrows(current)[0]
            branch.append(step.label)
            current = step.target
        branches.append(branch)
    covered = sum(len(b) for b in branches)
    if covered != len(g.arrows):
        return None

    where: Dict[str, Tuple[int, int]] = {}
    for index, branch in enumerate(branches):
        for position, label in enumerate(branch):
            where[label] = (index, position)

    def locate_path(path: Path) -> Tuple[int, int, int]:
        index, start = where[path[0]]
        return index, start, start + len(path)

    combos: List[Dict[int, Any]] = []
    monomials: Dict[Tuple[int, int, int], Any] = {}
    for relation in g.relations:
        located = [(c, locate_path(path)) for c, path in relation]
        full = [(c, loc) for c, loc in located if loc[1] == 0 and loc[2] == len(branches[loc[0]])]
        if len(located) > 1 and len(full) == len(located):
            vector: Dict[int, Any] = {}
            for c, (index, _, _) in full:
                vector[index] = vector.get(index, g.field.zero) + c
            if any(v != 0 for v in vector.values()):
                combos.append(vector)
        else:
            grouped: Dict[Tuple[int, int, int], Any] = {}
            for c, loc in located:
                grouped[loc] = grouped.get(loc, g.field.zero) + c
            for loc, c in grouped.items():
                if c != 0:
                    monomials[loc] = c

    def branch_key(index: int) -> Tuple[Any, ...]:
        spans = tuple(sorted((a, b) for (i, a, b) in monomials if i == index))
        column = tuple(g.field.format_scalar(v.get(index, g.field.zero)) for v in combos)
        return (-len(branches[index]), spans, column)

    order = sorted(range(len(branches)), key=branch_key)
    renumber = {old: new for new, old in enumerate(order, 1)}
    lengths = tuple(len(branches[old]) for old in order)
    relations: List[ToupieRelation] = []
    for vector in combos:
        relations.append(Combination(tuple(vector.get(old, g.field.zero) for old in order)))
    for (index, a, b) in sorted(monomials, key=lambda loc: (renumber[loc[0]], loc[1], loc[2])):
        relations.append(Monomial(renumber[index], a, b))
    return ToupiePresentation(ToupieQuiver(lengths), tuple(relations), g.field)


# ---------------------------------------------------------------------------
# Text grammar
# ---------------------------------------------------------------------------

def _tokens(line: str) -> List[Tuple[str, int]]:
    """Whitespace-separated tokens with their 1-based columns."""
    result = []
    column = 0
    while column < len(line):
        if line[column].isspace():
            column += 1
            continue
        start = column
        while column < len(line) and not line[column].isspace():
            column += 1
        result.append((line[start:column], start + 1))
    return result


def _int_token(token: Tuple[str, int], line_no: int, what: str) -> int:
    text, column = token
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected an integer {what}, got {text!r}", line_no, column)


def parse(text: str) -> ToupiePresentation:
    """Parse the toupie input grammar; '#' starts a comment."""
    field = RATIONAL
    t: Optional[int] = None
    lengths: Optional[Tuple[int, ...]] = None
    relations: List[ToupieRelation] = []
    seen_field = False

    for line_no, raw in enumerate(text.splitlines(), 1):
        tokens = _tokens(raw.split('#', 1)[0])
        if not tokens:
            continue
        keyword, column = tokens[0]
        args = tokens[1:]
        if keyword == "field":
            if seen_field or t is not None:
                raise ParseError("field must appear once, before branches", line_no, column)
            seen_field = True
            if len(args) == 1 and args[0][0] == "rational":
                field = RATIONAL
            elif len(args) == 2 and args[0][0] == "prime":
                p = _int_token(args[1], line_no, "characteristic")
                try:
                    field = FieldSpec.prime(p)
                except PresentationError as e:
                    raise ParseError(str(e), line_no, args[1][1])
            else:
                raise ParseError("expected 'field rational' or 'field prime P'", line_no, column)
        elif keyword == "branches":
            if t is not None or len(args) != 1:
                raise ParseError("expected a single 'branches T' line", line_no, column)
            t = _int_token(args[0], line_no, "branch count")
        elif keyword == "lengths":
            if t is None:
                raise ParseError("lengths given before branches", line_no, column)
            if lengths is not None:
                raise ParseError("duplicate lengths line", line_no, column)
            if len(args) != t:
                raise ParseError(f"expected {t} lengths, got {len(args)}", line_no, column)
            lengths = tuple(_int_token(a, line_no, "length") for a in args)
        elif keyword == "relation":
            if lengths is None:
                raise ParseError("relation given before lengths", line_no, column)
            if not args:
                raise ParseError("expected 'mono' or 'comb'", line_no, column)
            kind, kind_column = args[0]
            if kind == "mono":
                if len(args) != 4:
                    raise ParseError("expected 'relation mono I A B'", line_no, kind_column)
                branch, start, end = (_int_token(a, line_no, "index") for a in args[1:])
                relations.append(Monomial(branch, start, end))
            elif kind == "comb":
                if len(args) - 1 != t:
                    raise ParseError(f"expected {t} coefficients, got {len(args) - 1}", line_no, kind_column)
                coefficients = []
                for text_value, value_column in args[1:]:
                    try:
                        coefficients.append(field.parse_scalar(text_value))
                    except PresentationError as e:
                        raise ParseError(str(e), line_no, value_column)
                relations.append(Combination(tuple(coefficients)))
            else:
                raise ParseError(f"unknown relation kind {kind!r}", line_no, kind_column)
        else:
            raise ParseError(f"unknown directive {keyword!r}", line_no, column)

    if t is None or lengths is None:
        raise ParseError("missing 'branches' or 'lengths' line", len(text.splitlines()) + 1)
    return ToupiePresentation(ToupieQuiver(lengths), tuple(relations), field)


def serialize(p: ToupiePresentation) -> str:
    lines = [f"field {p.field.describe()}", f"branches {p.t}",
             "lengths " + " ".join(str(length) for length in p.lengths)]
    for relation in p.relations:
        if isinstance(relation, Monomial):
            lines.append(f"relation mono {relation.branch} {relation.start} {relation.end}")
        else:
            lines.append("relation comb " + " ".join(p.field.format_scalar(c) for c in relation.coefficients))
    return "\n".join(lines) + "\n"


def load_presentation(path: str) -> ToupiePresentation:
    """Read a presentation from a file, or standard input for '-'."""
    if path == "-":
        return parse(sys.stdin.read())
    with open(path, 'r', encoding='utf-8') as f:
        return parse(f.read())
