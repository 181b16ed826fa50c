#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Ideal analysis

Closure of the relation ideal of a toupie presentation, minimal relations and
their linkage graph, per-branch relation counts and canonical-algebra
detection.

The ideal splits by vertex pairs. For every pair other than (0, inf) there is
at most one path, and it lies in I exactly when it contains a monomial
generator. For (0, inf) the ideal is the subspace W of k^t spanned by the
combination vectors and by e_i for every branch carrying a monomial: a product
u * rho * v of a combination rho with a non-trivial path vanishes, since no
arrow enters 0 and none leaves inf.
"""

import logging
import itertools
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .config_loader import get_analysis_param
from .errors import CapacityError, UnsupportedFieldError
from .exact_linalg import (
    FieldSpec, Subspace, is_zero, matmul, primitive_integer_vector, spiral_coefficients,
)
from .quiver_model import Monomial, ToupiePresentation, require_valid

logger = logging.getLogger(__name__)

Support = FrozenSet[int]


@dataclass(frozen=True)
class IdealClosure:
    """Closed form of the ideal: zero subpaths per branch and W = e0 I e_inf."""

    presentation: ToupiePresentation
    zero_subpaths: Tuple[FrozenSet[Tuple[int, int]], ...]
    W: Subspace
    branches_in_I: FrozenSet[int]

    @property
    def t(self) -> int:
        return self.presentation.t

    @property
    def m(self) -> int:
        return self.t - self.W.dim

    @property
    def field(self) -> FieldSpec:
        return self.presentation.field

    @property
    def has_monomials(self) -> bool:
        return bool(self.presentation.monomials)

    def in_ideal(self, branch: int, start: int, end: int) -> bool:
        return (start, end) in self.zero_subpaths[branch - 1]


@dataclass
class MinimalRelationCatalog:
    t: int
    supports: List[Support] = dataclass_field(default_factory=list)
    witnesses: Dict[Support, Tuple[Any, ...]] = dataclass_field(default_factory=dict)

    @property
    def linkage_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(1, self.t + 1))
        for support in self.supports:
            graph.add_edges_from(itertools.combinations(sorted(support), 2))
        return graph

    @property
    def linkage_edges(self) -> List[Tuple[int, int]]:
        return sorted(tuple(sorted(e)) for e in self.linkage_graph.edges())

    def linkage_class(self, i: int) -> FrozenSet[int]:
        """[w_i]: i together with every branch sharing a minimal relation with it."""
        return frozenset({i, *self.linkage_graph.neighbors(i)})


@dataclass(frozen=True)
class CanonicalParameters:
    anchor: Tuple[int, int]
    lambdas: Tuple[Tuple[int, Any], ...]


def close_ideal(p: ToupiePresentation) -> IdealClosure:
    """Compute zero subpaths, W, m and the branches lying in I."""
    require_valid(p)
    field = p.field
    monomial_branches = set()
    zero: List[set] = []
    for i, length in enumerate(p.lengths, 1):
        generators = [(r.start, r.end) for r in p.monomials if r.branch == i]
        if generators:
            monomial_branches.add(i)
        zero.append({(a, b) for a in range(length) for b in range(a + 1, length + 1)
                     if any(a <= ga and gb <= b for ga, gb in generators)})

    vectors = [list(r.coefficients) for r in p.combinations]
    for i in sorted(monomial_branches):
        unit = [field.zero] * p.t
        unit[i - 1] = field.one
        vectors.append(unit)
    W = Subspace.span(vectors, p.t, field)

    in_ideal = set()
    for i, length in enumerate(p.lengths, 1):
        unit = [field.zero] * p.t
        unit[i - 1] = field.one
        if W.contains(unit):
            in_ideal.add(i)
            zero[i - 1].add((0, length))
    closure = IdealClosure(p, tuple(frozenset(z) for z in zero), W, frozenset(in_ideal))
    logger.debug(f"Closed ideal: t={p.t}, dim W={W.dim}, m={closure.m}, in I={sorted(in_ideal)}")
    return closure


def relations_per_branch(c: IdealClosure, i: int) -> int:
    """Number of inclusion-minimal zero subpaths of branch i."""
    spans = c.zero_subpaths[i - 1]
    return sum(1 for (a, b) in spans
               if not any((x, y) != (a, b) and a <= x and y <= b for (x, y) in spans))


def _restriction(v: Sequence[Any], coords: Sequence[int], field: FieldSpec) -> List[Any]:
    keep = set(coords)
    return [x if k in keep else field.zero for k, x in enumerate(v)]


def is_minimal_relation(c: IdealClosure, v: Sequence[Any]) -> bool:
    """Literal check: v in W, |supp v| >= 2, no proper non-empty sub-sum in W."""
    field = c.field
    vector = [field.coerce(x) for x in v]
    support = [k for k, x in enumerate(vector) if x != 0]
    if len(support) < 2 or not c.W.contains(vector):
        return False
    for size in range(1, len(support)):
        for sub in itertools.combinations(support, size):
            if c.W.contains(_restriction(vector, sub, field)):
                return False
    return True


def _half_subsets(J: Sequence[int]) -> List[Tuple[int, ...]]:
    """Non-empty proper subsets of J containing min(J): one per complementary pair."""
    first, rest = J[0], J[1:]
    subsets = []
    for size in range(0, len(rest)):
        for combo in itertools.combinations(rest, size):
            subsets.append((first, *combo))
    return subsets


def _support_witness(c: IdealClosure, J: Tuple[int, ...], annihilator: np.ndarray,
                     radius: int) -> Optional[Tuple[Any, ...]]:
    """
    Witness for a minimal relation with support J (0-based coordinates), or None.

    Every obstruction is a subspace of the coefficient space of W_J; a minimal
    relation exists iff each of them is proper, and a vector avoiding their
    union is then found by the spiral sweep or, failing that, on the moment
    curve, where each proper subspace meets at most dim - 1 points.
    """
    field = c.field
    W_J = c.W.restrict_to_coords(J)
    if W_J.dim == 0:
        return None
    B = W_J.basis
    if any(all(x == 0 for x in B[:, i]) for i in J):
        return None
    halves = _half_subsets(J)
    conditions = []
    for sub in halves:
        outside = [k for k in range(c.t) if k not in set(sub)]
        restricted = B.copy()
        restricted[:, outside] = field.zero
        # v|sub lies in W iff the annihilator kills it
        condition = matmul(annihilator, restricted.T, field)
        if is_zero(condition):
            return None
        conditions.append(condition)

    def passes(coefficients: Sequence[int]) -> Optional[np.ndarray]:
        coeffs = field.vector(coefficients)
        v = matmul(coeffs.reshape(1, -1), B, field).reshape(-1)
        if any(v[i] == 0 for i in J):
            return None
        for condition in conditions:
            if is_zero(matmul(condition, coeffs.reshape(-1, 1), field)):
                return None
        return v

    d = W_J.dim
    for coefficients in spiral_coefficients(d, radius):
        v = passes(coefficients)
        if v is not None:
            return tuple(v)
    bad = len(J) + len(conditions)
    for x in range(bad * max(d - 1, 1) + 2):
        v = passes([x ** k for k in range(d)])
        if v is not None:
            return tuple(v)
    raise RuntimeError(f"no witness found for support {J}")


def minimal_relations(c: IdealClosure) -> MinimalRelationCatalog:
    """
    Catalog every support J, |J| >= 2, carrying a minimal relation.

    Args:
        c: Closure over the rationals

    Returns:
        MinimalRelationCatalog with 1-based supports and one witness per support
    """
    if c.field.is_prime_field:
        raise UnsupportedFieldError("minimal relations need an infinite field; prime fields are rejected")
    max_branches = int(get_analysis_param('max_branches', 16))
    if c.t > max_branches:
        raise CapacityError(f"{c.t} branches exceed the subset-scan capacity of {max_branches}")
    radius = int(get_analysis_param('witness_sweep_radius', 3))

    catalog = MinimalRelationCatalog(c.t)
    if c.W.dim == 0:
        return catalog
    annihilator = c.W.annihilator().basis
    for size in range(2, c.t + 1):
        for J in itertools.combinations(range(c.t), size):
            witness = _support_witness(c, J, annihilator, radius)
            if witness is None:
                continue
            if not is_minimal_relation(c, witness):
                raise RuntimeError(f"witness {witness} fails the minimal relation check")
            support = frozenset(k + 1 for k in J)
            catalog.supports.append(support)
            catalog.witnesses[support] = primitive_integer_vector(witness)
    logger.debug(f"Minimal relation supports: {[sorted(s) for s in catalog.supports]}")
    return catalog


def is_simply_connected(catalog: MinimalRelationCatalog) -> bool:
    """Every pair of distinct branches shares a minimal relation."""
    graph = catalog.linkage_graph
    return catalog.t >= 2 and graph.number_of_edges() == catalog.t * (catalog.t - 1) // 2


def is_canonical(c: IdealClosure) -> Optional[CanonicalParameters]:
    """
    Detect a canonical algebra and recover its parameters.

    W is the kernel of a 2 x t configuration; all its supports have size at
    least three exactly when the t columns are pairwise independent, i.e. give
    t distinct points of the projective line.
    """
    t = c.t
    if t < 2 or c.has_monomials or c.W.dim != t - 2:
        return None
    if t == 2:
        return CanonicalParameters((1, 2), ())
    for pair in itertools.combinations(range(t), 2):
        if c.W.restrict_to_coords(pair).dim:
            return None
    for a, b in itertools.combinations(range(t), 2):
        lambdas = []
        for i in range(t):
            if i in (a, b):
                continue
            local = c.W.restrict_to_coords((a, b, i))
            if local.dim != 1:
                break
            x = local.basis[0]
            if x[a] == 0 or x[b] == 0 or x[i] == 0:
                break
            lambdas.append((i + 1, x[b] / x[a]))
        else:
            values = [value for _, value in lambdas]
            if all(v != 0 for v in values) and len(set(values)) == len(values):
                return CanonicalParameters((a + 1, b + 1), tuple(lambdas))
    return None


def oracle_minimal_supports(c: IdealClosure, p: Optional[int] = None) -> List[Support]:
    """
    Minimal-relation supports recomputed over GF(p) by exhaustive enumeration.

    W is reduced modulo p and every vector of W with leading coefficient one is
    tested against the definition verbatim. Scalar multiples share support and
    minimality, so the normalisation loses nothing.
    """
    p = p or int(get_analysis_param('oracle_prime', 101))
    field = FieldSpec.prime(p)
    basis = [[field.coerce(Fraction(x)) for x in row] for row in c.W.basis]
    W_p = Subspace.span(basis, c.t, field)
    if W_p.dim != c.W.dim:
        logger.warning(f"Reduction modulo {p} drops the rank of W")
    found = set()
    d = W_p.dim
    for lead in range(d):
        for tail in itertools.product(range(p), repeat=d - lead - 1):
            coefficients = [0] * lead + [1] + list(tail)
            v = [field.zero] * c.t
            for coefficient, row in zip(coefficients, W_p.basis):
                if coefficient:
                    v = [x + row[k] * coefficient for k, x in enumerate(v)]
            support = [k for k, x in enumerate(v) if x != 0]
            if len(support) < 2 or frozenset(k + 1 for k in support) in found:
                continue
            minimal = all(not W_p.contains(_restriction(v, sub, field))
                          for size in range(1, len(support))
                          for sub in itertools.combinations(support, size))
            if minimal:
                found.add(frozenset(k + 1 for k in support))
    return sorted(found, key=lambda s: (len(s), sorted(s)))
