#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Based algebras

A = kQ/I realised with an explicit basis of residue classes of paths, graded by
vertex pairs, together with its structure constants, the opposite algebra and
idempotent truncation eAe.

Paths compose left to right: for a in e_x A e_y and b in e_y A e_z the product
a * b lies in e_x A e_z and is the concatenation of the paths.
"""

import logging
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .config_loader import get_engine_param
from .errors import CapacityError, PresentationError
from .exact_linalg import FieldSpec, Matrix, Subspace, Vector, kernel_basis, solve
from .ideal_analysis import IdealClosure
from .quiver_model import (
    Arrow, GeneralBoundQuiver, Path, SINK, SOURCE, ToupiePresentation, to_general,
)

logger = logging.getLogger(__name__)

Pair = Tuple[str, str]


class BasedAlgebra:
    """Finite-dimensional algebra kQ/I with a path basis per vertex pair."""

    def __init__(self, quiver: GeneralBoundQuiver, basis: Dict[Pair, List[Path]],
                 coordinates: Dict[Pair, Dict[Path, Vector]]):
        self.quiver = quiver
        self.field: FieldSpec = quiver.field
        self._basis = basis
        self._coordinates = coordinates
        self._products: Dict[Tuple[str, str, str], np.ndarray] = {}
        self._opposite: Optional["BasedAlgebra"] = None

    @classmethod
    def from_quiver(cls, quiver: GeneralBoundQuiver) -> "BasedAlgebra":
        """Choose, for every vertex pair, the first paths independent modulo I."""
        field = quiver.field
        basis: Dict[Pair, List[Path]] = {}
        coordinates: Dict[Pair, Dict[Path, Vector]] = {}
        for x in quiver.vertices:
            for y in quiver.vertices:
                paths = quiver.paths(x, y)
                if not paths:
                    continue
                index = {path: k for k, path in enumerate(paths)}
                generators = _ideal_generators(quiver, x, y, index)
                ideal = Subspace.span(generators, len(paths), field)
                span = ideal
                chosen: List[int] = []
                for k in range(len(paths)):
                    unit = _unit(len(paths), k, field)
                    if not span.contains(unit):
                        chosen.append(k)
                        span = span.sum(Subspace.span([unit], len(paths), field))
                if not chosen:
                    continue
                basis[(x, y)] = [paths[k] for k in chosen]
                columns = [_unit(len(paths), k, field) for k in chosen] + list(ideal.basis)
                system = np.array(columns, dtype=object).T
                coordinates[(x, y)] = {}
                for k, path in enumerate(paths):
                    solution = solve(system, _unit(len(paths), k, field), field)
                    coordinates[(x, y)][path] = solution[:len(chosen)]
        algebra = cls(quiver, basis, coordinates)
        logger.debug(f"Built based algebra of dimension {algebra.dimension}")
        return algebra

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.quiver.vertices

    @property
    def dimension(self) -> int:
        return sum(len(b) for b in self._basis.values())

    def dim_between(self, x: str, y: str) -> int:
        return len(self._basis.get((x, y), ()))

    def basis_paths(self, x: str, y: str) -> List[Path]:
        return list(self._basis.get((x, y), ()))

    def reduce_path(self, path: Path, x: str, y: str) -> Vector:
        """Coordinates of the residue class of a path x ~> y in the basis of e_x A e_y."""
        if (x, y) not in self._basis:
            return self.field.vector([])
        try:
            return self._coordinates[(x, y)][tuple(path)]
        except KeyError:
            raise PresentationError(f"{path} is not a path from {x} to {y}")

    def arrow_element(self, arrow: Arrow) -> Vector:
        return self.reduce_path((arrow.label,), arrow.source, arrow.target)

    def product_tensor(self, x: str, y: str, z: str) -> np.ndarray:
        """T[i, j] = coordinates of b_i * b_j for bases of e_x A e_y and e_y A e_z."""
        key = (x, y, z)
        if key not in self._products:
            first = self.basis_paths(x, y)
            second = self.basis_paths(y, z)
            tensor = np.full((len(first), len(second), self.dim_between(x, z)), self.field.zero, dtype=object)
            for i, p in enumerate(first):
                for j, q in enumerate(second):
                    if tensor.shape[2]:
                        tensor[i, j, :] = self.reduce_path(p + q, x, z)
            self._products[key] = tensor
        return self._products[key]

    def multiply(self, u: Sequence[Any], v: Sequence[Any], x: str, y: str, z: str) -> Vector:
        """Product of u in e_x A e_y and v in e_y A e_z."""
        tensor = self.product_tensor(x, y, z)
        result = self.field.vector([0] * tensor.shape[2])
        for i, a in enumerate(u):
            if a == 0:
                continue
            for j, b in enumerate(v):
                if b != 0:
                    result = result + tensor[i, j, :] * (a * b)
        return result

    def left_multiplication(self, element: Sequence[Any], u: str, v: str, w: str) -> Matrix:
        """Matrix of c -> element * c from e_v A e_w to e_u A e_w, for element in e_u A e_v."""
        tensor = self.product_tensor(u, v, w)
        matrix = self.field.zeros(tensor.shape[2], tensor.shape[1])
        for i, a in enumerate(element):
            if a != 0:
                matrix = matrix + tensor[i, :, :].T * a
        return matrix

    def right_multiplication(self, element: Sequence[Any], u: str, v: str, w: str) -> Matrix:
        """Matrix of c -> c * element from e_u A e_v to e_u A e_w, for element in e_v A e_w."""
        tensor = self.product_tensor(u, v, w)
        matrix = self.field.zeros(tensor.shape[2], tensor.shape[0])
        for j, b in enumerate(element):
            if b != 0:
                matrix = matrix + tensor[:, j, :].T * b
        return matrix

    def is_associative(self) -> bool:
        """Exhaustive check on basis triples."""
        vertices = self.vertices
        for x in vertices:
            for y in vertices:
                for z in vertices:
                    for w in vertices:
                        if not (self.dim_between(x, y) and self.dim_between(y, z) and self.dim_between(z, w)):
                            continue
                        for i in range(self.dim_between(x, y)):
                            a = _unit(self.dim_between(x, y), i, self.field)
                            for j in range(self.dim_between(y, z)):
                                b = _unit(self.dim_between(y, z), j, self.field)
                                ab = self.multiply(a, b, x, y, z)
                                for k in range(self.dim_between(z, w)):
                                    c = _unit(self.dim_between(z, w), k, self.field)
                                    left = self.multiply(ab, c, x, z, w)
                                    right = self.multiply(a, self.multiply(b, c, y, z, w), x, y, w)
                                    if any(l != r for l, r in zip(left, right)):
                                        return False
        return True

    def opposite(self) -> "BasedAlgebra":
        """A^op on the reversed paths of the same basis; opposite() twice returns self."""
        if self._opposite is None:
            quiver = self.quiver.opposite()
            basis = {(y, x): [tuple(reversed(p)) for p in paths] for (x, y), paths in self._basis.items()}
            coordinates = {(y, x): {tuple(reversed(p)): v for p, v in table.items()}
                           for (x, y), table in self._coordinates.items()}
            opposite = BasedAlgebra(quiver, basis, coordinates)
            opposite._opposite = self
            self._opposite = opposite
            _ALGEBRAS.setdefault(quiver, opposite)
        return self._opposite


def _unit(n: int, k: int, field: FieldSpec) -> Vector:
    v = field.vector([0] * n)
    v[k] = field.one
    return v


def _ideal_generators(quiver: GeneralBoundQuiver, x: str, y: str,
                      index: Dict[Path, int]) -> List[Vector]:
    """Vectors p * rho * q spanning e_x I e_y in the path coordinates `index`."""
    field = quiver.field
    generators = []
    for relation in quiver.relations:
        u, v = quiver.path_ends(relation[0][1])
        for prefix in quiver.paths(x, u):
            for suffix in quiver.paths(v, y):
                vector = field.vector([0] * len(index))
                for coefficient, path in relation:
                    vector[index[prefix + path + suffix]] += coefficient
                generators.append(vector)
    return generators


_ALGEBRAS: Dict[GeneralBoundQuiver, BasedAlgebra] = {}


def algebra_for(quiver: GeneralBoundQuiver) -> BasedAlgebra:
    """Cached based algebra of a quiver, sharing its basis with the opposite algebra."""
    if quiver not in _ALGEBRAS:
        opposite = quiver.opposite()
        if opposite in _ALGEBRAS:
            _ALGEBRAS[quiver] = _ALGEBRAS[opposite].opposite()
        else:
            _ALGEBRAS[quiver] = BasedAlgebra.from_quiver(quiver)
    return _ALGEBRAS[quiver]


def build(p: ToupiePresentation, c: IdealClosure) -> BasedAlgebra:
    """Based algebra of a toupie presentation; e_0 A e_inf has dimension m."""
    algebra = algebra_for(to_general(p))
    if algebra.dim_between(SOURCE, SINK) != c.m:
        raise RuntimeError(f"dim e0 A e_inf = {algebra.dim_between(SOURCE, SINK)} but m = {c.m}")
    return algebra


def opposite(a: BasedAlgebra) -> BasedAlgebra:
    return a.opposite()


def _longest_paths(quiver: GeneralBoundQuiver) -> Dict[Pair, int]:
    longest: Dict[Pair, int] = {}
    for x in quiver.vertices:
        for y in quiver.vertices:
            paths = quiver.paths(x, y) if x != y else []
            if paths:
                longest[(x, y)] = max(len(p) for p in paths)
    return longest


def truncate(a: BasedAlgebra, verts: Iterable[str]) -> GeneralBoundQuiver:
    """
    Bound-quiver presentation of eAe for e the sum of the idempotents at verts.

    Arrows x -> y are basis paths of e_x A e_y completing rad^2(eAe) to all of
    e_x A e_y; relations generate the kernel of the induced map from the new
    path algebra, pair by pair in order of longest path, each pair contributing
    only what the earlier relations do not already generate.
    """
    wanted = set(verts)
    unknown = wanted - set(a.vertices)
    if not wanted:
        raise PresentationError("truncation needs at least one vertex")
    if unknown:
        raise PresentationError(f"unknown vertices: {sorted(unknown)}")
    field = a.field
    order = [v for v in a.quiver.topological_order if v in wanted]
    capacity = int(get_engine_param('max_truncation_paths', 4000))

    arrows: List[Arrow] = []
    elements: Dict[str, Vector] = {}
    for x in order:
        for y in order:
            n = a.dim_between(x, y)
            if x == y or n == 0:
                continue
            products = []
            for z in order:
                if z in (x, y) or not (a.dim_between(x, z) and a.dim_between(z, y)):
                    continue
                tensor = a.product_tensor(x, z, y)
                products.extend(tensor[i, j, :] for i in range(tensor.shape[0]) for j in range(tensor.shape[1]))
            span = Subspace.span(products, n, field)
            for k, path in enumerate(a.basis_paths(x, y)):
                unit = _unit(n, k, field)
                if not span.contains(unit):
                    label = "*".join(path)
                    arrows.append(Arrow(label, x, y))
                    elements[label] = unit
                    span = span.sum(Subspace.span([unit], n, field))

    skeleton = GeneralBoundQuiver(tuple(order), tuple(arrows), (), field)
    longest = _longest_paths(skeleton)
    relations: List[Tuple[Tuple[Any, Path], ...]] = []
    for (x, y) in sorted(longest, key=lambda pair: (longest[pair], order.index(pair[0]), order.index(pair[1]))):
        if longest[(x, y)] < 2:
            continue
        paths = skeleton.paths(x, y)
        if len(paths) > capacity:
            raise CapacityError(f"{len(paths)} paths from {x} to {y} exceed the truncation capacity {capacity}")
        index = {p: k for k, p in enumerate(paths)}
        images = [_evaluate(a, skeleton, elements, p) for p in paths]
        evaluation = np.array(images, dtype=object).T if a.dim_between(x, y) else field.zeros(0, len(paths))
        kernel = kernel_basis(evaluation.reshape(a.dim_between(x, y), len(paths)), field)
        current = GeneralBoundQuiver(tuple(order), tuple(arrows), tuple(relations), field)
        generated = Subspace.span(_ideal_generators(current, x, y, index), len(paths), field)
        for vector in kernel.basis:
            if generated.contains(vector):
                continue
            lead = next(value for value in vector if value != 0)
            normalised = vector / lead
            relations.append(tuple((value, paths[k]) for k, value in enumerate(normalised) if value != 0))
            generated = generated.sum(Subspace.span([normalised], len(paths), field))
    quiver = GeneralBoundQuiver(tuple(order), tuple(arrows), tuple(relations), field)
    logger.info(f"Truncated to {len(order)} vertices: {len(arrows)} arrows, {len(relations)} relations")
    return quiver


def _evaluate(a: BasedAlgebra, skeleton: GeneralBoundQuiver, elements: Dict[str, Vector],
              path: Path) -> Vector:
    """Image in A of a path of truncation arrows."""
    first = skeleton.arrow_map[path[0]]
    source, current = first.source, first.target
    value = elements[path[0]]
    for label in path[1:]:
        arrow = skeleton.arrow_map[label]
        value = a.multiply(value, elements[label], source, current, arrow.target)
        current = arrow.target
    return value
