#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Representation engine

Finite-dimensional right modules over a based algebra A = kQ/I, held as quiver
representations: a vector space per vertex and a matrix per arrow. A path
a1 a2 ... an acts as M_an ... M_a2 M_a1.

Covers kernels, cokernels, radicals, socles, projective covers and injective
envelopes, homological dimensions, the Auslander-Reiten translate through the
transpose of a minimal presentation, Ext^1, decomposition and isomorphism
tests, and the text format for modules.
"""

import logging
import itertools
from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from .algebra_core import BasedAlgebra, algebra_for
from .config_loader import get_engine_param
from .errors import ParseError, PresentationError
from .exact_linalg import (
    FieldSpec, Matrix, block_diagonal, column_space, complement_indices, coordinates,
    hstack, inverse, is_invertible, is_zero, kernel_vectors, kron, matmul, rank, spiral_coefficients,
    vstack,
)
from .quiver_model import GeneralBoundQuiver, Path

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Modules and module maps
# ---------------------------------------------------------------------------

@dataclass
class Representation:
    """Representation of a bound quiver: dims per vertex, a matrix per arrow (target x source)."""

    quiver: GeneralBoundQuiver
    dims: Dict[str, int]
    maps: Dict[str, Matrix] = dataclass_field(default_factory=dict)

    def __post_init__(self) -> None:
        field = self.quiver.field
        for vertex in self.quiver.vertices:
            self.dims.setdefault(vertex, 0)
        for arrow in self.quiver.arrows:
            if arrow.label not in self.maps:
                self.maps[arrow.label] = field.zeros(self.dims[arrow.target], self.dims[arrow.source])

    @property
    def field(self) -> FieldSpec:
        return self.quiver.field

    @property
    def algebra(self) -> BasedAlgebra:
        return algebra_for(self.quiver)

    @property
    def dimension(self) -> int:
        return sum(self.dims.values())

    def dimension_vector(self) -> Dict[str, int]:
        return {v: self.dims[v] for v in self.quiver.vertices}

    def is_zero(self) -> bool:
        return self.dimension == 0

    def path_action(self, path: Path, start: str) -> Matrix:
        """Matrix of a path starting at `start` (trivial paths act as the identity)."""
        result = self.field.identity(self.dims[start])
        for label in path:
            result = matmul(self.maps[label], result, self.field)
        return result

    def element_action(self, element: Sequence[Any], x: str, y: str) -> Matrix:
        """Matrix M_x -> M_y of an element of e_x A e_y given in basis coordinates."""
        result = self.field.zeros(self.dims[y], self.dims[x])
        for coefficient, path in zip(element, self.algebra.basis_paths(x, y)):
            if coefficient != 0:
                result = result + self.path_action(path, x) * coefficient
        return result


@dataclass
class ModuleMap:
    """Morphism of representations, one matrix per vertex (target x source)."""

    source: Representation
    target: Representation
    matrices: Dict[str, Matrix]

    def at(self, vertex: str) -> Matrix:
        return self.matrices[vertex]

    def is_morphism(self) -> bool:
        field = self.source.field
        for arrow in self.source.quiver.arrows:
            left = matmul(self.matrices[arrow.target], self.source.maps[arrow.label], field)
            right = matmul(self.target.maps[arrow.label], self.matrices[arrow.source], field)
            if not is_zero(left - right):
                return False
        return True

    def is_zero(self) -> bool:
        return all(is_zero(m) for m in self.matrices.values())

    def is_injective(self) -> bool:
        return all(rank(m) == m.shape[1] for m in self.matrices.values())

    def is_surjective(self) -> bool:
        return all(rank(m) == m.shape[0] for m in self.matrices.values())

    def is_isomorphism(self) -> bool:
        return all(is_invertible(m) for m in self.matrices.values())

    def compose(self, first: "ModuleMap") -> "ModuleMap":
        """self o first."""
        field = self.source.field
        return ModuleMap(first.source, self.target,
                         {v: matmul(self.matrices[v], first.matrices[v], field) for v in self.source.quiver.vertices})


@dataclass
class ProjectiveCover:
    module: Representation
    epi: ModuleMap
    summands: List[str]


@dataclass
class InjectiveEnvelope:
    module: Representation
    mono: ModuleMap
    summands: List[str]


@dataclass
class MinimalPresentation:
    """P1 -> P0 -> M -> 0 with d1 the composite of the two covers."""

    p1: Representation
    p0: Representation
    d1: ModuleMap
    summands1: List[str]
    summands0: List[str]


class Verdict(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass
class Indecomposability:
    verdict: Verdict
    summands: List[Representation] = dataclass_field(default_factory=list)


def check(M: Representation) -> List[str]:
    """Problems with a representation: wrong matrix shapes or violated relations."""
    problems = []
    field = M.field
    for arrow in M.quiver.arrows:
        shape = M.maps[arrow.label].shape
        if shape != (M.dims[arrow.target], M.dims[arrow.source]):
            problems.append(f"map {arrow.label} has shape {shape}, expected "
                            f"{(M.dims[arrow.target], M.dims[arrow.source])}")
    if problems:
        return problems
    for index, relation in enumerate(M.quiver.relations, 1):
        u, v = M.quiver.path_ends(relation[0][1])
        total = field.zeros(M.dims[v], M.dims[u])
        for coefficient, path in relation:
            total = total + M.path_action(path, u) * coefficient
        if not is_zero(total):
            problems.append(f"relation {index} does not hold")
    return problems


def zero_module(quiver: GeneralBoundQuiver) -> Representation:
    return Representation(quiver, {})


def identity_map(M: Representation) -> ModuleMap:
    return ModuleMap(M, M, {v: M.field.identity(M.dims[v]) for v in M.quiver.vertices})


# ---------------------------------------------------------------------------
# Standard modules
# ---------------------------------------------------------------------------

def simple(a: BasedAlgebra, x: str) -> Representation:
    return Representation(a.quiver, {x: 1})


def projective(a: BasedAlgebra, x: str) -> Representation:
    """P_x = e_x A with arrows acting by right multiplication."""
    dims = {y: a.dim_between(x, y) for y in a.vertices}
    maps = {arrow.label: a.right_multiplication(a.arrow_element(arrow), x, arrow.source, arrow.target)
            for arrow in a.quiver.arrows}
    return Representation(a.quiver, dims, maps)


def injective(a: BasedAlgebra, x: str) -> Representation:
    """I_x = D(A e_x): at y the dual of e_y A e_x, arrows acting by transposed left multiplication."""
    dims = {y: a.dim_between(y, x) for y in a.vertices}
    maps = {arrow.label: a.left_multiplication(a.arrow_element(arrow), arrow.source, arrow.target, x).T
            for arrow in a.quiver.arrows}
    return Representation(a.quiver, dims, maps)


def direct_sum(modules: Sequence[Representation], quiver: Optional[GeneralBoundQuiver] = None) -> Representation:
    if not modules:
        if quiver is None:
            raise ValueError("empty direct sum needs a quiver")
        return zero_module(quiver)
    quiver = modules[0].quiver
    field = quiver.field
    dims = {v: sum(M.dims[v] for M in modules) for v in quiver.vertices}
    maps = {arrow.label: block_diagonal([M.maps[arrow.label] for M in modules], field)
            for arrow in quiver.arrows}
    return Representation(quiver, dims, maps)


def projective_sum(a: BasedAlgebra, vertices: Sequence[str]) -> Representation:
    return direct_sum([projective(a, x) for x in vertices], a.quiver)


def projective_map(a: BasedAlgebra, sources: Sequence[str], targets: Sequence[str],
                   elements: Dict[Tuple[int, int], Sequence[Any]]) -> ModuleMap:
    """
    Map between sums of indecomposable projectives.

    Args:
        a: Based algebra
        sources: Vertices of the source summands
        targets: Vertices of the target summands
        elements: (source index, target index) -> element of e_target A e_source,
            the image of the source generator in that target summand; missing pairs are zero

    Returns:
        ModuleMap from the sum over sources to the sum over targets
    """
    source = projective_sum(a, sources)
    target = projective_sum(a, targets)
    field = a.field
    matrices = {}
    for y in a.vertices:
        rows = []
        for i, t in enumerate(targets):
            blocks = []
            for j, s in enumerate(sources):
                element = elements.get((j, i))
                if element is None or a.dim_between(t, s) == 0:
                    blocks.append(field.zeros(a.dim_between(t, y), a.dim_between(s, y)))
                else:
                    blocks.append(a.left_multiplication(element, t, s, y))
            rows.append(hstack(blocks, a.dim_between(t, y), field))
        matrices[y] = vstack(rows, source.dims[y], field)
    return ModuleMap(source, target, matrices)


def dual(M: Representation) -> Representation:
    """D M = Hom_k(M, k) over the opposite quiver."""
    return Representation(M.quiver.opposite(), dict(M.dims),
                          {label: matrix.T.copy() for label, matrix in M.maps.items()})


def dual_map(f: ModuleMap) -> ModuleMap:
    return ModuleMap(dual(f.target), dual(f.source), {v: m.T.copy() for v, m in f.matrices.items()})


# ---------------------------------------------------------------------------
# Sub- and quotient modules
# ---------------------------------------------------------------------------

def _columns(vectors: Sequence[Matrix], n: int, field: FieldSpec) -> Matrix:
    if not vectors:
        return field.zeros(n, 0)
    return column_space(hstack(list(vectors), n, field), field)


def submodule(M: Representation, generators: Dict[str, Matrix]) -> Tuple[Representation, ModuleMap]:
    """Submodule generated by the given columns, with its inclusion."""
    field = M.field
    quiver = M.quiver
    basis: Dict[str, Matrix] = {}
    for y in quiver.topological_order:
        vectors = []
        if y in generators and generators[y].shape[1]:
            vectors.append(generators[y])
        for arrow in quiver.in_arrows(y):
            if basis[arrow.source].shape[1]:
                vectors.append(matmul(M.maps[arrow.label], basis[arrow.source], field))
        basis[y] = _columns(vectors, M.dims[y], field)
    dims = {v: basis[v].shape[1] for v in quiver.vertices}
    maps = {arrow.label: coordinates(basis[arrow.target],
                                     matmul(M.maps[arrow.label], basis[arrow.source], field), field)
            for arrow in quiver.arrows}
    sub = Representation(quiver, dims, maps)
    return sub, ModuleMap(sub, M, basis)


def quotient(M: Representation, sub: Dict[str, Matrix]) -> Tuple[Representation, ModuleMap]:
    """M / U for a submodule given by column bases U_x, with the projection."""
    field = M.field
    quiver = M.quiver
    lifts: Dict[str, Matrix] = {}
    projections: Dict[str, Matrix] = {}
    for x in quiver.vertices:
        n = M.dims[x]
        U = sub.get(x, field.zeros(n, 0))
        keep = complement_indices(list(U.T), n, field)
        identity = field.identity(n)
        lifts[x] = identity[:, keep].reshape(n, len(keep))
        if n == 0:
            projections[x] = field.zeros(len(keep), 0)
        else:
            projections[x] = coordinates(hstack([lifts[x], U], n, field), identity, field)[:len(keep)]
    dims = {x: lifts[x].shape[1] for x in quiver.vertices}
    maps = {arrow.label: matmul(projections[arrow.target],
                                matmul(M.maps[arrow.label], lifts[arrow.source], field), field)
            for arrow in quiver.arrows}
    quotient_module = Representation(quiver, dims, maps)
    return quotient_module, ModuleMap(M, quotient_module, projections)


def kernel(f: ModuleMap) -> Tuple[Representation, ModuleMap]:
    field = f.source.field
    generators = {v: kernel_vectors(m, field).T for v, m in f.matrices.items()}
    return submodule(f.source, generators)


def image(f: ModuleMap) -> Tuple[Representation, ModuleMap]:
    return submodule(f.target, dict(f.matrices))


def cokernel(f: ModuleMap) -> Tuple[Representation, ModuleMap]:
    field = f.target.field
    images = {v: _columns([m], f.target.dims[v], field) for v, m in f.matrices.items()}
    return quotient(f.target, images)


def radical(M: Representation) -> Tuple[Representation, ModuleMap]:
    """rad M: at y the sum of the images of the arrows ending at y."""
    generators = {}
    for y in M.quiver.vertices:
        incoming = [M.maps[a.label] for a in M.quiver.in_arrows(y) if M.maps[a.label].shape[1]]
        generators[y] = hstack(incoming, M.dims[y], M.field) if incoming else M.field.zeros(M.dims[y], 0)
    return submodule(M, generators)


def top(M: Representation) -> Tuple[Representation, ModuleMap]:
    rad, inclusion = radical(M)
    return quotient(M, inclusion.matrices)


def socle(M: Representation) -> Tuple[Representation, ModuleMap]:
    """soc M: at x the common kernel of the arrows leaving x."""
    field = M.field
    generators = {}
    for x in M.quiver.vertices:
        outgoing = [M.maps[a.label] for a in M.quiver.out_arrows(x)]
        if outgoing:
            generators[x] = kernel_vectors(vstack(outgoing, M.dims[x], field), field).T
        else:
            generators[x] = field.identity(M.dims[x])
    return submodule(M, generators)


# ---------------------------------------------------------------------------
# Hom spaces
# ---------------------------------------------------------------------------

def _hom_system(M: Representation, N: Representation) -> Tuple[Matrix, Dict[str, Tuple[int, int, int]]]:
    """Linear system whose kernel is Hom(M, N); f_x flattened row by row."""
    field = M.field
    quiver = M.quiver
    offsets: Dict[str, Tuple[int, int, int]] = {}
    total = 0
    for x in quiver.vertices:
        offsets[x] = (total, N.dims[x], M.dims[x])
        total += N.dims[x] * M.dims[x]
    blocks = []
    for arrow in quiver.arrows:
        x, y = arrow.source, arrow.target
        rows = N.dims[y] * M.dims[x]
        if rows == 0:
            continue
        block = field.zeros(rows, total)
        start_x, n_x, m_x = offsets[x]
        start_y, n_y, m_y = offsets[y]
        if n_x * m_x:
            block[:, start_x:start_x + n_x * m_x] += kron(N.maps[arrow.label], field.identity(m_x), field)
        if n_y * m_y:
            block[:, start_y:start_y + n_y * m_y] -= kron(field.identity(n_y), M.maps[arrow.label].T, field)
        blocks.append(block)
    system = vstack(blocks, total, field) if blocks else field.zeros(0, total)
    return system, offsets


def hom_basis(M: Representation, N: Representation) -> List[ModuleMap]:
    """A basis of Hom_A(M, N)."""
    field = M.field
    system, offsets = _hom_system(M, N)
    if system.shape[1] == 0:
        return []
    maps = []
    for vector in kernel_vectors(system, field):
        matrices = {}
        for x, (start, n, m) in offsets.items():
            matrices[x] = np.array(vector[start:start + n * m], dtype=object).reshape(n, m)
        maps.append(ModuleMap(M, N, matrices))
    return maps


def hom_dim(M: Representation, N: Representation) -> int:
    system, _ = _hom_system(M, N)
    return system.shape[1] - rank(system)


def combine_maps(maps: Sequence[ModuleMap], coefficients: Sequence[Any]) -> ModuleMap:
    field = maps[0].source.field
    matrices = {v: field.zeros(*m.shape) for v, m in maps[0].matrices.items()}
    for f, c in zip(maps, coefficients):
        c = field.coerce(c)
        if c != 0:
            for v in matrices:
                matrices[v] = matrices[v] + f.matrices[v] * c
    return ModuleMap(maps[0].source, maps[0].target, matrices)


# ---------------------------------------------------------------------------
# Projective and injective resolutions
# ---------------------------------------------------------------------------

def projective_cover(M: Representation) -> ProjectiveCover:
    """Minimal projective cover: one P_x per basis vector of top(M) at x."""
    field = M.field
    a = M.algebra
    _, rad = radical(M)
    summands: List[str] = []
    generators: List[Tuple[str, Matrix]] = []
    for x in M.quiver.vertices:
        identity = field.identity(M.dims[x])
        for k in complement_indices(list(rad.matrices[x].T), M.dims[x], field):
            summands.append(x)
            generators.append((x, identity[:, k]))
    P = projective_sum(a, summands)
    matrices = {}
    for y in M.quiver.vertices:
        columns = []
        for x, g in generators:
            for path in a.basis_paths(x, y):
                columns.append(matmul(M.path_action(path, x), g.reshape(-1, 1), field))
        matrices[y] = hstack(columns, M.dims[y], field) if columns else field.zeros(M.dims[y], 0)
    epi = ModuleMap(P, M, matrices)
    return ProjectiveCover(P, epi, summands)


def syzygy(M: Representation) -> Representation:
    return kernel(projective_cover(M).epi)[0]


def _dimension_guard(M: Representation) -> int:
    return len(M.quiver.vertices) + 1


def projective_dimension(M: Representation) -> int:
    """pd M; the zero module reports 0."""
    n = 0
    current = M
    guard = _dimension_guard(M)
    while not current.is_zero():
        omega = syzygy(current)
        if omega.is_zero():
            return n
        n += 1
        if n > guard:
            raise RuntimeError(f"projective dimension exceeds {guard}; the quiver is not acyclic?")
        current = omega
    return n


def projective_resolution(M: Representation) -> List[List[str]]:
    """Summand vertices of each term P_0, P_1, ... of the minimal projective resolution."""
    terms: List[List[str]] = []
    current = M
    guard = _dimension_guard(M)
    while not current.is_zero():
        cover = projective_cover(current)
        terms.append(cover.summands)
        if len(terms) > guard + 1:
            raise RuntimeError(f"projective resolution longer than {guard}; the quiver is not acyclic?")
        current = kernel(cover.epi)[0]
    return terms


def injective_dimension(M: Representation) -> int:
    """id M = pd of D M over the opposite algebra."""
    return projective_dimension(dual(M))


def injective_envelope(M: Representation) -> InjectiveEnvelope:
    """One I_x per basis vector of soc(M) at x, mapped in by functionals dual to that basis."""
    field = M.field
    a = M.algebra
    _, soc = socle(M)
    summands: List[str] = []
    functionals: List[Tuple[str, Matrix]] = []
    for x in M.quiver.vertices:
        S = soc.matrices[x]
        if S.shape[1] == 0:
            continue
        n = M.dims[x]
        extension = complement_indices(list(S.T), n, field)
        frame = hstack([S, field.identity(n)[:, extension].reshape(n, len(extension))], n, field)
        dual_basis = inverse(frame, field)
        for i in range(S.shape[1]):
            summands.append(x)
            functionals.append((x, dual_basis[i]))
    I = direct_sum([injective(a, x) for x in summands], M.quiver)
    matrices = {}
    for y in M.quiver.vertices:
        rows = []
        for x, phi in functionals:
            for path in a.basis_paths(y, x):
                rows.append(matmul(phi.reshape(1, -1), M.path_action(path, y), field))
        matrices[y] = vstack(rows, M.dims[y], field) if rows else field.zeros(0, M.dims[y])
    return InjectiveEnvelope(I, ModuleMap(M, I, matrices), summands)


def cosyzygy(M: Representation) -> Representation:
    return cokernel(injective_envelope(M).mono)[0]


def injective_dimension_by_coresolution(M: Representation) -> int:
    """id M from a minimal injective coresolution, as a cross-check of the dual route."""
    n = 0
    current = M
    guard = _dimension_guard(M)
    while not current.is_zero():
        omega = cosyzygy(current)
        if omega.is_zero():
            return n
        n += 1
        if n > guard:
            raise RuntimeError(f"injective dimension exceeds {guard}")
        current = omega
    return n


def minimal_presentation(M: Representation) -> MinimalPresentation:
    cover0 = projective_cover(M)
    omega, inclusion = kernel(cover0.epi)
    cover1 = projective_cover(omega)
    d1 = inclusion.compose(cover1.epi)
    return MinimalPresentation(cover1.module, cover0.module, d1, cover1.summands, cover0.summands)


# ---------------------------------------------------------------------------
# Auslander-Reiten translation
# ---------------------------------------------------------------------------

def _summand_offsets(a: BasedAlgebra, summands: Sequence[str], y: str) -> List[int]:
    offsets = [0]
    for x in summands:
        offsets.append(offsets[-1] + a.dim_between(x, y))
    return offsets


def transpose(M: Representation) -> Representation:
    """
    Tr M = coker Hom_A(d1, A) as a module over the opposite algebra.

    Hom_A(P_x, A) is the projective of A^op at x; d1 sends the generator of
    the j-th summand of P1 to elements a_ij of the summands of P0, and
    Hom_A(d1, A) sends the generator of the i-th summand of P0^* to the a_ij.
    """
    a = M.algebra
    presentation = minimal_presentation(M)
    sources, targets = presentation.summands0, presentation.summands1
    elements = {}
    for j, u in enumerate(targets):
        column = _summand_offsets(a, targets, u)[j]
        image_column = presentation.d1.matrices[u][:, column]
        offsets = _summand_offsets(a, sources, u)
        for i, v in enumerate(sources):
            block = image_column[offsets[i]:offsets[i + 1]]
            if len(block) and not is_zero(block):
                elements[(i, j)] = block
    opposite = a.opposite()
    return cokernel(projective_map(opposite, sources, targets, elements))[0]


def ar_translate(M: Representation) -> Representation:
    """tau M = D Tr M."""
    return dual(transpose(M))


def ar_inverse(M: Representation) -> Representation:
    """tau^-1 M = Tr D M."""
    return transpose(dual(M))


def tau_power(M: Representation, n: int) -> Representation:
    """tau^n M for n >= 0, tau^-n for n < 0; stops as soon as the result vanishes."""
    step = ar_translate if n >= 0 else ar_inverse
    current = M
    for _ in range(abs(n)):
        if current.is_zero():
            break
        current = step(current)
    return current


# ---------------------------------------------------------------------------
# Ext and the Euler form
# ---------------------------------------------------------------------------

def ext1_dim(M: Representation, N: Representation) -> int:
    """dim Ext^1(M, N) from 0 -> Hom(M, N) -> Hom(P0, N) -> Hom(Omega M, N) -> Ext^1(M, N) -> 0."""
    cover = projective_cover(M)
    omega = kernel(cover.epi)[0]
    return hom_dim(omega, N) - hom_dim(cover.module, N) + hom_dim(M, N)


def euler_form(quiver: GeneralBoundQuiver, x: Dict[str, int], y: Dict[str, int]) -> int:
    """<x, y> = sum x_v y_v - sum over arrows x_source y_target (hereditary algebras)."""
    if quiver.relations:
        raise ValueError("the Euler form is only defined here for hereditary algebras")
    return (sum(x.get(v, 0) * y.get(v, 0) for v in quiver.vertices)
            - sum(x.get(a.source, 0) * y.get(a.target, 0) for a in quiver.arrows))


# ---------------------------------------------------------------------------
# Endomorphisms, decomposition and isomorphism
# ---------------------------------------------------------------------------

def _total(f: ModuleMap) -> Matrix:
    vertices = f.source.quiver.vertices
    return block_diagonal([f.matrices[v] for v in vertices], f.source.field)


def _trace_rank(endomorphisms: Sequence[ModuleMap], field: FieldSpec) -> int:
    totals = [_total(f) for f in endomorphisms]
    gram = field.zeros(len(totals), len(totals))
    for i, a in enumerate(totals):
        for j, b in enumerate(totals):
            product = matmul(a, b, field)
            gram[i, j] = sum((product[k, k] for k in range(product.shape[0])), field.zero)
    return rank(gram)


def _polynomial_at(coefficients: Sequence[Fraction], matrix: Matrix, field: FieldSpec) -> Matrix:
    n = matrix.shape[0]
    result = field.zeros(n, n)
    for c in coefficients:
        result = matmul(result, matrix, field) + field.identity(n) * field.coerce(c)
    return result


def _split_by(M: Representation, phi: ModuleMap) -> Optional[List[Representation]]:
    """Fitting split along coprime factors of the characteristic polynomial of phi."""
    field = M.field
    total = _total(phi)
    if total.shape[0] == 0:
        return None
    x = sympy.Symbol('x')
    matrix = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in total])
    characteristic = matrix.charpoly(x).as_expr()
    _, factors = sympy.factor_list(characteristic)
    if len(factors) < 2:
        return None
    f, multiplicity = factors[0]
    first = sympy.Poly(f ** multiplicity, x)
    second = sympy.Poly(sympy.quo(characteristic, first.as_expr(), x), x)
    parts = []
    for poly in (first, second):
        coefficients = [Fraction(int(c.p), int(c.q)) for c in poly.all_coeffs()]
        generators = {v: kernel_vectors(_polynomial_at(coefficients, phi.matrices[v], field), field).T
                      for v in M.quiver.vertices}
        parts.append(submodule(M, generators)[0])
    if any(part.is_zero() for part in parts):
        return None
    return parts


def _candidates(basis: Sequence[ModuleMap], budget: int, seed: int,
                high: int = 5) -> Iterable[Tuple[int, ...]]:
    n = len(basis)
    produced = 0
    for k in range(n):
        yield tuple(1 if i == k else 0 for i in range(n))
        produced += 1
    for combo in itertools.islice(spiral_coefficients(n, 2), budget):
        yield combo
        produced += 1
    rng = np.random.default_rng(seed)
    while produced < 2 * n + 2 * budget:
        yield tuple(int(v) for v in rng.integers(-high, high + 1, size=n))
        produced += 1


def is_indecomposable(M: Representation) -> Indecomposability:
    """
    Decide indecomposability where possible.

    Over the rationals, a rank-one trace form on End(M) forces End(M) local;
    otherwise endomorphisms are searched for a characteristic polynomial with
    coprime factors, whose kernels split M.
    """
    if M.is_zero():
        return Indecomposability(Verdict.NO, [])
    endomorphisms = hom_basis(M, M)
    if len(endomorphisms) == 1:
        return Indecomposability(Verdict.YES, [M])
    if M.field.is_prime_field:
        return Indecomposability(Verdict.UNKNOWN)
    if _trace_rank(endomorphisms, M.field) == 1:
        return Indecomposability(Verdict.YES, [M])
    budget = int(get_engine_param('split_search_budget', 64))
    seed = int(get_engine_param('search_seed', 0))
    for coefficients in _candidates(endomorphisms, budget, seed):
        parts = _split_by(M, combine_maps(endomorphisms, coefficients))
        if parts:
            return Indecomposability(Verdict.NO, parts)
    logger.warning(f"Could not decide indecomposability of a module of dimension {M.dimension}")
    return Indecomposability(Verdict.UNKNOWN)


def decompose(M: Representation) -> List[Representation]:
    """Split M into summands; summands whose status stays unknown are returned whole."""
    result = is_indecomposable(M)
    if result.verdict is Verdict.NO:
        return [part for summand in result.summands for part in decompose(summand)]
    return [M] if not M.is_zero() else []


def iso(M: Representation, N: Representation) -> Optional[ModuleMap]:
    """Search Hom(M, N) for an isomorphism; dimension and Hom counts prune first."""
    if M.dimension_vector() != N.dimension_vector():
        return None
    if M.is_zero():
        return ModuleMap(M, N, {v: M.field.zeros(0, 0) for v in M.quiver.vertices})
    maps = hom_basis(M, N)
    if not maps or len(maps) != hom_dim(M, M) or len(maps) != hom_dim(N, N):
        return None
    budget = int(get_engine_param('iso_search_budget', 64))
    seed = int(get_engine_param('search_seed', 0))
    for coefficients in _candidates(maps, budget, seed, high=1000):
        candidate = combine_maps(maps, coefficients)
        if candidate.is_isomorphism():
            return candidate
    return None


def is_isomorphic(M: Representation, N: Representation) -> bool:
    return iso(M, N) is not None


# ---------------------------------------------------------------------------
# Random modules and the text format
# ---------------------------------------------------------------------------

def random_module(a: BasedAlgebra, seed: int = 0, max_summands: int = 3) -> Representation:
    """Cokernel of a random map between sums of projectives, entries in -2..2."""
    rng = np.random.default_rng(seed)
    vertices = list(a.vertices)
    targets = [vertices[k] for k in rng.integers(0, len(vertices), size=int(rng.integers(1, max_summands + 1)))]
    sources = [vertices[k] for k in rng.integers(0, len(vertices), size=int(rng.integers(0, max_summands)))]
    elements = {}
    for j, s in enumerate(sources):
        for i, t in enumerate(targets):
            n = a.dim_between(t, s)
            if n:
                elements[(j, i)] = a.field.vector([int(v) for v in rng.integers(-2, 3, size=n)])
    return cokernel(projective_map(a, sources, targets, elements))[0]


def serialize_module(M: Representation) -> str:
    field = M.field
    lines = [f"dim {v} {M.dims[v]}" for v in M.quiver.vertices]
    for arrow in M.quiver.arrows:
        matrix = M.maps[arrow.label]
        if matrix.shape[0] and matrix.shape[1]:
            rows = " ; ".join(" ".join(field.format_scalar(x) for x in row) for row in matrix)
            lines.append(f"map {arrow.label} {rows}")
    return "\n".join(lines) + "\n"


def parse_module(text: str, quiver: GeneralBoundQuiver) -> Representation:
    """
    Parse `dim V n` and `map ARROW r ; r ; ...` lines; '#' starts a comment.

    Raises:
        ParseError: On unknown vertices or arrows, bad scalars or wrong shapes
    """
    field = quiver.field
    dims: Dict[str, int] = {}
    rows_by_arrow: Dict[str, Tuple[int, List[List[Any]]]] = {}
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0]
        words = line.split()
        if not words:
            continue
        column = raw.index(words[0]) + 1
        keyword = words[0]
        if keyword == 'dim':
            if len(words) != 3 or words[1] not in quiver.vertices:
                raise ParseError("expected 'dim VERTEX N' with a known vertex", line_no, column)
            try:
                dims[words[1]] = int(words[2])
            except ValueError:
                raise ParseError(f"malformed dimension {words[2]!r}", line_no, raw.index(words[2]) + 1)
            if dims[words[1]] < 0:
                raise ParseError("dimensions must be non-negative", line_no, raw.index(words[2]) + 1)
        elif keyword == 'map':
            if len(words) < 3 or words[1] not in quiver.arrow_map:
                raise ParseError("expected 'map ARROW row ; row ...' with a known arrow", line_no, column)
            body = line.split(None, 2)[2]
            try:
                rows = [[field.parse_scalar(x) for x in chunk.split()] for chunk in body.split(';')]
            except PresentationError as e:
                raise ParseError(str(e), line_no, column)
            rows_by_arrow[words[1]] = (line_no, rows)
        else:
            raise ParseError(f"unknown keyword {keyword!r}", line_no, column)
    maps = {}
    for label, (line_no, rows) in rows_by_arrow.items():
        arrow = quiver.arrow_map[label]
        shape = (dims.get(arrow.target, 0), dims.get(arrow.source, 0))
        if len(rows) != shape[0] or any(len(row) != shape[1] for row in rows):
            raise ParseError(f"map {label} must be {shape[0]} x {shape[1]}", line_no, 1)
        maps[label] = field.matrix(rows, *shape)
    module = Representation(quiver, dims, maps)
    problems = check(module)
    if problems:
        raise ParseError("; ".join(problems), 1, 1)
    return module
