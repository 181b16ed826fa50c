#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Witness Lab

Constructors for the explicit module families that certify the
classification: each returns a Witness holding the (small) bound quiver the
module lives on, the module itself and the homological contract it is expected
to meet.

Families:
1. no_branch_in_ideal - r length-two branches linked by relations, s direct arrows
2. branch_in_ideal - one branch in I, m >= 2 direct arrows
3. one_surviving_branch - one branch in I, a single direct arrow (the module N)
4. two_branches_in_ideal - two relation-truncated branches and a direct arrow
5. simply_connected_family - the infinite family on t >= 4 length-two branches
6. segment - the modules supported around a segment of the branch in I,
   with segment_obstruction naming the zero path that blocks one
7. rad_p0 - the radical of the projective at the source
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .tools.algebra_core import algebra_for
from .tools.errors import WitnessConstraintError
from .tools.exact_linalg import FieldSpec, RATIONAL, Matrix, is_zero, matmul, primitive_integer_vector
from .tools.ideal_analysis import IdealClosure, close_ideal
from .tools.quiver_model import (
    GeneralBoundQuiver, SINK, SOURCE, ToupiePresentation, make_presentation, to_general,
)
from .tools.rep_engine import (
    Representation, check, injective_dimension, is_isomorphic, projective, projective_dimension,
    projective_resolution, radical,
)

logger = logging.getLogger(__name__)


class WitnessFamily(Enum):
    """Enumeration of the witness module families."""
    NO_BRANCH_IN_IDEAL = "no_branch_in_ideal"
    BRANCH_IN_IDEAL = "branch_in_ideal"
    ONE_SURVIVING_BRANCH = "one_surviving_branch"
    TWO_BRANCHES_IN_IDEAL = "two_branches_in_ideal"
    SIMPLY_CONNECTED_FAMILY = "simply_connected_family"
    SEGMENT = "segment"
    RAD_P0 = "rad_p0"


@dataclass(frozen=True)
class Contract:
    """Lower bounds the witness must meet; None means no requirement."""
    pd_min: Optional[int] = None
    id_min: Optional[int] = None


@dataclass
class WitnessSpec:
    family: WitnessFamily
    parameters: Dict[str, Any] = dataclass_field(default_factory=dict)
    contract: Contract = Contract()

    def to_dict(self) -> Dict[str, Any]:
        return {
            'family': self.family.value,
            'parameters': {k: _plain(v) for k, v in self.parameters.items()},
            'contract': {'pd_min': self.contract.pd_min, 'id_min': self.contract.id_min},
        }


@dataclass
class Witness:
    spec: WitnessSpec
    quiver: GeneralBoundQuiver
    module: Representation
    presentation: Optional[ToupiePresentation] = None


def _plain(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if value is None or isinstance(value, (bool, int, str)):
        return value
    return str(value)


def _matrix(field: FieldSpec, rows: Sequence[Sequence[Any]]) -> Matrix:
    return field.matrix([[field.coerce(x) for x in row] for row in rows])


def _scalar(field: FieldSpec, value: Any) -> Any:
    return field.coerce(Fraction(value) if isinstance(value, (int, Fraction)) else value)


def _assemble(spec: WitnessSpec, p: ToupiePresentation, dims: Dict[str, int],
              maps: Dict[str, Matrix]) -> Witness:
    quiver = to_general(p)
    module = Representation(quiver, dims, maps)
    problems = check(module)
    if problems:
        raise WitnessConstraintError(f"{spec.family.value} module violates its relations: {'; '.join(problems)}")
    logger.debug(f"Built {spec.family.value} witness with dims {module.dimension_vector()}")
    return Witness(spec, quiver, module, p)


def _family_index(lam: Any) -> int:
    """A positive integer family index; accepts ints and integral strings or fractions."""
    try:
        value = Fraction(str(lam))
    except (TypeError, ValueError):
        raise WitnessConstraintError(f"the family index must be a positive integer, got {lam!r}")
    if value.denominator != 1 or value < 1:
        raise WitnessConstraintError(f"the family index must be a positive integer, got {lam}")
    return int(value)


def _full_support_null_vector(closure: IdealClosure, r: int) -> List[Any]:
    """z in k^r with every entry nonzero and sum_i c_i z_i = 0 for every relation c."""
    field = closure.field
    z = [field.zero] * r
    for row in closure.W.annihilator().basis:
        head = list(row[:r])
        for c in range(1, r + 2):
            trial = [a + field.coerce(c) * b for a, b in zip(z, head)]
            if all(t != 0 for t, a, b in zip(trial, z, head) if a != 0 or b != 0):
                z = trial
                break
    missing = [i + 1 for i, v in enumerate(z) if v == 0]
    if missing:
        raise WitnessConstraintError(f"branches {missing} are forced into the ideal by the relations")
    return z


def no_branch_in_ideal(r: int = 2, s: int = 1, lam: Any = 1,
                       relations: Optional[Sequence[Sequence[Any]]] = None,
                       field: FieldSpec = RATIONAL) -> Witness:
    """
    N_n on r length-two branches joined by relations and s direct arrows.

    With n = lam, N_n carries k^(n+1) at 0 and inf and k^n at each i.1. Branch
    i leaves 0 through z_i (I_n | 0) and enters inf through (I_n | 0)^T, z a
    full-support solution of the relations; the first direct arrow is the
    cyclic shift v_1 -> u_(n+1), v_j -> u_(j-1). Relative to that arrow every
    composite w_i is a single nilpotent Jordan block of size n + 1, so N_n is
    indecomposable. The vector v_(n+1) is killed on every branch and u_(n+1)
    is missed by every branch, which gives pd = id = 2; the last term of the
    minimal projective resolution is P_inf^d, d the number of independent
    relations.

    Args:
        r: Number of linked length-two branches (r >= 2)
        s: Number of direct arrows (s >= 1)
        lam: The family index n >= 1
        relations: Relation vectors over the r linked branches; defaults to the
            first r - 1 rows of the Vandermonde matrix on 1..r
        field: Scalar field

    Returns:
        Witness over the quiver with lengths (2, ..., 2, 1, ..., 1)
    """
    if r < 2 or s < 1:
        raise WitnessConstraintError(f"need r >= 2 and s >= 1, got r={r}, s={s}")
    if relations is None:
        relations = [[(j + 1) ** k for j in range(r)] for k in range(r - 1)]
    if any(len(v) != r for v in relations):
        raise WitnessConstraintError(f"relation vectors must have {r} entries")
    rows = [list(v) + [0] * s for v in relations]
    p = make_presentation([2] * r + [1] * s, combinations=rows, field=field)
    closure = close_ideal(p)
    d = closure.W.dim
    if not 1 <= d <= r - 1:
        raise WitnessConstraintError(f"relations must span a space of dimension 1..{r - 1}, got {d}")
    n = _family_index(lam)
    z = _full_support_null_vector(closure, r)
    spec = WitnessSpec(WitnessFamily.NO_BRANCH_IN_IDEAL,
                       {'r': r, 's': s, 'lambda': n, 'm': closure.m, 'resolution_k': d},
                       Contract(pd_min=2, id_min=2))
    shift = [[1 if (row, col) == (n, 0) or row == col - 1 else 0 for col in range(n + 1)] for row in range(n + 1)]
    dims = {SOURCE: n + 1, SINK: n + 1}
    maps = {f"a{r + 1}_1": _matrix(field, shift)}
    for i in range(1, r + 1):
        dims[f"{i}.1"] = n
        maps[f"a{i}_1"] = _matrix(field, [[z[i - 1] if row == col else 0 for col in range(n + 1)] for row in range(n)])
        maps[f"a{i}_2"] = _matrix(field, [[1 if row == col else 0 for col in range(n)] for row in range(n + 1)])
    return _assemble(spec, p, dims, maps)


def resolution_rank(witness: Witness) -> int:
    """Number of summands in the last term of the module's minimal projective resolution."""
    terms = projective_resolution(witness.module)
    return len(terms[-1]) if terms else 0


def branch_in_ideal(lam: Any = 1, m: int = 2, length: int = 2,
                    monomials: Optional[Sequence[Sequence[int]]] = None,
                    field: FieldSpec = RATIONAL) -> Witness:
    """k at 0 and inf, zero along branch 1, direct arrows carrying 1, lambda, 0, ..."""
    if m < 2 or length < 2:
        raise WitnessConstraintError(f"need m >= 2 and a branch of length >= 2, got m={m}, length={length}")
    monomials = [(1, 0, length)] if monomials is None else [tuple(x) for x in monomials]
    p = make_presentation([length] + [1] * m, monomials=monomials, field=field)
    closure = close_ideal(p)
    if 1 not in closure.branches_in_I:
        raise WitnessConstraintError("branch 1 must lie in the ideal")
    lam = _scalar(field, lam)
    spec = WitnessSpec(WitnessFamily.BRANCH_IN_IDEAL, {'lambda': lam, 'm': m, 'length': length},
                       Contract(pd_min=2, id_min=2))
    values = [field.one, lam] + [field.zero] * (m - 2)
    maps = {f"a{k + 2}_1": _matrix(field, [[v]]) for k, v in enumerate(values)}
    return _assemble(spec, p, {SOURCE: 1, SINK: 1}, maps)


def one_surviving_branch(length: int = 2, monomials: Optional[Sequence[Sequence[int]]] = None,
                         field: FieldSpec = RATIONAL) -> Witness:
    """The module N: k at 0 and inf joined by the single surviving direct arrow."""
    if length < 2:
        raise WitnessConstraintError(f"the branch in the ideal needs length >= 2, got {length}")
    monomials = [(1, 0, length)] if monomials is None else [tuple(x) for x in monomials]
    p = make_presentation([length, 1], monomials=monomials, field=field)
    closure = close_ideal(p)
    if closure.m != 1 or 1 not in closure.branches_in_I:
        raise WitnessConstraintError("need m = 1 with branch 1 in the ideal")
    spec = WitnessSpec(WitnessFamily.ONE_SURVIVING_BRANCH, {'length': length}, Contract(pd_min=2, id_min=2))
    return _assemble(spec, p, {SOURCE: 1, SINK: 1}, {"a2_1": _matrix(field, [[1]])})


def two_branches_in_ideal(lam: Any = 1, length1: int = 3, length2: int = 3,
                          field: FieldSpec = RATIONAL) -> Witness:
    """
    N_lambda with k^2 at 0 and inf over two branches cut by the relations 0 -> i.1 -> i.2.

    The first vertex of each branch carries k through f = (0 1) and h = (1 0);
    the last one feeds inf through g = (1 1)^T and j = (1 lambda)^T.
    """
    if length1 < 3 or length2 < 3:
        raise WitnessConstraintError(f"both branches need length >= 3, got {length1}, {length2}")
    p = make_presentation([length1, length2, 1], monomials=[(1, 0, 2), (2, 0, 2)], field=field)
    lam = _scalar(field, lam)
    spec = WitnessSpec(WitnessFamily.TWO_BRANCHES_IN_IDEAL,
                       {'lambda': lam, 'length1': length1, 'length2': length2},
                       Contract(pd_min=2, id_min=2))
    dims = {SOURCE: 2, SINK: 2, "1.1": 1, "2.1": 1, f"1.{length1 - 1}": 1, f"2.{length2 - 1}": 1}
    maps = {
        "a1_1": _matrix(field, [[0, 1]]),
        "a2_1": _matrix(field, [[1, 0]]),
        f"a1_{length1}": _matrix(field, [[1], [1]]),
        f"a2_{length2}": _matrix(field, [[1], [lam]]),
        "a3_1": field.identity(2),
    }
    return _assemble(spec, p, dims, maps)


def simply_connected_family(relations: Sequence[Sequence[Any]], lam: Any = 1,
                            field: FieldSpec = RATIONAL) -> Witness:
    """
    N_lambda on t >= 4 length-two branches bound by the given relations, m >= 3.

    Branches 3 and 4 carry the two nilpotent arms whose kernels and images in
    k^2 pin down lambda; their composites vanish. The remaining branches carry
    c_i times the identity out of 0 and the identity into inf, for c a nonzero
    solution of the relations with c_3 = c_4 = 0, so every relation holds.
    Such a c exists exactly because m >= 3.

    Args:
        relations: Relation vectors of length t (a single vector is accepted)
        lam: Nonzero family parameter
        field: Scalar field

    Returns:
        Witness over the quiver with lengths (2, ..., 2)
    """
    if relations and not isinstance(relations[0], (list, tuple)):
        relations = [relations]
    rows = [list(v) for v in relations]
    if not rows or len({len(v) for v in rows}) != 1:
        raise WitnessConstraintError("need relation vectors of one common length")
    t = len(rows[0])
    if t < 4:
        raise WitnessConstraintError(f"need t >= 4 branches, got {t}")
    lam = _scalar(field, lam)
    if lam == 0:
        raise WitnessConstraintError("lambda must be nonzero")
    p = make_presentation([2] * t, combinations=rows, field=field)
    closure = close_ideal(p)
    if closure.m < 3:
        raise WitnessConstraintError(f"need m >= 3, got m = {closure.m}")
    free = closure.W.annihilator().restrict_to_coords([i for i in range(t) if i not in (2, 3)])
    c = list(free.basis[0])
    spec = WitnessSpec(WitnessFamily.SIMPLY_CONNECTED_FAMILY,
                       {'t': t, 'm': closure.m, 'relations': [list(v) for v in closure.W.basis], 'lambda': lam,
                        'scalars': c},
                       Contract())
    identity = field.identity(2)
    dims = {SOURCE: 2, SINK: 2, "3.1": 2, "4.1": 2}
    maps = {
        "a3_1": _matrix(field, [[1, 1], [0, 0]]),
        "a4_1": _matrix(field, [[1, lam], [0, 0]]),
        "a3_2": _matrix(field, [[0, 1], [0, 0]]),
        "a4_2": _matrix(field, [[0, 0], [0, 1]]),
    }
    for i, scalar in enumerate(c, 1):
        if scalar != 0:
            dims[f"{i}.1"] = 2
            maps[f"a{i}_1"] = identity * scalar
            maps[f"a{i}_2"] = identity
    return _assemble(spec, p, dims, maps)


def _branch_composite(maps: Dict[str, Matrix], labels: Sequence[str], field: FieldSpec) -> Optional[Matrix]:
    """Composite along consecutive arrows; None when an arrow carries the zero space."""
    composite = None
    for label in labels:
        if label not in maps:
            return None
        composite = maps[label] if composite is None else matmul(maps[label], composite, field)
    return composite


def _kill_zero_paths(closure: IdealClosure, b: int, maps: Dict[str, Matrix], field: FieldSpec) -> None:
    """Replace the last scalar arrow of every zero path on branch b that still acts by a nonzero map."""
    q = closure.presentation.quiver
    for start, end in sorted(closure.zero_subpaths[b - 1], key=lambda path: (path[1] - path[0], path)):
        labels = [q.arrow_label(b, j) for j in range(start + 1, end + 1)]
        composite = _branch_composite(maps, labels, field)
        if composite is None or is_zero(composite):
            continue
        scalar = [label for label in labels if maps[label].shape == (1, 1)]
        if not scalar:
            raise WitnessConstraintError(
                f"the zero path from position {start} to {end} of branch {b} runs inside the k^2 segment")
        maps[scalar[-1]] = _matrix(field, [[0]])


def segment(p: ToupiePresentation, x: str, y: str) -> Witness:
    """
    D_xy for two distinct internal vertices of the unique branch b in I (m = 1).

    If x comes before y the segment [x, y] carries 0; otherwise the segment
    [y, x] carries k^2, entered at y in the first coordinate and left at x from
    the second. Every other vertex carries k with identities, except that the
    last arrow of each branch i != b carries c_i, c spanning the annihilator
    of W. A zero path of b that would still act nonzero gets 0 on its last
    scalar arrow; one lying inside the k^2 segment raises
    WitnessConstraintError.
    """
    closure = close_ideal(p)
    if closure.m != 1 or len(closure.branches_in_I) != 1:
        raise WitnessConstraintError("segment modules need m = 1 and exactly one branch in the ideal")
    if x == y:
        raise WitnessConstraintError("segment modules need x != y")
    (b,) = tuple(closure.branches_in_I)
    q = p.quiver
    located = [q.locate(v) for v in (x, y)]
    if any(loc is None or loc[0] != b for loc in located):
        raise WitnessConstraintError(f"{x} and {y} must be internal vertices of branch {b}")
    px, py = located[0][1], located[1][1]
    field = p.field
    c = primitive_integer_vector(closure.W.annihilator().basis[0])

    forward = px < py
    low, high = (px, py) if forward else (py, px)
    on_segment = set(range(low, high + 1))
    dims: Dict[str, int] = {SOURCE: 1, SINK: 1}
    maps: Dict[str, Matrix] = {}
    for i, length in enumerate(q.lengths, 1):
        for j in range(1, length):
            vertex = q.vertex_at(i, j)
            dims[vertex] = (0 if forward else 2) if i == b and j in on_segment else 1
        for j in range(1, length + 1):
            label = q.arrow_label(i, j)
            if i != b:
                maps[label] = _matrix(field, [[c[i - 1] if j == length else 1]])
                continue
            before, after = j - 1 in on_segment, j in on_segment
            if forward:
                if not before and not after:
                    maps[label] = _matrix(field, [[1]])
            elif after and not before:
                maps[label] = _matrix(field, [[1], [0]])
            elif before and not after:
                maps[label] = _matrix(field, [[0, 1]])
            elif before and after:
                maps[label] = field.identity(2)
            else:
                maps[label] = _matrix(field, [[1]])
    _kill_zero_paths(closure, b, maps, field)
    spec = WitnessSpec(WitnessFamily.SEGMENT, {'x': x, 'y': y, 'branch': b, 'annihilator': list(c)}, Contract())
    return _assemble(spec, p, dims, maps)


def segment_obstruction(p: ToupiePresentation, x: str, y: str) -> Optional[Tuple[int, int]]:
    """
    A zero path of the branch in I that keeps D_xy from being a module, or None.

    Only the k^2 orientation can be blocked: a zero path whose arrows all touch
    the segment [y, x] acts through inclusions and identities unless it enters
    at y and leaves at x.
    """
    closure = close_ideal(p)
    if len(closure.branches_in_I) != 1:
        return None
    (b,) = tuple(closure.branches_in_I)
    located = [p.quiver.locate(v) for v in (x, y)]
    if any(loc is None or loc[0] != b for loc in located):
        return None
    px, py = located[0][1], located[1][1]
    if px <= py:
        return None
    low, high = py, px
    for start, end in sorted(closure.zero_subpaths[b - 1]):
        inside = low - 1 <= start and end <= high + 1
        if inside and (start, end) != (low - 1, high + 1):
            return start, end
    return None


def rad_p0(quiver: GeneralBoundQuiver) -> Witness:
    """M = rad P_0, the module the source vertex is a one-point extension by."""
    module = radical(projective(algebra_for(quiver), SOURCE))[0]
    return Witness(WitnessSpec(WitnessFamily.RAD_P0), quiver, module)


def evaluate_contract(witness: Witness) -> Dict[str, Any]:
    """Observed relation check and homological dimensions against the contract."""
    contract = witness.spec.contract
    module = witness.module
    relations_hold = not check(module)
    pd = projective_dimension(module)
    injective = injective_dimension(module)
    satisfied = (relations_hold
                 and (contract.pd_min is None or pd >= contract.pd_min)
                 and (contract.id_min is None or injective >= contract.id_min))
    return {
        'family': witness.spec.family.value,
        'relations_hold': relations_hold,
        'pd': pd,
        'id': injective,
        'pd_min': contract.pd_min,
        'id_min': contract.id_min,
        'satisfied': satisfied,
    }


def pairwise_non_isomorphic(witnesses: Sequence[Witness]) -> bool:
    """True when no two members of a family (same quiver) are isomorphic."""
    modules = [w.module for w in witnesses]
    return all(not is_isomorphic(modules[i], modules[j])
               for i in range(len(modules)) for j in range(i + 1, len(modules)))


FAMILY_BUILDERS = {
    WitnessFamily.NO_BRANCH_IN_IDEAL: no_branch_in_ideal,
    WitnessFamily.BRANCH_IN_IDEAL: branch_in_ideal,
    WitnessFamily.ONE_SURVIVING_BRANCH: one_surviving_branch,
    WitnessFamily.TWO_BRANCHES_IN_IDEAL: two_branches_in_ideal,
    WitnessFamily.SIMPLY_CONNECTED_FAMILY: simply_connected_family,
}


def build_witness(family: str, **parameters: Any) -> Witness:
    """Build a presentation-free family by tag; segment and rad_p0 need an input quiver."""
    try:
        tag = WitnessFamily(family)
    except ValueError:
        raise WitnessConstraintError(f"unknown witness family: {family}")
    if tag not in FAMILY_BUILDERS:
        raise WitnessConstraintError(f"{family} is built from an input presentation")
    try:
        return FAMILY_BUILDERS[tag](**parameters)
    except TypeError as e:
        raise WitnessConstraintError(f"bad parameters for {family}: {e}")


def family_members(family: str, lambdas: Sequence[Any], **parameters: Any) -> List[Witness]:
    return [build_witness(family, lam=lam, **parameters) for lam in lambdas]
