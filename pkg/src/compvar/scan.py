"""Exhaustive enumeration over small finite fields: point lists, orbit
censuses, and rigid-complex censuses.

Results at this scale are evidence gathered over a finite field, not proof
of the corresponding statements over an algebraically closed field, and the
report types say so.  Enumeration order is deterministic: degrees run from
the top of the window down; within a degree the module action matrices for
the non-identity basis elements come first (basis order, row-major), then
the differentials (again degrees descending, row-major); every coordinate
runs through the field elements in their canonical order with the last
coordinate varying fastest.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import FDAlgebra
from .complexes import (ComplexPoint, GroupElement, act, classify,
                        complexes_isomorphic, validate_point)
from .errors import (BudgetExceeded, UnsupportedCharacteristic,
                     ValidationFailure)
from .fields import Field
from .linalg import Matrix
from .modules import ModuleRep, validate_module, zero_module
from .tangent import corollary8_check, is_rigid


@dataclass(frozen=True)
class ScanBudget:
    """Hard ceilings for enumeration work plus the seed used by any
    randomized isomorphism searches."""

    max_points: int = 10 ** 4
    max_group_elements: int = 10 ** 4
    seed: int = 0

    def __post_init__(self):
        if self.max_points <= 0 or self.max_group_elements <= 0:
            raise ValidationFailure("budget bounds must be positive")


# -- point enumeration ---------------------------------------------------------

def free_coordinate_count(algebra: FDAlgebra, dims, pinned: bool = False) -> int:
    """Number of matrix entries that actually vary.  The identity action is
    forced, so a d-dimensional term contributes (s-1)*d^2 module entries;
    each differential contributes d_{i-1}*d_i.  ``dims`` is top degree
    first."""
    s = algebra.dim
    total = 0
    if not pinned:
        total += sum((s - 1) * d * d for d in dims)
    total += sum(dims[k] * dims[k + 1] for k in range(len(dims) - 1))
    return total


def _module_candidates(algebra: FDAlgebra, d: int) -> list:
    """Every valid module structure of dimension d, in enumeration order."""
    field = algebra.field
    if d == 0:
        return [zero_module(algebra)]
    s = algebra.dim
    per_matrix = d * d
    elements = field.elements()
    found = []
    for combo in itertools.product(elements, repeat=(s - 1) * per_matrix):
        actions = [Matrix.identity(field, d)]
        for j in range(s - 1):
            chunk = combo[j * per_matrix:(j + 1) * per_matrix]
            actions.append(Matrix.from_flat(field, d, d, chunk))
        m = ModuleRep(algebra, d, tuple(actions))
        if validate_module(m) is None:
            found.append(m)
    return found


def enumerate_points(algebra: FDAlgebra, dims, budget: ScanBudget,
                     pinned_modules=None) -> list:
    """All points of the complex variety with the given dimension vector
    (top degree first, window bottom at degree 0), optionally with the
    module structures pinned (same order as ``dims``).

    Raises BudgetExceeded -- with the exact candidate count attached --
    before doing any work if the coordinate grid is larger than
    ``budget.max_points``.  Every returned point satisfies the variety
    conditions; the list order is the deterministic coordinate order."""
    field = algebra.field
    if field.is_rational:
        raise UnsupportedCharacteristic(
            "point enumeration requires a finite base field")
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise ValidationFailure("dimension vector must be non-empty")
    if any(d < 0 for d in dims):
        raise ValidationFailure("dimension vector entries must be non-negative")
    q = field.p
    free = free_coordinate_count(algebra, dims,
                                 pinned=pinned_modules is not None)
    count = q ** free
    if count > budget.max_points:
        raise BudgetExceeded(
            f"enumeration grid has {count} candidate points "
            f"(budget {budget.max_points})", count=count)

    if pinned_modules is not None:
        pinned_modules = tuple(pinned_modules)
        if len(pinned_modules) != len(dims):
            raise ValidationFailure(
                "pinned modules must match the dimension vector")
        for mod, d in zip(pinned_modules, dims):
            if mod.algebra != algebra or mod.dim != d:
                raise ValidationFailure("pinned module has the wrong shape")
            if validate_module(mod) is not None:
                raise ValidationFailure("pinned module fails its conditions")
        per_degree = [[mod] for mod in pinned_modules]
    else:
        per_degree = [_module_candidates(algebra, d) for d in dims]

    # differential k (top-down) maps the term of dims[k] into the term of
    # dims[k+1], so its matrix is dims[k+1] x dims[k]
    diff_shapes = [(dims[k + 1], dims[k]) for k in range(len(dims) - 1)]
    total_diff = sum(r * c for r, c in diff_shapes)
    elements = field.elements()
    points = []
    for module_choice in itertools.product(*per_degree):
        terms = tuple(reversed(module_choice))
        for combo in itertools.product(elements, repeat=total_diff):
            blocks = []
            pos = 0
            for rows, cols in diff_shapes:
                blocks.append(Matrix.from_flat(
                    field, rows, cols, combo[pos:pos + rows * cols]))
                pos += rows * cols
            candidate = ComplexPoint(algebra, 0, terms,
                                     tuple(reversed(blocks)))
            if validate_point(candidate) is None:
                points.append(candidate)
    return points


# -- the acting group ----------------------------------------------------------

def general_linear_order(q: int, d: int) -> int:
    out = 1
    for k in range(d):
        out *= q ** d - q ** k
    return out


def group_order(field: Field, dims) -> int:
    """Order of the product of general linear groups acting on the window."""
    if field.is_rational:
        raise UnsupportedCharacteristic("the acting group is finite only "
                                        "over a finite field")
    out = 1
    for d in dims:
        out *= general_linear_order(field.p, d)
    return out


def _invertible_matrices(field: Field, d: int) -> list:
    if d == 0:
        return [Matrix.zeros(field, 0, 0)]
    out = []
    for combo in itertools.product(field.elements(), repeat=d * d):
        m = Matrix.from_flat(field, d, d, combo)
        if m.is_invertible():
            out.append(m)
    return out


def enumerate_group(field: Field, dims, budget: ScanBudget) -> list:
    """Every group element for the window (degrees top..0, identity outside).
    Raises BudgetExceeded when the order tops the budget."""
    order = group_order(field, dims)
    if order > budget.max_group_elements:
        raise BudgetExceeded(
            f"acting group has {order} elements "
            f"(budget {budget.max_group_elements})", count=order)
    top = len(dims) - 1
    per_degree = [_invertible_matrices(field, d) for d in dims]
    out = []
    for choice in itertools.product(*per_degree):
        comps = tuple((top - k, g) for k, g in enumerate(choice)
                      if dims[k] > 0)
        out.append(GroupElement(comps))
    return out


# -- censuses ------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitCensus:
    """Partition of a point list into isomorphism classes.

    ``classes`` holds sorted index tuples into the input list, ordered by
    first member; ``representatives`` is the first point of each class.
    ``group_checked`` records whether the partition was independently
    recomputed by brute-forcing the group action (done whenever the group
    fits the budget); the two partitions are required to agree."""

    point_count: int
    classes: tuple
    representatives: tuple
    group_order: int
    group_checked: bool

    @property
    def class_count(self) -> int:
        return len(self.classes)


def _iso_partition(points, seed: int) -> list:
    classes = []
    reps = []
    for idx, p in enumerate(points):
        placed = False
        for c, rep in enumerate(reps):
            ws = complexes_isomorphic(rep, p, seed=seed)
            if ws.found:
                classes[c].append(idx)
                placed = True
                break
            if not ws.certain:
                raise BudgetExceeded(
                    "isomorphism search was inconclusive; the census "
                    "partition would not be trustworthy")
        if not placed:
            classes.append([idx])
            reps.append(p)
    return [tuple(c) for c in classes]


def _orbit_partition(points, group) -> list:
    """Partition by explicit group action: i ~ j iff some g carries point i
    to point j on the nose."""
    n = len(points)
    assigned = [None] * n
    classes = []
    for i in range(n):
        if assigned[i] is not None:
            continue
        images = set()
        for g in group:
            images.add(act(g, points[i]))
        members = [j for j in range(n)
                   if assigned[j] is None and points[j] in images]
        label = len(classes)
        for j in members:
            assigned[j] = label
        classes.append(tuple(members))
    return classes


def orbit_census(points, algebra: FDAlgebra, dims, budget: ScanBudget) -> OrbitCensus:
    """Group the points into isomorphism classes; isomorphism witnesses are
    exactly group elements carrying one point to the other, so the classes
    are the orbits.  When the acting group fits ``max_group_elements`` the
    partition is re-derived by brute force over the group and the two must
    coincide."""
    points = list(points)
    dims = tuple(int(d) for d in dims)
    for p in points:
        if p.algebra != algebra:
            raise ValidationFailure("census point over the wrong algebra")
        if p.dims() != dims:
            raise ValidationFailure("census point with the wrong dimension vector")
    classes = _iso_partition(points, budget.seed)
    order = group_order(algebra.field, dims)
    checked = order <= budget.max_group_elements
    if checked and points:
        group = enumerate_group(algebra.field, dims, budget)
        brute = _orbit_partition(points, group)
        if {frozenset(c) for c in classes} != {frozenset(c) for c in brute}:
            raise ValidationFailure(
                "isomorphism classes disagree with brute-force orbits "
                f"({len(classes)} vs {len(brute)})")
    reps = tuple(points[c[0]] for c in classes)
    return OrbitCensus(len(points), tuple(classes), reps, order, checked)


@dataclass(frozen=True)
class RigidCensus:
    """Orbit census refined by rigidity.

    ``rigid_classes`` indexes into ``census.classes``; a class counts as
    rigid when its representative is almost projective with no degree-one
    self-maps in the homotopy category.  Every rigid representative is also
    required to have an orbit of full tangent dimension."""

    census: OrbitCensus
    almost_projective_classes: tuple
    rigid_classes: tuple

    @property
    def rigid_class_count(self) -> int:
        return len(self.rigid_classes)


def rigid_census(algebra: FDAlgebra, dims, budget: ScanBudget,
                 pinned_modules=None) -> RigidCensus:
    """Enumerate the variety, partition into orbits, and flag the rigid
    classes.  Rigidity and projectivity are isomorphism invariants, so they
    are decided on class representatives."""
    points = enumerate_points(algebra, dims, budget, pinned_modules)
    census = orbit_census(points, algebra, dims, budget)
    almost = []
    rigid = []
    for c, rep in enumerate(census.representatives):
        if not classify(rep).is_almost_projective:
            continue
        almost.append(c)
        if is_rigid(rep):
            if not corollary8_check(rep):
                raise ValidationFailure(
                    "rigid class has a positive-dimensional tangent "
                    f"quotient (class {c})")
            rigid.append(c)
    return RigidCensus(census, tuple(almost), tuple(rigid))
