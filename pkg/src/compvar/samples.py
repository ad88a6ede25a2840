"""Standard small examples used by the test suite and shipped CLI fixtures.

Everything here is built through the public constructors, so these also act
as smoke tests for the construction code paths.
"""

from __future__ import annotations

from .algebra import FDAlgebra, QuiverPresentation, path_algebra
from .complexes import ComplexPoint, make_complex, stalk
from .fields import Field
from .linalg import Matrix
from .modules import (ModuleRep, hom_matrices, indecomposable_projectives,
                      make_module, regular_module, simple_modules)


def base_field_algebra(field: Field) -> FDAlgebra:
    """The field itself as an algebra: one vertex, no arrows."""
    return path_algebra(QuiverPresentation(1, (), (), 1), field)


def dual_numbers(field: Field) -> FDAlgebra:
    """K[x]/(x^2): one vertex, one loop x, relation x*x, bound 2."""
    q = QuiverPresentation(1, ((0, 0, "x"),), ((((0, 0), 1),),), 2)
    return path_algebra(q, field)


def a2_algebra(field: Field) -> FDAlgebra:
    """Path algebra of the quiver 1 -> 2 (arrow a), no relations.

    Basis (1, e2, a); the other vertex idempotent is e1 = 1 - e2.  With path
    products composed like functions, Ext^1(S_1, S_2) = K and
    Ext^1(S_2, S_1) = 0.
    """
    q = QuiverPresentation(2, ((0, 1, "a"),), (), 2)
    return path_algebra(q, field)


def two_loop_truncated(field: Field) -> FDAlgebra:
    """K<x,y>/(x^2, y^2, xy, yx): local, radical square zero, dim 3."""
    q = QuiverPresentation(
        1, ((0, 0, "x"), (0, 0, "y")),
        ((((0, 0), 1),), (((1, 1), 1),), (((0, 1), 1),), (((1, 0), 1),)),
        2)
    return path_algebra(q, field)


# -- modules ------------------------------------------------------------------

def simple_over_dual(field: Field) -> ModuleRep:
    """The one-dimensional module over K[x]/(x^2) where x acts by zero."""
    a = dual_numbers(field)
    return make_module(a, [Matrix.identity(field, 1), Matrix.zeros(field, 1, 1)])


# -- complexes ----------------------------------------------------------------

def axa_complex(field: Field) -> ComplexPoint:
    """(A --*x--> A) over the dual numbers, degrees 1 and 0.

    The differential is right multiplication by x, the generic A-linear
    endomorphism of the regular module; both homology spaces have
    dimension one.
    """
    a = dual_numbers(field)
    reg = regular_module(a)
    d = a.right_mult_matrix(a.basis_vec(1))
    return make_complex(a, 0, (reg, reg), (d,))


def contractible_pair(field: Field) -> ComplexPoint:
    """(A --id--> A) over the dual numbers: projective and acyclic."""
    a = dual_numbers(field)
    reg = regular_module(a)
    return make_complex(a, 0, (reg, reg), (Matrix.identity(field, a.dim),))


def regular_stalk(a: FDAlgebra, degree: int = 0) -> ComplexPoint:
    """The regular module concentrated in one degree."""
    return stalk(regular_module(a), degree)


def p2_to_p1_complex(field: Field) -> ComplexPoint:
    """(P_2 -> P_1) over the path algebra of 1 -> 2, degrees 1 and 0,
    with the canonical nonzero map; both terms projective."""
    a = a2_algebra(field)
    projs = indecomposable_projectives(a)
    p1, p2 = projs[0][0], projs[1][0]
    maps = hom_matrices(p2, p1)
    if len(maps) != 1:
        raise AssertionError("expected a one-dimensional hom space")
    return make_complex(a, 0, (p1, p2), (maps[0],))


def a2_simple_stalks(field: Field) -> tuple:
    """Stalks of the two simples over the path algebra of 1 -> 2."""
    a = a2_algebra(field)
    s1, s2 = simple_modules(a)
    return stalk(s1, 0), stalk(s2, 0)
