"""Algebras from structure constants and quiver presentations."""

from __future__ import annotations

from fractions import Fraction

import pytest

from compvar.algebra import (FDAlgebra, QuiverPresentation, algebra_from_constants,
                             center, opposite_algebra, path_algebra, radical,
                             validate_algebra)
from compvar.errors import (MissingIdempotents, UnsupportedCharacteristic,
                            ValidationFailure)
from compvar.fields import GF, QQ
from compvar.samples import (a2_algebra, base_field_algebra, dual_numbers,
                             two_loop_truncated)

F2 = GF(2)
F5 = GF(5)


def dual_numbers_table(field):
    """K[x]/(x^2) given directly by structure constants (x*x = 0)."""
    return algebra_from_constants(field, 2, ("1", "x"), {(1, 1, 0): 0})


# -- structure-constant construction ----------------------------------------

def test_dual_numbers_table_validates():
    a = dual_numbers_table(QQ)
    assert validate_algebra(a) is None
    x = a.basis_vec(1)
    assert a.mul_vec(x, x) == a.zero_vec()
    assert a.mul_vec(a.unit_vec(), x) == x
    assert a.is_commutative()


def test_broken_associativity_is_caught():
    # x*x = 1 over Q would make x a unit; combined with a truncated table
    # this breaks associativity and must be refused with a witness
    with pytest.raises(ValidationFailure) as exc:
        algebra_from_constants(QQ, 3, ("1", "x", "y"),
                               {(1, 1, 2): 1, (1, 2, 0): 1})
    assert exc.value.witness[0] == "associativity"


def test_identity_contradiction_is_caught():
    with pytest.raises(ValidationFailure):
        algebra_from_constants(QQ, 2, ("1", "x"), {(0, 1, 1): 7})


# -- quiver construction ------------------------------------------------------

def test_base_field_algebra():
    a = base_field_algebra(QQ)
    assert a.dim == 1
    assert a.labels == ("1",)
    assert a.primitive_idempotents() == (a.unit_vec(),)
    assert radical(a).dim == 0


def test_dual_numbers_quiver_matches_table():
    a = dual_numbers(QQ)
    b = dual_numbers_table(QQ)
    assert a.dim == b.dim == 2
    assert a.products == b.products
    assert a.labels == ("1", "x")
    assert radical(a).basis == ((Fraction(0), Fraction(1)),)


def test_a2_dimension_and_labels():
    a = a2_algebra(QQ)
    assert a.dim == 3
    assert a.labels == ("1", "e2", "a")
    assert validate_algebra(a) is None
    # e1 = 1 - e2 and e2 are orthogonal idempotents summing to 1
    e1, e2 = a.primitive_idempotents()
    assert a.mul_vec(e1, e1) == e1
    assert a.mul_vec(e2, e2) == e2
    assert a.mul_vec(e1, e2) == a.zero_vec()
    # arrow composes like a function: a * e1 = a (source), e2 * a = a (target)
    arrow = a.basis_vec(2)
    assert a.mul_vec(arrow, e1) == arrow
    assert a.mul_vec(e2, arrow) == arrow
    assert a.mul_vec(arrow, e2) == a.zero_vec()
    assert a.mul_vec(arrow, arrow) == a.zero_vec()


def test_two_loop_truncated_dimension():
    a = two_loop_truncated(QQ)
    assert a.dim == 3
    assert radical(a).dim == 2
    r = radical(a)
    for u in r.basis:
        for v in r.basis:
            assert a.mul_vec(u, v) == a.zero_vec()


def test_longer_relation_path_algebra():
    # 1 -a-> 2 -b-> 3 with the composite killed: dim = 3 vertices + 2 arrows
    q = QuiverPresentation(3, ((0, 1, "a"), (1, 2, "b")),
                           ((((0, 1), 1),),), 3)
    a = path_algebra(q, QQ)
    assert a.dim == 5
    assert radical(a).dim == 2
    # without the relation the composite survives
    q2 = QuiverPresentation(3, ((0, 1, "a"), (1, 2, "b")), (), 3)
    a2 = path_algebra(q2, QQ)
    assert a2.dim == 6


def test_noncomposable_relation_is_rejected():
    with pytest.raises(ValidationFailure):
        QuiverPresentation(2, ((0, 1, "a"),), ((((0, 0), 1),),), 3)


# -- center -------------------------------------------------------------------

def test_center_examples():
    assert center(base_field_algebra(QQ)).dim == 1
    assert center(dual_numbers(QQ)).dim == 2  # commutative
    c = center(a2_algebra(QQ))
    assert c.dim == 1
    # the center of the A2 algebra is spanned by the identity
    assert c.contains(a2_algebra(QQ).unit_vec())


def test_center_is_unital_commutative_subalgebra():
    for alg in (a2_algebra(QQ), dual_numbers(F5), two_loop_truncated(QQ)):
        c = center(alg)
        assert c.contains(alg.unit_vec())
        for u in c.basis:
            for v in c.basis:
                assert c.contains(alg.mul_vec(u, v))
                assert alg.mul_vec(u, v) == alg.mul_vec(v, u)


# -- radical -------------------------------------------------------------------

def test_radical_examples():
    assert radical(dual_numbers(QQ)).dim == 1
    r = radical(a2_algebra(QQ))
    assert r.dim == 1
    assert r.contains(a2_algebra(QQ).basis_vec(2))  # the arrow


def test_trace_form_agrees_with_structural_radical_over_q():
    for build in (dual_numbers, a2_algebra, two_loop_truncated):
        alg = build(QQ)
        stripped = FDAlgebra(alg.field, alg.dim, alg.labels, alg.products)
        assert radical(stripped) == radical(alg)


def test_trace_form_characteristic_guard():
    alg = dual_numbers_table(F2)  # no structural radical, p = 2 = dim
    with pytest.raises(UnsupportedCharacteristic):
        radical(alg)
    # but the quiver-constructed version knows its radical structurally
    assert radical(dual_numbers(F2)).dim == 1


def test_radical_of_semisimple_f5():
    alg = base_field_algebra(F5)
    assert radical(alg).dim == 0


# -- opposite ------------------------------------------------------------------

def test_opposite_involution_and_validity():
    for build in (dual_numbers, a2_algebra):
        alg = build(QQ)
        op = opposite_algebra(alg)
        assert validate_algebra(op) is None
        assert opposite_algebra(op).products == alg.products
        assert center(op) == center(alg)
        assert radical(op) == radical(alg)


def test_opposite_of_commutative_is_identical():
    alg = dual_numbers(QQ)
    assert opposite_algebra(alg).products == alg.products


def test_missing_idempotents_error():
    alg = dual_numbers_table(QQ)
    with pytest.raises(MissingIdempotents):
        alg.primitive_idempotents()
