"""Derived homs, endomorphism algebras, idempotent lifting, splitter."""

import pytest

from compvar.algebra import center
from compvar.complexes import (GroupElement, act, direct_sum, homology_dims,
                               homotopy_hom, identity_chain_map, is_acyclic,
                               make_complex, mapping_cone,
                               projective_extension, stalk)
from compvar.derived import (acyclic_splitter, derived_hom_dim, end_algebra,
                             lift_idempotent, semisplit_ext_dim, verdier_xi)
from compvar.errors import NotAlmostProjective, ValidationFailure
from compvar.fields import QQ
from compvar.linalg import Matrix, Subspace
from compvar.modules import ext1_dim_oracle, regular_module, simple_modules
from compvar.samples import (a2_algebra, axa_complex, dual_numbers,
                             simple_over_dual)


# -- derived hom dimensions ------------------------------------------------------


def test_projective_source_matches_homotopy_hom():
    x = axa_complex(QQ)
    assert derived_hom_dim(x, x, 1) == homotopy_hom(x, x, 1).hom_dim == 1
    assert derived_hom_dim(x, x, 0) == 2


def test_self_extensions_of_simple():
    s = stalk(simple_over_dual(QQ), 0)
    m = simple_over_dual(QQ)
    assert derived_hom_dim(s, s, 0) == 1
    assert derived_hom_dim(s, s, 1) == 1
    assert derived_hom_dim(s, s, 1) == ext1_dim_oracle(m, m)
    assert derived_hom_dim(s, s, 2) == 1  # periodic resolution
    assert derived_hom_dim(s, s, -1) == 0


def test_projective_stalk_has_no_shifted_homs():
    a = dual_numbers(QQ)
    x = stalk(regular_module(a), 0)
    assert derived_hom_dim(x, x, 1) == 0
    assert derived_hom_dim(x, x, 0) == 2


def test_hereditary_ext_orientation():
    a = a2_algebra(QQ)
    s1, s2 = (stalk(m, 0) for m in simple_modules(a))
    assert derived_hom_dim(s1, s2, 1) == 1
    assert derived_hom_dim(s2, s1, 1) == 0


def test_replacement_invariance():
    s = stalk(simple_over_dual(QQ), 0)
    ext, _ = projective_extension(s, steps=1)
    for n in (0, 1):
        assert derived_hom_dim(ext, s, n) == derived_hom_dim(s, s, n)


def test_action_invariance():
    s = stalk(simple_over_dual(QQ), 0)
    ext, _ = projective_extension(s, steps=1)  # dims (1, 2), almost projective
    g = GroupElement(((0, Matrix.from_rows(QQ, [[1, 1], [0, 1]])),))
    moved = act(g, ext)
    for n in (0, 1):
        assert derived_hom_dim(moved, s, n) == derived_hom_dim(ext, s, n)
        assert derived_hom_dim(ext, act(g, ext), n) == derived_hom_dim(ext, ext, n)


def test_requires_almost_projective():
    a = dual_numbers(QQ)
    bad = make_complex(a, 0, (simple_over_dual(QQ), regular_module(a)),
                       (Matrix.zeros(QQ, 1, 2),))
    with pytest.raises(NotAlmostProjective):
        derived_hom_dim(bad, bad, 1)


# -- endomorphism algebras ----------------------------------------------------------


def test_end_algebra_of_regular_stalk():
    a = dual_numbers(QQ)
    pkg = end_algebra(stalk(regular_module(a), 0))
    assert pkg.bhat.dim == 2
    assert pkg.H.dim == 0
    assert pkg.bhat.is_commutative()
    assert pkg.radical.dim == 1
    assert center(pkg.bhat).dim == 2


def test_end_algebra_of_two_term_complex():
    pkg = end_algebra(axa_complex(QQ))
    assert pkg.bhat.dim == 3
    assert pkg.H.dim == 1
    # the null-homotopic ideal sits inside the radical: nothing to split off
    assert pkg.radical.contains_subspace(pkg.H)
    for i, bm in enumerate(pkg.basis_maps):
        assert bm.validate() is None
        assert pkg.realize(pkg.bhat.basis_vec(i)).comps == bm.comps


def test_end_algebra_of_contractible_complex():
    a = dual_numbers(QQ)
    cone = mapping_cone(identity_chain_map(stalk(regular_module(a), 0)))
    pkg = end_algebra(cone)
    assert pkg.bhat.dim == 2
    assert pkg.H.dim == 2  # everything is null-homotopic, even the identity


def test_end_algebra_rejects_zero_complex():
    from compvar.modules import zero_module
    a = dual_numbers(QQ)
    with pytest.raises(ValidationFailure):
        end_algebra(stalk(zero_module(a), 0))


# -- idempotent lifting ----------------------------------------------------------------


def test_lift_unit_plus_nilpotent():
    a = dual_numbers(QQ)
    n = Subspace.from_vectors(QQ, 2, [(QQ.zero(), QQ.one())])
    one = a.basis_vec(0)
    x = a.basis_vec(1)
    ebar = (QQ.one(), QQ.one())  # 1 + x
    assert lift_idempotent(a, ebar, n) == one
    assert lift_idempotent(a, one, n) == one
    assert lift_idempotent(a, x, n) == a.zero_vec()


def test_lift_rejects_non_idempotent():
    a = dual_numbers(QQ)
    zero_ideal = Subspace.zero(QQ, 2)
    with pytest.raises(ValidationFailure):
        lift_idempotent(a, (QQ.one(), QQ.one()), zero_ideal)


def test_lift_in_quiver_algebra():
    a = a2_algebra(QQ)
    from compvar.algebra import radical
    j = radical(a)
    # e2 + arrow is idempotent mod the radical; its lift is exactly e2
    ebar = tuple(QQ.coerce(c) for c in (0, 1, 1))
    lifted = lift_idempotent(a, ebar, j)
    assert a.mul_vec(lifted, lifted) == lifted
    assert j.contains(tuple(QQ.sub(u, v) for u, v in zip(lifted, ebar)))


# -- acyclic splitter -------------------------------------------------------------------


def test_splitter_keeps_minimal_complex():
    x = axa_complex(QQ)
    res = acyclic_splitter(x)
    assert res.ideal_dim == 0
    assert res.xcomp.total_dim() == 0
    assert res.xe == x
    for i in x.degrees():
        assert res.e.component(i).is_identity()


def test_splitter_on_projective_stalk():
    a = dual_numbers(QQ)
    res = acyclic_splitter(stalk(regular_module(a), 0))
    assert res.ideal_dim == 0
    assert res.xe.dims() == (2,)


def test_splitter_recovers_summand():
    from compvar.complexes import complexes_isomorphic
    y = stalk(simple_over_dual(QQ), 0)
    a = dual_numbers(QQ)
    cone = mapping_cone(identity_chain_map(stalk(regular_module(a), 0)))
    x = direct_sum(y, cone)
    assert x.dims() == (2, 3)
    res = acyclic_splitter(x)
    assert is_acyclic(res.xcomp)
    assert res.xcomp.dims() == (2, 2)
    assert homology_dims(res.xe) == homology_dims(x)
    assert res.xe.dims() == (0, 1)
    verdict = complexes_isomorphic(with_window(res.xe, y), y, seed=9)
    assert verdict.found


def with_window(x, reference):
    """Re-window a complex to match a reference's degree range for direct
    comparisons (pads/trims zero slots only)."""
    from compvar.complexes import ComplexPoint
    from compvar.modules import zero_module
    terms, diffs = [], []
    for i in range(reference.bottom, reference.top + 1):
        terms.append(x.term(i))
    for i in range(reference.bottom + 1, reference.top + 1):
        diffs.append(x.diff(i))
    for i in range(x.bottom, x.top + 1):
        if (i < reference.bottom or i > reference.top) and x.dim_at(i):
            raise AssertionError("window mismatch loses data")
    return ComplexPoint(x.algebra, reference.bottom, tuple(terms), tuple(diffs))


def test_splitter_on_fully_contractible():
    x = mapping_cone(identity_chain_map(axa_complex(QQ)))
    res = acyclic_splitter(x)
    assert res.xe.total_dim() == 0
    assert res.xcomp.total_dim() == x.total_dim()
    assert is_acyclic(res.xcomp)


def test_splitter_composites_are_homotopy_inverse():
    y = stalk(simple_over_dual(QQ), 0)
    a = dual_numbers(QQ)
    cone = mapping_cone(identity_chain_map(stalk(regular_module(a), 0)))
    x = direct_sum(y, cone)
    res = acyclic_splitter(x)
    # projection then inclusion is the idempotent e; e differs from the
    # identity by a null-homotopic map
    pkg_hom = homotopy_hom(x, x, 0)
    e_flat = pkg_hom.space.flatten(res.e)
    id_flat = pkg_hom.space.flatten(identity_chain_map(x))
    diff = tuple(QQ.sub(u, v) for u, v in zip(id_flat, e_flat))
    assert pkg_hom.nullhomotopic.contains(diff)
    comp = res.inclusion.then(res.projection)
    for i in res.xe.degrees():
        assert comp.component(i).is_identity()


# -- semisplit extensions ------------------------------------------------------------------


def test_semisplit_dimension():
    x = axa_complex(QQ)
    assert semisplit_ext_dim(x, x) == 1
    assert semisplit_ext_dim(x, x) == derived_hom_dim(x, x, 1)


def test_verdier_xi_boundary_is_nullhomotopic():
    x = axa_complex(QQ)
    xi = verdier_xi(x, x, {1: x.diff(1)})
    assert xi.validate() is None
    h = homotopy_hom(x, x, 1)
    # sigma = t d - d t with t = (id, 0) gives a null-homotopic connecting map
    t_boundary = verdier_xi(x, x, {1: -x.diff(1)})
    assert h.nullhomotopic.contains(h.space.flatten(t_boundary))
    assert h.nullhomotopic.contains(h.space.flatten(xi))
