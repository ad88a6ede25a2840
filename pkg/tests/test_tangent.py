"""Tangent spaces, orbit tangent spaces, extensions, eta, verdicts."""

import random

import pytest

from compvar.complexes import (GroupElement, act, chain_map_space, direct_sum,
                               homotopy_hom, make_complex, stalk)
from compvar.derived import derived_hom_dim
from compvar.errors import (NotAlmostProjective, NotProjectiveComplex,
                            ValidationFailure)
from compvar.fields import GF, QQ
from compvar.linalg import Matrix, Subspace
from compvar.modules import (direct_sum_modules, make_module, regular_module,
                             simple_modules)
from compvar.samples import (a2_algebra, axa_complex, base_field_algebra,
                             dual_numbers, simple_over_dual)
from compvar.tangent import (chi, chi_splitting, eta, eta_kernel, is_rigid,
                             corollary8_check, orbit_tangent,
                             orbit_tangent_basis, quotient_dim, tangent_layout,
                             tangent_space, tangent_space_basis,
                             tangent_vector, verify_theorem7, voigt_check,
                             zero_tangent_vector)


def line_complex(field, value):
    """d = (1, 1) over the base field, differential [value]."""
    a = base_field_algebra(field)
    m = make_module(a, [Matrix.identity(field, 1)])
    return make_complex(a, 0, (m, m),
                        (Matrix.from_rows(field, [[value]]),))


# -- tangent space dimensions -----------------------------------------------------


def test_line_zero_differential():
    x = line_complex(QQ, 0)
    layout, space = tangent_space(x)
    assert layout.ambient_dim == 3  # two 1x1 deltas and one sigma
    assert space.dim == 1
    orbit, stab = orbit_tangent_basis(x)
    assert orbit.dim == 0
    assert stab == 2
    assert quotient_dim(x) == 1


def test_line_unit_differential():
    x = line_complex(QQ, 1)
    _, space = tangent_space(x)
    assert space.dim == 1
    orbit, stab = orbit_tangent_basis(x)
    assert orbit.dim == 1
    assert stab == 1
    assert quotient_dim(x) == 0


def test_stalk_of_simple_tangent():
    s = stalk(simple_over_dual(QQ), 0)
    layout, space = tangent_space(s)
    assert layout.ambient_dim == 2  # delta(1) and delta(x), both 1x1
    assert space.dim == 1           # delta(1) forced to zero, delta(x) free
    orbit, stab = orbit_tangent_basis(s)
    assert orbit.dim == 0
    assert stab == 1
    assert quotient_dim(s) == 1


def test_two_term_complex_tangent_oracle():
    # hand-solved: deltas contribute 2 free parameters per degree, the
    # sigma block loses two parameters to condition (b)
    x = axa_complex(QQ)
    _, space = tangent_space(x)
    assert space.dim == 6
    orbit, stab = orbit_tangent_basis(x)
    assert orbit.dim == 5
    assert stab == 3
    assert stab == chain_map_space(x, x, 0).dim  # stabilizer = chain endos
    assert quotient_dim(x) == 1


def test_projective_stalk_is_rigid_point():
    a = dual_numbers(QQ)
    x = stalk(regular_module(a), 0)
    _, space = tangent_space(x)
    assert space.dim == 2
    orbit, stab = orbit_tangent_basis(x)
    assert orbit.dim == 2
    assert quotient_dim(x) == 0


def test_every_tangent_basis_vector_satisfies_invariants():
    for x in (axa_complex(QQ), line_complex(QQ, 0),
              stalk(simple_over_dual(QQ), 0)):
        layout, space = tangent_space(x)
        for vec in space.basis:
            v = layout.unflatten(vec)
            assert layout.flatten(v) == vec
            chi(x, v)  # raises if any invariant fails


# -- chi ----------------------------------------------------------------------------


def test_chi_of_zero_is_block_diagonal():
    x = axa_complex(QQ)
    z, inc, proj = chi(x, zero_tangent_vector(x))
    assert z == direct_sum(x, x)
    assert inc.validate() is None
    assert proj.validate() is None


def test_chi_rejects_non_tangent_data():
    x = axa_complex(QQ)
    bad = tangent_vector(
        x, {1: tuple(Matrix.identity(QQ, 2) for _ in range(2))}, {})
    with pytest.raises(ValidationFailure):
        chi(x, bad)  # delta along the identity must vanish


def test_chi_dims_and_exactness():
    x = axa_complex(QQ)
    layout, space = tangent_space(x)
    v = layout.unflatten(space.basis[0])
    z, inc, proj = chi(x, v)
    assert z.dims() == (4, 4)
    for i in x.degrees():
        assert inc.component(i).rank() == 2
        assert proj.component(i).rank() == 2
        assert (proj.component(i) @ inc.component(i)).is_zero()


def test_chi_is_linear_in_v():
    x = axa_complex(QQ)
    layout, space = tangent_space(x)
    v1 = layout.unflatten(space.basis[0])
    v2 = layout.unflatten(space.basis[-1])
    z_sum, _, _ = chi(x, v1.add(v2))
    z1, _, _ = chi(x, v1)
    z2, _, _ = chi(x, v2)
    rows, cols = range(0, 2), range(2, 4)
    for i in x.degrees():
        for j in range(x.algebra.dim):
            block_sum = z_sum.term(i).action[j].submatrix(rows, cols)
            b1 = z1.term(i).action[j].submatrix(rows, cols)
            b2 = z2.term(i).action[j].submatrix(rows, cols)
            assert block_sum == b1 + b2


def test_chi_splitting_detects_orbit_membership():
    x = axa_complex(QQ)
    layout, space = tangent_space(x)
    orbit, _ = orbit_tangent_basis(x)
    found_inside = found_outside = 0
    for vec in space.basis:
        v = layout.unflatten(vec)
        ts = chi_splitting(x, v)
        if orbit.contains(vec):
            found_inside += 1
            assert ts is not None
            z, inc, proj = chi(x, v)
            section = {i: Matrix.vstack([ts[i], Matrix.identity(QQ, x.dim_at(i))])
                       for i in x.degrees()}
            from compvar.complexes import chain_map_from_components
            s_map = chain_map_from_components(x, z, 0, section)
            comp = s_map.then(proj)
            for i in x.degrees():
                assert comp.component(i).is_identity()
        else:
            found_outside += 1
            assert ts is None
    assert found_inside > 0 and found_outside > 0


def test_orbit_vectors_split_and_basis_vectors_flagged():
    for vec_field in (QQ, GF(3)):
        x = axa_complex(vec_field)
        orbit, _ = orbit_tangent_basis(x)
        layout = tangent_layout(x)
        for vec in orbit.basis:
            assert chi_splitting(x, layout.unflatten(vec)) is not None


# -- eta ------------------------------------------------------------------------------


def test_eta_on_pure_sigma_vector():
    x = axa_complex(QQ)
    v = tangent_vector(x, {}, {1: x.diff(1)})
    sp = eta(x, v)
    assert sp.component(1) == x.diff(1)


def test_eta_kills_orbit_vectors():
    x = axa_complex(QQ)
    layout = tangent_layout(x)
    orbit, _ = orbit_tangent_basis(x)
    h = homotopy_hom(x, x, 1)
    for vec in orbit.basis:
        sp = eta(x, layout.unflatten(vec))
        assert h.nullhomotopic.contains(h.space.flatten(sp))


def test_eta_kernel_equals_orbit_space():
    for x in (axa_complex(QQ), line_complex(QQ, 0), line_complex(QQ, 1)):
        layout, kernel, image_dim = eta_kernel(x)
        orbit, _ = orbit_tangent_basis(x)
        assert kernel.contains_subspace(orbit)
        assert orbit.contains_subspace(kernel)
        assert image_dim == homotopy_hom(x, x, 1).hom_dim


def test_eta_requires_projective_terms():
    s = stalk(simple_over_dual(QQ), 0)
    with pytest.raises(NotProjectiveComplex):
        eta(s, zero_tangent_vector(s))


# -- verdicts -------------------------------------------------------------------------


def test_theorem7_equality_cases():
    for x, expected_quotient in ((axa_complex(QQ), 1),
                                 (line_complex(QQ, 0), 1),
                                 (line_complex(QQ, 1), 0)):
        report = verify_theorem7(x)
        assert report["verdict"] == "equality"
        assert report["quotient"] == expected_quotient
        assert report["quotient"] == report["derived_hom_dim"]


def test_theorem7_projective_stalk():
    a = dual_numbers(QQ)
    report = verify_theorem7(stalk(regular_module(a), 0))
    assert report == {"tangent_dim": 2, "orbit_dim": 2, "quotient": 0,
                      "derived_hom_dim": 0, "verdict": "equality"}


def test_theorem7_embedding_cases():
    s = stalk(simple_over_dual(QQ), 0)
    report = verify_theorem7(s)
    assert report["verdict"] == "embedding"
    assert report["quotient"] <= report["derived_hom_dim"]
    assert report["quotient"] == 1 and report["derived_hom_dim"] == 1


def test_theorem7_rejects_bad_shape():
    a = dual_numbers(QQ)
    bad = make_complex(a, 0, (simple_over_dual(QQ), regular_module(a)),
                       (Matrix.zeros(QQ, 1, 2),))
    with pytest.raises(NotAlmostProjective):
        verify_theorem7(bad)


def test_rigidity_and_open_orbit():
    assert is_rigid(line_complex(QQ, 1))
    assert corollary8_check(line_complex(QQ, 1))
    assert not is_rigid(line_complex(QQ, 0))
    assert corollary8_check(line_complex(QQ, 0))  # vacuous for non-rigid
    a = dual_numbers(QQ)
    assert is_rigid(stalk(regular_module(a), 0))
    assert corollary8_check(stalk(regular_module(a), 0))


# -- group action invariance ------------------------------------------------------------


def test_dimensions_invariant_under_action():
    rng = random.Random(99)
    x = axa_complex(QQ)
    comps = []
    for i in x.degrees():
        while True:
            g = Matrix.from_rows(QQ, [[QQ.coerce(rng.randint(-2, 2))
                                       for _ in range(2)] for _ in range(2)])
            if g.is_invertible():
                comps.append((i, g))
                break
    y = act(GroupElement(tuple(comps)), x)
    _, tx = tangent_space(x)
    _, ty = tangent_space(y)
    assert tx.dim == ty.dim
    ox, sx = orbit_tangent_basis(x)
    oy, sy = orbit_tangent_basis(y)
    assert (ox.dim, sx) == (oy.dim, sy)
    assert quotient_dim(x) == quotient_dim(y)
    assert derived_hom_dim(x, x, 1) == derived_hom_dim(y, y, 1)


# -- module-level check -------------------------------------------------------------------


def test_voigt_regular_module():
    a = dual_numbers(QQ)
    report = voigt_check(regular_module(a))
    assert report["quotient"] == 0
    assert report["ext1_dim"] == 0
    assert report["equality"]


def test_voigt_simple_module():
    report = voigt_check(simple_over_dual(QQ))
    assert report["quotient"] == 1
    assert report["ext1_dim"] == 1
    assert report["equality"]


def test_voigt_semisimple_sum_over_path_algebra():
    a = a2_algebra(QQ)
    s1, s2 = simple_modules(a)
    total, _, _ = direct_sum_modules([s1, s2])
    report = voigt_check(total)
    assert report["ext1_dim"] == 1
    assert report["quotient"] == 1
    assert report["equality"]


def test_voigt_respects_degree_placement():
    r0 = voigt_check(simple_over_dual(QQ), degree=0)
    r2 = voigt_check(simple_over_dual(QQ), degree=2)
    assert r0["quotient"] == r2["quotient"]
    assert r2["degree"] == 2


def test_tangent_basis_api():
    x = axa_complex(QQ)
    basis = tangent_space_basis(x)
    assert len(basis) == 6
    assert all(not v.is_zero() for v in basis)
