"""Hom groups in the bounded derived category, endomorphism algebras of
complexes, idempotent lifting, and the acyclic-summand splitter.

The endomorphism algebra of a complex is taken with multiplication equal to
*opposite* composition (b1 * b2 = "apply b1, then b2"), the right-action
convention; every statement about its ideals below depends on that order.
Null-homotopic self-maps form a two-sided ideal H that kills homology, and
splitting off the contractible part of a complex amounts to lifting the
identity of (H + J)/J through the radical J.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import FDAlgebra, radical as algebra_radical, validate_algebra
from .complexes import (ChainMap, ComplexPoint, HomotopyHom,
                        chain_map_from_components, classify, homology,
                        homology_dims, homotopy_hom, identity_chain_map,
                        is_acyclic, make_complex, replace_by_projective)
from .errors import (AlgebraMismatch, NotAlmostProjective, SplitterFailure,
                     ValidationFailure)
from .linalg import LinearSolver, Matrix, Subspace, vec_scale, vec_sub
from .modules import submodule


# -- derived homs -----------------------------------------------------------------


def derived_hom(x: ComplexPoint, y: ComplexPoint, n: int):
    """Full data behind derived_hom_dim: (replacement used, HomotopyHom)."""
    cls = classify(x)
    if not cls.is_almost_projective:
        raise NotAlmostProjective(
            "derived homs are computed only out of almost projective complexes")
    if cls.is_projective_complex:
        return x, homotopy_hom(x, y, n)
    ldy = y.left_degree()
    if ldy is None:
        return x, homotopy_hom(x, y, n)
    top = max(ldy + n + 1, x.left_degree())
    p = replace_by_projective(x, top)
    return p, homotopy_hom(p, y, n)


def derived_hom_dim(x: ComplexPoint, y: ComplexPoint, n: int) -> int:
    """dim Hom_{D^b}(X, Y[n]) via a truncated projective replacement of X;
    components of maps and homotopies into Y[n] vanish above the truncation
    degree, so the chopped tower computes the same dimension."""
    return derived_hom(x, y, n)[1].hom_dim


def semisplit_ext_dim(x: ComplexPoint, y: ComplexPoint) -> int:
    """Degreewise-split extensions of X by Y modulo equivalence: homotopy
    classes of shift-1 chain maps."""
    if x.algebra != y.algebra:
        raise AlgebraMismatch("extensions need a common algebra")
    return homotopy_hom(x, y, 1).hom_dim


def verdier_xi(x: ComplexPoint, y: ComplexPoint, sigmas: dict) -> ChainMap:
    """Connecting map of a degreewise-split extension: the sigma blocks
    assemble into a shift-1 chain map X -> Y[1] (validated)."""
    if x.algebra != y.algebra:
        raise AlgebraMismatch("extensions need a common algebra")
    return chain_map_from_components(x, y, 1, sigmas)


# -- endomorphism algebra of a complex ------------------------------------------------


@dataclass(frozen=True, eq=False)
class EndAlgebraPackage:
    """End algebra of a complex with opposite-composition multiplication,
    its null-homotopic ideal H, and its radical, all in the identity-first
    basis of ``bhat``."""

    complex: ComplexPoint
    bhat: FDAlgebra
    basis_maps: tuple        # ChainMap per basis index
    basis_vectors: tuple     # flattened chain-map coordinates per basis index
    H: Subspace              # null-homotopic ideal, bhat coordinates
    radical: Subspace        # J(bhat), bhat coordinates
    hom: HomotopyHom

    def realize(self, coords: tuple) -> ChainMap:
        space = self.hom.space
        vec = [space.source.field.zero()] * space.ambient_dim
        for c, bv in zip(coords, self.basis_vectors):
            if c:
                for k, entry in enumerate(bv):
                    vec[k] = space.source.field.add(
                        vec[k], space.source.field.mul(c, entry))
        return space.unflatten(tuple(vec))


def _identity_first_basis(field, ambient_vectors, id_vec):
    """Greedy echelon selection starting from the identity vector."""
    chosen = [id_vec]
    span = Subspace.from_vectors(field, len(id_vec), [id_vec])
    for v in ambient_vectors:
        if not span.contains(v):
            chosen.append(v)
            span = Subspace.from_vectors(field, len(id_vec), chosen)
    return chosen


def end_algebra(x: ComplexPoint) -> EndAlgebraPackage:
    if x.total_dim() == 0:
        raise ValidationFailure("the zero complex has no unital endomorphism algebra")
    field = x.field
    hom = homotopy_hom(x, x, 0)
    cms = hom.space
    id_vec = cms.flatten(identity_chain_map(x))
    if not cms.subspace.contains(id_vec):
        raise ValidationFailure("identity map missing from the chain map space")
    basis_vectors = _identity_first_basis(field, cms.subspace.basis, id_vec)
    if len(basis_vectors) != cms.subspace.dim:
        raise ValidationFailure("identity-first basis selection lost rank")
    basis_maps = tuple(cms.unflatten(v) for v in basis_vectors)
    dim = len(basis_vectors)
    columns = Matrix.from_rows(field, [list(v) for v in basis_vectors]).transpose()
    solver = LinearSolver(columns)
    products = []
    for j in range(dim):
        row = []
        for k in range(dim):
            composite = basis_maps[j].then(basis_maps[k])  # opposite order
            row.append(tuple(solver.solve(cms.flatten(composite))))
        products.append(tuple(row))
    labels = ("1",) + tuple(f"b{k}" for k in range(1, dim))
    bhat = FDAlgebra(field, dim, labels, tuple(products))
    witness = validate_algebra(bhat)
    if witness is not None:
        raise ValidationFailure(f"endomorphism table fails algebra axioms: {witness}")
    h_coords = [tuple(solver.solve(v)) for v in hom.nullhomotopic.basis]
    h_sub = Subspace.from_vectors(field, dim, h_coords)
    _check_ideal_and_homology_kill(x, bhat, h_sub, basis_vectors, cms)
    rad = algebra_radical(bhat)
    return EndAlgebraPackage(x, bhat, basis_maps, tuple(basis_vectors),
                             h_sub, rad, hom)


def _check_ideal_and_homology_kill(x, bhat, h_sub, basis_vectors, cms):
    field = x.field
    for hv in h_sub.basis:
        for k in range(bhat.dim):
            if not h_sub.contains(bhat.mul_vec(hv, bhat.basis_vec(k))):
                raise ValidationFailure("null-homotopic maps fail right ideal closure")
            if not h_sub.contains(bhat.mul_vec(bhat.basis_vec(k), hv)):
                raise ValidationFailure("null-homotopic maps fail left ideal closure")
    # each null-homotopic map sends cycles into boundaries in every degree
    for hv in h_sub.basis:
        ambient = [field.zero()] * cms.ambient_dim
        for c, bv in zip(hv, basis_vectors):
            if c:
                for k, entry in enumerate(bv):
                    ambient[k] = field.add(ambient[k], field.mul(c, entry))
        f = cms.unflatten(tuple(ambient))
        for i in x.degrees():
            data = homology(x, i)
            for cyc in data.cycles.basis:
                if not data.boundaries.contains(f.component(i).mat_vec(cyc)):
                    raise ValidationFailure(
                        "null-homotopic map acts nontrivially on homology")


# -- idempotent lifting ---------------------------------------------------------------


def _nilpotency_index(bhat: FDAlgebra, ideal: Subspace) -> int:
    """Smallest k with ideal^k = 0."""
    current = ideal
    index = 1
    while current.dim > 0:
        vectors = []
        for u in current.basis:
            for w in ideal.basis:
                vectors.append(bhat.mul_vec(u, w))
        current = Subspace.from_vectors(bhat.field, bhat.dim, vectors)
        index += 1
        if index > bhat.dim + 1:
            raise ValidationFailure("ideal is not nilpotent")
    return index


def lift_idempotent(bhat: FDAlgebra, ebar: tuple, ideal: Subspace) -> tuple:
    """Lift an idempotent of bhat/ideal to an exact idempotent congruent to
    it, via e <- 3e^2 - 2e^3 (error term r^2(4r - 3), so precision doubles
    each round)."""
    field = bhat.field
    defect = vec_sub(field, bhat.mul_vec(ebar, ebar), ebar)
    if not ideal.contains(defect):
        raise ValidationFailure("input is not idempotent modulo the ideal")
    index = _nilpotency_index(bhat, ideal)
    rounds = max(1, (index - 1).bit_length() + 1)
    three = field.coerce(3)
    two = field.coerce(2)
    e = ebar
    for _ in range(rounds):
        e2 = bhat.mul_vec(e, e)
        e3 = bhat.mul_vec(e2, e)
        e = vec_sub(field, vec_scale(field, three, e2), vec_scale(field, two, e3))
    if bhat.mul_vec(e, e) != e:
        raise ValidationFailure("idempotent lifting did not converge")
    if not ideal.contains(vec_sub(field, e, ebar)):
        raise ValidationFailure("lifted idempotent drifted out of its coset")
    return e


# -- acyclic splitter -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SplitterResult:
    e: ChainMap               # chain idempotent with image the retained part
    xe: ComplexPoint          # retained direct summand, homotopy equivalent
    xcomp: ComplexPoint       # complementary acyclic summand
    inclusion: ChainMap       # xe -> x
    projection: ChainMap      # x -> xe
    ideal_dim: int            # dim (H + J)/J that was split off


def _ideal_identity(field, quot_dim, ideal, q_mul):
    """Identity element of a (necessarily unital) two-sided ideal in a
    semisimple quotient: prefer an echelon basis element that already works,
    otherwise solve e*x = x linearly inside the ideal."""
    basis = list(ideal.basis)
    for cand in basis:
        if q_mul(cand, cand) != cand:
            continue
        if all(q_mul(cand, b) == b and q_mul(b, cand) == b for b in basis):
            return cand
    nb = len(basis)
    rows, rhs = [], []
    for b in basis:
        cols = [q_mul(bk, b) for bk in basis]
        for coord in range(quot_dim):
            rows.append([cols[k][coord] for k in range(nb)])
            rhs.append(b[coord])
    coeffs = LinearSolver(Matrix.from_rows(field, rows)).solve(tuple(rhs))
    if coeffs is None:
        return None
    cand = [field.zero()] * quot_dim
    for c, b in zip(coeffs, basis):
        if c:
            for k in range(quot_dim):
                cand[k] = field.add(cand[k], field.mul(c, b[k]))
    cand = tuple(cand)
    if q_mul(cand, cand) != cand:
        return None
    if not all(q_mul(cand, b) == b and q_mul(b, cand) == b for b in basis):
        return None
    return cand


def acyclic_splitter(x: ComplexPoint) -> SplitterResult:
    """Split off the largest contractible direct summand: find the identity
    of (H + J)/J in the semisimple quotient of the endomorphism algebra,
    lift it to a chain idempotent f, and cut X along e = 1 - f."""
    pkg = end_algebra(x)
    field = x.field
    bhat, h_sub, j_sub = pkg.bhat, pkg.H, pkg.radical
    qm = j_sub.quotient_matrix()
    sec = j_sub.section_matrix()
    quot_dim = bhat.dim - j_sub.dim

    def q_mul(u, v):
        return qm.mat_vec(bhat.mul_vec(sec.mat_vec(u), sec.mat_vec(v)))

    ideal = Subspace.from_vectors(field, quot_dim,
                                  [qm.mat_vec(v) for v in h_sub.basis])
    if ideal.dim == 0:
        f_vec = tuple(field.zero() for _ in range(bhat.dim))
    else:
        fbar_q = _ideal_identity(field, quot_dim, ideal, q_mul)
        if fbar_q is None:
            raise SplitterFailure("no identity found for the contractible ideal",
                                  ideal_dim=ideal.dim, quotient_dim=quot_dim)
        f_vec = lift_idempotent(bhat, sec.mat_vec(fbar_q), j_sub)
    if not h_sub.contains(f_vec):
        raise SplitterFailure("lifted idempotent is not null-homotopic",
                              ideal_dim=ideal.dim, quotient_dim=quot_dim)
    e_vec = vec_sub(field, bhat.basis_vec(0), f_vec)
    e_map = pkg.realize(e_vec)
    f_map = pkg.realize(f_vec)
    xe, inc_e, proj_e = _cut_along_idempotent(x, e_map)
    xcomp, _, _ = _cut_along_idempotent(x, f_map)
    if xe.total_dim() + xcomp.total_dim() != x.total_dim():
        raise SplitterFailure("idempotent images do not complement each other",
                              ideal_dim=ideal.dim, quotient_dim=quot_dim)
    if not is_acyclic(xcomp):
        raise SplitterFailure("complementary summand is not acyclic",
                              ideal_dim=ideal.dim, quotient_dim=quot_dim)
    if homology_dims(xe) != homology_dims(x):
        raise SplitterFailure("retained summand changed homology",
                              ideal_dim=ideal.dim, quotient_dim=quot_dim)
    return SplitterResult(e_map, xe, xcomp, inc_e, proj_e, ideal.dim)


def _cut_along_idempotent(x: ComplexPoint, e_map: ChainMap):
    """Complex on the images of the components of a chain idempotent,
    with inclusion and projection maps."""
    field = x.field
    terms, incs = [], {}
    for i in x.degrees():
        image = e_map.component(i).column_space()
        mod, inc = submodule(x.term(i), image)
        terms.append(mod)
        incs[i] = inc
    diffs = []
    for i in range(x.bottom + 1, x.top + 1):
        restricted = LinearSolver(incs[i - 1]).solve_matrix(x.diff(i) @ incs[i])
        if restricted is None:
            raise ValidationFailure("idempotent image is not differential-stable")
        diffs.append(restricted)
    xe = make_complex(x.algebra, x.bottom, terms, diffs)
    inclusion = chain_map_from_components(
        xe, x, 0, {i: incs[i] for i in x.degrees() if incs[i].ncols})
    projs = {}
    for i in x.degrees():
        if incs[i].ncols:
            p = LinearSolver(incs[i]).solve_matrix(e_map.component(i))
            if p is None:
                raise ValidationFailure("idempotent image lost its projection")
            projs[i] = p
    projection = chain_map_from_components(x, xe, 0, projs)
    comp = inclusion.then(projection)  # xe -> xe, should be the identity
    for i in xe.degrees():
        if not comp.component(i).is_identity():
            raise ValidationFailure("idempotent cut lost a section")
    return xe, inclusion, projection
