"""Finite-dimensional left module representations.

A module is the tuple of action matrices of the algebra basis on K^d (the
identity acts as the identity matrix).  Homomorphism spaces, isomorphism
witnesses, tops/radicals, projective covers, projectivity tests and the
first self-extension oracle all live here; they are the workhorses behind
the complex-level geometry.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra import FDAlgebra, radical as algebra_radical
from .errors import (AlgebraMismatch, MissingIdempotents, ShapeMismatch,
                     ValidationFailure)
from .linalg import LinearSolver, Matrix, Subspace


@dataclass(frozen=True)
class ModuleRep:
    """Left module structure on K^dim: ``action[j]`` represents basis
    element a_j, with ``action[0]`` the identity matrix."""

    algebra: FDAlgebra
    dim: int
    action: tuple  # s matrices, dim x dim

    def __post_init__(self):
        if len(self.action) != self.algebra.dim:
            raise ShapeMismatch("one action matrix per algebra basis element")
        for m in self.action:
            if m.shape != (self.dim, self.dim):
                raise ShapeMismatch("action matrix shape mismatch")

    @property
    def field(self):
        return self.algebra.field

    def rho(self, x: tuple) -> Matrix:
        """Action matrix of an arbitrary element given by coordinates."""
        out = Matrix.zeros(self.field, self.dim, self.dim)
        for xj, mat in zip(x, self.action):
            if xj:
                out = out + mat.scale(xj)
        return out

    def is_zero_module(self) -> bool:
        return self.dim == 0


def make_module(algebra: FDAlgebra, matrices, check: bool = True) -> ModuleRep:
    mats = []
    for m in matrices:
        mats.append(m if isinstance(m, Matrix)
                    else Matrix.from_rows(algebra.field, m))
    dim = mats[0].nrows if mats else 0
    mod = ModuleRep(algebra, dim, tuple(mats))
    if check:
        witness = validate_module(mod)
        if witness is not None:
            raise ValidationFailure(f"module relations fail: {witness}",
                                    witness=witness)
    return mod


def zero_module(algebra: FDAlgebra) -> ModuleRep:
    z = Matrix.zeros(algebra.field, 0, 0)
    return ModuleRep(algebra, 0, tuple(z for _ in range(algebra.dim)))


def validate_module(m: ModuleRep) -> tuple | None:
    """Identity acts as identity; products follow the structure constants."""
    if not m.action[0].is_identity():
        return ("identity",)
    a = m.algebra
    for j in range(a.dim):
        for k in range(a.dim):
            lhs = m.action[j] @ m.action[k]
            rhs = m.rho(a.products[j][k])
            if lhs != rhs:
                return ("alpha", j, k)
    return None


def regular_module(a: FDAlgebra) -> ModuleRep:
    """A as a left module over itself (left multiplication matrices)."""
    return ModuleRep(a, a.dim,
                     tuple(a.left_mult_matrix(a.basis_vec(j)) for j in range(a.dim)))


def direct_sum_modules(mods) -> tuple:
    """Block-diagonal sum; returns (module, inclusions, projections)."""
    mods = list(mods)
    a = mods[0].algebra
    for m in mods:
        if m.algebra is not a and m.algebra != a:
            raise AlgebraMismatch("direct sum over different algebras")
    field = a.field
    action = tuple(Matrix.block_diag(field, [m.action[j] for m in mods])
                   for j in range(a.dim))
    total = sum(m.dim for m in mods)
    out = ModuleRep(a, total, action)
    inclusions, projections = [], []
    offset = 0
    for m in mods:
        inc = Matrix.zeros(field, total, m.dim)
        rows = [list(r) for r in inc.data]
        for i in range(m.dim):
            rows[offset + i][i] = field.one()
        inclusions.append(Matrix(field, total, m.dim, tuple(tuple(r) for r in rows)))
        proj = Matrix.zeros(field, m.dim, total)
        rows = [list(r) for r in proj.data]
        for i in range(m.dim):
            rows[i][offset + i] = field.one()
        projections.append(Matrix(field, m.dim, total, tuple(tuple(r) for r in rows)))
        offset += m.dim
    return out, tuple(inclusions), tuple(projections)


def conjugate_module(m: ModuleRep, g: Matrix) -> ModuleRep:
    """Transport of structure along an invertible g (rho -> g rho g^{-1})."""
    ginv = g.inverse()
    if ginv is None:
        raise ValidationFailure("conjugating matrix is singular")
    return ModuleRep(m.algebra, m.dim, tuple(g @ mat @ ginv for mat in m.action))


def submodule(m: ModuleRep, space: Subspace, check: bool = True) -> tuple:
    """Module structure on an invariant subspace; returns (module, inclusion).

    The inclusion matrix has the subspace basis as columns.
    """
    b = space.column_matrix()  # dim x k
    solver = LinearSolver(b)
    action = []
    for mat in m.action:
        image = mat @ b
        coords = solver.solve_matrix(image)
        if coords is None:
            if check:
                raise ValidationFailure("subspace is not invariant under the action")
            coords = Matrix.zeros(m.field, space.dim, space.dim)
        action.append(coords)
    return ModuleRep(m.algebra, space.dim, tuple(action)), b


def quotient_module(m: ModuleRep, space: Subspace) -> tuple:
    """Module structure on K^dim / space; returns (module, projection)."""
    q = space.quotient_matrix()      # (dim-k) x dim
    s = space.section_matrix()       # dim x (dim-k)
    action = tuple(q @ mat @ s for mat in m.action)
    # well-defined because the subspace is invariant; validated by caller
    out = ModuleRep(m.algebra, q.nrows, action)
    witness = validate_module(out)
    if witness is not None:
        raise ValidationFailure("quotient by a non-invariant subspace",
                                witness=witness)
    return out, q


# -- hom spaces ---------------------------------------------------------------

def hom_space(m: ModuleRep, n: ModuleRep) -> Subspace:
    """{F : F rho_M(a) = rho_N(a) F}, flattened row-major into F^(dn*dm)."""
    if m.algebra != n.algebra:
        raise AlgebraMismatch("hom between modules over different algebras")
    field = m.field
    dm, dn = m.dim, n.dim
    nunk = dn * dm
    if nunk == 0:
        return Subspace.zero(field, 0)
    rows = []
    z = field.zero()
    for j in range(1, m.algebra.dim):
        rm, rn = m.action[j], n.action[j]
        for r in range(dn):
            for c in range(dm):
                row = [z] * nunk
                # (F rho_M)[r,c] = sum_k F[r,k] rhoM[k,c]
                for k in range(dm):
                    coeff = rm.entry(k, c)
                    if coeff:
                        row[r * dm + k] = field.add(row[r * dm + k], coeff)
                # -(rho_N F)[r,c] = -sum_k rhoN[r,k] F[k,c]
                for k in range(dn):
                    coeff = rn.entry(r, k)
                    if coeff:
                        row[k * dm + c] = field.sub(row[k * dm + c], coeff)
                if any(row):
                    rows.append(row)
    if not rows:
        return Subspace.full(field, nunk)
    return Matrix.from_rows(field, rows).kernel()


def hom_matrices(m: ModuleRep, n: ModuleRep) -> list:
    """Basis of Hom(M, N) as matrices (n.dim x m.dim)."""
    space = hom_space(m, n)
    return [Matrix.from_flat(m.field, n.dim, m.dim, v) for v in space.basis]


# -- generic invertible-combination search -----------------------------------

@dataclass(frozen=True)
class WitnessSearch:
    """Outcome of a search for an invertible element in a linear family.

    ``certain`` is True when the answer is proven (exhaustive enumeration
    over a finite field, a dimension obstruction, or a found witness);
    a failed randomized search over Q reports found=False, certain=False
    ("probably not").
    """

    found: bool
    certain: bool
    witness: object = None


ENUM_LIMIT = 10 ** 6
RANDOM_TRIALS = 64
RATIONAL_ROUNDS = 8


def search_invertible_combination(field, basis_vectors, realize, is_good,
                                  seed: int = 0) -> WitnessSearch:
    """Search c -> realize(sum c_i basis_i) for an element with is_good.

    Over F_q the coefficient space is enumerated exhaustively when
    q^dim <= ENUM_LIMIT (so a negative is proven); otherwise RANDOM_TRIALS
    seeded samples are drawn.  Over Q random integer coefficients are drawn
    from [-B, B] with B doubling over RATIONAL_ROUNDS rounds.
    """
    k = len(basis_vectors)
    if k == 0:
        return WitnessSearch(False, True)

    def attempt(coeffs):
        vec = None
        for c, b in zip(coeffs, basis_vectors):
            if not c:
                continue
            scaled = tuple(field.mul(c, x) for x in b)
            vec = scaled if vec is None else tuple(field.add(u, v)
                                                   for u, v in zip(vec, scaled))
        if vec is None:
            return None
        cand = realize(vec)
        return cand if is_good(cand) else None

    if not field.is_rational:
        q = field.p
        if q ** k <= ENUM_LIMIT:
            for coeffs in itertools.product(range(q), repeat=k):
                got = attempt(coeffs)
                if got is not None:
                    return WitnessSearch(True, True, got)
            return WitnessSearch(False, True)
        rng = random.Random(seed)
        for _ in range(RANDOM_TRIALS):
            got = attempt(tuple(rng.randrange(q) for _ in range(k)))
            if got is not None:
                return WitnessSearch(True, True, got)
        return WitnessSearch(False, False)

    rng = random.Random(seed)
    bound = 1
    for _ in range(RATIONAL_ROUNDS):
        for _ in range(8):
            coeffs = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(k))
            got = attempt(coeffs)
            if got is not None:
                return WitnessSearch(True, True, got)
        bound *= 2
    return WitnessSearch(False, False)


def is_isomorphic_modules(m: ModuleRep, n: ModuleRep, seed: int = 0) -> WitnessSearch:
    """Isomorphism test with witness: searches Hom(M, N) for an invertible
    element.  A dimension mismatch is a proven negative."""
    if m.dim != n.dim:
        return WitnessSearch(False, True)
    if m.dim == 0:
        return WitnessSearch(True, True, Matrix.zeros(m.field, 0, 0))
    space = hom_space(m, n)
    return search_invertible_combination(
        m.field, list(space.basis),
        lambda v: Matrix.from_flat(m.field, n.dim, m.dim, v),
        lambda mat: mat.is_invertible(), seed=seed)


# -- radical series and covers -------------------------------------------------

def radical_submodule(m: ModuleRep) -> Subspace:
    """rad(A) . M as a subspace of K^dim."""
    rad = algebra_radical(m.algebra)
    vecs = []
    for r in rad.basis:
        mat = m.rho(r)
        vecs.extend(mat.col(j) for j in range(m.dim))
    return Subspace.from_vectors(m.field, m.dim, vecs)


def top_multiplicities(m: ModuleRep) -> tuple:
    """Multiplicity of each simple (indexed by the quiver vertices) in
    M / rad M.  Requires a quiver-constructed algebra."""
    idems = m.algebra.primitive_idempotents()
    radm = radical_submodule(m)
    mults = []
    for e in idems:
        image = (m.rho(e)).column_space()
        mults.append(image.sum(radm).dim - radm.dim)
    return tuple(mults)


def indecomposable_projectives(a: FDAlgebra) -> list:
    """The modules A e_i (one per primitive idempotent), with embeddings
    into the regular module; returns a list of (module, inclusion)."""
    reg = regular_module(a)
    out = []
    for e in a.primitive_idempotents():
        image = a.right_mult_matrix(e).column_space()
        out.append(submodule(reg, image))
    return out


@dataclass(frozen=True)
class ProjectiveCover(object):
    """Projective cover data: P -> M with P = sum of A e_i copies.

    ``pi`` is the cover matrix (m.dim x p.dim); ``summand_indices`` lists
    the vertex index of each indecomposable summand of P in order.
    """

    module: ModuleRep
    projective: ModuleRep
    pi: Matrix
    summand_indices: tuple


def projective_cover(m: ModuleRep) -> ProjectiveCover:
    """Projective cover via the top: choose generators of e_i(M/radM) and
    map the corresponding copies of A e_i onto them."""
    a = m.algebra
    idems = a.primitive_idempotents()
    projs = indecomposable_projectives(a)
    radm = radical_submodule(m)
    if m.dim == 0:
        return ProjectiveCover(m, zero_module(a), Matrix.zeros(m.field, 0, 0), ())

    generators = []  # (vertex index, vector in M)
    for vi, e in enumerate(idems):
        image = m.rho(e).column_space()
        current = radm
        for v in image.basis:
            if not current.contains(v):
                generators.append((vi, v))
                current = current.sum(Subspace.from_vectors(m.field, m.dim, [v]))
    summands = []
    columns = []
    for vi, v in generators:
        p_mod, p_inc = projs[vi]
        summands.append(p_mod)
        # basis vector b of A e_i (coordinates in A) acts on v via rho
        for col in range(p_mod.dim):
            avec = p_inc.col(col)          # element of A
            columns.append(m.rho(avec).mat_vec(v))
    if summands:
        p_total, _, _ = direct_sum_modules(summands)
        pi = Matrix(m.field, m.dim, p_total.dim, tuple(zip(*columns)))
    else:
        p_total = zero_module(a)
        pi = Matrix.zeros(m.field, m.dim, 0)
    cover = ProjectiveCover(m, p_total, pi,
                            tuple(vi for vi, _ in generators))
    _check_cover(cover, radm)
    return cover


def _check_cover(cover: ProjectiveCover, radm: Subspace):
    m, p, pi = cover.module, cover.projective, cover.pi
    # A-linear
    for j in range(m.algebra.dim):
        if pi @ p.action[j] != m.action[j] @ pi:
            raise ValidationFailure("cover map is not A-linear")
    # surjective
    if pi.rank() != m.dim:
        raise ValidationFailure("cover map is not surjective")
    # minimal: kernel inside rad(A) . P
    ker = pi.kernel()
    radp = radical_submodule(p)
    if not radp.contains_subspace(ker):
        raise ValidationFailure("cover is not minimal (kernel escapes the radical)")


def simple_modules(a: FDAlgebra) -> list:
    """The simple modules S_i = P_i / rad P_i, one per quiver vertex."""
    out = []
    for p_mod, _ in indecomposable_projectives(a):
        s, _ = quotient_module(p_mod, radical_submodule(p_mod))
        out.append(s)
    return out


def is_projective(m: ModuleRep) -> bool:
    """M is projective iff its cover splits; solved as a linear system for
    a section s with pi s = id."""
    if m.dim == 0:
        return True
    cover = projective_cover(m)
    secs = hom_matrices(m, cover.projective)
    if not secs:
        return False
    # find coefficients x with sum x_i (pi @ s_i) = id
    field = m.field
    composites = [cover.pi @ s for s in secs]
    cols = [mat.flat() for mat in composites]
    target = Matrix.identity(field, m.dim).flat()
    system = Matrix(field, len(target), len(cols), tuple(zip(*cols)))
    return system.solve(target) is not None


def kernel_submodule(m: ModuleRep, f: Matrix, target: ModuleRep) -> tuple:
    """Kernel of an A-linear map as a module; returns (module, inclusion)."""
    return submodule(m, f.kernel())


def ext1_dim_oracle(m: ModuleRep, n: ModuleRep) -> int:
    """dim Ext^1(M, N) from a projective presentation of M:
    coker(Hom(P0, N) -> Hom(K, N)) with K = ker(P0 -> M)."""
    if m.dim == 0 or n.dim == 0:
        return 0
    cover = projective_cover(m)
    k_mod, k_inc = submodule(cover.projective, cover.pi.kernel())
    hom_k = hom_space(k_mod, n)
    if k_mod.dim == 0:
        return 0
    restricted = []
    for f in hom_matrices(cover.projective, n):
        restricted.append((f @ k_inc).flat())
    image = Subspace.from_vectors(n.field, n.dim * k_mod.dim, restricted)
    return hom_k.dim - image.dim
