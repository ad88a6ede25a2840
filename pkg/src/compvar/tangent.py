"""Scheme tangent spaces of the complex variety, orbit tangent spaces,
extensions from tangent vectors, and the comparison with derived homs.

A tangent vector at a point X with dimension vector (d_m, ..., d_0) consists
of matrices w_ij = delta_i(a_j) (size d_i x d_i) and v_i = sigma_i (size
d_{i-1} x d_i), subject to the linearized defining conditions:

  (a)  w_ij A_ik + A_ij w_ik = sum_l c_jkl w_il          (derivation rule)
  (b)  v_i A_ij + del_i w_ij = w_{i-1,j} del_i + A_{i-1,j} v_i
  (c)  v_{i-1} del_i + del_{i-1} v_i = 0

with A_ij the action of a_j on X_i, del_i the differential, and out-of-range
symbols zero.  Unknowns are ordered: all deltas (degrees descending, then j
ascending, matrices row-major), then all sigmas (degrees descending); this
fixed layout makes every reported basis reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import (ChainMap, ComplexPoint, chain_map_from_components,
                        classify, homotopy_hom, is_variety_point, make_complex,
                        stalk, validate_point)
from .derived import derived_hom_dim
from .errors import (NotAlmostProjective, NotProjectiveComplex, ShapeMismatch,
                     ValidationFailure)
from .linalg import LinearSolver, Matrix, Subspace
from .modules import ext1_dim_oracle, make_module


@dataclass(frozen=True, eq=False)
class TangentVector:
    """deltas: per listed degree the s matrices delta_i(a_j); sigmas: the
    blocks sigma_i mapping degree i to degree i-1."""

    complex: ComplexPoint
    deltas: tuple  # ((i, (m_0, ..., m_{s-1})), ...) degrees descending
    sigmas: tuple  # ((i, matrix), ...) degrees descending

    def delta(self, i: int, j: int) -> Matrix:
        for deg, mats in self.deltas:
            if deg == i:
                return mats[j]
        d = self.complex.dim_at(i)
        return Matrix.zeros(self.complex.field, d, d)

    def sigma(self, i: int) -> Matrix:
        for deg, m in self.sigmas:
            if deg == i:
                return m
        return Matrix.zeros(self.complex.field,
                            self.complex.dim_at(i - 1), self.complex.dim_at(i))

    def is_zero(self) -> bool:
        return (all(m.is_zero() for _, mats in self.deltas for m in mats)
                and all(m.is_zero() for _, m in self.sigmas))

    def add(self, other: "TangentVector") -> "TangentVector":
        deltas = tuple((i, tuple(a + b for a, b in zip(ms, other_ms)))
                       for (i, ms), (_, other_ms) in zip(self.deltas, other.deltas))
        sigmas = tuple((i, a + other.sigma(i)) for i, a in self.sigmas)
        return TangentVector(self.complex, deltas, sigmas)

    def scale(self, c) -> "TangentVector":
        deltas = tuple((i, tuple(m.scale(c) for m in ms)) for i, ms in self.deltas)
        sigmas = tuple((i, m.scale(c)) for i, m in self.sigmas)
        return TangentVector(self.complex, deltas, sigmas)


def tangent_vector(x: ComplexPoint, deltas: dict, sigmas: dict) -> TangentVector:
    """Assemble a tangent vector from matrices keyed by degree; shapes are
    checked, the linear invariants are checked by membership or by chi."""
    dts = []
    for i in range(x.top, x.bottom - 1, -1):
        if x.dim_at(i) == 0:
            continue
        mats = deltas.get(i)
        if mats is None:
            mats = tuple(Matrix.zeros(x.field, x.dim_at(i), x.dim_at(i))
                         for _ in range(x.algebra.dim))
        mats = tuple(mats)
        if len(mats) != x.algebra.dim:
            raise ShapeMismatch(f"need {x.algebra.dim} delta matrices at degree {i}")
        for m in mats:
            if m.shape != (x.dim_at(i), x.dim_at(i)):
                raise ShapeMismatch(f"delta block at degree {i} has shape {m.shape}")
        dts.append((i, mats))
    sgs = []
    for i in range(x.top, x.bottom, -1):
        rows, cols = x.dim_at(i - 1), x.dim_at(i)
        if rows == 0 or cols == 0:
            continue
        m = sigmas.get(i, Matrix.zeros(x.field, rows, cols))
        if m.shape != (rows, cols):
            raise ShapeMismatch(f"sigma block at degree {i} has shape {m.shape}")
        sgs.append((i, m))
    return TangentVector(x, tuple(dts), tuple(sgs))


def zero_tangent_vector(x: ComplexPoint) -> TangentVector:
    return tangent_vector(x, {}, {})


@dataclass(frozen=True, eq=False)
class TangentLayout:
    """Frozen flattening of tangent coordinates: delta blocks first
    (degrees descending, j ascending, row-major), then sigma blocks."""

    complex: ComplexPoint
    blocks: tuple  # ("delta", i, j, d) or ("sigma", i, rows, cols)

    @property
    def ambient_dim(self) -> int:
        total = 0
        for b in self.blocks:
            if b[0] == "delta":
                total += b[3] * b[3]
            else:
                total += b[2] * b[3]
        return total

    def flatten(self, v: TangentVector) -> tuple:
        out = []
        for b in self.blocks:
            if b[0] == "delta":
                out.extend(v.delta(b[1], b[2]).flat())
            else:
                out.extend(v.sigma(b[1]).flat())
        return tuple(out)

    def unflatten(self, vec: tuple) -> TangentVector:
        field = self.complex.field
        deltas, sigmas = {}, {}
        pos = 0
        for b in self.blocks:
            if b[0] == "delta":
                _, i, j, d = b
                m = Matrix.from_flat(field, d, d, vec[pos:pos + d * d])
                pos += d * d
                deltas.setdefault(i, [None] * self.complex.algebra.dim)[j] = m
            else:
                _, i, rows, cols = b
                sigmas[i] = Matrix.from_flat(field, rows, cols,
                                             vec[pos:pos + rows * cols])
                pos += rows * cols
        return tangent_vector(self.complex, deltas, sigmas)


def tangent_layout(x: ComplexPoint) -> TangentLayout:
    blocks = []
    s = x.algebra.dim
    for i in range(x.top, x.bottom - 1, -1):
        d = x.dim_at(i)
        if d == 0:
            continue
        for j in range(s):
            blocks.append(("delta", i, j, d))
    for i in range(x.top, x.bottom, -1):
        rows, cols = x.dim_at(i - 1), x.dim_at(i)
        if rows and cols:
            blocks.append(("sigma", i, rows, cols))
    return TangentLayout(x, tuple(blocks))


def _require_point(x: ComplexPoint) -> None:
    if not is_variety_point(x):
        raise ValidationFailure("tangent computations need non-negative degrees")
    witness = validate_point(x)
    if witness is not None:
        raise ValidationFailure(f"base point fails complex conditions: {witness}",
                                witness=witness)


def _offsets(layout: TangentLayout) -> dict:
    offsets = {}
    pos = 0
    for b in layout.blocks:
        if b[0] == "delta":
            offsets[("delta", b[1], b[2])] = pos
            pos += b[3] * b[3]
        else:
            offsets[("sigma", b[1])] = pos
            pos += b[2] * b[3]
    return offsets


def tangent_system_matrix(x: ComplexPoint, layout: TangentLayout) -> Matrix:
    """Coefficient matrix of the linear system (a), (b), (c)."""
    field = x.field
    s = x.algebra.dim
    offsets = _offsets(layout)
    nunk = layout.ambient_dim
    z = field.zero()
    rows = []

    def delta_off(i, j):
        return offsets.get(("delta", i, j))

    # (a): derivation rule per degree and basis pair
    for i in x.degrees():
        d = x.dim_at(i)
        if d == 0:
            continue
        acts = x.term(i).action
        for j in range(s):
            for k in range(s):
                prod = x.algebra.products[j][k]
                for r in range(d):
                    for c in range(d):
                        row = [z] * nunk
                        base_j = delta_off(i, j)
                        base_k = delta_off(i, k)
                        for b in range(d):
                            coeff = acts[k].entry(b, c)
                            if coeff:
                                idx = base_j + r * d + b
                                row[idx] = field.add(row[idx], coeff)
                            coeff = acts[j].entry(r, b)
                            if coeff:
                                idx = base_k + b * d + c
                                row[idx] = field.add(row[idx], coeff)
                        for l, coeff in enumerate(prod):
                            if coeff:
                                idx = delta_off(i, l) + r * d + c
                                row[idx] = field.sub(row[idx], coeff)
                        if any(row):
                            rows.append(row)

    # (b): compatibility of sigma with the module actions
    for i in range(x.bottom + 1, x.top + 1):
        dlo, dhi = x.dim_at(i - 1), x.dim_at(i)
        if dlo == 0 or dhi == 0:
            continue
        di = x.diff(i)
        acts_hi = x.term(i).action
        acts_lo = x.term(i - 1).action
        sig = offsets[("sigma", i)]
        for j in range(s):
            for r in range(dlo):
                for c in range(dhi):
                    row = [z] * nunk
                    for b in range(dhi):
                        coeff = acts_hi[j].entry(b, c)
                        if coeff:
                            idx = sig + r * dhi + b
                            row[idx] = field.add(row[idx], coeff)
                        coeff = di.entry(r, b)
                        if coeff:
                            idx = delta_off(i, j) + b * dhi + c
                            row[idx] = field.add(row[idx], coeff)
                    for b in range(dlo):
                        coeff = acts_lo[j].entry(r, b)
                        if coeff:
                            idx = sig + b * dhi + c
                            row[idx] = field.sub(row[idx], coeff)
                        coeff = di.entry(b, c)
                        if coeff:
                            idx = delta_off(i - 1, j) + r * dlo + b
                            row[idx] = field.sub(row[idx], coeff)
                    if any(row):
                        rows.append(row)

    # (c): sigma is a square-zero perturbation direction
    for i in range(x.bottom + 2, x.top + 1):
        d2, d1, d0 = x.dim_at(i), x.dim_at(i - 1), x.dim_at(i - 2)
        if d0 == 0 or d1 == 0 or d2 == 0:
            continue
        di = x.diff(i)
        dprev = x.diff(i - 1)
        sig_i = offsets.get(("sigma", i))
        sig_prev = offsets.get(("sigma", i - 1))
        for r in range(d0):
            for c in range(d2):
                row = [z] * nunk
                for b in range(d1):
                    coeff = di.entry(b, c)
                    if coeff and sig_prev is not None:
                        idx = sig_prev + r * d1 + b
                        row[idx] = field.add(row[idx], coeff)
                    coeff = dprev.entry(r, b)
                    if coeff and sig_i is not None:
                        idx = sig_i + b * d2 + c
                        row[idx] = field.add(row[idx], coeff)
                if any(row):
                    rows.append(row)

    if not rows:
        return Matrix.zeros(field, 0, nunk)
    return Matrix.from_rows(field, rows)


def tangent_space(x: ComplexPoint):
    """(layout, Subspace) for the scheme tangent space at x."""
    _require_point(x)
    layout = tangent_layout(x)
    system = tangent_system_matrix(x, layout)
    if system.nrows == 0:
        return layout, Subspace.full(x.field, layout.ambient_dim)
    return layout, system.kernel()


def tangent_space_basis(x: ComplexPoint) -> list:
    layout, space = tangent_space(x)
    return [layout.unflatten(v) for v in space.basis]


# -- orbit tangent space ------------------------------------------------------------


def _lie_blocks(x: ComplexPoint) -> tuple:
    return tuple((i, x.dim_at(i)) for i in range(x.top, x.bottom - 1, -1)
                 if x.dim_at(i))


def lie_dim(x: ComplexPoint) -> int:
    return sum(d * d for _, d in _lie_blocks(x))


def orbit_map_matrix(x: ComplexPoint, layout: TangentLayout) -> Matrix:
    """Matrix of t = (t_i) |-> (delta_i(a_j) = t_i A_ij - A_ij t_i,
    sigma_i = t_{i-1} del_i - del_i t_i), columns indexed by Lie coordinates
    (degrees descending, row-major)."""
    field = x.field
    s = x.algebra.dim
    columns = []
    for deg, d in _lie_blocks(x):
        acts = x.term(deg).action
        for a in range(d):
            for b in range(d):
                unit = Matrix.from_rows(
                    field, [[field.one() if (r == a and c == b) else field.zero()
                             for c in range(d)] for r in range(d)])
                deltas = {deg: tuple(unit @ acts[j] - acts[j] @ unit
                                     for j in range(s))}
                sigmas = {}
                if x.dim_at(deg - 1):
                    low = x.diff(deg) @ unit
                    if not low.is_zero():
                        sigmas[deg] = -low
                if x.dim_at(deg + 1):
                    up = unit @ x.diff(deg + 1)
                    if not up.is_zero():
                        sigmas[deg + 1] = up
                v = tangent_vector(x, deltas, sigmas)
                columns.append(list(layout.flatten(v)))
    if not columns:
        return Matrix.zeros(field, layout.ambient_dim, 0)
    return Matrix.from_rows(field, columns).transpose()


def orbit_tangent(x: ComplexPoint):
    """(layout, orbit subspace, stabilizer Lie dimension)."""
    layout, tspace = tangent_space(x)
    m = orbit_map_matrix(x, layout)
    orbit = m.column_space()
    if not tspace.contains_subspace(orbit):
        raise ValidationFailure("orbit directions escape the tangent space")
    return layout, orbit, lie_dim(x) - orbit.dim


def orbit_tangent_basis(x: ComplexPoint):
    """(Subspace of flattened tangent vectors, stabilizer_lie_dim)."""
    _, orbit, stab = orbit_tangent(x)
    return orbit, stab


def quotient_dim(x: ComplexPoint) -> int:
    layout, tspace = tangent_space(x)
    m = orbit_map_matrix(x, layout)
    return tspace.dim - m.rank()


# -- extensions from tangent vectors --------------------------------------------------


def chi(x: ComplexPoint, v: TangentVector):
    """Doubled complex Z with off-diagonal blocks from v, plus the inclusion
    and projection chain maps of the degreewise-split extension
    0 -> X -> Z -> X -> 0."""
    field = x.field
    s = x.algebra.dim
    terms = []
    for i in x.degrees():
        d = x.dim_at(i)
        acts = x.term(i).action
        doubled = []
        for j in range(s):
            doubled.append(Matrix.block([
                [acts[j], v.delta(i, j)],
                [Matrix.zeros(field, d, d), acts[j]],
            ]))
        terms.append(make_module(x.algebra, doubled))
    diffs = []
    for i in range(x.bottom + 1, x.top + 1):
        d_hi, d_lo = x.dim_at(i), x.dim_at(i - 1)
        diffs.append(Matrix.block([
            [x.diff(i), v.sigma(i)],
            [Matrix.zeros(field, d_lo, d_hi), x.diff(i)],
        ]))
    z = make_complex(x.algebra, x.bottom, terms, diffs)
    inc_comps, proj_comps = {}, {}
    for i in x.degrees():
        d = x.dim_at(i)
        if d == 0:
            continue
        inc_comps[i] = Matrix.vstack([Matrix.identity(field, d),
                                      Matrix.zeros(field, d, d)])
        proj_comps[i] = Matrix.hstack([Matrix.zeros(field, d, d),
                                       Matrix.identity(field, d)])
    inclusion = chain_map_from_components(x, z, 0, inc_comps)
    projection = chain_map_from_components(z, x, 0, proj_comps)
    for i in x.degrees():
        d = x.dim_at(i)
        if inclusion.component(i).rank() != d:
            raise ValidationFailure("extension inclusion dropped rank")
        if projection.component(i).rank() != d:
            raise ValidationFailure("extension projection dropped rank")
        if not (projection.component(i) @ inclusion.component(i)).is_zero():
            raise ValidationFailure("extension fails exactness in the middle")
    return z, inclusion, projection


def chi_splitting(x: ComplexPoint, v: TangentVector):
    """Section data for the extension chi(x, v): matrices t_i with
    t_i A_ij - A_ij t_i = delta_i(a_j) and t_{i-1} del_i - del_i t_i =
    sigma_i, or None when the extension does not split (equivalently, v
    lies outside the orbit tangent space)."""
    layout = tangent_layout(x)
    m = orbit_map_matrix(x, layout)
    coeffs = LinearSolver(m).solve(layout.flatten(v))
    if coeffs is None:
        return None
    field = x.field
    ts = {}
    pos = 0
    for deg, d in _lie_blocks(x):
        ts[deg] = Matrix.from_flat(field, d, d, coeffs[pos:pos + d * d])
        pos += d * d
    return ts


# -- the comparison map eta -------------------------------------------------------------


def _derivation_solvers(x: ComplexPoint) -> dict:
    """Per degree, a solver for t |-> (t A_ij - A_ij t)_{j>=1} stacked."""
    field = x.field
    s = x.algebra.dim
    solvers = {}
    for i in x.degrees():
        d = x.dim_at(i)
        if d == 0:
            continue
        acts = x.term(i).action
        rows = []
        for j in range(1, s):
            a = acts[j]
            for r in range(d):
                for c in range(d):
                    row = [field.zero()] * (d * d)
                    for b in range(d):
                        coeff = a.entry(b, c)
                        if coeff:
                            idx = r * d + b
                            row[idx] = field.add(row[idx], coeff)
                        coeff = a.entry(r, b)
                        if coeff:
                            idx = b * d + c
                            row[idx] = field.sub(row[idx], coeff)
                    rows.append(row)
        if not rows:
            rows = [[field.zero()] * (d * d)]
        solvers[i] = LinearSolver(Matrix.from_rows(field, rows))
    return solvers


def eta(x: ComplexPoint, v: TangentVector, _solvers: dict | None = None) -> ChainMap:
    """Corrected sigma: peel off the inner-derivation part of the deltas
    degreewise, leaving an A-linear shift-1 chain map X -> X[1] whose
    homotopy class is the image of v."""
    if not classify(x).is_projective_complex:
        raise NotProjectiveComplex("eta needs every term projective")
    field = x.field
    s = x.algebra.dim
    solvers = _solvers if _solvers is not None else _derivation_solvers(x)
    ts = {}
    for i in x.degrees():
        d = x.dim_at(i)
        if d == 0:
            continue
        rhs = []
        for j in range(1, s):
            rhs.extend(v.delta(i, j).flat())
        if not rhs:
            rhs = [field.zero()]
        sol = solvers[i].solve(tuple(rhs))
        if sol is None:
            raise ValidationFailure(
                f"inner-derivation solve infeasible at degree {i}; "
                f"term is not projective")
        ts[i] = Matrix.from_flat(field, d, d, sol)
    comps = {}
    for i in range(x.bottom + 1, x.top + 1):
        dlo, dhi = x.dim_at(i - 1), x.dim_at(i)
        if dlo == 0 or dhi == 0:
            continue
        t_lo = ts.get(i - 1, Matrix.zeros(field, dlo, dlo))
        t_hi = ts.get(i, Matrix.zeros(field, dhi, dhi))
        inner = t_lo @ x.diff(i) - x.diff(i) @ t_hi
        comps[i] = v.sigma(i) - inner
    return chain_map_from_components(x, x, 1, comps)


def eta_kernel(x: ComplexPoint):
    """(layout, kernel of eta as a subspace of tangent coordinates,
    image dimension in the homotopy quotient)."""
    layout, tspace = tangent_space(x)
    solvers = _derivation_solvers(x)
    hom1 = homotopy_hom(x, x, 1)
    qm = hom1.nullhomotopic.quotient_matrix()
    columns = []
    for vec in tspace.basis:
        v = layout.unflatten(vec)
        sp = eta(x, v, _solvers=solvers)
        columns.append(list(qm.mat_vec(hom1.space.flatten(sp))))
    field = x.field
    if not columns:
        return layout, Subspace.zero(field, layout.ambient_dim), 0
    m = Matrix.from_rows(field, columns).transpose()
    coeff_kernel = m.kernel()
    vectors = []
    for coeffs in coeff_kernel.basis:
        acc = [field.zero()] * layout.ambient_dim
        for c, basis_vec in zip(coeffs, tspace.basis):
            if c:
                for k, entry in enumerate(basis_vec):
                    acc[k] = field.add(acc[k], field.mul(c, entry))
        vectors.append(tuple(acc))
    kernel = Subspace.from_vectors(field, layout.ambient_dim, vectors)
    return layout, kernel, m.rank()


# -- theorem-level verdicts -------------------------------------------------------------


def verify_theorem7(x: ComplexPoint) -> dict:
    """Compare dim T/O with dim Hom of X into its shift in the derived
    category; equality is enforced for projective complexes, the inequality
    for almost projective ones."""
    cls = classify(x)
    if not cls.is_almost_projective:
        raise NotAlmostProjective("the comparison needs an almost projective complex")
    layout, tspace = tangent_space(x)
    m = orbit_map_matrix(x, layout)
    orbit_dim = m.rank()
    quotient = tspace.dim - orbit_dim
    dh = derived_hom_dim(x, x, 1)
    if cls.is_projective_complex:
        verdict = "equality"
        if quotient != dh:
            raise ValidationFailure(
                f"tangent quotient {quotient} != derived hom {dh} on a "
                f"projective complex")
    else:
        verdict = "embedding"
        if quotient > dh:
            raise ValidationFailure(
                f"tangent quotient {quotient} exceeds derived hom {dh}")
    return {
        "tangent_dim": tspace.dim,
        "orbit_dim": orbit_dim,
        "quotient": quotient,
        "derived_hom_dim": dh,
        "verdict": verdict,
    }


def is_rigid(x: ComplexPoint) -> bool:
    if not classify(x).is_almost_projective:
        raise NotAlmostProjective("rigidity is defined here for almost "
                                  "projective complexes")
    return derived_hom_dim(x, x, 1) == 0


def corollary8_check(x: ComplexPoint) -> bool:
    """For rigid complexes the orbit must be open at the tangent level."""
    if not is_rigid(x):
        return True
    return quotient_dim(x) == 0


def voigt_check(m, degree: int = 0) -> dict:
    """Module-variety specialization: the tangent quotient of the stalk is
    bounded by (and generically equals) the self-extension dimension."""
    if degree < 0:
        raise ValidationFailure("stalk degree must be non-negative")
    x = stalk(m, degree)
    layout, tspace = tangent_space(x)
    omatrix = orbit_map_matrix(x, layout)
    orbit_dim = omatrix.rank()
    quotient = tspace.dim - orbit_dim
    ext = ext1_dim_oracle(m, m)
    if quotient > ext:
        raise ValidationFailure(
            f"tangent quotient {quotient} exceeds self-extension count {ext}")
    return {
        "module_dim": m.dim,
        "degree": degree,
        "tangent_dim": tspace.dim,
        "orbit_dim": orbit_dim,
        "quotient": quotient,
        "ext1_dim": ext,
        "equality": quotient == ext,
    }
