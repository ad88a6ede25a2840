"""Bounded chain complexes of module representations and their maps.

A complex point stores terms for a window of degrees [bottom, top] with
differentials lowering degree by one; out-of-range terms and differentials
are zero, and one accessor pair centralizes that bookkeeping.  The shift
uses (X[n])_i = X_{i-n} with differential (-1)^n * d, a chain map of shift n
has components f_i : X_i -> Y_{i-n}, and the mapping cone of f : X -> Y is
C_i = X_{i-1} (+) Y_i with differential [[-dX, 0], [-f, dY]].
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import FDAlgebra
from .errors import (AlgebraMismatch, NotProjectiveComplex, ShapeMismatch,
                     ValidationFailure)
from .linalg import Matrix, Subspace
from .modules import (ModuleRep, WitnessSearch, conjugate_module,
                      direct_sum_modules, hom_matrices, is_projective,
                      projective_cover, search_invertible_combination,
                      submodule, validate_module, zero_module)


@dataclass(frozen=True)
class ComplexPoint:
    """Bounded complex: ``terms[t]`` lives in degree ``bottom + t`` and
    ``diffs[t]`` is the differential from degree ``bottom + t + 1`` down to
    ``bottom + t``."""

    algebra: FDAlgebra
    bottom: int
    terms: tuple   # ModuleRep per degree bottom..top
    diffs: tuple   # len(terms) - 1 matrices (empty when <= 1 term)

    def __post_init__(self):
        if not self.terms:
            raise ShapeMismatch("complex needs at least one degree slot")
        if len(self.diffs) != len(self.terms) - 1:
            raise ShapeMismatch("wrong number of differentials")
        for t, d in enumerate(self.diffs):
            lo, hi = self.terms[t], self.terms[t + 1]
            if d.shape != (lo.dim, hi.dim):
                raise ShapeMismatch(
                    f"differential into degree {self.bottom + t} has shape "
                    f"{d.shape}, expected {(lo.dim, hi.dim)}")

    # -- window access -------------------------------------------------------

    @property
    def top(self) -> int:
        return self.bottom + len(self.terms) - 1

    @property
    def field(self):
        return self.algebra.field

    def degrees(self) -> range:
        return range(self.bottom, self.top + 1)

    def term(self, i: int) -> ModuleRep:
        if self.bottom <= i <= self.top:
            return self.terms[i - self.bottom]
        return zero_module(self.algebra)

    def dim_at(self, i: int) -> int:
        return self.term(i).dim

    def diff(self, i: int) -> Matrix:
        """The differential from degree i to degree i-1 (zero out of range)."""
        t = i - self.bottom - 1
        if 0 <= t < len(self.diffs):
            return self.diffs[t]
        return Matrix.zeros(self.field, self.dim_at(i - 1), self.dim_at(i))

    def dims(self) -> tuple:
        """Dimension vector, top degree first."""
        return tuple(self.dim_at(i) for i in range(self.top, self.bottom - 1, -1))

    def total_dim(self) -> int:
        return sum(t.dim for t in self.terms)

    def left_degree(self):
        """Largest degree with a nonzero term, or None for the zero complex."""
        for i in range(self.top, self.bottom - 1, -1):
            if self.dim_at(i):
                return i
        return None

    def is_zero(self) -> bool:
        return self.left_degree() is None

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * self.dim_at(i) for i in self.degrees())

    def __str__(self):
        return (f"<complex degrees {self.top}..{self.bottom} "
                f"dims {self.dims()} over {self.field}>")


def make_complex(algebra: FDAlgebra, bottom: int, terms, diffs,
                 check: bool = True) -> ComplexPoint:
    x = ComplexPoint(algebra, bottom, tuple(terms), tuple(diffs))
    if check:
        witness = validate_point(x)
        if witness is not None:
            raise ValidationFailure(f"complex conditions fail: {witness}",
                                    witness=witness)
    return x


def validate_point(x: ComplexPoint) -> tuple | None:
    """Check module relations per degree (alpha), A-linearity of every
    differential (beta), and d.d = 0 (gamma); returns the first failure."""
    for i in x.degrees():
        w = validate_module(x.term(i))
        if w is not None:
            return ("alpha", i) + w
    for i in range(x.bottom + 1, x.top + 1):
        d = x.diff(i)
        hi, lo = x.term(i), x.term(i - 1)
        for j in range(x.algebra.dim):
            if d @ hi.action[j] != lo.action[j] @ d:
                return ("beta", i, j)
    for i in range(x.bottom + 2, x.top + 1):
        if not (x.diff(i - 1) @ x.diff(i)).is_zero():
            return ("gamma", i)
    return None


def is_variety_point(x: ComplexPoint) -> bool:
    """Points of the variety live in non-negative degrees."""
    return x.bottom >= 0


def with_bottom_zero(x: ComplexPoint) -> ComplexPoint:
    """Re-window the same complex so that the bottom slot is degree 0,
    padding with zero terms or trimming zero-dimensional slots."""
    if x.bottom == 0:
        return x
    if x.bottom > 0:
        pad = [zero_module(x.algebra) for _ in range(x.bottom)]
        terms = tuple(pad) + x.terms
        zdiffs = []
        for i in range(1, x.bottom + 1):
            zdiffs.append(Matrix.zeros(x.field, x.dim_at(i - 1), x.dim_at(i)))
        return ComplexPoint(x.algebra, 0, terms, tuple(zdiffs) + x.diffs)
    keep = x.bottom
    while keep < 0:
        if x.dim_at(keep):
            raise ValidationFailure(
                f"nonzero term in negative degree {keep}; not a variety point")
        keep += 1
    drop = -x.bottom
    return ComplexPoint(x.algebra, 0, x.terms[drop:], x.diffs[drop:])


# -- constructors -------------------------------------------------------------

def stalk(m: ModuleRep, degree: int = 0) -> ComplexPoint:
    """The module M concentrated in one degree."""
    return ComplexPoint(m.algebra, degree, (m,), ())


def shift(x: ComplexPoint, n: int) -> ComplexPoint:
    """X[n] carries X_{i-n} in slot i and negates the differential for odd n."""
    diffs = x.diffs if n % 2 == 0 else tuple(-d for d in x.diffs)
    return ComplexPoint(x.algebra, x.bottom + n, x.terms, diffs)


def direct_sum(x: ComplexPoint, y: ComplexPoint) -> ComplexPoint:
    if x.algebra != y.algebra:
        raise AlgebraMismatch("direct sum over different algebras")
    bottom = min(x.bottom, y.bottom)
    top = max(x.top, y.top)
    terms, diffs = [], []
    for i in range(bottom, top + 1):
        s, _, _ = direct_sum_modules([x.term(i), y.term(i)])
        terms.append(s)
    for i in range(bottom + 1, top + 1):
        diffs.append(Matrix.block_diag(x.field, [x.diff(i), y.diff(i)]))
    return ComplexPoint(x.algebra, bottom, tuple(terms), tuple(diffs))


# -- chain maps ----------------------------------------------------------------

@dataclass(frozen=True)
class ChainMap:
    """Map of shift n: components f_i : X_i -> Y_{i-n}, absent means zero;
    satisfies (-1)^n dY f = f dX."""

    source: ComplexPoint
    target: ComplexPoint
    shift: int
    comps: tuple  # ((degree, Matrix), ...) sorted descending by degree

    def component(self, i: int) -> Matrix:
        for d, m in self.comps:
            if d == i:
                return m
        return Matrix.zeros(self.source.field,
                            self.target.dim_at(i - self.shift),
                            self.source.dim_at(i))

    def validate(self) -> tuple | None:
        x, y, n = self.source, self.target, self.shift
        sign = y.field.one() if n % 2 == 0 else y.field.neg(y.field.one())
        for i in x.degrees():
            f = self.component(i)
            if f.shape != (y.dim_at(i - n), x.dim_at(i)):
                return ("shape", i)
            for j in range(x.algebra.dim):
                if f @ x.term(i).action[j] != y.term(i - n).action[j] @ f:
                    return ("linearity", i, j)
        for i in range(x.bottom, x.top + 2):
            lhs = (y.diff(i - n) @ self.component(i)).scale(sign)
            rhs = self.component(i - 1) @ x.diff(i)
            if lhs != rhs:
                return ("square", i)
        return None

    def then(self, other: "ChainMap") -> "ChainMap":
        """Composite 'self first, then other' (shifts add)."""
        if other.source is not self.target and other.source != self.target:
            raise ShapeMismatch("chain maps do not compose")
        comps = []
        for i in self.source.degrees():
            m = other.component(i - self.shift) @ self.component(i)
            if not m.is_zero():
                comps.append((i, m))
        return ChainMap(self.source, other.target, self.shift + other.shift,
                        tuple(sorted(comps, reverse=True)))

    def add(self, other: "ChainMap") -> "ChainMap":
        comps = []
        for i in self.source.degrees():
            m = self.component(i) + other.component(i)
            if not m.is_zero():
                comps.append((i, m))
        return ChainMap(self.source, self.target, self.shift,
                        tuple(sorted(comps, reverse=True)))

    def scale(self, c) -> "ChainMap":
        comps = tuple((i, m.scale(c)) for i, m in self.comps)
        return ChainMap(self.source, self.target, self.shift, comps)

    def is_zero(self) -> bool:
        return all(m.is_zero() for _, m in self.comps)


def identity_chain_map(x: ComplexPoint) -> ChainMap:
    comps = tuple((i, Matrix.identity(x.field, x.dim_at(i)))
                  for i in range(x.top, x.bottom - 1, -1) if x.dim_at(i))
    return ChainMap(x, x, 0, comps)


def chain_map_from_components(x: ComplexPoint, y: ComplexPoint, n: int,
                              comps: dict, check: bool = True) -> ChainMap:
    items = tuple(sorted(((i, m) for i, m in comps.items() if not m.is_zero()),
                         reverse=True))
    f = ChainMap(x, y, n, items)
    if check:
        witness = f.validate()
        if witness is not None:
            raise ValidationFailure(f"not a chain map: {witness}", witness=witness)
    return f


def mapping_cone(f: ChainMap) -> ComplexPoint:
    """Cone of a shift-0 chain map."""
    if f.shift != 0:
        raise ShapeMismatch("mapping cone needs a shift-0 chain map")
    x, y = f.source, f.target
    bottom = min(x.bottom + 1, y.bottom)
    top = max(x.top + 1, y.top)
    terms = []
    for i in range(bottom, top + 1):
        s, _, _ = direct_sum_modules([x.term(i - 1), y.term(i)])
        terms.append(s)
    diffs = []
    for i in range(bottom + 1, top + 1):
        blocks = [[-x.diff(i - 1),
                   Matrix.zeros(x.field, x.dim_at(i - 2), y.dim_at(i))],
                  [-f.component(i - 1), y.diff(i)]]
        diffs.append(Matrix.block(blocks))
    return ComplexPoint(x.algebra, bottom, tuple(terms), tuple(diffs))


# -- group action ----------------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    """Degreewise invertible change of basis (g_i), identity off-window."""

    comps: tuple  # ((degree, Matrix), ...)

    def component(self, i: int, dim: int, field) -> Matrix:
        for d, m in self.comps:
            if d == i:
                if m.shape != (dim, dim):
                    raise ShapeMismatch(f"group component at degree {i} has "
                                        f"shape {m.shape}, expected {(dim, dim)}")
                return m
        return Matrix.identity(field, dim)

    def inverse(self) -> "GroupElement":
        out = []
        for d, m in self.comps:
            inv = m.inverse()
            if inv is None:
                raise ValidationFailure(f"group component at degree {d} is singular")
            out.append((d, inv))
        return GroupElement(tuple(out))


def act(g: GroupElement, x: ComplexPoint) -> ComplexPoint:
    """Transport of structure: modules by conjugation, differentials by
    g_{i-1} d_i g_i^{-1}."""
    field = x.field
    gs = {i: g.component(i, x.dim_at(i), field) for i in x.degrees()}
    for i, m in gs.items():
        if m.inverse() is None:
            raise ValidationFailure(f"group component at degree {i} is singular")
    terms = [conjugate_module(x.term(i), gs[i]) if x.dim_at(i) else x.term(i)
             for i in x.degrees()]
    diffs = []
    for i in range(x.bottom + 1, x.top + 1):
        diffs.append(gs[i - 1] @ x.diff(i) @ gs[i].inverse())
    return ComplexPoint(x.algebra, x.bottom, tuple(terms), tuple(diffs))


# -- chain map spaces and homotopies ----------------------------------------------

@dataclass(frozen=True)
class ChainMapSpace:
    """All chain maps X -> Y of a given shift, as a subspace of the
    row-major flattening of the nonzero components (source degree
    descending)."""

    source: ComplexPoint
    target: ComplexPoint
    shift: int
    layout: tuple  # ((degree, rows, cols), ...)
    subspace: Subspace

    @property
    def ambient_dim(self) -> int:
        return sum(r * c for _, r, c in self.layout)

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def unflatten(self, vec: tuple) -> ChainMap:
        comps = []
        pos = 0
        for i, r, c in self.layout:
            block = vec[pos:pos + r * c]
            pos += r * c
            m = Matrix.from_flat(self.source.field, r, c, block)
            if not m.is_zero():
                comps.append((i, m))
        return ChainMap(self.source, self.target, self.shift,
                        tuple(sorted(comps, reverse=True)))

    def flatten(self, f: ChainMap) -> tuple:
        out = []
        for i, r, c in self.layout:
            out.extend(f.component(i).flat())
        return tuple(out)

    def basis_maps(self) -> list:
        return [self.unflatten(v) for v in self.subspace.basis]


def _map_layout(x: ComplexPoint, y: ComplexPoint, n: int) -> tuple:
    layout = []
    for i in range(x.top, x.bottom - 1, -1):
        r, c = y.dim_at(i - n), x.dim_at(i)
        if r and c:
            layout.append((i, r, c))
    return tuple(layout)


def chain_map_space(x: ComplexPoint, y: ComplexPoint, n: int) -> ChainMapSpace:
    """Solve the A-linearity and (signed) square conditions for shift-n maps."""
    if x.algebra != y.algebra:
        raise AlgebraMismatch("chain maps between complexes over different algebras")
    field = x.field
    layout = _map_layout(x, y, n)
    offsets = {}
    pos = 0
    for i, r, c in layout:
        offsets[i] = (pos, r, c)
        pos += r * c
    nunk = pos
    if nunk == 0:
        return ChainMapSpace(x, y, n, layout, Subspace.zero(field, 0))
    sign = field.one() if n % 2 == 0 else field.neg(field.one())
    rows = []
    z = field.zero()
    # A-linearity per component
    for i, r, c in layout:
        base = offsets[i][0]
        rhox = x.term(i).action
        rhoy = y.term(i - n).action
        for j in range(1, x.algebra.dim):
            mj, nj = rhox[j], rhoy[j]
            for a in range(r):
                for b in range(c):
                    row = [z] * nunk
                    for k in range(c):
                        coeff = mj.entry(k, b)
                        if coeff:
                            row[base + a * c + k] = field.add(row[base + a * c + k], coeff)
                    for k in range(r):
                        coeff = nj.entry(a, k)
                        if coeff:
                            row[base + k * c + b] = field.sub(row[base + k * c + b], coeff)
                    if any(row):
                        rows.append(row)
    # signed squares: (-1)^n dY_{i-n} f_i  =  f_{i-1} dX_i
    for i in range(x.bottom, x.top + 2):
        rtgt = y.dim_at(i - n - 1)
        csrc = x.dim_at(i)
        if rtgt == 0 or csrc == 0:
            continue
        has_fi = i in offsets
        has_fprev = (i - 1) in offsets
        if not has_fi and not has_fprev:
            continue
        dy = y.diff(i - n)
        dx = x.diff(i)
        for a in range(rtgt):
            for b in range(csrc):
                row = [z] * nunk
                if has_fi:
                    base, r, c = offsets[i]
                    for k in range(r):
                        coeff = field.mul(sign, dy.entry(a, k))
                        if coeff:
                            row[base + k * c + b] = field.add(row[base + k * c + b], coeff)
                if has_fprev:
                    base, r, c = offsets[i - 1]
                    for k in range(c):
                        coeff = dx.entry(k, b)
                        if coeff:
                            row[base + a * c + k] = field.sub(row[base + a * c + k], coeff)
                if any(row):
                    rows.append(row)
    if not rows:
        space = Subspace.full(field, nunk)
    else:
        space = Matrix.from_rows(field, rows).kernel()
    return ChainMapSpace(x, y, n, layout, space)


@dataclass(frozen=True)
class HomotopyHom:
    """Chain maps of a given shift modulo null-homotopic ones."""

    space: ChainMapSpace
    chainmaps: Subspace
    nullhomotopic: Subspace

    @property
    def hom_dim(self) -> int:
        return self.chainmaps.dim - self.nullhomotopic.dim


def homotopy_hom(x: ComplexPoint, y: ComplexPoint, n: int) -> HomotopyHom:
    """Hom up to homotopy: null-homotopic maps are boundaries
    (-1)^n dY s + s dX of A-linear families s of shift n+1."""
    cms = chain_map_space(x, y, n)
    field = x.field
    sign = field.one() if n % 2 == 0 else field.neg(field.one())
    boundaries = []
    for i in x.degrees():
        if not x.dim_at(i) or not y.dim_at(i - n + 1):
            continue
        for h in hom_matrices(x.term(i), y.term(i - n + 1)):
            comps = {}
            upper = (y.diff(i - n + 1) @ h).scale(sign)
            if not upper.is_zero():
                comps[i] = upper
            if x.dim_at(i + 1) and y.dim_at(i + 1 - n):
                lower = h @ x.diff(i + 1)
                if not lower.is_zero():
                    comps[i + 1] = lower
            f = ChainMap(x, y, n, tuple(sorted(comps.items(), reverse=True)))
            boundaries.append(cms.flatten(f))
    null = Subspace.from_vectors(field, cms.ambient_dim, boundaries)
    if not cms.subspace.contains_subspace(null):
        raise ValidationFailure("null-homotopic maps escaped the chain map space")
    return HomotopyHom(cms, cms.subspace, null)


# -- homology ---------------------------------------------------------------------

@dataclass(frozen=True)
class HomologyData:
    dim: int
    cycles: Subspace
    boundaries: Subspace


def homology(x: ComplexPoint, i: int) -> HomologyData:
    cycles = x.diff(i).kernel()
    boundaries = x.diff(i + 1).column_space()
    if not cycles.contains_subspace(boundaries):
        raise ValidationFailure(f"d^2 != 0 at degree {i}")
    return HomologyData(cycles.dim - boundaries.dim, cycles, boundaries)


def homology_dims(x: ComplexPoint) -> tuple:
    """Homology dimensions, top degree first (window degrees only)."""
    return tuple(homology(x, i).dim for i in range(x.top, x.bottom - 1, -1))


def is_acyclic(x: ComplexPoint) -> bool:
    return all(h == 0 for h in homology_dims(x))


# -- isomorphism search -------------------------------------------------------------

def complexes_isomorphic(x: ComplexPoint, y: ComplexPoint,
                         seed: int = 0) -> WitnessSearch:
    """Degreewise-invertible chain map search; witnesses transport x to y
    under the group action.  Mismatched dimension vectors or homology are
    proven negatives."""
    lo = min(x.bottom, y.bottom)
    hi = max(x.top, y.top)
    for i in range(lo, hi + 1):
        if x.dim_at(i) != y.dim_at(i):
            return WitnessSearch(False, True)
    if x.total_dim() == 0:
        return WitnessSearch(True, True, identity_chain_map(x))
    for i in range(lo, hi + 1):
        if homology(x, i).dim != homology(y, i).dim:
            return WitnessSearch(False, True)
    cms = chain_map_space(x, y, 0)
    if cms.dim == 0:
        return WitnessSearch(False, True)
    needed = [i for i in range(lo, hi + 1) if x.dim_at(i)]

    def is_iso(f: ChainMap) -> bool:
        return all(f.component(i).is_invertible() for i in needed)

    return search_invertible_combination(
        x.field, list(cms.subspace.basis), cms.unflatten, is_iso, seed=seed)


# -- structure classification --------------------------------------------------------

@dataclass(frozen=True)
class ComplexClass:
    left_degree: object
    is_projective_complex: bool
    is_almost_projective: bool
    projective_terms: tuple


def classify(x: ComplexPoint) -> ComplexClass:
    """Projectivity pattern of the terms; almost projective means every
    term is projective except possibly the leftmost nonzero one."""
    flags = []
    for i in range(x.top, x.bottom - 1, -1):
        flags.append(is_projective(x.term(i)) if x.dim_at(i) else True)
    ld = x.left_degree()
    all_proj = all(flags)
    if ld is None:
        return ComplexClass(None, True, True, tuple(flags))
    almost = all_proj or all(
        flag for i, flag in zip(range(x.top, x.bottom - 1, -1), flags) if i != ld)
    return ComplexClass(ld, all_proj, almost, tuple(flags))


# -- projective replacement -----------------------------------------------------------

def _extend_once(x: ComplexPoint) -> tuple:
    """Replace the top term by its projective cover and prepend the kernel;
    returns (extended complex, canonical quasi-isomorphism onto x)."""
    ld = x.left_degree()
    if ld is None or is_projective(x.term(ld)):
        return x, identity_chain_map(x)
    cover = projective_cover(x.term(ld))
    k_mod, k_inc = submodule(cover.projective, cover.pi.kernel())
    terms = [x.term(i) for i in range(x.bottom, ld)] + [cover.projective, k_mod]
    diffs = [x.diff(i) for i in range(x.bottom + 1, ld)]
    if ld > x.bottom:
        diffs.append(x.diff(ld) @ cover.pi)
    diffs.append(k_inc)
    ext = make_complex(x.algebra, x.bottom, terms, diffs)
    comps = {i: Matrix.identity(x.field, x.dim_at(i))
             for i in range(x.bottom, ld) if x.dim_at(i)}
    comps[ld] = cover.pi
    f = chain_map_from_components(ext, x, 0, comps)
    return ext, f


def projective_extension(x: ComplexPoint, steps: int = 1) -> tuple:
    """Iterate the cover-and-prepend construction ``steps`` times; returns
    (extended complex, composite canonical map), a quasi-isomorphism."""
    current, total = x, identity_chain_map(x)
    for _ in range(steps):
        nxt, f = _extend_once(current)
        if nxt is current:
            break
        total = f.then(total)
        current = nxt
    if not is_acyclic(mapping_cone(total)):
        raise ValidationFailure("canonical replacement map is not a quasi-isomorphism")
    return current, total


def replace_by_projective(x: ComplexPoint, top_degree: int) -> ComplexPoint:
    """Projective complex computing maps out of x in the derived category,
    truncated above ``top_degree`` (callers guarantee the truncation level
    is beyond every target of interest)."""
    cls = classify(x)
    if cls.is_projective_complex:
        return x
    current = x
    while True:
        ld = current.left_degree()
        if ld is not None and ld >= top_degree + 1:
            break
        if classify(current).is_projective_complex:
            return current
        current, _ = _extend_once(current)
    # drop the top (kernel) term, keeping the cover tower below it
    terms = current.terms[:-1]
    diffs = current.diffs[:-1]
    chopped = ComplexPoint(current.algebra, current.bottom, terms, diffs)
    if not classify(chopped).is_projective_complex:
        raise NotProjectiveComplex("truncated replacement is not projective")
    return chopped
