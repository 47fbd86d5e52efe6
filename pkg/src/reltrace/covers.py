"""Equivariant chain complexes of (maximal abelian) covers and the lifted
chain maps of a relative self-map.

Two input tiers feed the same objects:

* simplicial pairs, lifted through a spanning tree of each component;
* one-vertex CW pairs, whose 2-cells come from relators (Fox calculus) and
  whose higher cells and cell images are supplied or solved for.

Group elements are taken in abelianized coordinates throughout.
"""
from dataclasses import dataclass, field
from fractions import Fraction

from reltrace import linalg
from reltrace.complexes import (
    CellularPairData, ChainData, Diagnostic, chain_complex, chain_map, components,
    faces, is_invariant, restrict,
)
from reltrace.fundamental_group import (
    AbelianStructure, GroupHom, Presentation, ShadowClassSet, add_chains,
    edge_path_presentation, exponent_vector, induced_hom, map_chain,
    pushforward_classes, scale_chain, word_inverse, word_mul,
)
from reltrace.shadow_algebra.group_ring import (
    GroupRing, GroupRingMatrix, fox_derivative, stallings_trace,
)


class ChainMapError(RuntimeError):
    """A constructed chain map fails the twisted chain-map equation (a bug)."""


class TopCellError(ValueError):
    """Solving for cell images failed; ``kind`` is 'non-unique' or 'no-solution'."""

    def __init__(self, kind, message):
        super().__init__(message)
        self.kind = kind


@dataclass
class EquivariantChainComplex:
    """Free Z[G]-chain complex; ``boundaries[k]`` maps degree k to degree k-1."""

    ring: GroupRing
    bases: dict
    boundaries: dict

    def ranks(self):
        return {k: len(b) for k, b in self.bases.items()}

    def boundary(self, k):
        if k in self.boundaries:
            return self.boundaries[k]
        return GroupRingMatrix.zero(self.ring, len(self.bases.get(k - 1, [])),
                                    len(self.bases.get(k, [])))

    def check(self):
        for k in self.bases:
            if k - 1 in self.bases and k - 2 in self.bases and k >= 2:
                dd = self.boundary(k - 1) @ self.boundary(k)
                if dd.entries:
                    return False
        return True

    def augment(self):
        """Integer chain complex obtained by sending every group element to 1."""
        return ChainData({k: list(b) for k, b in self.bases.items()},
                         {k: M.augment() for k, M in self.boundaries.items()})

    def subcomplex_quotient(self, keep):
        """Quotient by the cells not in ``keep`` (they must span a subcomplex)."""
        bases, index = {}, {}
        for k, b in self.bases.items():
            index[k] = [i for i, c in enumerate(b) if c in keep]
            bases[k] = [b[i] for i in index[k]]
        bnd = {k: M.submatrix(index[k - 1], index[k]) for k, M in self.boundaries.items()}
        return EquivariantChainComplex(self.ring, bases, bnd), index


@dataclass
class EquivariantChainMap:
    """phi-twisted self chain map: f(g x) = phi(g) f(x), one matrix per degree."""

    complex: EquivariantChainComplex
    twist: list
    matrices: dict

    def check(self):
        cx = self.complex
        for k in cx.bases:
            if k == 0 or k - 1 not in cx.bases:
                continue
            D = cx.boundary(k)
            left = D @ self.matrices[k]
            right = self.matrices[k - 1] @ D
            if not left.same_entries(right):
                return False
        return True

    def trace(self, shadow):
        """Alternating sum of the Stallings traces of the degree matrices."""
        total = None
        for k in sorted(self.matrices):
            t = stallings_trace(self.matrices[k], shadow)
            t = t if k % 2 == 0 else -t
            total = t if total is None else total + t
        return total if total is not None else stallings_trace(
            GroupRingMatrix.zero(self.complex.ring, 0, 0, self.twist), shadow)

    def augment(self):
        return {k: M.augment() for k, M in self.matrices.items()}

    def restrict(self, index):
        """Submatrices on the kept cells of each degree (rows and columns)."""
        return {k: M.submatrix(index[k], index[k]) for k, M in self.matrices.items()}


def _element(ab, word):
    return ab.normal_form(word) if word else ab.identity()


# simplicial tier -------------------------------------------------------------------

def lift_component_complex(group, quotient=frozenset()):
    """Lift of the chains of ``group``'s component, modulo the simplices in ``quotient``.

    The lift of a simplex is anchored at the tree lift of its first vertex;
    the 0-th face is then translated by the letter of the edge (v0, v1).
    """
    ab = group.ab
    ring = GroupRing(ab)
    cells = sorted((s for s in group.simplices if s not in quotient), key=lambda s: (len(s), s))
    bases = {}
    for s in cells:
        bases.setdefault(len(s) - 1, []).append(s)
    top = max(bases, default=-1)
    bases = {k: bases.get(k, []) for k in range(top + 1)}
    boundaries = {}
    for k in range(1, top + 1):
        index = {s: i for i, s in enumerate(bases[k - 1])}
        ent = {}
        for j, s in enumerate(bases[k]):
            for i, face in enumerate(faces(s)):
                r = index.get(face)
                if r is None:
                    continue
                g = _element(ab, group.edge_letter(s[0], s[1])) if i == 0 else ab.identity()
                x = ring.group_element(g, (-1) ** i)
                ent[(r, j)] = ent[(r, j)] + x if (r, j) in ent else x
        boundaries[k] = GroupRingMatrix(ring, len(bases[k - 1]), len(bases[k]), ent)
    cx = EquivariantChainComplex(ring, bases, boundaries)
    if not cx.check():
        raise ChainMapError("lifted boundary does not square to zero")
    return cx


def lift_component_map(group, cx, fmap, quotient=frozenset()):
    """Lift of an f-invariant component's self-map.

    Returns (chain map, hom, corrections, diagonal words); the last maps
    each simplex sent onto itself to (sign, unabelianized deck word).
    """
    ab, ring = group.ab, cx.ring
    hom, W = induced_hom(group, group, fmap)
    Phi = hom.abelian_matrix()
    corr = {v: _element(ab, w) for v, w in W.items()}
    mats, words = {}, {}
    for k, basis in cx.bases.items():
        index = {s: i for i, s in enumerate(basis)}
        ent = {}
        for j, s in enumerate(basis):
            sign, img = fmap.image(s)
            if not sign or img in quotient or img not in index:
                continue
            letter = group.edge_letter(img[0], fmap(s[0]))
            shift = _element(ab, letter)
            t = [a - b for a, b in zip(corr[s[0]], shift)]
            ent[(index[img], j)] = ring.group_element(t, sign)
            if img == s:
                words[s] = (sign, word_mul(W[s[0]], word_inverse(letter)))
        mats[k] = GroupRingMatrix(ring, len(basis), len(basis), ent, Phi)
    F = EquivariantChainMap(cx, Phi, mats)
    if not F.check():
        raise ChainMapError("lifted simplicial map fails the twisted chain-map equation")
    return F, hom, corr, words


def transport_map(src, dst, fmap, shadow_src, shadow_dst):
    """Class map from ``src``'s twisted classes to ``dst``'s.

    ``src`` and ``dst`` are edge-path groups with the edges of ``src`` lying
    in ``dst``'s complex: a component of A into its B-component, or one
    component under two trees/basepoints. A class given by a loop z goes to
    z + omega_dst - omega_src + f(p) - p, where omega is the tree path from
    the base to its image and p a path from dst's base to src's base.
    """
    I = [dst.cycle_coordinates(src.fundamental_cycle(g)) for g in src.generators]
    omega_src = src.tree_chain(fmap(src.base))
    omega_dst = dst.tree_chain(fmap(dst.base))
    p = dst.tree_chain(src.base)
    shift_chain = add_chains(omega_dst, scale_chain(omega_src, -1), map_chain(p, fmap),
                             scale_chain(p, -1))
    shift = dst.cycle_coordinates(shift_chain)
    return pushforward_classes(I, shadow_src, shadow_dst, shift)


@dataclass
class LiftedPart:
    """One tracked component: an A-component or a B-component (relative part)."""

    key: tuple
    invariant: bool
    vertices: frozenset = None
    group: object = None
    ab: AbelianStructure = None
    hom: GroupHom = None
    twist: list = None
    shadow: ShadowClassSet = None
    complex: EquivariantChainComplex = None
    chain_map: EquivariantChainMap = None
    absolute_complex: EquivariantChainComplex = None
    absolute_map: EquivariantChainMap = None
    rational: ChainData = None
    rational_map: dict = None
    rational_absolute: ChainData = None
    rational_absolute_map: dict = None
    pushes: dict = field(default_factory=dict)
    words: dict = field(default_factory=dict)

    @property
    def exact(self):
        return self.ab is None or self.ab.exact


@dataclass
class PairLift:
    tier: str
    parts: list
    dim_b: int
    dim_a: int

    def a_parts(self):
        return [p for p in self.parts if p.key[0] == "A"]

    def b_parts(self):
        return [p for p in self.parts if p.key[0] == "B"]


def _tree_for(trees, key):
    return None if trees is None else trees.get(key)


def lift_pair(pair, fmap, trees=None, bases=None):
    """Lift every component of a simplicial pair under a relative self-map.

    ``trees`` and ``bases`` optionally map ``("A", i)`` / ``("B", j)`` to an
    explicit spanning tree (edge list) or basepoint vertex.
    """
    dec = components(pair)
    bases = bases or {}
    rat_a = chain_complex(pair.a_simplices)
    rat_b = chain_complex(pair.simplices)
    rat_rel = chain_complex(pair.simplices, quotient=pair.a_simplices)
    parts = []
    a_groups = {}
    for i, verts in enumerate(dec.a_components):
        key = ("A", i)
        if not is_invariant(fmap, verts):
            parts.append(LiftedPart(key, False, verts))
            continue
        group = edge_path_presentation(pair.a_simplices, verts, tree=_tree_for(trees, key),
                                       base=bases.get(key), names=pair.names)
        cx = lift_component_complex(group)
        F, hom, _, words = lift_component_map(group, cx, fmap)
        sh = ShadowClassSet(group.ab, F.twist)
        rat = restrict(rat_a, verts)
        part = LiftedPart(key, True, verts, group, group.ab, hom, F.twist, sh, cx, F,
                          rational=rat, rational_map=chain_map(rat, fmap), words=words)
        a_groups[i] = part
        parts.append(part)
    for j, verts in enumerate(dec.b_components):
        key = ("B", j)
        if not is_invariant(fmap, verts):
            parts.append(LiftedPart(key, False, verts))
            continue
        group = edge_path_presentation(pair.simplices, verts, tree=_tree_for(trees, key),
                                       base=bases.get(key), names=pair.names)
        quotient = frozenset(s for s in pair.a_simplices if s[0] in verts)
        absolute = lift_component_complex(group)
        Fabs, hom, _, words = lift_component_map(group, absolute, fmap)
        keep = {c for k in absolute.bases for c in absolute.bases[k] if c not in quotient}
        rel, index = absolute.subcomplex_quotient(keep)
        Frel = EquivariantChainMap(rel, Fabs.twist, Fabs.restrict(index))
        if not Frel.check():
            raise ChainMapError("relative chain map fails the twisted chain-map equation")
        sh = ShadowClassSet(group.ab, Fabs.twist)
        rrel, rabs = restrict(rat_rel, verts), restrict(rat_b, verts)
        part = LiftedPart(key, True, verts, group, group.ab, hom, Fabs.twist, sh, rel, Frel,
                          absolute, Fabs, rrel, chain_map(rrel, fmap), rabs, chain_map(rabs, fmap),
                          words=words)
        for i, a_part in a_groups.items():
            if dec.a_in_b[i] == j:
                part.pushes[("A", i)] = transport_map(a_part.group, group, fmap,
                                                      a_part.shadow, sh)
        parts.append(part)
    return PairLift("simplicial", parts, pair.dim, pair.dim_a)


def lift_chain_complex(pair, trees=None, bases=None):
    """Per-component lifted complexes: ({A key: C(A~)}, {B key: C(B~, A~)})."""
    dec = components(pair)
    out_a, out_b = {}, {}
    for i, verts in enumerate(dec.a_components):
        g = edge_path_presentation(pair.a_simplices, verts, tree=_tree_for(trees, ("A", i)),
                                   base=(bases or {}).get(("A", i)), names=pair.names)
        out_a[("A", i)] = lift_component_complex(g)
    for j, verts in enumerate(dec.b_components):
        g = edge_path_presentation(pair.simplices, verts, tree=_tree_for(trees, ("B", j)),
                                   base=(bases or {}).get(("B", j)), names=pair.names)
        quotient = frozenset(s for s in pair.a_simplices if s[0] in verts)
        out_b[("B", j)] = lift_component_complex(g, quotient)
    return out_a, out_b


def lift_chain_map(pair, fmap, trees=None, bases=None):
    """Per-component lifted chain maps of the f-invariant components: (A maps, B maps)."""
    lift = lift_pair(pair, fmap, trees, bases)
    return ({p.key: p.chain_map for p in lift.a_parts() if p.invariant},
            {p.key: p.chain_map for p in lift.b_parts() if p.invariant})


# CW tier ---------------------------------------------------------------------------

def _presentations(data):
    a_rel = tuple(c.relator for c in data.cells if c.dim == 2 and c.in_a)
    b_rel = tuple(c.relator for c in data.cells if c.dim == 2)
    pa = Presentation(data.a_generators, a_rel)
    pb = Presentation(data.all_generators, b_rel)
    return pa, pb


def _cw_complex(data, ab, a_only):
    ring = GroupRing(ab)
    gens = list(data.a_generators if a_only else data.all_generators)
    bases = {0: ["v"], 1: gens}
    top = max([c.dim for c in data.cells if c.in_a or not a_only] + [1 if gens else 0])
    for k in range(2, top + 1):
        bases[k] = [c.name for c in data.cells if c.dim == k and (c.in_a or not a_only)]
    if not gens:
        bases = {0: ["v"]}
    boundaries = {}
    if gens:
        boundaries[1] = GroupRingMatrix(ring, 1, len(gens), {
            (0, j): ring.group_element(_element(ab, ((g, 1),))) - ring.one()
            for j, g in enumerate(gens)})
    by_name = {c.name: c for c in data.cells}
    for k in range(2, max(bases) + 1):
        rows = {n: i for i, n in enumerate(bases[k - 1])}
        ent = {}
        for j, name in enumerate(bases[k]):
            cell = by_name[name]
            if k == 2:
                for i, g in enumerate(gens):
                    x = fox_derivative(cell.relator, g, ring)
                    if x:
                        ent[(i, j)] = x
            else:
                for tname, pairs in (cell.boundary or {}).items():
                    x = ring.from_pairs(pairs)
                    if x:
                        ent[(rows[tname], j)] = x
        boundaries[k] = GroupRingMatrix(ring, len(bases[k - 1]), len(bases[k]), ent)
    return EquivariantChainComplex(ring, bases, boundaries)


def fox_chain_map(cx, hom):
    """Degrees 0 and 1 of the chain map of a presentation complex.

    Degree 0 is the identity (the single vertex is fixed); degree 1 has
    entry (h, g) = d phi(g) / d h.
    """
    ring = cx.ring
    Phi = [exponent_vector(w, ring.ab.generators) for w in hom.images]
    mats = {0: GroupRingMatrix.identity(ring, 1, Phi)}
    if 1 in cx.bases:
        gens = cx.bases[1]
        ent = {}
        for j, g in enumerate(gens):
            img = hom.image_of(g)
            for i, h in enumerate(gens):
                x = fox_derivative(img, h, ring)
                if x:
                    ent[(i, j)] = x
        mats[1] = GroupRingMatrix(ring, len(gens), len(gens), ent, Phi)
    return EquivariantChainMap(cx, Phi, mats)


def _free_coordinates(ab):
    piv = linalg.hnf_pivots(ab.relator_hnf)
    bounds = {p: ab.relator_hnf[i][p] for i, p in enumerate(piv)}
    return bounds, [c for c in range(ab.n) if c not in bounds]


def _window(ab, radius):
    bounds, free = _free_coordinates(ab)
    out = [()]
    for c in range(ab.n):
        rng = range(bounds[c]) if c in bounds else range(-radius, radius + 1)
        out = [w + (x,) for w in out for x in rng]
    return out


def _extent(elements, free):
    return max((abs(k[c]) for x in elements for k in x.terms for c in free), default=0)


def solve_equivariant(D, rhs):
    """Unique x over Z[G] with D x = rhs, searched over growing support windows.

    Raises TopCellError('non-unique') when D is not injective on a window
    (then it is not injective at all) and TopCellError('no-solution') when
    no integral solution exists in the largest window tried.
    """
    ring = D.ring
    ab = ring.ab
    _, free = _free_coordinates(ab)
    r0 = _extent(list(rhs), free) + _extent(D.entries.values(), free) + 1
    radii = [r0, 2 * r0 + 2] if free else [0]
    for radius in radii:
        window = _window(ab, radius)
        columns = []
        for i in range(D.ncols):
            for w in window:
                col = {}
                g = ring.group_element(w)
                for k in range(D.nrows):
                    x = D[(k, i)]
                    if not x:
                        continue
                    for h, c in (x * g).terms.items():
                        col[(k, h)] = col.get((k, h), 0) + c
                columns.append(col)
        target = {}
        for k, x in enumerate(rhs):
            for h, c in x.terms.items():
                target[(k, h)] = c
        sol, injective = linalg.sparse_solve(columns, target, len(columns))
        if not injective:
            raise TopCellError("non-unique", "non-unique solution: boundary is not injective "
                                             "on the cells being solved for")
        if sol is None:
            continue
        if any(v.denominator != 1 for v in sol):
            raise TopCellError("no-solution", "no solution: the unique rational solution "
                                              "is not integral")
        out = []
        n = len(window)
        for i in range(D.ncols):
            terms = {window[t]: int(sol[i * n + t]) for t in range(n) if sol[i * n + t]}
            out.append(ring.element(terms))
        check = [sum((D[(k, i)] * out[i] for i in range(D.ncols)), ring.zero())
                 for k in range(D.nrows)]
        if check != list(rhs):
            raise TopCellError("no-solution", "no solution: verification of the solved images failed")
        return out
    raise TopCellError("no-solution", "no solution: the chain-map equation has no solution "
                                      "within the search window")


def solve_top_cells(cx, partial, degree, columns):
    """Fill the listed degree-``degree`` columns of ``partial`` from the chain-map equation.

    ``partial`` is a dict degree -> GroupRingMatrix (twisted) with degree-1
    complete. Only the given column indices are solved; others are kept.
    """
    D = cx.boundary(degree)
    F_below = partial[degree - 1]
    rhs_all = F_below @ D
    M = partial[degree]
    ent = dict(M.entries)
    for j in columns:
        rhs = [rhs_all[(k, j)] for k in range(D.nrows)]
        sol = solve_equivariant(D, rhs)
        for i, x in enumerate(sol):
            if x:
                ent[(i, j)] = x
            else:
                ent.pop((i, j), None)
    partial[degree] = GroupRingMatrix(cx.ring, M.nrows, M.ncols, ent, M.twist)
    return partial


def _image_matrix(cx, data, degree, twist, cells_solved):
    """Supplied images as a matrix; returns (matrix, columns to derive)."""
    ring = cx.ring
    basis = cx.bases[degree]
    rows = {n: i for i, n in enumerate(basis)}
    ent, derive = {}, []
    for j, name in enumerate(basis):
        if name in cells_solved:
            for i, x in cells_solved[name].items():
                ent[(rows[i], j)] = x
            continue
        img = data.cell_images.get(name, "derive")
        if img == "derive":
            derive.append(j)
            continue
        for tname, pairs in img.items():
            x = ring.from_pairs(pairs)
            if x:
                ent[(rows[tname], j)] = x
    return GroupRingMatrix(ring, len(basis), len(basis), ent, twist), derive


def _cw_map(cx, data, hom, known=None):
    F = fox_chain_map(cx, hom)
    mats = F.matrices
    known = known or {}
    for k in range(2, max(cx.bases) + 1):
        M, derive = _image_matrix(cx, data, k, F.twist, known)
        mats[k] = M
        if derive:
            solve_top_cells(cx, mats, k, derive)
    if not F.check():
        raise ChainMapError("cell images fail the twisted chain-map equation")
    return F


def lift_cellular(data):
    """Lift a one-vertex CW pair: A-complex, absolute and relative B-complexes, maps."""
    pa, pb = _presentations(data)
    ab_a, ab_b = AbelianStructure(pa), AbelianStructure(pb)
    hom_b = GroupHom.from_dict(pb, pb, data.phi)
    parts = []
    a_part = None
    if data.vertex_in_a:
        hom_a = GroupHom.from_dict(pa, pa, {g: data.phi[g] for g in pa.generators})
        cx_a = _cw_complex(data, ab_a, a_only=True)
        if not cx_a.check():
            raise ChainMapError("A-complex boundary does not square to zero")
        F_a = _cw_map(cx_a, data, hom_a)
        sh_a = ShadowClassSet(ab_a, F_a.twist)
        rat = cx_a.augment()
        a_part = LiftedPart(("A", 0), True, None, None, ab_a, hom_a, F_a.twist, sh_a, cx_a, F_a,
                            rational=rat, rational_map=F_a.augment())
        parts.append(a_part)
    cx_b = _cw_complex(data, ab_b, a_only=False)
    if not cx_b.check():
        raise ChainMapError("B-complex boundary does not square to zero")
    known = {}
    if a_part is not None:
        # A-cell images are computed in the A-complex and included into B
        for k in range(2, max(a_part.complex.bases) + 1):
            basis = a_part.complex.bases[k]
            M = a_part.chain_map.matrices[k]
            for j, name in enumerate(basis):
                known[name] = {basis[i]: x.map(_inclusion(ab_a, ab_b), cx_b.ring)
                               for (i, jj), x in M.entries.items() if jj == j}
    F_b = _cw_map(cx_b, data, hom_b, known)
    in_a = {"v"} if data.vertex_in_a else set()
    in_a |= set(data.a_generators) | {c.name for c in data.cells if c.in_a}
    keep = {c for k in cx_b.bases for c in cx_b.bases[k] if c not in in_a}
    rel, index = cx_b.subcomplex_quotient(keep)
    F_rel = EquivariantChainMap(rel, F_b.twist, F_b.restrict(index))
    if not F_rel.check():
        raise ChainMapError("relative chain map fails the twisted chain-map equation")
    sh_b = ShadowClassSet(ab_b, F_b.twist)
    b_part = LiftedPart(("B", 0), True, None, None, ab_b, hom_b, F_b.twist, sh_b, rel, F_rel,
                        cx_b, F_b, rel.augment(), F_rel.augment(), cx_b.augment(), F_b.augment())
    if a_part is not None:
        b_part.pushes[("A", 0)] = pushforward_classes(_inclusion(ab_a, ab_b), a_part.shadow, sh_b)
    parts.append(b_part)
    return PairLift("cw", parts, data.dim, data.dim_a)


def _inclusion(ab_a, ab_b):
    return [exponent_vector(((g, 1),), ab_b.generators) for g in ab_a.generators]


# validation of cellular data --------------------------------------------------------

def cellular_diagnostics(data):
    """All violated invariants of cellular pair data, including the chain-map equation."""
    diags = []

    def err(code, msg):
        diags.append(Diagnostic(code, msg, module="covers"))

    names = [g for g, _ in data.generators] + [c.name for c in data.cells] + ["v"]
    if len(set(names)) != len(names):
        err("duplicate-cell", "cell and generator names are not unique (the vertex is 'v')")
    gens = set(data.all_generators)
    a_gens = set(data.a_generators)
    if a_gens and not data.vertex_in_a:
        err("a-closure", "A contains 1-cells but not the vertex")
    by_name = {c.name: c for c in data.cells}
    for c in data.cells:
        if c.dim < 2:
            err("bad-dimension", f"cell {c.name!r} must have dimension >= 2")
            continue
        if c.dim == 2:
            if c.relator is None:
                err("missing-relator", f"2-cell {c.name!r} has no relator")
                continue
            used = {g for g, _ in c.relator}
            if not used <= gens:
                err("unknown-generator", f"relator of {c.name!r} uses unknown generators")
            elif c.in_a and not used <= a_gens:
                err("a-closure", f"A-cell {c.name!r} is attached along cells outside A")
        else:
            if not c.boundary:
                err("missing-boundary", f"{c.dim}-cell {c.name!r} has no boundary")
                continue
            for t, pairs in c.boundary.items():
                tc = by_name.get(t)
                if tc is None or tc.dim != c.dim - 1:
                    err("bad-boundary", f"boundary of {c.name!r} refers to {t!r}, "
                                        f"not a {c.dim - 1}-cell")
                elif c.in_a and not tc.in_a:
                    err("a-closure", f"A-cell {c.name!r} is attached along cells outside A")
                for _, w in pairs:
                    if not {g for g, _ in w} <= (a_gens if c.in_a else gens):
                        err("unknown-generator", f"boundary of {c.name!r} uses words outside "
                                                 f"its group")
    missing = sorted(gens - set(data.phi))
    if missing:
        err("map-domain", f"phi misses generators {missing}")
    for g, w in data.phi.items():
        used = {h for h, _ in w}
        if not used <= gens:
            err("unknown-generator", f"phi({g}) uses unknown generators")
        elif g in a_gens and not used <= a_gens:
            err("not-relative", f"phi({g}) leaves A: relative-map compatibility fails")
    for name, img in data.cell_images.items():
        c = by_name.get(name)
        if c is None:
            err("unknown-cell", f"image given for unknown cell {name!r}")
            continue
        if img == "derive":
            continue
        for t in img:
            tc = by_name.get(t)
            if tc is None or tc.dim != c.dim:
                err("bad-image", f"image of {name!r} refers to {t!r}, not a {c.dim}-cell")
            elif c.in_a and not tc.in_a:
                err("not-relative", f"image of A-cell {name!r} leaves A")
    if diags:
        return diags
    pa, pb = _presentations(data)
    for pres, label, part in ((pa, "A", True), (pb, "B", False)):
        if label == "A" and not data.vertex_in_a:
            continue
        ab = AbelianStructure(pres)
        hom = GroupHom.from_dict(pres, pres, {g: data.phi[g] for g in pres.generators})
        for r in pres.relators:
            if any(ab.normal_form(hom.apply(r) or ab.identity())):
                err("not-homomorphism", f"phi does not preserve the {label} relators")
                return diags
        cx = _cw_complex(data, ab, a_only=part)
        if not cx.check():
            err("boundary-squared", f"boundary does not square to zero in the {label}-complex")
    if diags:
        return diags
    try:
        lift_cellular(data)
    except TopCellError as exc:
        diags.append(Diagnostic(exc.kind, str(exc), severity="warning", module="covers"))
    except ChainMapError as exc:
        err("chain-map", str(exc))
    return diags
