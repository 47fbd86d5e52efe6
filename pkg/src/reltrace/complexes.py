"""Finite simplicial pairs, vertex self-maps and their rational chain data."""
from dataclasses import dataclass, field
from itertools import combinations


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    severity: str = "error"
    module: str = "complexes"

    def __str__(self):
        return f"[{self.module}] {self.severity}: {self.message}"


@dataclass(frozen=True)
class SimplicialPair:
    """A finite simplicial complex B with a flagged subcomplex A.

    Vertices are referred to by integer id (their position in ``names``);
    the id order is the orientation convention. Simplices are strictly
    increasing id tuples.
    """

    names: tuple
    simplices: frozenset
    a_simplices: frozenset = frozenset()

    @classmethod
    def from_names(cls, vertices, simplices, a_simplices=()):
        index = {v: i for i, v in enumerate(vertices)}

        def conv(s):
            return tuple(sorted(index[v] for v in s))

        return cls(tuple(vertices), frozenset(conv(s) for s in simplices),
                   frozenset(conv(s) for s in a_simplices))

    @property
    def dim(self):
        return max((len(s) - 1 for s in self.simplices), default=-1)

    @property
    def dim_a(self):
        return max((len(s) - 1 for s in self.a_simplices), default=-1)

    def by_dim(self, subset=None):
        subset = self.simplices if subset is None else subset
        out = {}
        for s in subset:
            out.setdefault(len(s) - 1, []).append(s)
        return {k: sorted(v) for k, v in sorted(out.items())}

    def in_a(self, simplex):
        return simplex in self.a_simplices

    @property
    def a_vertices(self):
        return sorted(s[0] for s in self.a_simplices if len(s) == 1)

    def label(self, simplex):
        n = len(self.names)
        return "(" + ",".join(str(self.names[v]) if 0 <= v < n else f"#{v}" for v in simplex) + ")"


@dataclass(frozen=True)
class VertexSelfMap:
    """Vertex assignment of a simplicial self-map, as a tuple of vertex ids."""

    images: tuple

    @classmethod
    def from_names(cls, pair, mapping):
        index = {v: i for i, v in enumerate(pair.names)}
        return cls(tuple(index[mapping[v]] for v in pair.names))

    def __call__(self, v):
        return self.images[v]

    def image(self, simplex):
        """(sign, sorted image simplex) or (0, None) when degenerate."""
        img = [self.images[v] for v in simplex]
        if len(set(img)) < len(img):
            return 0, None
        return permutation_sign(img), tuple(sorted(img))


def permutation_sign(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def faces(simplex):
    return [simplex[:i] + simplex[i + 1:] for i in range(len(simplex))]


def validate_pair(pair, fmap=None):
    """All violated invariants of a simplicial pair (and optional self-map).

    Cellular pair data is checked by the covers module, which owns the
    group ring boundary computations.
    """
    if isinstance(pair, CellularPairData):
        from reltrace.covers import cellular_diagnostics
        return cellular_diagnostics(pair)
    diags = []
    nv = len(pair.names)
    if len(set(pair.names)) != nv:
        diags.append(Diagnostic("duplicate-vertex", "vertex names are not unique"))
    for s in sorted(pair.simplices | pair.a_simplices):
        if any(not (0 <= v < nv) for v in s):
            diags.append(Diagnostic("unknown-vertex", f"simplex {s} uses an unknown vertex"))
        if len(s) == 0 or any(s[i] >= s[i + 1] for i in range(len(s) - 1)):
            diags.append(Diagnostic("not-strictly-sorted",
                                    f"simplex {s} is empty or repeats a vertex"))
    for v in range(nv):
        if (v,) not in pair.simplices:
            diags.append(Diagnostic("face-closure",
                                    f"face-closure violated: vertex {pair.names[v]!r} is not a 0-simplex"))
    for s in sorted(pair.simplices):
        for face in faces(s):
            if face and face not in pair.simplices:
                diags.append(Diagnostic(
                    "face-closure",
                    f"face-closure violated: face {pair.label(face)} of {pair.label(s)} missing"))
    for s in sorted(pair.a_simplices):
        if s not in pair.simplices:
            diags.append(Diagnostic("a-not-in-b", f"A-simplex {pair.label(s)} is not a simplex of B"))
        for face in faces(s):
            if face and face not in pair.a_simplices:
                diags.append(Diagnostic(
                    "a-closure",
                    f"A is not a subcomplex: face {pair.label(face)} of A-simplex {pair.label(s)} not flagged"))
    if fmap is not None:
        diags.extend(validate_map(pair, fmap))
    return diags


def validate_map(pair, fmap):
    diags = []
    if len(fmap.images) != len(pair.names):
        return [Diagnostic("map-domain", "vertex map does not cover every vertex")]
    for s in sorted(pair.simplices):
        img = tuple(sorted(set(fmap(v) for v in s)))
        if img not in pair.simplices:
            diags.append(Diagnostic("not-simplicial",
                                    f"image of {pair.label(s)} spans no simplex"))
        elif s in pair.a_simplices and img not in pair.a_simplices:
            diags.append(Diagnostic("not-relative",
                                    f"A-simplex {pair.label(s)} maps outside A"))
    return diags


# components ------------------------------------------------------------------

class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def connected_components(simplices):
    """Vertex sets of the connected components, ordered by least vertex."""
    verts = sorted({v for s in simplices for v in s})
    uf = _UnionFind(verts)
    for s in simplices:
        for v in s[1:]:
            uf.union(s[0], v)
    groups = {}
    for v in verts:
        groups.setdefault(uf.find(v), []).append(v)
    return sorted((frozenset(g) for g in groups.values()), key=min)


@dataclass(frozen=True)
class ComponentDecomposition:
    a_components: tuple
    b_components: tuple
    a_in_b: tuple  # a_in_b[i] = index of the B-component containing A-component i
    b_has_relative_part: tuple
    skeleton: tuple = field(default=())

    def b_objects(self):
        return [j for j, flag in enumerate(self.b_has_relative_part) if flag]


def components(pair):
    """Components of A and B and the skeleton of the relative component category.

    The skeleton has one object ``("A", i)`` per A-component and one object
    ``("B", j)`` per B-component containing a simplex outside A.
    """
    a_comps = connected_components(pair.a_simplices)
    b_comps = connected_components(pair.simplices)
    a_in_b = tuple(next(j for j, b in enumerate(b_comps) if min(a) in b) for a in a_comps)
    rel = tuple(any(s[0] in b and s not in pair.a_simplices for s in pair.simplices)
                for b in b_comps)
    skeleton = tuple([("A", i) for i in range(len(a_comps))]
                     + [("B", j) for j in range(len(b_comps)) if rel[j]])
    return ComponentDecomposition(tuple(a_comps), tuple(b_comps), a_in_b, rel, skeleton)


def is_invariant(fmap, vertices):
    return all(fmap(v) in vertices for v in vertices)


# rational chains -------------------------------------------------------------

@dataclass(frozen=True)
class ChainData:
    """Integer (hence rational) chain complex: bases and boundary matrices.

    ``boundaries[k]`` has rows indexed by ``bases[k-1]`` and columns by
    ``bases[k]``.
    """

    bases: dict
    boundaries: dict

    def ranks(self):
        return {k: len(b) for k, b in self.bases.items()}

    def euler_characteristic(self):
        return sum((-1) ** k * len(b) for k, b in self.bases.items())


def chain_complex(simplices, quotient=frozenset()):
    """Simplicial chains of ``simplices`` modulo the chains on ``quotient``."""
    cells = [s for s in simplices if s not in quotient]
    bases = {}
    for s in sorted(cells):
        bases.setdefault(len(s) - 1, []).append(s)
    top = max(bases, default=-1)
    bases = {k: bases.get(k, []) for k in range(top + 1)}
    boundaries = {}
    for k in range(1, top + 1):
        row_index = {s: i for i, s in enumerate(bases[k - 1])}
        M = [[0] * len(bases[k]) for _ in bases[k - 1]]
        for j, s in enumerate(bases[k]):
            for i, face in enumerate(faces(s)):
                r = row_index.get(face)
                if r is not None:
                    M[r][j] += (-1) ** i
        boundaries[k] = M
    return ChainData(bases, boundaries)


def chain_map(data, fmap):
    """Matrices of the simplicial chain map on ``data``; degenerate images give 0."""
    out = {}
    for k, basis in data.bases.items():
        index = {s: i for i, s in enumerate(basis)}
        M = [[0] * len(basis) for _ in basis]
        for j, s in enumerate(basis):
            sign, img = fmap.image(s)
            if sign and img in index:
                M[index[img]][j] += sign
        out[k] = M
    return out


@dataclass(frozen=True)
class RationalChainData:
    a: ChainData
    b: ChainData
    relative: ChainData


def rational_chain_data(pair):
    """Chain complexes C(A), C(B) and C(B, A); the relative basis is B minus A."""
    return RationalChainData(
        a=chain_complex(pair.a_simplices),
        b=chain_complex(pair.simplices),
        relative=chain_complex(pair.simplices, quotient=pair.a_simplices),
    )


def restrict(data, vertices):
    """Sub-basis of a chain complex supported on a vertex set (a union of components)."""
    keep = {k: [i for i, s in enumerate(b) if s[0] in vertices] for k, b in data.bases.items()}
    bases = {k: [data.bases[k][i] for i in idx] for k, idx in keep.items()}
    boundaries = {k: [[M[i][j] for j in keep[k]] for i in keep[k - 1]]
                  for k, M in data.boundaries.items()}
    return ChainData(bases, boundaries)


def chain_lefschetz(data, maps):
    """Alternating sum of chain-level traces."""
    return sum((-1) ** k * sum(M[i][i] for i in range(len(M))) for k, M in maps.items())


def euler_characteristic(pair):
    return sum((-1) ** (len(s) - 1) for s in pair.simplices)


def full_skeleton(n, dim, offset=0):
    """All simplices of dimension <= dim on vertices offset..offset+n-1."""
    verts = range(offset, offset + n)
    return [c for k in range(1, dim + 2) for c in combinations(verts, k)]


# cellular pair data ----------------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    """A cell of dimension >= 2 of a one-vertex CW pair.

    2-cells carry a relator word; higher cells carry ``boundary``, a map
    from cell names one dimension down to group ring pairs ``[[c, word], ...]``.
    """

    name: str
    dim: int
    in_a: bool
    relator: tuple = None
    boundary: dict = None


@dataclass(frozen=True)
class CellularPairData:
    """One-vertex CW pair (B, A) with a cellular self-map.

    The 1-cells are the generators. ``phi`` gives the image word of every
    generator; ``cell_images`` gives, per cell of dimension >= 2, either an
    image vector ``{cell: [[c, word], ...]}`` or ``"derive"``.
    """

    generators: tuple            # ((name, in_a), ...)
    cells: tuple                 # Cell, ...
    phi: dict
    cell_images: dict = field(default_factory=dict)
    vertex_in_a: bool = True

    @property
    def a_generators(self):
        return tuple(g for g, a in self.generators if a)

    @property
    def all_generators(self):
        return tuple(g for g, _ in self.generators)

    def cells_of(self, dim, a_only=False):
        return [c for c in self.cells if c.dim == dim and (c.in_a or not a_only)]

    @property
    def dim(self):
        return max([c.dim for c in self.cells] + [1 if self.generators else 0])

    @property
    def dim_a(self):
        if not self.vertex_in_a:
            return -1
        return max([c.dim for c in self.cells if c.in_a] + [1 if self.a_generators else 0])

    @property
    def a_empty(self):
        return not self.vertex_in_a
