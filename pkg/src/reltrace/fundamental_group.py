"""Presentations of fundamental groups, induced maps, abelianization and
twisted conjugacy (shadow) class sets.

Words are tuples of ``(generator, exponent)`` pairs, freely reduced. Group
elements of an abelianized group are integer row vectors in generator
coordinates, reduced modulo the Hermite basis of the relator lattice.
"""
from collections import deque
from dataclasses import dataclass, field
from itertools import product

from reltrace import linalg
from reltrace.linalg import smith_normal_form  # noqa: F401  (public re-export)


# words -----------------------------------------------------------------------

def reduce_word(letters):
    out = []
    for g, e in letters:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            e += out[-1][1]
            out.pop()
            if e:
                out.append((g, e))
        else:
            out.append((g, e))
    return tuple(out)


def word_inverse(w):
    return tuple((g, -e) for g, e in reversed(w))


def word_mul(*words):
    return reduce_word([x for w in words for x in w])


def word_power(w, k):
    if k < 0:
        w, k = word_inverse(w), -k
    return reduce_word(list(w) * k)


def cyclic_reduce(w):
    w = reduce_word(w)
    while len(w) > 1 and w[0][0] == w[-1][0]:
        w = reduce_word(((w[0][0], w[0][1] + w[-1][1]),) + w[1:-1])
    return w


def parse_word(data):
    """Word from the file syntax ``[["a", 1], ["b", -3]]``."""
    return reduce_word((str(g), int(e)) for g, e in data)


def word_to_json(w):
    return [[g, e] for g, e in w]


def format_word(w):
    if not w:
        return "1"
    return "".join(g if e == 1 else f"{g}^{e}" for g, e in w)


def exponent_vector(w, generators):
    index = {g: i for i, g in enumerate(generators)}
    v = [0] * len(generators)
    for g, e in w:
        v[index[g]] += e
    return v


def vector_word(v, generators):
    return tuple((g, e) for g, e in zip(generators, v) if e)


def format_vector(v, generators):
    return format_word(vector_word(v, generators))


# presentations ----------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple = ()

    def __post_init__(self):
        known = set(self.generators)
        for r in self.relators:
            for g, _ in r:
                if g not in known:
                    raise ValueError(f"relator uses unknown generator {g!r}")

    def relator_matrix(self):
        return [exponent_vector(r, self.generators) for r in self.relators]

    def recognized_abelian(self):
        """True when simple Tietze moves show the group is abelian.

        A positive answer is a proof; a negative answer only means the
        presentation was not recognized.
        """
        return _recognized_abelian(self)


def _occurrences(w, g):
    return [i for i, (h, _) in enumerate(w) if h == g]


def _recognized_abelian(pres):
    gens = list(pres.generators)
    rels = [cyclic_reduce(r) for r in pres.relators]
    rels = [r for r in rels if r]
    changed = True
    while changed:
        changed = False
        for ri, r in enumerate(rels):
            for g in gens:
                occ = _occurrences(r, g)
                if len(occ) == 1 and abs(r[occ[0]][1]) == 1:
                    i = occ[0]
                    # r = u g^e v = 1  =>  g = (v u)^(-e)
                    rest = word_mul(r[i + 1:], r[:i])
                    value = rest if r[i][1] == -1 else word_inverse(rest)
                    new = []
                    for rj, s in enumerate(rels):
                        if rj == ri:
                            continue
                        sub = []
                        for h, e in s:
                            sub.extend(word_power(value, e) if h == g else ((h, e),))
                        s2 = cyclic_reduce(sub)
                        if s2:
                            new.append(s2)
                    rels = new
                    gens.remove(g)
                    changed = True
                    break
            if changed:
                break
    if len(gens) <= 1:
        return True
    commuting = set()
    for r in rels:
        if len(r) == 4 and all(abs(e) == 1 for _, e in r):
            (x, e1), (y, f1), (x2, e2), (y2, f2) = r
            if x == x2 and y == y2 and x != y and e1 == -e2 and f1 == -f2:
                commuting.add(frozenset((x, y)))
    return all(frozenset(p) in commuting
               for i, a in enumerate(gens) for p in [(a, b) for b in gens[i + 1:]])


@dataclass(frozen=True)
class GroupHom:
    domain: Presentation
    codomain: Presentation
    images: tuple  # one word per domain generator

    @classmethod
    def from_dict(cls, domain, codomain, mapping):
        return cls(domain, codomain, tuple(reduce_word(mapping[g]) for g in domain.generators))

    def image_of(self, g):
        return self.images[self.domain.generators.index(g)]

    def apply(self, w):
        out = []
        for g, e in w:
            out.extend(word_power(self.image_of(g), e))
        return reduce_word(out)

    def abelian_matrix(self):
        """Row i = exponent vector of the image of domain generator i."""
        return [exponent_vector(w, self.codomain.generators) for w in self.images]

    def compose(self, other):
        """self after other."""
        return GroupHom(other.domain, self.codomain, tuple(self.apply(w) for w in other.images))


# abelianization -----------------------------------------------------------------

class AbelianStructure:
    """The abelianization Z^n / (relator lattice) of a presentation."""

    def __init__(self, presentation):
        self.presentation = presentation
        self.generators = presentation.generators
        self.n = len(self.generators)
        M = presentation.relator_matrix()
        self.relator_matrix = M
        self.relator_hnf = linalg.hermite_normal_form(M, self.n)
        if M:
            self.U, self.D, self.V = smith_normal_form(M)
        else:
            self.U, self.D, self.V = [], [], linalg.identity(self.n)
        self.free_rank, self.torsion = linalg.smith_invariants(M, self.n)
        self.exact = presentation.recognized_abelian()

    def __eq__(self, other):
        return isinstance(other, AbelianStructure) and (
            self.generators == other.generators and self.relator_hnf == other.relator_hnf)

    def __hash__(self):
        return hash((self.generators, tuple(map(tuple, self.relator_hnf))))

    def __repr__(self):
        return f"AbelianStructure({self.generators}, free_rank={self.free_rank}, torsion={self.torsion})"

    def normal_form(self, x):
        """Canonical vector of a word or exponent vector."""
        if isinstance(x, tuple) and x and isinstance(x[0], tuple):
            x = exponent_vector(x, self.generators)
        elif isinstance(x, tuple) and not x and self.n:
            x = [0] * self.n
        return tuple(linalg.reduce_mod(list(x), self.relator_hnf))

    def identity(self):
        return (0,) * self.n

    def add(self, x, y):
        return self.normal_form([a + b for a, b in zip(x, y)])

    def neg(self, x):
        return self.normal_form([-a for a in x])

    def word(self, x):
        return vector_word(x, self.generators)

    def format(self, x):
        return format_vector(x, self.generators)

    def smith_coordinates(self, x):
        """Coordinates of ``x`` in the Smith basis: (free part, torsion part mod d_i)."""
        y = linalg.vecmat(list(x), self.V)
        diag = [self.D[i][i] if i < len(self.D) and i < self.n else 0 for i in range(self.n)]
        return tuple(yi % d if d > 1 else yi for yi, d in zip(y, diag) if d != 1)

    def check_endomorphism(self, Phi):
        """True when x -> x Phi maps the relator lattice into itself."""
        return all(not any(self.normal_form(linalg.vecmat(r, Phi))) for r in self.relator_hnf)


# twisted conjugacy ------------------------------------------------------------------

class ShadowClassSet:
    """Phi-twisted conjugacy classes of an abelianized group.

    In additive notation g ~ g + h (I - Phi), so the classes are the
    cokernel of (I - Phi) on the abelianization. Classes are identified by
    canonical vectors in generator coordinates.
    """

    def __init__(self, ab, Phi):
        self.ab = ab
        self.Phi = [list(r) for r in Phi]
        n = ab.n
        if len(self.Phi) != n or any(len(r) != n for r in self.Phi):
            raise ValueError("twist matrix has the wrong shape")
        if not ab.check_endomorphism(self.Phi):
            raise ValueError("twist does not preserve the relators")
        self.I_minus_Phi = [[int(i == j) - self.Phi[i][j] for j in range(n)] for i in range(n)]
        gens = ab.relator_matrix + self.I_minus_Phi
        self.lattice_hnf = linalg.hermite_normal_form(gens, n)
        self.free_rank, self.torsion = linalg.smith_invariants(gens, n) if gens else (0, [])
        self.finite = self.free_rank == 0
        self._pivots = linalg.hnf_pivots(self.lattice_hnf)

    @property
    def generators(self):
        return self.ab.generators

    def __eq__(self, other):
        return isinstance(other, ShadowClassSet) and (
            self.ab == other.ab and self.lattice_hnf == other.lattice_hnf)

    def __hash__(self):
        return hash((self.ab, tuple(map(tuple, self.lattice_hnf))))

    def __len__(self):
        if not self.finite:
            raise ValueError("infinitely many classes")
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def count(self):
        return len(self) if self.finite else None

    def determinant(self):
        return linalg.determinant(self.I_minus_Phi)

    def class_of(self, x):
        return tuple(linalg.reduce_mod(list(self.ab.normal_form(x)), self.lattice_hnf))

    def representatives(self):
        """Canonical representative of every class (finite case), in display order."""
        if not self.finite:
            raise ValueError("infinitely many classes")
        ranges = [range(self.lattice_hnf[i][p]) for i, p in enumerate(self._pivots)]
        reps = []
        for combo in product(*ranges):
            v = [0] * self.ab.n
            for p, c in zip(self._pivots, combo):
                v[p] = c
            reps.append(tuple(v))
        return sorted(reps, key=lambda v: tuple(reversed(v)))

    def label(self, c):
        return self.ab.format(c)

    def labels(self):
        return [self.label(c) for c in self.representatives()]

    def describe(self):
        return {
            "generators": list(self.generators),
            "free_rank": self.free_rank,
            "torsion": list(self.torsion),
            "finite": self.finite,
            "count": self.count(),
            "representatives": self.labels() if self.finite else None,
        }


def twisted_conjugacy_classes(ab, Phi):
    return ShadowClassSet(ab, Phi)


@dataclass
class ClassMap:
    """Map of twisted class sets induced by a compatible homomorphism."""

    source: ShadowClassSet
    target: ShadowClassSet
    matrix: list
    shift: tuple

    def __call__(self, c):
        y = linalg.vecmat(list(c), self.matrix) if self.matrix else [0] * self.target.ab.n
        return self.target.class_of([a + b for a, b in zip(y, self.shift)])

    def table(self):
        return {c: self(c) for c in self.source.representatives()}


def pushforward_classes(iota, shA, shB, shift=None):
    """Class map [g] -> [iota(g) + shift].

    ``iota`` is a GroupHom or its abelian matrix. ``shift`` accounts for
    basepoints and normalizing paths of the two lifts (zero when both lifts
    fix a common basepoint).
    """
    I = iota.abelian_matrix() if isinstance(iota, GroupHom) else [list(r) for r in iota]
    nA, nB = shA.ab.n, shB.ab.n
    if len(I) != nA or any(len(r) != nB for r in I):
        raise ValueError("inclusion matrix has the wrong shape")
    lhs = linalg.matmul(shA.Phi, I) if nA else []
    rhs = linalg.matmul(I, shB.Phi) if nA else []
    for a, b in zip(lhs, rhs):
        if any(shB.ab.normal_form([x - y for x, y in zip(a, b)])):
            raise ValueError("compatibility equation fails: iota o phi_A != phi_B o iota")
    for row in shA.lattice_hnf:
        if any(shB.class_of(linalg.vecmat(row, I))):
            raise ValueError("class map is not well defined")
    shift = tuple(shift) if shift is not None else (0,) * nB
    return ClassMap(shA, shB, I, shift)


# edge-path groups ----------------------------------------------------------------

def _edge(u, v):
    return (u, v) if u < v else (v, u)


@dataclass
class EdgePathGroup:
    """Edge-path presentation of pi_1 of a connected subcomplex, based at ``base``.

    Generators are the edges outside the spanning tree; each is the loop
    tree(base -> u) . (u, v) . tree(v -> base).
    """

    vertices: frozenset
    simplices: frozenset
    base: int
    tree: frozenset
    parent: dict
    order: list
    edge_generator: dict
    presentation: Presentation
    names: tuple = ()
    ab: AbelianStructure = field(init=False, repr=False)

    def __post_init__(self):
        self.ab = AbelianStructure(self.presentation)

    @property
    def generators(self):
        return self.presentation.generators

    def edge_letter(self, u, v):
        """Word of the oriented edge u -> v (empty for tree edges and u == v)."""
        if u == v:
            return ()
        g = self.edge_generator.get(_edge(u, v))
        if g is None:
            return ()
        return ((g, 1),) if u < v else ((g, -1),)

    def tree_path(self, v):
        """Vertices on the tree path base -> v."""
        path = [v]
        while path[-1] != self.base:
            path.append(self.parent[path[-1]])
        return path[::-1]

    def path_chain(self, path):
        """Edge chain (dict sorted edge -> coefficient) of a vertex path."""
        chain = {}
        for u, v in zip(path, path[1:]):
            if u != v:
                e = _edge(u, v)
                chain[e] = chain.get(e, 0) + (1 if u < v else -1)
        return {e: c for e, c in chain.items() if c}

    def tree_chain(self, v):
        return self.path_chain(self.tree_path(v))

    def fundamental_cycle(self, g):
        u, v = next(e for e, h in self.edge_generator.items() if h == g)
        return add_chains(self.tree_chain(u), {(u, v): 1}, scale_chain(self.tree_chain(v), -1))

    def cycle_coordinates(self, chain):
        """Generator coordinates of a 1-cycle: its coefficients on non-tree edges."""
        gi = {g: i for i, g in enumerate(self.generators)}
        v = [0] * len(self.generators)
        for e, c in chain.items():
            g = self.edge_generator.get(e)
            if g is not None:
                v[gi[g]] += c
        return v

    def vector_cycle(self, x):
        out = {}
        for g, c in zip(self.generators, x):
            if c:
                out = add_chains(out, scale_chain(self.fundamental_cycle(g), c))
        return out


def add_chains(*chains):
    out = {}
    for ch in chains:
        for e, c in ch.items():
            out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def scale_chain(ch, k):
    return {e: k * c for e, c in ch.items() if k * c}


def map_chain(ch, fmap):
    """Image of an edge chain under a simplicial vertex map."""
    out = {}
    for (u, v), c in ch.items():
        fu, fv = fmap(u), fmap(v)
        if fu != fv:
            e = _edge(fu, fv)
            out[e] = out.get(e, 0) + (c if fu < fv else -c)
    return {e: c for e, c in out.items() if c}


def _generator_name(names, u, v):
    if names:
        return f"e({names[u]},{names[v]})"
    return f"e({u},{v})"


def edge_path_presentation(simplices, vertices, tree=None, base=None, names=()):
    """Edge-path presentation of the component ``vertices`` of ``simplices``.

    ``tree`` is an optional explicit spanning tree (iterable of edges);
    otherwise a BFS tree from the least vertex (or ``base``) is used,
    visiting neighbours in increasing id order.
    """
    vertices = frozenset(vertices)
    comp = frozenset(s for s in simplices if s[0] in vertices)
    edges = sorted(s for s in comp if len(s) == 2)
    if any(v not in vertices for e in edges for v in e):
        raise ValueError("vertex set is not a union of components")
    base = min(vertices) if base is None else base
    adj = {v: [] for v in vertices}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    for v in adj:
        adj[v].sort()
    if tree is None:
        parent, order = {}, [base]
        seen = {base}
        queue = deque([base])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    parent[w] = u
                    order.append(w)
                    queue.append(w)
        if len(seen) != len(vertices):
            raise ValueError("component not connected")
        tree_edges = frozenset(_edge(w, p) for w, p in parent.items())
    else:
        tree_edges = frozenset(_edge(*e) for e in tree)
        if not tree_edges <= set(edges) or len(tree_edges) != len(vertices) - 1:
            raise ValueError("explicit tree is not a spanning tree of the component")
        tadj = {v: [] for v in vertices}
        for u, v in sorted(tree_edges):
            tadj[u].append(v)
            tadj[v].append(u)
        parent, order, seen = {}, [base], {base}
        queue = deque([base])
        while queue:
            u = queue.popleft()
            for w in sorted(tadj[u]):
                if w not in seen:
                    seen.add(w)
                    parent[w] = u
                    order.append(w)
                    queue.append(w)
        if len(seen) != len(vertices):
            raise ValueError("explicit tree is not a spanning tree of the component")
    edge_generator = {}
    for u, v in edges:
        if (u, v) not in tree_edges:
            edge_generator[(u, v)] = _generator_name(names, u, v)
    gens = tuple(edge_generator[e] for e in edges if e in edge_generator)

    def letter(u, v):
        g = edge_generator.get(_edge(u, v))
        if g is None:
            return ()
        return ((g, 1),) if u < v else ((g, -1),)

    relators = []
    for s in sorted(x for x in comp if len(x) == 3):
        a, b, c = s
        w = word_mul(letter(a, b), letter(b, c), letter(c, a))
        if w:
            relators.append(w)
    pres = Presentation(gens, tuple(relators))
    return EdgePathGroup(vertices, comp, base, tree_edges, parent, order, edge_generator,
                         pres, tuple(names))


def induced_hom(src, tgt, fmap):
    """Homomorphism pi_1(src, base) -> pi_1(tgt, base') induced by a vertex map.

    Basepoints are connected through target tree paths, which carry no
    letters. Returns ``(GroupHom, corrections)`` where ``corrections[v]`` is
    the word of f(tree(base -> v)).
    """
    missing = sorted(v for v in src.vertices if fmap(v) not in tgt.vertices)
    if missing:
        raise ValueError(f"component not f-invariant: vertices {missing} leave it")
    W = {src.base: ()}
    for v in src.order[1:]:
        u = src.parent[v]
        W[v] = word_mul(W[u], tgt.edge_letter(fmap(u), fmap(v)))
    images = {}
    for (u, v), g in src.edge_generator.items():
        images[g] = word_mul(W[u], tgt.edge_letter(fmap(u), fmap(v)), word_inverse(W[v]))
    hom = GroupHom.from_dict(src.presentation, tgt.presentation, images)
    return hom, W
