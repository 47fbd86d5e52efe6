"""Modules over finite EI-categories: composition product, shadow, explicit
duals and the triangle identities.

Everything is computed over Z with explicit integer matrices; coequalizers
are reported as (free rank, torsion) after Smith reduction.
"""
from dataclasses import dataclass, field
from itertools import product

from reltrace import linalg


class EICategory:
    """Finite category given by hom-sets and a composition table.

    ``homs[(a, b)]`` lists the morphisms a -> b; ``composition[(g, f)]`` is
    g o f for f: a -> b, g: b -> c; ``identities[a]`` is the identity of a.
    Morphism names must be globally unique.
    """

    def __init__(self, objects, homs, composition, identities):
        self.objects = tuple(objects)
        self.homs = {k: tuple(v) for k, v in homs.items() if v}
        self.composition = dict(composition)
        self.identities = dict(identities)
        self.ends = {}
        for (a, b), ms in self.homs.items():
            for m in ms:
                self.ends[m] = (a, b)

    def hom(self, a, b):
        return self.homs.get((a, b), ())

    def compose(self, g, f):
        return self.composition[(g, f)]

    def morphisms(self):
        return [m for k in sorted(self.homs, key=self._key) for m in self.homs[k]]

    def _key(self, ab):
        return (self.objects.index(ab[0]), self.objects.index(ab[1]))

    def inverse(self, m):
        a, b = self.ends[m]
        for n in self.hom(b, a):
            if self.compose(n, m) == self.identities[a] and self.compose(m, n) == self.identities[b]:
                return n
        return None

    def is_iso(self, m):
        return self.inverse(m) is not None

    def validate(self):
        problems = []
        for a in self.objects:
            if self.identities.get(a) not in self.hom(a, a):
                problems.append(f"object {a!r} lacks an identity")
        for m, (a, b) in self.ends.items():
            if self.compose(self.identities[b], m) != m or self.compose(m, self.identities[a]) != m:
                problems.append(f"identity law fails at {m!r}")
        for f, (a, b) in self.ends.items():
            for g in (g for g, (b2, _) in self.ends.items() if b2 == b):
                c = self.ends[g][1]
                gf = self.composition.get((g, f))
                if gf is None or self.ends.get(gf) != (a, c):
                    problems.append(f"composite {g!r} o {f!r} missing or misplaced")
                    continue
                for h in (h for h, (c2, _) in self.ends.items() if c2 == c):
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                        problems.append(f"associativity fails at {h!r}, {g!r}, {f!r}")
        for a in self.objects:
            for m in self.hom(a, a):
                if not self.is_iso(m):
                    problems.append(f"endomorphism {m!r} of {a!r} is not invertible (not EI)")
        return problems

    def iso_classes(self):
        """Isomorphism classes in object order; the first member is the representative."""
        classes = []
        seen = set()
        for a in self.objects:
            if a in seen:
                continue
            cls = [b for b in self.objects
                   if any(self.is_iso(m) for m in self.hom(a, b))]
            seen.update(cls)
            classes.append(cls)
        return classes

    def representatives(self):
        return [c[0] for c in self.iso_classes()]

    def automorphisms(self, c):
        return list(self.hom(c, c))


@dataclass
class EIModule:
    """A functor from an EI-category (or its opposite) to free abelian groups.

    ``action[m]`` is an integer matrix acting on column vectors: for
    m: a -> b it maps X(a) -> X(b) when covariant and X(b) -> X(a) when
    contravariant. ``free_rank[c]`` (optional) records that X(c) is free of
    that rank over Z[Aut(c)] with Z-basis e_i g ordered by (i, g) in the
    order of ``category.automorphisms(c)``.
    """

    category: EICategory
    variance: str
    ranks: dict
    action: dict
    free_rank: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.variance not in ("covariant", "contravariant"):
            raise ValueError("variance must be 'covariant' or 'contravariant'")

    def matrix(self, m):
        return self.action[m]

    def supported_on_isomorphisms(self):
        for m in self.category.ends:
            if not self.category.is_iso(m) and any(any(r) for r in self.action[m]):
                return False
        return True

    def validate(self):
        problems = []
        cat = self.category
        for m, (a, b) in cat.ends.items():
            src, tgt = (a, b) if self.variance == "covariant" else (b, a)
            M = self.action.get(m)
            if M is None or len(M) != self.ranks[tgt] or any(len(r) != self.ranks[src] for r in M):
                problems.append(f"action of {m!r} has the wrong shape")
        if problems:
            return problems
        for a in cat.objects:
            if self.action[cat.identities[a]] != linalg.identity(self.ranks[a]):
                problems.append(f"identity of {a!r} does not act trivially")
        for f, (a, b) in cat.ends.items():
            for g in (g for g, (b2, _) in cat.ends.items() if b2 == b):
                gf = cat.compose(g, f)
                if self.variance == "covariant":
                    expect = linalg.matmul(self.action[g], self.action[f], self.ranks[a])
                else:
                    expect = linalg.matmul(self.action[f], self.action[g], self.ranks[cat.ends[g][1]])
                if _normalize(self.action[gf]) != _normalize(expect):
                    problems.append(f"functoriality fails at {g!r} o {f!r}")
        return problems


def _normalize(M):
    return [list(r) for r in M]


def _kron_index(dims):
    offsets, total = [], 0
    for d in dims:
        offsets.append(total)
        total += d
    return offsets, total


def _group_invariants(relations, ncols):
    rows = [r for r in relations if any(r)]
    if not rows:
        return ncols, []
    hnf = linalg.hermite_normal_form(rows, ncols)
    return linalg.smith_invariants(hnf, ncols)


def canonical_invariants(free_rank, torsion):
    """Invariant-factor form of Z^free_rank plus the given cyclic torsion."""
    if not torsion:
        return free_rank, []
    n = len(torsion)
    diag = [[torsion[i] if i == j else 0 for j in range(n)] for i in range(n)]
    _, tors = linalg.smith_invariants(diag, n)
    return free_rank, tors


@dataclass(frozen=True)
class ComposeResult:
    per_representative: dict
    direct_sum: tuple
    coequalizer: tuple

    @property
    def agrees(self):
        return self.direct_sum == self.coequalizer


def _tensor_relations(X, Y, pairs, block_of, dims):
    """Rows X(m)x (x) y - x (x) Y(m)y for each listed morphism m: b -> a."""
    rels = []
    _, total = _kron_index(dims)
    for m in pairs:
        b, a = X.category.ends[m]
        Xm = X.action[m]          # X(a) -> X(b)
        Ym = Y.action[m]          # Y(b) -> Y(a)
        ob, oa = block_of[b], block_of[a]
        yb, ya = Y.ranks[b], Y.ranks[a]
        for i in range(X.ranks[a]):
            for j in range(yb):
                row = [0] * total
                for k in range(X.ranks[b]):
                    c = Xm[k][i]
                    if c:
                        row[ob + k * yb + j] += c
                for l in range(ya):
                    c = Ym[l][j]
                    if c:
                        row[oa + i * ya + l] -= c
                rels.append(row)
    return rels, total


def eimodule_compose(X, Y):
    """X (.) Y for X contravariant and Y covariant, both supported on isomorphisms.

    Computes the sum over isomorphism-class representatives of
    X(c) (x)_{Aut(c)} Y(c) and checks it against the full coequalizer over
    all objects and morphisms.
    """
    if X.variance != "contravariant" or Y.variance != "covariant":
        raise ValueError("need a contravariant X and a covariant Y")
    if not (X.supported_on_isomorphisms() and Y.supported_on_isomorphisms()):
        raise ValueError("modules are not supported on isomorphisms")
    cat = X.category
    per_rep = {}
    rank_sum, torsion = 0, []
    for c in cat.representatives():
        block = {c: 0}
        dims = [X.ranks[c] * Y.ranks[c]]
        rels, total = _tensor_relations(X, Y, cat.automorphisms(c), block, dims)
        inv = _group_invariants(rels, total)
        per_rep[c] = inv
        rank_sum += inv[0]
        torsion += inv[1]
    objs = cat.objects
    dims = [X.ranks[a] * Y.ranks[a] for a in objs]
    offsets, total = _kron_index(dims)
    block = dict(zip(objs, offsets))
    rels, total = _tensor_relations(X, Y, cat.morphisms(), block, dims)
    generic = _group_invariants(rels, total)
    return ComposeResult(per_rep, canonical_invariants(rank_sum, torsion),
                         canonical_invariants(*generic))


@dataclass
class Bimodule:
    """Z: A (x) A^op -> Ab, covariant in the first slot.

    ``left[(m, b)]`` maps Z(a, b) -> Z(a', b) for m: a -> a';
    ``right[(m, a)]`` maps Z(a, b) -> Z(a, b') for m: b' -> b.
    """

    category: EICategory
    ranks: dict
    left: dict
    right: dict


@dataclass(frozen=True)
class ShadowResult:
    free_rank: int
    torsion: tuple
    generators: tuple
    relations: tuple


def eimodule_shadow(Z):
    """Coequalizer of the two actions on the diagonal values Z(a, a)."""
    cat = Z.category
    objs = cat.objects
    dims = [Z.ranks.get((a, a), 0) for a in objs]
    offsets, total = _kron_index(dims)
    block = dict(zip(objs, offsets))
    gens = tuple((a, i) for a in objs for i in range(Z.ranks.get((a, a), 0)))
    rels = []
    for m, (a, a2) in cat.ends.items():
        n = Z.ranks.get((a, a2), 0)
        if not n:
            continue
        L = Z.left[(m, a2)]    # Z(a, a2) -> Z(a2, a2)
        R = Z.right[(m, a)]    # Z(a, a2) -> Z(a, a)
        for i in range(n):
            row = [0] * total
            for k in range(dims[objs.index(a2)]):
                row[block[a2] + k] += L[k][i]
            for k in range(dims[objs.index(a)]):
                row[block[a] + k] -= R[k][i]
            if any(row):
                rels.append(row)
    rank, tors = _group_invariants(rels, total)
    return ShadowResult(rank, tuple(tors), gens, tuple(map(tuple, rels)))


def hom_bimodule(cat, functor=None):
    """Z(a, b) = Z[A(F b, a)], left action by composition, right action through F.

    ``functor`` is ``(object_map, morphism_map)``; identity when omitted.
    """
    if functor is None:
        obj_map = {a: a for a in cat.objects}
        mor_map = {m: m for m in cat.ends}
    else:
        obj_map, mor_map = functor
    ranks, left, right, basis = {}, {}, {}, {}
    for a in cat.objects:
        for b in cat.objects:
            basis[(a, b)] = list(cat.hom(obj_map[b], a))
            ranks[(a, b)] = len(basis[(a, b)])
    for m, (a, a2) in cat.ends.items():
        for b in cat.objects:
            src, tgt = basis[(a, b)], basis[(a2, b)]
            M = [[0] * len(src) for _ in tgt]
            for j, h in enumerate(src):
                M[tgt.index(cat.compose(m, h))][j] += 1
            left[(m, b)] = M
        # m: b' -> b acts Z(x, b) -> Z(x, b') by h -> h o F(m)
        bp, b = a, a2
        for x in cat.objects:
            src, tgt = basis[(x, b)], basis[(x, bp)]
            M = [[0] * len(src) for _ in tgt]
            for j, h in enumerate(src):
                M[tgt.index(cat.compose(h, mor_map[m]))][j] += 1
            right[(m, x)] = M
    return Bimodule(cat, ranks, left, right)


# free modules and duals ----------------------------------------------------------

def group_table(cat, c):
    els = cat.automorphisms(c)
    idx = {g: i for i, g in enumerate(els)}
    mul = [[idx[cat.compose(g, h)] for h in els] for g in els]
    return els, idx, mul


def _transports(cat):
    """For each object a, its representative c and a fixed isomorphism s_a: c -> a."""
    out = {}
    for cls in cat.iso_classes():
        c = cls[0]
        for a in cls:
            s = cat.identities[a] if a == c else next(
                m for m in cat.hom(c, a) if cat.is_iso(m))
            out[a] = (c, s)
    return out


def free_module(cat, ranks, variance):
    """Free module over Aut(c) of rank ``ranks[c]`` on each representative c,
    supported on isomorphisms.

    Every object a is identified with its representative through a fixed
    isomorphism s_a, and an isomorphism m: a -> b acts through
    s_b^-1 m s_a in Aut(c): by right multiplication on contravariant (right)
    modules, by left multiplication on covariant (left) ones.
    """
    trans = _transports(cat)
    tables = {c: group_table(cat, c) for c in cat.representatives()}
    zranks = {a: ranks[trans[a][0]] * len(tables[trans[a][0]][0]) for a in cat.objects}
    action = {}
    for m, (a, b) in cat.ends.items():
        src, tgt = (a, b) if variance == "covariant" else (b, a)
        M = [[0] * zranks[src] for _ in range(zranks[tgt])]
        if cat.is_iso(m):
            c, sa = trans[a]
            _, sb = trans[b]
            els, idx, mul = tables[c]
            n = len(els)
            h = idx[cat.compose(cat.inverse(sb), cat.compose(m, sa))]
            for i in range(ranks[c]):
                for gi in range(n):
                    k = mul[gi][h] if variance == "contravariant" else mul[h][gi]
                    M[i * n + k][i * n + gi] += 1
        action[m] = M
    free = {a: ranks[trans[a][0]] for a in cat.objects}
    return EIModule(cat, variance, zranks, action, free)


def _check_free(F):
    if F.variance != "contravariant":
        raise ValueError("build_dual expects a contravariant (right) module")
    cat = F.category
    for c in cat.representatives():
        if c not in F.free_rank:
            raise ValueError(f"module value at {c!r} is not marked free")
        els, idx, mul = group_table(cat, c)
        n, r = len(els), F.free_rank[c]
        if F.ranks[c] != r * n:
            raise ValueError(f"module value at {c!r} is not free of rank {r}")
        for hi, h in enumerate(els):
            M = F.action[h]
            for i in range(r):
                for gi in range(n):
                    col = [M[row][i * n + gi] for row in range(F.ranks[c])]
                    want = [0] * F.ranks[c]
                    want[i * n + mul[gi][hi]] = 1
                    if col != want:
                        raise ValueError(f"module value at {c!r} is not free on the given basis")


@dataclass
class DualData:
    """Per-representative dual data and the block-diagonal assembly.

    For each representative c with group G and rank r:
    ``coevaluation[c]`` is the vector eta(1) in F(c) (x)_G F*(c), basis
    (i, k, j) = e_i (x) k e_j'; ``evaluation[c]`` is the |G| x (r|G|)^2
    matrix of eps: F*(c) (x)_Z F(c) -> Z[G], columns ((h, j), (l, g)).
    """

    dual: EIModule
    groups: dict
    coevaluation: dict
    evaluation: dict


def build_dual(F):
    """Explicit dual of a free contravariant module supported on isomorphisms."""
    _check_free(F)
    if not F.supported_on_isomorphisms():
        raise ValueError("module is not supported on isomorphisms")
    cat = F.category
    dual = free_module(cat, {c: F.free_rank[c] for c in cat.representatives()}, "covariant")
    groups, coev, ev = {}, {}, {}
    for c in cat.representatives():
        els, idx, mul = group_table(cat, c)
        n, r = len(els), F.free_rank[c]
        e = idx[cat.identities[c]]
        groups[c] = (els, mul, e)
        eta = [0] * (r * n * r)
        for i in range(r):
            eta[(i * n + e) * r + i] = 1
        coev[c] = eta
        dim = r * n
        eps = [[0] * (dim * dim) for _ in range(n)]
        for j in range(r):
            for h in range(n):
                for l in range(r):
                    for g in range(n):
                        if j == l:
                            eps[mul[h][g]][(j * n + h) * dim + (l * n + g)] = 1
        ev[c] = eps
    return DualData(dual, groups, coev, ev)


def _snake_matrices(r, n, mul, eta, eps):
    dim = r * n
    tens = r * n * r                        # F (x)_G F*, basis (i, k, j)
    # (eta (.) id): F -> (F (x)_G F*) (x) F
    A1 = [[0] * dim for _ in range(tens * dim)]
    for x in range(dim):
        for t, c in enumerate(eta):
            if c:
                A1[t * dim + x][x] += c
    # (id (.) eps): (F (x)_G F*) (x) F -> F,  e_i (x) k e_j' (x) y -> e_i eps(k e_j', y)
    A2 = [[0] * (tens * dim) for _ in range(dim)]
    for i in range(r):
        for k in range(n):
            for j in range(r):
                t = (i * n + k) * r + j
                for y in range(dim):
                    col = eps_column(eps, dim, j * n + k, y)
                    for u, c in col:
                        A2[i * n + u][t * dim + y] += c
    # (id (.) eta): F* -> F* (x) (F (x)_G F*)
    B1 = [[0] * dim for _ in range(dim * tens)]
    for y in range(dim):
        for t, c in enumerate(eta):
            if c:
                B1[y * tens + t][y] += c
    # (eps (.) id): F* (x) F (x)_G F* -> F*,  y (x) e_i (x) k e_l' -> eps(y, e_i) k e_l'
    B2 = [[0] * (dim * tens) for _ in range(dim)]
    e = next(g for g in range(n) if all(mul[g][h] == h for h in range(n)))
    for y in range(dim):
        for i in range(r):
            for k in range(n):
                for l in range(r):
                    t = (i * n + k) * r + l
                    for u, c in eps_column(eps, dim, y, i * n + e):
                        B2[l * n + mul[u][k]][y * tens + t] += c
    return A1, A2, B1, B2


def eps_column(eps, dim, ystar, x):
    col = ystar * dim + x
    return [(u, eps[u][col]) for u in range(len(eps)) if eps[u][col]]


def verify_snake(F, data):
    """True iff both triangle composites are identities on every representative
    and on the block-diagonal assembly over all representatives."""
    blocks_1, blocks_2 = [], []
    for c, (els, mul, _) in data.groups.items():
        r, n = F.free_rank[c], len(els)
        A1, A2, B1, B2 = _snake_matrices(r, n, mul, data.coevaluation[c], data.evaluation[c])
        s1 = linalg.matmul(A2, A1)
        s2 = linalg.matmul(B2, B1)
        if s1 != linalg.identity(r * n) or s2 != linalg.identity(r * n):
            return False
        blocks_1.append(s1)
        blocks_2.append(s2)
    total = sum(len(b) for b in blocks_1)
    return _block_diag(blocks_1) == linalg.identity(total) and (
        _block_diag(blocks_2) == linalg.identity(total))


def _block_diag(blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    o = 0
    for b in blocks:
        for i, row in enumerate(b):
            out[o + i][o:o + len(row)] = row
        o += len(b)
    return out


# small constructors ---------------------------------------------------------------

def cyclic_group_category(n, name="*"):
    """One object whose automorphism group is Z/n; morphism k means generator^k."""
    mors = [(name, k) for k in range(n)]
    comp = {((name, a), (name, b)): (name, (a + b) % n) for a, b in product(range(n), repeat=2)}
    return EICategory([name], {(name, name): mors}, comp, {name: (name, 0)})


def sign_module(cat, c, variance):
    """Z with the generator of a cyclic Aut(c) acting by -1 (not free)."""
    action = {}
    for m, (a, b) in cat.ends.items():
        if a == b == c:
            k = m[1] if isinstance(m, tuple) else 0
            action[m] = [[(-1) ** k]]
        else:
            action[m] = [[0]]
    return EIModule(cat, variance, {a: 1 for a in cat.objects}, action)
