"""Integral group rings of abelianized groups, twisted matrices over them,
Stallings traces and Fox derivatives."""
from collections import Counter

from reltrace import linalg
from reltrace.fundamental_group import (
    AbelianStructure, ShadowClassSet, format_word, reduce_word, word_mul,
)


class GroupRing:
    """Z[G] for G an abelianized group; keys are canonical vectors."""

    def __init__(self, ab):
        if not isinstance(ab, AbelianStructure):
            raise TypeError("GroupRing needs an AbelianStructure")
        self.ab = ab

    def __eq__(self, other):
        return isinstance(other, GroupRing) and self.ab == other.ab

    def __hash__(self):
        return hash(self.ab)

    def __repr__(self):
        return f"GroupRing({self.ab!r})"

    def element(self, terms=None):
        """Element from ``{vector_or_word: coefficient}``."""
        out = Counter()
        for k, c in (terms or {}).items():
            if c:
                out[self.ab.normal_form(k)] += c
        return GroupRingElement._make(self, out)

    def zero(self):
        return GroupRingElement._make(self, {})

    def one(self):
        return GroupRingElement._make(self, {self.ab.identity(): 1})

    def group_element(self, x, coeff=1):
        return GroupRingElement._make(self, {self.ab.normal_form(x): coeff})

    def from_pairs(self, pairs):
        """Element from the file syntax ``[[coeff, word], ...]``."""
        out = Counter()
        for c, w in pairs:
            out[self.ab.normal_form(reduce_word(w) if w else self.ab.identity())] += int(c)
        return GroupRingElement._make(self, out)

    def from_free(self, free):
        """Image of a free group ring element ``{word: coeff}``."""
        out = Counter()
        for w, c in free.items():
            out[self.ab.normal_form(w) if w else self.ab.identity()] += c
        return GroupRingElement._make(self, out)


class GroupRingElement:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = {k: c for k, c in terms.items() if c}

    @classmethod
    def _make(cls, ring, terms):
        return cls(ring, terms)

    def _check(self, other):
        if other.ring != self.ring:
            raise ValueError("group ring mismatch")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.one() * other
        self._check(other)
        out = Counter(self.terms)
        for k, c in other.terms.items():
            out[k] += c
        return GroupRingElement(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement(self.ring, {k: c * other for k, c in self.terms.items()})
        self._check(other)
        out = Counter()
        add = self.ring.ab.add
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                out[add(k1, k2)] += c1 * c2
        return GroupRingElement(self.ring, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.one() * other
        return isinstance(other, GroupRingElement) and self.ring == other.ring and (
            self.terms == other.terms)

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"<{self.format()}>"

    def items(self):
        return sorted(self.terms.items(), key=lambda kc: tuple(reversed(kc[0])))

    def augmentation(self):
        return sum(self.terms.values())

    def map(self, matrix, target_ring):
        """Image under the ring map induced by x -> x @ matrix."""
        out = Counter()
        for k, c in self.terms.items():
            img = linalg.vecmat(list(k), matrix) if matrix else [0] * target_ring.ab.n
            out[target_ring.ab.normal_form(img)] += c
        return GroupRingElement(target_ring, out)

    def twist(self, Phi):
        return self.map(Phi, self.ring)

    def format(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.items():
            g = self.ring.ab.format(k)
            if g == "1":
                body = str(abs(c))
            else:
                body = g if abs(c) == 1 else f"{abs(c)}{g}"
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def to_json(self):
        return [[c, [[g, e] for g, e in self.ring.ab.word(k)]] for k, c in self.items()]


def _same_twist(P, Q, n):
    P = P if P is not None else linalg.identity(n)
    Q = Q if Q is not None else linalg.identity(n)
    return [list(r) for r in P] == [list(r) for r in Q]


class GroupRingMatrix:
    """Sparse matrix over Z[G] carrying a twist Phi.

    It represents a map with f(g x) = phi(g) f(x); columns are source basis
    elements, rows target basis elements. ``twist=None`` means untwisted.
    """

    def __init__(self, ring, nrows, ncols, entries=None, twist=None):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {ij: x for ij, x in (entries or {}).items() if x}
        self.twist = None if twist is None else [list(r) for r in twist]
        for (i, j), x in self.entries.items():
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry {(i, j)} outside a {nrows}x{ncols} matrix")
            if x.ring != ring:
                raise ValueError("entry lies in a different group ring")

    @classmethod
    def identity(cls, ring, n, twist=None):
        return cls(ring, n, n, {(i, i): ring.one() for i in range(n)}, twist)

    @classmethod
    def zero(cls, ring, nrows, ncols, twist=None):
        return cls(ring, nrows, ncols, {}, twist)

    @classmethod
    def from_rows(cls, ring, rows, twist=None):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        ent = {}
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if isinstance(x, int):
                    x = ring.one() * x
                if x:
                    ent[(i, j)] = x
        return cls(ring, nrows, ncols, ent, twist)

    def __getitem__(self, ij):
        return self.entries.get(ij, self.ring.zero())

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def twist_matrix(self):
        return self.twist if self.twist is not None else linalg.identity(self.ring.ab.n)

    def __matmul__(self, other):
        """self after other: entries self * phi_self(other), twist Phi_other Phi_self."""
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if other.ring != self.ring:
            raise ValueError("group ring mismatch")
        right = other
        if self.twist is not None:
            right = other.apply_twist(self.twist)
        by_row = {}
        for (k, j), x in right.entries.items():
            by_row.setdefault(k, []).append((j, x))
        out = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                prod = a * b
                out[(i, j)] = out[(i, j)] + prod if (i, j) in out else prod
        if self.twist is None and other.twist is None:
            tw = None
        else:
            tw = linalg.matmul(other.twist_matrix(), self.twist_matrix())
        return GroupRingMatrix(self.ring, self.nrows, other.ncols, out, tw)

    def apply_twist(self, Phi):
        return GroupRingMatrix(self.ring, self.nrows, self.ncols,
                               {ij: x.twist(Phi) for ij, x in self.entries.items()}, self.twist)

    def map_ring(self, matrix, target_ring, twist=None):
        return GroupRingMatrix(target_ring, self.nrows, self.ncols,
                               {ij: x.map(matrix, target_ring) for ij, x in self.entries.items()},
                               twist)

    def with_twist(self, twist):
        return GroupRingMatrix(self.ring, self.nrows, self.ncols, self.entries, twist)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        out = dict(self.entries)
        for ij, x in other.entries.items():
            out[ij] = out[ij] + x if ij in out else x
        return GroupRingMatrix(self.ring, self.nrows, self.ncols, out, self.twist)

    def __neg__(self):
        return GroupRingMatrix(self.ring, self.nrows, self.ncols,
                               {ij: -x for ij, x in self.entries.items()}, self.twist)

    def __sub__(self, other):
        return self + (-other)

    def same_entries(self, other):
        return self.shape == other.shape and self.ring == other.ring and (
            self.entries == other.entries)

    def __eq__(self, other):
        return isinstance(other, GroupRingMatrix) and self.same_entries(other) and (
            _same_twist(self.twist, other.twist, self.ring.ab.n))

    def submatrix(self, rows, cols):
        ri = {r: i for i, r in enumerate(rows)}
        ci = {c: j for j, c in enumerate(cols)}
        out = {(ri[i], ci[j]): x for (i, j), x in self.entries.items() if i in ri and j in ci}
        return GroupRingMatrix(self.ring, len(rows), len(cols), out, self.twist)

    def augment(self):
        M = [[0] * self.ncols for _ in range(self.nrows)]
        for (i, j), x in self.entries.items():
            M[i][j] = x.augmentation()
        return M

    def to_rows(self):
        return [[self[(i, j)] for j in range(self.ncols)] for i in range(self.nrows)]

    def __repr__(self):
        rows = [", ".join(self[(i, j)].format() for j in range(self.ncols))
                for i in range(self.nrows)]
        return "GroupRingMatrix[" + "; ".join(rows) + "]"


class TraceVector:
    """Integer combination of twisted conjugacy classes of one class set."""

    def __init__(self, shadow, coeffs=None):
        if not isinstance(shadow, ShadowClassSet):
            raise TypeError("TraceVector needs a ShadowClassSet")
        self.shadow = shadow
        out = Counter()
        for c, k in (coeffs or {}).items():
            out[shadow.class_of(c)] += k
        self.coeffs = {c: k for c, k in out.items() if k}

    def _check(self, other):
        if other.shadow != self.shadow:
            raise ValueError("trace vectors live in different class sets")

    def __add__(self, other):
        self._check(other)
        out = Counter(self.coeffs)
        for c, k in other.coeffs.items():
            out[c] += k
        return TraceVector(self.shadow, out)

    def __neg__(self):
        return TraceVector(self.shadow, {c: -k for c, k in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return TraceVector(self.shadow, {c: k * v for c, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, TraceVector) and self.shadow == other.shadow and (
            self.coeffs == other.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kc: tuple(reversed(kc[0])))

    def by_label(self):
        return {self.shadow.label(c): k for c, k in self.items()}

    def augmentation(self):
        return sum(self.coeffs.values())

    def essential(self):
        return [c for c, k in self.items() if k]

    def format(self):
        if not self.coeffs:
            return "0"
        s = ""
        for i, (c, k) in enumerate(self.items()):
            term = f"[{self.shadow.label(c)}]" if abs(k) == 1 else f"{abs(k)}[{self.shadow.label(c)}]"
            if i == 0:
                s = ("-" if k < 0 else "") + term
            else:
                s += (" - " if k < 0 else " + ") + term
        return s

    def __repr__(self):
        return f"TraceVector({self.format()})"


def stallings_trace(M, shadow):
    """Sum of the diagonal entries of ``M`` projected to twisted classes."""
    if M.nrows != M.ncols:
        raise ValueError("Stallings trace needs a square matrix")
    if M.ring.ab != shadow.ab:
        raise ValueError("matrix and class set use different groups")
    if not _same_twist(M.twist, shadow.Phi, shadow.ab.n):
        raise ValueError("matrix twist does not match the class set twist")
    out = Counter()
    for (i, j), x in M.entries.items():
        if i == j:
            for k, c in x.terms.items():
                out[shadow.class_of(k)] += c
    return TraceVector(shadow, out)


def augmentation(x):
    """Sum of coefficients of a group ring element or trace vector."""
    return x.augmentation()


def fox_derivative(word, gen, ring=None):
    """Free derivative of ``word`` with respect to generator ``gen``.

    Returns ``{word: coefficient}`` in the free group ring, or its image in
    ``ring`` when one is given.
    """
    out = Counter()
    prefix = ()
    for g, e in reduce_word(word):
        if g == gen:
            if e > 0:
                for k in range(e):
                    out[word_mul(prefix, ((g, k),))] += 1
            else:
                for k in range(1, -e + 1):
                    out[word_mul(prefix, ((g, -k),))] -= 1
        prefix = word_mul(prefix, ((g, e),))
    out = Counter({w: c for w, c in out.items() if c})
    if ring is None:
        return dict(out)
    return ring.from_free(out)


def format_free(x):
    """Readable form of a free group ring element."""
    if not x:
        return "0"
    parts = []
    for w, c in sorted(x.items(), key=lambda wc: (len(wc[0]), wc[0])):
        body = format_word(w)
        if body == "1":
            body = str(abs(c))
        elif abs(c) != 1:
            body = f"{abs(c)}{body}"
        parts.append(("-" if c < 0 else "+") + " " + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]
