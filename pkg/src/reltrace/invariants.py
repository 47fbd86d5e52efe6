"""Relative Lefschetz numbers, relative Reidemeister traces, relative Nielsen
numbers and the vanishing verdict, assembled from lifted pair data."""
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from reltrace import linalg
from reltrace.fundamental_group import reduce_word, word_inverse, word_mul
from reltrace.shadow_algebra.group_ring import TraceVector


class ConsistencyError(RuntimeError):
    """An identity that must hold on every input failed (indicates a bug)."""


# Lefschetz ---------------------------------------------------------------------------

def chain_trace_lefschetz(maps):
    return sum((-1) ** k * linalg.trace(M) for k, M in maps.items())


def homology_lefschetz(data, maps):
    """Alternating sum of traces on rational homology: tr on cycles minus tr on boundaries."""
    total = 0
    for k, basis in data.bases.items():
        n = len(basis)
        if not n:
            continue
        D = data.boundaries.get(k)
        Z = linalg.nullspace(D, n) if D is not None and D else [
            [int(i == j) for i in range(n)] for j in range(n)]
        up = data.boundaries.get(k + 1)
        B = linalg.column_space(up, len(data.bases.get(k + 1, []))) if up else []
        tr = linalg.restricted_trace(maps[k], Z) - linalg.restricted_trace(maps[k], B)
        total += (-1) ** k * tr
    total = Fraction(total)
    if total.denominator != 1:
        raise ConsistencyError("homology trace is not an integer")
    return int(total)


@dataclass
class RelativeLefschetz:
    """Per f-invariant component: L(f|A(x)) and L(f on B(y)/A), plus absolute L(f|B(y))."""

    a: dict
    b: dict
    b_absolute: dict
    excluded: list = field(default_factory=list)
    homology_checked: bool = False

    def totals(self):
        return sum(self.a.values()), sum(self.b.values())


def relative_lefschetz(lift, crosscheck=True):
    a, b, b_abs, excluded = {}, {}, {}, []
    for part in lift.parts:
        if not part.invariant:
            excluded.append(part.key)
            continue
        L = chain_trace_lefschetz(part.rational_map)
        if crosscheck and homology_lefschetz(part.rational, part.rational_map) != L:
            raise ConsistencyError(f"chain and homology Lefschetz numbers differ on {part.key}")
        if part.key[0] == "A":
            a[part.key] = L
        else:
            b[part.key] = L
            Labs = chain_trace_lefschetz(part.rational_absolute_map)
            if crosscheck and homology_lefschetz(part.rational_absolute,
                                                 part.rational_absolute_map) != Labs:
                raise ConsistencyError(f"chain and homology Lefschetz numbers differ on {part.key}")
            b_abs[part.key] = Labs
    return RelativeLefschetz(a, b, b_abs, excluded, crosscheck)


# Reidemeister ------------------------------------------------------------------------

@dataclass
class RelativeTrace:
    """A-parts over the A-component groups, relative B-parts over the B-component
    groups, and the absolute traces of B used for Nielsen numbers."""

    a_parts: dict
    b_parts: dict
    b_absolute: dict
    shadows: dict
    coarsened: bool

    def is_zero(self):
        return not any(self.a_parts.values()) and not any(self.b_parts.values())


def pushforward_trace(trace, class_map):
    out = Counter()
    for c, k in trace.coeffs.items():
        out[class_map(c)] += k
    return TraceVector(class_map.target, out)


def relative_reidemeister(lift):
    a_parts, b_parts, b_abs, shadows = {}, {}, {}, {}
    coarsened = False
    for part in lift.parts:
        if not part.invariant:
            continue
        shadows[part.key] = part.shadow
        coarsened = coarsened or not part.exact
        if part.key[0] == "A":
            a_parts[part.key] = part.chain_map.trace(part.shadow)
    for part in lift.b_parts():
        if not part.invariant:
            continue
        rel = part.chain_map.trace(part.shadow)
        absolute = part.absolute_map.trace(part.shadow)
        pushed = rel
        for akey, cmap in part.pushes.items():
            pushed = pushed + pushforward_trace(a_parts[akey], cmap)
        if pushed != absolute:
            raise ConsistencyError(f"absolute trace of {part.key} is not the pushed A-part "
                                   f"plus the relative part")
        b_parts[part.key] = rel
        b_abs[part.key] = absolute
    return RelativeTrace(a_parts, b_parts, b_abs, shadows, coarsened)


# Nielsen -----------------------------------------------------------------------------

@dataclass(frozen=True)
class NielsenNumbers:
    n_a: int        # N(f|A)
    n_b: int        # N(f)
    n_b_a: int      # N(f, f|A)

    @property
    def relative(self):
        return self.n_a + self.n_b - self.n_b_a


def relative_nielsen(rt, lift):
    """N(f; B, A) = N(f|A) + N(f) - N(f, f|A), summed over tracked components."""
    n_a = sum(len(t.essential()) for t in rt.a_parts.values())
    n_b = sum(len(t.essential()) for t in rt.b_absolute.values())
    n_ba = 0
    for part in lift.b_parts():
        if part.key not in rt.b_absolute:
            continue
        hit = set()
        for akey, cmap in part.pushes.items():
            hit.update(cmap(c) for c in rt.a_parts[akey].essential())
        n_ba += len(hit & set(rt.b_absolute[part.key].essential()))
    return NielsenNumbers(n_a, n_b, n_ba)


# verdict -----------------------------------------------------------------------------

CONCLUSIONS = ("deformable", "not-deformable", "trace-zero-but-hypotheses-unverified",
               "inconclusive-abelianized")


@dataclass
class DeformabilityVerdict:
    trace_zero: bool
    hypotheses: dict
    conclusion: str
    reasons: list


def deformability_verdict(rt, dim_b, dim_a, assertions=None):
    """Vanishing verdict for removing all fixed points by a relative homotopy.

    ``dim_a`` is -1 for empty A. ``assertions`` may hold
    ``A_closed_smooth_manifold`` / ``B_closed_smooth_manifold`` booleans.
    """
    assertions = assertions or {}
    a_empty = dim_a < 0
    hyp = {
        "dim_A": None if a_empty else dim_a,
        "dim_B": dim_b,
        "dim_A_at_least_3": (dim_b >= 3) if a_empty else dim_a >= 3,
        "codim_at_least_2": True if a_empty else dim_b - dim_a >= 2,
        "B_closed_smooth_manifold": bool(assertions.get("B_closed_smooth_manifold", False)),
        "A_closed_smooth_manifold": True if a_empty else bool(
            assertions.get("A_closed_smooth_manifold", False)),
    }
    zero = rt.is_zero()
    reasons = []
    if not zero:
        conclusion = "not-deformable"
        reasons.append("relative trace is nonzero")
    elif rt.coarsened:
        conclusion = "inconclusive-abelianized"
        reasons.append("trace vanishes only in the abelianized shadow")
    elif all(v for k, v in hyp.items() if k not in ("dim_A", "dim_B")):
        conclusion = "deformable"
        reasons.append("trace vanishes and all hypotheses hold")
    else:
        conclusion = "trace-zero-but-hypotheses-unverified"
        reasons.extend(k for k, v in hyp.items() if k not in ("dim_A", "dim_B") and not v)
    return DeformabilityVerdict(zero, hyp, conclusion, reasons)


# cross-checks ------------------------------------------------------------------------

@dataclass
class ConsistencyReport:
    checks: list  # (name, passed)

    @property
    def ok(self):
        return all(p for _, p in self.checks)


def consistency_report(lef, rt, nielsen, strict=True):
    checks = []
    for key, t in rt.a_parts.items():
        checks.append((f"aug {key[0]}{key[1]} = L(f|A)", t.augmentation() == lef.a[key]))
    for key, t in rt.b_parts.items():
        checks.append((f"aug {key[0]}{key[1]} = L(f; B/A)", t.augmentation() == lef.b[key]))
        checks.append((f"aug abs {key[0]}{key[1]} = L(f|B)",
                       rt.b_absolute[key].augmentation() == lef.b_absolute[key]))
    checks.append(("Nielsen zero iff trace zero", (nielsen.relative == 0) == rt.is_zero()))
    report = ConsistencyReport(checks)
    if strict and not report.ok:
        failed = [n for n, p in checks if not p]
        raise ConsistencyError("consistency checks failed: " + ", ".join(failed))
    return report


# experimental refinement ------------------------------------------------------------

def _words_up_to(gens, k):
    letters = [(g, e) for g in gens for e in (1, -1)]
    out = [()]
    frontier = [()]
    for _ in range(k):
        nxt = []
        for w in frontier:
            for l in letters:
                if w and w[-1][0] == l[0] and w[-1][1] == -l[1]:
                    continue
                nxt.append(w + (l,))
        out.extend(nxt)
        frontier = nxt
    return out


def bounded_conjugacy(part, k):
    """Group the diagonal deck words of a lifted component by twisted conjugacy
    found with conjugators of length <= k in the free group.

    Words in one group are certainly in one twisted class; words in different
    groups may still be. Not authoritative.
    """
    if not part.words or part.hom is None:
        return []
    hom = part.hom
    items = sorted(part.words.items())
    words = [reduce_word(w) for _, (_, w) in items]
    parent = list(range(len(words)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    conj = _words_up_to(part.group.generators, k)
    for i, j in product(range(len(words)), repeat=2):
        if i >= j or find(i) == find(j):
            continue
        if part.shadow.class_of(words[i]) != part.shadow.class_of(words[j]):
            continue
        for h in conj:
            if word_mul(h, words[i], word_inverse(hom.apply(h))) == words[j]:
                parent[find(j)] = find(i)
                break
    groups = {}
    for i, (s, (sign, _)) in enumerate(items):
        groups.setdefault(find(i), []).append((s, sign, words[i]))
    return list(groups.values())
