"""Random and hand-built inputs shared by the test modules."""
import os
import random
from importlib import resources
from itertools import product

from reltrace.complexes import SimplicialPair, VertexSelfMap, full_skeleton
from reltrace.shadow_algebra.eimodules import EICategory, free_module

FIXTURES = ("ex51_solidtorus.json", "ex52_torus.json", "circle_deg3.json",
            "circle_arc_identity.json")


def seed():
    return int(os.environ.get("RELTRACE_SEED", "20261019"))


def fixture_path(name):
    return str(resources.files("reltrace") / "fixtures" / name)


def pair_of(n, simplices, a_simplices, images):
    names = tuple(str(i) for i in range(n))
    return (SimplicialPair(names, frozenset(simplices), frozenset(a_simplices)),
            VertexSelfMap(tuple(images)))


def random_pair(rng):
    """Full k-skeleton of an (n-1)-simplex, A the full subcomplex on a random
    vertex set S (sometimes empty), and f any vertex map with f(S) in S."""
    n = rng.randint(3, 5)
    k = rng.randint(1, 2)
    simplices = full_skeleton(n, k)
    if rng.random() < 0.15:
        S = []
    else:
        S = sorted(rng.sample(range(n), rng.randint(1, n - 1)))
    a_simplices = [s for s in simplices if set(s) <= set(S)]
    images = [rng.choice(S) if v in S else rng.randrange(n) for v in range(n)]
    return pair_of(n, simplices, a_simplices, images)


def random_pairs(count, rng=None):
    rng = rng or random.Random(seed())
    return [random_pair(rng) for _ in range(count)]


def _cycle(vs):
    m = len(vs)
    return [(v,) for v in vs] + [tuple(sorted((vs[i], vs[(i + 1) % m]))) for i in range(m)]


def fixed_point_free_pairs():
    """(label, pair, map) for simplicial maps without fixed points."""
    out = []
    out.append(("rotated triangle", *pair_of(3, _cycle([0, 1, 2]), [], [1, 2, 0])))
    sphere = full_skeleton(4, 2)
    out.append(("4-cycle on the tetrahedron boundary", *pair_of(4, sphere, [], [1, 2, 3, 0])))
    two = _cycle([0, 1, 2]) + _cycle([3, 4, 5])
    out.append(("two rotated circles, A = one of them",
                *pair_of(6, two, _cycle([0, 1, 2]), [1, 2, 0, 4, 5, 3])))
    hexagon = _cycle(list(range(6)))
    out.append(("hexagon rotated twice, A = alternate vertices",
                *pair_of(6, hexagon, [(0,), (2,), (4,)], [(v + 2) % 6 for v in range(6)])))
    return out


def random_ei_category(rng):
    """At most three objects, automorphism groups of order 1, 2 or 3.

    Skeleton classes i carry cyclic groups G_i and are related by a random
    strict order; for i < j the non-isomorphisms are G_j x G_i with
    (x, y) o (u, v) = (x, v), isomorphisms act on the outer factors. Some
    classes get a second isomorphic copy.
    """
    total = rng.randint(1, 3)
    sizes = []
    left = total
    while left:
        c = rng.randint(1, min(2, left))
        sizes.append(c)
        left -= c
    orders = [rng.choice((1, 2, 3)) for _ in sizes]
    m = len(sizes)
    below = {(i, j) for i in range(m) for j in range(i + 1, m) if rng.random() < 0.6}
    changed = True
    while changed:
        changed = False
        for (i, j), (j2, l) in product(list(below), repeat=2):
            if j == j2 and (i, l) not in below:
                below.add((i, l))
                changed = True
    objects = [(i, p) for i in range(m) for p in range(sizes[i])]
    homs, comp, ident = {}, {}, {}
    for (i, p), (j, q) in product(objects, repeat=2):
        if i == j:
            homs[((i, p), (j, q))] = [("iso", i, p, q, g) for g in range(orders[i])]
        elif (i, j) in below:
            homs[((i, p), (j, q))] = [("map", i, p, j, q, x, y)
                                      for x in range(orders[j]) for y in range(orders[i])]
    for (a, b), ms in homs.items():
        for f in ms:
            for c in objects:
                for g in homs.get((b, c), ()):
                    comp[(g, f)] = _compose(g, f, orders)
    for (i, p) in objects:
        ident[(i, p)] = ("iso", i, p, p, 0)
    return EICategory(objects, homs, comp, ident)


def _compose(g, f, orders):
    if g[0] == "iso" and f[0] == "iso":
        _, i, p, _, a = f
        _, _, _, r, b = g
        return ("iso", i, p, r, (a + b) % orders[i])
    if g[0] == "iso":
        _, i, p, j, _, x, y = f
        _, _, _, r, b = g
        return ("map", i, p, j, r, (x + b) % orders[j], y)
    if f[0] == "iso":
        _, i, p, _, a = f
        _, _, _, j, r, x, y = g
        return ("map", i, p, j, r, x, (y + a) % orders[i])
    _, i, p, _, _, _, v = f
    _, _, _, j, r, x, _ = g
    return ("map", i, p, j, r, x, v)


def random_free_modules(cat, rng):
    reps = cat.representatives()
    rx = {c: rng.randint(0, 3) for c in reps}
    ry = {c: rng.randint(0, 3) for c in reps}
    return free_module(cat, rx, "contravariant"), free_module(cat, ry, "covariant")
