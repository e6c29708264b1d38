"""Brute-force reference computations.

These deliberately avoid the package's own algorithms: they take a raw
multiplication table (list of lists) and loop.
"""

from fractions import Fraction
from itertools import product


def table(g):
    return [list(map(int, row)) for row in g.table]


def identity_of(t):
    return next(e for e in range(len(t)) if all(t[e][x] == x for x in range(len(t))))


def inverses(t):
    e = identity_of(t)
    return [next(y for y in range(len(t)) if t[x][y] == e) for x in range(len(t))]


def conjugacy_class_sizes(t):
    n, inv = len(t), inverses(t)
    seen, sizes = set(), []
    for x in range(n):
        if x in seen:
            continue
        orbit = {t[t[h][x]][inv[h]] for h in range(n)}
        seen |= orbit
        sizes.append(len(orbit))
    return sorted(sizes)


def centralizer_orders(t):
    n = len(t)
    return sorted(
        sum(1 for h in range(n) if t[h][x] == t[x][h]) for x in _class_reps(t)
    )


def _class_reps(t):
    n, inv = len(t), inverses(t)
    seen, reps = set(), []
    for x in range(n):
        if x not in seen:
            reps.append(x)
            seen |= {t[t[h][x]][inv[h]] for h in range(n)}
    return reps


def commuting_pairs(t):
    n = len(t)
    return sum(1 for a in range(n) for b in range(n) if t[a][b] == t[b][a])


def commuting_triples(t):
    n = len(t)
    count = 0
    for a in range(n):
        for b in range(n):
            if t[a][b] != t[b][a]:
                continue
            for c in range(n):
                if t[a][c] == t[c][a] and t[b][c] == t[c][b]:
                    count += 1
    return count


def order_divides(t, p):
    e = identity_of(t)
    count = 0
    for x in range(len(t)):
        y = e
        for _ in range(p):
            y = t[y][x]
        count += y == e
    return count


def _comm(t, inv, a, b):
    return t[t[t[a][b]][inv[a]]][inv[b]]


def surface_count(t, genus):
    """Solutions of [a1,b1]...[ag,bg] = e, by full enumeration."""
    n, inv, e = len(t), inverses(t), identity_of(t)
    count = 0
    for tup in product(range(n), repeat=2 * genus):
        acc = e
        for i in range(genus):
            acc = t[acc][_comm(t, inv, tup[2 * i], tup[2 * i + 1])]
        count += acc == e
    return count


def surface_value(t, genus):
    return Fraction(surface_count(t, genus), len(t))
