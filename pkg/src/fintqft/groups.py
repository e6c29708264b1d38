"""Finite groups as multiplication tables, and homomorphism counting.

Elements are integers ``0 .. order-1`` with the identity at index 0 for every
built-in group.  Relator words are sequences of signed generator indices: a
letter ``i >= 0`` is generator ``i`` and ``~i`` (that is ``-i - 1``) is its
inverse.
"""

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
import itertools
import re

import numpy as np

from .config import ResourceLimitError, TQFTError, enum_cap

__all__ = [
    "FiniteGroup",
    "GroupPresentation",
    "ConjugacyClasses",
    "cyclic",
    "dihedral",
    "symmetric",
    "alternating",
    "quaternion",
    "group_by_name",
    "BUILTIN_GROUPS",
    "conjugacy_classes",
    "hom_count",
    "surface_presentation",
    "parse_presentation",
    "format_presentation",
    "clear_cache",
]


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    mul: tuple
    inv: tuple
    identity: int
    name: str

    def __post_init__(self):
        if self.order < 1:
            raise TQFTError("group order must be positive")
        if len(self.mul) != self.order or any(len(r) != self.order for r in self.mul):
            raise TQFTError(f"{self.name}: multiplication table is not {self.order}x{self.order}")
        if len(self.inv) != self.order:
            raise TQFTError(f"{self.name}: inverse table has wrong length")

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"

    @property
    def elements(self):
        return range(self.order)

    def conj(self, g, x):
        """Return g x g^-1."""
        return self.mul[self.mul[g][x]][self.inv[g]]

    def power(self, x, n):
        if n < 0:
            x, n = self.inv[x], -n
        result = self.identity
        for _ in range(n):
            result = self.mul[result][x]
        return result

    def element_order(self, x):
        n, y = 1, x
        while y != self.identity:
            y = self.mul[y][x]
            n += 1
        return n

    def centralizer(self, x):
        return [g for g in self.elements if self.mul[g][x] == self.mul[x][g]]

    @cached_property
    def table(self):
        return np.asarray(self.mul, dtype=np.int64)

    @cached_property
    def generators(self):
        """A small generating set, chosen greedily by element index."""
        gens = []
        span = {self.identity}
        for x in self.elements:
            if x in span:
                continue
            gens.append(x)
            span = _closure(self, gens)
            if len(span) == self.order:
                break
        return tuple(gens)

    def check(self):
        """Exhaustively check the group axioms; return a list of problems."""
        problems = []
        e, mul, inv = self.identity, self.mul, self.inv
        for x in self.elements:
            if mul[e][x] != x or mul[x][e] != x:
                problems.append(f"identity fails on {x}")
            if mul[x][inv[x]] != e or mul[inv[x]][x] != e:
                problems.append(f"inverse fails on {x}")
        for x, y, z in itertools.product(self.elements, repeat=3):
            if mul[mul[x][y]][z] != mul[x][mul[y][z]]:
                problems.append(f"associativity fails on {(x, y, z)}")
                break
        return problems


def _closure(g, gens):
    seen = {g.identity}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = g.mul[x][s]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def from_elements(elements, op, name):
    """Build a table group from a list of hashable elements (identity first)."""
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    mul = tuple(tuple(index[op(a, b)] for b in elements) for a in elements)
    inv = tuple(row.index(0) for row in mul)
    return FiniteGroup(order=n, mul=mul, inv=inv, identity=0, name=name)


def _compose_perm(p, q):
    # apply q first, then p
    return tuple(p[i] for i in q)


def _perm_parity(p):
    seen, parity = set(), 0
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity


def cyclic(n):
    return from_elements(list(range(n)), lambda a, b: (a + b) % n, f"Z{n}")


def symmetric(n):
    if n > 5:
        raise TQFTError("symmetric groups are built only for n <= 5")
    perms = sorted(itertools.permutations(range(n)))
    return from_elements(perms, _compose_perm, f"S{n}")


def alternating(n):
    perms = [p for p in sorted(itertools.permutations(range(n))) if _perm_parity(p) == 0]
    return from_elements(perms, _compose_perm, f"A{n}")


def dihedral(n):
    """Symmetries of the regular n-gon, order 2n (so ``dihedral(4)`` is D4)."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    elems = set()
    r = tuple(range(n))
    for _ in range(n):
        elems.add(r)
        elems.add(_compose_perm(r, ref))
        r = _compose_perm(rot, r)
    return from_elements(sorted(elems), _compose_perm, f"D{n}")


def quaternion():
    # (sign, unit) with unit in 1, i, j, k
    units = {("1", "1"): (1, "1")}
    for u in "ijk":
        units[("1", u)] = (1, u)
        units[(u, "1")] = (1, u)
        units[(u, u)] = (-1, "1")
    for a, b, c in ("ijk", "jki", "kij"):
        units[(a, b)] = (1, c)
        units[(b, a)] = (-1, c)

    def op(x, y):
        s, u = units[(x[1], y[1])]
        return (x[0] * y[0] * s, u)

    elems = [(1, "1"), (-1, "1"), (1, "i"), (-1, "i"), (1, "j"), (-1, "j"), (1, "k"), (-1, "k")]
    return from_elements(elems, op, "Q8")


_BUILDERS = {
    "Z2": lambda: cyclic(2),
    "Z3": lambda: cyclic(3),
    "Z4": lambda: cyclic(4),
    "S3": lambda: symmetric(3),
    "S4": lambda: symmetric(4),
    "D4": lambda: dihedral(4),
    "Q8": quaternion,
    "A4": lambda: alternating(4),
}
BUILTIN_GROUPS = tuple(_BUILDERS)
_cache = {}


def group_by_name(name):
    """Look up a built-in group ("Z2", "S3", "Q8", ...); also accepts Zn, Sn, Dn."""
    if name in _cache:
        return _cache[name]
    if name in _BUILDERS:
        g = _BUILDERS[name]()
    else:
        m = re.fullmatch(r"([ZSDA])(\d+)", name)
        if not m:
            raise TQFTError(f"unknown group {name!r}; built-ins are {', '.join(BUILTIN_GROUPS)}")
        kind, n = m.group(1), int(m.group(2))
        if n < 1 or (kind == "D" and n < 3):
            raise TQFTError(f"unknown group {name!r}")
        g = {"Z": cyclic, "S": symmetric, "D": dihedral, "A": alternating}[kind](n)
    _cache[name] = g
    return g


def clear_cache():
    _cache.clear()
    conjugacy_classes.cache_clear()


@dataclass(frozen=True)
class ConjugacyClasses:
    class_of: tuple
    representatives: tuple
    sizes: tuple
    members: tuple = field(repr=False)

    def __len__(self):
        return len(self.representatives)


@lru_cache(maxsize=None)
def conjugacy_classes(g):
    """Conjugation orbits, ordered by (size, smallest element); identity class first."""
    seen = set()
    orbits = []
    for x in g.elements:
        if x in seen:
            continue
        orbit = sorted({g.conj(h, x) for h in g.elements})
        seen.update(orbit)
        orbits.append(orbit)
    orbits.sort(key=lambda o: (len(o), o[0]))
    class_of = [0] * g.order
    for i, orbit in enumerate(orbits):
        for x in orbit:
            class_of[x] = i
    return ConjugacyClasses(
        class_of=tuple(class_of),
        representatives=tuple(o[0] for o in orbits),
        sizes=tuple(len(o) for o in orbits),
        members=tuple(tuple(o) for o in orbits),
    )


@dataclass(frozen=True)
class GroupPresentation:
    num_generators: int
    relators: tuple
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "relators", tuple(tuple(w) for w in self.relators))
        if self.num_generators < 0:
            raise TQFTError("num_generators must be non-negative")
        for word in self.relators:
            for letter in word:
                idx = letter if letter >= 0 else ~letter
                if idx >= self.num_generators:
                    raise TQFTError(
                        f"relator {word} uses generator {idx} but only "
                        f"{self.num_generators} generators exist"
                    )


def commutator(i, j):
    return (i, j, ~i, ~j)


def surface_presentation(genus):
    """pi_1 of the closed orientable surface: <a1,b1,...| [a1,b1]...[ag,bg]>."""
    if genus < 0:
        raise TQFTError("genus must be non-negative")
    if genus == 0:
        return GroupPresentation(0, (), "S^2")
    word = []
    for k in range(genus):
        word.extend(commutator(2 * k, 2 * k + 1))
    return GroupPresentation(2 * genus, (tuple(word),), f"Sigma_{genus}")


def _evaluate(g, word, values, identity):
    """Evaluate a relator on (possibly vectorized) generator values."""
    table, inv = g.table, np.asarray(g.inv)
    acc = identity
    for letter in word:
        if letter >= 0:
            v = values[letter]
        else:
            v = inv[values[~letter]]
        acc = table[acc, v]
    return acc


def hom_count(p, g, cap=None):
    """Number of homomorphisms from the presented group to ``g``, by brute force.

    The last few generators are enumerated as a numpy batch; the rest in a
    Python loop.  The total is independent of that split.
    """
    cap = enum_cap() if cap is None else cap
    n = p.num_generators
    if g.order**n > cap:
        raise ResourceLimitError(
            f"hom_count: {g.order}^{n} = {g.order**n} trials exceeds cap {cap}"
        )
    if n == 0:
        return 1
    batch = 1
    while batch < n and g.order ** (batch + 1) <= 4096:
        batch += 1
    grids = np.indices((g.order,) * batch).reshape(batch, -1)
    ident = np.full(grids.shape[1], g.identity, dtype=np.int64)
    total = 0
    for head in itertools.product(range(g.order), repeat=n - batch):
        values = list(head) + list(grids)
        ok = np.ones(grids.shape[1], dtype=bool)
        for word in p.relators:
            ok &= _evaluate(g, word, values, ident) == g.identity
        total += int(ok.sum())
    return total


_TOKEN = re.compile(r"^([a-z])(?:\^(-?\d+))?$")


def parse_presentation(text, name=""):
    """Parse the text format: first line the generator count, then one relator
    per line, e.g. ``a b a^-1 b^-1``.  ``#`` starts a comment."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise TQFTError("empty presentation")
    try:
        n = int(lines[0])
    except ValueError:
        raise TQFTError(f"first line must be the number of generators, got {lines[0]!r}") from None
    relators = []
    for ln in lines[1:]:
        word = []
        for tok in ln.split():
            m = _TOKEN.match(tok)
            if not m:
                raise TQFTError(f"bad relator token {tok!r}")
            idx = ord(m.group(1)) - ord("a")
            exp = int(m.group(2)) if m.group(2) is not None else 1
            letter = idx if exp > 0 else ~idx
            word.extend([letter] * abs(exp))
        relators.append(tuple(word))
    return GroupPresentation(n, tuple(relators), name)


def format_presentation(p):
    lines = [str(p.num_generators)]
    for word in p.relators:
        toks = [chr(ord("a") + l) if l >= 0 else chr(ord("a") + ~l) + "^-1" for l in word]
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"
