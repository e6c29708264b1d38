"""Spans of finite groupoids, weak pullback, and degroupoidification.

A flat G-field on a circle is its holonomy, up to conjugation, so the field
groupoid of ``n`` circles is G^n acting on itself by componentwise
conjugation.  A cobordism generator gives a span of such groupoids through
restriction to its boundary; gluing is the weak pullback; the linear map is
pull back along the source leg, then push forward along the target leg with
groupoid-cardinality weights.

Two representations live here:

* ``ActionGroupoid`` / ``GroupoidSpan``: explicit carriers and group actions.
  ``compose_spans`` builds the weak pullback literally as connecting-morphism
  triples.  Exact but the carrier grows by |G| per glued circle.
* ``SkeletalSpan``: one entry per apex isomorphism class, holding the order
  of its automorphism group and the image of that group in the automorphism
  groups of the boundary objects.  Composition is the same weak pullback
  taken class pair by class pair.  ``quantize`` uses this form.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
import itertools

import numpy as np

from .cobordism import Compose, Gen
from .config import ResourceLimitError, TQFTError, apex_cap
from .groups import clear_cache as clear_group_cache, conjugacy_classes
from .linalg import LinearMap

__all__ = [
    "ProductGroup",
    "ActionGroupoid",
    "IsoClassSpace",
    "GroupoidMap",
    "GroupoidSpan",
    "circle_groupoid",
    "circles_groupoid",
    "generator_span",
    "compose_spans",
    "tensor_spans",
    "degroupoidify",
    "SkeletalSpan",
    "skeletonize",
    "compose_skeletal",
    "tensor_skeletal",
    "quantize",
    "quantize_explicit",
    "explicit_span",
    "clear_caches",
]


# -- groups of tuples --------------------------------------------------------


@dataclass(frozen=True)
class ProductGroup:
    """Direct product of table groups; elements are tuples of element indices."""

    factors: tuple = ()

    @property
    def order(self):
        n = 1
        for g in self.factors:
            n *= g.order
        return n

    @property
    def identity(self):
        return tuple(g.identity for g in self.factors)

    def mul(self, x, y):
        return tuple(g.mul[a][b] for g, a, b in zip(self.factors, x, y))

    def inv(self, x):
        return tuple(g.inv[a] for g, a in zip(self.factors, x))

    def elements(self):
        return itertools.product(*(g.elements for g in self.factors))

    @cached_property
    def generators(self):
        e = list(self.identity)
        gens = []
        for pos, g in enumerate(self.factors):
            for s in g.generators:
                x = e.copy()
                x[pos] = s
                gens.append(tuple(x))
        return tuple(gens)

    def __mul__(self, other):
        return ProductGroup(self.factors + other.factors)


# -- explicit groupoids ------------------------------------------------------


@dataclass(frozen=True)
class IsoClassSpace:
    representatives: tuple
    aut_orders: tuple
    class_of: dict = field(repr=False, compare=False)

    def __len__(self):
        return len(self.representatives)


@dataclass(eq=False)
class ActionGroupoid:
    """The groupoid of ``group`` acting on ``carrier`` via ``act(h, x)``.

    ``key`` identifies the groupoid for foot matching; ``class_key`` orders
    the isomorphism classes (default: first appearance in the carrier).
    """

    carrier: tuple
    group: ProductGroup
    act: object
    label: str = ""
    key: object = None
    class_key: object = None
    gauge: object = None  # the FiniteGroup, for circle groupoids

    def __post_init__(self):
        if self.key is None:
            self.key = ("anonymous", id(self))

    @cached_property
    def index(self):
        return {x: i for i, x in enumerate(self.carrier)}

    def action_table(self):
        idx = self.index
        return tuple(tuple(idx[self.act(h, x)] for x in self.carrier) for h in self.group.elements())

    def check_action(self):
        """Identity acts trivially and (sh).x = s.(h.x) for generators s and
        all h, which gives the action law for every pair by induction."""
        e = self.group.identity
        if any(self.act(e, x) != x for x in self.carrier):
            return False
        elems = list(self.group.elements())
        for g, h in itertools.product(self.group.generators, elems):
            gh = self.group.mul(g, h)
            for x in self.carrier:
                if self.act(gh, x) != self.act(g, self.act(h, x)):
                    return False
        return True

    def orbits(self):
        gens = self.group.generators
        seen = set()
        out = []
        for x in self.carrier:
            if x in seen:
                continue
            orbit = [x]
            seen.add(x)
            frontier = [x]
            while frontier:
                nxt = []
                for y in frontier:
                    for s in gens:
                        z = self.act(s, y)
                        if z not in seen:
                            seen.add(z)
                            orbit.append(z)
                            nxt.append(z)
                frontier = nxt
            out.append(orbit)
        return out

    @cached_property
    def iso_classes(self):
        orbits = self.orbits()
        if self.class_key is not None:
            orbits.sort(key=lambda o: self.class_key(o[0]))
        class_of = {}
        for i, orbit in enumerate(orbits):
            for x in orbit:
                class_of[x] = i
        order = self.group.order
        return IsoClassSpace(
            representatives=tuple(o[0] for o in orbits),
            aut_orders=tuple(order // len(o) for o in orbits),
            class_of=class_of,
        )

    def stabilizer(self, x):
        return [h for h in self.group.elements() if self.act(h, x) == x]


def _conj_action(g):
    def act(h, x):
        return tuple(g.conj(a, b) for a, b in zip(h, x))

    return act


@lru_cache(maxsize=None)
def circles_groupoid(g, n):
    """Flat fields on n circles: holonomy tuples under componentwise conjugation."""
    cc = conjugacy_classes(g)
    return ActionGroupoid(
        carrier=tuple(itertools.product(g.elements, repeat=n)),
        group=ProductGroup((g,) * n),
        act=_conj_action(g),
        label=f"{g.name}^{n}//{g.name}^{n}",
        key=("circles", id(g), n),
        class_key=lambda x: tuple(cc.class_of[a] for a in x),
        gauge=g,
    )


def circle_groupoid(g):
    return circles_groupoid(g, 1)


@dataclass(eq=False)
class GroupoidMap:
    """A functor between action groupoids: object map plus group homomorphism,
    jointly equivariant."""

    source: ActionGroupoid
    target: ActionGroupoid
    obj: object
    hom: object

    def check_equivariant(self):
        for h in self.source.group.elements():
            for x in self.source.carrier:
                if self.obj(self.source.act(h, x)) != self.target.act(self.hom(h), self.obj(x)):
                    return False
        return True


@dataclass(eq=False)
class GroupoidSpan:
    apex: ActionGroupoid
    left: GroupoidMap
    right: GroupoidMap

    @property
    def source(self):
        return self.left.target

    @property
    def target(self):
        return self.right.target


def _n_circles(foot):
    if not (isinstance(foot.key, tuple) and foot.key[0] == "circles"):
        raise TQFTError(f"{foot.label}: not a circle groupoid")
    return foot.key[2]


def generator_span(name, g):
    """The span of field groupoids induced by one cobordism generator.

    Holonomy conventions: a pair of pants with incoming holonomies (a, b) has
    outgoing holonomy ab; a disk forces trivial holonomy and keeps the full
    gauge group G as automorphisms of its single field.
    """
    G = ProductGroup((g,))
    G2 = ProductGroup((g, g))
    c0, c1, c2 = (circles_groupoid(g, n) for n in (0, 1, 2))
    diag = lambda h: (h[0], h[0])  # noqa: E731
    same = lambda h: h  # noqa: E731
    to_point = lambda h: ()  # noqa: E731
    conj = _conj_action(g)

    if name in ("mult", "comult"):
        apex = ActionGroupoid(
            tuple(itertools.product(g.elements, repeat=2)), G,
            lambda h, x: (g.conj(h[0], x[0]), g.conj(h[0], x[1])), f"pants({g.name})",
        )
        pair = GroupoidMap(apex, c2, lambda x: x, diag)
        prod = GroupoidMap(apex, c1, lambda x: (g.mul[x[0]][x[1]],), same)
        return GroupoidSpan(apex, pair, prod) if name == "mult" else GroupoidSpan(apex, prod, pair)
    if name in ("unit", "counit"):
        apex = ActionGroupoid(((),), G, lambda h, x: x, f"disk({g.name})")
        empty = GroupoidMap(apex, c0, lambda x: (), to_point)
        trivial = GroupoidMap(apex, c1, lambda x: (g.identity,), same)
        return GroupoidSpan(apex, empty, trivial) if name == "unit" else GroupoidSpan(apex, trivial, empty)
    if name == "id":
        apex = ActionGroupoid(c1.carrier, G, conj, f"cylinder({g.name})")
        leg = GroupoidMap(apex, c1, lambda x: x, same)
        return GroupoidSpan(apex, leg, leg)
    if name == "twist":
        apex = ActionGroupoid(c2.carrier, G2, conj, f"twist({g.name})")
        straight = GroupoidMap(apex, c2, lambda x: x, same)
        swapped = GroupoidMap(apex, c2, lambda x: (x[1], x[0]), lambda h: (h[1], h[0]))
        return GroupoidSpan(apex, straight, swapped)
    raise TQFTError(f"unknown generator {name!r}")


def compose_spans(s1, s2, cap=None):
    """Weak pullback: objects (x, f, y) with f . right(x) = left(y)."""
    cap = apex_cap() if cap is None else cap
    foot = s1.target
    if foot.key != s2.source.key:
        raise TQFTError(f"span feet do not match: {foot.label} vs {s2.source.label}")
    r, l = s1.right, s2.left
    fgroup = foot.group
    by_left = defaultdict(list)
    for y in s2.apex.carrier:
        by_left[l.obj(y)].append(y)
    felems = list(fgroup.elements())
    if len(s1.apex.carrier) * len(felems) > cap:
        raise ResourceLimitError(
            f"weak pullback would scan {len(s1.apex.carrier) * len(felems)} candidates (cap {cap})"
        )
    carrier = []
    for x in s1.apex.carrier:
        rx = r.obj(x)
        for f in felems:
            for y in by_left.get(foot.act(f, rx), ()):
                carrier.append((x, f, y))
        if len(carrier) > cap:
            raise ResourceLimitError(f"weak pullback carrier exceeds cap {cap}")
    k = len(s1.apex.group.factors)
    act1, act2 = s1.apex.act, s2.apex.act
    phi1, phi2 = r.hom, l.hom

    def act(h, t):
        h1, h2 = h[:k], h[k:]
        x, f, y = t
        f2 = fgroup.mul(fgroup.mul(phi2(h2), f), fgroup.inv(phi1(h1)))
        return (act1(h1, x), f2, act2(h2, y))

    apex = ActionGroupoid(tuple(carrier), s1.apex.group * s2.apex.group, act,
                          f"({s1.apex.label} x_{foot.label} {s2.apex.label})")
    left = GroupoidMap(apex, s1.source, lambda t: s1.left.obj(t[0]), lambda h: s1.left.hom(h[:k]))
    right = GroupoidMap(apex, s2.target, lambda t: s2.right.obj(t[2]), lambda h: s2.right.hom(h[k:]))
    return GroupoidSpan(apex, left, right)


def tensor_spans(s1, s2, g):
    """Disjoint union: product apex, legs concatenate boundary holonomies."""
    n = (_n_circles(s1.source) + _n_circles(s2.source), _n_circles(s1.target) + _n_circles(s2.target))
    k = len(s1.apex.group.factors)
    a1, a2 = s1.apex, s2.apex
    apex = ActionGroupoid(
        tuple(itertools.product(a1.carrier, a2.carrier)), a1.group * a2.group,
        lambda h, x: (a1.act(h[:k], x[0]), a2.act(h[k:], x[1])), f"({a1.label} + {a2.label})",
    )

    def leg(m1, m2, foot):
        return GroupoidMap(apex, foot, lambda x: m1.obj(x[0]) + m2.obj(x[1]),
                           lambda h: m1.hom(h[:k]) + m2.hom(h[k:]))

    return GroupoidSpan(apex, leg(s1.left, s2.left, circles_groupoid(g, n[0])),
                        leg(s1.right, s2.right, circles_groupoid(g, n[1])))


def degroupoidify(span, kernel=None):
    """Push-pull matrix: entry (out, in) sums |Aut out| / |Aut sigma| * kernel(sigma)
    over apex classes sigma lying over (in, out).

    ``kernel`` must be constant on apex isomorphism classes; the default is 1.
    """
    src, tgt = span.source.iso_classes, span.target.iso_classes
    m = np.empty((len(tgt), len(src)), dtype=object)
    m.fill(Fraction(0))
    apex = span.apex.iso_classes
    for rep, aut in zip(apex.representatives, apex.aut_orders):
        i = src.class_of[span.left.obj(rep)]
        o = tgt.class_of[span.right.obj(rep)]
        weight = Fraction(tgt.aut_orders[o], aut)
        if kernel is not None:
            weight *= Fraction(kernel(rep))
        m[o, i] += weight
    n_in, n_out = _n_circles(span.source), _n_circles(span.target)
    return LinearMap(m, len(conjugacy_classes(span.source.gauge)), n_in, n_out)


def explicit_span(term, g):
    """The span of a term built with literal weak pullbacks (small terms only)."""
    if isinstance(term, Gen):
        return generator_span(term.name, g)
    if isinstance(term, Compose):
        return compose_spans(explicit_span(term.first, g), explicit_span(term.second, g))
    return tensor_spans(explicit_span(term.left, g), explicit_span(term.right, g), g)


def quantize_explicit(term, g, kernel=None):
    return degroupoidify(explicit_span(term, g), kernel)


# -- skeletal spans ----------------------------------------------------------
#
# Elements of G^n are coded as integers in base |G| (leftmost factor most
# significant) so that group operations vectorize over numpy arrays.


class _Codec:
    # full multiplication tables are built for G^n up to this many elements
    TABLE_LIMIT = 1024

    def __init__(self, g, n):
        self.g, self.n = g, n
        self.radix = g.order
        self.size = g.order**n
        self.pow = g.order ** np.arange(n - 1, -1, -1, dtype=np.int64)
        self.table = g.table
        self.invtab = np.asarray(g.inv, dtype=np.int64)
        self.full = None
        if self.size <= self.TABLE_LIMIT:
            everything = np.arange(self.size, dtype=np.int64)
            self.full = self._mul_digits(everything[:, None], everything[None, :])
            self.full_inv = self.encode(self.invtab[self.digits(everything)])

    def digits(self, x):
        x = np.asarray(x, dtype=np.int64)
        return (x[..., None] // self.pow) % self.radix

    def encode(self, d):
        return (np.asarray(d, dtype=np.int64) * self.pow).sum(axis=-1)

    def encode_tuple(self, t):
        code = 0
        for x in t:
            code = code * self.radix + x
        return code

    def _mul_digits(self, x, y):
        return self.encode(self.table[self.digits(x), self.digits(y)])

    def mul(self, x, y):
        if self.full is not None:
            return self.full[x, y]
        return self._mul_digits(x, y)

    def inv(self, x):
        if self.full is not None:
            return self.full_inv[x]
        return self.encode(self.invtab[self.digits(x)])


@lru_cache(maxsize=None)
def _codec(g, n):
    return _Codec(g, n)


class _Foot:
    """Iso-class data of the n-circle groupoid, in lexicographic class order."""

    def __init__(self, g, n):
        cc = conjugacy_classes(g)
        self.g, self.n, self.k = g, n, len(cc)
        self.cc = cc
        self.codec = _codec(g, n)
        self.centralizers = [tuple(g.centralizer(r)) for r in cc.representatives]
        # conjugator[x] sends x to its class representative
        self.conjugator = [0] * g.order
        for x in g.elements:
            rep = cc.representatives[cc.class_of[x]]
            self.conjugator[x] = next(t for t in g.elements if g.conj(t, x) == rep)
        self._aut = {}

    @property
    def size(self):
        return self.k**self.n

    def class_tuple(self, idx):
        out = []
        for _ in range(self.n):
            idx, r = divmod(idx, self.k)
            out.append(r)
        return tuple(reversed(out))

    def class_index(self, obj):
        idx = 0
        for x in obj:
            idx = idx * self.k + self.cc.class_of[x]
        return idx

    def aut_order(self, idx):
        out = 1
        for c in self.class_tuple(idx):
            out *= len(self.centralizers[c])
        return out

    def aut_codes(self, idx):
        """Sorted codes of the automorphism group of class ``idx``'s representative."""
        if idx not in self._aut:
            elems = itertools.product(*(self.centralizers[c] for c in self.class_tuple(idx)))
            self._aut[idx] = np.array(sorted(self.codec.encode_tuple(t) for t in elems), dtype=np.int64)
        return self._aut[idx]


@lru_cache(maxsize=None)
def _foot(g, n):
    return _Foot(g, n)


@dataclass(frozen=True, eq=False)
class SkeletalComponent:
    """One apex isomorphism class.

    ``image_in``/``image_out`` list, pair by pair, the boundary automorphisms
    (as codes, normalized to the foot class representatives) induced by the
    class's automorphism group; ``order`` is the full automorphism group
    order, so the image may be a proper quotient.
    """

    in_class: int
    out_class: int
    order: int
    image_in: np.ndarray
    image_out: np.ndarray

    def image(self, g, n_in, n_out):
        """The image as a set of (incoming, outgoing) element tuples."""
        din = _codec(g, n_in).digits(self.image_in)
        dout = _codec(g, n_out).digits(self.image_out)
        return {(tuple(int(v) for v in a), tuple(int(v) for v in b)) for a, b in zip(din, dout)}


@dataclass(frozen=True, eq=False)
class SkeletalSpan:
    group: object
    n_in: int
    n_out: int
    components: tuple

    def matrix(self):
        fin, fout = _foot(self.group, self.n_in), _foot(self.group, self.n_out)
        m = np.empty((fout.size, fin.size), dtype=object)
        m.fill(Fraction(0))
        for c in self.components:
            m[c.out_class, c.in_class] += Fraction(fout.aut_order(c.out_class), c.order)
        return LinearMap(m, fin.k, self.n_in, self.n_out)


def _unique_pairs(a, b, radix_b):
    keys = np.unique(a * radix_b + b)
    return keys // radix_b, keys % radix_b


def skeletonize(span, g):
    """Collapse an explicit span to one entry per apex isomorphism class."""
    n_in, n_out = _n_circles(span.source), _n_circles(span.target)
    fin, fout = _foot(g, n_in), _foot(g, n_out)
    comps = []
    for rep in span.apex.iso_classes.representatives:
        u, v = span.left.obj(rep), span.right.obj(rep)
        wu = tuple(fin.conjugator[x] for x in u)
        wv = tuple(fout.conjugator[x] for x in v)
        stab = span.apex.stabilizer(rep)
        ins = [fin.codec.encode_tuple(tuple(g.conj(w, x) for w, x in zip(wu, span.left.hom(h)))) for h in stab]
        outs = [fout.codec.encode_tuple(tuple(g.conj(w, x) for w, x in zip(wv, span.right.hom(h)))) for h in stab]
        a, b = _unique_pairs(np.array(ins, dtype=np.int64), np.array(outs, dtype=np.int64), fout.codec.size)
        comps.append(SkeletalComponent(fin.class_index(u), fout.class_index(v), len(stab), a, b))
    return SkeletalSpan(g, n_in, n_out, tuple(comps))


def compose_skeletal(s1, s2, cap=None):
    """Weak pullback of skeletal spans, one pair of apex classes at a time.

    For classes sigma (of s1) and tau (of s2) over the same middle class y,
    the pullback objects are the automorphisms f of y's representative,
    acted on by Aut(sigma) x Aut(tau) through f -> c f b^-1.  Each orbit is a
    new apex class; its automorphisms are the stabilizer of f.
    """
    if s1.group is not s2.group or s1.n_out != s2.n_in:
        raise TQFTError("skeletal spans do not share a middle boundary")
    cap = apex_cap() if cap is None else cap
    g = s1.group
    mid = _foot(g, s1.n_out).codec
    out_size = _foot(g, s2.n_out).codec.size
    by_in = defaultdict(list)
    for c in s2.components:
        by_in[c.in_class].append(c)
    # per s2 component: image sorted by incoming code, for the stabilizer join
    sorted_cache = {}
    work = 0
    comps = []
    for ci in s1.components:
        partners = by_in.get(ci.out_class)
        if not partners:
            continue
        aut_y = _foot(g, s1.n_out).aut_codes(ci.out_class)
        b_sub = np.unique(ci.image_out)
        b_inv = mid.inv(b_sub)
        for cj in partners:
            if id(cj) not in sorted_cache:
                order = np.argsort(cj.image_in, kind="stable")
                sorted_cache[id(cj)] = (cj.image_in[order], cj.image_out[order], np.unique(cj.image_in))
            cs, ds, c_sub = sorted_cache[id(cj)]
            visited = np.zeros(len(aut_y), dtype=bool)
            for pos in range(len(aut_y)):
                if visited[pos]:
                    continue
                f0 = aut_y[pos]
                work += len(c_sub) * len(b_inv) + len(ci.image_out)
                if work > cap:
                    raise ResourceLimitError(f"skeletal composition work exceeds cap {cap}")
                orbit = np.unique(mid.mul(mid.mul(c_sub, f0)[:, None], b_inv[None, :]))
                visited[np.searchsorted(aut_y, orbit)] = True
                # stabilizer: pairs with c = f0 b f0^-1
                target = mid.mul(mid.mul(f0, ci.image_out), mid.inv(f0))
                lo = np.searchsorted(cs, target, "left")
                hi = np.searchsorted(cs, target, "right")
                counts = hi - lo
                total = int(counts.sum())
                starts = np.repeat(lo - np.cumsum(counts) + counts, counts)
                picks = starts + np.arange(total)
                a, d = _unique_pairs(np.repeat(ci.image_in, counts), ds[picks], out_size)
                order, rem = divmod(ci.order * cj.order, len(orbit))
                if rem:
                    raise AssertionError("orbit size does not divide the group order")
                comps.append(SkeletalComponent(ci.in_class, cj.out_class, order, a, d))
    return SkeletalSpan(g, s1.n_in, s2.n_out, tuple(comps))


def tensor_skeletal(s1, s2):
    if s1.group is not s2.group:
        raise TQFTError("cannot tensor spans over different gauge groups")
    g = s1.group
    k = len(conjugacy_classes(g))
    sin, sout = k**s2.n_in, k**s2.n_out
    rin, rout = g.order**s2.n_in, g.order**s2.n_out
    out_size = g.order ** (s1.n_out + s2.n_out)
    comps = []
    for a in s1.components:
        for b in s2.components:
            ins = (a.image_in[:, None] * rin + b.image_in[None, :]).ravel()
            outs = (a.image_out[:, None] * rout + b.image_out[None, :]).ravel()
            x, y = _unique_pairs(ins, outs, out_size)
            comps.append(SkeletalComponent(
                a.in_class * sin + b.in_class, a.out_class * sout + b.out_class, a.order * b.order, x, y,
            ))
    return SkeletalSpan(g, s1.n_in + s2.n_in, s1.n_out + s2.n_out, tuple(comps))


@lru_cache(maxsize=None)
def _generator_skeleton(name, g):
    return skeletonize(generator_span(name, g), g)


def skeletal_span(term, g, cap=None):
    if isinstance(term, Gen):
        return _generator_skeleton(term.name, g)
    if isinstance(term, Compose):
        return compose_skeletal(skeletal_span(term.first, g, cap), skeletal_span(term.second, g, cap), cap)
    return tensor_skeletal(skeletal_span(term.left, g, cap), skeletal_span(term.right, g, cap))


def quantize(term, g, cap=None):
    """The span-backend linear map of a cobordism term.

    Generator spans are glued by weak pullback and disjoint union over the
    whole term; degroupoidification happens once, at the end.
    """
    return skeletal_span(term, g, cap).matrix()


def clear_caches():
    """Drop every memoized group, groupoid and generator skeleton."""
    for fn in (circles_groupoid, _codec, _foot, _generator_skeleton):
        fn.cache_clear()
    clear_group_cache()
