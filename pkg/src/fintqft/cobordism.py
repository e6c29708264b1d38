"""The cobordism category 2Cob as a term algebra.

Terms are built from six generators (unit, counit, mult, comult, id, twist)
by sequential composition and disjoint union.  ``normalize`` classifies a
term topologically: connected components found by union-find over the glued
circles, genus recovered from the Euler characteristic.
"""

from collections import defaultdict
from dataclasses import dataclass
import random

from .config import ArityError, TQFTError

__all__ = [
    "CobTerm",
    "Gen",
    "Compose",
    "Tensor",
    "GENERATORS",
    "UNIT",
    "COUNIT",
    "MULT",
    "COMULT",
    "ID",
    "TWIST",
    "compose",
    "tensor",
    "compose_all",
    "tensor_all",
    "identity",
    "NormalForm",
    "Component",
    "normalize",
    "equal",
    "transpose",
    "from_normal_form",
    "connected_term",
    "closed_surface",
    "permutation_term",
    "generators_of",
    "random_term",
    "term_depth",
]

# name -> (inputs, outputs, euler characteristic contribution)
_GEN_DATA = {
    "unit": (0, 1, 1),
    "counit": (1, 0, 1),
    "mult": (2, 1, -1),
    "comult": (1, 2, -1),
    "id": (1, 1, 0),
    "twist": (2, 2, 0),
}
_TRANSPOSE = {"unit": "counit", "counit": "unit", "mult": "comult", "comult": "mult", "id": "id", "twist": "twist"}


class CobTerm:
    """Base class; subclasses are frozen dataclasses with ``inputs``/``outputs``."""

    __slots__ = ()

    @property
    def arity(self):
        return (self.inputs, self.outputs)

    def __rshift__(self, other):
        return compose(self, other)

    def __matmul__(self, other):
        return tensor(self, other)

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Gen(CobTerm):
    name: str

    def __post_init__(self):
        if self.name not in _GEN_DATA:
            raise TQFTError(f"unknown generator {self.name!r}")

    @property
    def inputs(self):
        return _GEN_DATA[self.name][0]

    @property
    def outputs(self):
        return _GEN_DATA[self.name][1]

    @property
    def euler(self):
        return _GEN_DATA[self.name][2]


@dataclass(frozen=True)
class Compose(CobTerm):
    """``first`` then ``second``; the outgoing circles of ``first`` are glued to
    the incoming circles of ``second``."""

    first: CobTerm
    second: CobTerm

    def __post_init__(self):
        if self.first.outputs != self.second.inputs:
            raise ArityError(
                f"cannot compose {self.first.arity} with {self.second.arity}: "
                f"{self.first.outputs} outgoing vs {self.second.inputs} incoming circles"
            )

    @property
    def inputs(self):
        return self.first.inputs

    @property
    def outputs(self):
        return self.second.outputs


@dataclass(frozen=True)
class Tensor(CobTerm):
    left: CobTerm
    right: CobTerm

    @property
    def inputs(self):
        return self.left.inputs + self.right.inputs

    @property
    def outputs(self):
        return self.left.outputs + self.right.outputs


UNIT, COUNIT, MULT, COMULT, ID, TWIST = (Gen(n) for n in ("unit", "counit", "mult", "comult", "id", "twist"))
GENERATORS = (UNIT, COUNIT, MULT, COMULT, ID, TWIST)


def compose(f, g):
    return Compose(f, g)


def tensor(f, g):
    return Tensor(f, g)


def compose_all(terms):
    terms = list(terms)
    out = terms[0]
    for t in terms[1:]:
        out = Compose(out, t)
    return out


def tensor_all(terms):
    terms = list(terms)
    if not terms:
        raise TQFTError("empty disjoint union has no term representation")
    out = terms[0]
    for t in terms[1:]:
        out = Tensor(out, t)
    return out


def identity(n):
    """The n-circle cylinder; n must be positive (there is no empty term)."""
    if n < 1:
        raise TQFTError("identity on zero circles is not expressible as a term")
    return tensor_all([ID] * n)


def generators_of(f):
    """Leaves of the term, left to right."""
    stack, out = [f], []
    while stack:
        t = stack.pop()
        if isinstance(t, Gen):
            out.append(t)
        elif isinstance(t, Compose):
            stack.extend((t.second, t.first))
        else:
            stack.extend((t.right, t.left))
    return out


# -- normal form -------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Component:
    """A connected surface with boundary; ports are global circle indices."""

    n_in: int
    n_out: int
    genus: int
    in_ports: tuple
    out_ports: tuple


@dataclass(frozen=True)
class NormalForm:
    inputs: int
    outputs: int
    components: tuple
    closed: tuple

    @property
    def arity(self):
        return (self.inputs, self.outputs)

    def euler(self):
        chi = sum(2 - 2 * c.genus - c.n_in - c.n_out for c in self.components)
        return chi + sum(2 - 2 * g for g in self.closed)

    def to_dict(self):
        return {
            "inputs": self.inputs,
            "outputs": self.outputs,
            "components": [
                {
                    "in": c.n_in,
                    "out": c.n_out,
                    "genus": c.genus,
                    "in_ports": list(c.in_ports),
                    "out_ports": list(c.out_ports),
                }
                for c in self.components
            ],
            "closed": list(self.closed),
        }


class _UnionFind:
    def __init__(self):
        self.parent = []

    def add(self):
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _build_pieces(f, uf, chi):
    """Return (input piece ids, output piece ids) for term ``f``.

    Every generator is a disjoint union of connected pieces (twist is two
    crossing cylinders); each piece gets a union-find node carrying its Euler
    characteristic.
    """
    stack = [(f, False)]
    results = []
    while stack:
        t, expanded = stack.pop()
        if isinstance(t, Gen):
            if t.name == "twist":
                a, b = uf.add(), uf.add()
                chi.extend((0, 0))
                results.append(([a, b], [b, a]))
            else:
                node = uf.add()
                chi.append(t.euler)
                results.append(([node] * t.inputs, [node] * t.outputs))
        elif not expanded:
            stack.append((t, True))
            if isinstance(t, Compose):
                stack.extend(((t.second, False), (t.first, False)))
            else:
                stack.extend(((t.right, False), (t.left, False)))
        else:
            second = results.pop()
            first = results.pop()
            if isinstance(t, Compose):
                for a, b in zip(first[1], second[0]):
                    uf.union(a, b)
                results.append((first[0], second[1]))
            else:
                results.append((first[0] + second[0], first[1] + second[1]))
    return results.pop()


def normalize(f):
    uf, chi = _UnionFind(), []
    ins, outs = _build_pieces(f, uf, chi)
    # gluing a circle does not change chi; chi of a component is the sum over pieces
    comp_chi = defaultdict(int)
    for node, c in enumerate(chi):
        comp_chi[uf.find(node)] += c
    in_ports, out_ports = defaultdict(list), defaultdict(list)
    for i, node in enumerate(ins):
        in_ports[uf.find(node)].append(i)
    for j, node in enumerate(outs):
        out_ports[uf.find(node)].append(j)
    components, closed = [], []
    for root, c in comp_chi.items():
        b = len(in_ports[root]) + len(out_ports[root])
        twice_genus = 2 - c - b
        if twice_genus < 0 or twice_genus % 2:
            raise AssertionError(f"inconsistent Euler characteristic {c} with {b} boundary circles")
        genus = twice_genus // 2
        if b == 0:
            closed.append(genus)
        else:
            components.append(
                Component(len(in_ports[root]), len(out_ports[root]), genus,
                          tuple(in_ports[root]), tuple(out_ports[root]))
            )
    return NormalForm(f.inputs, f.outputs, tuple(sorted(components)), tuple(sorted(closed)))


def equal(f, g):
    """Whether two terms denote diffeomorphic cobordisms (rel boundary)."""
    return f.arity == g.arity and normalize(f) == normalize(g)


def transpose(f):
    """Orientation reversal: read the cobordism backwards."""
    if isinstance(f, Gen):
        return Gen(_TRANSPOSE[f.name])
    if isinstance(f, Compose):
        return Compose(transpose(f.second), transpose(f.first))
    return Tensor(transpose(f.left), transpose(f.right))


# -- rebuilding terms from normal forms --------------------------------------

HANDLE = Compose(COMULT, MULT)


def connected_term(n_in, n_out, genus):
    """A canonical connected term: merge inputs, add handles, split outputs."""
    if n_in == 0:
        parts = [UNIT]
    else:
        parts = [identity(n_in)] if n_in == 1 else []
        for k in range(n_in - 1, 0, -1):
            parts.append(tensor_all([MULT] + [ID] * (k - 1)))
    parts += [HANDLE] * genus
    if n_out == 0:
        parts.append(COUNIT)
    else:
        for k in range(1, n_out):
            parts.append(tensor_all([COMULT] + [ID] * (k - 1)))
    return compose_all(parts)


def closed_surface(genus):
    return connected_term(0, 0, genus)


def permutation_term(perm):
    """Term sending input circle i to output circle perm[i], built from twists."""
    n = len(perm)
    if n == 0:
        return None
    # bubble sort the position list; each adjacent swap is a twist layer
    current = list(range(n))  # current[pos] = original input sitting at pos
    target = sorted(range(n), key=lambda i: perm[i])
    layers = []
    pos_of = {v: p for p, v in enumerate(target)}
    changed = True
    while changed:
        changed = False
        for k in range(n - 1):
            if pos_of[current[k]] > pos_of[current[k + 1]]:
                current[k], current[k + 1] = current[k + 1], current[k]
                layers.append(tensor_all([ID] * k + [TWIST] + [ID] * (n - k - 2)))
                changed = True
    if not layers:
        return identity(n)
    return compose_all(layers)


def from_normal_form(nf):
    """Rebuild a term whose normal form is ``nf``."""
    pieces, in_order, out_order = [], [], []
    for c in nf.components:
        pieces.append(connected_term(c.n_in, c.n_out, c.genus))
        in_order.extend(c.in_ports)
        out_order.extend(c.out_ports)
    for g in nf.closed:
        pieces.append(closed_surface(g))
    if not pieces:
        raise TQFTError("the empty cobordism has no term representation")
    body = tensor_all(pieces)
    parts = []
    if nf.inputs:
        # global input in_order[k] feeds body position k
        perm = [0] * nf.inputs
        for k, port in enumerate(in_order):
            perm[port] = k
        parts.append(permutation_term(perm))
    parts.append(body)
    if nf.outputs:
        parts.append(permutation_term(out_order))
    return compose_all(parts)


# -- DSL pretty-printing lives in dsl.py; imported lazily to avoid a cycle ----


def pretty(f):
    from .dsl import pretty as _pretty

    return _pretty(f)


# -- random terms ------------------------------------------------------------


def _balanced(terms):
    if len(terms) == 1:
        return terms[0]
    mid = (len(terms) + 1) // 2
    return Tensor(_balanced(terms[:mid]), _balanced(terms[mid:]))


def _layer(rng, n, max_arity):
    """A tensor of generators consuming exactly ``n`` circles."""
    if n == 0:
        return UNIT
    parts, remaining, out = [], n, 0
    while remaining:
        g = rng.choice([g for g in GENERATORS if 1 <= g.inputs <= remaining])
        parts.append(g)
        remaining -= g.inputs
        out += g.outputs
    if out > max_arity:
        parts = [ID] * n
    return _balanced(parts)


def random_term(rng=None, depth=6, inputs=None, max_arity=3):
    """A random well-formed term of tree depth at most ``depth``.

    Boundary arity at every cut stays within ``max_arity`` so that the
    evaluated matrices remain small.
    """
    rng = rng if rng is not None else random.Random()
    if inputs is None:
        inputs = rng.randint(0, max_arity)
    while True:
        t = _random_from(rng, depth - 2, inputs, max_arity)
        if term_depth(t) <= depth:
            return t


def _random_from(rng, budget, n, max_arity):
    kind = rng.random()
    if budget <= 1 or kind < 0.25:
        return _layer(rng, n, max_arity)
    if kind < 0.45:
        n1 = rng.randint(0, n)
        left = _random_from(rng, budget - 1, n1, max_arity)
        right = _random_from(rng, budget - 1, n - n1, max_arity)
        if left.outputs + right.outputs <= max_arity:
            return Tensor(left, right)
        return _layer(rng, n, max_arity)
    first = _random_from(rng, budget - 1, n, max_arity)
    second = _random_from(rng, budget - 1, first.outputs, max_arity)
    return Compose(first, second)


def term_depth(f):
    if isinstance(f, Gen):
        return 1
    a, b = (f.first, f.second) if isinstance(f, Compose) else (f.left, f.right)
    return 1 + max(term_depth(a), term_depth(b))
