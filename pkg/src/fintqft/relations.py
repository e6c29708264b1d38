"""Defining relations of 2Cob, as pairs of terms that must be equal.

Grouped by family: identity, sewing, (co)associativity, (co)commutativity,
Frobenius, symmetry.  ``random_relation_pair`` embeds a relation instance in
a random context, giving two terms that differ by one rewrite.
"""

import random

from .cobordism import Compose, Tensor, identity, random_term, transpose
from .dsl import parse

__all__ = ["RELATIONS", "relation_pairs", "random_relation_pair"]

_RAW = {
    "identity": [
        ("id ; id", "id"),
        ("(id * id) ; mult", "mult"),
        ("mult ; id", "mult"),
        ("(id * id) ; twist", "twist"),
        ("unit ; id", "unit"),
        ("(unit * id) ; mult", "id"),
        ("(id * unit) ; mult", "id"),
        ("comult ; (counit * id)", "id"),
        ("comult ; (id * counit)", "id"),
    ],
    "sewing": [
        ("twist ; twist", "id * id"),
        ("(unit * id) ; twist", "id * unit"),
        ("twist ; (counit * id)", "id * counit"),
        ("(mult * id) ; (id * id)", "(id * id * id) ; (mult * id)"),
    ],
    "associativity": [
        ("(mult * id) ; mult", "(id * mult) ; mult"),
        ("comult ; (comult * id)", "comult ; (id * comult)"),
    ],
    "commutativity": [
        ("twist ; mult", "mult"),
        ("comult ; twist", "comult"),
    ],
    "frobenius": [
        ("(comult * id) ; (id * mult)", "mult ; comult"),
        ("(id * comult) ; (mult * id)", "mult ; comult"),
    ],
    "symmetry": [
        ("(twist * id) ; (id * twist) ; (twist * id)", "(id * twist) ; (twist * id) ; (id * twist)"),
        ("(mult * id) ; twist", "(id * twist) ; (twist * id) ; (id * mult)"),
        ("(comult * id) ; (id * twist) ; (twist * id)", "twist ; (id * comult)"),
        ("(unit * id * id) ; (twist * id) ; (id * twist)", "id * id * unit"),
    ],
}

RELATIONS = tuple(
    (family, parse(lhs), parse(rhs)) for family, pairs in _RAW.items() for lhs, rhs in pairs
)


def relation_pairs():
    return [(lhs, rhs) for _, lhs, rhs in RELATIONS]


def random_relation_pair(rng=None, max_arity=3):
    """Terms ``pre ; (lhs + pad) ; post`` and the same with ``rhs``."""
    rng = rng if rng is not None else random.Random()
    _, lhs, rhs = rng.choice(RELATIONS)
    width = max(lhs.inputs, lhs.outputs)
    pad = rng.randint(0, max(0, max_arity - width))
    if pad:
        wires = identity(pad)
        if rng.random() < 0.5:
            lhs, rhs = Tensor(lhs, wires), Tensor(rhs, wires)
        else:
            lhs, rhs = Tensor(wires, lhs), Tensor(wires, rhs)
    if lhs.inputs and rng.random() < 0.8:
        pre = transpose(random_term(rng, depth=4, inputs=lhs.inputs, max_arity=max_arity))
        lhs, rhs = Compose(pre, lhs), Compose(pre, rhs)
    if lhs.outputs and rng.random() < 0.8:
        post = random_term(rng, depth=4, inputs=lhs.outputs, max_arity=max_arity)
        lhs, rhs = Compose(lhs, post), Compose(rhs, post)
    return lhs, rhs
