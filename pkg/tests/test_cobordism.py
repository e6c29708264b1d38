import random

import pytest
from hypothesis import given, settings, strategies as st

from fintqft.cobordism import (
    COMULT,
    COUNIT,
    GENERATORS,
    ID,
    MULT,
    TWIST,
    UNIT,
    Component,
    Compose,
    Tensor,
    closed_surface,
    compose,
    connected_term,
    equal,
    from_normal_form,
    generators_of,
    identity,
    normalize,
    permutation_term,
    random_term,
    tensor,
    term_depth,
    transpose,
)
from fintqft.config import ArityError, TQFTError
from fintqft.dsl import ParseError, parse, pretty, to_tree
from fintqft.relations import RELATIONS, random_relation_pair

EULER = {"unit": 1, "counit": 1, "mult": -1, "comult": -1, "id": 0, "twist": 0}

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_compose_arity():
    assert compose(MULT, COUNIT).arity == (2, 0)
    with pytest.raises(ArityError):
        compose(MULT, MULT)
    with pytest.raises(ArityError):
        compose(UNIT, UNIT)


def test_identity_composition():
    f = compose(ID, ID)
    assert f.arity == (1, 1)
    assert normalize(f) == normalize(ID)


def test_handle_is_genus_one():
    nf = normalize(compose(COMULT, MULT))
    assert nf.arity == (1, 1)
    assert nf.components == (Component(1, 1, 1, (0,), (0,)),)
    assert nf.closed == ()


def test_tensor_arity():
    assert tensor(ID, ID).arity == (2, 2)
    assert tensor(UNIT, COUNIT).arity == (1, 1)
    assert equal(compose(TWIST, TWIST), tensor(ID, ID))
    assert not equal(TWIST, tensor(ID, ID))


def test_normalize_closed_pieces():
    assert normalize(compose(UNIT, COUNIT)).closed == (0,)
    torus = compose(compose(UNIT, COMULT), compose(MULT, COUNIT))
    nf = normalize(torus)
    assert nf.components == () and nf.closed == (1,)
    nf = normalize(tensor(ID, compose(UNIT, COUNIT)))
    assert nf.components == (Component(1, 1, 0, (0,), (0,)),)
    assert nf.closed == (0,)


def test_equal_examples():
    assert equal(compose(TWIST, MULT), MULT)
    assert equal(parse("(comult * id) ; (id * mult)"), parse("mult ; comult"))
    assert not equal(MULT, COMULT)


def test_twist_ports_are_tracked():
    # Two cylinders, crossed.
    nf = normalize(TWIST)
    assert [(c.in_ports, c.out_ports) for c in nf.components] == [((0,), (1,)), ((1,), (0,))]


@pytest.mark.parametrize("family, lhs, rhs", RELATIONS, ids=[f"{r[0]}-{i}" for i, r in enumerate(RELATIONS)])
def test_relations_hold(family, lhs, rhs):
    assert equal(lhs, rhs)


def test_wrong_relations_fail():
    assert not equal(parse("comult ; mult"), ID)
    assert not equal(parse("(unit * id * id) ; (id * twist) ; (twist * id)"), parse("id * id * unit"))
    assert not equal(parse("mult ; comult"), parse("id * id"))


@settings(max_examples=150, deadline=None)
@given(seed=seeds)
def test_normalize_idempotent(seed):
    f = random_term(random.Random(seed), depth=6)
    nf = normalize(f)
    if not nf.components and not nf.closed:
        return
    rebuilt = from_normal_form(nf)
    assert rebuilt.arity == f.arity
    assert normalize(rebuilt) == nf


@settings(max_examples=150, deadline=None)
@given(seed=seeds)
def test_euler_bookkeeping(seed):
    f = random_term(random.Random(seed), depth=6)
    nf = normalize(f)
    assert nf.euler() == sum(EULER[g.name] for g in generators_of(f))
    for c in nf.components:
        b = c.n_in + c.n_out
        chi = 2 - 2 * c.genus - b
        assert c.genus >= 0
        assert (chi - b) % 2 == 0


@settings(max_examples=100, deadline=None)
@given(seed=seeds)
def test_equal_is_an_equivalence(seed):
    rng = random.Random(seed)
    f, g = random_relation_pair(rng)
    assert equal(f, f)
    assert equal(f, g) and equal(g, f)
    h = from_normal_form(normalize(g)) if normalize(g).components or normalize(g).closed else g
    assert equal(g, h) and equal(f, h)


@settings(max_examples=100, deadline=None)
@given(seed=seeds)
def test_congruence(seed):
    rng = random.Random(seed)
    f, g = random_relation_pair(rng)
    if f.outputs:
        post = random_term(rng, depth=3, inputs=f.outputs)
        assert equal(compose(f, post), compose(g, post))
    side = random_term(rng, depth=3)
    assert equal(tensor(f, side), tensor(g, side))
    assert equal(tensor(side, f), tensor(side, g))


def test_connected_terms():
    for n_in in range(3):
        for n_out in range(3):
            for genus in range(3):
                f = connected_term(n_in, n_out, genus)
                nf = normalize(f)
                assert f.arity == (n_in, n_out)
                if n_in + n_out:
                    assert len(nf.components) == 1 and nf.components[0].genus == genus
                else:
                    assert nf.closed == (genus,)


def test_closed_surface_genus():
    for genus in range(5):
        assert normalize(closed_surface(genus)).closed == (genus,)


def test_permutation_term():
    f = permutation_term((2, 0, 1))
    nf = normalize(f)
    assert f.arity == (3, 3)
    assert all(c.genus == 0 and c.n_in == c.n_out == 1 for c in nf.components)
    assert sorted((c.in_ports[0], c.out_ports[0]) for c in nf.components) == [(0, 2), (1, 0), (2, 1)]


@settings(max_examples=100, deadline=None)
@given(seed=seeds)
def test_transpose(seed):
    f = random_term(random.Random(seed), depth=6)
    t = transpose(f)
    assert t.arity == (f.outputs, f.inputs)
    assert transpose(t) == f
    assert sorted(c.genus for c in normalize(t).components) == sorted(c.genus for c in normalize(f).components)
    assert sorted(normalize(t).closed) == sorted(normalize(f).closed)


def test_random_term_respects_depth():
    rng = random.Random(7)
    for _ in range(200):
        f = random_term(rng, depth=6)
        assert term_depth(f) <= 6
        assert max(f.inputs, f.outputs) <= 3


def test_identity_needs_circles():
    assert identity(3).arity == (3, 3)
    with pytest.raises(TQFTError):
        identity(0)


# -- DSL ---------------------------------------------------------------------


def test_precedence():
    assert parse("mult * id ; mult") == Compose(Tensor(MULT, ID), MULT)
    assert parse("id * id * id") == Tensor(Tensor(ID, ID), ID)
    assert parse("unit ; comult ; mult") == Compose(Compose(UNIT, COMULT), MULT)


def test_atoms():
    for g in GENERATORS:
        assert parse(g.name) == g
        assert parse(f"  ( {g.name} ) ") == g


@settings(max_examples=200, deadline=None)
@given(seed=seeds)
def test_round_trip(seed):
    f = random_term(random.Random(seed), depth=6)
    assert parse(pretty(f)) == f
    assert parse(str(f)) == f


def test_to_tree():
    assert to_tree(parse("unit ; counit")) == {
        "op": "compose",
        "in": 0,
        "out": 0,
        "args": [{"gen": "unit", "in": 0, "out": 1}, {"gen": "counit", "in": 1, "out": 0}],
    }


@pytest.mark.parametrize("text", ["mult ;", "", "(id", "id)", "foo", "id ** id", "id ; ; id", "1"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_arity_error():
    with pytest.raises(TQFTError):
        parse("mult ; mult")
