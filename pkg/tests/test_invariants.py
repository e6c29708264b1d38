from fractions import Fraction

import pytest

from fintqft.config import TQFTError
from fintqft.groups import BUILTIN_GROUPS, GroupPresentation, group_by_name
from fintqft.invariants import (
    ManifoldSpec,
    custom,
    disjoint_invariant,
    invariant,
    lens,
    oracle_report,
    surface,
    surface_invariant,
    torus3,
)

import oracles


def test_examples():
    s3 = group_by_name("S3")
    assert invariant(surface(0), s3) == Fraction(1, 6)
    assert invariant(surface(2), s3) == 81
    assert invariant(lens(3, 1), s3) == Fraction(1, 2)


@pytest.mark.parametrize("name", BUILTIN_GROUPS)
def test_torus3_counts_commuting_triples(name):
    g = group_by_name(name)
    assert invariant(torus3(), g) * g.order == oracles.commuting_triples(oracles.table(g))


@pytest.mark.parametrize("name", BUILTIN_GROUPS)
def test_lens_spaces(name):
    g = group_by_name(name)
    t = oracles.table(g)
    for p in range(1, 7):
        assert invariant(lens(p), g) == Fraction(oracles.order_divides(t, p), g.order)


def test_lens_ignores_q():
    g = group_by_name("Q8")
    assert invariant(lens(5, 2), g) == invariant(lens(5, 1), g)


def test_disjoint_union_is_multiplicative():
    g = group_by_name("D4")
    parts = [surface(1), lens(2), torus3()]
    expected = Fraction(1)
    for m in parts:
        expected *= invariant(m, g)
    assert disjoint_invariant(parts, g) == expected
    assert disjoint_invariant([], g) == 1


def test_custom_presentation():
    g = group_by_name("S3")
    # The free group on two generators: every pair is a homomorphism.
    assert invariant(custom(GroupPresentation(2, ())), g) == 6
    assert invariant(custom(GroupPresentation(2, ((0, 1, ~0, ~1),))), g) == 3


def test_oracle_z2():
    rows = oracle_report(group_by_name("Z2"), 2)
    assert [(r.genus, r.count) for r in rows] == [(0, Fraction(1, 2)), (1, 2), (2, 8)]
    assert all(r.all_equal for r in rows)


def test_oracle_s3():
    rows = oracle_report(group_by_name("S3"), 1)
    assert (rows[1].count, rows[1].frobenius, rows[1].span) == (3, 3, 3)


@pytest.mark.parametrize("name", BUILTIN_GROUPS)
def test_all_backends_agree(name):
    g = group_by_name(name)
    max_genus = 3 if g.order <= 4 else 2
    for row in oracle_report(g, max_genus):
        assert row.all_equal, row
    assert oracle_report(g, 0)[0].count == Fraction(1, g.order)


def test_errors():
    with pytest.raises(TQFTError):
        ManifoldSpec("klein")
    with pytest.raises(TQFTError):
        surface(-1)
    with pytest.raises(TQFTError):
        lens(0)
    with pytest.raises(TQFTError):
        surface_invariant(1, group_by_name("Z2"), backend="magic")
    with pytest.raises(TQFTError):
        oracle_report(group_by_name("Z2"), -1)
