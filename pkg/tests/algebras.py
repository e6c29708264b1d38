"""Small hand-written algebras used across the tests."""

from fractions import Fraction

from fintqft.frobenius import FrobeniusAlgebra, center_of_group_algebra, ground_field
from fintqft.groups import BUILTIN_GROUPS, group_by_name


def dual_numbers():
    # Q[x]/(x^2), basis (1, x); the counit reads the x coefficient.
    mult = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    return FrobeniusAlgebra(2, mult, [1, 0], [0, 1], "Q[x]/x^2")


def split(weights):
    """Q^n with idempotent basis and counit e_i -> weights[i]."""
    n = len(weights)
    mult = [[[int(i == j == k) for k in range(n)] for j in range(n)] for i in range(n)]
    return FrobeniusAlgebra(n, mult, [1] * n, list(weights), f"split{tuple(map(str, weights))}")


def split_invariant(weights, genus):
    return sum((Fraction(w) ** (1 - genus) for w in weights), Fraction(0))


def zero_counit():
    a = split([1, 1])
    return FrobeniusAlgebra(2, a.mult, a.unit, [0, 0], "zero counit")


def non_associative():
    # Perturb one structure constant of the S3 center.
    a = center_of_group_algebra(group_by_name("S3"))
    mult = [[list(row) for row in plane] for plane in a.mult]
    mult[2][2][1] += 1
    return FrobeniusAlgebra(a.dim, mult, a.unit, a.counit, "non-associative")


def non_commutative():
    a = center_of_group_algebra(group_by_name("S3"))
    mult = [[list(row) for row in plane] for plane in a.mult]
    mult[1][2][2] += 1  # z1 z2 no longer equals z2 z1
    return FrobeniusAlgebra(a.dim, mult, a.unit, a.counit, "non-commutative")


def valid_algebras():
    out = [ground_field(), dual_numbers(), split([Fraction(1, 2), Fraction(1, 3)]), split([1, -2, 5])]
    out += [center_of_group_algebra(group_by_name(n)) for n in BUILTIN_GROUPS]
    return out
