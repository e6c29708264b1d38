"""Commutative Frobenius algebras over Q and the 2d TQFT they define.

``evaluate`` is the symmetric monoidal functor from cobordism terms to exact
linear maps.  The comultiplication is never stored: it is the adjoint of the
multiplication through the pairing ``P[i][j] = counit(e_i e_j)``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
import itertools
import json

import numpy as np

from .cobordism import Compose, Gen, closed_surface
from .config import TQFTError, ValidationError
from .groups import conjugacy_classes
from .linalg import LinearMap, exact_inverse, format_rational, matmul, to_fraction

__all__ = [
    "FrobeniusAlgebra",
    "AxiomCheck",
    "ValidationReport",
    "validate",
    "ground_field",
    "center_of_group_algebra",
    "evaluate",
    "closed_invariant",
    "adjoint",
    "load_algebra",
    "loads_algebra",
    "dumps_algebra",
]


@dataclass(frozen=True, eq=False)
class FrobeniusAlgebra:
    dim: int
    mult: tuple  # mult[i][j][k]: coefficient of e_k in e_i e_j
    unit: tuple
    counit: tuple
    name: str = ""

    def __post_init__(self):
        d = self.dim
        if d < 1:
            raise ValidationError("algebra dimension must be positive")
        mult = tuple(tuple(tuple(to_fraction(x) for x in row) for row in plane) for plane in self.mult)
        if len(mult) != d or any(len(p) != d or any(len(r) != d for r in p) for p in mult):
            raise ValidationError(f"structure constants must have shape {d}x{d}x{d}")
        if len(self.unit) != d or len(self.counit) != d:
            raise ValidationError(f"unit and counit must have length {d}")
        object.__setattr__(self, "mult", mult)
        object.__setattr__(self, "unit", tuple(to_fraction(x) for x in self.unit))
        object.__setattr__(self, "counit", tuple(to_fraction(x) for x in self.counit))

    def __repr__(self):
        return f"FrobeniusAlgebra({self.name!r}, dim={self.dim})"

    def product(self, x, y):
        d = self.dim
        return tuple(
            sum((x[i] * y[j] * self.mult[i][j][k] for i in range(d) for j in range(d)), Fraction(0))
            for k in range(d)
        )

    @cached_property
    def mult_matrix(self):
        d = self.dim
        m = np.empty((d, d * d), dtype=object)
        for i, j, k in itertools.product(range(d), repeat=3):
            m[k, i * d + j] = self.mult[i][j][k]
        return m

    @cached_property
    def pairing(self):
        d = self.dim
        p = np.empty((d, d), dtype=object)
        for i, j in itertools.product(range(d), repeat=2):
            p[i, j] = sum((self.mult[i][j][k] * self.counit[k] for k in range(d)), Fraction(0))
        return p

    @cached_property
    def pairing_inverse(self):
        return exact_inverse(self.pairing)

    @cached_property
    def comult_matrix(self):
        pinv = self.pairing_inverse
        if pinv is None:
            raise ValidationError(f"{self.name or 'algebra'}: pairing is degenerate, no comultiplication")
        return matmul(matmul(np.kron(pinv, pinv), self.mult_matrix.T.copy()), self.pairing)

    @cached_property
    def generator_maps(self):
        d = self.dim
        twist = np.empty((d * d, d * d), dtype=object)
        twist.fill(Fraction(0))
        for i, j in itertools.product(range(d), repeat=2):
            twist[j * d + i, i * d + j] = Fraction(1)
        return {
            "unit": LinearMap(np.array(self.unit, dtype=object).reshape(d, 1), d, 0, 1),
            "counit": LinearMap(np.array(self.counit, dtype=object).reshape(1, d), d, 1, 0),
            "mult": LinearMap(self.mult_matrix, d, 2, 1),
            "comult": LinearMap(self.comult_matrix, d, 1, 2),
            "id": LinearMap.identity(d),
            "twist": LinearMap(twist, d, 2, 2),
        }

    @cached_property
    def handle_matrix(self):
        return matmul(self.mult_matrix, self.comult_matrix)


def ground_field():
    return FrobeniusAlgebra(1, (((1,),),), (1,), (1,), "k")


def center_of_group_algebra(g):
    """Center of Q[G] in the basis of conjugacy-class sums.

    The counit reads the identity coefficient divided by |G|, so the closed
    genus-g surface evaluates to |Hom(pi_1, G)| / |G|.
    """
    cc = conjugacy_classes(g)
    n = len(cc)
    mult = [[[0] * n for _ in range(n)] for _ in range(n)]
    for a, b, c in itertools.product(range(n), repeat=3):
        target = cc.representatives[c]
        mult[a][b][c] = sum(
            1 for x in cc.members[a] if cc.class_of[g.mul[g.inv[x]][target]] == b
        )
    unit = [1] + [0] * (n - 1)
    counit = [Fraction(1, g.order)] + [0] * (n - 1)
    return FrobeniusAlgebra(n, mult, unit, counit, f"Z(Q[{g.name}])")


# -- validation --------------------------------------------------------------


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: bool | None  # None: not checkable (needs a nondegenerate pairing)
    witness: tuple | None = None
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    algebra: str
    checks: tuple = field(default_factory=tuple)

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _first_mismatch(a, b, dim):
    """Index of the first differing entry, decoded into tensor indices."""
    diff = np.argwhere(a != b)
    if len(diff) == 0:
        return None
    r, c = (int(x) for x in diff[0])
    return (_digits(r, dim, a.shape[0]), _digits(c, dim, a.shape[1]))


def _digits(index, dim, size):
    n = 0
    while dim**n < size:
        n += 1
    out = []
    for _ in range(n):
        index, r = divmod(index, dim)
        out.append(r)
    return tuple(reversed(out))


def validate(a):
    d, c = a.dim, a.mult
    rng = range(d)
    checks = []

    witness = None
    for i, j, k, l in itertools.product(rng, repeat=4):
        lhs = sum((c[i][j][m] * c[m][k][l] for m in rng), Fraction(0))
        rhs = sum((c[j][k][m] * c[i][m][l] for m in rng), Fraction(0))
        if lhs != rhs:
            witness = (i, j, k, l)
            break
    checks.append(AxiomCheck("associativity", witness is None, witness))

    witness = next(((i, j, k) for i, j, k in itertools.product(rng, repeat=3) if c[i][j][k] != c[j][i][k]), None)
    checks.append(AxiomCheck("commutativity", witness is None, witness))

    witness = None
    for j, k in itertools.product(rng, repeat=2):
        left = sum((a.unit[i] * c[i][j][k] for i in rng), Fraction(0))
        right = sum((a.unit[i] * c[j][i][k] for i in rng), Fraction(0))
        expected = Fraction(int(j == k))
        if left != expected or right != expected:
            witness = (j, k)
            break
    checks.append(AxiomCheck("unit", witness is None, witness))

    nondegenerate = a.pairing_inverse is not None
    if not nondegenerate:
        checks.append(AxiomCheck("coassociativity", None, None, "requires a nondegenerate pairing"))
        checks.append(AxiomCheck("frobenius", None, None, "requires a nondegenerate pairing"))
    else:
        ident = np.array(LinearMap.identity(d).matrix)
        m, delta = a.mult_matrix, a.comult_matrix
        lhs = matmul(np.kron(delta, ident), delta)
        rhs = matmul(np.kron(ident, delta), delta)
        w = _first_mismatch(lhs, rhs, d)
        checks.append(AxiomCheck("coassociativity", w is None, w))
        middle = matmul(delta, m)
        left = matmul(np.kron(m, ident), np.kron(ident, delta))
        right = matmul(np.kron(ident, m), np.kron(delta, ident))
        w = _first_mismatch(middle, left, d) or _first_mismatch(middle, right, d)
        checks.append(AxiomCheck("frobenius", w is None, w))

    witness = None
    if not nondegenerate:
        witness = tuple(format_rational(x) for x in a.counit)
    checks.append(
        AxiomCheck("nondegeneracy", nondegenerate, witness, "" if nondegenerate else "pairing matrix is singular")
    )
    return ValidationReport(a.name, tuple(checks))


# -- evaluation --------------------------------------------------------------


def _require_valid(a):
    cached = a.__dict__.get("_validated")
    if cached is None:
        report = validate(a)
        if not report.ok:
            names = ", ".join(f.name for f in report.failures())
            raise ValidationError(f"{a.name or 'algebra'} is not a commutative Frobenius algebra: {names}")
        a.__dict__["_validated"] = True


def evaluate(term, a):
    """The linear map of a cobordism term; composition becomes matrix product
    and disjoint union the Kronecker product."""
    _require_valid(a)
    return _eval(term, a.generator_maps)


def _eval(term, gens):
    if isinstance(term, Gen):
        return gens[term.name]
    if isinstance(term, Compose):
        return _eval(term.first, gens).then(_eval(term.second, gens))
    return _eval(term.left, gens).tensor(_eval(term.right, gens))


def closed_invariant(genus, a):
    """counit(H^genus(unit)) with H = mult . comult the handle operator."""
    if genus < 0:
        raise TQFTError("genus must be non-negative")
    _require_valid(a)
    v = np.array(a.unit, dtype=object).reshape(a.dim, 1)
    for _ in range(genus):
        v = matmul(a.handle_matrix, v)
    return sum((a.counit[i] * v[i, 0] for i in range(a.dim)), Fraction(0))


def evaluate_closed(genus, a):
    return evaluate(closed_surface(genus), a).scalar_value()


def _pairing_power(a, n):
    out = np.array([[Fraction(1)]], dtype=object)
    for _ in range(n):
        out = np.kron(out, a.pairing)
    return out


def adjoint(f, a):
    """Adjoint of ``f`` with respect to the pairing on each boundary factor:
    the map ``g`` with P_in(g w, v) = P_out(w, f v)."""
    _require_valid(a)
    p_in = _pairing_power(a, f.n_in)
    p_out = _pairing_power(a, f.n_out)
    p_in_inv = exact_inverse(p_in)
    m = matmul(matmul(p_in_inv, f.matrix.T.copy()), p_out)
    return LinearMap(m, a.dim, f.n_out, f.n_in)


# -- file format -------------------------------------------------------------


def loads_algebra(text):
    """Parse the JSON algebra document.

    ``mult`` is a sparse list of ``[i, j, k, "p/q"]`` entries (omitted entries
    are zero); ``unit`` and ``counit`` are dense lists.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"algebra file is not valid JSON: {e}") from None
    try:
        d = int(doc["dim"])
        mult = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
        for entry in doc.get("mult", []):
            i, j, k, value = entry
            if not all(0 <= int(x) < d for x in (i, j, k)):
                raise ValidationError(f"structure constant index out of range: {entry}")
            mult[int(i)][int(j)][int(k)] = to_fraction(value)
        return FrobeniusAlgebra(d, mult, doc["unit"], doc["counit"], doc.get("name", ""))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        if isinstance(e, ValidationError):
            raise
        raise ValidationError(f"malformed algebra document: {e!r}") from None


def load_algebra(path):
    with open(path) as fh:
        return loads_algebra(fh.read())


def dumps_algebra(a):
    d = a.dim
    entries = [
        [i, j, k, format_rational(a.mult[i][j][k])]
        for i, j, k in itertools.product(range(d), repeat=3)
        if a.mult[i][j][k] != 0
    ]
    doc = {
        "name": a.name,
        "dim": d,
        "mult": entries,
        "unit": [format_rational(x) for x in a.unit],
        "counit": [format_rational(x) for x in a.counit],
    }
    return json.dumps(doc, indent=2) + "\n"
