"""Closed-manifold invariants by counting flat fields.

For a closed manifold M and finite gauge group G the untwisted invariant is
|Hom(pi_1 M, G)| / |G|.  Closed surfaces can also be computed through the
Frobenius and span backends, which is what ``oracle_report`` compares.
"""

from dataclasses import dataclass
from fractions import Fraction

from .cobordism import closed_surface
from .config import TQFTError
from .frobenius import center_of_group_algebra, closed_invariant
from .groups import GroupPresentation, commutator, hom_count, surface_presentation
from .spans import quantize

__all__ = [
    "ManifoldSpec",
    "surface",
    "lens",
    "torus3",
    "custom",
    "presentation_of",
    "invariant",
    "disjoint_invariant",
    "surface_invariant",
    "OracleRow",
    "oracle_report",
    "BACKENDS",
]

BACKENDS = ("count", "frobenius", "span")


@dataclass(frozen=True)
class ManifoldSpec:
    kind: str  # "surface" | "lens" | "torus3" | "custom"
    genus: int = 0
    p: int = 1
    q: int = 1  # recorded only: the untwisted invariant sees pi_1, not q
    presentation: GroupPresentation | None = None
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("surface", "lens", "torus3", "custom"):
            raise TQFTError(f"unknown manifold kind {self.kind!r}")
        if self.genus < 0:
            raise TQFTError("genus must be non-negative")
        if self.kind == "lens" and self.p < 1:
            raise TQFTError("lens space needs p >= 1")
        if self.kind == "custom" and self.presentation is None:
            raise TQFTError("custom manifold needs a presentation")


def surface(genus):
    return ManifoldSpec("surface", genus=genus, name=f"Sigma_{genus}")


def lens(p, q=1):
    return ManifoldSpec("lens", p=p, q=q, name=f"L({p},{q})")


def torus3():
    return ManifoldSpec("torus3", name="T^3")


def custom(presentation, name=""):
    return ManifoldSpec("custom", presentation=presentation, name=name or presentation.name)


def presentation_of(m):
    if m.kind == "surface":
        return surface_presentation(m.genus)
    if m.kind == "lens":
        return GroupPresentation(1, ((0,) * m.p,), m.name)
    if m.kind == "torus3":
        return GroupPresentation(3, (commutator(0, 1), commutator(0, 2), commutator(1, 2)), m.name)
    return m.presentation


def invariant(m, g, cap=None):
    """|Hom(pi_1 M, G)| / |G| as an exact rational."""
    return Fraction(hom_count(presentation_of(m), g, cap), g.order)


def disjoint_invariant(specs, g, cap=None):
    """Invariant of a disjoint union: the product over the pieces."""
    out = Fraction(1)
    for m in specs:
        out *= invariant(m, g, cap)
    return out


def surface_invariant(genus, g, backend="count", cap=None):
    if backend == "count":
        return invariant(surface(genus), g, cap)
    if backend == "frobenius":
        return closed_invariant(genus, center_of_group_algebra(g))
    if backend == "span":
        return quantize(closed_surface(genus), g, cap).scalar_value()
    raise TQFTError(f"unknown backend {backend!r}; choose from {', '.join(BACKENDS)}")


@dataclass(frozen=True)
class OracleRow:
    genus: int
    count: Fraction
    frobenius: Fraction
    span: Fraction

    @property
    def all_equal(self):
        return self.count == self.frobenius == self.span


def oracle_report(g, max_genus, cap=None):
    if max_genus < 0:
        raise TQFTError("max_genus must be non-negative")
    return [
        OracleRow(h, *(surface_invariant(h, g, b, cap) for b in BACKENDS))
        for h in range(max_genus + 1)
    ]
