"""K3^[2]-type lattices: the Beauville lattice, orbit invariants, curve classes.

Divisor classes ``rho`` and curve classes ``R`` are tied by
``div(rho) * (R . v) = (v, rho)``; a :class:`CurveClass` records ``rho``
together with the quantities this duality determines.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .qlattice import (
    DivisibilityProfile,
    GramLattice,
    LatticeError,
    LatticeVector,
    determinant,
    divisibility,
    is_primitive,
    orthogonal_sum,
    pair,
    signature,
    square,
    standard_lattice,
)

__all__ = [
    "BeauvilleLattice",
    "CurveClass",
    "build_beauville_lattice",
    "orbit_invariants",
    "riemann_roch",
    "c2_pairing",
    "curve_class_from_divisor",
    "hilbert_square_picard",
    "section6_presets",
    "Section6Preset",
    "ALLOWED_R_SQUARES",
]

#: (square of rho, divisibility) -> (R, R) for the three classes of E.
ALLOWED_R_SQUARES = {
    (-2, 2): Fraction(-1, 2),
    (-2, 1): Fraction(-2),
    (-10, 2): Fraction(-5, 2),
}


@dataclass(frozen=True)
class BeauvilleLattice:
    lattice: GramLattice
    e_index: int

    @property
    def e(self) -> LatticeVector:
        return self.lattice.basis_vector(self.e_index)

    @property
    def profile(self) -> DivisibilityProfile:
        divisors = [1] * self.lattice.rank
        divisors[self.e_index] = 2
        return DivisibilityProfile(tuple(divisors))


def build_beauville_lattice() -> BeauvilleLattice:
    """``U^3 + (-E8)^2 + <-2>``, rank 23, with ``e`` the last basis vector."""
    parts = [standard_lattice("U", prefix=f"U{i + 1}.") for i in range(3)]
    parts += [standard_lattice("minusE8", prefix=f"E8({i + 1}).") for i in range(2)]
    parts.append(standard_lattice("rank1", -2))
    lattice = reduce(orthogonal_sum, parts)
    return BeauvilleLattice(lattice, lattice.rank - 1)


def orbit_invariants(v: LatticeVector, profile: DivisibilityProfile | None = None) -> tuple[int, int]:
    """``((v, v), div(v))`` -- a complete invariant of the orbit of primitive ``v``."""
    if v.is_zero() or not is_primitive(v):
        raise LatticeError(f"orbit invariants are defined for primitive vectors, got {v.coords}")
    return square(v), divisibility(v, profile)


def riemann_roch(q: int) -> int:
    """Euler characteristic of a line bundle of Beauville square ``q`` on a fourfold."""
    if q % 2:
        raise LatticeError(f"the square of a divisor class is even, got {q}")
    num = (q + 4) * (q + 6)
    assert num % 8 == 0
    return num // 8


def c2_pairing(q: int) -> int:
    """``c2(F) . v . v`` for ``(v, v) = q``."""
    return 30 * q


@dataclass(frozen=True)
class CurveClass:
    rho: LatticeVector
    div: int
    degree: Fraction
    r_square: Fraction

    @property
    def kind(self) -> str | None:
        sq = square(self.rho)
        if (sq, self.div) not in ALLOWED_R_SQUARES:
            return None
        return {(-2, 1): "minus2_div1", (-2, 2): "minus2_div2", (-10, 2): "minus10_div2"}[
            (sq, self.div)
        ]


def curve_class_from_divisor(
    rho: LatticeVector, profile: DivisibilityProfile, g: LatticeVector
) -> CurveClass:
    if rho.is_zero() or not is_primitive(rho):
        raise LatticeError(f"rho must be primitive, got {rho.coords}")
    deg = pair(rho, g)
    if deg <= 0:
        raise LatticeError(f"rho = {rho.coords} is not in the positive halfspace: (rho, g) = {deg}")
    div = divisibility(rho, profile)
    if div not in (1, 2):
        raise LatticeError(f"divisibility {div} of {rho.coords} is neither 1 nor 2")
    return CurveClass(rho, div, Fraction(deg, div), Fraction(square(rho), div * div))


def hilbert_square_picard(
    k3_gram: GramLattice, n: int = 2, e_label: str = "e"
) -> tuple[GramLattice, DivisibilityProfile]:
    """``Pic(S) + Z e`` with ``(e, e) = -2(n-1)``, and its divisibility profile.

    K3 classes have divisibility 1 (``H^2(S)`` is unimodular and ``Pic(S)`` is
    primitive in it); ``e`` pairs to ``2(n-1) Z``.
    """
    if n < 2:
        raise LatticeError(f"n must be at least 2, got {n}")
    if not k3_gram.is_even:
        raise LatticeError("a K3 Picard lattice is even")
    if signature(k3_gram) != (1, k3_gram.rank - 1):
        raise LatticeError(
            f"a K3 Picard lattice has signature (1, rank-1), got {signature(k3_gram)}"
        )
    e = GramLattice(((-2 * (n - 1),),), (e_label,))
    lattice = orthogonal_sum(k3_gram, e)
    profile = DivisibilityProfile((1,) * k3_gram.rank + (2 * (n - 1),))
    return lattice, profile


@dataclass(frozen=True)
class Section6Preset:
    name: str
    surface: str
    lattice: GramLattice
    profile: DivisibilityProfile
    classes: tuple[tuple[str, tuple[int, ...]], ...]  # generators in the S^[2] basis


# K3 Picard data of double covers of F0, F1 and F4, and the rho-classes of the
# rulings / exceptional curves expressed in the basis (K3 classes..., e).
_SECTION6 = (
    ("sigma-F0", "F0", ((0, 2), (2, 0)), ("E1", "E2"), (("rho1", (1, 0, -1)), ("rho2", (0, 1, -1)))),
    ("sigma-F1", "F1", ((0, 2), (2, -2)), ("E", "C"), (("rho0", (1, 0, -1)), ("rho-1", (0, 2, -1)))),
    ("sigma-F4", "F4", ((0, 1), (1, -2)), ("E", "C"), (("rho0", (1, 0, -1)), ("rho-4", (0, 2, 1)))),
)


def section6_presets() -> list[Section6Preset]:
    """Rank-2 lattices spanned by the ruling classes of a surface in ``S^[2]``.

    Each Gram matrix is computed from the K3 Picard lattice, not tabulated.
    """
    out = []
    for name, surface, k3, labels, classes in _SECTION6:
        hilb, hprofile = hilbert_square_picard(GramLattice(k3, labels))
        vecs = [hilb.vector(c) for _, c in classes]
        gram = tuple(tuple(pair(a, b) for b in vecs) for a in vecs)
        lattice = GramLattice(gram, tuple(label for label, _ in classes))
        profile = DivisibilityProfile(tuple(divisibility(v, hprofile) for v in vecs))
        out.append(Section6Preset(name, surface, lattice, profile, classes))
    return out


def check_beauville(b: BeauvilleLattice) -> None:
    """Assert the defining invariants; used by the CLI self-description."""
    if b.lattice.rank != 23 or not b.lattice.is_even:
        raise LatticeError("Beauville lattice must be even of rank 23")
    if signature(b.lattice) != (3, 20) or determinant(b.lattice) != 2:
        raise LatticeError("Beauville lattice must have signature (3,20) and determinant 2")
