"""Exact arithmetic for integral quadratic lattices.

Everything here works over Python integers and :class:`fractions.Fraction`;
no returned value ever passes through floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "LatticeError",
    "GramLattice",
    "LatticeVector",
    "DivisibilityProfile",
    "DiscriminantGroup",
    "pair",
    "square",
    "is_primitive",
    "divisibility",
    "signature",
    "determinant",
    "smith_normal_form",
    "discriminant_group",
    "orthogonal_sum",
    "standard_lattice",
    "E8_CARTAN",
]


class LatticeError(ValueError):
    """Invalid lattice data or an operation outside its domain."""


Matrix = tuple[tuple[int, ...], ...]


def _as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    out = []
    for row in rows:
        r = []
        for x in row:
            if isinstance(x, bool) or not isinstance(x, int):
                raise LatticeError(f"Gram entries must be integers, got {x!r}")
            r.append(x)
        out.append(tuple(r))
    return tuple(out)


@dataclass(frozen=True)
class GramLattice:
    """A free Z-module with a symmetric integral bilinear form.

    ``degenerate=True`` admits a singular Gram matrix; operations that need
    nondegeneracy refuse such lattices.
    """

    gram: Matrix
    basis_labels: tuple[str, ...] = ()
    degenerate: bool = False

    def __post_init__(self):
        gram = _as_matrix(self.gram)
        object.__setattr__(self, "gram", gram)
        n = len(gram)
        for i, row in enumerate(gram):
            if len(row) != n:
                raise LatticeError(f"Gram row {i + 1} has length {len(row)}, expected {n}")
        for i in range(n):
            for j in range(i + 1, n):
                if gram[i][j] != gram[j][i]:
                    raise LatticeError(
                        f"Gram matrix is not symmetric: entry ({i + 1},{j + 1}) = {gram[i][j]} "
                        f"but ({j + 1},{i + 1}) = {gram[j][i]}"
                    )
        labels = tuple(self.basis_labels) or tuple(f"b{i + 1}" for i in range(n))
        if len(labels) != n:
            raise LatticeError(f"{len(labels)} basis labels for a rank {n} lattice")
        object.__setattr__(self, "basis_labels", labels)
        if not self.degenerate and n and determinant_of(gram) == 0:
            raise LatticeError("Gram matrix is degenerate (determinant 0)")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def vector(self, *coords: int) -> "LatticeVector":
        if len(coords) == 1 and not isinstance(coords[0], int):
            coords = tuple(coords[0])
        return LatticeVector(tuple(coords), self)

    def basis_vector(self, i: int) -> "LatticeVector":
        return LatticeVector(tuple(int(j == i) for j in range(self.rank)), self)

    def pairing_vector(self, coords: Sequence[int]) -> tuple[int, ...]:
        """Return ``gram @ coords``: the pairings of a vector with every basis vector."""
        return tuple(sum(r * c for r, c in zip(row, coords)) for row in self.gram)

    def require_nondegenerate(self) -> None:
        if self.degenerate and determinant_of(self.gram) == 0:
            raise LatticeError("operation requires a nondegenerate lattice")


@dataclass(frozen=True)
class LatticeVector:
    coords: tuple[int, ...]
    host: GramLattice = field(repr=False)

    def __post_init__(self):
        coords = tuple(self.coords)
        for c in coords:
            if isinstance(c, bool) or not isinstance(c, int):
                raise LatticeError(f"lattice coordinates must be integers, got {c!r}")
        if len(coords) != self.host.rank:
            raise LatticeError(
                f"vector has {len(coords)} coordinates but the host lattice has rank {self.host.rank}"
            )
        object.__setattr__(self, "coords", coords)

    def _check(self, other: "LatticeVector") -> None:
        if other.host != self.host:
            raise LatticeError("vectors live in different lattices")

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.host)

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(tuple(a - b for a, b in zip(self.coords, other.coords)), self.host)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(tuple(-a for a in self.coords), self.host)

    def __mul__(self, k: int) -> "LatticeVector":
        return LatticeVector(tuple(k * a for a in self.coords), self.host)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class DivisibilityProfile:
    """Per-basis-vector divisors ``d_i`` of an embedded sublattice.

    The ideal ``(v, L)`` of a vector ``v = sum x_i b_i`` is generated by
    ``gcd(d_i * x_i)``.  This is exact when the image of the ambient lattice
    in ``Hom(sublattice, Z)`` is spanned by ``d_i`` times the dual basis.
    """

    divisors: tuple[int, ...]

    def __post_init__(self):
        divisors = tuple(self.divisors)
        if any(isinstance(d, bool) or not isinstance(d, int) or d < 1 for d in divisors):
            raise LatticeError(f"divisors must be positive integers, got {divisors}")
        object.__setattr__(self, "divisors", divisors)

    def check_against(self, lattice: GramLattice) -> None:
        """Each ``d_i`` must divide every pairing of ``b_i`` with the sublattice."""
        if len(self.divisors) != lattice.rank:
            raise LatticeError(
                f"profile has {len(self.divisors)} entries for a rank {lattice.rank} lattice"
            )
        for i, d in enumerate(self.divisors):
            for j, entry in enumerate(lattice.gram[i]):
                if entry % d:
                    raise LatticeError(
                        f"profile divisor {d} of {lattice.basis_labels[i]} does not divide "
                        f"Gram entry ({i + 1},{j + 1}) = {entry}"
                    )


@dataclass(frozen=True)
class DiscriminantGroup:
    cyclic_orders: tuple[int, ...]
    q_values: tuple[Fraction, ...]
    generators: tuple[tuple[Fraction, ...], ...] = field(default=(), compare=False)

    @property
    def order(self) -> int:
        out = 1
        for d in self.cyclic_orders:
            out *= d
        return out

    def describe(self) -> str:
        if not self.cyclic_orders:
            return "trivial"
        return " + ".join(f"Z/{d}Z" for d in self.cyclic_orders)


# -- basic form operations -------------------------------------------------


def pair(v: LatticeVector, w: LatticeVector) -> int:
    if v.host != w.host:
        raise LatticeError("cannot pair vectors from different lattices")
    return sum(x * y for x, y in zip(v.coords, v.host.pairing_vector(w.coords)))


def square(v: LatticeVector) -> int:
    return pair(v, v)


def _content(coords: Iterable[int]) -> int:
    g = 0
    for c in coords:
        g = gcd(g, c)
    return g


def is_primitive(v: LatticeVector) -> bool:
    if v.is_zero():
        raise LatticeError("the zero vector has no primitivity")
    return _content(v.coords) == 1


def divisibility(v: LatticeVector, profile: DivisibilityProfile | None = None) -> int:
    """Positive generator of the ideal ``(v, L)``.

    With a profile, the ambient lattice ``L`` is the one the profile describes.
    Without one, ``L`` is the host lattice itself.
    """
    if v.is_zero():
        raise LatticeError("divisibility of the zero vector is undefined")
    if profile is None:
        return _content(v.host.pairing_vector(v.coords))
    if len(profile.divisors) != v.host.rank:
        raise LatticeError(
            f"profile length {len(profile.divisors)} does not match rank {v.host.rank}"
        )
    return _content(d * x for d, x in zip(profile.divisors, v.coords))


# -- determinants and diagonalisation --------------------------------------


def determinant_of(rows: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def determinant(lattice: GramLattice) -> int:
    return determinant_of(lattice.gram)


def _congruent_diagonal(gram: Matrix) -> list[Fraction]:
    """Diagonal entries of a rational matrix congruent to ``gram``.

    A zero pivot with a nonzero off-diagonal entry in its row is repaired by
    adding that row/column to the pivot one (a congruence), which turns the
    2x2 block [[0, b], [b, c]] into one with pivot 2b + c or, after the swap
    below, a nonzero diagonal.
    """
    a = [[Fraction(x) for x in row] for row in gram]
    n = len(a)
    diag: list[Fraction] = []
    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                a[k], a[j] = a[j], a[k]
                for row in a:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is not None:
                    for c in range(n):
                        a[k][c] += a[j][c]
                    for r in range(n):
                        a[r][k] += a[r][j]
        p = a[k][k]
        diag.append(p)
        if p == 0:
            continue
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for c in range(k, n):
                    a[i][c] -= f * a[k][c]
        for i in range(k + 1, n):
            a[k][i] = Fraction(0)
            a[i][k] = Fraction(0)
    return diag


def signature(lattice: GramLattice) -> tuple[int, int]:
    if determinant(lattice) == 0:
        raise LatticeError("signature requires a nondegenerate lattice")
    diag = _congruent_diagonal(lattice.gram)
    return sum(1 for d in diag if d > 0), sum(1 for d in diag if d < 0)


# -- Smith normal form and discriminant groups -----------------------------


def smith_normal_form(rows: Sequence[Sequence[int]]):
    """Return ``(D, U, U_inv, V)`` with ``U @ A @ V == D`` diagonal.

    Diagonal entries are nonnegative and each divides the next.  ``U`` and
    ``V`` are unimodular; ``U_inv`` is tracked alongside ``U`` so callers can
    lift generators of ``Z^n / A Z^n`` without a second inversion.
    """
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_add(dst, src, k):  # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]
        for r in Ui:  # inverse: column_src -= k * column_dst
            r[src] -= k * r[dst]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]
        for r in Ui:
            r[i] = -r[i]

    def col_add(dst, src, k):
        for r in a:
            r[dst] += k * r[src]
        for r in V:
            r[dst] += k * r[src]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
            if not nz:
                break
            _, pi, pj = min(nz)
            row_swap(t, pi)
            col_swap(t, pj)
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    row_add(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    col_add(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        done = False
            if not done:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if t < m and a[t][t] < 0:
            row_neg(t)
    return a, U, Ui, V


def _inverse(gram: Matrix) -> list[list[Fraction]]:
    n = len(gram)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(gram)]
    for k in range(n):
        p = next(i for i in range(k, n) if a[i][k] != 0)
        a[k], a[p] = a[p], a[k]
        piv = a[k][k]
        a[k] = [x / piv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


def _mod2(q: Fraction) -> Fraction:
    return q - 2 * (q.numerator // (2 * q.denominator))


def discriminant_group(lattice: GramLattice) -> DiscriminantGroup:
    """``L*/L`` with its quadratic form, reduced into ``[0, 2)``."""
    if determinant(lattice) == 0:
        raise LatticeError("discriminant group requires a nondegenerate lattice")
    if not lattice.is_even:
        raise LatticeError("discriminant quadratic form requires an even lattice")
    D, _, Ui, _ = smith_normal_form(lattice.gram)
    inv = _inverse(lattice.gram)
    n = lattice.rank
    orders, qs, gens = [], [], []
    for i in range(n):
        d = D[i][i]
        if d <= 1:
            continue
        # L*/L ~ Z^n / G Z^n via w -> G w; the i-th SNF generator has pairing vector U^-1 e_i
        p = [Ui[r][i] for r in range(n)]
        w = [sum(inv[r][c] * p[c] for c in range(n)) for r in range(n)]
        q = sum(p[r] * w[r] for r in range(n))
        orders.append(d)
        qs.append(_mod2(Fraction(q)))
        gens.append(tuple(w))
    return DiscriminantGroup(tuple(orders), tuple(qs), tuple(gens))


# -- constructions ---------------------------------------------------------


def orthogonal_sum(a: GramLattice, b: GramLattice) -> GramLattice:
    n, m = a.rank, b.rank
    rows = [tuple(r) + (0,) * m for r in a.gram] + [(0,) * n + tuple(r) for r in b.gram]
    return GramLattice(
        tuple(rows),
        a.basis_labels + b.basis_labels,
        degenerate=a.degenerate or b.degenerate,
    )


# Cartan matrix of the E8 root system (Bourbaki numbering: node 4 is trivalent).
E8_CARTAN: Matrix = (
    (2, 0, -1, 0, 0, 0, 0, 0),
    (0, 2, 0, -1, 0, 0, 0, 0),
    (-1, 0, 2, -1, 0, 0, 0, 0),
    (0, -1, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, -1),
    (0, 0, 0, 0, 0, 0, -1, 2),
)


def standard_lattice(name: str, k: int | None = None, prefix: str = "") -> GramLattice:
    """``U``, ``E8``, ``minusE8`` or ``rank1`` (the latter needs an even ``k``)."""
    if name == "U":
        return GramLattice(((0, 1), (1, 0)), (f"{prefix}u1", f"{prefix}u2"))
    if name == "E8":
        return GramLattice(E8_CARTAN, tuple(f"{prefix}a{i + 1}" for i in range(8)))
    if name == "minusE8":
        return GramLattice(
            tuple(tuple(-x for x in row) for row in E8_CARTAN),
            tuple(f"{prefix}a{i + 1}" for i in range(8)),
        )
    if name == "rank1":
        if k is None or k == 0 or k % 2:
            raise LatticeError(f"rank1 needs a nonzero even integer, got {k!r}")
        return GramLattice(((k,),), (f"{prefix}e",))
    raise LatticeError(f"unknown standard lattice {name!r}; expected U, E8, minusE8 or rank1")
