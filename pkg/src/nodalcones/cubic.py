"""Lattice arithmetic for special cubic fourfolds and surfaces on them.

A cubic fourfold ``X`` with a surface ``T`` spans the rank-2 lattice
``K = <h^2, T>`` with intersection form ``[[3, b], [b, t_sq]]``.  On the Fano
variety of lines the Abel--Jacobi map turns ``K`` into ``(g, tau)`` with
``(g, g) = 6``.  Scrolls of degree ``n`` with ``Delta`` nodes have an explicit
self-intersection, and their ruling lines give a curve class ``R``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb

from .cone_engine import Rank2Config
from .qlattice import DivisibilityProfile, GramLattice, LatticeError, LatticeVector, pair, square

__all__ = [
    "AssumptionRequired",
    "CubicLatticeData",
    "ScrollRecord",
    "abel_jacobi_transfer",
    "fano_config",
    "scroll_self_intersection",
    "delta_from_ruling",
    "scroll_discriminant",
    "delta_min",
    "nodal_deltas",
    "nodal_scroll_table",
    "scroll_record",
    "unirational_degree",
    "ruling_class",
    "ruling_pairings",
    "NodalDecomposition",
    "decompose_in_nodal_basis",
    "admissible_discriminant",
    "isometry_check",
    "cubic_presets",
    "records_to_tsv",
    "records_to_json",
    "KNOWN_NONEXISTENT",
    "NODAL_R_SQUARES",
]

#: (R, R) of a ruling line class on the nodal side, by parity of the degree.
NODAL_R_SQUARES = {0: (Fraction(-2),), 1: (Fraction(-1, 2), Fraction(-5, 2))}

#: (n, Delta) for which no such scroll exists on a cubic fourfold, with the reason.
KNOWN_NONEXISTENT = {
    (5, 2): "no quintic scroll with two ordinary double points lies on a cubic fourfold",
    (6, 4): "no sextic scroll with four nodes lies on a cubic fourfold",
    (6, 5): "no sextic scroll with five nodes lies on a cubic fourfold",
    (7, 5): "no septic scroll with five nodes lies on a cubic fourfold",
}


class AssumptionRequired(LatticeError):
    """A formula was requested without the geometric hypotheses it depends on."""


def admissible_discriminant(d: int) -> bool:
    return d > 6 and d % 6 in (0, 2)


@dataclass(frozen=True)
class CubicLatticeData:
    b: int
    t_sq: int
    h2_sq: int = 3

    def __post_init__(self):
        if self.h2_sq != 3:
            raise LatticeError(f"(h^2, h^2) = 3 on a cubic fourfold, got {self.h2_sq}")
        if not admissible_discriminant(self.disc):
            raise LatticeError(
                f"discriminant 3*{self.t_sq} - {self.b}^2 = {self.disc} is not > 6 and 0 or 2 mod 6"
            )

    @property
    def disc(self) -> int:
        return 3 * self.t_sq - self.b * self.b


def abel_jacobi_transfer(K: CubicLatticeData) -> tuple[GramLattice, DivisibilityProfile]:
    """Gram matrix of ``(g, tau)`` on the Fano variety, with profile ``(2, 1)``.

    Write ``T = (b/3) h^2 + T0`` with ``T0`` primitive.  The transfer doubles
    the square of ``h^2`` and negates the pairing on primitive classes, so
    ``(tau, tau) = 2 (b/3)^2 * 3 - (T0, T0) = b^2 - t_sq`` and ``(g, tau) = 2b``.
    """
    c = Fraction(K.b, 3)
    t0_sq = K.t_sq - c * c * 3
    tau_sq = 2 * c * c * 3 - t0_sq
    g_tau = 2 * c * 3
    assert tau_sq.denominator == 1 and g_tau.denominator == 1
    gram = ((2 * K.h2_sq, int(g_tau)), (int(g_tau), int(tau_sq)))
    return GramLattice(gram, ("g", "τ")), DivisibilityProfile((2, 1))


def fano_config(K: CubicLatticeData, name: str = "custom", labels=("g", "τ")) -> Rank2Config:
    gram, profile = abel_jacobi_transfer(K)
    return Rank2Config(GramLattice(gram.gram, tuple(labels)), profile, (1, 0), name)


def scroll_self_intersection(n: int, delta: int) -> int:
    if n < 1 or delta < 0:
        raise LatticeError(f"need n >= 1 and delta >= 0, got ({n}, {delta})")
    return 3 * n - 2 + 2 * delta


def scroll_discriminant(n: int, delta: int) -> int:
    """Discriminant of ``<h^2, T>``: ``3 (T, T) - n^2``."""
    if n < 2:
        raise LatticeError(f"need n >= 2, got {n}")
    return 3 * scroll_self_intersection(n, delta) - n * n


def delta_from_ruling(n: int, r_square) -> int:
    val = (Fraction(n * n - 6 * n + 4) - 2 * Fraction(r_square)) / 4
    if val.denominator != 1 or val < 0:
        raise LatticeError(f"(n, (R,R)) = ({n}, {Fraction(r_square)}) gives delta = {val}, not a nonnegative integer")
    return int(val)


def delta_min(n: int) -> int:
    if n < 2:
        raise LatticeError(f"need n >= 2, got {n}")
    return ceil(Fraction(n * n - 9 * n + 6, 6) + 1)


def nodal_deltas(n: int) -> set[int]:
    """``Delta`` values for which the ruling class is a nodal curve class."""
    if n < 2:
        raise LatticeError(f"need n >= 2, got {n}")
    out = set()
    for r in NODAL_R_SQUARES[n % 2]:
        try:
            out.add(delta_from_ruling(n, r))
        except LatticeError:
            pass
    return out


def ruling_r_square(n: int, delta: int) -> Fraction:
    return Fraction(n * n - 6 * n + 4 - 4 * delta, 2)


def unirational_degree(n: int, delta: int, not_cone: bool = False, isolated_singularities: bool = False) -> int:
    """Degree of the unirational parametrization attached to a scroll.

    The count ``C(n-2, 2) - Delta`` only holds when the scroll is not a cone
    and its singularities are isolated; both must be asserted by the caller.
    """
    if not (not_cone and isolated_singularities):
        missing = [
            name
            for name, flag in (("not a cone", not_cone), ("isolated singularities", isolated_singularities))
            if not flag
        ]
        raise AssumptionRequired(
            "the degree formula needs the scroll to be not a cone and to have isolated "
            f"singularities; not asserted: {', '.join(missing)}"
        )
    deg = comb(n - 2, 2) - delta
    if deg <= 0:
        raise LatticeError(f"C({n}-2, 2) - {delta} = {deg} is not a positive degree")
    return deg


def _saturation_warning(n: int, delta: int) -> str | None:
    """The lattice ``<h^2, T>`` can fail to be saturated.

    That happens when ``(h^2 + e T)/2`` (``e`` in {0, 1}) is integral in
    cohomology; the numerical test is parity of ``n + 3e`` and of the square,
    with the halved lattice again of admissible discriminant ``d/4``.
    """
    t_sq = scroll_self_intersection(n, delta)
    d = scroll_discriminant(n, delta)
    for eps in (0, 1):
        if (n + 3 * eps) % 2 == 0 and (t_sq + 2 * eps * n + 3 * eps) % 4 == 0:
            if d % 4 == 0 and admissible_discriminant(d // 4):
                return f"<h^2, T> may have index 2 in its saturation (discriminant {d // 4})"
    return None


@dataclass(frozen=True)
class ScrollRecord:
    n: int
    delta: int
    self_int: int
    disc: int
    r_square: Fraction
    unirat_deg: int | None
    warnings: tuple[str, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "delta": self.delta,
            "self_int": self.self_int,
            "disc": self.disc,
            "r_square": str(self.r_square),
            "unirat_deg": self.unirat_deg,
            "warnings": list(self.warnings),
        }


def scroll_record(n: int, delta: int, extra_warnings: tuple[str, ...] = ()) -> ScrollRecord:
    if delta < delta_min(n):
        raise LatticeError(f"delta = {delta} is below delta_min({n}) = {delta_min(n)}")
    deg = comb(n - 2, 2) - delta
    warnings = list(extra_warnings)
    if (n, delta) in KNOWN_NONEXISTENT:
        warnings.append(KNOWN_NONEXISTENT[(n, delta)])
    sat = _saturation_warning(n, delta)
    if sat:
        warnings.append(sat)
    return ScrollRecord(
        n,
        delta,
        scroll_self_intersection(n, delta),
        scroll_discriminant(n, delta),
        ruling_r_square(n, delta),
        deg if deg > 0 else None,
        tuple(warnings),
    )


def nodal_scroll_table(n_max: int, speculative: bool = False) -> list[ScrollRecord]:
    """Rows ``(n, Delta)`` with a nodal ruling class, for ``2 <= n <= n_max``.

    With ``speculative`` every other ``Delta`` between ``max(0, delta_min)``
    and ``C(n-2, 2)`` is listed too, flagged as such.
    """
    if n_max < 2:
        raise LatticeError(f"n_max must be at least 2, got {n_max}")
    rows = []
    for n in range(2, n_max + 1):
        nodal = {d for d in nodal_deltas(n) if d >= 0 and d >= delta_min(n)}
        deltas = set(nodal)
        if speculative:
            deltas.update(range(max(0, delta_min(n)), comb(n - 2, 2) + 1))
        for d in sorted(deltas):
            extra = () if d in nodal else ("speculative: ruling class is not nodal",)
            rows.append(scroll_record(n, d, extra))
    return rows


TSV_COLUMNS = ("n", "delta", "self_int", "disc", "r_square", "unirat_deg", "warnings")


def records_to_tsv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(TSV_COLUMNS)
    for r in records:
        d = r.as_dict()
        d["unirat_deg"] = "" if d["unirat_deg"] is None else d["unirat_deg"]
        d["warnings"] = ";".join(d["warnings"])
        w.writerow([d[c] for c in TSV_COLUMNS])
    return buf.getvalue()


def records_to_json(records) -> str:
    return json.dumps([r.as_dict() for r in records], sort_keys=True, ensure_ascii=False)


def ruling_class(fano: Rank2Config, n: int, t: int) -> LatticeVector:
    """The divisor class ``rho`` with ``(rho, g) = 2n`` and ``(rho, tau) = 2t``."""
    (a, b), (_, d) = fano.gram
    det = a * d - b * b
    x = Fraction(2 * n * d - 2 * t * b, det)
    y = Fraction(2 * t * a - 2 * n * b, det)
    if x.denominator != 1 or y.denominator != 1:
        raise LatticeError(f"no integral class pairs to ({2 * n}, {2 * t}) with (g, tau): got ({x}, {y})")
    return fano.vector(int(x), int(y))


def ruling_pairings(fano: Rank2Config, rho: LatticeVector) -> tuple[Fraction, Fraction]:
    """Inverse of :func:`ruling_class`: ``((rho, g)/2, (rho, tau)/2)``."""
    return Fraction(pair(rho, fano.lattice.basis_vector(0)), 2), Fraction(pair(rho, fano.lattice.basis_vector(1)), 2)


@dataclass(frozen=True)
class NodalDecomposition:
    a: Fraction
    b: Fraction
    outside: bool

    @property
    def verdict(self) -> str:
        return "outside" if self.outside else "inside"


def decompose_in_nodal_basis(rho: LatticeVector, nodal: tuple[LatticeVector, LatticeVector]) -> NodalDecomposition:
    """Solve ``rho = a n1 + b n2``.

    A class of negative square with a negative coefficient is outside the
    (conjectural) effective cone spanned by the two nodal rays and the
    positive cone.
    """
    n1, n2 = nodal
    (p, q), (r, s) = n1.coords, n2.coords
    det = p * s - q * r
    if det == 0:
        raise LatticeError(f"nodal classes {n1.coords} and {n2.coords} are linearly dependent")
    x, y = rho.coords
    a = Fraction(x * s - y * r, det)
    b = Fraction(p * y - q * x, det)
    return NodalDecomposition(a, b, min(a, b) < 0 and square(rho) < 0)


def isometry_check(M, gram) -> bool:
    n = len(gram)
    mt_g = [[sum(M[k][i] * gram[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    out = [[sum(mt_g[i][k] * M[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return all(out[i][j] == gram[i][j] for i in range(n) for j in range(n))


def cubic_presets() -> list[CubicLatticeData]:
    return [CubicLatticeData(b, t) for b, t in ((1, 3), (3, 7), (4, 10), (4, 12), (5, 17))]
