"""Rank-2 cone computations in a hyperbolic Picard lattice.

Everything is measured by one exact coordinate.  Fix the polarization ``g``
and a primitive ``h`` with ``(g, h) = 0``; then ``(h, h) < 0`` and every class
``v`` with ``(v, g) > 0`` has the *slope*

    s(v) = (v, h) / (v, g).

``g`` has slope 0, the positive cone is ``s^2 < sigma^2`` with
``sigma^2 = -(h, h) / (g, g)``, and the hyperplane ``rho^perp`` of a class of
negative square is the ray of slope ``sigma^2 / s(rho)``.  Angular order in
the halfplane ``(., g) > 0`` is the order of slopes, so cones are intervals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, total_ordering
from math import ceil, floor, gcd, isqrt

from .beauville import ALLOWED_R_SQUARES, CurveClass, curve_class_from_divisor
from .pell import PellFamily, pell_family
from .qlattice import (
    DivisibilityProfile,
    GramLattice,
    LatticeError,
    LatticeVector,
    divisibility,
    determinant,
    is_primitive,
    pair,
    signature,
    square,
)

__all__ = [
    "ConeError",
    "InstabilityError",
    "IterationCapError",
    "Rank2Config",
    "Slope",
    "Ray",
    "ConeSector",
    "EClass",
    "Chamber",
    "ChamberDecomposition",
    "Decomposition",
    "KIND_BY_INVARIANTS",
    "solve_binary",
    "enumerate_square",
    "pell_family",
    "PellFamily",
    "e_classes",
    "positive_cone",
    "nodal_classes",
    "is_decomposable_in_monoid",
    "ample_cone",
    "weyl_reflect",
    "fundamental_domain",
    "reduce_to_fundamental",
    "chambers",
    "square_zero_classes",
    "DEFAULT_BOUND",
    "DEFAULT_MAX_ITERS",
]

DEFAULT_BOUND = 200
DEFAULT_MAX_ITERS = 10_000

KIND_BY_INVARIANTS = {(-2, 1): "minus2_div1", (-2, 2): "minus2_div2", (-10, 2): "minus10_div2"}


class ConeError(Exception):
    """Base class for failures of the cone engine that are not input errors."""


class InstabilityError(ConeError):
    def __init__(self, what: str, bound: int, detail: str = ""):
        self.bound = bound
        msg = f"{what} changed between bound {bound} and {2 * bound}"
        if detail:
            msg += f" ({detail})"
        msg += f"; retry with a larger bound, e.g. --bound {4 * bound}"
        super().__init__(msg)


class IterationCapError(ConeError):
    def __init__(self, max_iters: int, partial: list):
        self.partial = partial
        super().__init__(f"reduction did not reach the fundamental domain in {max_iters} reflections")


def _is_square(k: int) -> bool:
    return k >= 0 and isqrt(k) ** 2 == k


def _frac_sqrt(q: Fraction) -> Fraction | None:
    if q < 0 or not (_is_square(q.numerator) and _is_square(q.denominator)):
        return None
    return Fraction(isqrt(q.numerator), isqrt(q.denominator))


def _primitive(coords) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector on the same ray."""
    coords = [Fraction(c) for c in coords]
    den = 1
    for c in coords:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coords]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(c // g for c in ints)


@dataclass(frozen=True)
class Rank2Config:
    """A rank-2 even hyperbolic lattice with divisibility profile and polarization."""

    lattice: GramLattice
    profile: DivisibilityProfile
    g: tuple[int, int]
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(self.g))
        if self.lattice.rank != 2:
            raise LatticeError(f"rank-2 lattice required, got rank {self.lattice.rank}")
        if not self.lattice.is_even:
            raise LatticeError("the lattice must be even")
        if self.lattice.degenerate or determinant(self.lattice) >= 0:
            raise LatticeError(
                f"signature must be (1,1), got {signature(self.lattice)} "
                f"(determinant {determinant(self.lattice)})"
            )
        self.profile.check_against(self.lattice)
        if square(self.gv) <= 0:
            raise LatticeError(f"polarization {self.g} has square {square(self.gv)}, must be positive")

    # --- basic geometry -------------------------------------------------
    @property
    def gram(self):
        return self.lattice.gram

    @cached_property
    def gv(self) -> LatticeVector:
        return self.lattice.vector(self.g)

    @cached_property
    def hv(self) -> LatticeVector:
        p, q = self.lattice.pairing_vector(self.g)
        return self.lattice.vector(_primitive((q, -p)))

    @cached_property
    def g2(self) -> int:
        return square(self.gv)

    @cached_property
    def h2(self) -> int:
        return square(self.hv)

    @cached_property
    def sigma_sq(self) -> Fraction:
        return Fraction(-self.h2, self.g2)

    @cached_property
    def sigma(self) -> Fraction | None:
        """``sigma`` when rational, i.e. when square-zero classes are integral."""
        return _frac_sqrt(self.sigma_sq)

    @cached_property
    def _m_inverse(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        # rows of M are the pairing vectors of g and h, so M v = ((v,g), (v,h))
        (a, b), (c, d) = self.lattice.pairing_vector(self.g), self.lattice.pairing_vector(self.hv.coords)
        det = a * d - b * c
        return ((Fraction(d, det), Fraction(-b, det)), (Fraction(-c, det), Fraction(a, det)))

    def vector(self, x: int, y: int) -> LatticeVector:
        return self.lattice.vector(x, y)

    def slope(self, v) -> Fraction:
        v = self._as_vector(v)
        pg = pair(v, self.gv)
        if pg <= 0:
            raise LatticeError(f"{v.coords} is not in the positive halfspace")
        return Fraction(pair(v, self.hv), pg)

    def _as_vector(self, v) -> LatticeVector:
        return v if isinstance(v, LatticeVector) else self.lattice.vector(tuple(v))

    def ray_of_slope(self, t: Fraction) -> tuple[int, int]:
        """Primitive integral vector of slope ``t`` in the positive halfspace."""
        mi = self._m_inverse
        return _primitive((mi[0][0] + mi[0][1] * t, mi[1][0] + mi[1][1] * t))

    def perp_slope(self, rho: LatticeVector) -> Fraction:
        return self.sigma_sq / self.slope(rho)

    def kind(self, v: LatticeVector) -> str | None:
        return KIND_BY_INVARIANTS.get((square(v), divisibility(v, self.profile)))


@total_ordering
@dataclass(frozen=True)
class Slope:
    """A slope that is rational, or one of the irrational boundary values ``+-sigma``."""

    rational: Fraction | None
    boundary: int = 0  # +1 / -1 for +-sigma when sigma is irrational
    sigma_sq: Fraction = field(default=Fraction(0), compare=False)

    @classmethod
    def of(cls, t: Fraction) -> "Slope":
        return cls(Fraction(t))

    @classmethod
    def edge(cls, cfg: Rank2Config, sign: int) -> "Slope":
        if cfg.sigma is not None:
            return cls(sign * cfg.sigma)
        return cls(None, sign, cfg.sigma_sq)

    def __lt__(self, other: "Slope") -> bool:
        if self.rational is not None and other.rational is not None:
            return self.rational < other.rational
        if self.rational is None and other.rational is None:
            return self.boundary < other.boundary
        if self.rational is None:
            # +-sigma < r
            r, s, sq = other.rational, self.boundary, self.sigma_sq
            return (r > 0 and r * r > sq) if s > 0 else (r >= 0 or r * r < sq)
        r, s, sq = self.rational, other.boundary, other.sigma_sq
        return (r < 0 or r * r < sq) if s > 0 else (r < 0 and r * r > sq)

    def __str__(self) -> str:
        if self.rational is not None:
            return str(self.rational)
        return f"{'-' if self.boundary < 0 else ''}sqrt({self.sigma_sq})"


@dataclass(frozen=True)
class Ray:
    """A boundary ray of a sector.

    ``vector`` is the primitive integral generator when one exists.  Irrational
    square-zero rays carry ``surd``: per coordinate a pair ``(p, q)`` meaning
    ``p + q*sqrt(radicand)``, normalized so that ``(ray, g) = (g, g)``.
    ``wall`` is the class whose hyperplane the ray lies on, if any.
    """

    slope: Slope
    vector: tuple[int, int] | None
    square: int | None
    wall: tuple[int, int] | None = None
    surd: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]] | None = None
    radicand: int | None = None

    @property
    def integral(self) -> bool:
        return self.vector is not None


def _boundary_ray(cfg: Rank2Config, sign: int) -> Ray:
    slope = Slope.edge(cfg, sign)
    if cfg.sigma is not None:
        return Ray(slope, cfg.ray_of_slope(slope.rational), 0)
    # v = g + kappa h with kappa = -sign * sqrt(g2 / |h2|) has slope sign*sigma
    r = Fraction(cfg.g2, -cfg.h2)
    pq = r.numerator * r.denominator
    k = 1
    m = pq
    for p in range(2, isqrt(pq) + 1):
        while m % (p * p) == 0:
            m //= p * p
            k *= p
    coef = Fraction(-sign * k, r.denominator)  # kappa = coef * sqrt(m)
    surd = tuple((Fraction(gc), coef * hc) for gc, hc in zip(cfg.g, cfg.hv.coords))
    return Ray(slope, None, 0, surd=surd, radicand=m)


def _wall_ray(cfg: Rank2Config, rho: LatticeVector) -> Ray:
    t = cfg.perp_slope(rho)
    vec = cfg.ray_of_slope(t)
    return Ray(Slope.of(t), vec, square(cfg.vector(*vec)), wall=rho.coords)


@dataclass(frozen=True)
class ConeSector:
    """The sector between two rays in the halfplane ``(., g) > 0``."""

    ray_lo: Ray
    ray_hi: Ray
    lo_closed: bool
    hi_closed: bool

    def contains(self, cfg: Rank2Config, v) -> bool:
        v = cfg._as_vector(v)
        if v.is_zero() or pair(v, cfg.gv) <= 0:
            return False
        s = Slope.of(cfg.slope(v))
        above = self.ray_lo.slope < s or (self.lo_closed and s == self.ray_lo.slope)
        below = s < self.ray_hi.slope or (self.hi_closed and s == self.ray_hi.slope)
        return above and below

    def within(self, other: "ConeSector") -> bool:
        """Whether this sector is a subset of ``other``."""
        lo_ok = other.ray_lo.slope < self.ray_lo.slope or (
            self.ray_lo.slope == other.ray_lo.slope and (other.lo_closed or not self.lo_closed)
        )
        hi_ok = self.ray_hi.slope < other.ray_hi.slope or (
            self.ray_hi.slope == other.ray_hi.slope and (other.hi_closed or not self.hi_closed)
        )
        return lo_ok and hi_ok


@dataclass(frozen=True)
class EClass:
    vector: LatticeVector
    kind: str
    nodal: bool = False

    @property
    def square(self) -> int:
        return square(self.vector)

    def curve(self, cfg: Rank2Config) -> CurveClass:
        return curve_class_from_divisor(self.vector, cfg.profile, cfg.gv)


# --- enumeration ---------------------------------------------------------

def solve_binary(gram, c: int, bound: int) -> list[tuple[int, int]]:
    """All integer ``(x, y)`` with ``|x|, |y| <= bound`` and ``a x^2 + 2b xy + d y^2 = c``."""
    (a, b), (_, d) = gram
    out = set()

    def solve_for_second(p, q, r, first):  # q*t^2 + 2*p*first*t + (r*first^2 - c) = 0 in t
        disc = p * p * first * first - q * (r * first * first - c)
        if disc < 0 or not _is_square(disc):
            return []
        s = isqrt(disc)
        roots = []
        for num in {-p * first + s, -p * first - s}:
            if num % q == 0:
                roots.append(num // q)
        return roots

    if d != 0:
        for x in range(-bound, bound + 1):
            for y in solve_for_second(b, d, a, x):
                if abs(y) <= bound:
                    out.add((x, y))
    elif a != 0:
        for y in range(-bound, bound + 1):
            for x in solve_for_second(b, a, d, y):
                if abs(x) <= bound:
                    out.add((x, y))
    else:  # 2bxy = c
        for x in range(-bound, bound + 1):
            if x == 0:
                if c == 0:
                    out.update((0, y) for y in range(-bound, bound + 1))
                continue
            if c % (2 * b * x) == 0:
                y = c // (2 * b * x)
                if abs(y) <= bound:
                    out.add((x, y))
    return sorted(out)


def _halfspace_primitive(cfg: Rank2Config, c: int, bound: int) -> list[LatticeVector]:
    vecs = []
    for xy in solve_binary(cfg.gram, c, bound):
        v = cfg.vector(*xy)
        if not v.is_zero() and is_primitive(v) and pair(v, cfg.gv) > 0:
            vecs.append(v)
    return vecs


def enumerate_square(cfg: Rank2Config, c: int, bound: int) -> list[LatticeVector]:
    """Primitive ``v`` with ``|x|, |y| <= bound``, ``(v, v) = c`` and ``(v, g) > 0``, by slope."""
    if bound < 1:
        raise LatticeError(f"bound must be at least 1, got {bound}")
    vecs = _halfspace_primitive(cfg, c, bound)
    return sorted(vecs, key=lambda v: (cfg.slope(v), v.coords))


def _e_vectors(cfg: Rank2Config, bound: int) -> list[EClass]:
    out = []
    for c in (-2, -10):
        for v in _halfspace_primitive(cfg, c, bound):
            kind = cfg.kind(v)
            if kind is not None:
                out.append(EClass(v, kind))
    return sorted(out, key=lambda e: (cfg.slope(e.vector), e.vector.coords))


def _extremes(cfg: Rank2Config, classes: list[EClass]):
    neg = [e for e in classes if cfg.slope(e.vector) < 0]
    pos = [e for e in classes if cfg.slope(e.vector) > 0]
    lo = min(neg, key=lambda e: cfg.slope(e.vector)) if neg else None
    hi = max(pos, key=lambda e: cfg.slope(e.vector)) if pos else None
    return lo, hi


def _stable_extremes(cfg: Rank2Config, bound: int, filt=lambda e: True, what="nodal classes"):
    if bound < 1:
        raise LatticeError(f"bound must be at least 1, got {bound}")
    first = _extremes(cfg, [e for e in _e_vectors(cfg, bound) if filt(e)])
    second = _extremes(cfg, [e for e in _e_vectors(cfg, 2 * bound) if filt(e)])
    key = lambda pair_: tuple(None if e is None else e.vector.coords for e in pair_)  # noqa: E731
    if key(first) != key(second):
        raise InstabilityError(what, bound, f"{key(first)} vs {key(second)}")
    return first


def nodal_classes(cfg: Rank2Config, bound: int = DEFAULT_BOUND) -> list[EClass]:
    """E-classes spanning extreme rays of ``N_E``, in slope order.

    All E-classes have negative square, so they lie outside the positive cone
    and the hull is spanned by the E-class of least and of greatest slope.
    """
    lo, hi = _stable_extremes(cfg, bound)
    return [EClass(e.vector, e.kind, True) for e in (lo, hi) if e is not None]


def e_classes(cfg: Rank2Config, bound: int = DEFAULT_BOUND) -> list[EClass]:
    nodal = {e.vector.coords for e in nodal_classes(cfg, bound)}
    return [EClass(e.vector, e.kind, e.vector.coords in nodal) for e in _e_vectors(cfg, bound)]


# --- cones -----------------------------------------------------------------

def positive_cone(cfg: Rank2Config) -> ConeSector:
    return ConeSector(_boundary_ray(cfg, -1), _boundary_ray(cfg, 1), False, False)


def _cut_sector(cfg: Rank2Config, lo: EClass | None, hi: EClass | None, closed: bool) -> ConeSector:
    # (lambda, rho) > 0  <=>  s(lambda) * s(rho) < sigma^2, so a class of negative
    # slope bounds the sector from below and one of positive slope from above
    ray_lo = _wall_ray(cfg, lo.vector) if lo is not None else _boundary_ray(cfg, -1)
    ray_hi = _wall_ray(cfg, hi.vector) if hi is not None else _boundary_ray(cfg, 1)
    return ConeSector(ray_lo, ray_hi, closed, closed)


def ample_cone(cfg: Rank2Config, bound: int = DEFAULT_BOUND) -> ConeSector:
    """``{lambda in C+ : (lambda, rho) > 0 for nodal rho}`` (open)."""
    lo, hi = _stable_extremes(cfg, bound)
    return _cut_sector(cfg, lo, hi, closed=False)


def _minus2(e: EClass) -> bool:
    return e.kind.startswith("minus2")


def fundamental_domain(cfg: Rank2Config, bound: int = DEFAULT_BOUND) -> ConeSector:
    """Closure of the part of ``C+`` where every (-2)-class pairs nonnegatively."""
    lo, hi = _stable_extremes(cfg, bound, _minus2, "(-2)-walls of the fundamental domain")
    return _cut_sector(cfg, lo, hi, closed=True)


def weyl_reflect(v: LatticeVector, rho: LatticeVector) -> LatticeVector:
    if square(rho) != -2:
        raise LatticeError(f"reflection needs a (-2)-class, {rho.coords} has square {square(rho)}")
    return v + rho * pair(v, rho)


def _violated_walls(cfg: Rank2Config, v: LatticeVector) -> list[LatticeVector]:
    """Every (-2)-class in the positive halfspace with ``(v, rho) < 0``.

    For such rho with ``P = (rho, g)`` and ``t = s(v)``:
    ``P^2 < 2 g^2 t^2 / (sigma^2 - t^2)`` and ``|s(rho)| <= sigma sqrt(1 + 2 g^2)``.
    Both are turned into a coordinate box, which is then searched exactly.
    """
    t = cfg.slope(v)
    if t == 0:
        return []
    p_sq = 2 * cfg.g2 * t * t / (cfg.sigma_sq - t * t)
    p_max = isqrt(floor(p_sq)) + 1
    q_max = isqrt(ceil(p_max * p_max * cfg.sigma_sq * (1 + 2 * cfg.g2))) + 1
    mi = cfg._m_inverse
    box = max(ceil(abs(row[0]) * p_max + abs(row[1]) * q_max) for row in mi)
    walls = [rho for rho in _halfspace_primitive(cfg, -2, max(box, 1))]
    return [rho for rho in walls if pair(v, rho) < 0]


def reduce_to_fundamental(
    cfg: Rank2Config, v, max_iters: int = DEFAULT_MAX_ITERS
) -> tuple[LatticeVector, list[LatticeVector]]:
    """Reflect ``v`` into the fundamental domain; returns ``(v', word)``.

    Each step uses the violated wall whose hyperplane is angularly nearest to
    the current vector.  The walls are found by an exact bounded search, so
    they do not depend on an enumeration bound.
    """
    v = cfg._as_vector(v)
    if pair(v, cfg.gv) <= 0 or square(v) <= 0:
        raise LatticeError(f"{v.coords} must have positive square and lie in the positive halfspace")
    word: list[LatticeVector] = []
    while True:
        walls = _violated_walls(cfg, v)
        if not walls:
            return v, word
        if len(word) >= max_iters:
            raise IterationCapError(max_iters, word)
        t = cfg.slope(v)
        rho = min(walls, key=lambda r: (abs(cfg.perp_slope(r) - t), r.coords))
        v = weyl_reflect(v, rho)
        word.append(rho)


# --- chambers ----------------------------------------------------------------

@dataclass(frozen=True)
class Chamber:
    sector: ConeSector
    contains_g: bool

    @property
    def boundary_squares(self) -> tuple[int | None, int | None]:
        return self.sector.ray_lo.square, self.sector.ray_hi.square


@dataclass(frozen=True)
class ChamberDecomposition:
    domain: ConeSector
    chambers: tuple[Chamber, ...]
    walls: tuple[LatticeVector, ...]
    truncated_lo: bool = False
    truncated_hi: bool = False


def _inner_walls(cfg: Rank2Config, domain: ConeSector, bound: int) -> dict[Fraction, LatticeVector]:
    walls = {}
    for e in _e_vectors(cfg, bound):
        if e.kind != "minus10_div2":
            continue
        t = Slope.of(cfg.perp_slope(e.vector))
        if domain.ray_lo.slope < t < domain.ray_hi.slope:
            walls.setdefault(t.rational, e.vector)
    return walls


def chambers(cfg: Rank2Config, bound: int = DEFAULT_BOUND) -> ChamberDecomposition:
    """Subdivide the fundamental domain by the hyperplanes of (-10)-classes.

    Walls accumulating at an irrational boundary of the domain cannot all be
    listed; new walls that appear at ``2 * bound`` only beyond the outermost
    known wall next to such a boundary are reported through ``truncated_*``.
    Any other change between the two bounds is an instability.
    """
    domain = fundamental_domain(cfg, bound)
    walls = _inner_walls(cfg, domain, bound)
    wider = _inner_walls(cfg, domain, 2 * bound)
    new = set(wider) - set(walls)
    lost = set(walls) - set(wider)
    top = max(walls, default=Fraction(0))
    bottom = min(walls, default=Fraction(0))
    trunc_lo = trunc_hi = False
    for t in sorted(new):
        if t > top and domain.ray_hi.vector is None:
            trunc_hi = True
        elif t < bottom and domain.ray_lo.vector is None:
            trunc_lo = True
        else:
            raise InstabilityError("(-10)-walls inside the fundamental domain", bound, f"new wall at slope {t}")
    if lost:
        raise InstabilityError("(-10)-walls inside the fundamental domain", bound)

    slopes = sorted(walls)
    rays = [domain.ray_lo] + [_wall_ray(cfg, walls[t]) for t in slopes] + [domain.ray_hi]
    out = []
    for i in range(len(rays) - 1):
        lo_closed = domain.lo_closed if i == 0 else False
        hi_closed = domain.hi_closed if i == len(rays) - 2 else False
        sector = ConeSector(rays[i], rays[i + 1], lo_closed, hi_closed)
        out.append(Chamber(sector, sector.contains(cfg, cfg.gv)))
    return ChamberDecomposition(domain, tuple(out), tuple(walls[t] for t in slopes), trunc_lo, trunc_hi)


def square_zero_classes(cfg: Rank2Config) -> list[LatticeVector]:
    """Primitive integral isotropic classes with ``(v, g) > 0`` (none if ``-det`` is not a square)."""
    if cfg.sigma is None:
        return []
    return [cfg.vector(*_boundary_ray(cfg, s).vector) for s in (-1, 1)]


# --- the effective monoid ------------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    """Result of the splitting search.  ``witness`` holds ``(A, B)`` as rational
    coordinate pairs; ``complete`` is False if the search box was clipped to ``bound``."""

    decomposable: bool
    witness: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]] | None
    complete: bool
    curve: tuple[Fraction, Fraction]


def _curve_coords(cfg: Rank2Config, v: LatticeVector) -> tuple[Fraction, Fraction]:
    """Curve class attached to ``v``: ``rho / div(rho)`` for primitive ``rho``,
    and ``k`` times that for ``v = k rho``."""
    k = gcd(*v.coords)
    rho = cfg.vector(*(c // k for c in v.coords))
    d = divisibility(rho, cfg.profile)
    return tuple(Fraction(k * c, d) for c in rho.coords)


def is_decomposable_in_monoid(cfg: Rank2Config, v, bound: int = DEFAULT_BOUND) -> Decomposition:
    """Search for ``R = A + B`` with ``A, B`` nonzero integral points of ``N_E``.

    ``R`` is the curve class of ``v`` (see :func:`_curve_coords`); integral
    curve classes are ``sum (n_i / d_i) b_i`` with ``d`` the divisibility
    profile.  Any nonzero point of the closed cone has ``(., g) > 0``, so ``A``
    ranges over a bounded parallelogram; it is searched exhaustively.
    """
    v = cfg._as_vector(v)
    if v.is_zero() or pair(v, cfg.gv) <= 0:
        raise LatticeError(f"{v.coords} is not in the positive halfspace")
    R = _curve_coords(cfg, v)
    lo, hi = _stable_extremes(cfg, bound)
    lo_s = Slope.of(cfg.slope(lo.vector)) if lo else Slope.edge(cfg, -1)
    hi_s = Slope.of(cfg.slope(hi.vector)) if hi else Slope.edge(cfg, 1)

    gp = cfg.lattice.pairing_vector(cfg.g)
    hp = cfg.lattice.pairing_vector(cfg.hv.coords)

    def pg(x):
        return x[0] * gp[0] + x[1] * gp[1]

    def ph(x):
        return x[0] * hp[0] + x[1] * hp[1]

    def in_cone(x):
        p = pg(x)
        if p <= 0:
            return False
        s = Slope.of(ph(x) / p)
        return not (s < lo_s) and not (hi_s < s)

    if not in_cone(R):
        return Decomposition(False, None, True, R)
    # bound on |slope| over the cone, rational and at least as large
    def upper(s: Slope) -> Fraction:
        if s.rational is not None:
            return abs(s.rational)
        return Fraction(isqrt(ceil(s.sigma_sq)) + 1)

    S = max(upper(lo_s), upper(hi_s))
    P = pg(R)
    mi = cfg._m_inverse
    d = cfg.profile.divisors
    full = [ceil(di * (abs(row[0]) * P + abs(row[1]) * S * P)) for di, row in zip(d, mi)]
    box = [min(b, bound * di) for b, di in zip(full, d)]
    complete = box == full
    for n0 in range(-box[0], box[0] + 1):
        for n1 in range(-box[1], box[1] + 1):
            A = (Fraction(n0, d[0]), Fraction(n1, d[1]))
            if A == (0, 0) or A == R:
                continue
            B = (R[0] - A[0], R[1] - A[1])
            if in_cone(A) and in_cone(B):
                return Decomposition(True, (A, B), complete, R)
    return Decomposition(False, None, complete, R)
