"""Named lattices used throughout, and how their classes are printed.

K3 presets print classes as ``x f - y e`` and cubic presets as ``a g - b tau``,
so the display coordinates of a raw vector ``(x, y)`` are ``(x, -y)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from pathlib import Path

from .beauville import build_beauville_lattice, hilbert_square_picard, section6_presets
from .cone_engine import ConeSector, Rank2Config, Slope
from .cubic import CubicLatticeData, fano_config
from .qlattice import DivisibilityProfile, GramLattice, LatticeError

__all__ = [
    "Display",
    "Preset",
    "REGISTRY",
    "resolve",
    "load_lattice_file",
    "registry_names",
]


@dataclass(frozen=True)
class Display:
    labels: tuple[str, ...]
    variables: tuple[str, ...] = ("x", "y")
    flip: bool = True  # second display coordinate is minus the raw one

    def coords(self, v) -> tuple[int, ...]:
        v = tuple(getattr(v, "coords", v))
        if self.flip and len(v) == 2:
            return (v[0], -v[1])
        return v

    def expr(self, v) -> str:
        """``2f2-3e`` style: positive terms first, unit coefficients dropped."""
        v = tuple(getattr(v, "coords", v))
        terms = [(c, label) for c, label in zip(v, self.labels) if c]
        if not terms:
            return "0"
        terms.sort(key=lambda t: t[0] < 0)
        out = ""
        for i, (c, label) in enumerate(terms):
            mag = "" if abs(c) == 1 else str(abs(c))
            sign = "-" if c < 0 else ("+" if i else "")
            out += f"{sign}{mag}{label}"
        return out

    def linear_form(self, raw: tuple[int, int]) -> str:
        """Print the functional ``raw[0] x + raw[1] y`` (raw coordinates) in display variables."""
        p, q = raw
        if self.flip:
            q = -q
        terms = []
        for c, var in ((p, self.variables[0]), (q, self.variables[1])):
            if c:
                terms.append((c, var))
        if not terms:
            return "0"
        terms.sort(key=lambda t: t[0] < 0)
        out = ""
        for i, (c, var) in enumerate(terms):
            mag = "" if abs(c) == 1 else str(abs(c))
            sign = "-" if c < 0 else ("+" if i else "")
            out += f"{sign}{mag}{var}"
        return out


def _rational_between(lo: Slope, hi: Slope) -> Fraction:
    """A rational slope strictly between two slopes (``lo < hi``)."""
    if lo.rational is not None and hi.rational is not None:
        return (lo.rational + hi.rational) / 2
    a = lo.rational if lo.rational is not None else None
    b = hi.rational if hi.rational is not None else None
    # replace irrational ends by rationals beyond them, then bisect inward
    big = Fraction(int(max(lo.sigma_sq, hi.sigma_sq)) + 1)
    a = -big if a is None else a
    b = big if b is None else b
    while True:
        m = (a + b) / 2
        s = Slope.of(m)
        if lo < s < hi:
            return m
        if not (lo < s):
            a = m
        else:
            b = m


def sector_inequalities(cfg: Rank2Config, sector: ConeSector, display: Display) -> list[str | None]:
    """Boundary inequalities of a sector, one per integral ray (None for irrational rays)."""
    inside = cfg.ray_of_slope(_rational_between(sector.ray_lo.slope, sector.ray_hi.slope))
    out = []
    for ray, closed in ((sector.ray_lo, sector.lo_closed), (sector.ray_hi, sector.hi_closed)):
        if ray.vector is None:
            out.append(None)
            continue
        r0, r1 = ray.vector
        form = (-r1, r0)  # det(r, v)
        if form[0] * inside[0] + form[1] * inside[1] < 0:
            form = (r1, -r0)
        k = gcd(*form)
        form = (form[0] // k, form[1] // k)
        out.append(f"{display.linear_form(form)}{'>=' if closed else '>'}0")
    return out


@dataclass(frozen=True)
class Preset:
    name: str
    lattice: GramLattice
    profile: DivisibilityProfile | None
    display: Display
    config: Rank2Config | None = None
    cubic: CubicLatticeData | None = None
    note: str = ""

    def require_rank2(self) -> Rank2Config:
        if self.config is None:
            raise LatticeError(
                f"'{self.name}' has no rank-2 hyperbolic configuration; "
                "this command needs a polarized rank-2 lattice"
            )
        return self.config


def _k3(n: int, name: str) -> Preset:
    f = f"f{2 * n}" if n > 1 else "f2"
    k3 = GramLattice(((2 * n,),), (f,))
    lattice, profile = hilbert_square_picard(k3)
    # 2f-e for n = 1 (f-e has square 0 there); f-e otherwise
    g = (2, -1) if n == 1 else (1, -1)
    cfg = Rank2Config(lattice, profile, g, name)
    return Preset(name, lattice, profile, Display((f, "e")), cfg)


_CUBIC = {8: (1, 3), 12: (3, 7), 14: (4, 10), 20: (4, 12), 26: (5, 17)}


def _cubic(d: int) -> Preset:
    K = CubicLatticeData(*_CUBIC[d])
    labels = ("g", "v") if d == 20 else ("g", "τ")
    cfg = fano_config(K, f"cubic-{d}", labels)
    return Preset(
        f"cubic-{d}",
        cfg.lattice,
        cfg.profile,
        Display(labels, ("a", "b")),
        cfg,
        K,
        note="divisibility profile (2,1) on (g, tau) is inferred, not stated",
    )


def _sigma() -> dict[str, Preset]:
    out = {}
    for p in section6_presets():
        out[p.name] = Preset(
            p.name, p.lattice, p.profile, Display(p.lattice.basis_labels, ("a", "b"), flip=False),
            note=f"span of ruling classes on the double cover of {p.surface}",
        )
    return out


def _beauville() -> Preset:
    b = build_beauville_lattice()
    return Preset("beauville", b.lattice, b.profile, Display(b.lattice.basis_labels, flip=False))


REGISTRY = {
    "k3-hilb-2": lambda: _k3(1, "k3-hilb-2"),
    "k3-hilb-4": lambda: _k3(2, "k3-hilb-4"),
    "k3-hilb-8": lambda: _k3(4, "k3-hilb-8"),
    "k3-hilb-2n:<n>": None,
    **{f"cubic-{d}": (lambda d=d: _cubic(d)) for d in _CUBIC},
    **{name: (lambda name=name: _sigma()[name]) for name in ("sigma-F0", "sigma-F1", "sigma-F4")},
    "beauville": _beauville,
}


def registry_names() -> list[str]:
    return list(REGISTRY)


def resolve(name: str) -> Preset:
    if name.startswith("k3-hilb-2n:"):
        arg = name.split(":", 1)[1]
        try:
            n = int(arg)
        except ValueError:
            raise LatticeError(f"k3-hilb-2n:<n> needs an integer n, got {arg!r}") from None
        if n < 1:
            raise LatticeError(f"k3-hilb-2n:<n> needs n >= 1, got {n}")
        return _k3(n, name)
    factory = REGISTRY.get(name)
    if factory is None:
        raise LatticeError(f"unknown preset {name!r}; known presets: {', '.join(REGISTRY)}")
    return factory()


def load_lattice_file(path: str | Path, polarization: tuple[int, int] | None = None) -> Preset:
    """Read a lattice from a JSON file ``{"rank", "gram", "labels", "even", "profile"}``."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise LatticeError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LatticeError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise LatticeError(f"{path}: expected a JSON object at top level")
    if "gram" not in data:
        raise LatticeError(f"{path}: missing field 'gram'")
    gram = data["gram"]
    if not isinstance(gram, list) or not all(isinstance(r, list) for r in gram):
        raise LatticeError(f"{path}: field 'gram' must be a list of rows")
    for i, row in enumerate(gram):
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int):
                raise LatticeError(f"{path}: gram entry ({i + 1},{j + 1}) = {x!r} is not an integer")
    rank = data.get("rank", len(gram))
    if rank != len(gram):
        raise LatticeError(f"{path}: field 'rank' is {rank} but 'gram' has {len(gram)} rows")
    labels = tuple(data.get("labels") or ())
    lattice = GramLattice(tuple(tuple(r) for r in gram), labels)
    even = data.get("even")
    if even is not None and bool(even) != lattice.is_even:
        raise LatticeError(f"{path}: field 'even' is {even} but the Gram diagonal says {lattice.is_even}")
    profile = None
    if data.get("profile") is not None:
        profile = DivisibilityProfile(tuple(data["profile"]))
        profile.check_against(lattice)
    display = Display(lattice.basis_labels, flip=False)
    config = None
    if polarization is not None:
        if profile is None:
            raise LatticeError(f"{path}: rank-2 cone commands need a 'profile' field (divisibilities of the basis)")
        config = Rank2Config(lattice, profile, polarization, str(path))
    return Preset(str(path), lattice, profile, display, config)
