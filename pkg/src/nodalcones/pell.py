"""Solutions of ``2n x^2 - 2y^2 = c`` via the unit group of ``Z[sqrt(n)]``."""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

__all__ = ["PellFamily", "pell_family", "fundamental_unit"]


def _is_square(k: int) -> bool:
    return k >= 0 and isqrt(k) ** 2 == k


def fundamental_unit(n: int) -> tuple[int, int]:
    """Smallest ``(u, w)`` with ``w > 0`` and ``u^2 - n w^2 = 1``, by continued fractions."""
    if n <= 0 or _is_square(n):
        raise ValueError(f"no nontrivial unit for n = {n}")
    a0 = isqrt(n)
    m, d, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    while p * p - n * q * q != 1:
        m = d * a - m
        d = (n - m * m) // d
        a = (a0 + m) // d
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return p, q


@dataclass(frozen=True)
class PellFamily:
    """All integer solutions of ``2n x^2 - 2y^2 = c``.

    ``fundamental`` holds one solution with ``x >= 0, y >= 0`` per orbit of
    ``matrix`` (up to the sign changes ``x -> -x``, ``y -> -y``).  ``matrix``
    acts by ``(x, y) -> (u x + w y, n w x + u y)``; for square ``n`` the unit
    group is trivial and ``matrix`` is the identity.
    """

    n: int
    c: int
    fundamental: tuple[tuple[int, int], ...]
    matrix: tuple[tuple[int, int], tuple[int, int]]

    def apply(self, v: tuple[int, int], inverse: bool = False) -> tuple[int, int]:
        (u, w), (nw, _) = self.matrix
        x, y = v
        if inverse:
            return (u * x - w * y, -nw * x + u * y)
        return (u * x + w * y, nw * x + u * y)

    @property
    def seeds(self) -> tuple[tuple[int, int], ...]:
        """One closed period: each fundamental solution and its first image."""
        out = set(self.fundamental)
        out.update(self.apply(f) for f in self.fundamental)
        return tuple(sorted(out))

    def solutions(self, bound: int) -> list[tuple[int, int]]:
        """Every solution with ``|x|, |y| <= bound``."""
        found = set()
        is_unit = self.matrix != ((1, 0), (0, 1))
        limit = (1 + self.n) * bound * bound
        for fx, fy in self.fundamental:
            for sx in (1, -1):
                for sy in (1, -1):
                    start = (sx * fx, sy * fy)
                    directions = (False, True) if is_unit else (False,)
                    for inverse in directions:
                        v = start
                        prev = None
                        while True:
                            x, y = v
                            if abs(x) <= bound and abs(y) <= bound:
                                found.add(v)
                            if not is_unit:
                                break
                            # y^2 + n x^2 is convex along an orbit; once past the
                            # threshold and growing it never comes back
                            energy = y * y + self.n * x * x
                            if energy > limit and prev is not None and energy > prev:
                                break
                            prev = energy
                            v = self.apply(v, inverse)
        return sorted(found)


def pell_family(n: int, c: int) -> PellFamily:
    if n <= 0:
        raise ValueError(f"n must be positive, got {n}")
    identity = ((1, 0), (0, 1))
    if c % 2:
        return PellFamily(n, c, (), identity)
    N = -c // 2  # y^2 - n x^2 = N
    if _is_square(n):
        k = isqrt(n)
        if N == 0:
            return PellFamily(n, c, ((1, k),), identity)
        sols = []
        # (y - kx)(y + kx) = N
        for a in range(1, abs(N) + 1):
            if N % a:
                continue
            for s in (a, -a):
                t = N // s
                if (s + t) % 2 or (t - s) % (2 * k):
                    continue
                y, x = (s + t) // 2, (t - s) // (2 * k)
                if x >= 0 and y >= 0:
                    sols.append((x, y))
        return PellFamily(n, c, tuple(sorted(set(sols))), identity)
    u, w = fundamental_unit(n)
    matrix = ((u, w), (n * w, u))
    if N == 0:
        return PellFamily(n, c, (), matrix)
    # Nagell's bounds: each class contains a solution with x in this window
    sols = []
    if N > 0:
        x = 0
        while 2 * (u + 1) * x * x <= w * w * N:
            r = N + n * x * x
            if _is_square(r):
                sols.append((x, isqrt(r)))
            x += 1
    else:
        x = 0
        while 2 * (u - 1) * x * x <= w * w * -N:
            r = N + n * x * x
            if r >= 0 and _is_square(r):
                sols.append((x, isqrt(r)))
            x += 1
    return PellFamily(n, c, tuple(sols), matrix)
