"""Momenta, the Planck constant and discrete shifts.

Conjugating a momentum-dependent matrix by exp(i x_k) moves p_k to p_k + h and
leaves the other momenta alone. The position operators themselves are never
materialised: every twisted identity is evaluated at concrete shifted momenta.
Indices are zero-based throughout the package.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .errors import SamplingError

if TYPE_CHECKING:
    from .coefficients import BZero, GradingSignature

TRACELESS_TOL = 1e-12
MAX_SAMPLING_ATTEMPTS = 10_000


@dataclass(frozen=True)
class Momentum:
    p: tuple[float, ...]
    h: float
    traceless: bool = False

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(float(x) for x in self.p))
        if not self.h > 0:
            raise ValueError(f"h must be positive, got {self.h}")
        if self.traceless and abs(math.fsum(self.p)) >= TRACELESS_TOL:
            raise ValueError(f"traceless momentum has sum {math.fsum(self.p):.3e}")

    @property
    def N(self) -> int:
        return len(self.p)

    def scaled(self, factor: float) -> Momentum:
        """Rescale momenta and h together (p/h ratios are unchanged)."""
        return Momentum(tuple(factor * x for x in self.p), factor * self.h, self.traceless)

    def describe(self) -> str:
        return "p=[" + ",".join(f"{x:.17g}" for x in self.p) + f"];h={self.h:.17g}"


def shift(m: Momentum, k: int, steps: int = 1) -> Momentum:
    """Return ``m`` with p_k -> p_k + steps*h; the traceless flag is dropped."""
    if not 0 <= k < m.N:
        raise IndexError(f"momentum index {k} out of range for N={m.N}")
    p = list(m.p)
    p[k] = p[k] + steps * m.h
    return Momentum(tuple(p), m.h, traceless=False)


def _dist_to_lattice(x: float, h: float) -> float:
    r = math.remainder(x, h)
    return abs(r)


def random_generic(N: int, h: float, seed, scale: float = 1.0) -> Momentum:
    """Deterministic momenta in generic position.

    Every p_i - p_j and p_i + p_j (i != j) stays at least h/10 away from hZ.
    Integer shifts move these combinations by multiples of h, so the same
    margin holds at every point reachable by shifts.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not (h > 0 and scale > 0):
        raise ValueError("h and scale must be positive")
    rng = np.random.default_rng(seed)
    margin = h / 10
    for _ in range(MAX_SAMPLING_ATTEMPTS):
        p = rng.uniform(-scale, scale, size=N)
        if all(
            _dist_to_lattice(p[i] - p[j], h) >= margin
            and _dist_to_lattice(p[i] + p[j], h) >= margin
            for i in range(N)
            for j in range(i + 1, N)
        ):
            return Momentum(tuple(p), h)
    raise SamplingError(
        f"no generic momentum found after {MAX_SAMPLING_ATTEMPTS} draws "
        f"(N={N}, h={h}, scale={scale})"
    )


@dataclass(frozen=True)
class ResonanceReport:
    offending_pairs: tuple[tuple[int, int, str], ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.offending_pairs


def pair_argument(sig: GradingSignature, m: Momentum, i: int, j: int) -> float:
    """The momentum combination b_ij depends on.

    p_i - p_j for two even indices, p_j - p_i for two odd ones and +-(p_i + p_j)
    for mixed gradings.
    """
    s = sig.signs
    return s[i] * m.p[i] - s[j] * m.p[j]


def _nearest_pole_distance(u: float, h: float, log_q: complex, c: complex) -> tuple[float, complex]:
    # zeros of exp(2 u log q / h) - c in the complex u-plane form a lattice
    # u_k = h (Log c + 2 pi i k) / (2 log q)
    base = h * cmath.log(c) / (2 * log_q)
    step = h * 2j * math.pi / (2 * log_q)
    k0 = round(((u - base) / step).real)
    best = None
    for k in (k0 - 1, k0, k0 + 1):
        pole = base + k * step
        d = abs(u - pole)
        if best is None or d < best[0]:
            best = (d, pole)
    return best


def resonance_check(m: Momentum, sig: GradingSignature, margin: float,
                    b0: BZero | None = None) -> ResonanceReport:
    """Flag pairs whose momentum combination lies within ``margin`` of a pole.

    Without ``b0`` the canonical limit is assumed, whose only poles are the
    zeros of [d]_q. ``margin`` is measured in momentum units.
    """
    if not margin > 0:
        raise ValueError("margin must be positive")
    log_q = cmath.log(sig.q)
    bad = []
    for i in range(m.N):
        for j in range(i + 1, m.N):
            if b0 is None or b0.canonical:
                c = 1.0
            else:
                bij, bji = b0.b0[i, j], b0.b0[j, i]
                if bij == 0 or bji == 0:
                    continue
                c = -bji / bij
            u = pair_argument(sig, m, i, j)
            dist, pole = _nearest_pole_distance(u, m.h, log_q, c)
            if dist < margin:
                bad.append((i, j, f"argument {u / m.h:.6g}h within {dist / m.h:.3g}h "
                                  f"of pole at {pole / m.h:.6g}h"))
    return ResonanceReport(tuple(bad))


def coincidence_check(m: Momentum, margin: float) -> ResonanceReport:
    """Flag coinciding momenta (poles of the rational and classical matrices)."""
    bad = []
    for i in range(m.N):
        for j in range(i + 1, m.N):
            d = abs(m.p[i] - m.p[j])
            if d < margin:
                bad.append((i, j, f"|p_i - p_j| = {d:.3g} below margin"))
    return ResonanceReport(tuple(bad))


def shifted_points(m: Momentum, steps: Sequence[int] = (1,)) -> list[Momentum]:
    """``m`` together with every single-coordinate shift by the given step counts."""
    pts = [m]
    for k in range(m.N):
        for s in steps:
            pts.append(shift(m, k, s))
    return pts
