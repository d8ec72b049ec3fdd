"""Scalar data of the two-parameter ansatz R(p) = a_{i1 i2}(p) flip + b_{i1 i2}(p) diag.

The diagonal flip coefficients a_i are roots of a^2 - lambda a - 1 = 0, i.e.
q for even and -1/q for odd indices. Off-diagonal b_ij(p) come from the
closed-form solution of the shift recursions, parametrised by a constant
matrix b0 (or its canonical limit b0_ij -> infinity for i < j). The a_ij(p)
are fixed by their product a_ij a_ji = 1 + b_ij b_ji up to a gauge.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Literal, Sequence

import numpy as np

from .errors import DegenerateDeformationError, PoleError
from .momentum import Momentum, pair_argument, random_generic, resonance_check, shifted_points
from .reports import CheckReport, combine
from .tensor_core import Residual

LAMBDA_MIN = 1e-14
POLE_RTOL = 1e-13

Gauge = Literal["unitary", "upper_triangular"]
Branch = Literal["graded", "principal"]
GAUGES = ("unitary", "upper_triangular")


def deformation(q) -> complex:
    """lambda = q - 1/q, rejecting q = +-1."""
    q = complex(q)
    if q == 0:
        raise DegenerateDeformationError("q must be nonzero")
    lam = q - 1 / q
    if abs(lam) < LAMBDA_MIN:
        raise DegenerateDeformationError(f"lambda = q - 1/q = {lam} vanishes for q = {q}")
    return lam


def q_bracket(x, q) -> complex:
    """q-number [x]_q = (q^x - q^-x)/(q - q^-1), principal branch of q^x."""
    lam = deformation(q)
    t = complex(x) * cmath.log(complex(q))
    return 2 * cmath.sinh(t) / lam


def principal_power(a, x) -> complex:
    """a^x = exp(x Log a) with the principal logarithm."""
    return cmath.exp(complex(x) * cmath.log(complex(a)))


@dataclass(frozen=True)
class GradingSignature:
    """Per-index choice a_i = q (even, i < K) or a_i = -1/q (odd, i >= K)."""

    N: int
    K: int
    q: complex

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if not 0 <= self.K <= self.N:
            raise ValueError(f"K must lie in 0..N={self.N}, got {self.K}")
        object.__setattr__(self, "q", complex(self.q))
        deformation(self.q)

    @classmethod
    def gl(cls, N: int, q) -> GradingSignature:
        return cls(N, N, q)

    @property
    def lam(self) -> complex:
        return self.q - 1 / self.q

    def grading(self, i: int) -> int:
        return 0 if i < self.K else 1

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(1 - 2 * self.grading(i) for i in range(self.N))

    @property
    def a(self) -> tuple[complex, ...]:
        return tuple(self.q if self.grading(i) == 0 else -1 / self.q for i in range(self.N))

    @property
    def is_super(self) -> bool:
        return 0 < self.K < self.N

    def describe(self) -> str:
        return f"N={self.N};K={self.K};q={_fmt_c(self.q)}"


@dataclass(frozen=True, eq=False)
class BZero:
    """Integration constants b0_ij, or the canonical limit when ``b0`` is None."""

    b0: np.ndarray | None = None
    label: str = ""

    def __post_init__(self):
        if self.b0 is not None:
            m = np.array(self.b0, dtype=complex)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError(f"b0 must be a square matrix, got shape {m.shape}")
            m.setflags(write=False)
            object.__setattr__(self, "b0", m)

    @classmethod
    def canonical_limit(cls) -> BZero:
        return cls(None, "canonical")

    @property
    def canonical(self) -> bool:
        return self.b0 is None

    def describe(self) -> str:
        if self.canonical:
            return "canonical"
        if self.label:
            return self.label
        return "explicit[" + ";".join(
            ",".join(_fmt_c(x) for x in row) for row in self.b0) + "]"


def beta_family(N: int, beta: Sequence, q) -> BZero:
    """b0_ij = lambda beta_i / (beta_i - beta_j), a rational solution of the b0 constraints."""
    lam = deformation(q)
    beta = np.asarray(beta, dtype=complex)
    if beta.shape != (N,):
        raise ValueError(f"need {N} beta values, got {beta.shape}")
    scale = float(np.max(np.abs(beta))) if N else 0.0
    b0 = np.zeros((N, N), dtype=complex)
    for i in range(N):
        for j in range(N):
            if i == j:
                continue
            diff = beta[i] - beta[j]
            if abs(diff) <= 1e-10 * scale or diff == 0:
                raise ValueError(f"beta_{i} and beta_{j} coincide")
            b0[i, j] = lam * beta[i] / diff
    label = "beta[" + ",".join(_fmt_c(x) for x in beta) + "]"
    return BZero(b0, label)


def scalar_residual(lhs, rhs, scale: float | None = None) -> Residual:
    """|lhs - rhs| and its ratio to ``scale`` (default max(|lhs|, |rhs|))."""
    absolute = abs(complex(lhs) - complex(rhs))
    if scale is None:
        scale = max(abs(lhs), abs(rhs))
    relative = absolute / scale if scale >= np.finfo(float).eps else absolute
    return Residual(absolute, relative)


def validate_b0(b0: BZero, q, tol: float = 1e-12) -> CheckReport:
    """Check b0_ii = 0, b0_ij + b0_ji = lambda and the cyclic condition.

    The cyclic sum is measured against max(|lambda|^3, |term1|, |term2|) so that
    large but valid b0 entries are not penalised for cancellation.
    """
    lam = deformation(q)
    name = "validate_b0"
    digest = f"q={_fmt_c(q)};b0={b0.describe()}"
    if b0.canonical:
        return CheckReport(name, Residual(0.0, 0.0), tol, digest)
    m = b0.b0
    N = m.shape[0]
    parts = []
    for i in range(N):
        parts.append((f"diag({i})", scalar_residual(m[i, i], 0.0, abs(lam))))
        for j in range(i + 1, N):
            parts.append((f"sum({i},{j})", scalar_residual(m[i, j] + m[j, i], lam, abs(lam))))
    for i, j, k in permutations(range(N), 3):
        if not i < j < k:
            continue
        t1 = m[i, j] * m[j, k] * m[k, i]
        t2 = m[i, k] * m[k, j] * m[j, i]
        scale = max(abs(lam) ** 3, abs(t1), abs(t2))
        parts.append((f"cyclic({i},{j},{k})", scalar_residual(t1 + t2, 0.0, scale)))
    return combine(name, parts, tol, digest)


@dataclass(frozen=True)
class CoefficientScheme:
    """Everything needed to evaluate a_ij(p) and b_ij(p).

    ``branch`` selects how a_i^{p_i/h} is continued for odd indices. ``graded``
    (default) uses q^{-p/h} for a_i = -1/q, so b_ij is real for real q and
    depends on p_i - p_j (same grading) or p_i + p_j (mixed grading) alone;
    ``principal`` keeps the phase exp(i pi p/h) of the principal logarithm.
    Both branches solve the same shift recursions.
    """

    sig: GradingSignature
    b0: BZero
    gauge: Gauge = "unitary"
    h: float = 1.0
    branch: Branch = "graded"

    def __post_init__(self):
        if self.gauge not in GAUGES:
            raise ValueError(f"gauge must be one of {GAUGES}, got {self.gauge!r}")
        if self.branch not in ("graded", "principal"):
            raise ValueError(f"unknown branch {self.branch!r}")
        if not self.h > 0:
            raise ValueError("h must be positive")
        if not self.b0.canonical and self.b0.b0.shape != (self.sig.N, self.sig.N):
            raise ValueError(
                f"b0 has shape {self.b0.b0.shape}, expected {(self.sig.N, self.sig.N)}")

    @property
    def N(self) -> int:
        return self.sig.N

    @property
    def lam(self) -> complex:
        return self.sig.lam

    def b(self, m: Momentum, i: int, j: int) -> complex:
        return b_of_p(self, m, i, j)

    def a(self, m: Momentum, i: int, j: int) -> complex:
        return a_of_p(self, m, i, j)

    def describe(self) -> str:
        return (f"{self.sig.describe()};h={self.h:.17g};gauge={self.gauge};"
                f"b0={self.b0.describe()};branch={self.branch}")

    def resonance(self, m: Momentum, margin: float):
        return resonance_check(m, self.sig, margin, self.b0)


def _check_momentum(scheme: CoefficientScheme, m: Momentum) -> None:
    if m.N != scheme.N:
        raise ValueError(f"momentum has {m.N} components, scheme has N={scheme.N}")
    if not math.isclose(m.h, scheme.h, rel_tol=1e-12):
        raise ValueError(f"momentum uses h={m.h}, scheme uses h={scheme.h}")


def _weight_sq(scheme: CoefficientScheme, m: Momentum, i: int, j: int) -> complex:
    """(a_i^{p_i/h} a_j^{-p_j/h})^2 in the scheme's branch."""
    h = m.h
    if scheme.branch == "principal":
        a = scheme.sig.a
        A = principal_power(a[i], m.p[i] / h) * principal_power(a[j], -m.p[j] / h)
        return A * A
    u = pair_argument(scheme.sig, m, i, j)
    return cmath.exp(2 * u / h * cmath.log(scheme.sig.q))


def _canonical_b(q, lam, x, pair) -> complex:
    """q^x / [x]_q, written as lambda q^x / (q^x - q^-x)."""
    t = complex(x) * cmath.log(complex(q))
    num = cmath.exp(t)
    den = 2 * cmath.sinh(t)
    if abs(den) <= POLE_RTOL * (abs(num) + abs(1 / num)):
        raise PoleError(f"[x]_q vanishes at x = {x} for pair {pair}", pair)
    return lam * num / den


def b_of_p(scheme: CoefficientScheme, m: Momentum, i: int, j: int) -> complex:
    """Diagonal coefficient b_ij(p) of the ansatz; b_ii = 0."""
    _check_momentum(scheme, m)
    if i == j:
        return 0j
    lam = scheme.lam
    if scheme.b0.canonical and scheme.branch == "graded":
        # q^x/[x]_q for either ordering: b(-x) = lambda - b(x) identically, and
        # evaluating it directly avoids cancellation when b_ji is close to lambda
        u = pair_argument(scheme.sig, m, i, j)
        return _canonical_b(scheme.sig.q, lam, u / m.h, (i, j))
    X = _weight_sq(scheme, m, i, j)
    if scheme.b0.canonical:
        # b0_ij -> infinity with b0_ji / b0_ij -> -1
        num, den = X, X - 1
    else:
        bij, bji = scheme.b0.b0[i, j], scheme.b0.b0[j, i]
        num, den = X * bij, X * bij + bji
    if abs(den) <= POLE_RTOL * (abs(num) + abs(den - num)):
        raise PoleError(f"b_{i}{j} has a pole at {m.describe()}", (i, j))
    return lam * num / den


def flip_product(scheme: CoefficientScheme, m: Momentum, i: int, j: int) -> complex:
    """Required value of a_ij a_ji, namely 1 + b_ij b_ji."""
    lo, hi = min(i, j), max(i, j)
    return 1 + b_of_p(scheme, m, lo, hi) * b_of_p(scheme, m, hi, lo)


def a_of_p(scheme: CoefficientScheme, m: Momentum, i: int, j: int) -> complex:
    """Flip coefficient a_ij(p) in the scheme's gauge; a_ii is the grading root."""
    _check_momentum(scheme, m)
    if i == j:
        return scheme.sig.a[i]
    prod = flip_product(scheme, m, i, j)
    if scheme.gauge == "unitary":
        return cmath.sqrt(prod)
    return prod if i < j else 1.0 + 0j


def _shift2(m: Momentum, i: int, n: int, j: int, k: int) -> Momentum:
    p = list(m.p)
    p[i] += n * m.h
    p[j] += k * m.h
    return Momentum(tuple(p), m.h)


RECURSION_STEPS = ((1, 1), (2, 1), (1, 2), (-1, 1))

BFunc = Callable[[Momentum, int, int], complex]


def check_recursions(scheme: CoefficientScheme, m: Momentum, tol: float = 1e-10,
                     b: BFunc | None = None) -> CheckReport:
    """Compare shifted evaluations of b_ij with the one- and two-step recursions.

    ``b`` overrides the evaluator (e.g. to feed a deliberately corrupted one).
    """
    b = b or scheme.b
    a = scheme.sig.a
    lam = scheme.lam
    parts = []
    for i in range(scheme.N):
        for j in range(scheme.N):
            if i == j:
                continue
            bij = b(m, i, j)
            bji = b(m, j, i)
            ai, aj = a[i], a[j]
            rhs21 = bij * ai / (1 / ai + bij)
            parts.append((f"step_i({i},{j})", scalar_residual(b(_shift2(m, i, 1, j, 0), i, j), rhs21)))
            rhs22 = (bij / aj) / (aj - bij)
            parts.append((f"step_j({i},{j})", scalar_residual(b(_shift2(m, i, 0, j, 1), i, j), rhs22)))
            for n, k in RECURSION_STEPS:
                lhs = b(_shift2(m, i, n, j, k), i, j)
                w, w_inv = ai**n * aj**(-k), ai**(-n) * aj**k
                form1 = w * bij / (w_inv + bij * (w - w_inv) / lam)
                form2 = lam * w * bij / (w * bij + w_inv * bji)
                parts.append((f"nm{n},{k}a({i},{j})", scalar_residual(lhs, form1)))
                parts.append((f"nm{n},{k}b({i},{j})", scalar_residual(lhs, form2)))
    return combine("recursions", parts, tol, f"{scheme.describe()};{m.describe()}")


def check_constraints(scheme: CoefficientScheme, m: Momentum, tol: float = 1e-10) -> CheckReport:
    """Pointwise Hecke-level constraints on the coefficients at one momentum.

    b_ii = 0, b_ij + b_ji = lambda, a_ij a_ji - b_ij b_ji = 1, the quadratic for
    a_i, and the cyclic condition on distinct triples.
    """
    lam = scheme.lam
    N = scheme.N
    B = np.array([[scheme.b(m, i, j) for j in range(N)] for i in range(N)])
    A = np.array([[scheme.a(m, i, j) for j in range(N)] for i in range(N)])
    parts = []
    for i in range(N):
        parts.append((f"b_ii({i})", scalar_residual(B[i, i], 0.0, abs(lam))))
        ai = A[i, i]
        parts.append((f"a_i({i})", scalar_residual(ai * ai - lam * ai, 1.0)))
        for j in range(N):
            if i == j:
                continue
            parts.append((f"sum({i},{j})", scalar_residual(B[i, j] + B[j, i], lam)))
            parts.append((f"prod({i},{j})", scalar_residual(A[i, j] * A[j, i] - B[i, j] * B[j, i], 1.0)))
    for i, j, k in permutations(range(N), 3):
        t1 = B[i, j] * B[j, k] * B[k, i]
        t2 = B[i, k] * B[k, j] * B[j, i]
        scale = max(abs(t1), abs(t2), abs(lam) ** 3)
        parts.append((f"cyclic({i},{j},{k})", scalar_residual(t1 + t2, 0.0, scale)))
    return combine("constraints", parts, tol, f"{scheme.describe()};{m.describe()}")


def nonresonant_momenta(scheme: CoefficientScheme, count: int, seed: int, *,
                        scale: float = 1.0, steps: Sequence[int] = (1, -1, 2, -2),
                        margin: float | None = None) -> list[tuple[Momentum, int]]:
    """Seeded generic momenta that avoid every pole, also after the given shifts.

    Returns (momentum, resample count) pairs. Draw ``k`` uses the seed
    sequence (seed, k, attempt) so results are independent of ``count``.
    """
    h = scheme.h
    margin = h / 10 if margin is None else margin
    out = []
    for k in range(count):
        for attempt in range(1000):
            m = random_generic(scheme.N, h, (seed, k, attempt), scale)
            if all(scheme.resonance(pt, margin).ok for pt in shifted_points(m, steps)):
                out.append((m, attempt))
                break
        else:
            raise PoleError(f"could not avoid resonances for draw {k}")
    return out


def _fmt_c(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.17g}"
    return f"{z.real:.17g}{z.imag:+.17g}j"
