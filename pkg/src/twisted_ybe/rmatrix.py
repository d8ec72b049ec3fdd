"""Builders for the constant, dynamical, normalised, super, baxterized and
rational R-matrices.

Every builder returns the braid-form matrix Rhat = P R as an arity-2
:class:`~twisted_ybe.tensor_core.Operator`.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .coefficients import (
    BZero,
    CoefficientScheme,
    GradingSignature,
    _canonical_b,
    _fmt_c,
    deformation,
    principal_power,
    q_bracket,
)
from .errors import DimensionError, PoleError
from .momentum import Momentum
from .tensor_core import Operator, identity, kron, matrix_unit, permutation, residual

Builder = Callable[[Momentum], Operator]

KINDS = (
    "constant_glq",
    "dynamical",
    "dynamical_sl",
    "dynamical_super_sl",
    "baxterized_trig",
    "baxterized_constant",
    "yangian_rational",
    "classical_r0",
)

HECKE_PRECHECK_TOL = 1e-8


def build_constant_r(N: int, q) -> Operator:
    """Drinfeld-Jimbo GL_q(N) matrix in braid form, lambda-part upper triangular."""
    q = complex(q)
    lam = deformation(q)
    R = np.zeros((N * N, N * N), dtype=complex)
    for i in range(N):
        for j in range(N):
            R[i * N + j, i * N + j] = q if i == j else 1.0
            if i < j:
                R[i * N + j, j * N + i] += lam
    return permutation(N) @ Operator(R, N, 2)


def ansatz_matrix(A: np.ndarray, B: np.ndarray) -> Operator:
    """Rhat[(i1,i2),(j1,j2)] = d(i1,j2) d(i2,j1) A[i1,i2] + d(i1,j1) d(i2,j2) B[i1,i2]."""
    N = A.shape[0]
    R = np.zeros((N * N, N * N), dtype=complex)
    for i in range(N):
        for j in range(N):
            R[i * N + j, j * N + i] += A[i, j]
            R[i * N + j, i * N + j] += B[i, j]
    return Operator(R, N, 2)


def coefficient_tables(scheme: CoefficientScheme, m: Momentum) -> tuple[np.ndarray, np.ndarray]:
    N = scheme.N
    B = np.zeros((N, N), dtype=complex)
    A = np.zeros((N, N), dtype=complex)
    for i in range(N):
        for j in range(N):
            B[i, j] = scheme.b(m, i, j)
            A[i, j] = scheme.a(m, i, j)
    return A, B


def build_dynamical_r(scheme: CoefficientScheme, m: Momentum) -> Operator:
    return ansatz_matrix(*coefficient_tables(scheme, m))


def sl_factor(N: int, q) -> complex:
    return principal_power(q, -1.0 / N)


def super_factor(N: int, K: int, q) -> complex:
    if not 1 <= K <= N - 1:
        raise ValueError(f"super normalisation needs 1 <= K <= N-1, got K={K}, N={N}")
    return principal_power(q, 1.0 / (N - K) - 1.0 / K)


def build_dynamical_sl(scheme: CoefficientScheme, m: Momentum) -> Operator:
    """q^{-1/N} times the canonical-limit, unitary-gauge GL_q(N) matrix."""
    if scheme.sig.K != scheme.N:
        raise ValueError("SL_q(N) builder needs a purely even grading (K = N)")
    if not scheme.b0.canonical or scheme.gauge != "unitary":
        raise ValueError("SL_q(N) builder needs the canonical b0 limit in unitary gauge")
    return sl_factor(scheme.N, scheme.sig.q) * build_dynamical_r(scheme, m)


def _bracket_sqrt_ratio(x, q) -> complex:
    # ([x+1]_q [x-1]_q)^{1/2} / [x]_q
    return cmath.sqrt(q_bracket(x + 1, q) * q_bracket(x - 1, q)) / q_bracket(x, q)


def build_super_sl(scheme: CoefficientScheme, m: Momentum) -> Operator:
    """Normalised GL_q(K|N-K) matrix written out sector by sector.

    Diagonal flips carry (-1)^(i) q^{1-2(i)}. Pairs in the same block use
    p_i - p_j, mixed pairs use p_i + p_j. The b(.) terms apply only off the
    diagonal (b_ii = 0). This is evaluated from closed forms, independently
    of the generic coefficient path.
    """
    sig = scheme.sig
    N, K, q = sig.N, sig.K, sig.q
    if not 1 <= K <= N - 1:
        raise ValueError(f"super builder needs 1 <= K <= N-1, got K={K}, N={N}")
    if not scheme.b0.canonical:
        raise ValueError("super builder is defined in the canonical b0 limit")
    if m.N != N:
        raise DimensionError(f"momentum has {m.N} components, expected {N}")
    lam = sig.lam
    h = m.h
    p = m.p
    even = [i < K for i in range(N)]

    def b(x):
        return _canonical_b(q, lam, x / h, None)

    def a(x, eps):
        return _bracket_sqrt_ratio(x / h, q) / eps

    A = np.zeros((N, N), dtype=complex)
    B = np.zeros((N, N), dtype=complex)
    for i in range(N):
        A[i, i] = (-1) ** (1 - even[i]) * q ** (1 - 2 * (1 - even[i]))
        for j in range(N):
            if i == j:
                continue
            eps = 1.0 if i < j else -1.0
            if even[i] and even[j]:
                A[i, j] = a(p[i] - p[j], eps)
                B[i, j] = b(p[i] - p[j])
            elif not even[i] and not even[j]:
                A[i, j] = a(p[i] - p[j], eps)
                B[i, j] = b(p[j] - p[i])
            elif even[i]:
                A[i, j] = a(p[i] + p[j], 1.0)
                B[i, j] = b(p[i] + p[j])
            else:
                A[i, j] = a(p[i] + p[j], 1.0)
                B[i, j] = b(-p[i] - p[j])
    return super_factor(N, K, q) * ansatz_matrix(A, B)


def hecke_inverse(base: Operator, lam, factor=1.0) -> Operator:
    """Inverse of f*Rhat when Rhat^2 = lam Rhat + 1: (base/f - lam)/f."""
    f = complex(factor)
    return (base / f - complex(lam) * identity(base.local_dim, base.arity)) / f


def build_baxterized(base: Operator, y, lam, *, check: bool = True) -> Operator:
    """y^{-1} Rhat - y Rhat^{-1}, with the inverse taken from the Hecke relation."""
    y = complex(y)
    if y == 0:
        raise ValueError("spectral parameter must be nonzero")
    lam = complex(lam)
    I = identity(base.local_dim, base.arity)
    if check:
        r = residual(base @ base, lam * base + I)
        if r.relative > HECKE_PRECHECK_TOL:
            raise ValueError(f"base fails the Hecke relation (relative residual {r.relative:.3e})")
    return base / y - y * hecke_inverse(base, lam)


def spectral_parameter(theta, lam) -> complex:
    """Multiplicative parameter y(theta) = -exp(lambda theta / 2).

    With this choice Rhat(p, y)/lambda tends to theta Rhat0(p) - 1 as q -> 1.
    The unsigned exp(-lambda theta/2) gives theta Rhat0(p) + 1 instead; the two
    families differ by theta -> -theta and an overall sign, which leaves every
    cubic braid-type identity intact.
    """
    return -cmath.exp(complex(lam) * complex(theta) / 2)


def rational_coefficients(m: Momentum, h: float) -> tuple[np.ndarray, np.ndarray]:
    N = m.N
    A = np.eye(N, dtype=complex)
    B = np.zeros((N, N), dtype=complex)
    for i in range(N):
        for j in range(N):
            if i == j:
                continue
            d = m.p[i] - m.p[j]
            if d == 0:
                raise PoleError(f"coincident momenta p_{i} = p_{j}", (i, j))
            B[i, j] = h / d
            A[i, j] = cmath.sqrt(1 - (h / d) ** 2)
    return A, B


def build_yangian_base(m: Momentum, h: float | None = None) -> Operator:
    """Rhat0(p): ansatz with a_ii = 1, b_ij = h/(p_i - p_j), a_ij = a_ji = sqrt(1 - b_ij^2)."""
    h = m.h if h is None else h
    return ansatz_matrix(*rational_coefficients(m, h))


def build_yangian_r(m: Momentum, theta, h: float | None = None) -> Operator:
    R0 = build_yangian_base(m, h)
    return complex(theta) * R0 - identity(m.N, 2)


def build_classical_r0(m: Momentum) -> Operator:
    """sum_{j<k} i/(p_j - p_k) (E_jk (x) E_kj - E_kj (x) E_jk)."""
    N = m.N
    out = np.zeros((N * N, N * N), dtype=complex)
    for j in range(N):
        for k in range(j + 1, N):
            d = m.p[j] - m.p[k]
            if d == 0:
                raise PoleError(f"coincident momenta p_{j} = p_{k}", (j, k))
            term = (kron(matrix_unit(N, j, k), matrix_unit(N, k, j))
                    - kron(matrix_unit(N, k, j), matrix_unit(N, j, k)))
            out += (1j / d) * term.matrix
    return Operator(out, N, 2)


@dataclass(frozen=True)
class RMatrixSpec:
    """A named, momentum-dependent R-matrix family usable as a builder.

    ``factor`` is the scalar normalisation f; a normalised Hecke matrix obeys
    (f Rhat)^2 = f lam (f Rhat) + f^2.
    """

    kind: str
    N: int
    q: complex | None = None
    scheme: CoefficientScheme | None = None
    y: complex | None = None
    theta: complex | None = None
    h: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.scheme is not None:
            if self.scheme.N != self.N:
                raise ValueError("scheme dimension does not match N")
            if self.q is None:
                object.__setattr__(self, "q", self.scheme.sig.q)
        if self.kind == "dynamical_super_sl":
            K = self.scheme.sig.K if self.scheme else -1
            if not 1 <= K <= self.N - 1:
                raise ValueError("dynamical_super_sl requires 1 <= K <= N-1")
        if self.kind in ("dynamical", "dynamical_sl", "dynamical_super_sl", "baxterized_trig") \
                and self.scheme is None:
            raise ValueError(f"kind {self.kind} needs a coefficient scheme")
        if self.kind in ("baxterized_trig", "baxterized_constant") and self.y is None:
            raise ValueError(f"kind {self.kind} needs a spectral parameter y")
        if self.kind == "yangian_rational" and self.theta is None:
            raise ValueError("yangian_rational needs theta")

    @property
    def lam(self) -> complex:
        return 0j if self.kind in ("yangian_rational", "classical_r0") else deformation(self.q)

    @property
    def factor(self) -> complex:
        if self.kind == "dynamical_sl":
            return sl_factor(self.N, self.q)
        if self.kind == "dynamical_super_sl":
            return super_factor(self.N, self.scheme.sig.K, self.q)
        return 1.0 + 0j

    def describe(self) -> str:
        parts = [self.kind, f"N={self.N}"]
        if self.scheme is not None:
            parts.append(self.scheme.describe())
        elif self.q is not None:
            parts.append(f"q={_fmt_c(self.q)}")
        if self.y is not None:
            parts.append(f"y={_fmt_c(self.y)}")
        if self.theta is not None:
            parts.append(f"theta={_fmt_c(self.theta)}")
        return ";".join(parts)

    def __call__(self, m: Momentum) -> Operator:
        k = self.kind
        if k == "constant_glq":
            return build_constant_r(self.N, self.q)
        if k == "dynamical":
            return build_dynamical_r(self.scheme, m)
        if k == "dynamical_sl":
            return build_dynamical_sl(self.scheme, m)
        if k == "dynamical_super_sl":
            return build_super_sl(self.scheme, m)
        if k == "baxterized_trig":
            return build_baxterized(build_dynamical_r(self.scheme, m), self.y, self.lam)
        if k == "baxterized_constant":
            return build_baxterized(build_constant_r(self.N, self.q), self.y, self.lam)
        if k == "yangian_rational":
            return build_yangian_r(m, self.theta, self.h)
        return build_classical_r0(m)


def gl_scheme(N: int, q, h: float, gauge="unitary", b0: BZero | None = None, K: int | None = None,
              branch="graded") -> CoefficientScheme:
    """Convenience constructor; K defaults to N (pure GL grading)."""
    sig = GradingSignature(N, N if K is None else K, q)
    return CoefficientScheme(sig, b0 or BZero.canonical_limit(), gauge, h, branch)
