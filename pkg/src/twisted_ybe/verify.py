"""Residual checkers for the Hecke, braid and twisted Yang-Baxter identities.

Twisted identities are evaluated after conjugation by Q_3: a factor acting on
spaces 1,2 becomes the block-diagonal operator sum_c F(p + h e_c) (x) E_cc,
while factors on spaces 2,3 are evaluated at the unshifted momentum. The
checkers raise only on malformed input (including poles); a failing identity
is reported, never raised.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .coefficients import CoefficientScheme, _fmt_c
from .momentum import Momentum, pair_argument, shift
from .reports import CheckReport, combine
from .rmatrix import Builder, build_baxterized, build_dynamical_r, build_yangian_base, sl_factor
from .tensor_core import Operator, embed, identity, kron, matrix_unit, permutation, residual

DEFAULT_TOL = 1e-9


def describe_builder(builder) -> str:
    desc = getattr(builder, "describe", None)
    if callable(desc):
        return desc()
    return getattr(builder, "__name__", type(builder).__name__)


def shifted_embed(builder: Builder, m: Momentum) -> Operator:
    """sum_c builder(p + h e_c) (x) E_cc: the 12-factor conjugated by Q_3."""
    N = m.N
    out = np.zeros((N**3, N**3), dtype=complex)
    for c in range(N):
        block = builder(shift(m, c, 1))
        out += np.kron(block.matrix, matrix_unit(N, c, c).matrix)
    return Operator(out, N, 3)


def _twisted_pair(builder: Builder, m: Momentum) -> tuple[Operator, Operator]:
    S = shifted_embed(builder, m)
    T = embed(builder(m), "23", m.N)
    return S, T


def check_hecke(A: Operator, lam, tol: float = DEFAULT_TOL, factor=1.0,
                name: str = "hecke") -> CheckReport:
    """A^2 = f lam A + f^2, i.e. the Hecke relation for A = f Rhat."""
    f = complex(factor)
    lam = complex(lam)
    rhs = (f * lam) * A + (f * f) * identity(A.local_dim, A.arity)
    digest = f"N={A.local_dim};lam={_fmt_c(lam)};factor={_fmt_c(f)}"
    return CheckReport(name, residual(A @ A, rhs, A.norm() ** 2), tol, digest)


def check_constant_ybe(R: Operator, tol: float = DEFAULT_TOL) -> CheckReport:
    N = R.local_dim
    R1, R2 = embed(R, "12", N), embed(R, "23", N)
    ref = R1.norm() ** 2 * R2.norm()
    return CheckReport("constant_ybe", residual(R1 @ R2 @ R1, R2 @ R1 @ R2, ref), tol, f"N={N}")


def check_dynamical_ybe(builder: Builder, m: Momentum, tol: float = DEFAULT_TOL) -> CheckReport:
    S, T = _twisted_pair(builder, m)
    ref = S.norm() ** 2 * T.norm()
    return CheckReport("dynamical_ybe", residual(S @ T @ S, T @ S @ T, ref), tol,
                       f"{describe_builder(builder)};{m.describe()}")


def check_spectral_dybe(builder: Builder, m: Momentum, y, z, lam,
                        tol: float = DEFAULT_TOL) -> CheckReport:
    """S(y) T(yz) S(z) = T(z) S(yz) T(y) for the baxterized family of ``builder``.

    Baxterization is unchecked here: a corrupted base must produce a reportable
    residual rather than an exception.
    """
    y, z = complex(y), complex(z)
    if y == 0 or z == 0:
        raise ValueError("spectral parameters must be nonzero")
    N = m.N
    base_here = builder(m)
    # the shifted base blocks are shared by all three spectral parameters
    blocks = [builder(shift(m, c, 1)) for c in range(N)]
    units = [matrix_unit(N, c, c).matrix for c in range(N)]

    def S(w):
        out = np.zeros((N**3, N**3), dtype=complex)
        for block, unit in zip(blocks, units):
            out += np.kron(build_baxterized(block, w, lam, check=False).matrix, unit)
        return Operator(out, N, 3)

    def T(w):
        return embed(build_baxterized(base_here, w, lam, check=False), "23", N)

    Sy, Syz, Sz = S(y), S(y * z), S(z)
    Ty, Tyz, Tz = T(y), T(y * z), T(z)
    lhs = Sy @ Tyz @ Sz
    rhs = Tz @ Syz @ Ty
    ref = max(Sy.norm() * Tyz.norm() * Sz.norm(), Tz.norm() * Syz.norm() * Ty.norm())
    digest = f"{describe_builder(builder)};{m.describe()};y={_fmt_c(y)};z={_fmt_c(z)}"
    return CheckReport("spectral_dybe", residual(lhs, rhs, ref), tol, digest)


def check_additive_dybe(m: Momentum, theta, theta2, h: float | None = None,
                        tol: float = DEFAULT_TOL,
                        base_builder: Callable[[Momentum], Operator] | None = None) -> CheckReport:
    """Rational family theta Rhat0(p) - 1 with additive composition theta + theta'."""
    h = m.h if h is None else h
    base_builder = base_builder or (lambda mm: build_yangian_base(mm, h))
    N = m.N
    I2 = identity(N, 2)

    def family(t):
        return lambda mm: complex(t) * base_builder(mm) - I2

    def S(t):
        return shifted_embed(family(t), m)

    def T(t):
        return embed(family(t)(m), "23", N)

    t1, t2 = complex(theta), complex(theta2)
    S1, S12, S2 = S(t1), S(t1 + t2), S(t2)
    T1, T12, T2 = T(t1), T(t1 + t2), T(t2)
    lhs = S1 @ T12 @ S2
    rhs = T2 @ S12 @ T1
    ref = max(S1.norm() * T12.norm() * S2.norm(), T2.norm() * S12.norm() * T1.norm())
    digest = f"rational;{m.describe()};theta={_fmt_c(t1)};theta2={_fmt_c(t2)}"
    return CheckReport("additive_dybe", residual(lhs, rhs, ref), tol, digest)


def check_reflection(builder: Builder, m: Momentum, tol: float = DEFAULT_TOL) -> CheckReport:
    """Both reflection-type relations built from the squares of S and T."""
    S, T = _twisted_pair(builder, m)
    S2, T2 = S @ S, T @ T
    ref = (S.norm() * T.norm()) ** 3
    parts = [
        ("L_left", residual(S2 @ T @ S2 @ T, T @ S2 @ T @ S2, ref)),
        ("L_right", residual(T2 @ S @ T2 @ S, S @ T2 @ S @ T2, ref)),
    ]
    return combine("reflection", parts, tol, f"{describe_builder(builder)};{m.describe()}")


def check_unitarity(base: Operator, y, lam, tol: float = DEFAULT_TOL) -> CheckReport:
    """Rhat(p, y) Rhat(p, 1/y) = lam^2 - (y - 1/y)^2 for the baxterization of ``base``."""
    y = complex(y)
    if y == 0:
        raise ValueError("spectral parameter must be nonzero")
    lam = complex(lam)
    forward = build_baxterized(base, y, lam, check=False)
    backward = build_baxterized(base, 1 / y, lam, check=False)
    c = lam**2 - (y - 1 / y) ** 2
    target = c * identity(base.local_dim, base.arity)
    ref = forward.norm() * backward.norm()
    return CheckReport("unitarity", residual(forward @ backward, target, ref), tol,
                       f"N={base.local_dim};lam={_fmt_c(lam)};y={_fmt_c(y)}")


def hermiticity_domain(scheme: CoefficientScheme, m: Momentum) -> str | None:
    """Reason the hermiticity check does not apply, or None when it does."""
    q = scheme.sig.q
    if scheme.sig.is_super:
        return "claimed for the pure GL/SL grading only"
    if q.imag != 0 or not q.real > 1:
        return f"needs real q > 1, got q={_fmt_c(q)}"
    if scheme.gauge != "unitary":
        return "needs the unitary gauge"
    if not scheme.b0.canonical:
        return "needs the canonical b0 limit"
    for i in range(scheme.N):
        for j in range(i + 1, scheme.N):
            d = pair_argument(scheme.sig, m, i, j) / m.h
            if abs(d) <= 1:
                return f"|d| = {abs(d):.3g} <= 1 for pair ({i},{j}) makes a_ij imaginary"
    return None


def check_hermiticity(scheme: CoefficientScheme, m: Momentum, tol: float = DEFAULT_TOL,
                      builder: Builder | None = None) -> CheckReport:
    """R(p)^dagger = R(p)_21 with R = P Rhat, in the domain where it is claimed."""
    digest = f"{scheme.describe()};{m.describe()}"
    reason = hermiticity_domain(scheme, m)
    if reason is not None:
        return CheckReport.skipped("hermiticity", reason, tol, digest)
    if builder is None:
        f = sl_factor(scheme.N, scheme.sig.q) if scheme.sig.K == scheme.N else 1.0
        Rhat = f * build_dynamical_r(scheme, m)
    else:
        Rhat = builder(m)
    P = permutation(scheme.N)
    R = P @ Rhat
    return CheckReport("hermiticity", residual(R.dagger(), P @ R @ P), tol, digest)


class PerturbedBuilder:
    """Wraps a builder and adds ``delta`` to one entry of every output."""

    def __init__(self, builder: Builder, row: int = 1, col: int = 1, delta=0.05):
        self.builder, self.row, self.col, self.delta = builder, row, col, delta

    def __call__(self, m: Momentum) -> Operator:
        return self.builder(m).with_entry(self.row, self.col, self.delta)

    def describe(self) -> str:
        return f"perturbed({describe_builder(self.builder)};[{self.row},{self.col}]+{self.delta})"


def kron3(A: Operator, B: Operator, C: Operator) -> Operator:
    return kron(kron(A, B), C)
