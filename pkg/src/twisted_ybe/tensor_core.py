"""Dense operators on tensor powers of C^N.

Composite indices are big-endian: the basis vector (i_1, ..., i_k) sits at
position sum_m i_m N^(k-m), so the first tensor factor is most significant.
This matches ``numpy.kron`` and is shared by every builder and checker.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

MAX_ARITY = 3
MACHINE_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True, eq=False)
class Operator:
    """Square complex matrix acting on (C^N)^{(x) arity}."""

    matrix: np.ndarray
    local_dim: int
    arity: int

    def __post_init__(self):
        if self.local_dim < 1:
            raise DimensionError(f"local_dim must be positive, got {self.local_dim}")
        if not 1 <= self.arity <= MAX_ARITY:
            raise DimensionError(f"arity must be in 1..{MAX_ARITY}, got {self.arity}")
        m = np.array(self.matrix, dtype=complex)
        size = self.local_dim ** self.arity
        if m.shape != (size, size):
            raise DimensionError(
                f"expected a {size}x{size} matrix for N={self.local_dim}, "
                f"arity={self.arity}; got shape {m.shape}"
            )
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def _compatible(self, other: Operator) -> None:
        if not isinstance(other, Operator):
            raise TypeError(f"expected Operator, got {type(other).__name__}")
        if (self.local_dim, self.arity) != (other.local_dim, other.arity):
            raise DimensionError(
                f"operator mismatch: (N={self.local_dim}, k={self.arity}) vs "
                f"(N={other.local_dim}, k={other.arity})"
            )

    def _like(self, matrix) -> Operator:
        return Operator(matrix, self.local_dim, self.arity)

    def __matmul__(self, other: Operator) -> Operator:
        self._compatible(other)
        return self._like(self.matrix @ other.matrix)

    def __add__(self, other: Operator) -> Operator:
        self._compatible(other)
        return self._like(self.matrix + other.matrix)

    def __sub__(self, other: Operator) -> Operator:
        self._compatible(other)
        return self._like(self.matrix - other.matrix)

    def __neg__(self) -> Operator:
        return self._like(-self.matrix)

    def __mul__(self, scalar) -> Operator:
        if isinstance(scalar, Operator):
            raise TypeError("use @ for operator products")
        return self._like(complex(scalar) * self.matrix)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> Operator:
        return self._like(self.matrix / complex(scalar))

    def __pow__(self, n: int) -> Operator:
        return self._like(np.linalg.matrix_power(self.matrix, n))

    def dagger(self) -> Operator:
        return self._like(self.matrix.conj().T)

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix))

    def with_entry(self, row: int, col: int, delta) -> Operator:
        """Copy with ``delta`` added to a single entry (used for negative controls)."""
        m = np.array(self.matrix)
        m[row, col] += delta
        return self._like(m)


def identity(N: int, arity: int = 1) -> Operator:
    return Operator(np.eye(N**arity, dtype=complex), N, arity)


def scalar_identity(c, N: int, arity: int = 1) -> Operator:
    return complex(c) * identity(N, arity)


def matrix_unit(N: int, i: int, j: int) -> Operator:
    """E_ij with zero-based indices: E_ij E_kl = delta_jk E_il."""
    m = np.zeros((N, N), dtype=complex)
    m[i, j] = 1.0
    return Operator(m, N, 1)


def kron(A: Operator, B: Operator) -> Operator:
    if A.local_dim != B.local_dim:
        raise DimensionError(f"local_dim mismatch: {A.local_dim} vs {B.local_dim}")
    if A.arity + B.arity > MAX_ARITY:
        raise DimensionError(
            f"arity overflow: {A.arity} + {B.arity} exceeds {MAX_ARITY}"
        )
    return Operator(np.kron(A.matrix, B.matrix), A.local_dim, A.arity + B.arity)


def permutation(N: int) -> Operator:
    """Flip operator P_12 with entries[(i,j),(k,l)] = delta_il delta_jk."""
    if N < 1:
        raise DimensionError(f"N must be >= 1, got {N}")
    m = np.zeros((N * N, N * N), dtype=complex)
    for i in range(N):
        for j in range(N):
            m[i * N + j, j * N + i] = 1.0
    return Operator(m, N, 2)


def embed(A: Operator, slot: str | int, N: int) -> Operator:
    """Place a two-site operator on factors 12 or 23 of a three-fold product."""
    if A.arity != 2:
        raise DimensionError(f"embed expects an arity-2 operator, got arity {A.arity}")
    if A.local_dim != N:
        raise DimensionError(f"local_dim {A.local_dim} does not match N={N}")
    slot = str(slot)
    if slot == "12":
        return kron(A, identity(N))
    if slot == "23":
        return kron(identity(N), A)
    raise ValueError(f"slot must be '12' or '23', got {slot!r}")


@dataclass(frozen=True)
class Residual:
    absolute: float
    relative: float


DEGENERATE_RTOL = 1e-10


def residual(A: Operator | np.ndarray, B: Operator | np.ndarray,
             reference: float | None = None) -> Residual:
    """Frobenius distance, plus the same scaled by the larger operand norm.

    ``reference`` is the natural size of the compared expressions (for a
    product identity, the product of its factor norms). When both sides are
    below ``DEGENERATE_RTOL * reference`` the identity has collapsed to 0 = 0
    and the distance is measured against ``reference`` instead.
    """
    a = A.matrix if isinstance(A, Operator) else np.asarray(A, dtype=complex)
    b = B.matrix if isinstance(B, Operator) else np.asarray(B, dtype=complex)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    absolute = float(np.linalg.norm(a - b))
    scale = max(float(np.linalg.norm(a)), float(np.linalg.norm(b)))
    if reference is not None and scale < DEGENERATE_RTOL * reference:
        scale = reference
    relative = absolute / scale if scale >= MACHINE_EPS else absolute
    return Residual(absolute, relative)
