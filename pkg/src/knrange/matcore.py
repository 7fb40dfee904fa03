"""Dense complex matrix primitives: Kronecker products, transposition variants,
Hermitian eigendecomposition, seeded random sampling, and the matrix JSON format.

Convention fixed here once and relied on everywhere else (in particular by the
map-matrix machinery in :mod:`knrange.maps`):

    vec stacks COLUMNS:  vec(X)[j*d + i] = X[i, j].

All functions treat matrices as immutable values and return fresh arrays.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

# Relative tolerance for "is this matrix Hermitian" gates.
HERMITICITY_RTOL = 1e-10
# Relative tolerance on the eigendecomposition reconstruction contract.
RECONSTRUCTION_RTOL = 1e-9


def as_matrix(a) -> np.ndarray:
    """Coerce input to a square complex matrix, checking shape and finiteness."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix entries must be finite")
    return m


def max_abs(a: np.ndarray) -> float:
    """Entrywise max-modulus norm; 0.0 for empty input."""
    return float(np.max(np.abs(a))) if a.size else 0.0


def hermiticity_defect(a: np.ndarray) -> float:
    """max |a - a*| entrywise."""
    return max_abs(a - a.conj().T)


def is_hermitian(a: np.ndarray, rtol: float = HERMITICITY_RTOL) -> bool:
    return hermiticity_defect(a) <= rtol * (1.0 + max_abs(a))


@dataclass(frozen=True)
class BipartiteShape:
    """Tensor-factor dimensions (m, n) and range index k, with 1 <= k <= mn - 1.

    k = mn is excluded: the mn-numerical range is the singleton {tr/mn} and
    every trace-preserving map trivially preserves it.
    """

    m: int
    n: int
    k: int

    def __post_init__(self):
        if not (isinstance(self.m, int) and isinstance(self.n, int) and isinstance(self.k, int)):
            raise ValueError("m, n, k must be integers")
        if self.m < 2 or self.n < 2:
            raise ValueError(f"factor dimensions must be >= 2, got m={self.m}, n={self.n}")
        if not 1 <= self.k <= self.m * self.n - 1:
            raise ValueError(f"k must satisfy 1 <= k <= mn-1, got k={self.k} for mn={self.m * self.n}")

    @property
    def dim(self) -> int:
        return self.m * self.n

    @property
    def is_half(self) -> bool:
        """True iff mn = 2k (exact integer test), the shape admitting affine preservers."""
        return self.m * self.n == 2 * self.k


@dataclass(frozen=True)
class HermitianSpectrum:
    """Eigenvalues sorted descending plus the matching orthonormal eigenvector frame.

    frame[:, i] is the unit eigenvector for eigenvalues[i]; the frame is unitary
    and frame @ diag(eigenvalues) @ frame* reconstructs the input.
    """

    eigenvalues: np.ndarray
    frame: np.ndarray


def kron(a, b) -> np.ndarray:
    """Kronecker product: (A x B)[i*n+p, j*n+q] = A[i,j] * B[p,q]."""
    return np.kron(as_matrix(a), as_matrix(b))


def transpose(a) -> np.ndarray:
    return as_matrix(a).T.copy()


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T.copy()


def hermitian_part(a) -> np.ndarray:
    """(A + A*) / 2.

    Exactly Hermitian in floating point: entry (i,j) is the average of a[i,j]
    and conj(a[j,i]), and complex conjugation commutes exactly with IEEE
    addition and halving.
    """
    m = as_matrix(a)
    return (m + m.conj().T) / 2


def partial_transpose(x, shape: BipartiteShape, side: str) -> np.ndarray:
    """Transpose one tensor factor of a bipartite matrix.

    Viewing x as an m x m grid of n x n blocks:
      side="right" transposes each block in place   (A x B -> A x B^t),
      side="left"  swaps block (i,j) with block (j,i) (A x B -> A^t x B).
    """
    m = as_matrix(x)
    if m.shape[0] != shape.dim:
        raise ValueError(f"matrix dim {m.shape[0]} does not match shape m*n={shape.dim}")
    t = m.reshape(shape.m, shape.n, shape.m, shape.n)
    if side == "right":
        t = t.transpose(0, 3, 2, 1)
    elif side == "left":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return t.reshape(shape.dim, shape.dim).copy()


def eig_hermitian(h) -> HermitianSpectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Rejects inputs whose hermiticity defect exceeds the module gate. Equal
    eigenvalues keep the (deterministic) LAPACK ordering, reversed.
    """
    m = as_matrix(h)
    if not is_hermitian(m):
        raise ValueError(
            f"matrix is not Hermitian within tolerance (defect {hermiticity_defect(m):.3e})"
        )
    w, v = np.linalg.eigh(m)
    return HermitianSpectrum(eigenvalues=w[::-1].copy(), frame=v[:, ::-1].copy())


def _ginibre(dim: int, rng: np.random.Generator) -> np.ndarray:
    """dim x dim matrix of independent standard complex Gaussians."""
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)


def random_haar_unitary(dim: int, seed) -> np.ndarray:
    """Haar-distributed unitary: QR of a Ginibre matrix with R's diagonal phases absorbed."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(_ginibre(dim, rng))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian(dim: int, seed) -> np.ndarray:
    """(G + G*) / 2 of a Ginibre matrix; exactly Hermitian, operator norm O(sqrt(dim))."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    return hermitian_part(_ginibre(dim, rng))


def random_complex(dim: int, seed) -> np.ndarray:
    """Ginibre matrix with independent standard complex Gaussian entries."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    return _ginibre(dim, rng)


def is_orthogonal_pair(a, b, tol: float = 1e-10) -> bool:
    """True iff AB* = A*B = 0 up to tol * (1 + |A|_max)(1 + |B|_max)."""
    ma, mb = as_matrix(a), as_matrix(b)
    if ma.shape != mb.shape:
        raise ValueError(f"dimension mismatch: {ma.shape} vs {mb.shape}")
    scale = (1.0 + max_abs(ma)) * (1.0 + max_abs(mb))
    return max_abs(ma @ mb.conj().T) <= tol * scale and max_abs(ma.conj().T @ mb) <= tol * scale


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization: vec(X)[j*d + i] = X[i, j]."""
    return np.ravel(x, order="F")


def unvec(v: np.ndarray, dim: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec` for square matrices."""
    v = np.asarray(v).ravel()
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    if dim * dim != v.size:
        raise ValueError(f"vector of length {v.size} is not a square matrix")
    return v.reshape(dim, dim, order="F").copy()


# ---------------------------------------------------------------------------
# Matrix file format: {"dim": d, "entries": [[re, im], ...]} row-major, d^2 pairs.
# json round-trips finite doubles exactly (repr-based serialization).
# ---------------------------------------------------------------------------

def matrix_to_payload(a) -> dict:
    m = as_matrix(a)
    d = m.shape[0]
    flat = m.reshape(-1)
    return {"dim": d, "entries": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_payload(payload: dict) -> np.ndarray:
    d = payload["dim"]
    entries = payload["entries"]
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"bad dim in matrix payload: {d!r}")
    if len(entries) != d * d:
        raise ValueError(f"expected {d * d} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries], dtype=complex)
    return as_matrix(flat.reshape(d, d))


def save_matrix(a, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_payload(a), fh)


def load_matrix(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return matrix_from_payload(json.load(fh))
