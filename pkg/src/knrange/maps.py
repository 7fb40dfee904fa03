"""Linear maps on M_{mn} as matrices acting on column-stacked space.

A map Phi is stored as the (mn)^2 x (mn)^2 matrix M with
vec(Phi(X)) = M @ vec(X), using the column-stacking convention declared in
:mod:`knrange.matcore`. The canonical W_k-preserving forms are

    X |-> U varphi(X) U*                      (plain)
    X |-> (tr X / k) I - U varphi(X) U*       (affine, only when mn = 2k)

with varphi one of: identity, full transpose, right partial transpose
(A x B -> A x B^t), left partial transpose (A x B -> A^t x B). The partial
transposes preserve W_k on tensor products exactly when min(m, n) <= 2; they
stay constructible for larger factors so they can serve as negative witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import (
    BipartiteShape,
    as_matrix,
    matrix_from_payload,
    matrix_to_payload,
    max_abs,
    partial_transpose,
    unvec,
    vec,
)

VARPHI_TAGS = ("id", "t", "pt_right", "pt_left")
UNITARITY_TOL = 1e-10


@dataclass(frozen=True)
class CanonicalFormSpec:
    """One canonical form: varphi tag, conjugating unitary, affine flag, shape."""

    varphi: str
    unitary: np.ndarray
    affine: bool
    shape: BipartiteShape

    def __post_init__(self):
        if self.varphi not in VARPHI_TAGS:
            raise ValueError(f"varphi must be one of {VARPHI_TAGS}, got {self.varphi!r}")
        u = as_matrix(self.unitary)
        if u.shape[0] != self.shape.dim:
            raise ValueError(f"unitary dim {u.shape[0]} does not match mn={self.shape.dim}")
        defect = max_abs(u.conj().T @ u - np.eye(self.shape.dim))
        if defect > UNITARITY_TOL:
            raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
        if self.affine and not self.shape.is_half:
            raise ValueError(
                f"affine form requires mn = 2k, got mn={self.shape.dim}, k={self.shape.k}"
            )

    @property
    def is_preserver_form(self) -> bool:
        """Whether this form genuinely preserves W_k on tensor products.

        Identity and full transpose always do; the partial transposes only
        when one factor is at most 2x2.
        """
        return self.varphi in ("id", "t") or min(self.shape.m, self.shape.n) <= 2


@dataclass(frozen=True)
class LinearMapMatrix:
    """A general linear map on M_{mn}, shape-tagged."""

    shape: BipartiteShape
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape[0] != self.shape.dim ** 2:
            raise ValueError(
                f"map matrix must be {self.shape.dim ** 2} x {self.shape.dim ** 2}, "
                f"got {m.shape}"
            )


def apply_varphi(x, tag: str, shape: BipartiteShape) -> np.ndarray:
    """Apply one of the four varphi involutions to a single matrix."""
    m = as_matrix(x)
    if tag == "id":
        return m.copy()
    if tag == "t":
        return m.T.copy()
    if tag == "pt_right":
        return partial_transpose(m, shape, "right")
    if tag == "pt_left":
        return partial_transpose(m, shape, "left")
    raise ValueError(f"unknown varphi tag {tag!r}")


def affine_reflect(x, k: int) -> np.ndarray:
    """X |-> (tr X / k) I - X."""
    m = as_matrix(x)
    return (np.trace(m) / k) * np.eye(m.shape[0], dtype=complex) - m


def _map_from_images(image_of_basis, dim: int) -> np.ndarray:
    """Assemble the map matrix column by column over the vec basis E_pq."""
    mat = np.empty((dim * dim, dim * dim), dtype=complex)
    basis = np.zeros((dim, dim), dtype=complex)
    for col in range(dim * dim):
        p, q = col % dim, col // dim  # vec index q*dim + p addresses E_pq
        basis[p, q] = 1.0
        mat[:, col] = vec(image_of_basis(basis))
        basis[p, q] = 0.0
    return mat


def build_canonical(spec: CanonicalFormSpec) -> LinearMapMatrix:
    """Map matrix of a canonical form, exact on every matrix unit by construction."""
    u = as_matrix(spec.unitary)
    uh = u.conj().T
    k = spec.shape.k
    eye = np.eye(spec.shape.dim, dtype=complex)

    def image(x: np.ndarray) -> np.ndarray:
        y = u @ apply_varphi(x, spec.varphi, spec.shape) @ uh
        if spec.affine:
            y = (np.trace(x) / k) * eye - y
        return y

    return LinearMapMatrix(shape=spec.shape, matrix=_map_from_images(image, spec.shape.dim))


def varphi_map(shape: BipartiteShape, tag: str) -> LinearMapMatrix:
    """The bare varphi as a map matrix (U = I, no affine part)."""
    return LinearMapMatrix(
        shape=shape,
        matrix=_map_from_images(lambda x: apply_varphi(x, tag, shape), shape.dim),
    )


def reflect_map(shape: BipartiteShape) -> LinearMapMatrix:
    """X |-> (tr X / k) I - X as a map matrix (no mn = 2k gate: used as a
    composition correction, not as a standalone canonical form)."""
    return LinearMapMatrix(
        shape=shape,
        matrix=_map_from_images(lambda x: affine_reflect(x, shape.k), shape.dim),
    )


def identity_map(shape: BipartiteShape) -> LinearMapMatrix:
    return LinearMapMatrix(shape=shape, matrix=np.eye(shape.dim ** 2, dtype=complex))


def apply_map(phi: LinearMapMatrix, x) -> np.ndarray:
    """unvec(M @ vec(X))."""
    m = as_matrix(x)
    if m.shape[0] != phi.shape.dim:
        raise ValueError(f"matrix dim {m.shape[0]} does not match map dim {phi.shape.dim}")
    return unvec(phi.matrix @ vec(m), phi.shape.dim)


def apply_map_batch(phi: LinearMapMatrix, stack: np.ndarray) -> np.ndarray:
    """Apply the map to a (count, d, d) stack of matrices at once."""
    count, d = stack.shape[0], phi.shape.dim
    vecs = stack.transpose(0, 2, 1).reshape(count, d * d)  # rows are vec(X_t)
    out = vecs @ phi.matrix.T
    return out.reshape(count, d, d).transpose(0, 2, 1)


def compose(outer: LinearMapMatrix, inner: LinearMapMatrix) -> LinearMapMatrix:
    if outer.shape != inner.shape:
        raise ValueError("cannot compose maps with different shapes")
    return LinearMapMatrix(shape=outer.shape, matrix=outer.matrix @ inner.matrix)


def choi_matrix(phi: LinearMapMatrix) -> np.ndarray:
    """sum_{p,q} E_pq x Phi(E_pq), as a (mn)^2 x (mn)^2 matrix.

    For Phi: X -> U X U* this is exactly vec(U) vec(U)* under the
    column-stacking convention: Hermitian, PSD, rank one with eigenvalue mn.
    Computed here as an index reshuffle of the map matrix; with row index
    j*d+i and column index q*d+p, M[(j,i),(q,p)] = Phi(E_pq)[i,j] while the
    Choi entry C[(p,i),(q,j)] equals the same value.
    """
    d = phi.shape.dim
    m4 = phi.matrix.reshape(d, d, d, d)
    return m4.transpose(3, 1, 2, 0).reshape(d * d, d * d).copy()


def map_from_choi(choi: np.ndarray, shape: BipartiteShape) -> LinearMapMatrix:
    """Inverse of :func:`choi_matrix` (the reshuffle is an involution)."""
    d = shape.dim
    c = as_matrix(choi)
    if c.shape[0] != d * d:
        raise ValueError(f"Choi matrix must be {d * d} x {d * d}, got {c.shape}")
    c4 = c.reshape(d, d, d, d)
    return LinearMapMatrix(shape=shape, matrix=c4.transpose(3, 1, 2, 0).reshape(d * d, d * d).copy())


# ---------------------------------------------------------------------------
# File formats.
# Map file:       {"m", "n", "k", "dim": (mn)^2, "entries": [[re, im], ...]}
# Descriptor:     {"varphi": "id|t|pt_right|pt_left", "affine": bool,
#                  "unitary": <matrix payload> or "identity"}
# ---------------------------------------------------------------------------

def map_to_payload(phi: LinearMapMatrix) -> dict:
    payload = matrix_to_payload(phi.matrix)
    return {
        "m": phi.shape.m,
        "n": phi.shape.n,
        "k": phi.shape.k,
        "dim": payload["dim"],
        "entries": payload["entries"],
    }


def map_from_payload(payload: dict) -> LinearMapMatrix:
    shape = BipartiteShape(m=payload["m"], n=payload["n"], k=payload["k"])
    if payload["dim"] != shape.dim ** 2:
        raise ValueError(
            f"declared dim {payload['dim']} does not equal (mn)^2 = {shape.dim ** 2}"
        )
    matrix = matrix_from_payload({"dim": payload["dim"], "entries": payload["entries"]})
    return LinearMapMatrix(shape=shape, matrix=matrix)


def descriptor_to_payload(spec: CanonicalFormSpec) -> dict:
    return {
        "varphi": spec.varphi,
        "affine": spec.affine,
        "unitary": matrix_to_payload(spec.unitary),
    }


def descriptor_from_payload(payload: dict, shape: BipartiteShape) -> CanonicalFormSpec:
    raw = payload["unitary"]
    if raw == "identity":
        unitary = np.eye(shape.dim, dtype=complex)
    else:
        unitary = matrix_from_payload(raw)
    return CanonicalFormSpec(
        varphi=payload["varphi"],
        unitary=unitary,
        affine=bool(payload["affine"]),
        shape=shape,
    )
