"""Dense-matrix helpers for small Hilbert spaces.

Everything here works on bare ndarrays; state classes live one layer up.
All eigenroutines defer to LAPACK via numpy and return spectra in
descending order, which is the convention the rest of the package assumes.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, PartitionError

HERMITICITY_TOL = 1e-8
# rows*cols of a product may not exceed this: side 64 is the package-wide cap
MAX_KRON_ENTRIES = 4096


def kron(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, smallest-index factor leftmost."""
    if not factors:
        raise DomainError("kron needs at least one factor")
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        f = np.asarray(f, dtype=complex)
        if out.size * f.size > MAX_KRON_ENTRIES:
            raise DomainError(
                "kron result would exceed %d entries" % MAX_KRON_ENTRIES
            )
        out = np.kron(out, f)
    return out


def _require_square(mat: np.ndarray, name: str) -> np.ndarray:
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DomainError(f"{name} must be a square matrix, got shape {mat.shape}")
    return mat


def _require_hermitian(mat: np.ndarray, name: str, tol: float = HERMITICITY_TOL) -> None:
    dev = np.max(np.abs(mat - mat.conj().T)) if mat.size else 0.0
    if dev > tol:
        raise DomainError(f"{name} is not Hermitian (max deviation {dev:.3e} > {tol:g})")


def hermitian_eigenvalues(mat: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, descending."""
    mat = _require_square(mat, "matrix")
    _require_hermitian(mat, "matrix")
    return np.linalg.eigvalsh(mat)[::-1]


def hermitian_eigensystem(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(eigenvalues, eigenvectors) of a Hermitian matrix, descending.

    Column k of the returned matrix is the eigenvector for eigenvalue k.
    """
    mat = _require_square(mat, "matrix")
    _require_hermitian(mat, "matrix")
    vals, vecs = np.linalg.eigh(mat)
    return vals[::-1], vecs[:, ::-1]


def psd_sqrt(mat: np.ndarray, *, neg_tol: float = 1e-8) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in [-1e-10, 0) are clamped to zero; anything below -neg_tol
    is a genuine negativity and raises.
    """
    mat = _require_square(mat, "matrix")
    _require_hermitian(mat, "matrix")
    vals, vecs = np.linalg.eigh(mat)
    if vals.size and vals[0] < -neg_tol:
        raise DomainError(
            f"matrix is not positive semidefinite (min eigenvalue {vals[0]:.3e})"
        )
    vals = np.clip(vals, 0.0, None)
    root = (vecs * np.sqrt(vals)) @ vecs.conj().T
    return (root + root.conj().T) / 2.0


def partial_trace(mat: np.ndarray, dims: tuple[int, ...], keep: tuple[int, ...]) -> np.ndarray:
    """Trace out every tensor factor not listed in keep.

    dims gives the local dimension of each factor in tensor order; keep is a
    nonempty proper subset of factor indices (order is preserved as given in
    range order, not keep order).
    """
    mat = _require_square(mat, "matrix")
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise PartitionError(f"dims must be positive, got {dims}")
    total = 1
    for d in dims:
        total *= d
    if total != mat.shape[0]:
        raise PartitionError(
            f"dims {dims} multiply to {total}, but matrix has side {mat.shape[0]}"
        )
    keep_set = sorted(set(int(k) for k in keep))
    n = len(dims)
    if not keep_set:
        raise PartitionError("keep must name at least one subsystem")
    if keep_set[0] < 0 or keep_set[-1] >= n:
        raise PartitionError(f"keep {keep} out of range for {n} subsystems")
    if len(keep_set) == n:
        return np.asarray(mat, dtype=complex).copy()

    tensor = np.asarray(mat, dtype=complex).reshape(dims + dims)
    # einsum with integer subscripts: row axis i gets label i; column axis i
    # reuses label i when traced out, else gets label n+i
    row_labels = list(range(n))
    col_labels = [i if i not in keep_set else n + i for i in range(n)]
    out_labels = [i for i in keep_set] + [n + i for i in keep_set]
    reduced = np.einsum(tensor, row_labels + col_labels, out_labels)
    side = 1
    for i in keep_set:
        side *= dims[i]
    return reduced.reshape(side, side)
