"""State containers, a small catalog of named states, and JSON I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PartitionError, StateFormatError
from .linalg import partial_trace

MAX_TOTAL_DIM = 64

_NORM_TOL = 1e-10
_TRACE_TOL = 1e-9
_HERM_TOL = 1e-10
_NEG_EIG_TOL = 1e-9


def _check_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 2 for d in dims):
        raise PartitionError(f"each subsystem needs dimension >= 2, got {dims}")
    total = 1
    for d in dims:
        total *= d
    if total > MAX_TOTAL_DIM:
        raise DomainError(
            f"total dimension {total} exceeds the supported maximum {MAX_TOTAL_DIM}"
        )
    return dims


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PureState:
    """A normalized state vector over an explicit tensor factorization."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        total = int(np.prod(dims))
        if amps.size != total:
            raise PartitionError(
                f"dims {dims} need {total} amplitudes, got {amps.size}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > _NORM_TOL:
            raise DomainError(f"state vector norm is {norm:.12g}, expected 1")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", _freeze(amps))

    @property
    def num_sites(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def to_density(self) -> "DensityMatrix":
        psi = self.amplitudes
        return DensityMatrix(self.dims, np.outer(psi, psi.conj()))

    def reduced(self, keep) -> "DensityMatrix":
        return reduced_density(self, keep)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A density operator over an explicit tensor factorization.

    Construction validates hermiticity, unit trace, and positivity (up to
    small numerical slack); the stored matrix is symmetrized once so later
    spectral calls never see drift.
    """

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        mat = np.asarray(self.matrix, dtype=complex)
        total = int(np.prod(dims))
        if mat.shape != (total, total):
            raise PartitionError(
                f"dims {dims} need a {total}x{total} matrix, got shape {mat.shape}"
            )
        herm_dev = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_dev > _HERM_TOL:
            raise DomainError(
                f"density matrix is not Hermitian (max deviation {herm_dev:.3e})"
            )
        mat = (mat + mat.conj().T) / 2.0
        tr = float(mat.trace().real)
        if abs(tr - 1.0) > _TRACE_TOL:
            raise DomainError(f"density matrix trace is {tr:.12g}, expected 1")
        low = float(np.linalg.eigvalsh(mat)[0])
        if low < -_NEG_EIG_TOL:
            raise DomainError(
                f"density matrix has negative eigenvalue {low:.3e}"
            )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", _freeze(mat))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_sites(self) -> int:
        return len(self.dims)

    def spectrum(self) -> np.ndarray:
        """Eigenvalues, descending."""
        return np.linalg.eigvalsh(self.matrix)[::-1]

    def purity(self) -> float:
        return float(np.vdot(self.matrix, self.matrix).real)

    def rank(self, tol: float = 1e-10) -> int:
        return int(np.sum(self.spectrum() > tol))

    def partial_trace(self, keep) -> "DensityMatrix":
        keep = tuple(int(k) for k in keep)
        reduced = partial_trace(self.matrix, self.dims, keep)
        kept_dims = tuple(self.dims[k] for k in sorted(set(keep)))
        return DensityMatrix(kept_dims, reduced)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """A weighted pure-state ensemble; weights are strictly positive and sum to 1."""

    members: tuple[tuple[float, PureState], ...]

    def __post_init__(self):
        members = tuple((float(w), psi) for w, psi in self.members)
        if not members:
            raise DomainError("a decomposition needs at least one member")
        dims = members[0][1].dims
        for w, psi in members:
            if w <= 0.0:
                raise DomainError(f"decomposition weight {w:.3e} is not positive")
            if psi.dims != dims:
                raise PartitionError("decomposition members disagree on dims")
        total = sum(w for w, _ in members)
        if abs(total - 1.0) > _TRACE_TOL:
            raise DomainError(f"decomposition weights sum to {total:.12g}, expected 1")
        object.__setattr__(self, "members", members)

    @property
    def size(self) -> int:
        return len(self.members)

    def reconstruct(self) -> np.ndarray:
        """Weighted sum of member projectors as a bare ndarray."""
        first = self.members[0][1]
        out = np.zeros((first.dim, first.dim), dtype=complex)
        for w, psi in self.members:
            out += w * np.outer(psi.amplitudes, psi.amplitudes.conj())
        return out


def reduced_density(psi: PureState, keep) -> DensityMatrix:
    """Reduced state of a pure state on the kept subsystems.

    Uses the Gram-matrix route (reshape, then M @ M+), which is cheaper than
    forming the full projector first.
    """
    keep = sorted(set(int(k) for k in keep))
    n = psi.num_sites
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise PartitionError(f"keep {keep} out of range for {n} subsystems")
    if len(keep) == n:
        return psi.to_density()
    drop = [i for i in range(n) if i not in keep]
    tensor = psi.amplitudes.reshape(psi.dims)
    mat = np.transpose(tensor, keep + drop).reshape(
        int(np.prod([psi.dims[i] for i in keep])), -1
    )
    rho = mat @ mat.conj().T
    rho = (rho + rho.conj().T) / 2.0
    return DensityMatrix(tuple(psi.dims[i] for i in keep), rho)


# --- named states -----------------------------------------------------------


def ghz(n: int) -> PureState:
    """n-qubit GHZ state (|0...0> + |1...1>)/sqrt(2)."""
    n = int(n)
    if n < 2 or 2**n > MAX_TOTAL_DIM:
        raise DomainError(f"ghz supports 2..6 qubits, got {n}")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
    return PureState((2,) * n, amps)


def w_state(n: int) -> PureState:
    """n-qubit W state: equal superposition of all single-excitation basis states."""
    n = int(n)
    if n < 2 or 2**n > MAX_TOTAL_DIM:
        raise DomainError(f"w_state supports 2..6 qubits, got {n}")
    amps = np.zeros(2**n, dtype=complex)
    for k in range(n):
        amps[1 << k] = 1.0 / np.sqrt(n)
    return PureState((2,) * n, amps)


def generalized_w(theta: float, phi: float) -> PureState:
    """Two-angle W-class family on three qubits.

    Amplitudes before normalization: sin(theta)cos(phi) on |001>,
    sin(theta)sin(phi) on |010>, cos(phi) on |100>.
    """
    amps = np.zeros(8, dtype=complex)
    amps[1] = np.sin(theta) * np.cos(phi)
    amps[2] = np.sin(theta) * np.sin(phi)
    amps[4] = np.cos(phi)
    norm = np.linalg.norm(amps)
    # sin/cos of the singular angles land at rounding noise, not exact zero,
    # so the cutoff has to sit well above machine epsilon
    if norm < 1e-9:
        raise DomainError(
            f"generalized_w amplitudes vanish at theta={theta!r}, phi={phi!r}"
        )
    return PureState((2, 2, 2), amps / norm)


def example3_state(theta: float) -> PureState:
    """One-parameter 4x2x2 family with a qudit first factor.

    With a = cos(theta), b = sin(theta), the amplitudes are
    (a, b, a, b)/sqrt(2) on basis indices (0, 6, 9, 15).
    """
    a = np.cos(theta)
    b = np.sin(theta)
    amps = np.zeros(16, dtype=complex)
    amps[0] = a
    amps[6] = b
    amps[9] = a
    amps[15] = b
    return PureState((4, 2, 2), amps / np.sqrt(2.0))


def example4_state() -> PureState:
    """Totally antisymmetric three-qutrit singlet."""
    amps = np.zeros(27, dtype=complex)
    for sign, (i, j, k) in (
        (+1, (0, 1, 2)),
        (-1, (0, 2, 1)),
        (+1, (1, 2, 0)),
        (-1, (1, 0, 2)),
        (+1, (2, 0, 1)),
        (-1, (2, 1, 0)),
    ):
        amps[9 * i + 3 * j + k] = sign
    return PureState((3, 3, 3), amps / np.sqrt(6.0))


def example5_state() -> PureState:
    """Fixed 3x2x2 state with a maximally mixed qutrit marginal."""
    amps = np.zeros(12, dtype=complex)
    amps[2] = np.sqrt(2.0)
    amps[5] = np.sqrt(2.0)
    amps[8] = 1.0
    amps[11] = 1.0
    return PureState((3, 2, 2), amps / np.sqrt(6.0))


def random_pure_state(dims, rng: np.random.Generator) -> PureState:
    dims = _check_dims(dims)
    total = int(np.prod(dims))
    amps = rng.standard_normal(total) + 1j * rng.standard_normal(total)
    return PureState(dims, amps / np.linalg.norm(amps))


# --- JSON serialization ------------------------------------------------------

_IO_NORM_TOL = 1e-6
_IO_HERM_TOL = 1e-8


def _pairs_to_complex(data, where: str) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise StateFormatError(f"{where}: entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _complex_to_pairs(arr: np.ndarray):
    stacked = np.stack([arr.real, arr.imag], axis=-1)
    return stacked.tolist()


def load_state(path: str):
    """Read a PureState or DensityMatrix from a JSON file.

    The file must carry "dims" plus either "amplitudes" (vector of [re, im]
    pairs) or "matrix" (square array of [re, im] pairs). Norm or trace may be
    off by at most 1e-6 and is silently renormalized inside that slack.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise StateFormatError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(payload, dict):
        raise StateFormatError(f"{path}: top level must be a JSON object")
    if "dims" not in payload:
        raise StateFormatError(f"{path}: missing required key 'dims'")
    try:
        dims = tuple(int(d) for d in payload["dims"])
    except (TypeError, ValueError) as exc:
        raise StateFormatError(f"{path}: 'dims' must be a list of integers") from exc

    has_amp = "amplitudes" in payload
    has_mat = "matrix" in payload
    if has_amp == has_mat:
        raise StateFormatError(
            f"{path}: exactly one of 'amplitudes' or 'matrix' is required"
        )

    if has_amp:
        try:
            amps = _pairs_to_complex(payload["amplitudes"], f"{path}: amplitudes")
        except (ValueError, TypeError) as exc:
            raise StateFormatError(f"{path}: malformed amplitudes: {exc}") from exc
        if amps.ndim != 1:
            raise StateFormatError(f"{path}: amplitudes must be a flat list")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > _IO_NORM_TOL:
            raise StateFormatError(
                f"{path}: state norm is {norm:.9g}, beyond the 1e-6 repair slack"
            )
        if norm == 0.0:
            raise StateFormatError(f"{path}: amplitudes are all zero")
        try:
            return PureState(dims, amps / norm)
        except (DomainError, PartitionError) as exc:
            raise StateFormatError(f"{path}: {exc}") from exc

    try:
        mat = _pairs_to_complex(payload["matrix"], f"{path}: matrix")
    except (ValueError, TypeError) as exc:
        raise StateFormatError(f"{path}: malformed matrix: {exc}") from exc
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise StateFormatError(f"{path}: matrix must be square, got shape {mat.shape}")
    herm_dev = float(np.max(np.abs(mat - mat.conj().T)))
    if herm_dev > _IO_HERM_TOL:
        raise StateFormatError(
            f"{path}: matrix is not Hermitian (max deviation {herm_dev:.3e})"
        )
    mat = (mat + mat.conj().T) / 2.0
    tr = float(mat.trace().real)
    if abs(tr - 1.0) > _IO_NORM_TOL:
        raise StateFormatError(
            f"{path}: matrix trace is {tr:.9g}, beyond the 1e-6 repair slack"
        )
    if tr <= 0.0:
        raise StateFormatError(f"{path}: matrix trace must be positive")
    try:
        return DensityMatrix(dims, mat / tr)
    except (DomainError, PartitionError) as exc:
        raise StateFormatError(f"{path}: {exc}") from exc


def save_state(state, path: str) -> None:
    """Write a PureState or DensityMatrix as JSON (the format load_state reads)."""
    if isinstance(state, PureState):
        payload = {
            "dims": list(state.dims),
            "amplitudes": _complex_to_pairs(state.amplitudes),
        }
    elif isinstance(state, DensityMatrix):
        payload = {
            "dims": list(state.dims),
            "matrix": _complex_to_pairs(state.matrix),
        }
    else:
        raise TypeError(f"cannot serialize {type(state).__name__}")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")
