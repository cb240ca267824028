"""Entropies, concurrence, and the Tsallis entanglement measure.

The central scalar function maps a squared concurrence x to the Tsallis-q
entropy of the two-eigenvalue spectrum {(1+sqrt(1-x))/2, (1-sqrt(1-x))/2}.
For q = 1 (exactly) every entropy in this module degrades gracefully to the
von Neumann form with natural logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, QRangeError
from .linalg import hermitian_eigenvalues, kron, psd_sqrt
from .qstate import DensityMatrix, PureState

# closed-form two-qubit window: roots of q^2 - 5q + 3
ANALYTIC_Q_MIN = (5.0 - math.sqrt(13.0)) / 2.0
ANALYTIC_Q_MAX = (5.0 + math.sqrt(13.0)) / 2.0

_EDGE = 1e-12

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_FLIP = kron(_SIGMA_Y, _SIGMA_Y)


@dataclass(frozen=True)
class QParam:
    """Entropic order q with the range predicates the package keys off."""

    q: float

    def __post_init__(self):
        q = float(self.q)
        if not math.isfinite(q) or q <= 0.0:
            raise QRangeError(f"entropic order must be finite and positive, got {self.q!r}")
        object.__setattr__(self, "q", q)

    @property
    def is_von_neumann(self) -> bool:
        return self.q == 1.0

    @property
    def analytic_two_qubit(self) -> bool:
        """True where mixed two-qubit TEE is an exact function of concurrence."""
        return ANALYTIC_Q_MIN - _EDGE <= self.q <= ANALYTIC_Q_MAX + _EDGE

    @property
    def concave_regime(self) -> bool:
        """True where the measure is concave in the squared concurrence."""
        q = self.q
        return (ANALYTIC_Q_MIN - _EDGE <= q <= 2.0 + _EDGE) or (
            3.0 - _EDGE <= q <= ANALYTIC_Q_MAX + _EDGE
        )


def as_q(q) -> QParam:
    """Coerce a number (or pass through a QParam) into a QParam."""
    if isinstance(q, QParam):
        return q
    return QParam(float(q))


@dataclass(frozen=True)
class ConcurrenceValue:
    """Concurrence plus, when it came from the two-qubit formula, the four
    descending singular values behind it."""

    c: float
    lambdas: tuple[float, ...] | None = None


@dataclass(frozen=True)
class TeeEstimate:
    value: float
    exact: bool


def _tsallis(probs: np.ndarray, q: float) -> float:
    p = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    if q == 1.0:
        mask = p > 0.0
        return float(-(p[mask] * np.log(p[mask])).sum())
    return float((1.0 - (p**q).sum()) / (q - 1.0))


def tsallis_entropy(rho, q) -> float:
    """Tsallis-q entropy (1 - Tr rho^q)/(q - 1); natural-log von Neumann at q = 1."""
    qp = as_q(q)
    if isinstance(rho, DensityMatrix):
        spec = rho.spectrum()
    else:
        spec = hermitian_eigenvalues(np.asarray(rho))
    return _tsallis(spec, qp.q)


def binary_entropy(p: float) -> float:
    """-p ln p - (1-p) ln(1-p), tolerating 1e-12 of rounding outside [0, 1]."""
    p = float(p)
    if p < -_EDGE or p > 1.0 + _EDGE:
        raise DomainError(f"binary_entropy argument {p!r} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    out = 0.0
    if p > 0.0:
        out -= p * math.log(p)
    if p < 1.0:
        out -= (1.0 - p) * math.log(1.0 - p)
    return out


def spin_flip_two_qubit(mat: np.ndarray) -> np.ndarray:
    """(sigma_y x sigma_y) rho* (sigma_y x sigma_y) on a bare 4x4 matrix."""
    mat = np.asarray(mat, dtype=complex)
    if mat.shape != (4, 4):
        raise DomainError(f"spin flip needs a 4x4 matrix, got shape {mat.shape}")
    return _FLIP @ mat.conj() @ _FLIP


def concurrence_two_qubit(rho) -> ConcurrenceValue:
    """Two-qubit concurrence max(0, l1 - l2 - l3 - l4).

    Accepts a DensityMatrix with dims (2, 2) or a bare 4x4 matrix.  The l_i
    are computed through the Hermitian route, eigenvalues of
    sqrt(rho) rho~ sqrt(rho) under a square root, which keeps everything in
    real symmetric arithmetic instead of the non-normal product rho rho~.
    """
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix((2, 2), np.asarray(rho, dtype=complex))
    if rho.dims != (2, 2):
        raise DomainError(f"two-qubit concurrence needs dims (2, 2), got {rho.dims}")
    root = psd_sqrt(rho.matrix)
    inner = root @ spin_flip_two_qubit(rho.matrix) @ root
    vals = np.linalg.eigvalsh((inner + inner.conj().T) / 2.0)[::-1]
    vals = np.clip(vals, 0.0, None)
    # Rank deficiency leaves exact-zero eigenvalues sitting at noise level
    # ~eps*|inner|; the square root would blow that up to ~1e-8 and bias the
    # l1 - l2 - l3 - l4 difference, so zero everything below a relative floor.
    vals[vals < 64.0 * np.finfo(float).eps * vals[0]] = 0.0
    lam = np.sqrt(vals)
    c = max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))
    return ConcurrenceValue(c=c, lambdas=tuple(float(v) for v in lam))


def concurrence_pure(psi: PureState, party: int = 0) -> float:
    """Generalized concurrence sqrt(2(1 - purity)) of one party against the rest.

    Clamped to the ceiling sqrt(2(d-1)/d) set by the smaller side dimension d.
    """
    party = int(party)
    if party < 0 or party >= psi.num_sites:
        raise DomainError(f"party {party} out of range for {psi.num_sites} subsystems")
    reduced = psi.reduced([party])
    rest = psi.dim // psi.dims[party]
    dm = min(psi.dims[party], rest)
    if dm < 2:
        raise DomainError("concurrence needs both sides of the cut to be nontrivial")
    csq = 2.0 * (1.0 - reduced.purity())
    csq = min(max(csq, 0.0), 2.0 * (dm - 1) / dm)
    return math.sqrt(csq)


def tee_from_concurrence_sq(csq, q):
    """Tsallis-q entanglement as a function of squared concurrence.

    Evaluates T_q of the spectrum {(1+s)/2, (1-s)/2} with s = sqrt(1-x).
    The small eigenvalue is computed as x/(2(1+s)) so nothing cancels as
    x -> 0. Broadcasts over array x and array q; scalars in, scalar out.
    """
    x = np.asarray(csq, dtype=float)
    qa = np.asarray(q, dtype=float)
    if np.any(x < -_EDGE) or np.any(x > 1.0 + _EDGE):
        raise DomainError("squared concurrence must lie in [0, 1]")
    if np.any(~np.isfinite(qa)) or np.any(qa <= 0.0):
        raise QRangeError("entropic order must be finite and positive")
    x = np.clip(x, 0.0, 1.0)
    s = np.sqrt(1.0 - x)
    hi = (1.0 + s) / 2.0
    lo = x / (2.0 * (1.0 + s))

    hi_b, lo_b, q_b = np.broadcast_arrays(hi, lo, qa)
    out = np.empty(hi_b.shape, dtype=float)

    vn = q_b == 1.0
    if np.any(vn):
        h, l = hi_b[vn], lo_b[vn]
        term = np.zeros_like(h)
        pos = h > 0.0
        term[pos] -= h[pos] * np.log(h[pos])
        pos = l > 0.0
        term[pos] -= l[pos] * np.log(l[pos])
        out[vn] = term
    gen = ~vn
    if np.any(gen):
        h, l, qq = hi_b[gen], lo_b[gen], q_b[gen]
        out[gen] = (1.0 - h**qq - l**qq) / (qq - 1.0)
    if out.shape == ():
        return float(out)
    return out


def ef_two_qubit(rho: DensityMatrix) -> float:
    """Entanglement of formation of a two-qubit state, in nats."""
    c = concurrence_two_qubit(rho).c
    return binary_entropy((1.0 + math.sqrt(max(0.0, 1.0 - c * c))) / 2.0)


def tee_pure(psi: PureState, party: int, q) -> float:
    """Tsallis-q entanglement of a pure state across the party/rest cut."""
    qp = as_q(q)
    party = int(party)
    if party < 0 or party >= psi.num_sites:
        raise DomainError(f"party {party} out of range for {psi.num_sites} subsystems")
    if psi.num_sites < 2:
        raise DomainError("a pure-state cut needs at least two subsystems")
    return _tsallis(psi.reduced([party]).spectrum(), qp.q)


def tee_two_qubit(rho: DensityMatrix, q, *, force_q: bool = False) -> float:
    """Mixed two-qubit Tsallis-q entanglement via the concurrence closed form.

    Outside the analytic window the closed form is only a lower bound on the
    convex roof, so the call raises unless force_q is set.
    """
    qp = as_q(q)
    if not qp.analytic_two_qubit and not force_q:
        raise QRangeError(
            f"q={qp.q:.12g} is outside the closed-form window "
            f"[{ANALYTIC_Q_MIN:.12g}, {ANALYTIC_Q_MAX:.12g}]; pass force_q=True "
            "to evaluate the formula as a lower bound"
        )
    c = concurrence_two_qubit(rho).c
    return float(tee_from_concurrence_sq(c * c, qp.q))


def tee_2xd(rho: DensityMatrix, q, c: float) -> TeeEstimate:
    """Tsallis-q entanglement of a qubit-qudit state from its roof concurrence c.

    Exact when q sits in the concave regime; elsewhere the returned value is
    the same formula evaluated as an estimate, flagged exact=False.
    """
    qp = as_q(q)
    if rho.num_sites != 2 or rho.dims[0] != 2:
        raise DomainError(f"expected a (2, d) bipartite state, got dims {rho.dims}")
    c = float(c)
    if c < -_EDGE:
        raise DomainError(f"concurrence must be nonnegative, got {c!r}")
    c = max(c, 0.0)
    if c > 1.0 + _EDGE:
        raise DomainError(f"a qubit cut bounds concurrence by 1, got {c!r}")
    value = float(tee_from_concurrence_sq(min(c, 1.0) ** 2, qp.q))
    return TeeEstimate(value=value, exact=qp.concave_regime)
