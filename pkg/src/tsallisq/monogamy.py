"""Monogamy residuals, the hierarchical variant, and the deficit indicator.

All checks report through MonogamyReport: residual = lhs - sum(terms), and
the inequality counts as satisfied when the residual clears -tolerance.  The
q = 1 entries everywhere are the von Neumann limits in natural logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PartitionError, QRangeError
from .measures import (
    QParam,
    as_q,
    concurrence_pure,
    concurrence_two_qubit,
    tee_from_concurrence_sq,
    tee_pure,
    tee_two_qubit,
)
from .qstate import DensityMatrix, PureState
from .roof import (
    RoofConfig,
    RoofResult,
    indicator_summand_cost,
    minimize_roof,
    roof_concurrence,
)

_DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class MonogamyReport:
    """One monogamy inequality, fully evaluated.

    partners holds the subsystem index behind each entry of terms; a tuple
    entry marks a block that was treated as a single party.
    """

    q: QParam | None
    lhs: float
    terms: tuple[float, ...]
    residual: float
    satisfied: bool
    tolerance: float
    partners: tuple

    @property
    def rhs(self) -> float:
        return sum(self.terms)


@dataclass(frozen=True)
class IndicatorResult:
    """Monogamy-deficit indicator value.

    upper_bound is True when the value came out of the numerical roof (the
    optimizer certifies only that the true indicator is no larger).
    """

    value: float
    upper_bound: bool
    report: MonogamyReport | None = None
    roof: RoofResult | None = None


def _build_report(q, lhs, terms, partners, tolerance) -> MonogamyReport:
    lhs = float(lhs)
    terms = tuple(float(t) for t in terms)
    residual = lhs - sum(terms)
    return MonogamyReport(
        q=q,
        lhs=lhs,
        terms=terms,
        residual=residual,
        satisfied=residual >= -tolerance,
        tolerance=float(tolerance),
        partners=tuple(partners),
    )


def _require_qubits(psi: PureState, focus: int) -> tuple[int, ...]:
    if any(d != 2 for d in psi.dims):
        raise PartitionError(f"this check needs qubits throughout, got dims {psi.dims}")
    if psi.num_sites < 3:
        raise PartitionError("monogamy needs at least three parties")
    focus = int(focus)
    if focus < 0 or focus >= psi.num_sites:
        raise DomainError(f"focus {focus} out of range for {psi.num_sites} qubits")
    return tuple(j for j in range(psi.num_sites) if j != focus)


def ckw_check(psi: PureState, focus: int = 0, tolerance: float = 1e-9) -> MonogamyReport:
    """Squared-concurrence monogamy for an N-qubit pure state."""
    partners = _require_qubits(psi, focus)
    lhs = concurrence_pure(psi, focus) ** 2
    terms = [
        concurrence_two_qubit(psi.reduced([focus, j])).c ** 2 for j in partners
    ]
    return _build_report(None, lhs, terms, partners, tolerance)


def tee_sq_residual(
    psi: PureState, focus: int, q, tolerance: float = _DEFAULT_TOL
) -> MonogamyReport:
    """Squared-TEE monogamy for an N-qubit pure state.

    Valid across the whole closed-form window; the pair terms go through the
    concurrence formula, which is exact there.
    """
    qp = as_q(q)
    if not qp.analytic_two_qubit:
        raise QRangeError(
            f"q={qp.q:.12g} is outside the window where pair terms are exact"
        )
    partners = _require_qubits(psi, focus)
    lhs = tee_pure(psi, focus, qp) ** 2
    terms = [tee_two_qubit(psi.reduced([focus, j]), qp) ** 2 for j in partners]
    return _build_report(qp, lhs, terms, partners, tolerance)


def alpha_residual(
    psi: PureState, focus: int, alpha: float, q, tolerance: float = _DEFAULT_TOL
) -> MonogamyReport:
    """alpha-th power monogamy (alpha >= 2) for an N-qubit pure state."""
    alpha = float(alpha)
    if alpha < 2.0:
        raise DomainError(f"alpha must be >= 2, got {alpha!r}")
    qp = as_q(q)
    if not qp.analytic_two_qubit:
        raise QRangeError(
            f"q={qp.q:.12g} is outside the window where pair terms are exact"
        )
    partners = _require_qubits(psi, focus)
    lhs = tee_pure(psi, focus, qp) ** alpha
    terms = [tee_two_qubit(psi.reduced([focus, j]), qp) ** alpha for j in partners]
    return _build_report(qp, lhs, terms, partners, tolerance)


def hierarchical_check(
    psi: PureState,
    focus: int,
    k: int,
    q,
    config: RoofConfig | None = None,
    tolerance: float = 1e-6,
) -> MonogamyReport:
    """k-party coarse-graining of the squared-TEE monogamy.

    The first k-2 partners keep their own pair term; the remaining qubits are
    merged into one block whose term is the 2xd closed form on the block's
    roof concurrence.  Needs the concave regime, where that form is exact.
    At k = N no block is left and this reduces to tee_sq_residual.
    """
    qp = as_q(q)
    if not qp.concave_regime:
        raise QRangeError(
            f"q={qp.q:.12g} is outside the concave regime the block term needs"
        )
    partners = _require_qubits(psi, focus)
    n = psi.num_sites
    k = int(k)
    if k < 3 or k > n:
        raise DomainError(f"k must lie in [3, {n}], got {k}")

    singles = partners[: k - 2]
    block = partners[k - 2 :]
    lhs = tee_pure(psi, focus, qp) ** 2
    terms = [tee_two_qubit(psi.reduced([focus, j]), qp) ** 2 for j in singles]
    labels = list(singles)
    if len(block) == 1:
        terms.append(tee_two_qubit(psi.reduced([focus, block[0]]), qp) ** 2)
        labels.append(block[0])
    else:
        reduced = psi.reduced((focus,) + block)
        party = sorted((focus,) + block).index(focus)
        roof = roof_concurrence(_focus_vs_rest(reduced, party), config)
        terms.append(float(tee_from_concurrence_sq(roof.value**2, qp.q)) ** 2)
        labels.append(tuple(block))
    return _build_report(qp, lhs, terms, labels, tolerance)


def _focus_vs_rest(dm: DensityMatrix, party: int) -> DensityMatrix:
    """Regroup a multi-site density matrix into (party, everything else)."""
    dims = dm.dims
    n = len(dims)
    if n == 2 and party == 0:
        return dm
    order = [party] + [i for i in range(n) if i != party]
    perm = order + [n + i for i in order]
    rest = dm.dim // dims[party]
    mat = dm.matrix.reshape(dims + dims).transpose(perm).reshape(dm.dim, dm.dim)
    return DensityMatrix((dims[party], rest), mat)


def indicator(
    state, q, config: RoofConfig | None = None, focus: int = 0
) -> IndicatorResult:
    """Monogamy-deficit indicator of a three-qubit state.

    Pure input evaluates the squared-TEE residual exactly; mixed input runs
    the convex roof of the pure-state summand, whose result can only
    overestimate the true indicator.
    """
    qp = as_q(q)
    if not qp.analytic_two_qubit:
        raise QRangeError(
            f"q={qp.q:.12g} is outside the window where pair terms are exact"
        )
    if isinstance(state, PureState):
        if state.dims != (2, 2, 2):
            raise PartitionError(f"indicator needs three qubits, got dims {state.dims}")
        report = tee_sq_residual(state, focus, qp)
        return IndicatorResult(value=report.residual, upper_bound=False, report=report)
    if isinstance(state, DensityMatrix):
        if state.dims != (2, 2, 2):
            raise PartitionError(f"indicator needs three qubits, got dims {state.dims}")
        roof = minimize_roof(state, indicator_summand_cost(state.dims, focus, qp.q), config)
        return IndicatorResult(value=roof.value, upper_bound=True, roof=roof)
    raise TypeError(f"indicator expects PureState or DensityMatrix, got {type(state)!r}")


# --- closed forms for the named families --------------------------------------


def w_indicator_closed_form(n: int, q):
    """Indicator of the n-qubit W state, any focus (they are all equivalent).

    f(4(n-1)/n^2)^2 - (n-1) f(4/n^2)^2 with f the squared-concurrence-to-TEE
    map; broadcasts over q and handles q = 1 via the von Neumann limit.
    """
    n = int(n)
    if n < 2:
        raise DomainError(f"the W family needs n >= 2, got {n}")
    cut = 4.0 * (n - 1) / n**2
    pair = 4.0 / n**2
    lhs = tee_from_concurrence_sq(cut, q)
    term = tee_from_concurrence_sq(pair, q)
    return lhs**2 - (n - 1) * term**2


def _no_unit_q(q):
    qa = np.asarray(q, dtype=float)
    if np.any(~np.isfinite(qa)) or np.any(qa <= 0.0):
        raise QRangeError("entropic order must be finite and positive")
    if np.any(qa == 1.0):
        raise QRangeError("this closed form divides by (q - 1); q = 1 is excluded")
    return qa


def example3_residual(theta: float, q):
    """Closed-form indicator of the 4x2x2 family, focus on the qudit.

    Every branch of the optimal decompositions has the same marginal
    spectrum, so both pair roofs collapse to constants: with a = 2^(1-q) and
    b = cos(theta)^(2q) + sin(theta)^(2q) the residual is
    ((1-ab)^2 - (1-a)^2 - (1-b)^2)/(q-1)^2.  Broadcasts over q.
    """
    qa = _no_unit_q(q)
    c2 = math.cos(theta) ** 2
    s2 = math.sin(theta) ** 2
    a = 2.0 ** (1.0 - qa)
    b = c2**qa + s2**qa
    out = ((1.0 - a * b) ** 2 - (1.0 - a) ** 2 - (1.0 - b) ** 2) / (qa - 1.0) ** 2
    if np.isscalar(q):
        return float(out)
    return out


def example4_residual(q):
    """Closed-form indicator of the antisymmetric three-qutrit state.

    ((1 - 3^(1-q))^2 - 2 (1 - 2^(1-q))^2)/(q-1)^2; broadcasts over q.
    """
    qa = _no_unit_q(q)
    out = ((1.0 - 3.0 ** (1.0 - qa)) ** 2 - 2.0 * (1.0 - 2.0 ** (1.0 - qa)) ** 2) / (
        qa - 1.0
    ) ** 2
    if np.isscalar(q):
        return float(out)
    return out


def example5_residual(q):
    """Closed-form indicator of the fixed 3x2x2 state.

    The cut term uses the maximally mixed qutrit marginal; each pair roof
    collapses onto the spectrum {0, 1/3, 2/3}.  Broadcasts over q.
    """
    qa = _no_unit_q(q)
    cut = (1.0 - 3.0 ** (1.0 - qa)) / (qa - 1.0)
    pair = (1.0 - (1.0 + 2.0**qa) * 3.0 ** (-qa)) / (qa - 1.0)
    out = cut**2 - 2.0 * pair**2
    if np.isscalar(q):
        return float(out)
    return out


def random_biseparable_mixture(
    rng: np.random.Generator, members: int = 3
) -> DensityMatrix:
    """Random three-qubit mixture of pure states, each product across one of
    the three bipartitions (so the true indicator is exactly zero)."""
    members = int(members)
    if members < 1:
        raise DomainError("need at least one member")
    dim = 8
    rho = np.zeros((dim, dim), dtype=complex)
    weights = rng.random(members)
    weights = weights / weights.sum()
    for w in weights:
        single = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        single /= np.linalg.norm(single)
        pair = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        pair /= np.linalg.norm(pair)
        split = int(rng.integers(3))
        tensor = np.kron(single, pair).reshape(2, 2, 2)
        if split == 1:
            tensor = tensor.transpose(1, 0, 2)
        elif split == 2:
            tensor = tensor.transpose(1, 2, 0)
        vec = tensor.reshape(dim)
        rho += w * np.outer(vec, vec.conj())
    return DensityMatrix((2, 2, 2), rho)
