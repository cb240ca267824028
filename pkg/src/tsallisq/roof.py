"""Convex-roof minimization over pure-state decompositions.

Every decomposition of a rank-r density matrix into m >= r pure states is
reachable from the eigendecomposition through an m x r isometry V, so the
roof of a pure-state cost is a minimum over the isometry manifold.  The
optimizer below parametrizes V by an unconstrained complex matrix mapped
through a phase-fixed QR factorization, estimates gradients by central
finite differences, and runs several independently seeded restarts in one
vectorized batch.  Costs are plain callables mapping a (batch, dim) array of
normalized state vectors to a (batch,) array, so new roof quantities only
need a new cost.

Results are deterministic for a fixed seed: restart k draws the same initial
point no matter how many restarts follow it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PartitionError
from .measures import tee_from_concurrence_sq
from .qstate import Decomposition, DensityMatrix, PureState

_RANK_TOL = 1e-10
_MAX_RANK = 8
_FD_STEP = 1e-6
_ACCEPT_SLACK = 1e-15
_DROP_WEIGHT = 1e-12


@dataclass(frozen=True)
class RoofConfig:
    """Optimizer knobs.

    max_ensemble_size defaults to twice the state's rank, which is enough for
    every optimal decomposition this package targets.
    """

    max_ensemble_size: int | None = None
    restarts: int = 32
    max_iterations: int = 2000
    tolerance: float = 1e-7
    seed: int = 42

    def __post_init__(self):
        if self.max_ensemble_size is not None and self.max_ensemble_size < 1:
            raise DomainError("max_ensemble_size must be positive when given")
        if self.restarts < 1:
            raise DomainError("need at least one restart")
        if self.max_iterations < 1:
            raise DomainError("need at least one iteration")
        if not (self.tolerance > 0.0):
            raise DomainError("tolerance must be positive")


@dataclass(frozen=True)
class RoofResult:
    """Outcome of a roof minimization.

    value is recomputed from the returned decomposition, so it always matches
    it; converged reports whether the restart that won actually met the stop
    rule rather than the iteration cap, and iterations is that restart's own
    count.
    """

    value: float
    decomposition: Decomposition
    converged: bool
    iterations: int


def _eigenbasis(rho: DensityMatrix):
    vals, vecs = np.linalg.eigh(rho.matrix)
    keep = vals > _RANK_TOL
    lam = vals[keep][::-1]
    basis = vecs[:, keep][:, ::-1]
    # fix each column's global phase for bit-stable output
    for j in range(basis.shape[1]):
        k = int(np.argmax(np.abs(basis[:, j])))
        piv = basis[k, j]
        if abs(piv) > 0.0:
            basis[:, j] *= piv.conjugate() / abs(piv)
    return lam, basis


def _phase_fixed_isometries(mats: np.ndarray) -> np.ndarray:
    """Map a stack of full-column-rank matrices to isometries via QR with the
    R diagonal rotated positive, which makes the map smooth."""
    q, r = np.linalg.qr(mats)
    diag = np.einsum("...ii->...i", r)
    mag = np.abs(diag)
    phase = np.where(mag > 0.0, diag / np.where(mag > 0.0, mag, 1.0), 1.0)
    return q * phase[..., None, :]


def decomposition_from_isometry(rho: DensityMatrix, isometry: np.ndarray) -> Decomposition:
    """Realize the pure-state ensemble an m x r isometry induces on rho.

    Row i of the isometry mixes the weighted eigenvectors into the i-th
    (subnormalized) member; members below weight 1e-12 are dropped.
    """
    lam, basis = _eigenbasis(rho)
    r = lam.size
    v = np.asarray(isometry, dtype=complex)
    if v.ndim != 2 or v.shape[1] != r:
        raise PartitionError(
            f"isometry shape {v.shape} does not match state rank {r}"
        )
    if v.shape[0] < r:
        raise DomainError("isometry needs at least rank many rows")
    gram = v.conj().T @ v
    if np.max(np.abs(gram - np.eye(r))) > 1e-8:
        raise DomainError("matrix is not an isometry (columns not orthonormal)")
    # row i of the seed matrix is sqrt(lam_i) e_i^T; a conjugate here would
    # realize rho* instead of rho
    phi = v @ (np.sqrt(lam)[:, None] * basis.T)
    return _ensemble_from_members(rho.dims, phi)


def _ensemble_from_members(dims, phi: np.ndarray) -> Decomposition:
    weights = np.einsum("md,md->m", phi, phi.conj()).real
    order = np.nonzero(weights > _DROP_WEIGHT)[0]
    total = float(weights[order].sum())
    members = []
    for i in order:
        w = float(weights[i]) / total
        members.append((w, PureState(dims, phi[i] / np.sqrt(weights[i]))))
    return Decomposition(tuple(members))


def minimize_roof(rho: DensityMatrix, cost, config: RoofConfig | None = None) -> RoofResult:
    """Minimize the ensemble average of a pure-state cost over decompositions.

    cost maps a (batch, dim) array of normalized vectors to a (batch,) float
    array.  The returned value is an upper bound on the true roof (the
    optimizer can only certify what it found), tight in practice for the
    ranks this package allows.
    """
    cfg = config or RoofConfig()
    lam, basis = _eigenbasis(rho)
    r = lam.size
    if r > _MAX_RANK:
        raise DomainError(f"state rank {r} exceeds the optimizer limit {_MAX_RANK}")
    dims = rho.dims
    dim = rho.dim

    if r == 1:
        psi = PureState(dims, basis[:, 0])
        value = float(cost(basis[:, 0][None, :])[0])
        return RoofResult(
            value=value,
            decomposition=Decomposition(((1.0, psi),)),
            converged=True,
            iterations=0,
        )

    m = cfg.max_ensemble_size if cfg.max_ensemble_size is not None else 2 * r
    if m < r:
        raise DomainError(f"max_ensemble_size {m} is below the state rank {r}")

    b_mat = np.sqrt(lam)[:, None] * basis.T  # (r, dim); transpose, never dagger
    n_par = 2 * m * r

    def evaluate(thetas: np.ndarray) -> np.ndarray:
        n = thetas.shape[0]
        if n > 4096:
            return np.concatenate(
                [evaluate(thetas[i : i + 4096]) for i in range(0, n, 4096)]
            )
        mats = (
            thetas[:, : m * r].reshape(n, m, r)
            + 1j * thetas[:, m * r :].reshape(n, m, r)
        )
        iso = _phase_fixed_isometries(mats)
        phi = iso @ b_mat  # (n, m, dim)
        w = np.einsum("nmd,nmd->nm", phi, phi.conj()).real
        flat = phi.reshape(n * m, dim)
        wf = w.reshape(n * m)
        safe = wf > 1e-14
        vals = np.zeros(n * m)
        if np.any(safe):
            states = flat[safe] / np.sqrt(wf[safe])[:, None]
            vals[safe] = cost(states)
        return (wf * vals).reshape(n, m).sum(axis=1)

    n_restart = cfg.restarts
    rng = np.random.default_rng(cfg.seed)
    theta = np.empty((n_restart, n_par))
    ident = np.zeros((m, r), dtype=complex)
    ident[:r, :r] = np.eye(r)
    theta[0] = np.concatenate([ident.real.ravel(), ident.imag.ravel()])
    if n_restart > 1:
        # one contiguous draw per restart keeps restart k's start independent
        # of how many restarts come after it
        draws = rng.standard_normal((n_restart - 1, 2, m, r))
        theta[1:, : m * r] = draws[:, 0].reshape(n_restart - 1, m * r)
        theta[1:, m * r :] = draws[:, 1].reshape(n_restart - 1, m * r)

    current = evaluate(theta)
    alpha = np.full(n_restart, 0.25)
    streak = np.zeros(n_restart, dtype=int)
    iters = np.zeros(n_restart, dtype=int)
    stopped = np.zeros(n_restart, dtype=bool)
    active = ~stopped

    h = _FD_STEP
    eye_h = np.eye(n_par) * h
    for _ in range(cfg.max_iterations):
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        base = theta[idx]
        bumps = np.concatenate(
            [base[:, None, :] + eye_h[None], base[:, None, :] - eye_h[None]], axis=1
        )
        f_all = evaluate(bumps.reshape(-1, n_par)).reshape(len(idx), 2, n_par)
        grad = (f_all[:, 0] - f_all[:, 1]) / (2.0 * h)

        cand = base - alpha[idx, None] * grad
        f_cand = evaluate(cand)
        gain = current[idx] - f_cand
        took = gain > _ACCEPT_SLACK
        acc = idx[took]
        theta[acc] = cand[took]
        current[acc] = f_cand[took]
        streak[acc] = np.where(gain[took] < cfg.tolerance, streak[acc] + 1, 0)
        alpha[acc] *= 1.3
        rej = idx[~took]
        alpha[rej] *= 0.4
        iters[idx] += 1

        newly = active & ((alpha < 1e-10) | (streak >= 4))
        stopped |= newly
        active &= ~newly

    best = int(np.argmin(current))
    mats = (
        theta[best, : m * r].reshape(1, m, r)
        + 1j * theta[best, m * r :].reshape(1, m, r)
    )
    iso = _phase_fixed_isometries(mats)[0]
    phi = iso @ b_mat
    decomposition = _ensemble_from_members(dims, phi)
    states = np.stack([p.amplitudes for _, p in decomposition.members])
    weights = np.array([w for w, _ in decomposition.members])
    value = float((weights * cost(states)).sum())
    return RoofResult(
        value=value,
        decomposition=decomposition,
        converged=bool(stopped[best]),
        iterations=int(iters[best]),
    )


# --- pure-state cost factories -----------------------------------------------


def _batched_marginal(states: np.ndarray, dims, party: int) -> np.ndarray:
    """Gram matrices of the party marginal for a batch of pure vectors."""
    n = states.shape[0]
    d = dims[party]
    tensor = states.reshape((n,) + tuple(dims))
    axes = [0, party + 1] + [a + 1 for a in range(len(dims)) if a != party]
    mat = np.transpose(tensor, axes).reshape(n, d, -1)
    return np.einsum("nij,nkj->nik", mat, mat.conj())


def _eig2_descending(gram: np.ndarray) -> np.ndarray:
    """Closed-form eigenvalues of a batch of 2x2 Hermitian matrices."""
    a = gram[:, 0, 0].real
    c = gram[:, 1, 1].real
    off = np.abs(gram[:, 0, 1]) ** 2
    tr = a + c
    disc = np.sqrt(np.clip((a - c) ** 2 + 4.0 * off, 0.0, None))
    hi = (tr + disc) / 2.0
    lo = (tr - disc) / 2.0
    return np.stack([hi, lo], axis=1)


def _batched_tsallis(probs: np.ndarray, q: float) -> np.ndarray:
    p = np.clip(probs, 0.0, None)
    if q == 1.0:
        terms = np.where(p > 0.0, -p * np.log(np.where(p > 0.0, p, 1.0)), 0.0)
        return terms.sum(axis=1)
    return (1.0 - (p**q).sum(axis=1)) / (q - 1.0)


def tee_cost(dims, party: int, q: float):
    """Pure-state Tsallis-q entanglement across party|rest, batched."""
    dims = tuple(int(d) for d in dims)
    party = int(party)
    if party < 0 or party >= len(dims):
        raise DomainError(f"party {party} out of range for dims {dims}")
    q = float(q)
    two = dims[party] == 2

    def cost(states: np.ndarray) -> np.ndarray:
        gram = _batched_marginal(states, dims, party)
        if two:
            spec = _eig2_descending(gram)
        else:
            spec = np.linalg.eigvalsh(gram)
        return _batched_tsallis(spec, q)

    return cost


def concurrence_cost(dims, party: int):
    """Pure-state generalized concurrence sqrt(2(1 - purity)), batched."""
    dims = tuple(int(d) for d in dims)
    party = int(party)
    if party < 0 or party >= len(dims):
        raise DomainError(f"party {party} out of range for dims {dims}")
    rest = 1
    for i, d in enumerate(dims):
        if i != party:
            rest *= d
    ceiling = 2.0 * (min(dims[party], rest) - 1) / min(dims[party], rest)

    def cost(states: np.ndarray) -> np.ndarray:
        gram = _batched_marginal(states, dims, party)
        purity = np.einsum("nij,nij->n", gram, gram.conj()).real
        csq = np.clip(2.0 * (1.0 - purity), 0.0, ceiling)
        return np.sqrt(csq)

    return cost


_FLIP4 = np.kron(
    np.array([[0.0, -1.0j], [1.0j, 0.0]]), np.array([[0.0, -1.0j], [1.0j, 0.0]])
).real  # sigma_y x sigma_y is purely real


def _pair_density_batch(states: np.ndarray, keep: tuple[int, int]) -> np.ndarray:
    """Two-qubit reductions of a batch of three-qubit pure vectors."""
    n = states.shape[0]
    tensor = states.reshape(n, 2, 2, 2)
    drop = ({0, 1, 2} - set(keep)).pop()
    axes = [0, keep[0] + 1, keep[1] + 1, drop + 1]
    mat = np.transpose(tensor, axes).reshape(n, 4, 2)
    return np.einsum("nik,njk->nij", mat, mat.conj())


def _rank2_concurrence_batch(rho: np.ndarray) -> np.ndarray:
    """Wootters concurrence for a batch of rank<=2 two-qubit densities.

    With at most two nonzero eigenvalues of rho rho~, the spectrum is pinned
    by the two traces Tr P and Tr P^2 alone, so no eigensolve is needed.
    """
    flipped = np.einsum("ij,njk,kl->nil", _FLIP4, rho.conj(), _FLIP4)
    prod = rho @ flipped
    t1 = np.einsum("nii->n", prod).real
    t2 = np.einsum("nij,nji->n", prod, prod).real
    disc = np.sqrt(np.clip(2.0 * t2 - t1**2, 0.0, None))
    hi = np.sqrt(np.clip((t1 + disc) / 2.0, 0.0, None))
    lo = np.sqrt(np.clip((t1 - disc) / 2.0, 0.0, None))
    return np.clip(hi - lo, 0.0, None)


def indicator_summand_cost(dims, focus: int, q: float):
    """Monogamy-deficit summand for three-qubit pure members, batched.

    Returns T_q(focus marginal)^2 minus the squared pair measures of the two
    focus pairs, each through the concurrence closed form (so q must sit in
    the window where that form is exact).
    """
    dims = tuple(int(d) for d in dims)
    if dims != (2, 2, 2):
        raise DomainError(f"indicator summand needs three qubits, got dims {dims}")
    focus = int(focus)
    if focus not in (0, 1, 2):
        raise DomainError(f"focus {focus} out of range for three qubits")
    q = float(q)
    partners = tuple(j for j in range(3) if j != focus)

    def cost(states: np.ndarray) -> np.ndarray:
        gram = _batched_marginal(states, dims, focus)
        total = _batched_tsallis(_eig2_descending(gram), q) ** 2
        for j in partners:
            pair = _pair_density_batch(states, (focus, j))
            c = _rank2_concurrence_batch(pair)
            total = total - tee_from_concurrence_sq(c**2, q) ** 2
        return total

    return cost


def roof_concurrence(
    rho: DensityMatrix, config: RoofConfig | None = None, party: int = 0
) -> RoofResult:
    """Convex-roof concurrence of a bipartite mixed state."""
    if rho.num_sites != 2:
        raise PartitionError(
            f"roof concurrence expects a bipartite state, got dims {rho.dims}"
        )
    return minimize_roof(rho, concurrence_cost(rho.dims, party), config)
