"""Curvature diagnostics for the concurrence-to-TEE map, sign scans, and roots.

Three second derivatives drive everything the package claims about monogamy:

* tee_curvature_wrt_c  - d^2/dc^2 of f(c^2), with f the squared-concurrence
  to TEE map.  Its c -> 1 limit changes sign at the roots of q^2 - 5q + 3,
  which is where the closed-form window ends.
* tee_sq_curvature     - d^2/dx^2 of f(x)^2 (x the squared concurrence).
  Nonnegative across the whole window; this is the convexity that makes the
  squared measure superadditive.
* tee_curvature        - d^2/dx^2 of f(x).  Sign alternates between the two
  concave q-bands and the middle band (2, 3).

All three broadcast over arrays, handle q = 1 through the von Neumann limit,
and return exact one-sided limits at x = 0 and x = 1 (some are infinite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, QRangeError
from .measures import ANALYTIC_Q_MAX, ANALYTIC_Q_MIN, tee_from_concurrence_sq

_EDGE = 1e-12


def _prep(x, q):
    X = np.asarray(x, dtype=float)
    Q = np.asarray(q, dtype=float)
    if np.any(X < -_EDGE) or np.any(X > 1.0 + _EDGE):
        raise DomainError("squared concurrence must lie in [0, 1]")
    if np.any(~np.isfinite(Q)) or np.any(Q <= 0.0):
        raise QRangeError("entropic order must be finite and positive")
    X = np.clip(X, 0.0, 1.0)
    X, Q = np.broadcast_arrays(X, Q)
    return X.astype(float), Q.astype(float)


def _powers(X, Q):
    """s, A = 1+s, B = (1-s) computed cancellation-free, and the two power
    combinations the curvature formulas share."""
    s = np.sqrt(1.0 - X)
    A = 1.0 + s
    B = X / A
    d1 = A ** (Q - 1.0) - B ** (Q - 1.0)
    d0 = A ** (Q - 2.0) + B ** (Q - 2.0)
    return s, A, B, d1, d0


def _scalar_or_array(out, scalar_in):
    if scalar_in:
        return float(out.reshape(()))
    return out


def tee_curvature(x, q):
    """d^2/dx^2 of the squared-concurrence-to-TEE map, elementwise.

    At x = 0 the curvature diverges to -inf for q < 2 (q = 2 gives 0,
    q > 2 gives q(3-q)/(16(q-1))); at x = 1 it is -q(q-2)(q-3)/(3 2^(q+1)).
    """
    scalar_in = np.isscalar(x) and np.isscalar(q)
    X, Q = _prep(x, q)
    out = np.empty(X.shape, dtype=float)

    inner = (X > 0.0) & (X < 1.0)
    gen = inner & (Q != 1.0)
    if np.any(gen):
        Xg, Qg = X[gen], Q[gen]
        _, _, _, d1, d0 = _powers(Xg, Qg)
        pref = Qg / (2.0 ** (Qg + 2.0) * (Qg - 1.0))
        out[gen] = pref * (
            (1.0 - Qg) * d0 / (1.0 - Xg) + d1 / (1.0 - Xg) ** 1.5
        )
    vn = inner & (Q == 1.0)
    if np.any(vn):
        Xv = X[vn]
        s = np.sqrt(1.0 - Xv)
        big_l = np.log((1.0 + s) ** 2 / Xv)
        out[vn] = -1.0 / (4.0 * Xv * (1.0 - Xv)) + big_l / (8.0 * (1.0 - Xv) ** 1.5)

    left = X == 0.0
    if np.any(left):
        Ql = Q[left]
        vals = np.where(
            Ql > 2.0,
            Ql * (3.0 - Ql) / (16.0 * np.where(Ql > 2.0, Ql - 1.0, 1.0)),
            np.where(Ql == 2.0, 0.0, -np.inf),
        )
        out[left] = vals
    right = X == 1.0
    if np.any(right):
        Qr = Q[right]
        out[right] = -Qr * (Qr - 2.0) * (Qr - 3.0) / (3.0 * 2.0 ** (Qr + 1.0))
    return _scalar_or_array(out, scalar_in)


def tee_sq_curvature(x, q):
    """d^2/dx^2 of the squared measure f(x)^2, elementwise.

    Decomposes as 2 f'^2 + 2 f f''.  At x = 0 the value is q^2/(8(q-1)^2)
    for q > 1 and +inf for q <= 1 (a real divergence, not overflow).
    """
    scalar_in = np.isscalar(x) and np.isscalar(q)
    X, Q = _prep(x, q)
    out = np.empty(X.shape, dtype=float)

    inner = (X > 0.0) & (X < 1.0)
    gen = inner & (Q != 1.0)
    if np.any(gen):
        Xg, Qg = X[gen], Q[gen]
        _, _, _, d1, d0 = _powers(Xg, Qg)
        f = tee_from_concurrence_sq(Xg, Qg)
        t1 = Qg**2 * d1**2 / (2.0 ** (2.0 * Qg + 1.0) * (Qg - 1.0) ** 2 * (1.0 - Xg))
        curv = (
            Qg
            / (2.0 ** (Qg + 2.0) * (Qg - 1.0))
            * ((1.0 - Qg) * d0 / (1.0 - Xg) + d1 / (1.0 - Xg) ** 1.5)
        )
        out[gen] = t1 + 2.0 * f * curv
    vn = inner & (Q == 1.0)
    if np.any(vn):
        Xv = X[vn]
        s = np.sqrt(1.0 - Xv)
        big_l = np.log((1.0 + s) ** 2 / Xv)
        f = tee_from_concurrence_sq(Xv, 1.0)
        curv = -1.0 / (4.0 * Xv * (1.0 - Xv)) + big_l / (8.0 * (1.0 - Xv) ** 1.5)
        out[vn] = big_l**2 / (8.0 * (1.0 - Xv)) + 2.0 * f * curv
    left = X == 0.0
    if np.any(left):
        Ql = Q[left]
        out[left] = np.where(
            Ql > 1.0,
            Ql**2 / (8.0 * np.where(Ql > 1.0, Ql - 1.0, 1.0) ** 2),
            np.inf,
        )
    right = X == 1.0
    if np.any(right):
        Qr = Q[right]
        slope_sq = 2.0 * Qr**2 / 4.0**Qr
        f1 = np.where(
            Qr == 1.0,
            math.log(2.0),
            (1.0 - 2.0 ** (1.0 - Qr)) / np.where(Qr == 1.0, 1.0, Qr - 1.0),
        )
        g1 = -Qr * (Qr - 2.0) * (Qr - 3.0) / (3.0 * 2.0 ** (Qr + 1.0))
        out[right] = slope_sq + 2.0 * f1 * g1
    return _scalar_or_array(out, scalar_in)


def tee_curvature_wrt_c(q, c):
    """d^2/dc^2 of f(c^2) as a function of the concurrence c itself.

    This is the quantity whose c -> 1 sign decides whether interpolating
    toward the maximally entangled state can overshoot the roof; its limit
    there is curvature_limit_at_max_c(q).
    """
    scalar_in = np.isscalar(q) and np.isscalar(c)
    C, Q = _prep(c, q)
    out = np.empty(C.shape, dtype=float)

    inner = (C > 0.0) & (C < 1.0)
    gen = inner & (Q != 1.0)
    if np.any(gen):
        Cg, Qg = C[gen], Q[gen]
        Xg = Cg**2
        s = np.sqrt(1.0 - Xg)
        A = 1.0 + s
        B = Xg / A
        d1 = A ** (Qg - 1.0) - B ** (Qg - 1.0)
        d0 = A ** (Qg - 2.0) + B ** (Qg - 2.0)
        pref = Qg / (2.0**Qg * (Qg - 1.0))
        out[gen] = pref * (d1 / s**3 - (Qg - 1.0) * Xg * d0 / s**2)
    vn = inner & (Q == 1.0)
    if np.any(vn):
        Cv = C[vn]
        Xv = Cv**2
        s = np.sqrt(1.0 - Xv)
        big_l = np.log((1.0 + s) ** 2 / Xv)
        out[vn] = big_l / (2.0 * s**3) - 1.0 / s**2
    left = C == 0.0
    if np.any(left):
        Ql = Q[left]
        out[left] = np.where(
            Ql > 1.0,
            Ql / (2.0 * np.where(Ql > 1.0, Ql - 1.0, 1.0)),
            np.inf,
        )
    right = C == 1.0
    if np.any(right):
        out[right] = curvature_limit_at_max_c(Q[right])
    return _scalar_or_array(out, scalar_in)


def curvature_limit_at_max_c(q):
    """Limit of tee_curvature_wrt_c as c -> 1: -q(q^2 - 5q + 3)/(3 2^(q-1)).

    Vanishes exactly at the window endpoints (5 +- sqrt(13))/2.
    """
    Q = np.asarray(q, dtype=float)
    if np.any(~np.isfinite(Q)) or np.any(Q <= 0.0):
        raise QRangeError("entropic order must be finite and positive")
    out = -Q * (Q**2 - 5.0 * Q + 3.0) / (3.0 * 2.0 ** (Q - 1.0))
    if np.isscalar(q):
        return float(out)
    return out


def find_root_q(func, bracket, *, f_tol=1e-10, x_tol=1e-12, max_iter=200, trace=None):
    """Brent root finder on a scalar function of q.

    bracket must straddle a sign change.  When trace is a list, the current
    bracketing interval (lo, hi) is appended once per iteration, so callers
    can observe that the bracket never widens.
    """
    a, b = float(bracket[0]), float(bracket[1])
    fa, fb = float(func(a)), float(func(b))
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise DomainError(
            f"bracket ({a:g}, {b:g}) does not straddle a sign change "
            f"(f values {fa:.3e}, {fb:.3e})"
        )
    if abs(fa) < abs(fb):
        a, b, fa, fb = b, a, fb, fa
    c, fc = a, fa
    d = b
    mflag = True
    for _ in range(max_iter):
        if trace is not None:
            trace.append((min(a, b), max(a, b)))
        if fb == 0.0 or abs(fb) <= f_tol or abs(b - a) <= x_tol:
            return b
        if fa != fc and fb != fc:
            s = (
                a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
            )
        else:
            s = b - fb * (b - a) / (fb - fa)
        lo, hi = (3.0 * a + b) / 4.0, b
        if lo > hi:
            lo, hi = hi, lo
        delta = x_tol
        use_bisect = (
            not (lo < s < hi)
            or (mflag and abs(s - b) >= abs(b - c) / 2.0)
            or (not mflag and abs(s - b) >= abs(c - d) / 2.0)
            or (mflag and abs(b - c) < delta)
            or (not mflag and abs(c - d) < delta)
        )
        if use_bisect:
            s = (a + b) / 2.0
            mflag = True
        else:
            mflag = False
        fs = float(func(s))
        d, c, fc = c, b, fb
        if fa * fs < 0.0:
            b, fb = s, fs
        else:
            a, fa = s, fs
        if abs(fa) < abs(fb):
            a, b, fa, fb = b, a, fb, fa
    return b


def critical_q() -> tuple[float, float]:
    """Both roots of the c -> 1 curvature limit, found numerically and then
    checked against the closed forms (5 -+ sqrt(13))/2 to 1e-10."""
    # The limit curve is shallow near the upper root (slope ~ -0.52), so the
    # default f_tol would leave ~2e-10 of x error.  Tighten both tolerances.
    lo = find_root_q(curvature_limit_at_max_c, (0.2, 0.95), f_tol=1e-14, x_tol=5e-14)
    hi = find_root_q(curvature_limit_at_max_c, (4.05, 4.8), f_tol=1e-14, x_tol=5e-14)
    if abs(lo - ANALYTIC_Q_MIN) > 1e-10 or abs(hi - ANALYTIC_Q_MAX) > 1e-10:
        raise RuntimeError(
            f"critical-q roots ({lo!r}, {hi!r}) drifted from the closed forms"
        )
    return lo, hi


# --- sign scans --------------------------------------------------------------

_SCAN_KINDS = {
    "tee-curvature": (tee_curvature, "x"),
    "tee-sq-curvature": (tee_sq_curvature, "x"),
    "tee-curvature-c": (lambda x, q: tee_curvature_wrt_c(q, x), "c"),
}


@dataclass(frozen=True)
class DerivativeSample:
    """One grid point of a curvature scan."""

    kind: str
    x: float
    q: float
    value: float


@dataclass(frozen=True)
class SignScanReport:
    kind: str
    xlabel: str
    xs: np.ndarray
    qs: np.ndarray
    values: np.ndarray
    claimed_sign: str
    tolerance: float
    violations: tuple[DerivativeSample, ...] = field(default=())
    min_value: float = math.nan
    max_value: float = math.nan
    min_abs_value: float = math.nan

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_csv(self, fh) -> None:
        """Write the full grid as CSV (x, q, value) with %.12g formatting."""

        def fmt(v: float) -> str:
            if v == 0.0:
                v = 0.0  # normalize -0.0
            return f"{v:.12g}"

        fh.write(f"{self.xlabel},q,value\n")
        for i, xv in enumerate(self.xs):
            for j, qv in enumerate(self.qs):
                fh.write(f"{fmt(xv)},{fmt(qv)},{fmt(self.values[i, j])}\n")

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "claimed_sign": self.claimed_sign,
            "tolerance": self.tolerance,
            "grid": {
                self.xlabel: [float(self.xs[0]), float(self.xs[-1]), int(self.xs.size)],
                "q": [float(self.qs[0]), float(self.qs[-1]), int(self.qs.size)],
            },
            "min_value": self.min_value,
            "max_value": self.max_value,
            "min_abs_value": self.min_abs_value,
            "ok": self.ok,
            "num_violations": len(self.violations),
            "violations": [
                {"kind": v.kind, self.xlabel: v.x, "q": v.q, "value": v.value}
                for v in self.violations[:10]
            ],
        }


def scan_sign(kind, xs, qs, claimed_sign, tolerance=1e-10) -> SignScanReport:
    """Evaluate one curvature kind on the xs x qs grid and test a sign claim.

    claimed_sign is "nonnegative" or "nonpositive"; values inside +-tolerance
    never count as violations, NaN always does.
    """
    if kind not in _SCAN_KINDS:
        raise DomainError(
            f"unknown scan kind {kind!r}; choose from {sorted(_SCAN_KINDS)}"
        )
    if claimed_sign not in ("nonnegative", "nonpositive"):
        raise DomainError(
            f"claimed_sign must be 'nonnegative' or 'nonpositive', got {claimed_sign!r}"
        )
    func, xlabel = _SCAN_KINDS[kind]
    xs = np.asarray(xs, dtype=float).ravel()
    qs = np.asarray(qs, dtype=float).ravel()
    if xs.size == 0 or qs.size == 0:
        raise DomainError("scan grids must be nonempty")
    values = np.asarray(func(xs[:, None], qs[None, :]), dtype=float)

    if claimed_sign == "nonnegative":
        bad = values < -tolerance
    else:
        bad = values > tolerance
    bad |= np.isnan(values)
    violations = tuple(
        DerivativeSample(kind=kind, x=float(xs[i]), q=float(qs[j]), value=float(values[i, j]))
        for i, j in zip(*np.nonzero(bad))
    )
    finite = values[np.isfinite(values)]
    min_abs = float(np.min(np.abs(finite))) if finite.size else math.nan
    return SignScanReport(
        kind=kind,
        xlabel=xlabel,
        xs=xs,
        qs=qs,
        values=values,
        claimed_sign=claimed_sign,
        tolerance=float(tolerance),
        violations=violations,
        min_value=float(np.nanmin(values)),
        max_value=float(np.nanmax(values)),
        min_abs_value=min_abs,
    )


# --- elementary inequalities the monogamy proofs lean on ----------------------


def holds_power_bound(x: float, t: float) -> bool:
    """(1+x)^t >= 1 + x^t for x in [0, 1], t >= 1 (with 1e-12 slack)."""
    x = float(x)
    t = float(t)
    if x < 0.0 or x > 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    if t < 1.0:
        raise DomainError(f"t must be >= 1, got {t!r}")
    return (1.0 + x) ** t + 1e-12 >= 1.0 + x**t


def holds_sum_power_bound(xs, alpha: float) -> bool:
    """(sum x_i^2)^(alpha/2) >= sum x_i^alpha for entries in [0, 1], alpha >= 2."""
    arr = np.asarray(xs, dtype=float).ravel()
    alpha = float(alpha)
    if arr.size == 0:
        raise DomainError("need at least one entry")
    if np.any(arr < 0.0) or np.any(arr > 1.0 + _EDGE):
        raise DomainError("entries must lie in [0, 1]")
    if alpha < 2.0:
        raise DomainError(f"alpha must be >= 2, got {alpha!r}")
    return float(np.sum(arr**2)) ** (alpha / 2.0) + 1e-12 >= float(np.sum(arr**alpha))
