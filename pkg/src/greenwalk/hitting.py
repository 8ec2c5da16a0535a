"""Hitting times via the fundamental matrix, and their classical identities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericalError, ValidationError
from .graph import Distribution, TransitionMatrix

FUNDAMENTAL_TOL = 1e-9  # scaled by n
TIME_TOL = 1e-8         # scaled by max(1, largest expected-step value in play)


def time_scale(*values) -> float:
    """Scale factor for comparing expected-step quantities."""
    top = 1.0
    for v in values:
        arr = np.asarray(v, dtype=float)
        if arr.size:
            top = max(top, float(np.abs(arr).max()))
    return top


@dataclass(frozen=True)
class FundamentalMatrix:
    """Z = (I - P + 1 pi^T)^{-1}; one factorization serves every hitting time."""

    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class HittingTimeMatrix:
    """All pairwise expected first-arrival times, zero on the diagonal."""

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValidationError("hitting-time matrix must be square")
        if not np.all(np.isfinite(values)):
            raise ValidationError("hitting times must be finite")
        diag = float(np.abs(np.diag(values)).max()) if values.size else 0.0
        if diag > TIME_TOL * time_scale(values):
            raise ValidationError(f"diagonal must be zero, found {diag:.3e}")
        np.fill_diagonal(values, 0.0)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, idx) -> float:
        return float(self.values[idx])


def fundamental_matrix(P: TransitionMatrix, pi: Distribution) -> FundamentalMatrix:
    """Invert I - P + 1 pi^T and confirm the inverse to working accuracy."""
    n = P.n
    A = np.eye(n) - P.probs + np.outer(np.ones(n), pi.probs)
    try:
        Z = scipy.linalg.solve(A, np.eye(n))
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(f"fundamental matrix solve failed: {exc}") from None
    residual = float(np.abs(Z @ A - np.eye(n)).max())
    if residual > FUNDAMENTAL_TOL * n:
        raise NumericalError(f"fundamental matrix residual {residual:.3e} exceeds {FUNDAMENTAL_TOL * n:.3e}")
    return FundamentalMatrix(Z)


def hitting_times(P: TransitionMatrix, pi: Distribution) -> HittingTimeMatrix:
    """Expected steps H(i, j) for the walk from i to first reach j.

    Parameters
    ----------
    P : TransitionMatrix
        Irreducible chain.
    pi : Distribution
        Its stationary distribution.

    Returns
    -------
    HittingTimeMatrix
        Extracted from the fundamental matrix Z as (Z_jj - Z_ij) / pi_j
        and validated against the first-step equations
        H(i, j) = 1 + sum_k P(i, k) H(k, j) for i != j.
    """
    Z = fundamental_matrix(P, pi).values
    H = (np.diag(Z)[None, :] - Z) / pi.probs[None, :]
    R = H - 1.0 - P.probs @ H
    np.fill_diagonal(R, 0.0)
    residual = float(np.abs(R).max())
    if residual > TIME_TOL * time_scale(H):
        raise NumericalError(f"first-step residual {residual:.3e} too large")
    return HittingTimeMatrix(H)


def access_to_vertex(H: HittingTimeMatrix, sigma: Distribution, j: int) -> float:
    """H(sigma, j), the mean of H(., j) under the starting distribution."""
    return float(sigma.probs @ H.values[:, j])


def return_times(pi: Distribution) -> np.ndarray:
    """Expected first-return times, 1 / pi entrywise."""
    return 1.0 / pi.probs


def hit_time(H: HittingTimeMatrix, pi: Distribution) -> tuple[float, float]:
    """The stationary-pair expected hitting time, with its start-independence residual.

    Returns (T_hit, r) where r = max_i |sum_k pi_k H(i, k) - T_hit|; the sum
    is the same for every start i, so r measures numerical drift only.
    """
    row = H.values @ pi.probs
    t = float(pi.probs @ row)
    return t, float(np.abs(row - t).max())


def check_cycle_identities(
    H: HittingTimeMatrix,
    pi: Distribution,
    samples: int = 10000,
    seed: int = 0,
) -> tuple[float, float]:
    """Max residuals of the triple and pair reversal identities.

    The triple identity is H(i,j) + H(j,k) + H(k,i) = H(j,i) + H(i,k) + H(k,j);
    averaging it against pi gives the pair form
    H(pi,i) + H(i,j) = H(pi,j) + H(j,i). All triples are checked up to n = 50,
    after which ``samples`` seeded random triples are drawn. Residuals are
    reported, never asserted: directed chains genuinely violate both.
    """
    Hv = H.values
    hpi = pi.probs @ Hv
    pair = float(np.abs(hpi[:, None] + Hv - hpi[None, :] - Hv.T).max())
    D = Hv - Hv.T
    n = H.n
    if n <= 50:
        triple = float(np.abs(D[:, :, None] + D[None, :, :] - D[:, None, :]).max())
    else:
        rng = np.random.default_rng(seed)
        i, j, k = rng.integers(0, n, size=(3, samples))
        triple = float(np.abs(D[i, j] + D[j, k] + D[k, i]).max())
    return triple, pair
