"""Arnoldi factorization of the series residual operator and the
Sherman-Morrison-Woodbury correction core.

An r-step Arnoldi run on the residual operator yields V (orthonormal) and H
(upper Hessenberg) with  op V = V H + h v e^T.  The correction applies
(I - V H V^T)^{-1} = I + V G V^T  with  G = (I - H)^{-1} - I.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg


BREAKDOWN_RTOL = 1e-14
SINGULAR_PIVOT_RTOL = 1e-14


class CorrectionSingularError(RuntimeError):
    """I - H is numerically singular: the residual operator has an eigenvalue ~ 1."""


@dataclass
class LowRankCorrection:
    V: np.ndarray       # q x r, orthonormal columns
    H: np.ndarray       # r x r, upper Hessenberg
    G: np.ndarray       # r x r, (I - H)^{-1} - I
    rank: int           # achieved rank (<= requested)

    @property
    def nnz(self) -> int:
        # dense V and G entries both count toward storage
        return self.V.size + self.G.size


def arnoldi(op, dim: int, rank: int, seed: int = 0):
    """Modified Gram-Schmidt Arnoldi with one reorthogonalization pass.

    `op` maps length-`dim` vectors to length-`dim` vectors.  The start
    vector is a normalized seeded pseudo-random vector.  Returns (V, H, r)
    where r < rank signals happy breakdown.
    """
    if rank < 0:
        raise ValueError("rank must be >= 0")
    rank = min(rank, dim)
    if dim == 0 or rank == 0:
        return np.zeros((dim, 0)), np.zeros((0, 0)), 0

    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(dim)
    beta0 = np.linalg.norm(v0)
    V = np.zeros((dim, rank + 1))
    Hbar = np.zeros((rank + 1, rank))
    V[:, 0] = v0 / beta0

    r = rank
    for j in range(rank):
        w = np.asarray(op(V[:, j]), dtype=np.float64)
        h = V[:, :j + 1].T @ w
        w = w - V[:, :j + 1] @ h
        h2 = V[:, :j + 1].T @ w      # one reorthogonalization pass
        w = w - V[:, :j + 1] @ h2
        Hbar[:j + 1, j] = h + h2
        hnext = np.linalg.norm(w)
        Hbar[j + 1, j] = hnext
        if hnext <= BREAKDOWN_RTOL:  # start vector was normalized to 1
            r = j + 1
            break
        V[:, j + 1] = w / hnext
    return V[:, :r].copy(), Hbar[:r, :r].copy(), r


def build_correction(V, H) -> LowRankCorrection:
    """G = (I - H)^{-1} - I via dense LU with partial pivoting."""
    V = np.asarray(V, dtype=np.float64)
    H = np.asarray(H, dtype=np.float64)
    r = H.shape[0]
    if H.shape != (r, r):
        raise ValueError("H must be square")
    if r == 0:
        return LowRankCorrection(V=V, H=H, G=np.zeros((0, 0)), rank=0)
    M = np.eye(r) - H
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
    # <= so an exactly zero pivot is caught even when M itself is zero
    if np.min(np.abs(np.diag(lu))) <= SINGULAR_PIVOT_RTOL * np.linalg.norm(M):
        raise CorrectionSingularError(
            "correction singular: series residual operator has an eigenvalue ~ 1"
        )
    G = scipy.linalg.lu_solve((lu, piv), np.eye(r), check_finite=False) - np.eye(r)
    return LowRankCorrection(V=V, H=H, G=G, rank=r)


def apply_correction(lr: LowRankCorrection, y) -> np.ndarray:
    """y + V (G (V^T y)); identity when the correction is empty."""
    y = np.asarray(y, dtype=np.float64)
    if y.shape[0] != lr.V.shape[0] and lr.rank > 0:
        raise ValueError("vector length does not match the correction basis")
    if lr.rank == 0:
        return y.copy()
    return y + lr.V @ (lr.G @ (lr.V.T @ y))
