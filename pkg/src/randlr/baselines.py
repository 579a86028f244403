"""Deterministic low-rank baselines.

Two stand-ins for the non-randomized approximation family: the truncated
SVD (optimal, sits exactly on the Eckart-Young floor) and greedy column
selection (suboptimal but deterministic, so it always leaves a strictly
positive gap for a randomized method to beat).  Both return the same
factored form as the randomized pipeline, distinguished by method tag.
"""

from __future__ import annotations

import numpy as np

from .core import svd_factors, thin_qr
from .rangefinder import (
    METHOD_COLUMN_SELECT,
    METHOD_TRUNCATED_SVD,
    FactoredApproximation,
)

__all__ = ["truncated_svd", "column_select"]


def _check_rank(F: np.ndarray, r: int) -> None:
    if r < 1 or r > min(F.shape):
        raise ValueError(f"rank {r} out of range for {F.shape[0]}x{F.shape[1]}")


def truncated_svd(F: np.ndarray, r: int) -> FactoredApproximation:
    """Rank-r truncated SVD: the best possible rank-r approximation.

    Its squared Frobenius error equals the tail energy past index r.
    """
    _check_rank(F, r)
    U, vals, Vt = svd_factors(F)
    return FactoredApproximation(
        basis=U[:, :r],
        coeffs=vals[:r, None] * Vt[:r, :],
        target_rank=r,
        oversampling=0,
        seed=None,
        method=METHOD_TRUNCATED_SVD,
    )


def column_select(F: np.ndarray, r: int) -> FactoredApproximation:
    """Greedy column selection: r columns picked by largest residual norm.

    After each pick the chosen direction is projected out of the remaining
    columns, so near-duplicates of an already-picked column do not get
    picked again.  Ties break toward the lowest column index, making the
    output fully deterministic.
    """
    _check_rank(F, r)
    resid = np.array(F, dtype=np.float64)
    picked: list[int] = []
    for _ in range(r):
        norms = np.einsum("ij,ij->j", resid, resid)
        norms[picked] = -1.0
        j = int(np.argmax(norms))
        picked.append(j)
        col = resid[:, j]
        nrm = np.linalg.norm(col)
        if nrm > 0.0:
            q = col / nrm
            resid -= np.outer(q, q @ resid)
    basis, _ = thin_qr(F[:, picked])
    return FactoredApproximation(
        basis=basis,
        coeffs=basis.T @ F,
        target_rank=r,
        oversampling=0,
        seed=None,
        method=METHOD_COLUMN_SELECT,
    )
