"""Dense matrix kernels used by every other module.

Plain ``numpy.float64`` arrays are the matrix carrier throughout the
package: 2-D, finite entries only, :func:`as_matrix` being the validating
constructor.  The decomposition kernels are written in-house so that their
conventions are pinned down and directly testable:

* :func:`thin_qr` -- Householder reflections with the signs chosen so the
  diagonal of R is non-negative (Q is then unique for full-rank input).
* :func:`svd_factors` / :func:`singular_values` -- one-sided Jacobi
  rotations, at most :data:`JACOBI_MAX_SWEEPS` sweeps.
* :func:`gaussian_matrix` -- Box-Muller transform over the counter-based
  Philox generator, so every (rows, cols, seed) triple is reproducible and
  independent substreams can be derived with :func:`derive_seed`.

All functions are pure and never mutate their arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ConvergenceError",
    "SingularSpectrum",
    "as_matrix",
    "frobenius_norm",
    "matmul",
    "derive_seed",
    "gaussian_matrix",
    "thin_qr",
    "svd_factors",
    "singular_values",
    "pseudoinverse",
    "RANK_TOL",
]

#: Singular values below RANK_TOL * sigma_max count as zero in pseudoinverse.
RANK_TOL = 1e-12

#: Hard cap on Jacobi sweeps before giving up.
JACOBI_MAX_SWEEPS = 60

# A column pair (p, q) counts as orthogonal once |w_p . w_q| falls below
# this fraction of ||w_p|| * ||w_q||.  Relative to the column norms rather
# than to the whole matrix, so convergence does not depend on scale.
_JACOBI_TOL = 1e-14


class ConvergenceError(RuntimeError):
    """Raised when Jacobi sweeps fail to reach the orthogonality threshold."""


def as_matrix(values, name: str = "matrix") -> np.ndarray:
    """Coerce ``values`` to a float64 2-D array, rejecting NaN/Inf entries."""
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got array of shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must have positive dimensions, got {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def frobenius_norm(M: np.ndarray) -> float:
    """Square root of the sum of squared entries."""
    return float(np.linalg.norm(M))


def matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix product with an explicit inner-dimension check."""
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    return A @ B


def derive_seed(master_seed: int, index: int) -> int:
    """Derive an independent 64-bit substream seed from (master_seed, index).

    The mixing function is fixed: ``numpy.random.SeedSequence(master_seed,
    spawn_key=(index,))`` folded to its first 64-bit word.  Serial and
    parallel schedules that agree on indices therefore agree on streams.
    """
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(int(index),))
    return int(ss.generate_state(1, np.uint64)[0])


#: Identifier for the substream derivation above; recorded in reports.
SEED_MIX = "seedsequence-spawn/v1"


def gaussian_matrix(rows: int, cols: int, seed: int) -> np.ndarray:
    """Matrix with i.i.d. standard normal entries, reproducible per seed.

    Uniform doubles come from the counter-based Philox generator keyed by
    ``seed``; the Box-Muller transform turns pairs of them into normals.
    Entries fill the matrix column by column.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"dimensions must be positive, got {rows}x{cols}")
    gen = np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))
    n = rows * cols
    u = gen.random((2, (n + 1) // 2))
    radius = np.sqrt(-2.0 * np.log1p(-u[0]))  # log(1 - u) keeps the argument in (0, 1]
    angle = (2.0 * np.pi) * u[1]
    z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])
    return z[:n].reshape((rows, cols), order="F")


def thin_qr(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Householder QR: Q has M's shape and orthonormal columns, R is upper
    triangular with non-negative diagonal, and Q @ R reconstructs M.

    Requires rows >= cols.  Rank-deficient input still yields an orthonormal
    Q (the reflectors for vanished columns degenerate to the identity).
    """
    a, b = M.shape
    if a < b:
        raise ValueError(f"thin_qr needs rows >= cols, got {a}x{b}")
    R = np.array(M, dtype=np.float64)
    reflectors: list[np.ndarray | None] = []
    for k in range(b):
        x = R[k:, k]
        norm_x = np.linalg.norm(x)
        if norm_x == 0.0:
            reflectors.append(None)
            continue
        v = x.copy()
        v[0] += math.copysign(norm_x, x[0])
        v /= np.linalg.norm(v)
        R[k:, k:] -= 2.0 * np.outer(v, v @ R[k:, k:])
        reflectors.append(v)

    Q = np.eye(a, b)
    for k in range(b - 1, -1, -1):
        v = reflectors[k]
        if v is not None:
            Q[k:, :] -= 2.0 * np.outer(v, v @ Q[k:, :])

    R = np.triu(R[:b, :])
    flip = np.diag(R) < 0.0
    if flip.any():
        R[flip, :] *= -1.0
        Q[:, flip] *= -1.0
    return Q, R


def _jacobi_sweeps(W: np.ndarray, V: np.ndarray | None) -> None:
    """Cyclic one-sided Jacobi over row pairs of W (rotations mirrored into V).

    Rows of W play the role of the columns being orthogonalized; row layout
    keeps every access a contiguous view.  Stops once a full sweep performs
    no rotation; raises ConvergenceError after JACOBI_MAX_SWEEPS sweeps.
    W and V are modified in place.
    """
    b = W.shape[0]
    scratch_w = (np.empty(W.shape[1]), np.empty(W.shape[1]))
    scratch_v = None if V is None else (np.empty(V.shape[1]), np.empty(V.shape[1]))
    for _ in range(JACOBI_MAX_SWEEPS):
        # Refreshing the squared norms each sweep stops the O(1) updates
        # below from accumulating drift.
        norms2 = np.einsum("ij,ij->i", W, W)
        rotations = 0
        for p in range(b - 1):
            wp = W[p]
            for q in range(p + 1, b):
                alpha = norms2[p]
                beta = norms2[q]
                if alpha <= 0.0 or beta <= 0.0:
                    continue
                wq = W[q]
                gamma = float(wp @ wq)
                if abs(gamma) <= _JACOBI_TOL * math.sqrt(alpha * beta):
                    continue
                zeta = (beta - alpha) / (2.0 * gamma)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                _rotate_rows(wp, wq, c, s, scratch_w)
                if V is not None:
                    _rotate_rows(V[p], V[q], c, s, scratch_v)
                # cancellation can push a collapsing norm slightly negative
                norms2[p] = max(alpha - t * gamma, 0.0)
                norms2[q] = max(beta + t * gamma, 0.0)
                rotations += 1
        if rotations == 0:
            return
    raise ConvergenceError(
        f"one-sided Jacobi did not converge within {JACOBI_MAX_SWEEPS} sweeps"
    )


def _rotate_rows(xp, xq, c, s, scratch) -> None:
    """In-place plane rotation: (xp, xq) <- (c*xp - s*xq, s*xp + c*xq)."""
    sp, sq = scratch
    np.multiply(xp, s, out=sp)
    np.multiply(xq, s, out=sq)
    np.multiply(xp, c, out=xp)
    xp -= sq
    np.multiply(xq, c, out=xq)
    xq += sp


def _complete_basis(U: np.ndarray, missing: np.ndarray) -> None:
    """Fill the zero columns of U with unit vectors orthogonal to the rest."""
    a = U.shape[0]
    for j in missing:
        resid = np.eye(a) - U @ U.T
        k = int(np.argmax(np.einsum("ij,ij->j", resid, resid)))
        cand = resid[:, k]
        for _ in range(2):  # twice-is-enough re-orthogonalization
            cand = cand - U @ (U.T @ cand)
        U[:, j] = cand / np.linalg.norm(cand)


def svd_factors(M: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``(U, values, Vt)`` with k = min(a, b) columns/rows.

    U is a x k and Vt is k x b, both with orthonormal columns/rows; values
    are sorted non-increasing.  Columns of U belonging to zero singular
    values are completed to an arbitrary orthonormal set so U is always a
    valid basis.
    """
    a, b = M.shape
    if a < b:
        U, vals, Vt = svd_factors(M.T)
        return Vt.T, vals, U.T
    W = np.array(M.T, dtype=np.float64, order="C")  # row j holds column j of M
    V = np.eye(b)  # row j holds right singular vector j
    _jacobi_sweeps(W, V)
    vals = np.sqrt(np.einsum("ij,ij->i", W, W))
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    W = W[order]
    V = V[order]
    U = np.zeros((a, b))
    positive = vals > 0.0
    U[:, positive] = (W[positive] / vals[positive, None]).T
    if not positive.all():
        _complete_basis(U, np.flatnonzero(~positive))
    return U, vals, V


@dataclass(frozen=True)
class SingularSpectrum:
    """Non-increasing, non-negative singular values plus their source shape.

    The sum of squared values equals the squared Frobenius norm of the
    source matrix, which makes the spectrum the natural carrier for tail
    energies and optimal-error floors.
    """

    values: np.ndarray
    source_dims: tuple[int, int]

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "source_dims", (int(self.source_dims[0]), int(self.source_dims[1])))
        a, b = self.source_dims
        if vals.ndim != 1:
            raise ValueError("spectrum values must be a 1-D array")
        if len(vals) > min(a, b):
            raise ValueError(f"spectrum of length {len(vals)} exceeds min{self.source_dims}")
        if len(vals) and ((vals < 0.0).any() or not np.isfinite(vals).all()):
            raise ValueError("singular values must be finite and non-negative")
        if (np.diff(vals) > 0.0).any():
            raise ValueError("singular values must be sorted non-increasing")

    def __len__(self) -> int:
        return len(self.values)

    def total_energy(self) -> float:
        """Sum of squared singular values (= squared Frobenius norm)."""
        return float(np.sum(self.values**2))


def singular_values(M: np.ndarray) -> SingularSpectrum:
    """Full singular spectrum of M, length min(a, b), non-increasing."""
    a, b = M.shape
    W = np.array(M.T if a >= b else M, dtype=np.float64, order="C")
    _jacobi_sweeps(W, None)
    vals = np.sqrt(np.einsum("ij,ij->i", W, W))
    vals[::-1].sort()
    return SingularSpectrum(values=vals, source_dims=(a, b))


def pseudoinverse(M: np.ndarray) -> np.ndarray:
    """Moore-Penrose pseudoinverse via the SVD.

    Singular values below ``RANK_TOL * sigma_max`` are treated as exact
    zeros, so numerically rank-deficient input yields the pseudoinverse of
    its dominant part instead of an explosion.
    """
    U, vals, Vt = svd_factors(M)
    if len(vals) == 0 or vals[0] == 0.0:
        return np.zeros((M.shape[1], M.shape[0]))
    keep = vals > RANK_TOL * vals[0]
    inv = np.zeros_like(vals)
    inv[keep] = 1.0 / vals[keep]
    return (Vt.T * inv) @ U.T
