"""Dense symmetric eigenvalues, singular values, and norm certificates.

The eigensolver is a cyclic Jacobi iteration.  The Gram and moment
matrices here are graded (diagonals spanning many orders of magnitude),
where Jacobi keeps small eigenvalues to high relative accuracy while a
tridiagonalization-based solver would only be absolutely accurate.
Matrices are plain numpy arrays; validation happens at operation entry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericIntegrityError, ValidationError

OFF_RTOL = 1e-13      # off-diagonal Frobenius target, relative to ||A||_F
MAX_SWEEPS = 60


def _as_real_symmetric(A) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError("matrix must be square")
    if not np.all(np.isfinite(A.view(float) if A.dtype.kind == "c" else A)):
        raise ValidationError("matrix entries must be finite")
    scale = np.max(np.abs(A)) if A.size else 0.0
    if np.iscomplexobj(A):
        if np.max(np.abs(A.imag)) > 1e-12 * max(scale, 1e-300):
            raise ValidationError(
                "only real symmetric matrices are supported; the constructions"
                " here are conjugation-symmetric, so genuine complex input"
                " signals an upstream bug")
        A = A.real
    A = np.array(A, dtype=float)
    if A.size and np.max(np.abs(A - A.T)) > 1e-12 * max(scale, 1e-300):
        raise ValidationError("matrix is not symmetric")
    return A


def eigh(A) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix, sorted non-increasing.

    Cyclic Jacobi sweeps until the off-diagonal Frobenius norm drops below
    1e-13 times the Frobenius norm of the input.  Ties in the final sort
    are broken by original index (stable descending).
    """
    S = _as_real_symmetric(A).copy()
    n = S.shape[0]
    if n == 1:
        return S[0, :1].copy()
    frob = float(np.linalg.norm(S))
    trace = float(np.trace(S))
    if frob == 0.0:
        return np.zeros(n)
    threshold = OFF_RTOL * frob
    idx = np.arange(n)
    for _ in range(MAX_SWEEPS):
        off = float(np.linalg.norm(S - np.diag(np.diag(S))))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = S[p, q]
                if apq == 0.0:
                    continue
                theta = 0.5 * (S[q, q] - S[p, p]) / apq
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.sign(theta) / (abs(theta) + np.hypot(1.0, theta))
                    if theta == 0.0:
                        t = 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                app, aqq = S[p, p], S[q, q]
                rp = S[p, :].copy()
                rq = S[q, :].copy()
                S[p, :] = c * rp - s * rq
                S[q, :] = s * rp + c * rq
                S[:, p] = S[p, :]
                S[:, q] = S[q, :]
                S[p, p] = app - t * apq
                S[q, q] = aqq + t * apq
                S[p, q] = 0.0
                S[q, p] = 0.0
    else:
        raise NumericIntegrityError("Jacobi iteration failed to converge")
    vals = np.diag(S).copy()
    if abs(vals.sum() - trace) > 1e-12 * max(abs(trace), frob):
        raise NumericIntegrityError("eigenvalue sum drifted from the trace")
    order = np.lexsort((idx, -vals))
    return vals[order]


def singular_values(A) -> np.ndarray:
    """Singular values (non-increasing) via eigenvalues of A^T A."""
    A = np.asarray(A, dtype=float if not np.iscomplexobj(A) else complex)
    if A.ndim != 2:
        raise ValidationError("matrix must be 2-dimensional")
    if np.iscomplexobj(A):
        scale = np.max(np.abs(A)) if A.size else 0.0
        if A.size and np.max(np.abs(A.imag)) > 1e-12 * max(scale, 1e-300):
            raise ValidationError("only real matrices are supported")
        A = A.real.astype(float)
    H = A.T @ A
    lam = eigh(H)
    return np.sqrt(np.clip(lam, 0.0, None))


def schur_bound(A) -> float:
    """sqrt(max row abs sum * max column abs sum) >= spectral norm."""
    A = np.abs(np.asarray(A, dtype=float))
    if A.ndim != 2 or A.size == 0:
        raise ValidationError("matrix must be 2-dimensional and non-empty")
    alpha = float(A.sum(axis=1).max())
    beta = float(A.sum(axis=0).max())
    return float(np.sqrt(alpha * beta))


@dataclass(frozen=True)
class NeumannBounds:
    """Per-index lower bounds d_(n) (1 - q) for the singular values of
    Dg(I + N); inapplicable when the supplied q reaches 1."""

    applicable: bool
    q: float
    bounds: np.ndarray | None


def neumann_lower(diag, N, q: float) -> NeumannBounds:
    """Lower bounds b_n >= d_(n) (1 - q) for M = Dg(I + N) with ||N|| <= q.

    d_(n) is the n-th largest diagonal entry.  The factor (1 - q) comes
    from inverting I + N by its Neumann series: ||(I + N)^-1|| <= 1/(1 - q),
    so b_n(M) >= b_n(Dg) (1 - q).  For q = 1/2 this is the m_nn/2 bound.
    """
    d = np.asarray(diag, dtype=float).ravel()
    if d.size == 0 or np.any(d <= 0.0):
        raise ValidationError("diagonal must be positive")
    N = np.asarray(N, dtype=float)
    if N.shape != (d.size, d.size):
        raise ValidationError("N must be square and match the diagonal")
    if not (q >= 0.0):
        raise ValidationError("q must be non-negative")
    if q >= 1.0:
        return NeumannBounds(applicable=False, q=float(q), bounds=None)
    return NeumannBounds(applicable=True, q=float(q),
                         bounds=np.sort(d)[::-1] * (1.0 - q))
