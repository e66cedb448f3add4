"""Finite compressions of the Toeplitz operator of the counting measure.

In the normalized monomial basis e_k = sqrt(k+1) z^k of the Bergman
space, the operator has matrix t_jk = sqrt((j+1)(k+1)) mu_hat_jk with
mu_hat_jk = int w^k conj(w)^j dmu.  Truncations are Gram matrices of the
e_k in L^2(mu), hence PSD, and their eigenvalues grow with the
truncation size by Cauchy interlacing, approaching the operator's
singular values from below.  Quadrature orders are chosen so every
moment is integrated exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spectra
from .errors import NumericIntegrityError, ValidationError
from .geometry import CuspProfile
from .quad import _cusp_nodes, _disk_rule

K_CAP = 400
PSD_RTOL = 1e-12


@dataclass(frozen=True)
class MomentMatrix:
    K: int
    entries: np.ndarray             # sqrt((j+1)(k+1)) mu_hat_jk, symmetric
    moments: np.ndarray             # mu_hat_jk itself
    order: int
    spectrum: np.ndarray            # eigenvalues, non-increasing

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries))


def _region_nodes(region, K: int, m):
    if region is None:
        # unit disk calibration: radial degree K-1 needs order >= K/2,
        # and 4m angular points alias only differences >= 4m > K-1
        order = int(m) if m else (K + 1) // 2
        if not (2 * order >= K and 4 * order > K - 1):
            raise ValidationError(f"order {order} cannot resolve K = {K}")
        pts, wts = _disk_rule(order)
        return pts, wts, order
    if isinstance(region, CuspProfile):
        # monomial total degree reaches 2K - 2; mt = my = K is exact
        order = int(m) if m else max(K, 8)
        if order < K:
            raise ValidationError(f"order {order} below exactness floor {K}")
        pts, wts = _cusp_nodes(region, order, order)
        return pts, wts, order
    raise ValidationError("region must be a cusp profile or None (unit disk)")


def _moment_table(pts, wts, K: int) -> np.ndarray:
    H = np.zeros((K, K), dtype=complex)
    block = max(1, (1 << 21) // K)
    for lo in range(0, pts.size, block):
        V = np.vander(pts[lo:lo + block], K, increasing=True)
        H += (V.conj() * wts[lo:lo + block, None]).T @ V
    return 0.5 * (H + H.conj().T)


def moment_matrix(region, K: int, m: int = None) -> MomentMatrix:
    """Moment matrix of the region's counting measure, truncation K.

    ``region`` is a cusp profile, or None for the unit disk itself, where
    monomial orthogonality makes the matrix the identity (calibration).
    """
    if not (1 <= K <= K_CAP):
        raise ValidationError(f"K must lie in 1..{K_CAP}")
    pts, wts, order = _region_nodes(region, K, m)
    H = _moment_table(pts, wts, K)
    scale = np.max(np.abs(H))
    if np.max(np.abs(H.imag)) > 1e-10 * max(scale, 1e-300):
        raise NumericIntegrityError(
            "moment table has an imaginary residue; the regions here are"
            " conjugation-symmetric, so this signals a quadrature bug")
    moments = H.real
    root = np.sqrt(np.arange(1, K + 1, dtype=float))
    entries = root[:, None] * moments * root[None, :]
    spectrum = spectra.eigh(entries)
    if spectrum[-1] < -PSD_RTOL * np.trace(entries):
        raise NumericIntegrityError(
            f"moment matrix lost positive semidefiniteness: {spectrum[-1]:.3e}")
    return MomentMatrix(K=K, entries=entries, moments=moments, order=order,
                        spectrum=spectrum)


@dataclass(frozen=True)
class CompressionScan:
    """Eigenvalues of nested truncations of one moment matrix.

    All truncations are principal submatrices of the same assembled
    matrix, so lambda_n is non-decreasing in K exactly, not merely up to
    re-quadrature noise.
    """

    Ks: tuple[int, ...]
    matrix: MomentMatrix
    spectrum_by_K: dict

    def eigenvalue(self, n: int, K: int) -> float:
        return float(self.spectrum_by_K[K][n - 1])


def compression_scan(region, Ks, m: int = None) -> CompressionScan:
    Ks = sorted({int(K) for K in Ks})
    if not Ks or Ks[0] < 1:
        raise ValidationError("truncation sizes must be positive")
    M = moment_matrix(region, Ks[-1], m)
    by_K = {}
    for K in Ks:
        by_K[K] = M.spectrum if K == M.K else spectra.eigh(M.entries[:K, :K])
    return CompressionScan(Ks=tuple(Ks), matrix=M, spectrum_by_K=by_K)


def floor_crossings(scan: CompressionScan, floors) -> list:
    """Per index n: smallest K in the scan with sqrt(lambda_n^(K)) at or
    above floors[n-1], or None.  Convergence is from below, so a missing
    crossing is a report, not a failure."""
    floors = np.asarray(floors, dtype=float)
    out = []
    for n in range(1, len(floors) + 1):
        hit = None
        for K in scan.Ks:
            if K >= n and np.sqrt(max(scan.eigenvalue(n, K), 0.0)) >= floors[n - 1]:
                hit = K
                break
        out.append((n, hit))
    return out
