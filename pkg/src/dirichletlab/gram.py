"""Gram matrix of the normalized disk indicators and its certificates.

The test functions f_j = (1/r_j) 1_{D(c_j, r_j)} are orthonormal in
L^2(mu) for mu = 1_Omega dA.  Their Gram matrix under the Bergman
pairing,

    m_ij = (1/(r_i r_j)) double integral over D_i x D_j of 1/(1 - w conj(z))^2,

is assembled by tensor disk quadrature in centered coordinates.  The
report and certificate operations verify the diagonal floors, the
geometric off-diagonal decay, the Schur bound on the scaled off-diagonal
part, and the resulting smallest-eigenvalue floor.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import spectra
from .errors import AccuracyWarning, NumericIntegrityError, ValidationError
from .geometry import DiskFamily
from .quad import ORDER_CAP, _disk_rule, integrate_disk, kernel_centered

MAX_N = 12              # kernel guard stays far above underflow through here
IMAG_RTOL = 1e-12
DOUBLING_RTOL = 1e-8
_BLOCK = 1 << 23        # elements per kernel chunk (keeps buffers recyclable)


@dataclass(frozen=True)
class GramMatrix:
    n: int
    entries: np.ndarray
    family: DiskFamily
    order: int
    doubling_residual: float | None

    @property
    def diag(self) -> np.ndarray:
        return np.diag(self.entries).copy()

    def nu(self) -> np.ndarray:
        """Row-scaled off-diagonal part: nu_ij = m_ij / m_ii, zero diagonal."""
        out = self.entries / self.diag[:, None]
        np.fill_diagonal(out, 0.0)
        return out


def _inner_over_xi(i, j, zeta_block, xi, wxi, family):
    K = kernel_centered(i, j, xi[:, None], zeta_block[None, :], family)
    return wxi @ K


def _entry_raw(i, j, family, m, half):
    """Quadrature value of the double disk integral of the centered kernel."""
    xi, wxi = _disk_rule(m)
    block = max(1, _BLOCK // xi.size)
    if half:
        zeta, wz = _disk_rule(m, half=True)
        acc = 0.0 + 0.0j
        for lo in range(0, zeta.size, block):
            inner = _inner_over_xi(i, j, zeta[lo:lo + block], xi, wxi, family)
            acc += inner @ wz[lo:lo + block]
        return acc

    def inner_all(zeta_nodes):
        out = np.empty(zeta_nodes.size, dtype=complex)
        for lo in range(0, zeta_nodes.size, block):
            out[lo:lo + block] = _inner_over_xi(
                i, j, zeta_nodes[lo:lo + block], xi, wxi, family)
        return out

    return integrate_disk(inner_all, 0.0 + 0.0j, 1.0, m)


def _assemble(family: DiskFamily, m: int, half: bool) -> np.ndarray:
    n = family.n
    E = np.zeros((n, n))
    r = family.radii
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            acc = _entry_raw(i, j, family, m, half)
            if not half and abs(acc.imag) > IMAG_RTOL * abs(acc.real):
                raise NumericIntegrityError(
                    f"Gram entry ({i},{j}) has imaginary residue "
                    f"{acc.imag:.3e} against {acc.real:.3e}")
            val = r[i - 1] * r[j - 1] * acc.real
            E[i - 1, j - 1] = E[j - 1, i - 1] = val
    return E


def build_gram(family: DiskFamily, m: int = 32, verify: bool = True) -> GramMatrix:
    """Assemble the Gram matrix at quadrature order m.

    With ``verify`` the entries are recomputed at order 2m (conjugate-folded
    angular rule) and must agree to 1e-8 relative; on failure the order is
    doubled up to the cap.  Positive semidefiniteness is checked against
    -1e-14 * trace.
    """
    if not (1 <= family.n <= MAX_N):
        raise ValidationError(f"family size must lie in 1..{MAX_N}")
    if not (1 <= m <= ORDER_CAP):
        raise ValidationError(f"order must lie in 1..{ORDER_CAP}")
    order = m
    entries = _assemble(family, order, half=False)
    residual = None
    while verify:
        if 2 * order > ORDER_CAP:
            warnings.warn("Gram entries did not stabilize below order cap",
                          AccuracyWarning, stacklevel=2)
            break
        check = _assemble(family, 2 * order, half=True)
        residual = float(np.max(np.abs(check - entries)
                                / np.maximum(np.abs(check), 1e-300)))
        if residual <= DOUBLING_RTOL:
            break
        order *= 2
        entries = check
    lam = spectra.eigh(entries)
    if lam[-1] < -1e-14 * np.trace(entries):
        raise NumericIntegrityError(
            f"Gram matrix lost positive semidefiniteness: {lam[-1]:.3e}")
    return GramMatrix(n=family.n, entries=entries, family=family,
                      order=order, doubling_residual=residual)


# ---------------------------------------------------------------------------
# inequality report


def nu_bound(i: int, j: int, delta: float) -> float:
    """Decay bound for nu_ij: 32 delta^(j-i) above, 32 (2 delta)^(i-j) below."""
    if i == j:
        return 0.0
    if i < j:
        return 32.0 * delta ** (j - i)
    return 32.0 * (2.0 * delta) ** (i - j)


@dataclass(frozen=True)
class TecReport:
    """Margins for every Gram inequality; a failure is a report entry."""

    n: int
    eps_prime: np.ndarray
    nu: np.ndarray
    diag_floor_margin: np.ndarray       # m_ii - eps_i^2 / 32
    diag_window_margin: np.ndarray      # 32 r_i^3/(1-c_i)^3 - |m_ii - eps'_i^2|
    offdiag_margin: np.ndarray          # eps_i eps_j delta^(j-i) - |m_ij|, i < j
    nu_margin: np.ndarray               # bound - |nu_ij|, i != j
    row_sum_margin: np.ndarray          # 1/2 - row sums of |nu|
    col_sum_margin: np.ndarray

    @property
    def all_pass(self) -> bool:
        return all(np.all(m > 0.0) for m in (
            self.diag_floor_margin, self.diag_window_margin,
            self.offdiag_margin, self.nu_margin,
            self.row_sum_margin, self.col_sum_margin))


def tec_report(M: GramMatrix) -> TecReport:
    fam = M.family
    n = M.n
    eps = np.array(fam.eps.values[:n])
    pows = fam.delta_pows
    d = M.diag
    ep = fam.eps_prime
    # 32 r_i^3 / (1 - c_i)^3 with 1 - c_i = 2 delta^i, kept in power form
    window = 32.0 * fam.radii ** 3 / (8.0 * pows ** 3)
    nu = M.nu()
    iu, ju = np.triu_indices(n, k=1)
    off_bound = eps[iu] * eps[ju] * fam.delta ** (ju - iu)
    nub = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            nub[i, j] = nu_bound(i + 1, j + 1, fam.delta)
    mask = ~np.eye(n, dtype=bool)
    abs_nu = np.abs(nu)
    return TecReport(
        n=n,
        eps_prime=ep,
        nu=nu,
        diag_floor_margin=d - eps ** 2 / 32.0,
        diag_window_margin=window - np.abs(d - ep ** 2),
        offdiag_margin=off_bound - np.abs(M.entries[iu, ju]),
        nu_margin=(nub - abs_nu)[mask],
        row_sum_margin=0.5 - abs_nu.sum(axis=1),
        col_sum_margin=0.5 - abs_nu.sum(axis=0),
    )


# ---------------------------------------------------------------------------
# certificate


@dataclass(frozen=True)
class CheckResult:
    """One verified inequality: value (op) bound, with headroom and the
    source of the computed value."""

    name: str
    value: float
    bound: float
    op: str                 # "<=" or ">="
    margin: float
    passed: bool
    source: str


def _check(name, value, bound, op, source) -> CheckResult:
    margin = (bound - value) if op == "<=" else (value - bound)
    return CheckResult(name=name, value=float(value), bound=float(bound),
                       op=op, margin=float(margin), passed=bool(margin >= 0.0),
                       source=source)


@dataclass(frozen=True)
class CertificateReport:
    applicable: bool
    beta_hat: float
    lambda_min: float
    certified_lower: float | None
    eigenvalues: np.ndarray
    target_sq: float            # eps_n^2 / 64
    target: float               # eps_n / 8
    neumann: spectra.NeumannBounds | None
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return self.applicable and all(c.passed for c in self.checks)


def bernstein_certificate(M: GramMatrix) -> CertificateReport:
    """Smallest-eigenvalue floor for the Gram matrix.

    Chain: the scaled off-diagonal part N has Schur bound beta < 1, so
    M = D(I + N) yields lambda_min(M) >= (1 - beta) min_i m_ii; the floor
    targets are eps_n^2/64 for lambda_min and eps_n/8 for its square root.
    """
    n = M.n
    d = M.diag
    if np.any(d <= 0.0):
        raise ValidationError("Gram diagonal must be positive")
    eps_n = M.family.eps.values[n - 1]
    target_sq = eps_n ** 2 / 64.0
    target = eps_n / 8.0
    nu = M.nu()
    beta = spectra.schur_bound(nu) if n > 1 else 0.0
    lam = spectra.eigh(M.entries)
    lam_min = float(lam[-1])
    if beta >= 1.0:
        return CertificateReport(
            applicable=False, beta_hat=beta, lambda_min=lam_min,
            certified_lower=None, eigenvalues=lam, target_sq=target_sq,
            target=target, neumann=None, checks=(
                _check("schur_contraction", beta, 1.0, "<=", "schur"),))
    cert = (1.0 - beta) * float(d.min())
    q = max(0.5, beta)
    nb = spectra.neumann_lower(d, nu, q)
    checks = (
        _check("schur_bound_le_half", beta, 0.5, "<=", "schur"),
        _check("lambda_min_ge_target", lam_min, target_sq, ">=", "eigensolver"),
        _check("sqrt_lambda_min_ge_target", np.sqrt(max(lam_min, 0.0)), target,
               ">=", "eigensolver"),
        _check("certified_lower_ge_target", cert, target_sq, ">=", "schur"),
        _check("certified_lower_le_lambda_min", cert, lam_min, "<=",
               "schur+eigensolver"),
        _check("lambda_min_le_min_diag", lam_min, float(d.min()), "<=",
               "eigensolver"),
        _check("neumann_floor", lam_min, float(nb.bounds[n - 1]), ">=",
               "neumann"),
    )
    return CertificateReport(
        applicable=True, beta_hat=float(beta), lambda_min=lam_min,
        certified_lower=cert, eigenvalues=lam, target_sq=target_sq,
        target=target, neumann=nb, checks=checks)
