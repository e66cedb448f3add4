import math

import numpy as np
import pytest

from dirichletlab.errors import ValidationError
from dirichletlab.geometry import disk_family
from dirichletlab.gram import (
    GramMatrix,
    bernstein_certificate,
    build_gram,
    nu_bound,
    tec_report,
)
from dirichletlab.seqs import dyadic
from dirichletlab.spectra import eigh

DELTA = 1.0 / 200.0


@pytest.fixture(scope="module")
def small_gram():
    fam = disk_family(dyadic(4), DELTA, 4)
    return build_gram(fam, m=8)


def test_entries_match_closed_form(small_gram):
    # the kernel is holomorphic in one slot and anti-holomorphic in the
    # other, so both disk averages collapse to the center value and
    # m_ij = r_i r_j / s_ij^2 exactly
    fam = small_gram.family
    for i in range(1, 5):
        for j in range(1, 5):
            expected = fam.radii[i - 1] * fam.radii[j - 1] / fam.s(i, j) ** 2
            got = small_gram.entries[i - 1, j - 1]
            assert math.isclose(got, expected, rel_tol=1e-10)


def test_gram_symmetry_and_psd(small_gram):
    E = small_gram.entries
    assert np.array_equal(E, E.T)
    assert np.all(small_gram.diag > 0.0)
    lam = eigh(E)
    assert lam[-1] >= -1e-14 * np.trace(E)


def test_gram_diag_matches_eps_prime(small_gram):
    ep = small_gram.family.eps_prime
    assert np.allclose(small_gram.diag, ep**2, rtol=1e-10, atol=0.0)


def test_gram_doubling_residual_recorded(small_gram):
    assert small_gram.order == 8
    assert small_gram.doubling_residual is not None
    assert small_gram.doubling_residual <= 1e-8


def test_gram_without_verification():
    fam = disk_family(dyadic(2), DELTA, 2)
    M = build_gram(fam, m=6, verify=False)
    assert M.order == 6
    assert M.doubling_residual is None


def test_nu_is_row_scaled_offdiagonal(small_gram):
    nu = small_gram.nu()
    d = small_gram.diag
    assert np.all(np.diag(nu) == 0.0)
    for i in range(4):
        for j in range(4):
            if i != j:
                assert nu[i, j] == small_gram.entries[i, j] / d[i]


def test_nu_bound_values():
    assert nu_bound(1, 1, DELTA) == 0.0
    assert nu_bound(1, 3, DELTA) == 32.0 * DELTA**2
    assert nu_bound(3, 1, DELTA) == 32.0 * (2.0 * DELTA) ** 2
    assert nu_bound(2, 3, DELTA) == 32.0 * DELTA


def test_tec_report_all_margins_positive(small_gram):
    rep = tec_report(small_gram)
    assert rep.all_pass
    assert rep.diag_floor_margin.shape == (4,)
    assert rep.diag_window_margin.shape == (4,)
    assert rep.offdiag_margin.shape == (6,)
    assert rep.nu_margin.shape == (12,)
    assert np.all(rep.row_sum_margin > 0.0)
    assert np.all(rep.col_sum_margin > 0.0)


def test_nu_row_sums_below_hand_bound(small_gram):
    # sum of the decay bounds over a row is at most
    # 32 (delta/(1-delta) + 2 delta/(1-2 delta)) <= 32 * 3 delta / (1-2 delta)
    # = 96/198 < 1/2 at delta = 1/200
    hand = 96.0 / 198.0
    assert hand < 0.5
    sums = np.abs(small_gram.nu()).sum(axis=1)
    assert np.all(sums <= hand)


def test_certificate_chain(small_gram):
    rep = bernstein_certificate(small_gram)
    assert rep.applicable
    assert rep.passed
    eps4 = small_gram.family.eps.values[3]
    assert rep.target_sq == eps4**2 / 64.0
    assert rep.target == eps4 / 8.0
    d = small_gram.diag
    assert rep.certified_lower == (1.0 - rep.beta_hat) * d.min()
    assert rep.certified_lower <= rep.lambda_min <= d.min() * (1.0 + 1e-12)
    assert rep.lambda_min >= rep.target_sq
    assert rep.beta_hat <= 0.5
    # q = max(1/2, beta) with beta below 1/2 here, so the bottom Neumann
    # bound is exactly half the smallest diagonal entry
    assert rep.neumann.q == 0.5
    assert rep.neumann.bounds[-1] == d.min() / 2.0
    assert rep.lambda_min >= rep.neumann.bounds[-1]
    names = [c.name for c in rep.checks]
    assert len(names) == 7 and len(set(names)) == 7
    assert all(c.passed for c in rep.checks)


def test_certificate_diagonal_matrix_is_tight():
    # with nu = 0 the Schur bound vanishes and the certified floor equals
    # the smallest diagonal entry exactly
    fam = disk_family(dyadic(3), DELTA, 3)
    entries = np.diag(fam.eps_prime**2)
    M = GramMatrix(n=3, entries=entries, family=fam, order=1,
                   doubling_residual=None)
    rep = bernstein_certificate(M)
    assert rep.beta_hat == 0.0
    assert rep.certified_lower == rep.lambda_min == float(np.diag(entries).min())
    assert rep.passed


def test_build_gram_validations():
    fam = disk_family(dyadic(2), DELTA, 2)
    with pytest.raises(ValidationError):
        build_gram(fam, m=0)
    big = disk_family(dyadic(13), DELTA, 13)
    with pytest.raises(ValidationError):
        build_gram(big, m=4)
