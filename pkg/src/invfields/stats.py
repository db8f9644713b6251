"""Monte-Carlo estimators and hypothesis tests for coefficient distributions.

Invariance is tested on coefficient vectors rather than on pointwise field
values: rotating a field acts on its coefficients by an exactly computable
unitary matrix, so two-sample tests between baseline and rotated draws carry
no quadrature error.  All tests are deterministic given the seed and stream
assignment; multiple comparisons are Bonferroni-corrected and the reported
p-value is the smallest adjusted one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as _scipy_stats

from . import irrep
from .bases import SelfConjBasis
from .fields import rotate_coeff_rows
from .groups import RngStream

ALPHAS = (0.05, 0.01, 0.001)


@dataclass(frozen=True)
class TestReport:
    statistic: float
    p_value: float
    reject_at: dict
    n: int


@dataclass(frozen=True)
class CovarianceEstimate:
    C_hat: np.ndarray
    std_err: np.ndarray
    n: int


@dataclass(frozen=True)
class ColumnStructureReport:
    max_cross_column: float
    max_cross_ratio: float
    max_within_deviation: float
    max_within_ratio: float
    threshold: float
    passed: bool
    pooled: CovarianceEstimate
    n: int


def _report(statistic: float, p_value: float, n: int) -> TestReport:
    p = float(min(1.0, max(0.0, p_value)))
    return TestReport(
        statistic=float(statistic),
        p_value=p,
        reject_at={alpha: p < alpha for alpha in ALPHAS},
        n=int(n),
    )


def _numerically_zero(x: np.ndarray, y: np.ndarray) -> bool:
    # structurally-zero components (e.g. the imaginary part of a real
    # coordinate) carry only roundoff; comparing their float noise would
    # manufacture rejections
    return bool(np.abs(x).max() < 1e-12 and np.abs(y).max() < 1e-12)


def estimate_cov(samples: np.ndarray) -> CovarianceEstimate:
    """Centered empirical covariance C[i,k] = mean(x_i conj(x_k)) with plug-in errors."""
    x = np.asarray(samples, dtype=complex)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("need at least 2 sample vectors")
    n = x.shape[0]
    x = x - x.mean(axis=0, keepdims=True)
    c = np.einsum("ni,nk->ik", x, x.conj()) / n
    sq = np.abs(x) ** 2
    second = np.einsum("ni,nk->ik", sq, sq) / n
    var = np.maximum(0.0, second - np.abs(c) ** 2)
    return CovarianceEstimate(C_hat=c, std_err=np.sqrt(var / n), n=n)


def check_column_structure(matrix_samples: np.ndarray, threshold: float = 4.0):
    """Covariance structure of coefficient matrices: column independence and
    column-independent within-column covariance.

    Estimates Cov(B_ij, B_kl) for all quadruples, then checks that (i) every
    cross-column covariance (j != l) and (ii) every deviation of a
    within-column covariance matrix from their pooled mean stays below
    `threshold` plug-in standard errors.
    """
    b = np.asarray(matrix_samples, dtype=complex)
    if b.ndim != 3 or b.shape[1] != b.shape[2]:
        raise ValueError("matrix_samples must be (n, d, d)")
    n, d = b.shape[0], b.shape[1]
    if n < 2:
        raise ValueError("need at least 2 sample matrices")
    b = b - b.mean(axis=0, keepdims=True)
    cov = np.einsum("nij,nkl->ijkl", b, b.conj()) / n
    sq = np.abs(b) ** 2
    second = np.einsum("nij,nkl->ijkl", sq, sq) / n
    se = np.sqrt(np.maximum(0.0, second - np.abs(cov) ** 2) / n)

    def ratios(vals, errs):
        out = np.zeros_like(vals)
        np.divide(vals, errs, out=out, where=errs > 0)
        return out

    cross_mask = ~np.eye(d, dtype=bool)[None, :, None, :]
    cross_vals = np.abs(cov) * cross_mask
    cross_ratio = ratios(np.abs(cov), se) * cross_mask

    within = np.einsum("ijkj->jik", cov)
    within_se = np.einsum("ijkj->jik", se)
    pooled = within.mean(axis=0)
    dev = np.abs(within - pooled[None])
    dev_ratio = ratios(dev, within_se)

    pooled_second = np.einsum("ijkj->ik", second) / d
    pooled_se = np.sqrt(np.maximum(0.0, pooled_second - np.abs(pooled) ** 2) / (n * d))
    passed = bool(cross_ratio.max() < threshold and dev_ratio.max() < threshold)
    return ColumnStructureReport(
        max_cross_column=float(cross_vals.max()),
        max_cross_ratio=float(cross_ratio.max()),
        max_within_deviation=float(dev.max()),
        max_within_ratio=float(dev_ratio.max()),
        threshold=threshold,
        passed=passed,
        pooled=CovarianceEstimate(C_hat=pooled, std_err=pooled_se, n=n * d),
        n=n,
    )


def ks_two_sample(x, y) -> TestReport:
    """Two-sample Kolmogorov-Smirnov test with the asymptotic p-value."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size == 0 or y.size == 0:
        raise ValueError("samples must be nonempty")
    res = _scipy_stats.ks_2samp(x, y, method="asymp")
    return _report(res.statistic, res.pvalue, x.size + y.size)


def invariance_test(sampler, basis: SelfConjBasis, g_list, n: int, rng: RngStream) -> TestReport:
    """Two-sample comparison of baseline draws against independently drawn,
    rotated draws, per rotation and per coordinate.

    sampler(rng, n) must return an (n, dim) array of coefficient rows.  For
    each g the real part, imaginary part and modulus of every coordinate are
    compared by ks_two_sample; the report carries the smallest
    Bonferroni-adjusted p-value and the statistic that achieved it.
    """
    g_list = list(g_list)
    if not g_list:
        raise ValueError("g_list must be nonempty")
    if n < 1000:
        raise ValueError("need n >= 1000 draws per group")
    streams = rng.split(len(g_list) + 1)
    baseline = np.asarray(sampler(streams[0], n))
    d = baseline.shape[1]
    n_tests = 3 * d * len(g_list)
    best_p, best_stat = 1.0, 0.0
    for g, stream in zip(g_list, streams[1:]):
        fresh = np.asarray(sampler(stream, n))
        rotated = rotate_coeff_rows(basis, g, fresh)
        for j in range(d):
            for base_col, rot_col in (
                (baseline[:, j].real, rotated[:, j].real),
                (baseline[:, j].imag, rotated[:, j].imag),
                (np.abs(baseline[:, j]), np.abs(rotated[:, j])),
            ):
                if _numerically_zero(base_col, rot_col):
                    continue
                rep = ks_two_sample(base_col, rot_col)
                if rep.p_value < best_p:
                    best_p, best_stat = rep.p_value, rep.statistic
    return _report(best_stat, best_p * n_tests, n)


def invariance_from_draws(
    basis: SelfConjBasis, baseline: np.ndarray, fresh: np.ndarray, g_list
) -> TestReport:
    """invariance_test on pre-drawn groups: fresh is rotated by each g and
    compared to baseline coordinatewise (the fresh group is reused across g's,
    which the Bonferroni union bound tolerates)."""
    g_list = list(g_list)
    if not g_list:
        raise ValueError("g_list must be nonempty")
    baseline = np.asarray(baseline)
    fresh = np.asarray(fresh)
    if baseline.shape[0] < 2 or fresh.shape[0] < 2:
        raise ValueError("need at least 2 draws per group")
    d = baseline.shape[1]
    n_tests = 3 * d * len(g_list)
    best_p, best_stat = 1.0, 0.0
    for g in g_list:
        rotated = rotate_coeff_rows(basis, g, fresh)
        for j in range(d):
            for base_col, rot_col in (
                (baseline[:, j].real, rotated[:, j].real),
                (baseline[:, j].imag, rotated[:, j].imag),
                (np.abs(baseline[:, j]), np.abs(rotated[:, j])),
            ):
                if _numerically_zero(base_col, rot_col):
                    continue
                rep = ks_two_sample(base_col, rot_col)
                if rep.p_value < best_p:
                    best_p, best_stat = rep.p_value, rep.statistic
    return _report(best_stat, best_p * n_tests, min(baseline.shape[0], fresh.shape[0]))


def matrix_invariance_test(sampler, ell: int, g_list, n: int, rng: RngStream) -> TestReport:
    """Invariance of coefficient-matrix laws under right multiplication by D(g).

    sampler(rng, n) must return (n, d, d) matrices; for each g a fresh group
    of draws is multiplied by the degree-ell representation matrix and every
    entry's real part, imaginary part and modulus are compared to baseline.
    """
    g_list = list(g_list)
    if not g_list:
        raise ValueError("g_list must be nonempty")
    if n < 1000:
        raise ValueError("need n >= 1000 draws per group")
    streams = rng.split(len(g_list) + 1)
    baseline = np.asarray(sampler(streams[0], n))
    d = baseline.shape[1]
    n_tests = 3 * d * d * len(g_list)
    best_p, best_stat = 1.0, 0.0
    flat_base = baseline.reshape(n, d * d)
    for g, stream in zip(g_list, streams[1:]):
        fresh = np.asarray(sampler(stream, n))
        rotated = (fresh @ irrep.rep_matrix(ell, g)).reshape(n, d * d)
        for j in range(d * d):
            for base_col, rot_col in (
                (flat_base[:, j].real, rotated[:, j].real),
                (flat_base[:, j].imag, rotated[:, j].imag),
                (np.abs(flat_base[:, j]), np.abs(rotated[:, j])),
            ):
                if _numerically_zero(base_col, rot_col):
                    continue
                rep = ks_two_sample(base_col, rot_col)
                if rep.p_value < best_p:
                    best_p, best_stat = rep.p_value, rep.statistic
    return _report(best_stat, best_p * n_tests, n)


def gaussianity_test(samples) -> TestReport:
    """Anderson-Darling test against the normal family with estimated parameters."""
    x = np.asarray(samples, dtype=float)
    if x.size < 100:
        raise ValueError("need at least 100 samples")
    if np.std(x) == 0:
        raise ValueError("degenerate variance: samples are constant")
    from statsmodels.stats.diagnostic import normal_ad

    stat, p = normal_ad(x)
    return _report(stat, p, x.size)


def phase_invariance_test(samples, phi: float, n: int | None = None) -> TestReport:
    """Two-sample comparison of a coefficient sample against a phase-rotated
    independent copy, on real and imaginary parts."""
    z = np.asarray(samples, dtype=complex)
    if z.size == 0:
        raise ValueError("samples must be nonempty")
    if n is None:
        n = z.size // 2
    if n < 1 or 2 * n > z.size:
        raise ValueError("need 2n samples to form two independent groups")
    x = z[:n]
    y = np.exp(1j * phi) * z[n : 2 * n]
    rep_re = ks_two_sample(x.real, y.real)
    rep_im = ks_two_sample(x.imag, y.imag)
    if rep_re.p_value <= rep_im.p_value:
        best_p, best_stat = rep_re.p_value, rep_re.statistic
    else:
        best_p, best_stat = rep_im.p_value, rep_im.statistic
    return _report(best_stat, best_p * 2, n)
