"""Mixing certificates for self-conjugated bases.

A basis (v_k) is mixing when some group element g and some row pair
m1 < m2 satisfy |D_{m_i,m}(g)| != |D_{m_i,-m}(g)| for every column label
m > 0.  Three routes are implemented:

* randomized witness search over Haar samples (check_mixing);
* the wedge-product pairing that converts the same inequality into an
  orthogonality question for orbits of coordinate planes in the second
  exterior power (wedge_pairing, orbit_orthogonality);
* an exact certificate for torus-adapted bases of the tensor modules on S^3,
  comparing squared-modulus polynomials in exact rational arithmetic
  (s3_exact_mixing).

Sampling can only ever certify Mixing.  NotMixing is reported solely on
structural grounds (a forced real row in dimensions 2 and 3); everything else
stays Inconclusive.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import irrep
from .bases import SelfConjBasis, basis_rep_batch, basis_rep_matrix, selfconj_defects
from .groups import RngStream

_SELFCONJ_TOL = 1e-8


@dataclass(frozen=True)
class MixingReport:
    dim: int
    verdict: str
    witness_g: object | None
    pair: Optional[tuple[int, int]]
    margin: float
    samples_used: int
    tol: float
    detail: str = ""


@dataclass(frozen=True)
class OrbitReport:
    orthogonal_pairs: frozenset
    isolated: frozenset
    interacting: frozenset
    verdict: str
    ranks: dict
    samples_used: int
    stabilized: bool
    rank_tol: float


@dataclass(frozen=True)
class PolyComparison:
    row: Fraction
    r: Fraction
    col_plus: int
    col_minus: int
    h_plus: int
    h_minus: int
    lead_plus: int
    lead_minus: int
    polys_differ: bool


@dataclass(frozen=True)
class S3ExactCertificate:
    ell: int
    rows: tuple
    comparisons: tuple
    verdict: str


def _require_selfconj(basis: SelfConjBasis) -> None:
    defects = selfconj_defects(basis)
    worst = max(defects.values())
    if worst > _SELFCONJ_TOL:
        raise ValueError(
            f"basis is not self-conjugated within tolerance (defect {worst:.3e})"
        )


def moduli_gap(basis: SelfConjBasis, g, m_i: int, m: int) -> float:
    """|D_{m_i,m}(g)| - |D_{m_i,-m}(g)| in the given basis.

    m must be a nonzero label; negative m swaps the two columns, so the result
    is exactly antisymmetric in m <-> -m.
    """
    labels = set(basis.labels)
    if m == 0 or m not in labels:
        raise ValueError(f"column label {m} out of range")
    if m_i not in labels or m_i < 0:
        raise ValueError(f"row label {m_i} out of range")
    d = basis_rep_matrix(basis, g)
    row = basis.index_of(m_i)
    return float(abs(d[row, basis.index_of(m)]) - abs(d[row, basis.index_of(-m)]))


def _gap_index_arrays(basis: SelfConjBasis):
    """Row indices (labels >= 0) and column index pairs (m, -m) for m > 0."""
    rows = [basis.index_of(k) for k in basis.labels if k >= 0]
    row_labels = [k for k in basis.labels if k >= 0]
    cols_pos = [basis.index_of(k) for k in basis.labels if k > 0]
    cols_neg = [basis.index_of(-k) for k in basis.labels if k > 0]
    return (
        np.array(rows, dtype=int),
        row_labels,
        np.array(cols_pos, dtype=int),
        np.array(cols_neg, dtype=int),
    )


def _margins_for_batch(basis: SelfConjBasis, mats: np.ndarray):
    """Best pair margin per sample and the achieving row pair.

    For each matrix: gap[i, m] = ||D_{row_i, m}| - |D_{row_i, -m}||, the row
    score is its minimum over columns m > 0, and the margin is the second
    largest row score (the best achievable min over a pair of rows).
    """
    rows, row_labels, cp, cn = _gap_index_arrays(basis)
    mods = np.abs(mats)
    gaps = np.abs(mods[:, rows[:, None], cp[None, :]] - mods[:, rows[:, None], cn[None, :]])
    row_scores = gaps.min(axis=2)
    order = np.argsort(row_scores, axis=1)
    best_two = order[:, -2:]
    margins = row_scores[np.arange(mats.shape[0]), best_two[:, 0]]
    pairs = [
        tuple(sorted((row_labels[i1], row_labels[i2])))
        for i1, i2 in best_two
    ]
    return margins, pairs


def check_mixing(
    basis: SelfConjBasis,
    n_samples: int = 1000,
    tol: float = 1e-6,
    rng: RngStream | None = None,
    threads: int = 1,
) -> MixingReport:
    """Randomized search for a mixing witness.

    Returns Mixing with the best witness found, structural NotMixing for
    dimensions 2 and 3, and Inconclusive when sampling fails to clear tol.
    """
    if n_samples <= 0:
        raise ValueError("n_samples must be positive")
    if basis.dim < 2:
        raise ValueError("module dimension must be at least 2")
    _require_selfconj(basis)
    rng = rng if rng is not None else RngStream(0)

    d = basis.dim
    if d == 2:
        return MixingReport(
            dim=d, verdict="NotMixing", witness_g=None, pair=None, margin=0.0,
            samples_used=0, tol=tol,
            detail="only one conjugate pair of labels: no row pair m1 < m2 exists",
        )
    if d == 3:
        return MixingReport(
            dim=d, verdict="NotMixing", witness_g=None, pair=(0, 1), margin=0.0,
            samples_used=0, tol=tol,
            detail=(
                "the only row pair is (0, 1) and the label-0 basis function is "
                "real, forcing |D_{0,m}(g)| = |D_{0,-m}(g)| for every g"
            ),
        )

    threads = max(1, threads)
    # one stream per fixed-size chunk, so the searched elements do not depend
    # on the worker count
    chunk = 256
    n_chunks = max(1, -(-n_samples // chunk))
    streams = rng.split(n_chunks)
    sizes = [chunk] * (n_chunks - 1) + [n_samples - chunk * (n_chunks - 1)]

    def search(stream: RngStream, count: int):
        gs = basis.module.haar_list(stream, count)
        mats = basis_rep_batch(basis, gs)
        margins, pairs = _margins_for_batch(basis, mats)
        i = int(np.argmax(margins))
        return (float(margins[i]), gs[i], pairs[i])

    if threads == 1:
        results = [search(s, c) for s, c in zip(streams, sizes)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(search, streams, sizes))
    # deterministic reduction: strictly larger margin wins, ties keep the
    # earliest chunk
    margin, witness, pair = results[0]
    for cand in results[1:]:
        if cand[0] > margin:
            margin, witness, pair = cand

    if margin > tol:
        return MixingReport(
            dim=d, verdict="Mixing", witness_g=witness, pair=pair, margin=margin,
            samples_used=n_samples, tol=tol,
            detail="sampled witness clears the tolerance",
        )
    return MixingReport(
        dim=d, verdict="Inconclusive", witness_g=witness, pair=pair, margin=margin,
        samples_used=n_samples, tol=tol,
        detail="no sampled element cleared the tolerance; sampling cannot prove NotMixing",
    )


def wedge_pairing(basis: SelfConjBasis, g, s: int, m: int) -> float:
    """<g (h_s ^ h_-s), h_m ^ h_-m> under <v1^w1, v2^w2> = <v1,v2><w1,w2> - <v1,w2><w1,v2>.

    Equals |D_{m,s}(g)|^2 - |D_{m,-s}(g)|^2; the imaginary part vanishes and
    is discarded.
    """
    labels = set(basis.labels)
    if s <= 0 or s not in labels or m <= 0 or m not in labels:
        raise ValueError("labels s and m must be positive pair labels")
    d = basis_rep_matrix(basis, g)
    ip, im_ = basis.index_of(m), basis.index_of(-m)
    js, jns = basis.index_of(s), basis.index_of(-s)
    value = d[ip, js] * d[im_, jns] - d[im_, js] * d[ip, jns]
    return float(value.real)


def orbit_orthogonality(
    basis: SelfConjBasis,
    n_samples: int = 4000,
    rank_tol: float = 1e-9,
    rng: RngStream | None = None,
) -> OrbitReport:
    """Orbit spans of the coordinate planes in the second exterior power.

    For each positive label m the orbit {g . (h_m ^ h_-m)} is sampled until its
    numerical rank is unchanged over 3 consecutive batches.  A pair (i, j) is
    orthogonal when all cross inner products of the estimated spans stay below
    rank_tol.  The basis is mixing exactly when at least two labels interact
    with some other label.
    """
    _require_selfconj(basis)
    rng = rng if rng is not None else RngStream(0)
    d = basis.dim
    pos = [k for k in basis.labels if k > 0]
    p_idx, q_idx = np.triu_indices(d, 1)
    wedge_dim = len(p_idx)
    batch = 4 * wedge_dim
    streams = rng.split(len(pos))

    spans: dict[int, np.ndarray] = {}
    ranks: dict[int, int] = {}
    used = 0
    all_stable = True
    for m, stream in zip(pos, streams):
        cm, cn = basis.index_of(m), basis.index_of(-m)
        stack = np.zeros((0, wedge_dim), dtype=complex)
        history: list[int] = []
        while stack.shape[0] < n_samples:
            take = min(batch, n_samples - stack.shape[0])
            gs = basis.module.haar_list(stream, take)
            mats = basis_rep_batch(basis, gs)
            x = mats[:, :, cm]
            y = mats[:, :, cn]
            rows = x[:, p_idx] * y[:, q_idx] - x[:, q_idx] * y[:, p_idx]
            stack = np.vstack([stack, rows])
            used += take
            sv = np.linalg.svd(stack, compute_uv=False)
            rank = int(np.sum(sv > rank_tol * sv[0])) if sv.size else 0
            history.append(rank)
            if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
                break
        stable = len(history) >= 3 and history[-1] == history[-2] == history[-3]
        all_stable = all_stable and stable
        _, sv, vh = np.linalg.svd(stack, full_matrices=False)
        rank = int(np.sum(sv > rank_tol * sv[0])) if sv.size else 0
        spans[m] = vh[:rank]
        ranks[m] = rank

    orthogonal = set()
    for i, mi in enumerate(pos):
        for mj in pos[i + 1 :]:
            cross = np.abs(spans[mi] @ spans[mj].conj().T)
            if cross.size == 0 or cross.max() < rank_tol:
                orthogonal.add((mi, mj))
    isolated = {
        m
        for m in pos
        if all(tuple(sorted((m, j))) in orthogonal for j in pos if j != m)
    }
    interacting = frozenset(m for m in pos if m not in isolated)
    if len(interacting) >= 2:
        verdict = "Mixing"
    elif all_stable:
        verdict = "NotMixing"
    else:
        verdict = "Inconclusive"
    return OrbitReport(
        orthogonal_pairs=frozenset(orthogonal),
        isolated=frozenset(isolated),
        interacting=interacting,
        verdict=verdict,
        ranks=ranks,
        samples_used=used,
        stabilized=all_stable,
        rank_tol=rank_tol,
    )


def _as_half_integer(value, ell: int) -> Fraction:
    f = Fraction(value).limit_denominator(2)
    if f != Fraction(value):
        raise ValueError("row labels must be integers or half-integers")
    if (2 * f + ell) % 2 != 0:
        raise ValueError(
            f"row label {value} incompatible with degree {ell}: shifted index not integral"
        )
    return f


def s3_exact_mixing(ell: int, m1, m2) -> S3ExactCertificate:
    """Exact mixing certificate for the torus-adapted tensor basis on S^3.

    Rows are torus labels 0 < m1 <= m2 <= ell/2 (half-integers when ell is
    odd).  For each shifted row s = ell/2 + m_i and each mirror column pair
    (j, ell-j), j != ell-j, the squared-modulus polynomials P_{s,j} and
    P_{s,ell-j} are compared coefficientwise in exact rational arithmetic.
    Two independent certificates accompany the comparison: the vanishing
    orders |s-j| at x = 1 differ between the mirror columns (recorded as the
    exponents ell - |s-j|), and the h-values min(s, j) != min(s, ell-j).
    """
    if ell < 1:
        raise ValueError("degree must be at least 1")
    f1, f2 = _as_half_integer(m1, ell), _as_half_integer(m2, ell)
    half = Fraction(ell, 2)
    if not (0 < f1 <= f2 <= half):
        raise ValueError("row labels must satisfy 0 < m1 <= m2 <= ell/2")

    comparisons = []
    all_differ = True
    for m_i in (f1, f2):
        s = int(half + m_i)
        for j_plus in range(ell, -1, -1):
            j_minus = ell - j_plus
            if j_plus <= j_minus:
                continue
            p_plus = irrep.p_poly(ell, s, j_plus)
            p_minus = irrep.p_poly(ell, s, j_minus)
            differ = not (p_plus - p_minus).is_zero
            all_differ = all_differ and differ
            comparisons.append(
                PolyComparison(
                    row=m_i,
                    r=Fraction(j_plus) - half,
                    col_plus=j_plus,
                    col_minus=j_minus,
                    h_plus=min(s, j_plus),
                    h_minus=min(s, j_minus),
                    lead_plus=ell - abs(s - j_plus),
                    lead_minus=ell - abs(s - j_minus),
                    polys_differ=differ,
                )
            )
    verdict = "Mixing" if all_differ and comparisons else "Inconclusive"
    return S3ExactCertificate(
        ell=ell, rows=(f1, f2), comparisons=tuple(comparisons), verdict=verdict
    )
