"""Random-field samplers and evaluators for a single irreducible module.

Coefficient vectors live in a SelfConjBasis and obey the reality symmetry
a_{-k} = conj(a_k) (a_0 real), so synthesized fields are real valued.  The
samplers draw the independent coordinates k >= 0 from rotation-of-the-phase
invariant marginals; only the Gaussian choice yields an invariant field on a
mixing basis, which is exactly what the statistical tests downstream probe.

Also here: the rank-one matrix construction T(g) = sqrt(d) tr(B D(g)) with
B = alpha Z^T, an invariant field whose coefficients are correlated across
rows, plus synthesis and quadrature analysis on the sphere.

Batch samplers split their RngStream into fixed-size chunks (1024 draws per
child stream) and concatenate in chunk order, so results depend only on the
seed, never on the worker count.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import groups, irrep
from .bases import S3Module, SelfConjBasis, basis_rep_matrix, sph_harm_table
from .groups import RngStream, SO4Element, SU2Element

_CHUNK_ROWS = 1024


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """Coefficients of a field in a self-conjugated basis, indexed by pairing labels."""

    basis: SelfConjBasis
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.basis.dim,):
            raise ValueError("coefficient vector length does not match the basis")
        object.__setattr__(self, "values", v)

    def value(self, k: int) -> complex:
        return complex(self.values[self.basis.index_of(k)])


@dataclass(frozen=True, eq=False)
class BijouxSample:
    """Rank-one coefficient matrix B[i, j] = alpha[i] * Z[j]."""

    alpha: np.ndarray
    B: np.ndarray


# ---------------------------------------------------------------------------
# marginals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianMarginal:
    """Complex Gaussian with E|a|^2 = variance; real coordinate ~ N(0, variance)."""

    variance: float

    def __post_init__(self) -> None:
        if self.variance < 0:
            raise ValueError("variance must be nonnegative")

    def sample_complex(self, gen: np.random.Generator, n: int) -> np.ndarray:
        s = math.sqrt(self.variance / 2.0)
        return gen.normal(0.0, s, n) + 1j * gen.normal(0.0, s, n)

    def sample_real(self, gen: np.random.Generator, n: int) -> np.ndarray:
        return gen.normal(0.0, math.sqrt(self.variance), n)


@dataclass(frozen=True)
class UniformDiscMarginal:
    """Uniform on the disc of the given radius; E|a|^2 = radius^2/2.

    The real coordinate is uniform on [-radius, radius].
    """

    radius: float

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    def sample_complex(self, gen: np.random.Generator, n: int) -> np.ndarray:
        r = self.radius * np.sqrt(gen.uniform(0.0, 1.0, n))
        phase = gen.uniform(0.0, 2.0 * np.pi, n)
        return r * np.exp(1j * phase)

    def sample_real(self, gen: np.random.Generator, n: int) -> np.ndarray:
        return gen.uniform(-self.radius, self.radius, n)


@dataclass(frozen=True)
class TwoPointMarginal:
    """Constant modulus with uniform phase; the real coordinate is +/-modulus."""

    modulus: float

    def __post_init__(self) -> None:
        if self.modulus < 0:
            raise ValueError("modulus must be nonnegative")

    def sample_complex(self, gen: np.random.Generator, n: int) -> np.ndarray:
        phase = gen.uniform(0.0, 2.0 * np.pi, n)
        return self.modulus * np.exp(1j * phase)

    def sample_real(self, gen: np.random.Generator, n: int) -> np.ndarray:
        return self.modulus * gen.choice([-1.0, 1.0], n)


def make_marginal(name: str, param: float):
    """Marginal factory keyed by CLI names."""
    table = {
        "gaussian": GaussianMarginal,
        "uniform-disc": UniformDiscMarginal,
        "two-point": TwoPointMarginal,
    }
    if name not in table:
        raise ValueError(f"unknown marginal {name!r}; expected one of {sorted(table)}")
    return table[name](param)


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------


def complex_gaussian(rng: RngStream, variance: float) -> complex:
    """One centered complex Gaussian draw with E|Z|^2 = variance and E[Z^2] = 0."""
    if variance < 0:
        raise ValueError("variance must be nonnegative")
    s = math.sqrt(variance / 2.0)
    gen = rng.generator
    return complex(gen.normal(0.0, s) + 1j * gen.normal(0.0, s))


def _draw_block(basis: SelfConjBasis, marginal, gen: np.random.Generator, n: int) -> np.ndarray:
    """n independent coefficient vectors with the reality pairing, as rows."""
    vals = np.zeros((n, basis.dim), dtype=complex)
    for k in basis.labels:
        if k > 0:
            z = marginal.sample_complex(gen, n)
            vals[:, basis.index_of(k)] = z
            vals[:, basis.index_of(-k)] = np.conj(z)
        elif k == 0:
            vals[:, basis.index_of(0)] = marginal.sample_real(gen, n)
    return vals


def _batched(rng: RngStream, n: int, worker, threads: int = 1) -> np.ndarray:
    """Run worker(generator, count) over fixed-size chunks of split streams."""
    n_chunks = max(1, math.ceil(n / _CHUNK_ROWS))
    streams = rng.split(n_chunks)
    sizes = [_CHUNK_ROWS] * (n_chunks - 1) + [n - _CHUNK_ROWS * (n_chunks - 1)]
    if threads <= 1 or n_chunks == 1:
        blocks = [worker(s.generator, c) for s, c in zip(streams, sizes)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(lambda sc: worker(sc[0].generator, sc[1]), zip(streams, sizes)))
    return np.concatenate(blocks, axis=0)


def sample_independent(basis: SelfConjBasis, marginal, rng: RngStream) -> CoefficientVector:
    """One coefficient vector with independent coordinates k >= 0 from the marginal."""
    return CoefficientVector(basis, _draw_block(basis, marginal, rng.generator, 1)[0])


def sample_independent_batch(
    basis: SelfConjBasis, marginal, rng: RngStream, n: int, threads: int = 1
) -> np.ndarray:
    """n draws as rows; chunked over split streams, order independent of threads."""
    if n < 1:
        raise ValueError("n must be positive")
    return _batched(rng, n, lambda gen, c: _draw_block(basis, marginal, gen, c), threads)


def sample_invariant_gaussian(basis: SelfConjBasis, c: float, rng: RngStream) -> CoefficientVector:
    """Gaussian coefficients with common variance c; the synthesized field is invariant."""
    return sample_independent(basis, GaussianMarginal(c), rng)


def sample_invariant_gaussian_batch(
    basis: SelfConjBasis, c: float, rng: RngStream, n: int, threads: int = 1
) -> np.ndarray:
    return sample_independent_batch(basis, GaussianMarginal(c), rng, n, threads)


def _check_group_element(basis: SelfConjBasis, g) -> None:
    if isinstance(basis.module, S3Module):
        if not isinstance(g, SO4Element):
            raise ValueError("group element does not match the basis space: expected SO4Element")
    elif not isinstance(g, SU2Element):
        raise ValueError("group element does not match the basis space: expected SU2Element")


def rotate_coeffs(basis: SelfConjBasis, g, a: CoefficientVector) -> CoefficientVector:
    """Coefficients of the rotated field: a^g = D(g^{-1}) a."""
    if a.basis is not basis:
        raise ValueError("coefficient vector belongs to a different basis")
    _check_group_element(basis, g)
    d = basis_rep_matrix(basis, basis.module.inverse(g))
    return CoefficientVector(basis, d @ a.values)


def rotate_coeff_rows(basis: SelfConjBasis, g, rows: np.ndarray) -> np.ndarray:
    """Batch version of rotate_coeffs on an (n, d) array of draws."""
    _check_group_element(basis, g)
    d = basis_rep_matrix(basis, basis.module.inverse(g))
    return rows @ d.T


def bijoux_sample(ell: int, alpha, rng: RngStream) -> BijouxSample:
    """Rank-one matrix sample B = alpha Z^T with iid unit-variance complex Gaussian Z."""
    alpha = np.asarray(alpha, dtype=complex)
    d = ell + 1
    if d < 2:
        raise ValueError("dimension must be at least 2")
    if alpha.shape != (d,):
        raise ValueError(f"alpha must have length {d}")
    gen = rng.generator
    z = gen.normal(0.0, math.sqrt(0.5), d) + 1j * gen.normal(0.0, math.sqrt(0.5), d)
    return BijouxSample(alpha=alpha, B=np.outer(alpha, z))


def bijoux_sample_batch(ell: int, alpha, rng: RngStream, n: int, threads: int = 1) -> np.ndarray:
    """n rank-one matrix samples, shape (n, d, d)."""
    alpha = np.asarray(alpha, dtype=complex)
    d = ell + 1
    if d < 2:
        raise ValueError("dimension must be at least 2")
    if alpha.shape != (d,):
        raise ValueError(f"alpha must have length {d}")

    def worker(gen, count):
        z = gen.normal(0.0, math.sqrt(0.5), (count, d)) + 1j * gen.normal(
            0.0, math.sqrt(0.5), (count, d)
        )
        return alpha[None, :, None] * z[:, None, :]

    return _batched(rng, n, worker, threads)


def bijoux_eval(sample: BijouxSample, g: SU2Element) -> complex:
    """Field value sqrt(d) tr(B D(g)) of the rank-one construction."""
    d = sample.B.shape[0]
    rep = irrep.rep_matrix(d - 1, g)
    return complex(math.sqrt(d) * np.trace(sample.B @ rep))


# ---------------------------------------------------------------------------
# synthesis and analysis
# ---------------------------------------------------------------------------


def synthesize(basis: SelfConjBasis, a: CoefficientVector, point) -> complex:
    """Field value sum_k a_k v_k(point)."""
    if a.basis is not basis:
        raise ValueError("coefficient vector belongs to a different basis")
    if basis.space_tag == "S2":
        if not (isinstance(point, tuple) and len(point) == 2):
            raise ValueError("point does not match the basis space: expected (theta, phi)")
    elif not isinstance(point, SU2Element):
        raise ValueError("point does not match the basis space: expected SU2Element")
    ref_coords = basis.change @ a.values
    f_vals = basis.module.eval_ref_vector(point)
    return complex(f_vals @ ref_coords)


def analyze_s2(field, degree: int) -> dict[int, np.ndarray]:
    """Harmonic coefficients a_{l,k} = integral of T conj(Y_{l,k}) over the sphere.

    Uses a Gauss-Legendre (degree+1 nodes in cos theta) x uniform (2*degree+2
    nodes in phi) product grid; exact for fields band-limited to the given
    degree.  Returns {l: coefficients in canonical label order l..-l}.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    nodes, gl_weights = np.polynomial.legendre.leggauss(degree + 1)
    theta = np.arccos(nodes)
    n_phi = 2 * degree + 2
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    th_grid = np.repeat(theta, n_phi)
    ph_grid = np.tile(phi, degree + 1)
    w_grid = np.repeat(gl_weights, n_phi) * (2.0 * np.pi / n_phi)

    values = None
    try:
        candidate = np.asarray(field(th_grid, ph_grid), dtype=complex)
        if candidate.shape == th_grid.shape:
            values = candidate
    except (TypeError, ValueError):
        values = None
    if values is None:
        values = np.array([field(t, p) for t, p in zip(th_grid, ph_grid)], dtype=complex)

    tables = sph_harm_table(degree, th_grid, ph_grid)
    weighted = w_grid * values
    return {l: tables[l].conj() @ weighted for l in range(degree + 1)}


# ---------------------------------------------------------------------------
# CSV sample format: header sample_id,k,re,im, one row per coefficient per draw
# ---------------------------------------------------------------------------


def write_samples_csv(path, values: np.ndarray, labels) -> None:
    """Write an (n, d) array of draws in the flat CSV sample format."""
    values = np.asarray(values, dtype=complex)
    labels = list(labels)
    if values.ndim != 2 or values.shape[1] != len(labels):
        raise ValueError("values must be (n, len(labels))")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("sample_id,k,re,im\n")
        for i in range(values.shape[0]):
            for j, k in enumerate(labels):
                v = values[i, j]
                fh.write(f"{i},{k},{v.real:.17g},{v.imag:.17g}\n")


def read_samples_csv(path) -> tuple[list[int], np.ndarray]:
    """Read the flat CSV sample format back into (labels, (n, d) array).

    Raises ValueError naming the first malformed line (1-based, header = line 1).
    """
    per_sample: dict[int, dict[int, complex]] = {}
    label_order: list[int] = []
    first_sid: int | None = None
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["sample_id", "k", "re", "im"]:
            raise ValueError("line 1: expected header sample_id,k,re,im")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise ValueError(f"line {lineno}: expected 4 fields, got {len(row)}")
            try:
                sid = int(row[0])
                k = int(row[1])
                re, im = float(row[2]), float(row[3])
            except ValueError:
                raise ValueError(f"line {lineno}: non-numeric field") from None
            bucket = per_sample.setdefault(sid, {})
            if k in bucket:
                raise ValueError(f"line {lineno}: duplicate coefficient {k} for sample {sid}")
            bucket[k] = complex(re, im)
            if first_sid is None:
                first_sid = sid
            if sid == first_sid:
                label_order.append(k)
    if not per_sample:
        raise ValueError("line 2: no data rows")
    expected = set(label_order)
    values = np.zeros((len(per_sample), len(label_order)), dtype=complex)
    for row_i, sid in enumerate(sorted(per_sample)):
        bucket = per_sample[sid]
        if set(bucket) != expected:
            raise ValueError(f"sample {sid}: coefficient labels differ from the first sample")
        for j, k in enumerate(label_order):
            values[row_i, j] = bucket[k]
    return label_order, values
