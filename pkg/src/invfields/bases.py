"""Self-conjugated torus-adapted bases of irreducible modules on S2, S3 and SU(2).

A module of dimension d carries integer labels in canonical order
[L, ..., 1, 0, -1, ..., -L] (the 0 label only for odd d), a reference
torus-adapted orthonormal basis (f_k), and conjugation signs sigma with
conj(f_k) = sigma_k f_{-k} under pointwise complex conjugation of the realized
functions.  A SelfConjBasis stores a unitary change of basis against that
reference; its vectors satisfy J v_k = v_{-k}, so coefficient vectors with the
symmetry a_{-k} = conj(a_k) synthesize real fields.

Concrete modules:

* S2Module(ell): SU(2) degree ell = 2m even, dimension 2L+1 with L = m,
  realized by spherical harmonics Y_{L,k} (Condon-Shortley).
* S3Module(ell): H_ell x H_ell under SO(4), dimension (ell+1)^2, realized by
  scaled matrix coefficients on SU(2) = S^3.
* SU2ColumnModule(ell): the middle column of the degree-ell coefficient block
  in L^2(SU(2)) under left translation; ell even (odd degrees are quaternionic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import groups, irrep
from .groups import RngStream, SO4Element, SU2Element


class Module:
    """Common interface: labels, reference rep matrices, Haar sampling, evaluation."""

    dim: int
    labels: list[int]
    conj_signs: np.ndarray
    space_tag: str

    def __post_setup(self) -> None:  # pragma: no cover - interface stub
        raise NotImplementedError

    def index_of(self, k: int) -> int:
        return self._index[k]

    def _finish_setup(self) -> None:
        self._index = {k: i for i, k in enumerate(self.labels)}
        self.neg_index = np.array(
            [self._index[-k] for k in self.labels], dtype=int
        )

    def ref_rep(self, g) -> np.ndarray:
        raise NotImplementedError

    def ref_rep_batch(self, gs: Sequence) -> np.ndarray:
        return np.stack([self.ref_rep(g) for g in gs])

    def haar(self, rng: RngStream):
        raise NotImplementedError

    def haar_list(self, rng: RngStream, n: int) -> list:
        return [self.haar(rng) for _ in range(n)]

    def identity_element(self):
        raise NotImplementedError

    def inverse(self, g):
        raise NotImplementedError

    def eval_ref(self, i: int, point) -> complex:
        raise NotImplementedError

    def eval_ref_vector(self, point) -> np.ndarray:
        return np.array([self.eval_ref(i, point) for i in range(self.dim)])

    def conjugate_coords(self, w: np.ndarray) -> np.ndarray:
        """Pointwise conjugation in reference coordinates: (Cw)_{-k} = sigma_k conj(w_k)."""
        out = np.empty(self.dim, dtype=complex)
        out[self.neg_index] = self.conj_signs * np.conj(np.asarray(w))
        return out


class S2Module(Module):
    """Spherical-harmonic module of SO(3) degree L = ell/2; points are (theta, phi)."""

    def __init__(self, ell: int):
        if ell < 0 or ell % 2 != 0:
            raise ValueError(
                "odd SU(2) degree: quaternionic module has no self-conjugated basis"
            )
        self.ell = ell
        self.degree = ell // 2
        self.dim = ell + 1
        self.labels = list(range(self.degree, -self.degree - 1, -1))
        self.conj_signs = np.array([(-1.0) ** (k % 2) for k in self.labels])
        self.space_tag = "S2"
        self._finish_setup()

    def ref_rep(self, g: SU2Element) -> np.ndarray:
        return irrep.rep_matrix(self.ell, g)[::-1, ::-1]

    def ref_rep_batch(self, gs: Sequence[SU2Element]) -> np.ndarray:
        a = np.array([g.a for g in gs])
        b = np.array([g.b for g in gs])
        return irrep.rep_matrix_batch(self.ell, a, b)[:, ::-1, ::-1]

    def haar(self, rng: RngStream) -> SU2Element:
        return groups.haar_sample(rng)

    def haar_list(self, rng: RngStream, n: int) -> list[SU2Element]:
        a, b = groups.haar_sample_batch(rng, n)
        return [SU2Element(complex(x), complex(y)) for x, y in zip(a, b)]

    def identity_element(self) -> SU2Element:
        return groups.identity()

    def inverse(self, g: SU2Element) -> SU2Element:
        return groups.inverse(g)

    def eval_ref(self, i: int, point) -> complex:
        theta, phi = point
        return complex(eval_s2(self.degree, self.labels[i], theta, phi))

    def rotate_point(self, g: SU2Element, point):
        """Image of the point under the rotation covered by g."""
        theta, phi = point
        vec = np.array(
            [
                math.sin(theta) * math.cos(phi),
                math.sin(theta) * math.sin(phi),
                math.cos(theta),
            ]
        )
        image = groups.rotation_matrix(g) @ vec
        z = min(1.0, max(-1.0, float(image[2])))
        return (math.acos(z), math.atan2(float(image[1]), float(image[0])))


class SU2ColumnModule(Module):
    """Middle-column coefficient module in L^2(SU(2)); points are SU2Element."""

    def __init__(self, ell: int):
        if ell < 0 or ell % 2 != 0:
            raise ValueError(
                "odd degree: quaternionic module has no self-conjugated basis"
            )
        self.ell = ell
        self.dim = ell + 1
        half = ell // 2
        self.labels = list(range(half, -half - 1, -1))
        self.conj_signs = np.array([(-1.0) ** (k % 2) for k in self.labels])
        self.space_tag = "SU2-column"
        self._finish_setup()

    ref_rep = S2Module.ref_rep
    ref_rep_batch = S2Module.ref_rep_batch
    haar = S2Module.haar
    haar_list = S2Module.haar_list
    identity_element = S2Module.identity_element
    inverse = S2Module.inverse

    def eval_ref(self, i: int, point: SU2Element) -> complex:
        s = self.ell // 2 + self.labels[i]
        sign = (-1.0) ** ((self.ell + s) % 2)
        return sign * eval_s3(self.ell, self.ell - s, self.ell // 2, point)

    def rotate_point(self, g: SU2Element, point: SU2Element) -> SU2Element:
        return groups.compose(g, point)


class S3Module(Module):
    """Tensor module H_ell x H_ell under SO(4); points are SU2Element on S^3."""

    def __init__(self, ell: int):
        if ell < 0:
            raise ValueError("degree must be nonnegative")
        self.ell = ell
        d1 = ell + 1
        self.dim = d1 * d1
        # torus labels of the pair (s1, s2) are (s1 - ell/2, s2 - ell/2); store
        # them doubled to stay integer for odd ell and order positives lex-descending
        pairs = [(s1, s2) for s1 in range(d1) for s2 in range(d1)]
        key = {p: (2 * p[0] - ell, 2 * p[1] - ell) for p in pairs}
        positives = [p for p in pairs if key[p] > (0, 0)]
        positives.sort(key=lambda p: key[p], reverse=True)
        ordered = positives.copy()
        if ell % 2 == 0:
            ordered.append((ell // 2, ell // 2))
        ordered.extend((ell - p[0], ell - p[1]) for p in reversed(positives))
        self.pair_order = ordered
        half = len(positives)
        self.labels = list(range(half, 0, -1))
        if ell % 2 == 0:
            self.labels.append(0)
        self.labels.extend(range(-1, -half - 1, -1))
        self.conj_signs = np.array(
            [(-1.0) ** ((p[0] + p[1]) % 2) for p in ordered]
        )
        self._perm = np.array([p[0] * d1 + p[1] for p in ordered], dtype=int)
        self.space_tag = "S3"
        self._finish_setup()

    def pair_of(self, k: int) -> tuple[int, int]:
        """(s1, s2) indices of the reference vector carrying flat label k."""
        return self.pair_order[self.index_of(k)]

    def ref_rep(self, r: SO4Element) -> np.ndarray:
        t = irrep.tensor_rep_matrix(self.ell, r)
        return t[np.ix_(self._perm, self._perm)]

    def ref_rep_batch(self, rs: Sequence[SO4Element]) -> np.ndarray:
        a1 = np.array([r.g1.a for r in rs])
        b1 = np.array([r.g1.b for r in rs])
        a2 = np.array([r.g2.a for r in rs])
        b2 = np.array([r.g2.b for r in rs])
        d1 = irrep.rep_matrix_batch(self.ell, a1, b1)
        d2 = irrep.rep_matrix_batch(self.ell, a2, b2)
        n, d = d1.shape[0], self.dim
        t = np.einsum("nij,nkl->nikjl", d1, d2).reshape(n, d, d)
        return t[:, self._perm[:, None], self._perm[None, :]]

    def haar(self, rng: RngStream) -> SO4Element:
        return groups.haar_sample_so4(rng)

    def identity_element(self) -> SO4Element:
        return groups.so4_identity()

    def inverse(self, r: SO4Element) -> SO4Element:
        return groups.so4_inverse(r)

    def eval_ref(self, i: int, point: SU2Element) -> complex:
        s1, s2 = self.pair_order[i]
        sign = (-1.0) ** ((self.ell + s1) % 2)
        return sign * eval_s3(self.ell, self.ell - s1, s2, point)

    def rotate_point(self, r: SO4Element, point: SU2Element) -> SU2Element:
        return groups.so4_apply(r, point)


def make_module(space: str, ell: int) -> Module:
    """Factory keyed by space tag: 's2', 's3' or 'su2'."""
    table = {"s2": S2Module, "s3": S3Module, "su2": SU2ColumnModule}
    if space not in table:
        raise ValueError(f"unknown space tag {space!r}; expected one of {sorted(table)}")
    return table[space](ell)


@dataclass(frozen=True, eq=False)
class SelfConjBasis:
    """Orthonormal basis v_i = sum_j change[j, i] f_j with J v_k = v_{-k}."""

    module: Module
    change: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.change, dtype=complex)
        if c.shape != (self.module.dim, self.module.dim):
            raise ValueError("change matrix shape does not match the module dimension")
        object.__setattr__(self, "change", c)

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def labels(self) -> list[int]:
        return self.module.labels

    @property
    def space_tag(self) -> str:
        return self.module.space_tag

    def index_of(self, k: int) -> int:
        return self.module.index_of(k)


def torus_adapted_selfconj_basis(module: Module) -> SelfConjBasis:
    """Diagonal-phase basis h_k = gamma_k f_k with J h_k = h_{-k}.

    The phases solve gamma_{-k} = conj(gamma_k) sigma_k with gamma_k = 1 for
    k >= 0, which keeps the torus action diagonal.
    """
    d = module.dim
    gamma = np.ones(d, dtype=complex)
    for i, k in enumerate(module.labels):
        if k > 0:
            gamma[module.index_of(-k)] = module.conj_signs[i]
        elif k == 0 and module.conj_signs[i] != 1:
            raise ValueError("label-0 reference vector must be self-conjugate")
    return SelfConjBasis(module, np.diag(gamma))


def realify_matrix(dim: int) -> np.ndarray:
    """Unitary map sending vectors with z_{-k} = conj(z_k) (z_0 real) to real vectors.

    Rows, in canonical coordinate order: (z_k + z_{-k})/sqrt(2) for k = L..1,
    then z_0 for odd dim, then (z_k - z_{-k})/(i sqrt(2)) for k = 1..L.
    """
    if dim < 1:
        raise ValueError("dimension must be positive")
    half = dim // 2
    odd = dim % 2 == 1
    labels = list(range(half, 0, -1)) + ([0] if odd else []) + list(range(-1, -half - 1, -1))
    index = {k: i for i, k in enumerate(labels)}
    a = np.zeros((dim, dim), dtype=complex)
    r = 0
    for k in range(half, 0, -1):
        a[r, index[k]] = 1.0 / math.sqrt(2.0)
        a[r, index[-k]] = 1.0 / math.sqrt(2.0)
        r += 1
    if odd:
        a[r, index[0]] = 1.0
        r += 1
    for k in range(1, half + 1):
        a[r, index[k]] = -1.0j / math.sqrt(2.0)
        a[r, index[-k]] = 1.0j / math.sqrt(2.0)
        r += 1
    return a


def selfconj_basis_from_orthogonal(reference: SelfConjBasis, o: np.ndarray) -> SelfConjBasis:
    """New self-conjugated basis from a real orthogonal mixing matrix.

    U = A^* O A commutes with the coordinate conjugation because A intertwines
    it with entrywise conjugation, so the pairing J v_k = v_{-k} survives.
    """
    o = np.asarray(o, dtype=float)
    d = reference.dim
    if o.shape != (d, d):
        raise ValueError("orthogonal matrix shape does not match the basis")
    a = realify_matrix(d)
    u = a.conj().T @ o.astype(complex) @ a
    return SelfConjBasis(reference.module, reference.change @ u)


def random_selfconj_basis(reference: SelfConjBasis, rng: RngStream) -> SelfConjBasis:
    """Haar-ish random self-conjugated basis through a sign-fixed QR draw."""
    d = reference.dim
    gauss = rng.generator.standard_normal((d, d))
    q, r = np.linalg.qr(gauss)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return selfconj_basis_from_orthogonal(reference, q * signs[None, :])


def left_translated_basis(basis: SelfConjBasis, g0) -> SelfConjBasis:
    """Basis of the left translates w_k = L_{g0} v_k."""
    return SelfConjBasis(basis.module, basis.module.ref_rep(g0) @ basis.change)


def basis_rep_matrix(basis: SelfConjBasis, g) -> np.ndarray:
    """Representation matrix in the basis: change^* D_ref(g) change."""
    return basis.change.conj().T @ basis.module.ref_rep(g) @ basis.change


def basis_rep_batch(basis: SelfConjBasis, gs: Sequence) -> np.ndarray:
    ref = basis.module.ref_rep_batch(gs)
    return np.einsum("ij,njk,kl->nil", basis.change.conj().T, ref, basis.change)


def realified_rep(basis: SelfConjBasis, g) -> np.ndarray:
    """Real orthogonal matrix A D(g) A^*; imaginary parts are discarded."""
    a = realify_matrix(basis.dim)
    return (a @ basis_rep_matrix(basis, g) @ a.conj().T).real


def conjugate_in_basis(basis: SelfConjBasis, values: np.ndarray) -> np.ndarray:
    """Conjugation in basis coordinates: (Cw)_{-k} = conj(w_k)."""
    out = np.empty(basis.dim, dtype=complex)
    out[basis.module.neg_index] = np.conj(np.asarray(values))
    return out


def selfconj_defects(basis: SelfConjBasis) -> dict[str, float]:
    """Max deviations from unitarity and from the conjugation pairing."""
    c = basis.change
    unit = float(np.abs(c.conj().T @ c - np.eye(basis.dim)).max())
    pair = 0.0
    for i, k in enumerate(basis.labels):
        expected = c[:, basis.index_of(-k)]
        got = basis.module.conjugate_coords(c[:, i])
        pair = max(pair, float(np.abs(got - expected).max()))
    return {"unitarity": unit, "pairing": pair}


# ---------------------------------------------------------------------------
# pointwise evaluation: spherical harmonics and SU(2) matrix coefficients
# ---------------------------------------------------------------------------


def _legendre_block(degree: int, x: np.ndarray) -> np.ndarray:
    """Associated Legendre values P_l^m(x) for 0 <= m <= l <= degree.

    Returns array (degree+1, degree+1, len(x)) indexed [l, m]; includes the
    Condon-Shortley factor (-1)^m.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    p = np.zeros((degree + 1, degree + 1, n))
    p[0, 0] = 1.0
    if degree == 0:
        return p
    somx2 = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    for m in range(1, degree + 1):
        p[m, m] = -(2 * m - 1) * somx2 * p[m - 1, m - 1]
    for m in range(degree):
        p[m + 1, m] = (2 * m + 1) * x * p[m, m]
    for m in range(degree + 1):
        for l in range(m + 2, degree + 1):
            p[l, m] = ((2 * l - 1) * x * p[l - 1, m] - (l + m - 1) * p[l - 2, m]) / (l - m)
    return p


def eval_s2(degree: int, m: int, theta, phi):
    """Spherical harmonic Y_{L,m}(theta, phi), Condon-Shortley normalization.

    Orthonormal for the area measure on the sphere; satisfies
    Y_{L,-m} = (-1)^m conj(Y_{L,m}).  theta and phi broadcast as arrays.
    """
    if abs(m) > degree:
        raise ValueError("order exceeds degree")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    shape = np.broadcast_shapes(theta.shape, phi.shape)
    th = np.broadcast_to(theta, shape).ravel()
    ph = np.broadcast_to(phi, shape).ravel()
    ma = abs(m)
    p = _legendre_block(degree, np.cos(th))[degree, ma]
    norm = math.sqrt(
        (2 * degree + 1)
        / (4.0 * math.pi)
        * math.factorial(degree - ma)
        / math.factorial(degree + ma)
    )
    val = norm * p * np.exp(1j * ma * ph)
    if m < 0:
        val = (-1.0) ** (ma % 2) * np.conj(val)
    out = val.reshape(shape)
    return complex(out) if out.shape == () else out


def sph_harm_table(degree: int, theta: np.ndarray, phi: np.ndarray) -> dict[int, np.ndarray]:
    """All Y_{l,m} up to the degree on flat point arrays.

    Returns {l: array (2l+1, npoints)} with rows in canonical order l..-l.
    """
    theta = np.asarray(theta, dtype=float).ravel()
    phi = np.asarray(phi, dtype=float).ravel()
    p = _legendre_block(degree, np.cos(theta))
    phases = {m: np.exp(1j * m * phi) for m in range(degree + 1)}
    out = {}
    for l in range(degree + 1):
        block = np.empty((2 * l + 1, theta.shape[0]), dtype=complex)
        for m in range(l + 1):
            norm = math.sqrt(
                (2 * l + 1) / (4.0 * math.pi) * math.factorial(l - m) / math.factorial(l + m)
            )
            pos = norm * p[l, m] * phases[m]
            block[l - m] = pos
            if m > 0:
                block[l + m] = (-1.0) ** (m % 2) * np.conj(pos)
        out[l] = block
    return out


def eval_s3(ell: int, i: int, j: int, x: SU2Element) -> complex:
    """Orthonormal coefficient function sqrt(ell+1) D_{ij}(x) on SU(2) = S^3.

    D_{ij} is the (row i, column j) entry of the degree-ell representation
    matrix; orthonormality is for the probability Haar measure.
    """
    return math.sqrt(ell + 1) * irrep.matrix_coeff(ell, x, j, i)
