"""Irreducible SU(2) modules on homogeneous polynomials and their matrix coefficients.

H_l is the space of homogeneous polynomials of degree l in (z1, z2) with the
invariant inner product <p_s, p_r> = s! (l-s)! / l! delta_{sr} on the monomials
p_s = z1^s z2^{l-s}.  The orthonormal basis is e_s = sqrt(binom(l, s)) p_s and
g in SU(2) acts by (g p)(z1, z2) = p(a z1 - conj(b) z2, b z1 + conj(a) z2).

Representation matrices use the entry convention (j, s) = <g e_s, e_j>, so the
columns hold the expansion of g e_s and D(gh) = D(g) D(h).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .groups import SO4Element, SU2Element


@dataclass(frozen=True)
class HomogeneousPoly:
    """Degree-l homogeneous polynomial; coeffs[s] multiplies z1^s z2^(l-s)."""

    ell: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=complex)
        if self.ell < 0 or c.shape != (self.ell + 1,):
            raise ValueError("coefficient array must have length ell + 1")
        object.__setattr__(self, "coeffs", c)

    def evaluate(self, z1: complex, z2: complex) -> complex:
        out = 0.0 + 0.0j
        for s in range(self.ell + 1):
            out += self.coeffs[s] * z1**s * z2 ** (self.ell - s)
        return out


def monomial(ell: int, s: int, coeff: complex = 1.0) -> HomogeneousPoly:
    """coeff * z1^s z2^(l-s)."""
    if not 0 <= s <= ell:
        raise ValueError("monomial index out of range")
    c = np.zeros(ell + 1, dtype=complex)
    c[s] = coeff
    return HomogeneousPoly(ell, c)


def e_basis(ell: int, s: int) -> HomogeneousPoly:
    """Orthonormal basis vector e_s = sqrt(binom(l, s)) z1^s z2^(l-s)."""
    return monomial(ell, s, math.sqrt(math.comb(ell, s)))


def act(g: SU2Element, p: HomogeneousPoly) -> HomogeneousPoly:
    """Substitute (z1, z2) -> (a z1 - conj(b) z2, b z1 + conj(a) z2) into p."""
    ell = p.ell
    # power chains of the two linear forms, coefficient index = power of z1
    lin1 = np.array([-np.conj(g.b), g.a], dtype=complex)
    lin2 = np.array([np.conj(g.a), g.b], dtype=complex)
    pow1 = [np.array([1.0 + 0.0j])]
    pow2 = [np.array([1.0 + 0.0j])]
    for _ in range(ell):
        pow1.append(np.convolve(pow1[-1], lin1))
        pow2.append(np.convolve(pow2[-1], lin2))
    out = np.zeros(ell + 1, dtype=complex)
    for s in range(ell + 1):
        c = p.coeffs[s]
        if c != 0:
            out += c * np.convolve(pow1[s], pow2[ell - s])
    return HomogeneousPoly(ell, out)


def inner(p: HomogeneousPoly, q: HomogeneousPoly) -> complex:
    """Invariant inner product, linear in the first argument."""
    if p.ell != q.ell:
        raise ValueError("inner product needs equal degrees")
    total = 0.0 + 0.0j
    for s in range(p.ell + 1):
        total += p.coeffs[s] * np.conj(q.coeffs[s]) / math.comb(p.ell, s)
    return complex(total)


def matrix_coeff(ell: int, g: SU2Element, s: int, j: int) -> complex:
    """<g e_s, e_j> via the explicit binomial double sum."""
    if not (0 <= s <= ell and 0 <= j <= ell):
        raise ValueError("matrix coefficient indices out of range")
    a, b = g.a, g.b
    ca, cb = np.conj(a), np.conj(b)
    total = 0.0 + 0.0j
    for h in range(max(0, j - (ell - s)), min(s, j) + 1):
        k = j - h
        total += (
            math.comb(s, h)
            * math.comb(ell - s, k)
            * a**h
            * ca ** (ell - s - k)
            * b**k
            * (-cb) ** (s - h)
        )
    ratio = math.sqrt(math.comb(ell, s) / math.comb(ell, j))
    return complex(ratio * total)


def rep_matrix_batch(ell: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Stack of representation matrices for parallel arrays of (a, b) pairs.

    Returns shape (n, l+1, l+1); entry (j, s) of each matrix is <g e_s, e_j>.
    """
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    n = a.shape[0]
    d = ell + 1
    ap = np.ones((n, d), dtype=complex)
    bp = np.ones((n, d), dtype=complex)
    cap = np.ones((n, d), dtype=complex)
    ncbp = np.ones((n, d), dtype=complex)
    ca = np.conj(a)
    ncb = -np.conj(b)
    for p in range(1, d):
        ap[:, p] = ap[:, p - 1] * a
        bp[:, p] = bp[:, p - 1] * b
        cap[:, p] = cap[:, p - 1] * ca
        ncbp[:, p] = ncbp[:, p - 1] * ncb
    out = np.zeros((n, d, d), dtype=complex)
    for s in range(d):
        cu = np.array([math.comb(s, h) for h in range(s + 1)], dtype=float)
        cw = np.array([math.comb(ell - s, k) for k in range(ell - s + 1)], dtype=float)
        u = cu[None, :] * ap[:, : s + 1] * ncbp[:, s::-1]
        w = cw[None, :] * bp[:, : ell - s + 1] * cap[:, ell - s :: -1]
        col = out[:, :, s]
        for h in range(s + 1):
            col[:, h : h + ell - s + 1] += u[:, h, None] * w
    binoms = np.array([math.comb(ell, s) for s in range(d)], dtype=float)
    ratio = np.sqrt(binoms[None, :] / binoms[:, None])
    return out * ratio[None, :, :]


def rep_matrix(ell: int, g: SU2Element) -> np.ndarray:
    """(l+1) x (l+1) unitary matrix of g on H_l, entry (j, s) = <g e_s, e_j>."""
    return rep_matrix_batch(ell, np.array([g.a]), np.array([g.b]))[0]


def tensor_rep_matrix(ell: int, r: SO4Element) -> np.ndarray:
    """Kronecker matrix of (g1, g2) on H_l x H_l, index pairs (s1, s2) with s1 major."""
    return np.kron(rep_matrix(ell, r.g1), rep_matrix(ell, r.g2))


def conjugation_j(p: HomogeneousPoly) -> HomogeneousPoly:
    """Antilinear module conjugation (J p)(z1, z2) = conj(p(-conj(z2), conj(z1)))."""
    ell = p.ell
    out = np.zeros(ell + 1, dtype=complex)
    for s in range(ell + 1):
        out[ell - s] = (-1.0) ** s * np.conj(p.coeffs[s])
    return HomogeneousPoly(ell, out)


def clebsch_gordan_components(ell: int, k: int) -> list[int]:
    """Degrees in the decomposition H_l x H_k = sum_j H_{l+k-2j}, j = 0..min(l,k)."""
    if ell < 0 or k < 0:
        raise ValueError("degrees must be nonnegative")
    return [ell + k - 2 * j for j in range(min(ell, k) + 1)]


def jacobian_pair(p: HomogeneousPoly, q: HomogeneousPoly) -> HomogeneousPoly:
    """Jacobian determinant d1(p) d2(q) - d2(p) d1(q), degree 2l - 2.

    Bilinear and alternating, so proportional pairs map to zero; the pairwise
    products are antisymmetrized before summation so exactly proportional
    coefficient arrays give an exactly zero result.
    """
    ell = p.ell
    if q.ell != ell:
        raise ValueError("jacobian pairing needs equal degrees")
    if ell == 0:
        raise ValueError("degree-0 polynomials have no jacobian pairing")
    # scalar complex products: vectorized multiplies may contract with FMA and
    # lose the exact antisymmetry p_u q_v - p_v q_u = 0 for proportional inputs
    pc = [complex(v) for v in p.coeffs]
    qc = [complex(v) for v in q.coeffs]
    out = np.zeros(2 * ell - 1, dtype=complex)
    for u in range(ell + 1):
        for v in range(u):
            anti = pc[u] * qc[v] - pc[v] * qc[u]
            out[u + v - 1] += ell * (u - v) * anti
    return HomogeneousPoly(2 * ell - 2, out)


@dataclass(frozen=True)
class ExactPoly:
    """Univariate polynomial with exact rational coefficients; coeffs[v] multiplies x^v."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        c = tuple(Fraction(v) for v in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        if not c:
            c = (Fraction(0),)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.coeffs)

    def evaluate(self, x: Fraction | int) -> Fraction:
        """Exact Horner evaluation."""
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evaluate_float(self, x: float) -> float:
        # floats convert to exact dyadic rationals, so only the final cast rounds
        return float(self.evaluate(Fraction(x)))

    def __add__(self, other: "ExactPoly") -> "ExactPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        c = [Fraction(0)] * n
        for i, v in enumerate(self.coeffs):
            c[i] += v
        for i, v in enumerate(other.coeffs):
            c[i] += v
        return ExactPoly(tuple(c))

    def __sub__(self, other: "ExactPoly") -> "ExactPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        c = [Fraction(0)] * n
        for i, v in enumerate(self.coeffs):
            c[i] += v
        for i, v in enumerate(other.coeffs):
            c[i] -= v
        return ExactPoly(tuple(c))


def p_poly(ell: int, s: int, j: int) -> ExactPoly:
    """Exact squared-modulus polynomial P^l_{s,j}(x) with x = |a|^2.

    Satisfies P^l_{s,j}(|a|^2) = |<g e_s, e_j>|^2 for every g = (a, b) and the
    exact row-sum identity sum_j P^l_{s,j} = 1.
    """
    if not (0 <= s <= ell and 0 <= j <= ell):
        raise ValueError("polynomial indices out of range")
    h_lo = max(0, s + j - ell)
    h_hi = min(s, j)
    inner_coeffs = {
        h: (-1) ** (s - h) * math.comb(s, h) * math.comb(ell - s, j - h)
        for h in range(h_lo, h_hi + 1)
    }
    # square the inner sum, collecting by u = h + h'
    squares: dict[int, int] = {}
    for h, ch in inner_coeffs.items():
        for hp, chp in inner_coeffs.items():
            squares[h + hp] = squares.get(h + hp, 0) + ch * chp
    ratio = Fraction(math.comb(ell, s), math.comb(ell, j))
    out = [Fraction(0)] * (ell + 1)
    for u, w in squares.items():
        x_pow = ell - s - j + u
        k_pow = s + j - u  # power of (1 - x)
        for t in range(k_pow + 1):
            out[x_pow + t] += ratio * w * (-1) ** t * math.comb(k_pow, t)
    return ExactPoly(tuple(out))
