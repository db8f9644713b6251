"""Group elements and Haar sampling for SU(2), SO(3) via the double cover, and SO(4).

SU(2) elements are stored as the renormalized pair (a, b) of the first row of

    [[a, b], [-conj(b), conj(a)]],   |a|^2 + |b|^2 = 1.

SO(4) elements are pairs of SU(2) elements modulo the simultaneous sign flip,
acting on unit quaternions by x -> g1 x g2^{-1}.  Reproducible randomness comes
from RngStream, a splittable wrapper keyed by (seed, stream_id).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

_DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class SU2Element:
    """Unit pair (a, b); use su2_new to construct from unnormalized data."""

    a: complex
    b: complex

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.a, self.b], [-np.conj(self.b), np.conj(self.a)]], dtype=complex
        )


def su2_new(a: complex, b: complex) -> SU2Element:
    """Renormalize (a, b) onto |a|^2 + |b|^2 = 1."""
    norm = math.hypot(abs(a), abs(b))
    if norm < _DEGENERATE_TOL:
        raise ValueError("degenerate group element: |a|^2 + |b|^2 ~ 0")
    return SU2Element(complex(a) / norm, complex(b) / norm)


def identity() -> SU2Element:
    return SU2Element(1.0 + 0.0j, 0.0 + 0.0j)


def compose(g: SU2Element, h: SU2Element) -> SU2Element:
    """Group product g h (matrix product of the 2x2 forms)."""
    a = g.a * h.a - g.b * np.conj(h.b)
    b = g.a * h.b + g.b * np.conj(h.a)
    return SU2Element(complex(a), complex(b))


def inverse(g: SU2Element) -> SU2Element:
    """Inverse (conjugate transpose): (a, b) -> (conj(a), -b)."""
    return SU2Element(np.conj(g.a), -g.b)


def torus_element(theta: float) -> SU2Element:
    """Maximal torus element t_theta = diag(e^{i theta}, e^{-i theta})."""
    return SU2Element(complex(math.cos(theta), math.sin(theta)), 0.0 + 0.0j)


# Pauli basis used to identify R^3 with traceless Hermitian 2x2 matrices
# X = x s1 + y s2 + z s3; the adjoint action g X g^* then gives the double cover.
_PAULI = np.array(
    [
        [[0.0, 1.0], [1.0, 0.0]],
        [[0.0, -1.0j], [1.0j, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
    ],
    dtype=complex,
)


def rotation_matrix(g: SU2Element) -> np.ndarray:
    """SO(3) image of g under the double cover; columns are g s_j g^* in the Pauli basis."""
    u = g.matrix()
    uh = u.conj().T
    cols = [u @ s @ uh for s in _PAULI]
    r = np.empty((3, 3), dtype=float)
    for i in range(3):
        for j in range(3):
            r[i, j] = 0.5 * np.trace(_PAULI[i] @ cols[j]).real
    return r


def su2_from_euler(alpha: float, beta: float, gamma: float) -> SU2Element:
    """Lift of the rotation R_z(alpha) R_y(beta) R_z(gamma) to SU(2).

    With this module's double cover, torus_element(theta) covers R_z(-2 theta)
    and (cos(beta/2), -sin(beta/2)) covers R_y(beta).
    """
    gy = SU2Element(complex(math.cos(beta / 2.0)), complex(-math.sin(beta / 2.0)))
    return compose(compose(torus_element(-alpha / 2.0), gy), torus_element(-gamma / 2.0))


def _canonical_pair(g1: SU2Element, g2: SU2Element) -> tuple[SU2Element, SU2Element]:
    # flip the joint sign so the first component of (Re a1, Im a1, Re b1, Im b1)
    # with magnitude above tolerance is positive; makes equality modulo sign exact
    for c in (g1.a.real, g1.a.imag, g1.b.real, g1.b.imag):
        if abs(c) > _DEGENERATE_TOL:
            if c < 0:
                return (
                    SU2Element(-g1.a, -g1.b),
                    SU2Element(-g2.a, -g2.b),
                )
            return g1, g2
    raise ValueError("degenerate group element in SO(4) pair")


@dataclass(frozen=True)
class SO4Element:
    """Pair (g1, g2) modulo (g1, g2) ~ (-g1, -g2); the sign is canonicalized."""

    g1: SU2Element
    g2: SU2Element

    def __post_init__(self) -> None:
        c1, c2 = _canonical_pair(self.g1, self.g2)
        object.__setattr__(self, "g1", c1)
        object.__setattr__(self, "g2", c2)


def so4_new(g1: SU2Element, g2: SU2Element) -> SO4Element:
    return SO4Element(g1, g2)


def so4_identity() -> SO4Element:
    return SO4Element(identity(), identity())


def so4_compose(r: SO4Element, s: SO4Element) -> SO4Element:
    return SO4Element(compose(r.g1, s.g1), compose(r.g2, s.g2))


def so4_inverse(r: SO4Element) -> SO4Element:
    return SO4Element(inverse(r.g1), inverse(r.g2))


def so4_apply(r: SO4Element, x: SU2Element) -> SU2Element:
    """Action on the unit quaternions S^3: x -> g1 x g2^{-1}."""
    return compose(compose(r.g1, x), inverse(r.g2))


def haar_sample(rng: "RngStream") -> SU2Element:
    """Haar-distributed SU(2) element from four standard normals."""
    a, b = haar_sample_batch(rng, 1)
    return SU2Element(complex(a[0]), complex(b[0]))


def haar_sample_batch(rng: "RngStream", n: int) -> tuple[np.ndarray, np.ndarray]:
    """n Haar draws, returned as parallel arrays of a and b values."""
    if n <= 0:
        raise ValueError("need n >= 1 samples")
    x = rng.generator.standard_normal((n, 4))
    norms = np.linalg.norm(x, axis=1)
    bad = norms < _DEGENERATE_TOL
    while np.any(bad):  # pragma: no cover - probability ~ 0
        x[bad] = rng.generator.standard_normal((int(bad.sum()), 4))
        norms = np.linalg.norm(x, axis=1)
        bad = norms < _DEGENERATE_TOL
    x /= norms[:, None]
    return x[:, 0] + 1j * x[:, 1], x[:, 2] + 1j * x[:, 3]


def haar_sample_so4(rng: "RngStream") -> SO4Element:
    return SO4Element(haar_sample(rng), haar_sample(rng))


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream keyed by (seed, stream_id).

    The same key yields the same sequence on every platform (numpy SeedSequence
    + PCG64).  split(n) derives n disjoint child streams; a stream should have a
    single owner, so hand children to workers instead of sharing one stream.
    """

    seed: int
    stream_id: int = 0
    path: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.seed < 0 or self.stream_id < 0:
            raise ValueError("seed and stream_id must be nonnegative integers")

    @cached_property
    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(
            entropy=(self.seed, self.stream_id), spawn_key=self.path
        )
        return np.random.Generator(np.random.PCG64(ss))

    def split(self, n: int) -> list["RngStream"]:
        if n <= 0:
            raise ValueError("need n >= 1 child streams")
        return [
            RngStream(self.seed, self.stream_id, self.path + (i,)) for i in range(n)
        ]
