"""Complex polynomials, simple-pole partial fractions, and circle-positive
spectral factorization.

Everything here is plain double-precision arithmetic over small degrees.
Polynomials are ascending coefficient tuples, roots come from the balanced
companion matrix, and the factorization routine splits the root pairs
(w, 1/conj(w)) of a trigonometric polynomial that stays strictly positive
on the unit circle.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from numpy.polynomial import polynomial as npoly


class DegreeZeroError(ValueError):
    """Root finding needs degree >= 1."""


class PolesNotDistinctError(ValueError):
    """Pole set contains a pair closer than the allowed gap."""


class DegreeTooLargeError(ValueError):
    """Numerator degree must stay strictly below the number of poles."""


class NotPositiveOnCircleError(ValueError):
    """Input is not strictly positive on the unit circle."""


class RootOnCircleError(ValueError):
    """A factorization root sits numerically on the unit circle."""


# minimum pairwise gap for a usable simple-pole configuration
POLE_GAP = 1e-9
# a root this close to |w| = 1 cannot be assigned to either side of the circle
CIRCLE_ROOT_TOL = 1e-7
# absolute tolerance when matching a root w against the mirror 1/conj(w)
MIRROR_PAIR_TOL = 1e-6


@dataclass(frozen=True)
class Polynomial:
    """Polynomial sum_i coeffs[i] * z**i with trailing zeros trimmed.

    The zero polynomial is the empty tuple and reports degree -inf.
    """

    coeffs: tuple[complex, ...] = ()

    @staticmethod
    def from_coeffs(coeffs: Iterable[complex]) -> "Polynomial":
        cs = [complex(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return Polynomial(tuple(cs))

    @staticmethod
    def from_roots(roots: Iterable[complex], leading: complex = 1.0) -> "Polynomial":
        acc = np.array([complex(leading)])
        for r in roots:
            acc = np.convolve(acc, np.array([-complex(r), 1.0]))
        return Polynomial.from_coeffs(acc)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def __call__(self, z):
        return poly_eval(self, z)

    def derivative(self) -> "Polynomial":
        return Polynomial.from_coeffs([i * c for i, c in enumerate(self.coeffs)][1:])

    def conjugate(self) -> "Polynomial":
        """Coefficient-wise conjugate, the polynomial z -> conj(p(conj(z)))."""
        return Polynomial.from_coeffs([complex(c).conjugate() for c in self.coeffs])

    def scaled(self, s: complex) -> "Polynomial":
        return Polynomial.from_coeffs([s * c for c in self.coeffs])

    def padded(self, length: int) -> np.ndarray:
        if len(self.coeffs) > length:
            raise ValueError(f"degree {self.degree} does not fit in {length} slots")
        out = np.zeros(length, dtype=complex)
        out[: len(self.coeffs)] = self.coeffs
        return out


def poly_eval(p: Polynomial, z):
    """Horner evaluation of p at a scalar or ndarray argument."""
    zc = np.asarray(z, dtype=complex)
    acc = np.zeros(zc.shape, dtype=complex)
    for c in reversed(p.coeffs):
        acc = acc * zc + c
    if zc.ndim == 0:
        return complex(acc)
    return acc


def poly_roots(p: Polynomial) -> list[complex]:
    """All degree-many roots of p, from the balanced companion matrix.

    Roots are sorted by (principal argument, modulus) so repeated calls on
    the same coefficients produce the same ordering.

    Raises
    ------
    DegreeZeroError
        If p is constant (the zero polynomial included).
    """
    if not p.coeffs or len(p.coeffs) < 2:
        raise DegreeZeroError("root finding needs a polynomial of degree >= 1")
    roots = npoly.polyroots(np.asarray(p.coeffs, dtype=complex))
    return sorted((complex(r) for r in roots), key=lambda r: (np.angle(r), abs(r)))


def lagrange_denominators(poles) -> np.ndarray:
    """a_r = prod_{t != r} (poles[r] - poles[t]); the empty product is 1."""
    ps = np.asarray(poles, dtype=complex)
    n = len(ps)
    out = np.ones(n, dtype=complex)
    for r in range(n):
        for t in range(n):
            if t != r:
                out[r] *= ps[r] - ps[t]
    return out


@dataclass(frozen=True)
class PartialFractionExpansion:
    """p(z) / prod_i (z - poles[i]) = sum_i residues[i] / (z - poles[i])."""

    poles: tuple[complex, ...]
    residues: tuple[complex, ...]
    denominators: tuple[complex, ...]

    def __call__(self, z):
        zc = np.asarray(z, dtype=complex)
        acc = np.zeros(zc.shape, dtype=complex)
        for pole, res in zip(self.poles, self.residues):
            acc = acc + res / (zc - pole)
        if zc.ndim == 0:
            return complex(acc)
        return acc


def partial_fractions_simple(p: Polynomial, poles) -> PartialFractionExpansion:
    """Residues of p over a set of simple poles.

    Requires deg p < len(poles) and pairwise pole gaps above POLE_GAP, so
    the expansion has no polynomial part and every residue is p(pole)/a_r
    with a_r the Lagrange denominator at that pole.
    """
    ps = [complex(x) for x in poles]
    if not ps:
        raise PolesNotDistinctError("need at least one pole")
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            if abs(ps[i] - ps[j]) <= POLE_GAP:
                raise PolesNotDistinctError(
                    f"poles {i} and {j} are within {POLE_GAP}: "
                    f"{ps[i]} vs {ps[j]}")
    if p.coeffs and p.degree >= len(ps):
        raise DegreeTooLargeError(
            f"numerator degree {p.degree} with only {len(ps)} poles")
    denoms = lagrange_denominators(ps)
    residues = tuple(complex(p(a)) / complex(d) for a, d in zip(ps, denoms))
    return PartialFractionExpansion(tuple(ps), residues, tuple(map(complex, denoms)))


@dataclass(frozen=True)
class LaurentHermitian:
    """Finite hermitian Laurent series sum_{|m| <= k} d_m z^m.

    Only the closed side (d_0, ..., d_k) is stored; d_{-m} = conj(d_m) is
    implied, which forces real values on |z| = 1. d_0 must be real.
    """

    upper: tuple[complex, ...]

    def __post_init__(self):
        if not self.upper:
            raise ValueError("need at least the constant coefficient d_0")
        if self.upper[0].imag != 0:
            raise ValueError("constant coefficient d_0 must be real")

    @staticmethod
    def from_upper(coeffs: Iterable[complex]) -> "LaurentHermitian":
        cs = [complex(c) for c in coeffs]
        if not cs:
            raise ValueError("need at least the constant coefficient d_0")
        if abs(cs[0].imag) > 1e-9 * max(abs(cs[0]), 1.0):
            raise ValueError(f"constant coefficient {cs[0]} is not real")
        head = complex(cs[0].real)
        tail = cs[1:]
        while tail and tail[-1] == 0:
            tail.pop()
        return LaurentHermitian(tuple([head] + tail))

    @staticmethod
    def from_full(full: Iterable[complex], tol: float = 1e-9) -> "LaurentHermitian":
        """Build from a full band (d_{-k}, ..., d_k), averaging the two sides.

        The input must already be hermitian to within tol relative to its
        largest entry; the average makes the symmetry exact.
        """
        arr = np.asarray(list(full), dtype=complex)
        if len(arr) % 2 != 1:
            raise ValueError("full band must have odd length 2k+1")
        k = len(arr) // 2
        scale = max(np.abs(arr).max(), 1e-300)
        sym = 0.5 * (arr[k:] + np.conj(arr[k::-1]))
        if np.abs(arr[k:] - np.conj(arr[k::-1])).max() > tol * scale:
            raise ValueError("band is not hermitian within tolerance")
        return LaurentHermitian.from_upper(sym)

    @property
    def bandwidth(self) -> int:
        return len(self.upper) - 1

    def full(self) -> np.ndarray:
        """Coefficients (d_{-k}, ..., d_k) ascending in the exponent."""
        up = np.asarray(self.upper, dtype=complex)
        return np.concatenate([np.conj(up[:0:-1]), up])

    def values_on_circle(self, z) -> np.ndarray:
        """Exactly real values at unimodular points z."""
        zc = np.asarray(z, dtype=complex)
        acc = np.zeros(zc.shape, dtype=complex)
        for d in self.upper[:0:-1]:
            acc = (acc + d) * zc
        vals = self.upper[0].real + 2.0 * acc.real
        if zc.ndim == 0:
            return float(vals)
        return vals


def fejer_riesz_factor(R: LaurentHermitian, samples: int = 4096):
    """Factor R(z) = gamma * prod_j |z - alpha_j|^2 on |z| = 1.

    R must be strictly positive on the circle (checked on `samples`
    equispaced points: min > 1e-10 * max). The roots of z^k R(z) come in
    mirror pairs (w, 1/conj(w)); the representatives outside the closed
    unit disc are returned sorted by (argument, modulus), and

        gamma = R(1) / prod_j |1 - alpha_j|^2.

    Returns
    -------
    (gamma, alphas) : (float, list[complex])
        gamma > 0 and all |alpha_j| > 1. A bandwidth-0 input returns
        (d_0, []).

    Raises
    ------
    NotPositiveOnCircleError
        If the positivity gate fails.
    RootOnCircleError
        If any root sits within CIRCLE_ROOT_TOL of the circle, or the
        mirror pairing cannot be completed within MIRROR_PAIR_TOL.
    """
    theta = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    vals = R.values_on_circle(np.exp(1j * theta))
    vmax = float(vals.max())
    if vmax <= 0.0 or float(vals.min()) <= 1e-10 * vmax:
        raise NotPositiveOnCircleError(
            f"min sample {vals.min():.3e} vs max {vmax:.3e}")
    k = R.bandwidth
    if k == 0:
        return float(R.upper[0].real), []

    # z^k R(z) has ascending coefficients equal to the full band of R
    roots = poly_roots(Polynomial.from_coeffs(R.full()))
    for w in roots:
        if abs(abs(w) - 1.0) <= CIRCLE_ROOT_TOL:
            raise RootOnCircleError(f"root {w} has modulus {abs(w)}")
    outer = [w for w in roots if abs(w) > 1.0]
    inner = [w for w in roots if abs(w) < 1.0]
    if len(outer) != k or len(inner) != k:
        raise RootOnCircleError(
            f"expected {k} roots on each side of the circle, "
            f"got {len(outer)} outside and {len(inner)} inside")
    unused = list(inner)
    for w in outer:
        mirror = 1.0 / complex(w).conjugate()
        gaps = [abs(u - mirror) for u in unused]
        best = int(np.argmin(gaps))
        if gaps[best] > MIRROR_PAIR_TOL:
            raise RootOnCircleError(
                f"no mirror partner for root {w}: nearest is off by {gaps[best]:.3e}")
        unused.pop(best)

    alphas = sorted(outer, key=lambda r: (np.angle(r), abs(r)))
    alpha_arr = np.asarray(alphas, dtype=complex)
    gamma = float(R.values_on_circle(1.0 + 0.0j)) / float(
        np.prod(np.abs(1.0 - alpha_arr) ** 2))
    if gamma <= 0.0:
        raise NotPositiveOnCircleError(f"factor constant {gamma} is not positive")

    # residual gate: the reconstruction must match R on the circle
    zs = np.exp(1j * np.linspace(0.0, 2.0 * np.pi, 512, endpoint=False))
    recon = gamma * np.prod(
        np.abs(zs[:, None] - alpha_arr[None, :]) ** 2, axis=1)
    resid = np.abs(recon - R.values_on_circle(zs)).max()
    if resid > 1e-8 * max(vmax, 1e-300):
        raise RuntimeError(
            f"factorization residual {resid:.3e} exceeds 1e-8 * {vmax:.3e}")
    return gamma, alphas
