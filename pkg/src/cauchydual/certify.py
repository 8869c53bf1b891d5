"""Subnormality certificates for the Cauchy dual of the shift attached to
a row symbol.

The decision chain is: exact numerator orthogonality at the poles (a
sufficient condition), the necessary measure supported on [0, 1] (its
failure is a definitive refutation), and truncated Agler-type positivity
matrices computed by two independent engines (pole side and Taylor side).
When every off-diagonal pole product is a distinct point outside the ray
[1, oo), orthogonality is also necessary, so its failure refutes without
waiting for a truncation witness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .polyrat import lagrange_denominators
from .symbolpipe import RationalSymbol

VERDICT_CERTIFIED = "CertifiedSubnormal"
VERDICT_REFUTED = "RefutedAtLevel"
VERDICT_INCONCLUSIVE = "InconclusiveAtTruncation"


class InsufficientRowsError(ValueError):
    """Taylor table is too short for the requested truncation and levels."""


class InsufficientLengthError(ValueError):
    """Moment sequence is too short for the requested difference depth."""


@dataclass(frozen=True)
class CertificateConfig:
    """Truncation sizes and tolerances for the certificate battery."""

    levels: int = 12
    trunc: int = 40
    tol_psd: float = 1e-8
    tol_orth: float = 1e-9

    def __post_init__(self):
        if self.levels < 1 or self.trunc < 2:
            raise ValueError("need levels >= 1 and trunc >= 2")
        if self.tol_psd <= 0.0 or self.tol_orth <= 0.0:
            raise ValueError("tolerances must be positive")


def cross_gram(sym: RationalSymbol) -> np.ndarray:
    """C[r, t] = sum_j p_j(alpha_r) conj(p_j(alpha_t)) / (a_r conj(a_t)).

    Hermitian with nonnegative diagonal; a_r are the Lagrange denominators
    of the pole set.
    """
    k = sym.k
    if k == 0:
        return np.zeros((0, 0), dtype=complex)
    alphas = np.asarray(sym.alphas, dtype=complex)
    vals = np.array([[p(a) for a in alphas] for p in sym.numerators])
    S = vals.conj().T @ vals        # S[r, t] = sum_j p_j(alpha_r)* ... transposed
    S = S.conj()                    # now S[r, t] = sum_j p_j(alpha_r) conj(p_j(alpha_t))
    a = lagrange_denominators(alphas)
    C = S / np.outer(a, np.conj(a))
    return 0.5 * (C + C.conj().T)


def orthogonality_test(sym: RationalSymbol, cfg: CertificateConfig):
    """Relative size of the worst off-diagonal numerator pairing at the poles.

    Returns (residual, passed); a symbol with fewer than two poles passes
    vacuously with residual 0.
    """
    if sym.k <= 1:
        return 0.0, True
    alphas = np.asarray(sym.alphas, dtype=complex)
    vals = np.array([[p(a) for a in alphas] for p in sym.numerators])
    pair = vals.conj().T @ vals
    pair = pair.conj()              # pair[r, t] = sum_j p_j(alpha_r) conj(p_j(alpha_t))
    diag = np.abs(np.diag(pair).real)
    off = np.abs(pair - np.diag(np.diag(pair)))
    residual = float(off.max() / max(diag.max(), 1e-300))
    return residual, residual <= cfg.tol_orth


@dataclass(frozen=True)
class LevelStat:
    level: int
    min_eig: float
    norm: float


def agler_pole_matrix(sym: RationalSymbol, cross: np.ndarray,
                      level: int, size: int) -> np.ndarray:
    """Level-l truncation built from the pole data:

        M[m, n] = sum_{r,t} C[r,t] (1 - 1/(alpha_r conj(alpha_t)))^l
                  * alpha_r^-(m+2) conj(alpha_t)^-(n+2).
    """
    if sym.k == 0:
        return np.zeros((size, size), dtype=complex)
    alphas = np.asarray(sym.alphas, dtype=complex)
    G = 1.0 - 1.0 / np.outer(alphas, np.conj(alphas))
    V = alphas[:, None] ** (-(np.arange(size, dtype=float)[None, :] + 2.0))
    M = V.T @ (cross * G ** level) @ np.conj(V)
    return 0.5 * (M + M.conj().T)


def agler_taylor_matrix(taylor: kernels.TaylorTable,
                        level: int, size: int) -> np.ndarray:
    """The same truncation from raw Taylor rows:

        M[m, n] = sum_{j=0}^{l} (-1)^j binom(l, j) B_{m+1+j} . B_{n+1+j}*.

    Needs rows up to index size + level.
    """
    if taylor.n_rows < size + level:
        raise InsufficientRowsError(
            f"need {size + level} rows for size {size} at level {level}, "
            f"table has {taylor.n_rows}")
    S = taylor.rows @ taylor.rows.conj().T
    M = np.zeros((size, size), dtype=complex)
    for j in range(level + 1):
        M += (-1.0) ** j * math.comb(level, j) * S[j: j + size, j: j + size]
    return 0.5 * (M + M.conj().T)


def _level_stats(matrix_at) -> tuple:
    stats = []
    for level, M in matrix_at:
        evals = np.linalg.eigvalsh(M) if M.size else np.zeros(1)
        stats.append(LevelStat(level, float(evals.min()),
                               float(np.abs(evals).max())))
    return tuple(stats)


def agler_pole_test(sym: RationalSymbol, cross: np.ndarray,
                    cfg: CertificateConfig) -> tuple:
    """LevelStat per level 1..levels from the pole engine."""
    return _level_stats(
        (l, agler_pole_matrix(sym, cross, l, cfg.trunc))
        for l in range(1, cfg.levels + 1))


def agler_taylor_test(taylor: kernels.TaylorTable,
                      cfg: CertificateConfig) -> tuple:
    """LevelStat per level 1..levels from the Taylor engine."""
    if taylor.n_rows < cfg.trunc + cfg.levels:
        raise InsufficientRowsError(
            f"need {cfg.trunc + cfg.levels} rows, table has {taylor.n_rows}")
    return _level_stats(
        (l, agler_taylor_matrix(taylor, l, cfg.trunc))
        for l in range(1, cfg.levels + 1))


@dataclass(frozen=True)
class NecessaryMeasure:
    """Aggregated necessary measure: one atom per coincidence class of the
    pole products alpha_r conj(alpha_t), located at 1/(alpha_r conj(alpha_t))."""

    locations: tuple
    weights: tuple
    worst_violation: float
    worst_location: complex | None


def _segment_distance(x: complex) -> float:
    re = min(max(x.real, 0.0), 1.0)
    return math.hypot(x.real - re, x.imag)


def necessary_measure_test(sym: RationalSymbol, cross: np.ndarray,
                           cfg: CertificateConfig):
    """Aggregate the necessary measure and check it is positive on [0, 1].

    Weights of classes located off the segment must vanish; weights on the
    segment must be real and nonnegative, all relative to tol_psd times
    the total variation. Failure refutes subnormality outright.
    """
    k = sym.k
    if k == 0:
        return NecessaryMeasure((), (), 0.0, None), True
    alphas = np.asarray(sym.alphas, dtype=complex)
    products = np.outer(alphas, np.conj(alphas))
    raw = cross / products ** 2

    # union-find over coincident products
    idx = [(r, t) for r in range(k) for t in range(k)]
    parent = list(range(len(idx)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    flat = products.ravel()
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if abs(flat[i] - flat[j]) <= 1e-9:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(len(idx)):
        groups.setdefault(find(i), []).append(i)

    locations, weights = [], []
    for members in groups.values():
        prod = np.mean(flat[members])
        locations.append(complex(1.0 / prod))
        weights.append(complex(raw.ravel()[members].sum()))
    # deterministic ordering by descending weight then location
    perm = sorted(range(len(weights)),
                  key=lambda i: (-abs(weights[i]), locations[i].real,
                                 locations[i].imag))
    locations = [locations[i] for i in perm]
    weights = [weights[i] for i in perm]

    scale = max(sum(abs(w) for w in weights), 1e-300)
    worst, worst_loc = 0.0, None
    for loc, w in zip(locations, weights):
        if _segment_distance(loc) > 1e-8:
            bad = abs(w)
        else:
            bad = max(-w.real, abs(w.imag), 0.0)
        if bad > worst:
            worst, worst_loc = bad, loc
    passed = worst <= cfg.tol_psd * scale
    return NecessaryMeasure(tuple(locations), tuple(weights),
                            float(worst / scale), worst_loc), passed


def gamma_moments(sym: RationalSymbol, cross: np.ndarray, count: int) -> np.ndarray:
    """Diagonal moment sequence gamma_m = sum_{r,t} C[r,t] (alpha_r conj(alpha_t))^-(m+2)."""
    if sym.k == 0:
        return np.zeros(count)
    alphas = np.asarray(sym.alphas, dtype=complex)
    products = np.outer(alphas, np.conj(alphas))
    out = np.empty(count)
    for m in range(count):
        val = complex((cross * products ** (-(m + 2.0))).sum())
        out[m] = val.real
    return out


def completely_monotone_test(seq, depth: int, levels: int = 12,
                             tol: float = 1e-10):
    """Check (-1)^l (forward difference)^l of seq stays >= -tol for
    l <= levels and positions 0..depth. Returns (passed, worst value)."""
    arr = np.asarray(seq, dtype=float)
    if len(arr) < depth + levels + 1:
        raise InsufficientLengthError(
            f"need {depth + levels + 1} terms, got {len(arr)}")
    worst = math.inf
    for l in range(levels + 1):
        vals = np.diff(arr, n=l) if l else arr
        signed = ((-1.0) ** l) * vals[: depth + 1]
        worst = min(worst, float(signed.min()))
    scale = max(float(np.abs(arr).max()), 1.0)
    return worst >= -tol * scale, worst


@dataclass(frozen=True, eq=False)
class MomentCheck:
    """Moments of the rank-one representing measure against the kernel table."""

    kernel: np.ndarray
    moments: np.ndarray
    max_residual: float
    mass: float


def rank1_representing_measure(model: kernels.Rank1Model, size: int,
                               quad_points: int = 4096) -> MomentCheck:
    """Integrate z^m conj(z)^n against the explicit representing measure.

    The measure is the absolutely continuous part with density
    1 - nu (2 Re 1/(1 - e^{-i theta} beta) - 1) against d theta / 2 pi plus
    the atom nu delta_beta. Its moment int z^m conj(z)^n dmu must reproduce
    the kernel table entry K[m][n]; the max residual over m, n <= size is
    reported. (Expanding the density in powers of e^{i theta} shows the
    m >= n entry carries beta^{m-n}, matching the table orientation.)
    """
    theta = 2.0 * np.pi * np.arange(quad_points) / quad_points
    unit = np.exp(1j * theta)
    density = 1.0 - model.nu * (2.0 * (1.0 / (1.0 - np.conj(unit) * model.beta)).real - 1.0)
    E = unit[None, :] ** np.arange(size + 1)[:, None]     # E[m, q] = e^{i m theta_q}
    weighted = E * density[None, :] / quad_points
    moments = weighted @ np.conj(E).T                     # [m, n] = mean of e^{i(m-n)theta} density
    bpow = np.power(model.beta, np.arange(size + 1))
    moments += model.nu * np.outer(bpow, np.conj(bpow))

    table = kernels.kernel_coeffs(
        kernels.rank1_taylor(model.gamma, model.beta, max(size, 1)), size)
    resid = float(np.abs(moments - table.K).max())
    return MomentCheck(table.K, moments, resid, float(moments[0, 0].real))


def exactness_applies(sym: RationalSymbol) -> bool:
    """True when every off-diagonal pole product alpha_r conj(alpha_t) is a
    distinct complex number off the ray [1, oo); orthogonality is then
    necessary as well as sufficient."""
    if sym.k < 2:
        return False
    alphas = np.asarray(sym.alphas, dtype=complex)
    prods = [alphas[r] * np.conj(alphas[t])
             for r in range(sym.k) for t in range(sym.k) if r != t]
    for i, p in enumerate(prods):
        if _segment_distance(1.0 / p) <= 1e-8:
            return False
        for q in prods[i + 1:]:
            if abs(p - q) <= 1e-9:
                return False
    return True


@dataclass(frozen=True, eq=False)
class CertificateReport:
    verdict: str
    certified_by: str | None
    refuted_by: str | None
    refuted_level: int | None
    refuted_min_eig: float | None
    orth_residual: float
    orth_passed: bool
    agler_pole: tuple
    agler_taylor: tuple
    agler_passed: bool
    necessary: NecessaryMeasure
    necessary_passed: bool
    monotone_passed: bool
    monotone_worst: float
    exactness: bool
    config: CertificateConfig

    @property
    def exit_code(self) -> int:
        return {VERDICT_CERTIFIED: 0, VERDICT_REFUTED: 1,
                VERDICT_INCONCLUSIVE: 2}[self.verdict]


def run_certificates(sym: RationalSymbol,
                     cfg: CertificateConfig = CertificateConfig()) -> CertificateReport:
    """Run the whole battery and combine the outcomes into one verdict.

    Orthogonality certifies; a failed necessary measure refutes at level 0;
    when the exactness condition holds, a failed orthogonality test also
    refutes at level 0; otherwise a truncation eigenvalue below
    -10 tol_psd ||M_l|| refutes at its level, everything above
    -tol_psd ||M_l|| is a truncation-level pass, and anything else stays
    inconclusive (the 10x hysteresis band).
    """
    cross = cross_gram(sym)
    orth_residual, orth_passed = orthogonality_test(sym, cfg)
    necessary, necessary_passed = necessary_measure_test(sym, cross, cfg)
    taylor = kernels.symbol_taylor(sym, cfg.trunc + cfg.levels)
    pole_stats = agler_pole_test(sym, cross, cfg)
    taylor_stats = agler_taylor_test(taylor, cfg)
    moments = gamma_moments(sym, cross, cfg.trunc + cfg.levels + 1)
    monotone_passed, monotone_worst = completely_monotone_test(
        moments, cfg.trunc, cfg.levels, cfg.tol_psd)
    exact = exactness_applies(sym)

    agler_passed = all(
        st.min_eig >= -cfg.tol_psd * max(st.norm, 1e-300)
        for st in pole_stats + taylor_stats)

    certified_by = refuted_by = None
    refuted_level = refuted_min_eig = None
    if orth_passed:
        verdict, certified_by = VERDICT_CERTIFIED, "orthogonality"
    elif not necessary_passed:
        verdict, refuted_by, refuted_level = VERDICT_REFUTED, "necessary_measure", 0
    elif exact:
        verdict, refuted_by, refuted_level = VERDICT_REFUTED, "orthogonality_exactness", 0
    else:
        verdict = VERDICT_INCONCLUSIVE
        for pole_st, taylor_st in zip(pole_stats, taylor_stats):
            for st in (pole_st, taylor_st):
                if st.min_eig < -10.0 * cfg.tol_psd * max(st.norm, 1e-300):
                    verdict, refuted_by = VERDICT_REFUTED, "agler_truncation"
                    refuted_level, refuted_min_eig = st.level, st.min_eig
                    break
            if refuted_by is not None:
                break

    return CertificateReport(
        verdict, certified_by, refuted_by, refuted_level, refuted_min_eig,
        orth_residual, orth_passed, pole_stats, taylor_stats, agler_passed,
        necessary, necessary_passed, monotone_passed, monotone_worst,
        exact, cfg)
