"""Closed-form visibility, path distinguishability, and the duality relations.

All pair sums run over ordered pairs (i, j), i != j, normalized by 1/(n-1),
so every quantity lands in [0, 1].  Two relations are checked: the
Pythagorean form D^2 + V_C^2 <= 1 and the linear form D' + V_C <= 1, both
saturated exactly when every pair with nonzero intensity product is fully
coherent.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from duality_lab.coherence import CoherenceMatrix, degree_of_coherence

IDENTITY_TOL = 1e-12
INEQUALITY_TOL = 1e-12


class ZeroTotalIntensity(ValueError):
    """All slit intensities are zero."""


def _pair_weights(intensities) -> tuple[np.ndarray, float, int]:
    """Ordered-pair weight matrix sqrt(I_i I_j) (zero diagonal) and the
    normalizer (n-1) * sum(I), computed on intensities rescaled by their
    maximum.

    The rescaling is exact for the limit cases: equal intensities become
    exactly 1.0 each, so the weighted sums divide out exactly and the
    distinguishability limits land on 0 and 1 at double precision.
    """
    inten = np.asarray(intensities, dtype=float)
    if inten.ndim != 1 or inten.size < 2:
        raise ValueError(f"need at least 2 slit intensities, got shape {inten.shape}")
    if np.any(inten < 0.0):
        raise ValueError("slit intensities must be nonnegative")
    total = inten.sum()
    if total <= 0.0:
        raise ZeroTotalIntensity("sum of slit intensities is zero")
    n = inten.size
    r = inten / inten.max()
    pair = np.sqrt(np.outer(r, r))
    np.fill_diagonal(pair, 0.0)
    return pair, (n - 1) * r.sum(), n


def _check_match(n: int, coh: CoherenceMatrix) -> None:
    if coh.n != n:
        raise ValueError(f"coherence matrix size {coh.n} does not match {n} slits")


def visibility_analytic(intensities, coh: CoherenceMatrix) -> float:
    """Corrected visibility: intensity-weighted average of coherence moduli,
    (1/(n-1)) * sum_{i != j} sqrt(I_i I_j) |g_ij| / sum_k I_k.

    For n=2 this reduces to the traditional fringe visibility
    |g_12| * 2*sqrt(I_1 I_2)/(I_1 + I_2); for equal intensities it equals
    the n-point degree of coherence.
    """
    pair, norm, n = _pair_weights(intensities)
    _check_match(n, coh)
    return float((pair * coh.magnitudes()).sum() / norm)


def _weight_fraction(intensities) -> float:
    pair, norm, _ = _pair_weights(intensities)
    return float(pair.sum() / norm)


def distinguishability(intensities) -> float:
    """Path distinguishability D = sqrt(1 - s^2), where s is the normalized
    ordered-pair sum of sqrt(I_i I_j).

    1 when a single slit is open, 0 for equal intensities; reduces to
    |I_1 - I_2|/(I_1 + I_2) for two slits.
    """
    s = _weight_fraction(intensities)
    return float(np.sqrt(max(0.0, 1.0 - s * s)))


def distinguishability_prime(intensities) -> float:
    """Simpler path distinguishability D' = 1 - s; for two slits equals
    (sqrt(I_1) - sqrt(I_2))^2 / (I_1 + I_2).  Never exceeds D."""
    return 1.0 - _weight_fraction(intensities)


def michelson(i_max: float, i_min: float) -> float:
    """Michelson fringe contrast (I_max - I_min)/(I_max + I_min)."""
    if not (i_max >= i_min >= 0.0):
        raise ValueError(f"need I_max >= I_min >= 0, got ({i_max}, {i_min})")
    if i_max <= 0.0:
        raise ValueError("I_max must be positive")
    return (i_max - i_min) / (i_max + i_min)


def pythagorean_identity(intensities, coh: CoherenceMatrix) -> tuple[float, float, float]:
    """Evaluate D^2 + V_C^2 against its closed form 1 - s^2 + (weighted
    coherence sum)^2.  Returns (lhs, rhs, |lhs - rhs|); the residual is
    rounding-level because the relation is algebraic."""
    pair, norm, n = _pair_weights(intensities)
    _check_match(n, coh)
    s = float(pair.sum() / norm)
    vc = float((pair * coh.magnitudes()).sum() / norm)
    d = np.sqrt(max(0.0, 1.0 - s * s))
    lhs = d * d + vc * vc
    rhs = (1.0 - s * s) + vc * vc
    return float(lhs), float(rhs), float(abs(lhs - rhs))


def linear_identity(intensities, coh: CoherenceMatrix) -> tuple[float, float, float]:
    """Evaluate D' + V_C against 1 - (1/(n-1)) sum_{i != j}
    sqrt(I_i I_j)(1 - |g_ij|) / sum_k I_k.  Returns (lhs, rhs, residual)."""
    pair, norm, n = _pair_weights(intensities)
    _check_match(n, coh)
    s = float(pair.sum() / norm)
    vc = float((pair * coh.magnitudes()).sum() / norm)
    lhs = (1.0 - s) + vc
    rhs = 1.0 - float((pair * (1.0 - coh.magnitudes())).sum() / norm)
    return float(lhs), float(rhs), float(abs(lhs - rhs))


@dataclass(frozen=True)
class BeamDensityMatrix:
    """Density matrix of the beam in the path basis: rho_ij =
    sqrt(I_i I_j) g_ij / sum_k I_k.  Unit trace, Hermitian, PSD."""

    n: int
    rho: np.ndarray

    def __post_init__(self):
        self.rho.setflags(write=False)


def density_from_beams(intensities, coh: CoherenceMatrix) -> BeamDensityMatrix:
    """Build the path-basis density matrix from slit intensities and coherence."""
    inten = np.asarray(intensities, dtype=float)
    if np.any(inten < 0.0):
        raise ValueError("slit intensities must be nonnegative")
    total = inten.sum()
    if total <= 0.0:
        raise ZeroTotalIntensity("sum of slit intensities is zero")
    _check_match(inten.size, coh)
    g = 0.5 * (coh.entries + coh.entries.conj().T)
    rho = np.sqrt(np.outer(inten, inten)) * g / total
    # diagonal coherences are 1 by definition, so rho_ii = I_i / total exactly
    np.fill_diagonal(rho, inten / total)
    return BeamDensityMatrix(n=inten.size, rho=rho)


def quantum_coherence(density: BeamDensityMatrix) -> float:
    """l1-style coherence of a density matrix: (1/(n-1)) sum_{i != j} |rho_ij|.

    For the beam-induced density matrix this equals the corrected visibility
    (identical arithmetic, different packaging)."""
    mag = np.abs(density.rho)
    np.fill_diagonal(mag, 0.0)
    return float(mag.sum() / (density.n - 1))


@dataclass(frozen=True)
class DualityReport:
    """All measures for one (intensities, coherence) instance, with the
    closed-form identity residuals and the inequality verdicts.  Field names
    match the JSON wire format exactly."""

    n: int
    v_c: float
    d: float
    d_prime: float
    gamma_n: float
    c: float
    pyth_lhs: float
    lin_lhs: float
    pyth_residual: float
    lin_residual: float
    pyth_holds: bool
    lin_holds: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"


def duality_report(intensities, coh: CoherenceMatrix) -> DualityReport:
    """Compute every measure and both duality checks for one instance."""
    vc = visibility_analytic(intensities, coh)
    d = distinguishability(intensities)
    d_prime = distinguishability_prime(intensities)
    gn = degree_of_coherence(coh)
    c = quantum_coherence(density_from_beams(intensities, coh))
    pyth_lhs, _, pyth_res = pythagorean_identity(intensities, coh)
    lin_lhs, _, lin_res = linear_identity(intensities, coh)
    return DualityReport(
        n=coh.n,
        v_c=vc,
        d=d,
        d_prime=d_prime,
        gamma_n=gn,
        c=c,
        pyth_lhs=pyth_lhs,
        lin_lhs=lin_lhs,
        pyth_residual=pyth_res,
        lin_residual=lin_res,
        pyth_holds=pyth_lhs <= 1.0 + INEQUALITY_TOL,
        lin_holds=lin_lhs <= 1.0 + INEQUALITY_TOL,
    )
