"""Operational measurement side: peak extraction and visibilities from
sampled patterns, plus CSV re-import for offline analysis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from duality_lab.coherence import CoherenceMatrix
from duality_lab.engine import InterferencePattern, ScreenGeometry, SlitArray

MIN_SAMPLES_PER_FRINGE = 64


class EmptyWindow(ValueError):
    """No grid samples inside the requested search window."""


class UndersampledGrid(ValueError):
    """Grid too coarse for reliable peak extraction."""


class ZeroIncoherentIntensity(ValueError):
    """Incoherent reference vanishes at the primary maximum."""


@dataclass(frozen=True)
class PeakEstimate:
    """Refined primary-maximum location and height.

    x_star lies within one grid step of the argmax sample; i_max is never
    below any sample in the search window (the parabolic vertex through the
    top three samples can only sit above the middle one).
    """

    x_star: float
    i_max: float
    grid_index: int


def fringe_width(geometry: ScreenGeometry, slits: SlitArray) -> float:
    """Primary-maximum spacing w = wavelength * distance / slit spacing."""
    return geometry.wavelength * geometry.distance / slits.spacing


def find_primary_max(
    pat: InterferencePattern, window: tuple[float, float] | None = None
) -> PeakEstimate:
    """Locate the primary maximum inside `window` (default: the central
    fringe, |x| <= w/2) and refine it with a 3-point parabolic fit.

    Requires at least 64 samples per fringe width; raises UndersampledGrid
    otherwise, and EmptyWindow when no samples fall inside the window.
    """
    x = pat.grid
    if x.size < 2:
        raise UndersampledGrid("pattern has fewer than 2 samples")
    step = x[1] - x[0]
    w = pat.fringe_width
    if w / step < MIN_SAMPLES_PER_FRINGE:
        raise UndersampledGrid(
            f"{w / step:.1f} samples per fringe, need >= {MIN_SAMPLES_PER_FRINGE}"
        )
    lo, hi = window if window is not None else (-w / 2.0, w / 2.0)
    inside = np.flatnonzero((x >= lo) & (x <= hi))
    if inside.size == 0:
        raise EmptyWindow(f"no samples in window ({lo}, {hi})")
    idx = int(inside[np.argmax(pat.total[inside])])
    x_star = float(x[idx])
    i_max = float(pat.total[idx])
    if 0 < idx < x.size - 1:
        y0, y1, y2 = pat.total[idx - 1], pat.total[idx], pat.total[idx + 1]
        curv = y0 - 2.0 * y1 + y2
        if curv < 0.0:
            delta = 0.5 * (y0 - y2) / curv
            x_star = float(x[idx] + delta * step)
            i_max = float(y1 - 0.25 * (y0 - y2) * delta)
    return PeakEstimate(x_star=x_star, i_max=i_max, grid_index=idx)


def extract_vc(
    pat: InterferencePattern, window: tuple[float, float] | None = None
) -> float:
    """Operational corrected visibility from a sampled pattern:
    (I_max - I_inc) / ((n - 1) * I_inc), with I_inc the incoherent reference
    interpolated at the refined primary-maximum position.

    Matches the analytic value when the pair phases are aligned (all
    interference cosines peak together); with misaligned phases it falls
    below the analytic value, see aligned_phases().
    """
    peak = find_primary_max(pat, window)
    i_inc = float(np.interp(peak.x_star, pat.grid, pat.incoherent))
    if i_inc <= 0.0:
        raise ZeroIncoherentIntensity("incoherent reference vanishes at the peak")
    return (peak.i_max - i_inc) / i_inc / (pat.n - 1)


def extract_michelson(pat: InterferencePattern) -> float:
    """Michelson contrast from a sampled pattern: refined central maximum
    against the minimum sample between it and the adjacent primary maximum.

    Exact for two-slit uniform-envelope patterns; under a gaussian envelope
    the extrema are position-biased and the result is approximate.
    """
    w = pat.fringe_width
    first = find_primary_max(pat)
    second = find_primary_max(pat, window=(first.x_star + 0.5 * w, first.x_star + 1.5 * w))
    lo, hi = sorted((first.grid_index, second.grid_index))
    between = pat.total[lo + 1 : hi]
    if between.size == 0:
        raise UndersampledGrid("no samples between adjacent primary maxima")
    i_min = float(between.min())
    return (first.i_max - i_min) / (first.i_max + i_min)


def aligned_phases(slits: SlitArray, coh: CoherenceMatrix, tol: float = 1e-9) -> bool:
    """True when every weighted pair phase alpha_i - alpha_j + arg(g_ij) is a
    multiple of 2*pi, i.e. all cosines can peak simultaneously at x = 0 and
    the operational visibility reproduces the analytic one."""
    alpha = slits.phases
    phi = np.angle(coh.entries) + alpha[:, None] - alpha[None, :]
    wrapped = np.angle(np.exp(1j * phi))
    relevant = (np.sqrt(np.outer(slits.intensities, slits.intensities)) > 0.0) & (
        coh.magnitudes() > 0.0
    )
    return bool(np.all(np.abs(wrapped[relevant]) <= tol))


def load_pattern_csv(
    path,
    n: int,
    wavelength: float,
    distance: float,
    spacing: float,
    envelope: str = "uniform",
    scale_w: bool = False,
) -> InterferencePattern:
    """Re-import an `x,total,incoherent` CSV written by the engine.

    The CSV carries no geometry metadata, so the caller supplies it; when the
    file was written with positions in fringe-width units, pass scale_w=True
    to recover metres.
    """
    data = np.loadtxt(path, delimiter=",", skiprows=1, dtype=float)
    if data.ndim != 2 or data.shape[1] != 3:
        raise ValueError(f"expected 3 columns x,total,incoherent in {path}")
    x = data[:, 0]
    if scale_w:
        x = x * (wavelength * distance / spacing)
    return InterferencePattern(
        grid=x,
        total=data[:, 1],
        incoherent=data[:, 2],
        n=n,
        wavelength=wavelength,
        distance=distance,
        spacing=spacing,
        envelope=envelope,
    )
