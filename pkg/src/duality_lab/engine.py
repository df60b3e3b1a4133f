"""Far-field multislit intensity patterns for partially coherent beams.

The screen intensity is

    I(x) = sum_i I_i(x)
         + sum_{i != j} sqrt(I_i(x) I_j(x)) |g_ij| cos(omega*tau_ij(x) + phi_ij)

with per-slit on-screen intensities I_i(x) = I_i * envelope(x), pair delays
tau_ij fixed by the slit geometry, and phi_ij = alpha_i - alpha_j + arg(g_ij)
combining the intrinsic slit phases with the coherence phases.  Internally
the double sum is evaluated as a Hermitian quadratic form, which keeps it
real and nonnegative by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from duality_lab.coherence import CoherenceMatrix

SPEED_OF_LIGHT = 299_792_458.0  # m/s

PHASE_MODELS = ("small_angle", "exact")
ENVELOPES = ("uniform", "gaussian")


@dataclass(frozen=True)
class SlitArray:
    """Equally spaced slits with per-slit on-screen intensities and phases.

    intensities[i] is the intensity at the screen if only slit i were open
    (propagation factors are absorbed into it); phases are the intrinsic
    per-slit phases alpha_i in radians; spacing is the centre-to-centre slit
    distance in metres.
    """

    intensities: np.ndarray
    spacing: float
    phases: np.ndarray = field(default=None)

    def __post_init__(self):
        inten = np.asarray(self.intensities, dtype=float)
        if inten.ndim != 1 or inten.size < 2:
            raise ValueError(f"need at least 2 slits, got {inten.size}")
        if np.any(inten < 0.0):
            raise ValueError("slit intensities must be nonnegative")
        if inten.sum() <= 0.0:
            raise ValueError("total slit intensity must be positive")
        if not self.spacing > 0.0:
            raise ValueError(f"slit spacing must be positive, got {self.spacing}")
        ph = self.phases
        ph = np.zeros(inten.size) if ph is None else np.asarray(ph, dtype=float)
        if ph.shape != inten.shape:
            raise ValueError("phases must match the intensity vector length")
        object.__setattr__(self, "intensities", inten)
        object.__setattr__(self, "phases", ph)
        inten.setflags(write=False)
        ph.setflags(write=False)

    @property
    def n(self) -> int:
        return self.intensities.size


@dataclass(frozen=True)
class ScreenGeometry:
    """Observation screen: wavelength, slit-to-screen distance, sampled window.

    envelope is the common per-slit diffraction profile multiplying every
    I_i: "uniform" (exact analytic checks) or "gaussian" with scale sigma in
    metres.  phase_model selects the pair-delay computation: "small_angle"
    (linear Fraunhofer phase, the default) or "exact" path lengths.
    """

    wavelength: float
    distance: float
    x_min: float
    x_max: float
    samples: int = 4096
    envelope: str = "uniform"
    sigma: float | None = None
    phase_model: str = "small_angle"

    def __post_init__(self):
        if not self.wavelength > 0.0:
            raise ValueError("wavelength must be positive")
        if not self.distance > 0.0:
            raise ValueError("slit-to-screen distance must be positive")
        if not self.x_min < self.x_max:
            raise ValueError("screen window must satisfy x_min < x_max")
        if self.samples < 2:
            raise ValueError("need at least 2 grid samples")
        if self.envelope not in ENVELOPES:
            raise ValueError(f"unknown envelope {self.envelope!r}")
        if self.envelope == "gaussian" and not (self.sigma or 0.0) > 0.0:
            raise ValueError("gaussian envelope needs sigma > 0")
        if self.phase_model not in PHASE_MODELS:
            raise ValueError(f"unknown phase model {self.phase_model!r}")

    @property
    def omega(self) -> float:
        """Angular frequency 2*pi*c/wavelength."""
        return 2.0 * np.pi * SPEED_OF_LIGHT / self.wavelength

    def grid(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.samples)

    def envelope_values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.envelope == "uniform":
            return np.ones_like(x)
        return np.exp(-(x * x) / (2.0 * self.sigma * self.sigma))

    @classmethod
    def over_fringes(
        cls,
        slits: SlitArray,
        wavelength: float,
        distance: float,
        fringes: float = 4.0,
        samples: int = 4096,
        envelope: str = "uniform",
        sigma: float | None = None,
        phase_model: str = "small_angle",
    ) -> ScreenGeometry:
        """Window spanning +-fringes fringe widths around the axis."""
        w = wavelength * distance / slits.spacing
        return cls(
            wavelength=wavelength,
            distance=distance,
            x_min=-fringes * w,
            x_max=fringes * w,
            samples=samples,
            envelope=envelope,
            sigma=sigma,
            phase_model=phase_model,
        )


@dataclass(frozen=True)
class InterferencePattern:
    """Sampled total intensity with its incoherent reference pattern."""

    grid: np.ndarray
    total: np.ndarray
    incoherent: np.ndarray
    n: int
    wavelength: float
    distance: float
    spacing: float
    envelope: str

    def __post_init__(self):
        for name in ("grid", "total", "incoherent"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            arr.setflags(write=False)

    @property
    def fringe_width(self) -> float:
        """Spacing of adjacent primary maxima, wavelength*distance/spacing."""
        return self.wavelength * self.distance / self.spacing


def slit_positions(n: int, spacing: float) -> np.ndarray:
    """Transverse slit positions centred on the optical axis.

    Positions decrease with slit index so that the exact path-length delays
    reduce to the small-angle convention tau_ij ~ (i-j)*spacing*x/(L*c).
    """
    return ((n - 1) / 2.0 - np.arange(n)) * spacing


def delay(geometry: ScreenGeometry, slits: SlitArray, i: int, j: int, x: float) -> float:
    """Relative propagation delay tau_ij = t_i - t_j at screen position x, seconds."""
    n = slits.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"slit indices ({i}, {j}) out of range for n={n}")
    if geometry.phase_model == "small_angle":
        return (i - j) * slits.spacing * x / (geometry.distance * SPEED_OF_LIGHT)
    pos = slit_positions(n, slits.spacing)
    path_i = float(np.hypot(geometry.distance, x - pos[i]))
    path_j = float(np.hypot(geometry.distance, x - pos[j]))
    return (path_i - path_j) / SPEED_OF_LIGHT


def slit_phase_factors(geometry: ScreenGeometry, slits: SlitArray, x) -> np.ndarray:
    """Per-slit propagation phase factors u_i(x) = exp(i*omega*t_i(x)).

    Shaped (len(x), n); only phase differences matter, and they satisfy
    theta_i - theta_j = omega * tau_ij for the geometry's phase model.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = slits.n
    if geometry.phase_model == "small_angle":
        scale = 2.0 * np.pi * slits.spacing / (geometry.wavelength * geometry.distance)
        theta = scale * np.outer(x, np.arange(n))
    else:
        pos = slit_positions(n, slits.spacing)
        paths = np.hypot(geometry.distance, x[:, None] - pos[None, :])
        theta = (2.0 * np.pi / geometry.wavelength) * paths
    return np.exp(1j * theta)


def _mutual_intensity(slits: SlitArray, coh: CoherenceMatrix) -> np.ndarray:
    # Hermitian PSD matrix A_ij = sqrt(I_i I_j) g_ij exp(i(alpha_i - alpha_j));
    # the quadratic form u A u* is the coherent part of the intensity.
    if coh.n != slits.n:
        raise ValueError(
            f"coherence matrix size {coh.n} does not match slit count {slits.n}"
        )
    g = 0.5 * (coh.entries + coh.entries.conj().T)
    amps = np.sqrt(slits.intensities)
    rot = np.exp(1j * slits.phases)
    return np.outer(amps, amps) * g * np.outer(rot, rot.conj())


def _intensity_samples(
    slits: SlitArray, coh: CoherenceMatrix, geometry: ScreenGeometry, x
) -> tuple[np.ndarray, np.ndarray]:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    a = _mutual_intensity(slits, coh)
    u = slit_phase_factors(geometry, slits, x)
    q = np.einsum("xi,ij,xj->x", u, a, u.conj())
    scale = slits.n * float(slits.intensities.sum())
    assert float(np.max(np.abs(q.imag))) < 1e-12 * scale, "quadratic form not real"
    env = geometry.envelope_values(x)
    total = env * np.maximum(q.real, 0.0)
    incoherent = env * slits.intensities.sum()
    return total, incoherent


def pattern(
    slits: SlitArray, coh: CoherenceMatrix, geometry: ScreenGeometry
) -> InterferencePattern:
    """Sample the analytic intensity pattern over the geometry's grid.

    Returns the total intensity together with the incoherent reference
    sum_i I_i(x), the pattern that remains when all cross coherences vanish.
    With the identity coherence matrix the two coincide; with full coherence,
    equal intensities and zero phases the total reproduces the classic n-slit
    grating profile.
    """
    x = geometry.grid()
    total, incoherent = _intensity_samples(slits, coh, geometry, x)
    return InterferencePattern(
        grid=x,
        total=total,
        incoherent=incoherent,
        n=slits.n,
        wavelength=geometry.wavelength,
        distance=geometry.distance,
        spacing=slits.spacing,
        envelope=geometry.envelope,
    )


def intensity_at(
    slits: SlitArray, coh: CoherenceMatrix, geometry: ScreenGeometry, x: float
) -> float:
    """Total intensity at a single screen position."""
    total, _ = _intensity_samples(slits, coh, geometry, x)
    return float(total[0])


def write_pattern_csv(pat: InterferencePattern, path, scale_w: bool = False) -> None:
    """Write `x,total,incoherent` rows; x in units of the fringe width if scale_w.

    Floats use shortest round-trip repr with a `.` decimal point, so files
    are byte-stable and locale independent.
    """
    xs = pat.grid / pat.fringe_width if scale_w else pat.grid
    with open(path, "w", newline="") as f:
        f.write("x,total,incoherent\n")
        for x, t, inc in zip(xs, pat.total, pat.incoherent):
            f.write(f"{float(x)!r},{float(t)!r},{float(inc)!r}\n")
