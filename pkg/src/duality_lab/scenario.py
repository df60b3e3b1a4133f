"""Scenario configs: versioned JSON in, validated domain objects out."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from duality_lab import coherence
from duality_lab.engine import ScreenGeometry, SlitArray

SCHEMA_VERSION = 1


class ScenarioError(ValueError):
    """Config rejection, anchored by source line (parse) or key path (schema)."""


def _get(obj, key, path, expect=None):
    if not isinstance(obj, dict):
        raise ScenarioError(f"{path}: expected an object")
    if key not in obj:
        raise ScenarioError(f"{path}.{key}: missing required key")
    value = obj[key]
    if expect is not None and not isinstance(value, expect):
        raise ScenarioError(f"{path}.{key}: wrong type {type(value).__name__}")
    return value


def _complex_array(obj, path, shape=None) -> np.ndarray:
    re = np.asarray(_get(obj, "re", path, list), dtype=float)
    im = np.asarray(_get(obj, "im", path, list), dtype=float)
    if re.shape != im.shape:
        raise ScenarioError(f"{path}: re/im shapes differ, {re.shape} vs {im.shape}")
    if shape is not None and re.shape != shape:
        raise ScenarioError(f"{path}: expected shape {shape}, got {re.shape}")
    return re + 1j * im


@dataclass(frozen=True)
class Scenario:
    """One resolved run: slits, coherence, screen, oracle and output options."""

    slits: SlitArray
    coherence: coherence.CoherenceMatrix
    geometry: ScreenGeometry
    oracle_enabled: bool
    oracle_realizations: int
    oracle_seed: int
    scale_w: bool
    pattern_csv: str
    report_json: str
    convergence_json: str


def _resolve_coherence(spec, n: int, seed_override: int | None):
    routes = [k for k in ("matrix", "modes", "random") if k in spec]
    if len(routes) != 1:
        raise ScenarioError(
            "coherence: exactly one of matrix / modes / random is required"
        )
    route = routes[0]
    try:
        if route == "matrix":
            m = _complex_array(spec["matrix"], "coherence.matrix", shape=(n, n))
            return coherence.validate(m)
        if route == "modes":
            block = spec["modes"]
            vectors = _complex_array(block, "coherence.modes")
            pols = None
            if "polarizations" in block:
                pvec = _complex_array(
                    block["polarizations"], "coherence.modes.polarizations", shape=(n, 2)
                )
                pols = coherence.PolarizationSet(pvec)
            decomp = coherence.ModeDecomposition(vectors)
            if decomp.n != n:
                raise ScenarioError(
                    f"coherence.modes: {decomp.n} mode rows for {n} slits"
                )
            return coherence.from_modes(decomp, pols)
        block = spec["random"]
        rank = _get(block, "rank", "coherence.random", int)
        seed = _get(block, "seed", "coherence.random", int)
        if seed_override is not None:
            seed = seed_override
        return coherence.random_coherence(n, rank, seed)
    except coherence.CoherenceMatrixError as exc:
        raise ScenarioError(f"coherence.{route}: {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(f"coherence.{route}: {exc}") from exc


def load_scenario(path, seed_override: int | None = None) -> Scenario:
    """Load and validate a scenario config.

    JSON parse errors carry the source line and column; schema errors carry
    the dotted key path.  seed_override replaces every seed in the config
    (random coherence and oracle).
    """
    with open(path, "r") as f:
        text = f.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ScenarioError("top level: expected an object")
    if obj.get("schema") != SCHEMA_VERSION:
        raise ScenarioError(f"schema: expected {SCHEMA_VERSION}, got {obj.get('schema')!r}")

    slits_spec = _get(obj, "slits", "top level", dict)
    n = _get(slits_spec, "n", "slits", int)
    if n < 2:
        raise ScenarioError(f"slits.n: need at least 2 slits, got {n}")
    d = _get(slits_spec, "d", "slits", (int, float))
    intensities = _get(slits_spec, "intensities", "slits", list)
    if len(intensities) != n:
        raise ScenarioError(f"slits.intensities: expected {n} entries, got {len(intensities)}")
    phases = slits_spec.get("phases")
    if phases is not None and len(phases) != n:
        raise ScenarioError(f"slits.phases: expected {n} entries, got {len(phases)}")
    try:
        slits = SlitArray(intensities=intensities, spacing=float(d), phases=phases)
    except ValueError as exc:
        raise ScenarioError(f"slits: {exc}") from exc

    coh = _resolve_coherence(_get(obj, "coherence", "top level", dict), n, seed_override)

    geom_spec = _get(obj, "geometry", "top level", dict)
    envelope = geom_spec.get("envelope", "uniform")
    try:
        geometry = ScreenGeometry(
            wavelength=float(_get(geom_spec, "wavelength", "geometry", (int, float))),
            distance=float(_get(geom_spec, "distance", "geometry", (int, float))),
            x_min=float(_get(geom_spec, "x_min", "geometry", (int, float))),
            x_max=float(_get(geom_spec, "x_max", "geometry", (int, float))),
            samples=_get(geom_spec, "samples", "geometry", int),
            envelope=envelope,
            sigma=float(geom_spec["sigma"]) if "sigma" in geom_spec else None,
            phase_model=geom_spec.get("phase_model", "small_angle"),
        )
    except ValueError as exc:
        raise ScenarioError(f"geometry: {exc}") from exc

    oracle_spec = obj.get("oracle", {})
    enabled = bool(oracle_spec.get("enabled", False))
    realizations = int(oracle_spec.get("realizations", 0))
    oracle_seed = int(oracle_spec.get("seed", 0))
    if seed_override is not None:
        oracle_seed = seed_override
    if enabled and realizations < 100:
        raise ScenarioError("oracle.realizations: need at least 100 when enabled")

    outputs = obj.get("outputs", {})
    return Scenario(
        slits=slits,
        coherence=coh,
        geometry=geometry,
        oracle_enabled=enabled,
        oracle_realizations=realizations,
        oracle_seed=oracle_seed,
        scale_w=bool(outputs.get("scale_w", False)),
        pattern_csv=outputs.get("pattern_csv", "pattern.csv"),
        report_json=outputs.get("report_json", "report.json"),
        convergence_json=outputs.get("convergence_json", "convergence.json"),
    )
