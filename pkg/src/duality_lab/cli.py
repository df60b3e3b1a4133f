"""Batch front end: scenario runs, ensemble sweeps and offline analysis.

Exit codes: 0 success, 1 input error, 2 a duality inequality was violated
beyond tolerance (the relations are theorems for valid inputs, so a
violation signals an implementation fault, not bad user data).
"""

from __future__ import annotations

import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click
import numpy as np

from duality_lab import analysis, engine, measures, oracle
from duality_lab.coherence import (
    CoherenceMatrix,
    CoherenceMatrixError,
    degree_of_coherence,
    random_coherence,
)
from duality_lab.scenario import Scenario, ScenarioError, load_scenario

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2


def _thread_cap() -> int:
    raw = os.environ.get("DUALITY_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _write_report(report: measures.DualityReport, path: Path) -> None:
    path.write_text(report.to_json())


def run_scenario(
    config, out_dir, scale_w: bool | None = None, seed: int | None = None
) -> int:
    """Execute a full scenario: pattern CSV + duality report JSON, plus the
    Monte-Carlo convergence JSON when the oracle is enabled.

    Returns the process exit status (0 / 1 / 2) instead of raising on bad
    input, so callers can surface it directly.
    """
    out = Path(out_dir)
    try:
        sc = load_scenario(config, seed_override=seed)
        out.mkdir(parents=True, exist_ok=True)
        pat = engine.pattern(sc.slits, sc.coherence, sc.geometry)
        use_scale = sc.scale_w if scale_w is None else scale_w
        engine.write_pattern_csv(pat, out / sc.pattern_csv, scale_w=use_scale)
        report = measures.duality_report(sc.slits.intensities, sc.coherence)
        _write_report(report, out / sc.report_json)
        if sc.oracle_enabled:
            conv = oracle.convergence_report(
                sc.slits, sc.coherence, sc.geometry, sc.oracle_realizations, sc.oracle_seed
            )
            (out / sc.convergence_json).write_text(json.dumps(conv, indent=2) + "\n")
    except (ScenarioError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT
    if not (report.pyth_holds and report.lin_holds):
        click.echo("error: duality inequality violated beyond tolerance", err=True)
        return EXIT_VIOLATION
    return EXIT_OK


def _sweep_instance(master_seed: int, n: int, seed: int, rank_policy) -> measures.DualityReport:
    rng = np.random.default_rng((master_seed, n, seed))
    # uniform on the intensity simplex, rescaled to exercise scale invariance
    intensities = rng.dirichlet(np.ones(n)) * rng.uniform(0.1, 10.0)
    if rank_policy == "full":
        rank = n
    elif rank_policy == "rank1":
        rank = 1
    else:
        rank = int(rank_policy)
    coh = random_coherence(n, rank, seed=int(rng.integers(0, 2**63)))
    return measures.duality_report(intensities, coh)


def run_sweep(config, out_dir, seed: int | None = None) -> int:
    """Run the random-instance sweep described by a sweep config and write
    one CSV row per instance plus a trailing summary row."""
    out = Path(out_dir)
    try:
        with open(config, "r") as f:
            text = f.read()
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{config}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
        if obj.get("schema") != 1:
            raise ScenarioError(f"schema: expected 1, got {obj.get('schema')!r}")
        spec = obj.get("sweep")
        if not isinstance(spec, dict):
            raise ScenarioError("sweep: missing sweep block")
        n_min = int(spec.get("n_min", 2))
        n_max = int(spec.get("n_max", 8))
        seeds = int(spec.get("seeds", 100))
        rank_policy = spec.get("rank_policy", "full")
        master = int(spec.get("seed", 0)) if seed is None else seed
        if n_min < 2 or n_max < n_min:
            raise ScenarioError(f"sweep: bad n range [{n_min}, {n_max}]")
        if seeds < 1:
            raise ScenarioError("sweep.seeds: need at least 1")
        if rank_policy not in ("full", "rank1"):
            try:
                if int(rank_policy) < 1:
                    raise ValueError
            except (TypeError, ValueError):
                raise ScenarioError(
                    f"sweep.rank_policy: expected full, rank1 or a positive integer, "
                    f"got {rank_policy!r}"
                ) from None

        cases = [(n, s) for n in range(n_min, n_max + 1) for s in range(seeds)]
        workers = _thread_cap()
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                reports = list(
                    pool.map(lambda c: _sweep_instance(master, c[0], c[1], rank_policy), cases)
                )
        else:
            reports = [_sweep_instance(master, n, s, rank_policy) for n, s in cases]

        out.mkdir(parents=True, exist_ok=True)
        max_pyth_lhs = max(r.pyth_lhs for r in reports)
        max_lin_lhs = max(r.lin_lhs for r in reports)
        max_pyth_res = max(r.pyth_residual for r in reports)
        max_lin_res = max(r.lin_residual for r in reports)
        with open(out / "sweep.csv", "w", newline="") as f:
            f.write("n,seed,v_c,d,d_prime,gamma_n,c,pyth_lhs,lin_lhs\n")
            for (n, s), r in zip(cases, reports):
                f.write(
                    f"{n},{s},{r.v_c!r},{r.d!r},{r.d_prime!r},{r.gamma_n!r},"
                    f"{r.c!r},{r.pyth_lhs!r},{r.lin_lhs!r}\n"
                )
            f.write(
                f"summary,instances={len(cases)},max_pyth_lhs={max_pyth_lhs!r},"
                f"max_lin_lhs={max_lin_lhs!r},max_pyth_residual={max_pyth_res!r},"
                f"max_lin_residual={max_lin_res!r},,,\n"
            )
    except (ScenarioError, CoherenceMatrixError, ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT
    if not all(r.pyth_holds and r.lin_holds for r in reports):
        click.echo("error: duality inequality violated beyond tolerance", err=True)
        return EXIT_VIOLATION
    return EXIT_OK


_config_opt = click.option(
    "--config", required=True, type=click.Path(exists=True, dir_okay=False),
    help="Scenario config (JSON, schema 1).",
)
_out_opt = click.option(
    "--out", default=".", type=click.Path(file_okay=False), help="Output directory."
)
_seed_opt = click.option(
    "--seed", default=None, type=click.IntRange(0, 2**64 - 1),
    help="Override every seed in the config.",
)


def _load_or_exit(config, seed) -> Scenario:
    try:
        return load_scenario(config, seed_override=seed)
    except ScenarioError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)


@click.group()
def main():
    """Multislit interference lab: patterns, duality measures, MC validation."""


@main.command("pattern")
@_config_opt
@_out_opt
@click.option("--scale-w", is_flag=True, help="Write x in fringe-width units.")
@_seed_opt
def pattern_cmd(config, out, scale_w, seed):
    """Compute the analytic pattern and write pattern CSV."""
    sc = _load_or_exit(config, seed)
    pat = engine.pattern(sc.slits, sc.coherence, sc.geometry)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    engine.write_pattern_csv(pat, out_dir / sc.pattern_csv, scale_w=scale_w or sc.scale_w)
    click.echo(f"wrote {out_dir / sc.pattern_csv}")


@main.command("measures")
@_config_opt
@_out_opt
@_seed_opt
def measures_cmd(config, out, seed):
    """Compute the duality report and write report JSON."""
    sc = _load_or_exit(config, seed)
    report = measures.duality_report(sc.slits.intensities, sc.coherence)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_report(report, out_dir / sc.report_json)
    click.echo(report.to_json(), nl=False)
    if not (report.pyth_holds and report.lin_holds):
        click.echo("error: duality inequality violated beyond tolerance", err=True)
        sys.exit(EXIT_VIOLATION)


@main.command("analyze")
@_config_opt
@click.option(
    "--csv", "csv_path", required=True, type=click.Path(exists=True, dir_okay=False),
    help="Pattern CSV to re-import.",
)
@_out_opt
@click.option("--scale-w", is_flag=True, help="CSV positions are in fringe-width units.")
@_seed_opt
def analyze_cmd(config, csv_path, out, scale_w, seed):
    """Extract operational visibilities from a pattern CSV.

    Reports both the operational and the analytic corrected visibility and
    flags disagreement when the pair phases are not aligned."""
    sc = _load_or_exit(config, seed)
    try:
        pat = analysis.load_pattern_csv(
            csv_path,
            n=sc.slits.n,
            wavelength=sc.geometry.wavelength,
            distance=sc.geometry.distance,
            spacing=sc.slits.spacing,
            envelope=sc.geometry.envelope,
            scale_w=scale_w or sc.scale_w,
        )
        peak = analysis.find_primary_max(pat)
        v_c_op = analysis.extract_vc(pat)
        michelson = analysis.extract_michelson(pat)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    v_c_an = measures.visibility_analytic(sc.slits.intensities, sc.coherence)
    aligned = analysis.aligned_phases(sc.slits, sc.coherence)
    result = {
        "x_star": peak.x_star,
        "i_max": peak.i_max,
        "v_c_operational": v_c_op,
        "v_c_analytic": v_c_an,
        "michelson": michelson,
        "phases_aligned": aligned,
        "operational_matches_analytic": abs(v_c_op - v_c_an) <= 1e-6,
    }
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "analysis.json").write_text(json.dumps(result, indent=2) + "\n")
    click.echo(json.dumps(result, indent=2))


@main.command("mc-validate")
@_config_opt
@_out_opt
@click.option("--scale-w", is_flag=True, help="Write x in fringe-width units.")
@_seed_opt
def mc_validate_cmd(config, out, scale_w, seed):
    """Run the Monte-Carlo oracle and write its pattern CSV plus the
    convergence report JSON."""
    sc = _load_or_exit(config, seed)
    if not sc.oracle_enabled:
        click.echo("error: oracle: not enabled in config", err=True)
        sys.exit(EXIT_INPUT)
    mc = oracle.mc_pattern(
        sc.slits, sc.coherence, sc.geometry, sc.oracle_realizations, sc.oracle_seed
    )
    conv = oracle.convergence_report(
        sc.slits, sc.coherence, sc.geometry, sc.oracle_realizations, sc.oracle_seed
    )
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    engine.write_pattern_csv(mc, out_dir / "mc_pattern.csv", scale_w=scale_w or sc.scale_w)
    (out_dir / sc.convergence_json).write_text(json.dumps(conv, indent=2) + "\n")
    click.echo(json.dumps(conv, indent=2))


@main.command("sweep")
@_config_opt
@_out_opt
@_seed_opt
def sweep_cmd(config, out, seed):
    """Random-ensemble sweep of the duality relations; writes sweep.csv."""
    sys.exit(run_sweep(config, out, seed=seed))


@main.command("gamma-n")
@_config_opt
def gamma_n_cmd(config):
    """Print the n-point degree of coherence of a matrix or scenario config."""
    try:
        with open(config, "r") as f:
            obj = json.load(f)
    except json.JSONDecodeError as exc:
        click.echo(f"error: {config}:{exc.lineno}:{exc.colno}: {exc.msg}", err=True)
        sys.exit(EXIT_INPUT)
    try:
        if isinstance(obj, dict) and "re" in obj and "im" in obj:
            coh = CoherenceMatrix.from_json(json.dumps(obj))
        else:
            coh = load_scenario(config).coherence
    except (ScenarioError, CoherenceMatrixError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    click.echo(repr(degree_of_coherence(coh)))


if __name__ == "__main__":
    main()
