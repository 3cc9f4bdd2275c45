"""Command-line entry point orchestrating the toolkit.

Every subcommand is deterministic given its flags plus ``--seed``; outputs
are written atomically, so failures never leave partial files.  Exit codes:
0 success, 2 usage, and one code per error family (see errors.py).
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click
import numpy as np

from . import io as vio
from .aero import LiftEvaluator
from .config import Config, load_config, write_config
from .errors import VortexGripError
from .fabrication import MATERIALS, compensate
from .geometry import STANDARD_GRIPPERS, GripperGeometry, SurfaceSpec
from .protocol import (
    augment,
    calibrate,
    generate_dataset,
    standard_plan,
)
from .surrogate import (
    FeatureVector,
    SweepGrid,
    cross_validate,
    dataset_features,
    ensemble_from_params,
    sweep_predict,
)
from .geometry import SurfaceFamily


def _resolve_gripper(text: str) -> tuple[str, GripperGeometry]:
    if text in STANDARD_GRIPPERS:
        return text, STANDARD_GRIPPERS[text]
    return Path(text).stem, vio.read_gripper(text)


def _resolve_surface(text: str) -> SurfaceSpec:
    if os.path.exists(text):
        return vio.read_surface(text)
    return vio.parse_surface_shorthand(text)


@click.group()
@click.option("--config", "config_path", envvar="VORTEXGRIP_CONFIG",
              type=click.Path(exists=True, dir_okay=False), default=None,
              help="Path to a key=value config file.")
@click.pass_context
def cli(ctx, config_path):
    """Design and analysis toolkit for pneumatic vortex grippers."""
    ctx.obj = load_config(config_path)


@cli.command("compensate")
@click.option("--material", type=click.Choice(sorted(MATERIALS)),
              required=True)
@click.option("--target-mm", type=float, required=True,
              help="Printed nozzle diameter to hit.")
@click.option("--json", "as_json", is_flag=True,
              help="Emit a machine-readable JSON line instead of the table.")
def cmd_compensate(material, target_mm, as_json):
    """CAD diameter to specify so a bore prints at the target diameter."""
    result = compensate(MATERIALS[material], target_mm)
    if as_json:
        click.echo(json.dumps({"material": material, **result.as_dict()}))
        return
    click.echo(f"{'target printed (mm)':28s} {result.target_printed_mm:.4f}")
    click.echo(f"{'CAD diameter (mm)':28s} {result.cad_diameter_mm:.4f}")
    click.echo(f"{'shrinkage fraction':28s} {result.shrinkage_fraction:.4f}")
    click.echo(f"{'bisection iterations':28s} {result.iterations}")
    if result.capillary_risk:
        click.echo("note: bores this small risk curing shut (capillary "
                   "blockage); consider >= 0.55 mm")


@cli.command("simulate")
@click.option("--gripper", default="G1", show_default=True,
              help="G1/G2/G3 or a gripper file path.")
@click.option("--surface", default="flat", show_default=True,
              help="'flat', 'family:radius_mm', or a surface file path.")
@click.option("--pressure-kpa", type=float, required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.pass_obj
def cmd_simulate(config: Config, gripper, surface, pressure_kpa, out):
    """Simulate a lift-versus-height curve and write it as CSV."""
    _, grip = _resolve_gripper(gripper)
    surf = _resolve_surface(surface)
    evaluator = LiftEvaluator(grip, surf, pressure_kpa, config.air,
                              config.aero, config.grid.n_radial,
                              config.grid.n_angular)
    curve = evaluator.curve(config.grid.curve_max_height_mm,
                            config.grid.curve_heights)
    lines = ["h_mm,F_N"]
    lines += [f"{repr(float(h))},{repr(float(f))}"
              for h, f in zip(curve.heights_mm, curve.forces_n)]
    vio.atomic_write_text(out, "\n".join(lines) + "\n")
    click.echo(f"F_max = {curve.f_max_n:.4f} N at h = {curve.h_opt_mm:.4f} "
               f"mm ({out})")


@cli.group("dataset")
def cmd_dataset():
    """Factorial dataset synthesis."""


@cmd_dataset.command("gen")
@click.option("--plan", default="standard", show_default=True,
              help="'standard' (3x4x41x10) or a plan file path.")
@click.option("--seed", type=int, default=None,
              help="Master seed (defaults to the config seed).")
@click.option("--noise-sd", type=float, default=None,
              help="Repeat-noise standard deviation (config default).")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--augment", "do_augment", is_flag=True,
              help="Append the zero-pressure rows per gripper/surface pair.")
@click.option("--workers", type=int, default=None,
              help="Worker threads (default: logical cores).")
@click.pass_obj
def cmd_dataset_gen(config: Config, plan, seed, noise_sd, out, do_augment,
                    workers):
    """Generate the synthetic experiment dataset as CSV."""
    factorial = standard_plan() if plan == "standard" else vio.read_plan(plan)
    seed = config.default_seed if seed is None else seed
    noise_sd = config.protocol.noise_sd if noise_sd is None else noise_sd
    workers = workers or os.cpu_count() or 1
    dataset = generate_dataset(factorial, noise_sd, seed, config,
                               workers=workers)
    if do_augment:
        dataset = augment(dataset)
    vio.write_dataset(dataset, out)
    click.echo(f"wrote {len(dataset)} records to {out}")


@cli.command("train")
@click.option("--data", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--seed", type=int, default=None)
@click.option("--cv", type=int, default=0,
              help="Also run k-fold cross-validation and print the scores.")
@click.option("--workers", type=int, default=None,
              help="Worker processes for forest fitting (default: cores).")
@click.pass_obj
def cmd_train(config: Config, data, out, seed, cv, workers):
    """Train the lift surrogate on a dataset CSV and save it as JSON."""
    dataset = vio.read_dataset(data)
    X, y = dataset_features(dataset)
    seed = config.default_seed if seed is None else seed
    workers = workers or os.cpu_count() or 1
    estimator = ensemble_from_params(config.surrogate, seed, n_jobs=workers)
    if cv:
        report = cross_validate(X, y, estimator, k=cv, seed=seed)
        for i, score in enumerate(report.fold_scores):
            click.echo(f"fold {i}: R^2 = {score:.4f}")
        click.echo(f"mean R^2 = {report.mean_score:.4f}")
    model = estimator.fit(X, y)
    vio.write_model(model, out)
    click.echo(f"trained on {len(y)} rows -> {out}")


@cli.command("predict")
@click.option("--model", "model_path",
              type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--d-n", "nozzle_mm", type=float, required=True)
@click.option("--radius", "radius_mm", type=float, required=True)
@click.option("--family",
              type=click.Choice([f.value for f in SurfaceFamily]),
              required=True)
@click.option("--pressure-kpa", type=float, required=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_predict(model_path, nozzle_mm, radius_mm, family, pressure_kpa,
                as_json):
    """Predict max lift for one design point."""
    model = vio.read_model(model_path)
    fv = FeatureVector(nozzle_mm, radius_mm, pressure_kpa,
                       SurfaceFamily(family))
    force = model.predict_point(fv)
    if as_json:
        click.echo(json.dumps({
            "nozzle_diameter_mm": nozzle_mm, "radius_mm": radius_mm,
            "surface_family": family, "pressure_kpa": pressure_kpa,
            "f_pred_n": force}))
    else:
        click.echo(f"F_pred = {force:.4f} N")


@cli.command("sweep")
@click.option("--model", "model_path",
              type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--family",
              type=click.Choice([f.value for f in SurfaceFamily
                                 if f != SurfaceFamily.FLAT]),
              required=True)
@click.option("--pressure-kpa", type=float, default=400.0, show_default=True)
@click.option("--d-n-range", nargs=3, type=float, default=(0.4, 1.2, 17),
              show_default=True, metavar="MIN MAX STEPS")
@click.option("--radius-range", nargs=3, type=float,
              default=(10.0, 100.0, 19), show_default=True,
              metavar="MIN MAX STEPS")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def cmd_sweep(model_path, family, pressure_kpa, d_n_range, radius_range, out):
    """Predict lift over a nozzle-diameter x surface-radius grid."""
    model = vio.read_model(model_path)
    grid = SweepGrid(
        nozzle_diameters_mm=tuple(
            np.linspace(d_n_range[0], d_n_range[1], int(d_n_range[2]))),
        radii_mm=tuple(
            np.linspace(radius_range[0], radius_range[1],
                        int(radius_range[2]))),
        family=SurfaceFamily(family),
        pressure_kpa=pressure_kpa,
    )
    surface = sweep_predict(model, grid)
    vio.write_sweep(surface, out)
    click.echo(f"wrote {surface.forces_n.size} predictions to {out}")


@cli.command("report")
@click.option("--data", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def cmd_report(data, out):
    """Summarize a dataset as radius-versus-pressure force tables."""
    dataset = vio.read_dataset(data)
    sums: dict[tuple, list] = {}
    pressures = sorted({rec.condition.supply_kpa
                        for rec in dataset.records
                        if rec.condition.supply_kpa > 0})
    for rec in dataset.records:
        cond = rec.condition
        if cond.supply_kpa <= 0:
            continue
        key = (cond.surface.family.value, cond.gripper_id,
               cond.surface.radius_mm, cond.supply_kpa)
        sums.setdefault(key, []).append(rec.f_max_n)
    header = "surface_family,gripper_id,radius_mm," + ",".join(
        f"F_{p:g}kPa_N" for p in pressures)
    rows = {}
    for (family, gid, radius, pressure), values in sorted(sums.items()):
        rows.setdefault((family, gid, radius), {})[pressure] = \
            sum(values) / len(values)
    lines = [header]
    for (family, gid, radius), by_pressure in rows.items():
        cells = [family, gid, repr(float(radius))]
        cells += [repr(round(by_pressure.get(p, 0.0), 6)) for p in pressures]
        lines.append(",".join(cells))
    vio.atomic_write_text(out, "\n".join(lines) + "\n")
    click.echo(f"wrote {len(lines) - 1} rows to {out}")


@cli.command("calibrate")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write a config file with the fitted constants.")
@click.pass_obj
def cmd_calibrate(config: Config, out):
    """Fit the aero closure constants to the bundled trend targets."""
    result = calibrate(config=config)
    for name, value in result.metrics.items():
        click.echo(f"{name:34s} model={value:8.4f} "
                   f"resid={result.residuals[name]:+7.3f}")
    status = "converged" if result.converged else "NOT CONVERGED (best so far)"
    click.echo(f"{status} after {result.iterations} evaluations")
    if out:
        write_config(config.replace_aero(result.constants), out)
        click.echo(f"wrote calibrated config to {out}")


def main():
    try:
        cli(standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(2)
    except click.exceptions.Abort:
        sys.exit(2)
    except VortexGripError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)


if __name__ == "__main__":
    main()
