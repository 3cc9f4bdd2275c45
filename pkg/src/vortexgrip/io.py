"""Persistence: datasets, traces, models, sweep surfaces, geometry files.

All text formats are UTF-8 with LF line endings and '.' decimals; floats
are written with ``repr`` (shortest round-trip), so write-then-read is the
identity and identical inputs produce byte-identical files on any
platform.  Writers go through a temp file and an atomic rename, so a
failed run never leaves a partial output behind.

Formats are documented in docs/FORMATS.md.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import ParseError, SchemaMismatch, VersionUnsupported
from .config import format_key_values, parse_key_values
from .geometry import (
    FrictionElementSpec,
    GripperGeometry,
    STANDARD_GRIPPERS,
    SurfaceFamily,
    SurfaceSpec,
)
from .protocol import (
    Dataset,
    ExperimentCondition,
    ExperimentRecord,
    FactorialPlan,
    ForceTrace,
    standard_surfaces,
)
from .surrogate.boost import AdaBoostR2
from .surrogate.ensemble import LiftEnsemble, FEATURE_SCHEMA, SweepSurface
from .surrogate.forest import RandomForest
from .surrogate.tree import RegressionTree

DATASET_SCHEMA_LINE = "# schema=vortexgrip.dataset/1"
SWEEP_SCHEMA_LINE = "# schema=vortexgrip.sweep/1"
MODEL_FORMAT = "vortexgrip.model"
MODEL_VERSION = 1

DATASET_HEADER = ("gripper_id,d_n_mm,d_g_mm,d_c_mm,h_c_mm,pressure_kPa,"
                  "surface_family,radius_mm,rep,F_max_N,h_opt_mm,seed")
TRACE_HEADER = "t_s,h_mm,Fz_N"
SWEEP_HEADER = "d_n_mm,radius_mm,surface_family,pressure_kPa,F_pred_N"


def _fmt(value: float) -> str:
    """Shortest decimal that round-trips the float exactly."""
    return repr(float(value))


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write via a sibling temp file and atomic rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent),
                               prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _check_schema_line(line: str, expected: str) -> None:
    if line.startswith("# schema="):
        if line.strip() != expected:
            raise VersionUnsupported(
                f"file declares {line.strip()!r}, this build reads "
                f"{expected!r}")


# --------------------------------------------------------------------------
# Dataset CSV
# --------------------------------------------------------------------------

def write_dataset(dataset: Dataset, path: str | Path) -> None:
    lines = [DATASET_SCHEMA_LINE, DATASET_HEADER]
    for rec in dataset.records:
        cond = rec.condition
        g = cond.gripper
        lines.append(",".join([
            cond.gripper_id,
            _fmt(g.nozzle_diameter_mm),
            _fmt(g.gripper_diameter_mm),
            _fmt(g.cavity_diameter_mm),
            _fmt(g.cavity_height_mm),
            _fmt(cond.supply_kpa),
            cond.surface.family.value,
            _fmt(cond.surface.radius_mm),
            str(cond.repetition),
            _fmt(rec.f_max_n),
            _fmt(rec.h_opt_mm),
            str(rec.noise_seed),
        ]))
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_dataset(path: str | Path) -> Dataset:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    body_start = 0
    if lines and lines[0].startswith("#"):
        _check_schema_line(lines[0], DATASET_SCHEMA_LINE)
        body_start = 1
    if body_start >= len(lines) or lines[body_start] != DATASET_HEADER:
        got = lines[body_start] if body_start < len(lines) else "<empty>"
        raise SchemaMismatch(
            f"dataset header mismatch: expected {DATASET_HEADER!r}, "
            f"got {got!r}")
    records = []
    for lineno, line in enumerate(lines[body_start + 1:],
                                  start=body_start + 2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 12:
            raise ParseError(f"expected 12 columns, got {len(parts)}", lineno)
        try:
            gripper = GripperGeometry(
                nozzle_diameter_mm=float(parts[1]),
                gripper_diameter_mm=float(parts[2]),
                cavity_diameter_mm=float(parts[3]),
                cavity_height_mm=float(parts[4]),
            )
            condition = ExperimentCondition(
                gripper_id=parts[0],
                gripper=gripper,
                supply_kpa=float(parts[5]),
                surface=SurfaceSpec(SurfaceFamily(parts[6]),
                                    float(parts[7])),
                repetition=int(parts[8]),
            )
            records.append(ExperimentRecord(
                condition=condition,
                f_max_n=float(parts[9]),
                h_opt_mm=float(parts[10]),
                noise_seed=int(parts[11]),
            ))
        except (ValueError, KeyError) as exc:
            raise ParseError(str(exc), lineno) from exc
    return Dataset(records=tuple(records))


def write_trace(trace: ForceTrace, path: str | Path) -> None:
    lines = [TRACE_HEADER]
    for t, h, f in zip(trace.times_s, trace.heights_mm, trace.forces_n):
        lines.append(f"{_fmt(t)},{_fmt(h)},{_fmt(f)}")
    atomic_write_text(path, "\n".join(lines) + "\n")


# --------------------------------------------------------------------------
# Model JSON
# --------------------------------------------------------------------------

def _tree_to_dict(tree: RegressionTree) -> dict:
    return {
        "feature": tree.feature_.tolist(),
        "threshold": tree.threshold_.tolist(),
        "left": tree.left_.tolist(),
        "right": tree.right_.tolist(),
        "value": tree.value_.tolist(),
    }


def _tree_from_dict(data: dict, n_features: int) -> RegressionTree:
    tree = RegressionTree()
    tree.n_features_in_ = n_features
    tree.feature_ = np.asarray(data["feature"], dtype=np.int32)
    tree.threshold_ = np.asarray(data["threshold"], dtype=float)
    tree.left_ = np.asarray(data["left"], dtype=np.int32)
    tree.right_ = np.asarray(data["right"], dtype=np.int32)
    tree.value_ = np.asarray(data["value"], dtype=float)
    return tree


def model_to_dict(model: LiftEnsemble) -> dict:
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "feature_schema": list(FEATURE_SCHEMA),
        "params": model.get_params(),
        "forest": [_tree_to_dict(t) for t in model.forest_.trees_],
        "boost": {
            "stage_weights": model.boost_.stage_weights_.tolist(),
            "stages": [_tree_to_dict(t) for t in model.boost_.stages_],
        },
    }


def model_from_dict(data: dict) -> LiftEnsemble:
    if data.get("format") != MODEL_FORMAT:
        raise SchemaMismatch(
            f"not a {MODEL_FORMAT} file (format={data.get('format')!r})")
    if data.get("version") != MODEL_VERSION:
        raise VersionUnsupported(
            f"model version {data.get('version')!r} unsupported "
            f"(this build reads {MODEL_VERSION})")
    if list(data.get("feature_schema", [])) != list(FEATURE_SCHEMA):
        raise SchemaMismatch("model was trained with a different feature "
                             "schema")
    n_features = len(FEATURE_SCHEMA)
    model = LiftEnsemble(**data["params"])
    forest = RandomForest()
    forest.trees_ = [_tree_from_dict(t, n_features) for t in data["forest"]]
    boost = AdaBoostR2()
    boost.stages_ = [_tree_from_dict(t, n_features)
                     for t in data["boost"]["stages"]]
    boost.stage_weights_ = np.asarray(data["boost"]["stage_weights"])
    model.forest_ = forest
    model.boost_ = boost
    model.n_features_in_ = n_features
    return model


def write_model(model: LiftEnsemble, path: str | Path) -> None:
    atomic_write_text(path, json.dumps(model_to_dict(model),
                                       separators=(",", ":")) + "\n")


def read_model(path: str | Path) -> LiftEnsemble:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid model JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaMismatch("model file is not a JSON object")
    return model_from_dict(data)


# --------------------------------------------------------------------------
# Sweep CSV (long format: the axes round-trip through the value columns)
# --------------------------------------------------------------------------

def write_sweep(surface: SweepSurface, path: str | Path) -> None:
    lines = [SWEEP_SCHEMA_LINE, SWEEP_HEADER]
    for i, d in enumerate(surface.nozzle_diameters_mm):
        for j, r in enumerate(surface.radii_mm):
            lines.append(",".join([
                _fmt(d), _fmt(r), surface.family.value,
                _fmt(surface.pressure_kpa), _fmt(surface.forces_n[i, j]),
            ]))
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_sweep(path: str | Path) -> SweepSurface:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    body_start = 0
    if lines and lines[0].startswith("#"):
        _check_schema_line(lines[0], SWEEP_SCHEMA_LINE)
        body_start = 1
    if body_start >= len(lines) or lines[body_start] != SWEEP_HEADER:
        raise SchemaMismatch("sweep header mismatch")
    diameters: list[float] = []
    radii: list[float] = []
    rows = []
    family = None
    pressure = None
    for lineno, line in enumerate(lines[body_start + 1:],
                                  start=body_start + 2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise ParseError(f"expected 5 columns, got {len(parts)}", lineno)
        try:
            d, r = float(parts[0]), float(parts[1])
            fam = SurfaceFamily(parts[2])
            p = float(parts[3])
            f = float(parts[4])
        except (ValueError, KeyError) as exc:
            raise ParseError(str(exc), lineno) from exc
        if family is None:
            family, pressure = fam, p
        elif fam != family or p != pressure:
            raise ParseError("mixed family/pressure in sweep file", lineno)
        if d not in diameters:
            diameters.append(d)
        if r not in radii:
            radii.append(r)
        rows.append((d, r, f))
    if family is None:
        raise SchemaMismatch("sweep file has no data rows")
    forces = np.zeros((len(diameters), len(radii)))
    for d, r, f in rows:
        forces[diameters.index(d), radii.index(r)] = f
    return SweepSurface(tuple(diameters), tuple(radii), family, pressure,
                        forces)


# --------------------------------------------------------------------------
# Gripper / surface / plan key-value files
# --------------------------------------------------------------------------

def write_gripper(gripper: GripperGeometry, path: str | Path) -> None:
    pairs = {
        "nozzle_diameter_mm": gripper.nozzle_diameter_mm,
        "gripper_diameter_mm": gripper.gripper_diameter_mm,
        "cavity_diameter_mm": gripper.cavity_diameter_mm,
        "cavity_height_mm": gripper.cavity_height_mm,
        "nozzle_count": gripper.nozzle_count,
        "cavity_chamfer_radius_mm": gripper.cavity_chamfer_radius_mm,
    }
    fe = gripper.friction_elements
    if fe is not None:
        pairs.update({
            "friction_count": fe.count,
            "friction_element_diameter_mm": fe.element_diameter_mm,
            "friction_element_height_mm": fe.element_height_mm,
            "friction_angular_spacing_deg": fe.angular_spacing_deg,
        })
    atomic_write_text(path, format_key_values(pairs,
                                              header="vortexgrip gripper"))


def read_gripper(path: str | Path) -> GripperGeometry:
    pairs = parse_key_values(Path(path).read_text(encoding="utf-8"))
    try:
        friction = None
        if "friction_count" in pairs:
            friction = FrictionElementSpec(
                count=int(pairs["friction_count"]),
                element_diameter_mm=float(
                    pairs.get("friction_element_diameter_mm", 2.0)),
                element_height_mm=float(
                    pairs.get("friction_element_height_mm", 0.4)),
                angular_spacing_deg=float(
                    pairs.get("friction_angular_spacing_deg",
                              360.0 / int(pairs["friction_count"]))),
            )
        return GripperGeometry(
            nozzle_diameter_mm=float(pairs["nozzle_diameter_mm"]),
            gripper_diameter_mm=float(pairs.get("gripper_diameter_mm", 20.0)),
            cavity_diameter_mm=float(pairs.get("cavity_diameter_mm", 14.0)),
            cavity_height_mm=float(pairs.get("cavity_height_mm", 4.0)),
            nozzle_count=int(pairs.get("nozzle_count", 2)),
            cavity_chamfer_radius_mm=float(
                pairs.get("cavity_chamfer_radius_mm", 1.0)),
            friction_elements=friction,
        )
    except KeyError as exc:
        raise ParseError(f"missing gripper key {exc}") from exc
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def write_surface(surface: SurfaceSpec, path: str | Path) -> None:
    atomic_write_text(path, format_key_values({
        "family": surface.family.value,
        "radius_mm": surface.radius_mm,
        "stiffness_n_per_mm": surface.stiffness_n_per_mm,
    }, header="vortexgrip surface"))


def read_surface(path: str | Path) -> SurfaceSpec:
    pairs = parse_key_values(Path(path).read_text(encoding="utf-8"))
    try:
        return SurfaceSpec(
            family=SurfaceFamily(pairs["family"]),
            radius_mm=float(pairs.get("radius_mm", 1e6)),
            stiffness_n_per_mm=float(pairs.get("stiffness_n_per_mm", 0.5)),
        )
    except KeyError as exc:
        raise ParseError(f"missing surface key {exc}") from exc
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def parse_surface_shorthand(text: str) -> SurfaceSpec:
    """Parse ``flat`` or ``family:radius_mm`` (e.g. ``dome_convex:35``)."""
    if text == "flat":
        return SurfaceSpec(SurfaceFamily.FLAT)
    if ":" in text:
        name, radius = text.split(":", 1)
        try:
            return SurfaceSpec(SurfaceFamily(name), float(radius))
        except (ValueError, KeyError) as exc:
            raise ParseError(f"bad surface {text!r}: {exc}") from exc
    raise ParseError(f"bad surface {text!r}; use 'flat', 'family:radius' or "
                     f"a surface file path")


def read_plan(path: str | Path) -> FactorialPlan:
    """Plan file: grippers, pressures, families, radii, repetitions."""
    pairs = parse_key_values(Path(path).read_text(encoding="utf-8"))
    try:
        gripper_ids = [g.strip() for g in pairs["grippers"].split(",")]
        grippers = tuple((gid, STANDARD_GRIPPERS[gid]) for gid in gripper_ids)
        pressures = tuple(float(p) for p in pairs["pressures_kpa"].split(","))
        reps = int(pairs.get("repetitions", 10))
        stiffness = float(pairs.get("stiffness_n_per_mm", 0.5))
        if pairs.get("surfaces", "standard") == "standard":
            surfaces = standard_surfaces(stiffness)
        else:
            radii = tuple(float(r) for r in pairs["radii_mm"].split(","))
            surfaces = []
            for name in pairs["families"].split(","):
                family = SurfaceFamily(name.strip())
                if family == SurfaceFamily.FLAT:
                    surfaces.append(SurfaceSpec(family, 1e6, stiffness))
                else:
                    surfaces.extend(SurfaceSpec(family, r, stiffness)
                                    for r in radii)
            surfaces = tuple(surfaces)
        return FactorialPlan(grippers=grippers, pressures_kpa=pressures,
                             surfaces=surfaces, repetitions=reps)
    except KeyError as exc:
        raise ParseError(f"missing plan key {exc}") from exc
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
