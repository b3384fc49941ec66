"""Strict JSON experiment configs.

One UTF-8 JSON document per experiment, "version": 1, unknown fields
rejected.  Real-valued fields accept plain numbers, fraction strings like
"1/3", and log-ratio strings like "log(2)/log(3)" so irrational constants
round-trip exactly.  Three failure kinds stay distinct: parse (broken JSON),
schema (wrong shape or type), semantic (well-shaped but invalid values).
Every diagnostic names the offending field path.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .dimension import CarpetSpec
from .errors import (ConfigParseError, ConfigSchemaError, ConfigSemanticError,
                     UsageError)
from .geometry import (Affine2, AmbientBox, ClosedFormMap, ContractionMap,
                       Similarity)
from .measure import Gauge, PowerGauge, PowerLogGauge, TableGauge
from .model import DeterministicIfs, Rifs, carpet_system
from .sequences import OmegaSeq

_LOG_RATIO = re.compile(r"^log\((\d+)\)/log\((\d+)\)$")

TASK_TYPES = ("dim", "curve", "minimize", "boxdim", "measure-bounds",
              "render", "splice-demo", "sample")

_DEFAULT_OUTPUTS = {
    "dim": "dim.csv",
    "curve": "curve.csv",
    "minimize": "minimize.csv",
    "boxdim": "boxdim.csv",
    "measure-bounds": "bounds.csv",
    "render": "render.ppm",
    "splice-demo": "splice.csv",
    "sample": "sample.csv",
}

_DEFAULT_SUMMARIES = {
    "boxdim": "boxdim_summary.csv",
    "measure-bounds": "bounds_summary.csv",
}


@dataclass(frozen=True)
class TaskSpec:
    """Validated task request: a type tag plus normalized parameters."""

    type: str
    params: dict


@dataclass(frozen=True)
class ExperimentConfig:
    version: int
    description: str
    ambient: AmbientBox
    systems: tuple[DeterministicIfs, ...]
    carpets: tuple[CarpetSpec | None, ...]
    omega: OmegaSeq
    seed: int
    task: TaskSpec
    rifs: Rifs

    @property
    def outputs(self) -> tuple[str, ...]:
        names = [self.task.params["output"]]
        if "summary" in self.task.params:
            names.append(self.task.params["summary"])
        return tuple(names)


# --- low-level field helpers -------------------------------------------------


def _schema(path: str, msg: str) -> ConfigSchemaError:
    return ConfigSchemaError(f"{path}: {msg}")


def _semantic(path: str, msg: str) -> ConfigSemanticError:
    return ConfigSemanticError(f"{path}: {msg}")


def _check_keys(obj, path: str, required: tuple[str, ...],
                optional: tuple[str, ...] = ()) -> None:
    if not isinstance(obj, dict):
        raise _schema(path, "must be an object")
    for key in required:
        if key not in obj:
            raise _schema(path, f"missing required field {key!r}")
    for key in obj:
        if key not in required and key not in optional:
            raise _schema(f"{path}.{key}", "unknown field")


def _int_field(val, path: str, minimum: int | None = None) -> int:
    if isinstance(val, bool) or not isinstance(val, int):
        raise _schema(path, "must be an integer")
    if minimum is not None and val < minimum:
        raise _semantic(path, f"must be >= {minimum}")
    return val


def _str_field(val, path: str) -> str:
    if not isinstance(val, str):
        raise _schema(path, "must be a string")
    return val


def _real(val, path: str) -> float:
    if isinstance(val, bool):
        raise _schema(path, "must be a number")
    if isinstance(val, (int, float)):
        return float(val)
    if isinstance(val, str):
        m = _LOG_RATIO.match(val.strip())
        if m:
            a, b = int(m.group(1)), int(m.group(2))
            if a < 1 or b <= 1:
                raise _semantic(path, "log-ratio arguments out of range")
            return math.log(a) / math.log(b)
        try:
            return float(Fraction(val.strip()))
        except (ValueError, ZeroDivisionError):
            raise _schema(
                path, "must be a number, a fraction like \"1/3\", or "
                      "\"log(a)/log(b)\"") from None
    raise _schema(path, "must be a number")


def _real_list(val, path: str, length: int | None = None) -> tuple[float, ...]:
    if not isinstance(val, list):
        raise _schema(path, "must be an array")
    out = tuple(_real(v, f"{path}[{i}]") for i, v in enumerate(val))
    if length is not None and len(out) != length:
        raise _schema(path, f"must have exactly {length} entries")
    return out


def _output_name(val, path: str) -> str:
    name = _str_field(val, path)
    if not name or name.startswith("/") or ".." in name or "\x00" in name:
        raise _semantic(path, "must be a relative file name")
    return name


def _weights(val, path: str, n: int) -> tuple[float, ...]:
    w = _real_list(val, path)
    if len(w) != n:
        raise _semantic(path, f"needs one weight per system ({n})")
    if any(x < 0.0 for x in w):
        raise _semantic(path, "weights must be non-negative")
    total = math.fsum(w)
    if abs(total - 1.0) > 1e-12:
        raise _semantic(path, f"weights sum {total:g}")
    return w


# --- geometry pieces ---------------------------------------------------------


def _parse_ambient(obj, path: str) -> AmbientBox:
    _check_keys(obj, path, ("lo", "hi"))
    lo = _real_list(obj["lo"], f"{path}.lo")
    hi = _real_list(obj["hi"], f"{path}.hi")
    if len(lo) != len(hi):
        raise _schema(path, "lo and hi must have equal length")
    if len(lo) not in (1, 2):
        raise _semantic(path, "ambient dimension must be 1 or 2")
    try:
        return AmbientBox(lo, hi)
    except UsageError as exc:
        raise _semantic(path, str(exc)) from exc


def _parse_map(obj, path: str, dim: int) -> ContractionMap:
    if not isinstance(obj, dict):
        raise _schema(path, "must be an object")
    kind = _str_field(obj.get("kind"), f"{path}.kind") if "kind" in obj else None
    if kind is None:
        raise _schema(path, "missing required field 'kind'")
    try:
        if kind == "similarity":
            _check_keys(obj, path, ("kind", "ratio", "translation"),
                        ("rotation_deg", "reflect"))
            reflect = obj.get("reflect", False)
            if not isinstance(reflect, bool):
                raise _schema(f"{path}.reflect", "must be true or false")
            return Similarity(
                _real(obj["ratio"], f"{path}.ratio"),
                _real_list(obj["translation"], f"{path}.translation", dim),
                rotation_deg=_real(obj.get("rotation_deg", 0.0),
                                   f"{path}.rotation_deg"),
                reflect=reflect)
        if kind == "affine2":
            _check_keys(obj, path, ("kind", "matrix", "translation"))
            mat = obj["matrix"]
            if not isinstance(mat, list) or len(mat) != 2:
                raise _schema(f"{path}.matrix", "must be a 2x2 array")
            rows = tuple(_real_list(r, f"{path}.matrix[{i}]", 2)
                         for i, r in enumerate(mat))
            if dim != 2:
                raise _semantic(path, "affine2 maps need a 2-D ambient")
            return Affine2(rows, _real_list(obj["translation"],
                                            f"{path}.translation", 2))
        if kind == "closed_form":
            _check_keys(obj, path, ("kind", "name"))
            return ClosedFormMap(_str_field(obj["name"], f"{path}.name"))
    except ConfigSchemaError:
        raise
    except UsageError as exc:
        raise _semantic(path, str(exc)) from exc
    raise _semantic(f"{path}.kind", f"unknown map kind {kind!r}")


def _parse_system(obj, path: str, index: int, dim: int,
                  ) -> tuple[DeterministicIfs, CarpetSpec | None]:
    if not isinstance(obj, dict):
        raise _schema(path, "must be an object")
    label = obj.get("label", f"system_{index + 1}")
    if not isinstance(label, str) or not label:
        raise _schema(f"{path}.label", "must be a non-empty string")
    has_maps = "maps" in obj
    has_carpet = "carpet" in obj
    if has_maps == has_carpet:
        raise _schema(path, "needs exactly one of 'maps' or 'carpet'")
    if has_carpet:
        _check_keys(obj, path, ("carpet",), ("label",))
        cpath = f"{path}.carpet"
        spec = obj["carpet"]
        _check_keys(spec, cpath, ("m", "n", "cells"))
        cells_raw = spec["cells"]
        if not isinstance(cells_raw, list):
            raise _schema(f"{cpath}.cells", "must be an array")
        cells = []
        for i, cell in enumerate(cells_raw):
            pair = _real_list(cell, f"{cpath}.cells[{i}]", 2)
            if any(v != int(v) for v in pair):
                raise _schema(f"{cpath}.cells[{i}]", "entries must be integers")
            cells.append((int(pair[0]), int(pair[1])))
        if dim != 2:
            raise _semantic(cpath, "carpet systems need a 2-D ambient")
        try:
            carpet = CarpetSpec(_int_field(spec["m"], f"{cpath}.m"),
                                _int_field(spec["n"], f"{cpath}.n"),
                                tuple(cells))
            return carpet_system(carpet, label), carpet
        except UsageError as exc:
            raise _semantic(cpath, str(exc)) from exc
    _check_keys(obj, path, ("maps",), ("label",))
    maps_raw = obj["maps"]
    if not isinstance(maps_raw, list) or not maps_raw:
        raise _schema(f"{path}.maps", "must be a non-empty array")
    maps = tuple(_parse_map(m, f"{path}.maps[{i}]", dim)
                 for i, m in enumerate(maps_raw))
    try:
        return DeterministicIfs(maps, label), None
    except UsageError as exc:
        raise _semantic(path, str(exc)) from exc


def _parse_omega(obj, path: str, n_systems: int) -> OmegaSeq:
    _check_keys(obj, path, ("cycle",), ("prefix",))
    prefix_raw = obj.get("prefix", [])
    if not isinstance(prefix_raw, list):
        raise _schema(f"{path}.prefix", "must be an array")
    cycle_raw = obj["cycle"]
    if not isinstance(cycle_raw, list):
        raise _schema(f"{path}.cycle", "must be an array")
    if not cycle_raw:
        raise _schema(f"{path}.cycle", "cycle must be non-empty")
    prefix = tuple(_int_field(v, f"{path}.prefix[{i}]")
                   for i, v in enumerate(prefix_raw))
    cycle = tuple(_int_field(v, f"{path}.cycle[{i}]")
                  for i, v in enumerate(cycle_raw))
    for i, v in enumerate(prefix + cycle):
        if v < 1:
            raise _semantic(path, "sequence symbols are 1-based")
        if v > n_systems:
            raise _semantic(path, f"symbol {v} references a missing system")
    return OmegaSeq(prefix, cycle)


def _parse_gauge(obj, path: str) -> Gauge:
    if not isinstance(obj, dict):
        raise _schema(path, "must be an object")
    gtype = obj.get("type")
    try:
        if gtype == "power":
            _check_keys(obj, path, ("type", "s"))
            return PowerGauge(_real(obj["s"], f"{path}.s"))
        if gtype == "power_log":
            _check_keys(obj, path, ("type", "s"))
            return PowerLogGauge(_real(obj["s"], f"{path}.s"))
        if gtype == "table":
            _check_keys(obj, path, ("type", "knots"))
            knots = obj["knots"]
            if not isinstance(knots, list):
                raise _schema(f"{path}.knots", "must be an array")
            pairs = [_real_list(k, f"{path}.knots[{i}]", 2)
                     for i, k in enumerate(knots)]
            return TableGauge(pairs)
    except ConfigSchemaError:
        raise
    except UsageError as exc:
        raise _semantic(path, str(exc)) from exc
    raise _schema(f"{path}.type",
                  "must be one of 'power', 'power_log', 'table'")


def _parse_points(val, path: str, dim: int) -> tuple[tuple[float, ...], ...]:
    if not isinstance(val, list) or not val:
        raise _schema(path, "must be a non-empty array of points")
    return tuple(_real_list(p, f"{path}[{i}]", dim)
                 for i, p in enumerate(val))


# --- task parsing ------------------------------------------------------------


def _parse_task(obj, path: str, n_systems: int, ambient: AmbientBox,
                all_carpets: bool) -> TaskSpec:
    if not isinstance(obj, dict):
        raise _schema(path, "must be an object")
    ttype = obj.get("type")
    if not isinstance(ttype, str):
        raise _schema(f"{path}.type", "must be a string")
    if ttype not in TASK_TYPES:
        raise _semantic(f"{path}.type", f"unknown task type {ttype!r}")
    params: dict = {}

    def out_fields(extra_required: tuple[str, ...] = (),
                   extra_optional: tuple[str, ...] = (),
                   with_summary: bool = False) -> None:
        optional = ("output",) + (("summary",) if with_summary else ())
        _check_keys(obj, path, ("type",) + extra_required,
                    extra_optional + optional)
        params["output"] = _output_name(
            obj.get("output", _DEFAULT_OUTPUTS[ttype]), f"{path}.output")
        if with_summary:
            params["summary"] = _output_name(
                obj.get("summary", _DEFAULT_SUMMARIES[ttype]),
                f"{path}.summary")

    if ttype == "dim":
        out_fields(extra_optional=("weights",))
        params["weights"] = _weights(
            obj.get("weights", [1.0 / n_systems] * n_systems),
            f"{path}.weights", n_systems)
    elif ttype in ("curve", "minimize"):
        if n_systems != 2:
            raise _semantic(path, f"{ttype} task needs exactly 2 systems")
        if not all_carpets:
            raise _semantic(path, f"{ttype} task needs carpet systems")
        if ttype == "curve":
            out_fields(extra_optional=("grid",))
            params["grid"] = _int_field(obj.get("grid", 101),
                                        f"{path}.grid", minimum=2)
        else:
            out_fields(extra_optional=("tol",))
            tol = _real(obj.get("tol", 1e-10), f"{path}.tol")
            if tol <= 0.0:
                raise _semantic(f"{path}.tol", "must be > 0")
            params["tol"] = tol
    elif ttype == "boxdim":
        out_fields(extra_required=("ladder",), with_summary=True)
        ladder = obj["ladder"]
        lpath = f"{path}.ladder"
        _check_keys(ladder, lpath, ("base", "exponents"))
        base = _real(ladder["base"], f"{lpath}.base")
        if base <= 1.0:
            raise _semantic(f"{lpath}.base", "must be > 1")
        exps = ladder["exponents"]
        if not isinstance(exps, list) or not exps:
            raise _schema(f"{lpath}.exponents", "must be a non-empty array")
        evals = [_int_field(e, f"{lpath}.exponents[{i}]", minimum=1)
                 for i, e in enumerate(exps)]
        if any(b <= a for a, b in zip(evals, evals[1:])):
            raise _semantic(f"{lpath}.exponents",
                            "must be strictly increasing")
        params["deltas"] = tuple(base ** -e for e in evals)
    elif ttype == "measure-bounds":
        out_fields(extra_required=("s", "radii", "points"),
                   extra_optional=("exponents",), with_summary=True)
        s = _real(obj["s"], f"{path}.s")
        if s <= 0.0:
            raise _semantic(f"{path}.s", "must be > 0")
        params["s"] = s
        radii = _real_list(obj["radii"], f"{path}.radii")
        if not radii or any(r <= 0.0 for r in radii):
            raise _semantic(f"{path}.radii", "must be positive and non-empty")
        params["radii"] = radii
        params["points"] = _parse_points(obj["points"], f"{path}.points",
                                         ambient.dim)
        if "exponents" in obj:
            params["exponents"] = _real_list(obj["exponents"],
                                             f"{path}.exponents", n_systems)
    elif ttype == "render":
        out_fields(extra_required=("width", "height"),
                   extra_optional=("target_error", "depth", "foreground",
                                   "background"))
        params["width"] = _int_field(obj["width"], f"{path}.width")
        params["height"] = _int_field(obj["height"], f"{path}.height")
        if "depth" in obj:
            params["depth"] = _int_field(obj["depth"], f"{path}.depth",
                                         minimum=1)
        if "target_error" in obj:
            te = _real(obj["target_error"], f"{path}.target_error")
            if te <= 0.0:
                raise _semantic(f"{path}.target_error", "must be > 0")
            params["target_error"] = te
        elif "depth" not in obj:
            raise _schema(path, "needs 'target_error' or 'depth'")
        for field in ("foreground", "background"):
            if field in obj:
                rgb = obj[field]
                if (not isinstance(rgb, list) or len(rgb) != 3 or
                        any(isinstance(v, bool) or not isinstance(v, int)
                            for v in rgb)):
                    raise _schema(f"{path}.{field}",
                                  "must be three integer channels")
                if any(not (0 <= v <= 255) for v in rgb):
                    raise _semantic(f"{path}.{field}",
                                    "channels must lie in 0..255")
                params[field] = tuple(rgb)
    elif ttype == "splice-demo":
        out_fields(extra_required=("epsilon", "tail", "seed_set", "gauge"),
                   extra_optional=("max_depth",))
        eps = _real(obj["epsilon"], f"{path}.epsilon")
        if not (0.0 < eps <= 1.0):
            raise _semantic(f"{path}.epsilon", "must lie in (0, 1]")
        params["epsilon"] = eps
        params["tail"] = _parse_omega(obj["tail"], f"{path}.tail", n_systems)
        params["seed_set"] = _parse_points(obj["seed_set"],
                                           f"{path}.seed_set", ambient.dim)
        params["gauge"] = _parse_gauge(obj["gauge"], f"{path}.gauge")
        params["max_depth"] = _int_field(obj.get("max_depth", 10),
                                         f"{path}.max_depth", minimum=1)
    elif ttype == "sample":
        out_fields(extra_required=("horizon",), extra_optional=("weights",))
        params["horizon"] = _int_field(obj["horizon"], f"{path}.horizon",
                                       minimum=1)
        params["weights"] = _weights(
            obj.get("weights", [1.0 / n_systems] * n_systems),
            f"{path}.weights", n_systems)

    if ttype == "render" and (params["width"] < 1 or params["height"] < 1):
        raise _semantic(path, "render resolution must be at least 1x1")
    return TaskSpec(ttype, params)


# --- entry point -------------------------------------------------------------


def parse_config(doc, source: str = "<config>") -> ExperimentConfig:
    """Validate an already-decoded JSON document."""
    _check_keys(doc, source, ("version", "ambient", "systems", "omega",
                              "task"), ("description", "seed"))
    version = _int_field(doc["version"], f"{source}.version")
    if version != 1:
        raise _schema(f"{source}.version", "only version 1 is supported")
    description = doc.get("description", "")
    if not isinstance(description, str):
        raise _schema(f"{source}.description", "must be a string")
    seed = _int_field(doc.get("seed", 0), f"{source}.seed", minimum=0)

    ambient = _parse_ambient(doc["ambient"], f"{source}.ambient")
    systems_raw = doc["systems"]
    if not isinstance(systems_raw, list) or not systems_raw:
        raise _schema(f"{source}.systems", "must be a non-empty array")
    systems = []
    carpets = []
    for i, entry in enumerate(systems_raw):
        sys_, carpet = _parse_system(entry, f"{source}.systems[{i}]", i,
                                     ambient.dim)
        systems.append(sys_)
        carpets.append(carpet)

    omega = _parse_omega(doc["omega"], f"{source}.omega", len(systems))
    task = _parse_task(doc["task"], f"{source}.task", len(systems), ambient,
                       all(c is not None for c in carpets))
    try:
        rifs = Rifs(tuple(systems), ambient)
    except UsageError as exc:
        raise _semantic(f"{source}.systems", str(exc)) from exc
    return ExperimentConfig(version, description, ambient, tuple(systems),
                            tuple(carpets), omega, seed, task, rifs)


def load_config(path) -> ExperimentConfig:
    """Load and fully validate a config file."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigParseError(f"{path}: cannot read config: {exc}") from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ConfigParseError(f"{path}: config is not UTF-8: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}") from exc
    return parse_config(doc, source=str(path))
