"""Config validation for the command-line harness.

A config is a flat YAML mapping. Unknown keys are rejected, defaults are
filled in, derived values (window cutoffs, box length, prescribed
velocities) are written back so that a normalised config re-validates to
itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import yaml

from .enumeration import DEFAULT_BUDGET
from .girardeau import CONVENTIONS
from .kinematics import MomentumLattice, prescription


class ConfigError(ValueError):
    pass


def parse_int_list(text) -> list[int]:
    """'4..64' (inclusive), '1,3,5' or a list."""
    if isinstance(text, (list, tuple)):
        return [_as_int(x) for x in text]
    if isinstance(text, int) and not isinstance(text, bool):
        return [text]
    s = str(text).strip()
    if ".." in s:
        lo, hi = s.split("..", 1)
        lo, hi = _as_int(lo), _as_int(hi)
        if hi < lo:
            raise ConfigError(f"empty range {s!r}")
        return list(range(lo, hi + 1))
    return [_as_int(x) for x in s.split(",") if x.strip()]


def parse_float_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [_as_float(x) for x in text]
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return [float(text)]
    return [_as_float(x) for x in str(text).split(",") if x.strip()]


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise ConfigError(f"expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, float) and x.is_integer():
        return int(x)
    try:
        return int(str(x).strip())
    except ValueError:
        raise ConfigError(f"expected an integer, got {x!r}") from None


def _as_float(x) -> float:
    if isinstance(x, bool):
        raise ConfigError(f"expected a number, got {x!r}")
    try:
        val = float(str(x).strip()) if not isinstance(x, (int, float)) else float(x)
    except ValueError:
        raise ConfigError(f"expected a number, got {x!r}") from None
    if math.isnan(val):
        raise ConfigError("NaN is not a valid parameter")
    return val


def _as_str(x) -> str:
    return str(x)


def _opt(conv):
    def inner(x):
        return None if x is None else conv(x)

    return inner


@dataclass(frozen=True)
class Key:
    parse: object
    default: object = None
    choices: tuple | None = None
    help: str = ""


COMMON = {
    "output_dir": Key(_opt(_as_str), None, help="output directory"),
    "convention": Key(_as_str, "m-half", CONVENTIONS, "energy convention"),
    "tol": Key(_as_float, 1e-10, help="numerical tolerance"),
    "budget": Key(_as_int, DEFAULT_BUDGET, help="enumeration budget"),
    "workers": Key(_as_int, 1, help="worker processes for sweeps"),
}

_RING = {
    "N": Key(_as_int, 7, help="particle number (odd)"),
    "L": Key(_opt(_as_float), None, help="ring length (default N/rho)"),
    "rho": Key(_as_float, 1.0, help="density"),
}
_WINDOW = {
    "c": Key(_opt(_as_float), None, help="energy cutoff (default 2(pi rho)^2)"),
    "d": Key(_opt(_as_float), None, help="momentum cutoff (default pi rho)"),
}

SCHEMAS = {
    "spectrum": {**_RING, **_WINDOW, "v": Key(parse_float_list, [0.0], help="velocities")},
    "umklapp": {**_RING, "v": Key(parse_float_list, [1.0], help="velocities"), "r_max": Key(_opt(_as_int), None, help="longest ladder")},
    "ness": {
        "rho": Key(_as_float, 1.0, help="density"),
        "v": Key(_as_float, 1.0, help="velocity"),
        "j": Key(_as_int, 3, help="number of limit points"),
        "L_sweep": Key(parse_int_list, list(range(4, 65)), help="multipliers M of L = 2 pi M, e.g. 4..64"),
    },
    "metastability": {
        **_WINDOW,
        "rho": Key(_as_float, 1.0, help="density"),
        "N_values": Key(parse_int_list, [1, 3, 5, 7, 9, 11, 13, 15], help="odd particle numbers"),
        "v": Key(_opt(parse_float_list), None, help="velocities (default: every lattice |v| < 2 pi rho)"),
    },
    "landau": {
        "rho": Key(_as_float, 1.0, help="density"),
        "k_max": Key(_opt(_as_float), None, help="largest sampled |k| (default 4 pi rho)"),
        "samples": Key(_as_int, 2001, help="curve samples"),
    },
    "sound": {
        "rho": Key(_as_float, 1.0, help="density"),
        "N_values": Key(parse_int_list, [11, 21, 41, 81, 161], help="odd particle numbers (L = N/rho)"),
    },
    "kms": {
        "demo": Key(_as_str, "theorem1", ("theorem1", "bloch", "random"), "which check to run"),
        "beta": Key(parse_float_list, [1.0], help="inverse temperatures"),
        "v": Key(parse_float_list, [0.0, 0.25, 0.5, 1.0], help="boost velocities"),
        "flux": Key(_as_float, math.pi / 8, help="ring flux phase per bond"),
        "seed": Key(_as_int, 0, help="random seed"),
        "samples": Key(_as_int, 50, help="random systems"),
    },
    "meissner": {
        "units": Key(_as_str, "dimensionless", ("dimensionless", "SI"), "unit system"),
        "coupling": Key(_as_str, "weak", ("weak", "strong"), "coupling preset"),
        "B_ext": Key(_opt(_as_float), None, help="applied field (default per coupling)"),
        "R": Key(_as_float, 1.0, help="sample radius"),
        "R_max": Key(_opt(_as_float), None, help="outer radius (default 2R)"),
        "nodes": Key(_as_int, 4096, help="grid intervals in [0, R]"),
        "height": Key(_as_float, 1.0, help="cylinder height"),
        "n_particles": Key(_opt(_as_float), None, help="condensate particle number (default per coupling)"),
        "lambda_L": Key(_opt(_as_float), None, help="London length of the frozen-density check (default 0.1 R)"),
        "mix": Key(_as_float, 1.0, help="SCF mixing"),
        "max_iter": Key(_as_int, 200, help="SCF iteration cap"),
    },
    "extrapolate": {
        "input": Key(_opt(_as_str), None, help="CSV file"),
        "L_column": Key(_as_str, "L", help="column holding L"),
        "value_column": Key(_as_str, "value", help="column holding the values"),
    },
}

# meissner presets: (B_ext, n_particles)
COUPLING_PRESETS = {"weak": (1e-4, 5.0), "strong": (1e-2, 500.0)}

DERIVED = {"v_applied", "subcommand"}


def _parse_text(raw) -> dict:
    if isinstance(raw, dict):
        return dict(raw)
    try:
        doc = yaml.safe_load(raw) if raw and str(raw).strip() else {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from None
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ConfigError("config must be a key-value mapping")
    return doc


def validate_config(raw, subcommand: str | None = None):
    """Normalise a config document or mapping; returns (config, warnings)."""
    doc = _parse_text(raw)
    sub = subcommand or doc.get("subcommand")
    if sub not in SCHEMAS:
        raise ConfigError(f"unknown subcommand {sub!r}")
    if doc.get("subcommand") not in (None, sub):
        raise ConfigError(f"config is for {doc['subcommand']!r}, not {sub!r}")
    schema = {**COMMON, **SCHEMAS[sub]}
    unknown = sorted(set(doc) - set(schema) - DERIVED)
    if unknown:
        raise ConfigError(f"unknown config keys for {sub}: {', '.join(unknown)}")
    cfg = {"subcommand": sub}
    for name, key in schema.items():
        val = doc.get(name, key.default)
        if val is not None:
            try:
                val = key.parse(val)
            except ConfigError:
                raise
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{name}: {exc}") from None
        if key.choices and val not in key.choices:
            raise ConfigError(f"{name} must be one of {key.choices}, got {val!r}")
        cfg[name] = val
    warnings: list[str] = []
    _derive(cfg, sub, warnings)
    if "v_applied" in doc and doc["v_applied"] != cfg.get("v_applied"):
        raise ConfigError("v_applied does not match the prescription of v")
    return cfg, warnings


def _check_positive(cfg, *names):
    for n in names:
        if cfg.get(n) is not None and not cfg[n] > 0:
            raise ConfigError(f"{n} must be positive")


def _derive(cfg: dict, sub: str, warnings: list):
    _check_positive(cfg, "tol", "budget", "workers")
    if "rho" in cfg:
        _check_positive(cfg, "rho")
    if "c" in cfg:
        rho = cfg["rho"]
        if cfg["c"] is None:
            cfg["c"] = 2 * (math.pi * rho) ** 2
        if cfg["d"] is None:
            cfg["d"] = math.pi * rho
        _check_positive(cfg, "c", "d")
    if sub in ("spectrum", "umklapp"):
        N = cfg["N"]
        if N < 1 or N % 2 == 0:
            raise ConfigError(f"Girardeau runs need odd N >= 1, got N={N}")
        if cfg["L"] is None:
            cfg["L"] = N / cfg["rho"]
        _check_positive(cfg, "L")
        lat = MomentumLattice(cfg["L"])
        applied = []
        for v in cfg["v"]:
            spec = prescription(v, lat)
            if spec.v_lattice != v:
                warnings.append(f"v={v} prescribed to lattice velocity {spec.v_lattice}")
            applied.append(spec.v_lattice)
        cfg["v_applied"] = applied
        if sub == "umklapp" and cfg["r_max"] is not None and not 1 <= cfg["r_max"] <= N:
            raise ConfigError("r_max must lie in 1..N")
    if sub == "ness":
        if cfg["j"] < 1:
            raise ConfigError("j must be at least 1")
        if not cfg["L_sweep"] or min(cfg["L_sweep"]) < 1:
            raise ConfigError("L_sweep needs positive multipliers")
        if len(cfg["L_sweep"]) < 3:
            raise ConfigError("L_sweep needs at least 3 sizes for the 1/L fit")
        off = [M for M in cfg["L_sweep"] if abs(cfg["v"] * M - round(cfg["v"] * M)) > 1e-9 * max(1.0, abs(cfg["v"] * M))]
        if off:
            raise ConfigError(f"v={cfg['v']} is not a lattice velocity for L = 2 pi M with M in {off}")
    if sub in ("metastability", "sound"):
        bad = [n for n in cfg["N_values"] if n < 1 or n % 2 == 0]
        if bad:
            raise ConfigError(f"Girardeau runs need odd N, got {bad}")
    if sub == "landau":
        if cfg["k_max"] is None:
            cfg["k_max"] = 4 * math.pi * cfg["rho"]
        _check_positive(cfg, "k_max")
        if cfg["samples"] < 2:
            raise ConfigError("samples must be at least 2")
    if sub == "kms":
        if any(b <= 0 for b in cfg["beta"]):
            raise ConfigError("beta must be positive")
        _check_positive(cfg, "samples")
    if sub == "meissner":
        B0, N0 = COUPLING_PRESETS[cfg["coupling"]]
        if cfg["B_ext"] is None:
            cfg["B_ext"] = B0
        if cfg["n_particles"] is None:
            cfg["n_particles"] = N0
        if cfg["R_max"] is None:
            cfg["R_max"] = 2 * cfg["R"]
        if cfg["lambda_L"] is None:
            cfg["lambda_L"] = 0.1 * cfg["R"]
        _check_positive(cfg, "B_ext", "R", "R_max", "height", "n_particles", "lambda_L", "max_iter")
        if cfg["nodes"] < 2:
            raise ConfigError("nodes must be at least 2")
        if not 0 < cfg["mix"] <= 1:
            raise ConfigError("mix must lie in (0, 1]")
        if cfg["R_max"] < 2 * cfg["R"]:
            raise ConfigError("R_max must be at least 2R")
    if sub == "extrapolate" and cfg["input"] is None:
        raise ConfigError("extrapolate needs an input CSV")


def serialize(cfg: dict) -> str:
    return yaml.safe_dump(dict(cfg), sort_keys=True)
