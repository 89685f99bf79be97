"""``nesslab`` command line.

Every subcommand accepts ``--config FILE`` (YAML) plus one flag per config
key; flags override the file. ``nesslab rerun manifest.json`` replays a
previous run from its manifest.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import yaml

from . import __version__
from .config import COMMON, SCHEMAS, ConfigError, validate_config
from .enumeration import BudgetExceeded, EmptyWindowError
from .fitting import DegenerateFitError
from .io import load_manifest, resolve_output_dir, write_manifest, write_outputs
from .kms import PreconditionError
from .meissner import EigensolverError, ScfNotConverged
from .runners import RUNNERS

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_NONCONVERGENCE = 4

log = logging.getLogger("nesslab")


def _flag_names(key: str) -> list[str]:
    dashed = "--" + key.replace("_", "-")
    plain = "--" + key
    return [dashed] if dashed == plain else [dashed, plain]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nesslab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"nesslab {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, schema in SCHEMAS.items():
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="YAML config file")
        p.add_argument("--out", help="output directory")
        p.add_argument("-q", "--quiet", action="store_true")
        for key, spec in {**COMMON, **schema}.items():
            if key == "output_dir":
                continue
            p.add_argument(*_flag_names(key), dest=key, default=None, help=spec.help)
    r = sub.add_parser("rerun", help="replay a run from its manifest")
    r.add_argument("manifest")
    r.add_argument("--out", help="output directory (default: the manifest's directory)")
    r.add_argument("-q", "--quiet", action="store_true")
    return parser


def _load_config(args) -> tuple[dict, list[str]]:
    doc: dict = {}
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        try:
            doc = yaml.safe_load(text) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"config is not valid YAML: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config must be a key-value mapping")
        # values derived from v are recomputed when v changes on the command line
        if getattr(args, "v", None) is not None:
            doc.pop("v_applied", None)
    schema = {**COMMON, **SCHEMAS[args.subcommand]}
    for key in schema:
        val = getattr(args, key, None)
        if val is not None and key != "output_dir":
            doc[key] = val
    return validate_config(doc, args.subcommand)


def execute(subcommand: str, cfg: dict, outdir: Path) -> Path:
    t0 = time.perf_counter()
    tables, reports = RUNNERS[subcommand](cfg)
    outputs = write_outputs(outdir, tables, reports)
    return write_manifest(outdir, subcommand, cfg, outputs, time.perf_counter() - t0)


def _dispatch(args) -> int:
    if args.subcommand == "rerun":
        try:
            manifest = load_manifest(args.manifest)
            cfg, warnings = validate_config(manifest["config"], manifest["subcommand"])
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"unusable manifest: {exc}") from None
        outdir = Path(args.out) if args.out else Path(args.manifest).resolve().parent
    else:
        cfg, warnings = _load_config(args)
        outdir = resolve_output_dir(args.out, cfg.get("output_dir"), args.subcommand)
    for w in warnings:
        log.warning(w)
    path = execute(cfg["subcommand"], cfg, outdir)
    log.info("wrote %s", path)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="nesslab: %(message)s")
    try:
        return _dispatch(args)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except BudgetExceeded as exc:
        log.error("budget exceeded: %s", exc)
        return EXIT_BUDGET
    except ScfNotConverged as exc:
        log.error("%s; residuals: %s", exc, ", ".join(f"{r:.3e}" for r in exc.history[-5:]))
        return EXIT_NONCONVERGENCE
    except EigensolverError as exc:
        log.error("solver failure: %s", exc)
        return EXIT_NONCONVERGENCE
    except (EmptyWindowError, DegenerateFitError, PreconditionError, KeyError, OSError, ValueError) as exc:
        log.error("invalid input: %s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
