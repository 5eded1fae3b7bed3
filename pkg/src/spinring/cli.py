"""Command line front end.

Three subcommands: ``spectrum`` tabulates clustered levels, ``concurrence``
tabulates two-spin concurrence for every (level, separation) cell, and
``report`` runs a full sweep and emits one JSON document with counts,
censuses, crossing events, entanglement boundaries, and the
nearest-neighbor fit.

Exit codes: 0 on success, 2 on usage or configuration errors, 3 when the
numerics fail.
"""

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .model import INFINITY, RingSizeError, RingSpec, Variant
from .spectra import (CLUSTER_TOLERANCE_DEFAULT, DecompositionCache,
                      EigensolverError, IllConditionedError, diagonalize,
                      uniform_state)
from .entanglement import (STRUCTURE_TOLERANCE_DEFAULT, StructureError,
                           meyer_wallach, oliveira_global)
from .analysis import (CONCURRENCE_THRESHOLD_DEFAULT, RESOLUTION_DEFAULT,
                       InsufficientDataError, SweepError, _point_records,
                       all_crossings, default_alpha_grid,
                       entangled_projector_census, entanglement_boundaries,
                       find_last_crossing, nn_linear_fit, separation_gaps,
                       sweep)
from .serialize import (SCHEMA_VERSION, emit_csv, emit_json, parse_real,
                        write_output)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

CACHE_DIR_ENV = "SPINRING_CACHE_DIR"


class UsageError(Exception):
    """Bad flags or config; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings for one invocation, after merging config file and
    flags (flags win)."""

    command: str
    n_sites: int
    alphas: tuple
    variant: Variant
    cluster_tolerance: float
    structure_tolerance: float
    concurrence_threshold: float
    resolution: float
    output_format: str
    output_path: str | None
    cache_dir: str | None
    oliveira_inner_over_n: bool


def _parse_alpha(text: str) -> float:
    try:
        value = parse_real(text)
    except ValueError as exc:
        raise UsageError(f"bad alpha {text!r}") from exc
    if math.isnan(value) or value < 0:
        raise UsageError(f"alpha must be nonnegative, got {text!r}")
    return value


def _parse_grid(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise UsageError(f"grid must be MIN:MAX:COUNT[:linear|log], got {text!r}")
    scale = parts[3] if len(parts) == 4 else "log"
    if scale not in ("linear", "log"):
        raise UsageError(f"grid scale must be linear or log, got {scale!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}") from exc
    if not (0 <= lo < hi) or count < 2 or math.isinf(hi):
        raise UsageError(f"grid needs 0 <= MIN < MAX finite and COUNT >= 2, got {text!r}")
    if scale == "log":
        if lo <= 0:
            raise UsageError("log grid needs MIN > 0")
        return tuple(np.logspace(math.log10(lo), math.log10(hi), count).tolist())
    return tuple(np.linspace(lo, hi, count).tolist())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinring",
        description="Exact spectra and two-spin entanglement of the "
                    "long-range Heisenberg ring.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE",
                        help="JSON config file; explicit flags override it")
    common.add_argument("--n", type=int, default=None, metavar="SITES",
                        help="number of ring sites")
    common.add_argument("--alpha", action="append", default=None, metavar="A",
                        help="coupling exponent; repeatable; 'inf' allowed")
    common.add_argument("--grid", default=None, metavar="MIN:MAX:COUNT[:SCALE]",
                        help="alpha grid, SCALE is linear or log (default log)")
    common.add_argument("--extra", action="append", default=None, metavar="A",
                        help="extra grid point; repeatable; 'inf' allowed")
    common.add_argument("--variant", default=None,
                        choices=["standard", "shifted", "ferromagnetic"])
    common.add_argument("--cluster-tolerance", type=float, default=None)
    common.add_argument("--structure-tolerance", type=float, default=None)
    common.add_argument("--concurrence-threshold", type=float, default=None)
    common.add_argument("--resolution", type=float, default=None,
                        help="bisection bracket width for located events")
    common.add_argument("--format", default=None, choices=["csv", "json"])
    common.add_argument("--output", default=None, metavar="PATH",
                        help="output file (written atomically); default stdout")
    common.add_argument("--cache-dir", default=None, metavar="DIR",
                        help=f"decomposition cache; also {CACHE_DIR_ENV}")
    common.add_argument("--oliveira-normalization", default=None,
                        choices=["as-printed", "over-n"])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common],
                   help="clustered level table per alpha")
    sub.add_parser("concurrence", parents=[common],
                   help="two-spin concurrence table per alpha")
    sub.add_parser("report", parents=[common],
                   help="full sweep report as one JSON document")
    return parser


def _load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config {path!r} must hold a JSON object")
    return data


_CONFIG_KEYS = {"n", "alpha", "grid", "extra", "variant", "cluster_tolerance",
                "structure_tolerance", "concurrence_threshold", "resolution",
                "format", "output", "cache_dir", "oliveira_normalization"}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge config file values under explicit flags and fill defaults."""
    file_values = _load_config_file(args.config) if args.config else {}
    unknown = set(file_values) - _CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")

    def pick(flag_value, key, default=None):
        if flag_value is not None:
            return flag_value
        return file_values.get(key, default)

    n_sites = pick(args.n, "n")
    if n_sites is None:
        raise UsageError("--n is required (flag or config)")
    n_sites = int(n_sites)
    if n_sites < 2:
        raise UsageError(f"--n must be at least 2, got {n_sites}")

    alphas = []
    alpha_values = pick(args.alpha, "alpha")
    if alpha_values is not None:
        if not isinstance(alpha_values, list):
            raise UsageError("config key 'alpha' must be a list")
        alphas.extend(_parse_alpha(str(a)) for a in alpha_values)
    grid_text = pick(args.grid, "grid")
    if grid_text is not None:
        alphas.extend(_parse_grid(str(grid_text)))
    extra_values = pick(args.extra, "extra")
    if extra_values is not None:
        if not isinstance(extra_values, list):
            raise UsageError("config key 'extra' must be a list")
        alphas.extend(_parse_alpha(str(a)) for a in extra_values)
    if not alphas:
        if args.command == "report":
            alphas = list(default_alpha_grid())
        else:
            raise UsageError("provide at least one alpha via --alpha or --grid")
    alphas = tuple(sorted(set(alphas)))

    output_format = pick(args.format, "format")
    if output_format is None:
        output_format = "json" if args.command == "report" else "csv"
    if args.command == "report" and output_format != "json":
        raise UsageError("report output is a JSON document; use --format json")

    variant_text = pick(args.variant, "variant", "standard")
    try:
        variant = Variant.parse(variant_text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    cache_dir = pick(args.cache_dir, "cache_dir")
    if cache_dir is None:
        cache_dir = os.environ.get(CACHE_DIR_ENV) or None

    oliveira = pick(args.oliveira_normalization, "oliveira_normalization",
                    "as-printed")
    if oliveira not in ("as-printed", "over-n"):
        raise UsageError(f"oliveira_normalization must be as-printed or over-n, "
                         f"got {oliveira!r}")

    def positive(flag_value, key, default):
        value = pick(flag_value, key, default)
        value = float(value)
        if not value > 0 or math.isnan(value):
            raise UsageError(f"{key} must be positive, got {value!r}")
        return value

    return RunConfig(
        command=args.command,
        n_sites=n_sites,
        alphas=alphas,
        variant=variant,
        cluster_tolerance=positive(args.cluster_tolerance, "cluster_tolerance",
                                   CLUSTER_TOLERANCE_DEFAULT),
        structure_tolerance=positive(args.structure_tolerance,
                                     "structure_tolerance",
                                     STRUCTURE_TOLERANCE_DEFAULT),
        concurrence_threshold=positive(args.concurrence_threshold,
                                       "concurrence_threshold",
                                       CONCURRENCE_THRESHOLD_DEFAULT),
        resolution=positive(args.resolution, "resolution", RESOLUTION_DEFAULT),
        output_format=str(output_format),
        output_path=pick(args.output, "output"),
        cache_dir=cache_dir,
        oliveira_inner_over_n=(oliveira == "over-n"),
    )


def _decomposition(config: RunConfig, alpha: float,
                   cache: DecompositionCache | None):
    spec = RingSpec(config.n_sites, alpha, config.variant)
    if cache is not None:
        return cache.get(spec, config.cluster_tolerance)
    return diagonalize(spec, cluster_tolerance=config.cluster_tolerance)


def _make_cache(config: RunConfig) -> DecompositionCache | None:
    return DecompositionCache(config.cache_dir) if config.cache_dir else None


def cmd_spectrum(config: RunConfig) -> str:
    """Level table: one row per (alpha, level), ordered by (alpha, energy)."""
    cache = _make_cache(config)
    rows = []
    for alpha in config.alphas:
        dec = _decomposition(config, alpha, cache)
        for li, level in enumerate(dec.levels):
            rows.append((alpha, li, level.energy, int(level.multiplicity)))
    header = ("alpha", "level_index", "energy", "multiplicity")
    if config.output_format == "csv":
        return emit_csv(header, rows)
    return emit_json({
        "schema_version": SCHEMA_VERSION,
        "command": "spectrum",
        "n_sites": config.n_sites,
        "variant": config.variant.value,
        "cluster_tolerance": config.cluster_tolerance,
        "rows": [dict(zip(header, row)) for row in rows],
    })


def cmd_concurrence(config: RunConfig) -> str:
    """Concurrence table: one row per (alpha, level, separation)."""
    cache = _make_cache(config)
    rows = []
    for alpha in config.alphas:
        dec = _decomposition(config, alpha, cache)
        for record in _point_records(dec, alpha, config.structure_tolerance):
            rows.append((record.alpha, record.level_index, record.level_energy,
                         int(record.multiplicity), record.separation,
                         record.concurrence, record.a, record.b, record.c,
                         record.structure_residual))
    header = ("alpha", "level_index", "energy", "multiplicity", "separation",
              "concurrence", "a", "b", "c", "structure_residual")
    if config.output_format == "csv":
        return emit_csv(header, rows)
    return emit_json({
        "schema_version": SCHEMA_VERSION,
        "command": "concurrence",
        "n_sites": config.n_sites,
        "variant": config.variant.value,
        "cluster_tolerance": config.cluster_tolerance,
        "structure_tolerance": config.structure_tolerance,
        "rows": [dict(zip(header, row)) for row in rows],
    })


def _event_doc(event) -> dict:
    doc = {
        "alpha": event.alpha,
        "bracket": [event.bracket[0], event.bracket[1]],
        "kind": event.kind,
        "curve_indices": list(event.curve_indices),
    }
    if event.separation is not None:
        doc["separation"] = event.separation
        doc["crossing_coincident"] = event.crossing_coincident
    return doc


def cmd_report(config: RunConfig) -> str:
    """Sweep the grid and assemble the full JSON report."""
    cache = _make_cache(config)
    result = sweep(config.n_sites, config.alphas, config.variant,
                   cluster_tolerance=config.cluster_tolerance,
                   structure_tolerance=config.structure_tolerance,
                   concurrence_threshold=config.concurrence_threshold,
                   cache=cache)

    backbone = [int(b) for b in result.backbone]
    rep_index = min(backbone, key=lambda i: abs(result.points[i].alpha - 1.0))
    rep_alpha = result.points[rep_index].alpha
    rep_point = result.points[rep_index]

    histogram: dict = {}
    for m in rep_point.multiplicities:
        histogram[int(m)] = histogram.get(int(m), 0) + 1

    n_seps = max(config.n_sites // 2, 1)
    level_census = {sep: 0 for sep in range(1, n_seps + 1)}
    for record in rep_point.records:
        if record.concurrence > config.concurrence_threshold:
            level_census[record.separation] += 1

    census = entangled_projector_census(result)
    census_doc = {
        "n_curves": census.n_curves,
        "n_entangled": census.n_entangled,
        "n_single_distance": len(census.single_distance),
        "n_multi_distance": len(census.multi_distance),
        "one_dim_curves": list(census.one_dim_indices),
        "one_dim_entangled": list(census.one_dim_entangled),
        "entangled": [{
            "curve_index": e.curve_index,
            "multiplicity": e.multiplicity,
            "distances": list(e.distances),
            "spans": {str(sep): [lo, hi] for sep, (lo, hi) in sorted(e.spans.items())},
        } for e in census.entangled],
    }

    crossings = all_crossings(result, config.resolution)
    last = find_last_crossing(config.n_sites, max(result.points[i].alpha for i in backbone),
                              config.resolution, variant=config.variant,
                              sweep_result=result)

    boundaries = []
    for entry in census.entangled:
        curve = result.curves[entry.curve_index]
        for sep in entry.distances:
            boundaries.extend(entanglement_boundaries(
                curve, sep, config.resolution,
                threshold=config.concurrence_threshold))
    boundaries.sort(key=lambda e: (e.alpha, e.curve_indices))

    gaps_doc = {}
    for sep in range(1, n_seps + 1):
        gaps = separation_gaps(result, sep, config.resolution,
                               threshold=config.concurrence_threshold)
        if gaps:
            gaps_doc[str(sep)] = [{"offset": _event_doc(off), "onset": _event_doc(on)}
                                  for off, on in gaps]

    max_sep_onsets = [e for e in boundaries
                      if e.kind == "onset" and e.separation == n_seps]
    max_distance_onset = min(max_sep_onsets, key=lambda e: e.alpha, default=None)

    try:
        fit = nn_linear_fit(config.n_sites,
                            threshold=config.concurrence_threshold,
                            cluster_tolerance=config.cluster_tolerance,
                            variant=config.variant)
        fit_doc = {"alpha": INFINITY, "a": fit.a, "b": fit.b,
                   "max_residual": fit.max_residual, "n_points": fit.n_points,
                   "max_concurrence": fit.max_concurrence}
    except InsufficientDataError:
        fit_doc = None

    rep_dec = _decomposition(config, rep_alpha, cache)
    measures = []
    for li, level in enumerate(rep_dec.levels):
        state = uniform_state(level, rep_dec)
        measures.append({
            "level_index": li,
            "multiplicity": int(level.multiplicity),
            "meyer_wallach": meyer_wallach(state),
            "oliveira": oliveira_global(state, config.oliveira_inner_over_n),
        })

    return emit_json({
        "schema_version": SCHEMA_VERSION,
        "command": "report",
        "n_sites": config.n_sites,
        "variant": config.variant.value,
        "settings": {
            "cluster_tolerance": config.cluster_tolerance,
            "structure_tolerance": config.structure_tolerance,
            "concurrence_threshold": config.concurrence_threshold,
            "resolution": config.resolution,
            "oliveira_normalization": ("over-n" if config.oliveira_inner_over_n
                                       else "as-printed"),
        },
        "alpha_grid": [p.alpha for p in result.points],
        "generic_level_count": result.generic_count,
        "counts_per_alpha": [{"alpha": p.alpha, "count": p.count}
                             for p in result.points],
        "representative_alpha": rep_alpha,
        "projector_dimension_histogram": {str(k): v for k, v in sorted(histogram.items())},
        "entangled_level_census": {str(k): v for k, v in level_census.items()},
        "entangled_projector_census": census_doc,
        "crossings": [_event_doc(e) for e in crossings],
        "last_crossing": _event_doc(last) if last is not None else None,
        "entanglement_boundaries": [_event_doc(e) for e in boundaries],
        "separation_gaps": gaps_doc,
        "max_distance_onset": (_event_doc(max_distance_onset)
                               if max_distance_onset is not None else None),
        "nn_linear_fit": fit_doc,
        "global_measures": measures,
        "sweep_warnings": list(result.warnings),
    })


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "concurrence": cmd_concurrence,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        text = _COMMANDS[config.command](config)
        write_output(text, config.output_path)
    except (UsageError, RingSizeError) as exc:
        print(f"spinring: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SweepError, EigensolverError, IllConditionedError, StructureError,
            np.linalg.LinAlgError) as exc:
        print(f"spinring: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"spinring: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
