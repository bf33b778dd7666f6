"""Command line interface.

Three commands, selected with --command:

* analyze: read one configuration (JSON, see model schema), report every
  quantity and both duality relations as JSON.
* verify: sample a randomized (N, d) grid of configurations and check both
  relations on all of them; per-cell worst gaps go to stdout, per-sample
  rows optionally to a CSV file.
* sweep: trace a one-parameter family of configurations as CSV rows.

Exit codes: 0 on success, 1 when a duality relation is violated beyond
--tolerance, 2 for usage or input errors. All randomness is derived from
--seed; the seed, generator name and tool version are echoed into every
artifact, and rerunning any command with the same flags reproduces its
output byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__
from .coherence import l1_coherence
from .discrimination import Ensemble, povm_success_probability, pretty_good_measurement
from .duality import CSV_HEADER, DualityReport, csv_row, duality_report
from .information import accessible_info_lower_bound, holevo_quantity
from .linalg import eig_hermitian
from .model import (
    ConfigFormatError,
    InterferometerConfig,
    build_config,
    config_from_json,
    config_to_json,
    detector_density,
    particle_density,
)
from .sampling import RNG_ALGORITHM, SweepSpec, iter_sweep, rng_stream, sample_config

__all__ = ["FAMILIES", "build_parser", "family_points", "main"]

FAMILIES = ("overlap-scan", "prior-scan", "dimension-scan")


class UsageError(ValueError):
    """Bad flags or bad input data; maps to exit code 2."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathduality",
        description="Coherence vs. which-path information duality checks "
        "for N-path interferometers.",
    )
    parser.add_argument("--command", required=True,
                        choices=("analyze", "verify", "sweep"),
                        help="what to run")
    parser.add_argument("--input", help="JSON configuration file (analyze)")
    parser.add_argument("--output",
                        help="write the artifact here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"),
                        help="artifact format; analyze emits json, sweep and "
                        "verify rows emit csv, verify summaries may use json")
    parser.add_argument("--seed", type=int, default=42,
                        help="root seed for all randomized work (default 42)")
    parser.add_argument("--samples", type=int, default=100,
                        help="configurations per (N, d) cell in verify")
    parser.add_argument("--n-range", default="2:6",
                        help="inclusive path-count range LO:HI for verify")
    parser.add_argument("--d-range", default="auto",
                        help="inclusive detector-dimension range LO:HI for "
                        "verify, or 'auto' for 1..2N per N")
    parser.add_argument("--alpha", type=float, default=1.0,
                        help="Dirichlet concentration for sampled priors")
    parser.add_argument("--prior-mode", choices=("dirichlet", "uniform"),
                        default="dirichlet",
                        help="sampled priors: Dirichlet(alpha) or exactly 1/N")
    parser.add_argument("--tolerance", type=float, default=1e-9,
                        help="gaps below -tolerance count as violations")
    parser.add_argument("--family", choices=FAMILIES,
                        help="sweep family (sweep only)")
    parser.add_argument("--steps", type=int, default=11,
                        help="points in a sweep family")
    parser.add_argument("--n", type=int, default=None,
                        help="single path count: shorthand for --n-range N:N "
                        "in verify, grid size for dimension-scan (default 4)")
    parser.add_argument("--d", type=int, default=None,
                        help="single detector dimension: shorthand for "
                        "--d-range D:D in verify")
    parser.add_argument("--overlap", type=float, default=0.0,
                        help="fixed detector overlap for prior-scan")
    parser.add_argument("--restarts", type=int, default=8,
                        help="accessible-information searches in analyze")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        if args.command == "analyze":
            return _run_analyze(args)
        if args.command == "verify":
            return _run_verify(args)
        return _run_sweep(args)
    except UsageError as exc:
        print(f"pathduality: error: {exc}", file=sys.stderr)
        return 2


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def _load_config(path: str) -> InterferometerConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(
            f"{path}: JSON parse error at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    try:
        return config_from_json(data)
    except ConfigFormatError as exc:
        raise UsageError(f"{path}: {exc}") from exc
    except ValueError as exc:
        raise UsageError(f"{path}: invalid configuration: {exc}") from exc


def _parse_range(text: str, flag: str) -> tuple[int, int]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise UsageError(f"{flag} expects LO:HI or a single integer, got {text!r}")
    return lo, hi


def _run_analyze(args: argparse.Namespace) -> int:
    if not args.input:
        raise UsageError("analyze requires --input")
    if args.format not in (None, "json"):
        raise UsageError("analyze emits JSON; use --format json")
    config = _load_config(args.input)

    rho = particle_density(config)
    rho_det = detector_density(config)
    ensemble = Ensemble.from_config(config)
    pgm = pretty_good_measurement(ensemble)
    report = duality_report(config, pgm)
    accessible = accessible_info_lower_bound(
        config, restarts=args.restarts, seed=args.seed
    )

    payload: dict[str, Any] = {
        "tool_version": __version__,
        "rng_algorithm": RNG_ALGORITHM,
        "seed": args.seed,
        "tolerance": args.tolerance,
        "config": config_to_json(config),
        "n_paths": config.n_paths,
        "detector_dim": config.detector_dim,
        "particle_spectrum": [float(w) for w in eig_hermitian(rho.matrix).eigenvalues],
        "detector_spectrum": [float(w) for w in eig_hermitian(rho_det.matrix).eigenvalues],
        "l1_coherence": l1_coherence(rho),
        "pgm_success_probability": povm_success_probability(pgm, ensemble),
        "holevo_bound": holevo_quantity(config),
        "accessible_info_lower_bound": accessible,
        "l1_duality": _side(report, ("x", "ps_bound", "lhs_l1", "rhs_l1", "gap_l1")),
        "entropic_duality": _side(report, ("c_rel", "mi", "h_priors", "gap_entropic")),
    }
    violated = _is_violation(report, args.tolerance)
    payload["status"] = "violation" if violated else "ok"
    _write_text(args.output, json.dumps(payload, indent=2) + "\n")
    return 1 if violated else 0


def _side(report: DualityReport, names: Iterable[str]) -> dict[str, float]:
    return {name: getattr(report, name) for name in names}


def _is_violation(report: DualityReport, tolerance: float) -> bool:
    gaps = [g for g in (report.gap_l1, report.gap_entropic) if g is not None]
    return any(g < -tolerance for g in gaps)


def _run_verify(args: argparse.Namespace) -> int:
    if args.samples < 1:
        raise UsageError(f"--samples must be >= 1, got {args.samples}")
    n_range = (args.n, args.n) if args.n is not None \
        else _parse_range(args.n_range, "--n-range")
    if args.d is not None:
        d_range = (args.d, args.d)
    elif args.d_range == "auto":
        d_range = None
    else:
        d_range = _parse_range(args.d_range, "--d-range")
    try:
        spec = SweepSpec(
            n_paths=n_range, detector_dims=d_range, samples=args.samples,
            seed=args.seed, prior_mode=args.prior_mode, alpha=args.alpha,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    d_desc = "auto" if d_range is None else f"{d_range[0]}:{d_range[1]}"
    header = (
        f"# pathduality verify seed={args.seed} rng={RNG_ALGORITHM} "
        f"version={__version__}\n"
        f"# grid n={n_range[0]}:{n_range[1]} d={d_desc} "
        f"samples={args.samples} prior_mode={args.prior_mode} "
        f"alpha={args.alpha:g} tolerance={args.tolerance:g}\n"
    )
    print(header, end="")

    rows: list[str] = []
    cell_stats: dict[tuple[int, int], tuple[float, float]] = {}
    worst_l1 = (np.inf, None)
    worst_ent = (np.inf, None)
    for sample in iter_sweep(spec):
        povm = pretty_good_measurement(Ensemble.from_config(sample.config))
        report = duality_report(sample.config, povm)
        assert report.gap_l1 is not None and report.gap_entropic is not None
        key = (sample.n, sample.d)
        lo_l1, lo_ent = cell_stats.get(key, (np.inf, np.inf))
        cell_stats[key] = (min(lo_l1, report.gap_l1), min(lo_ent, report.gap_entropic))
        if report.gap_l1 < worst_l1[0]:
            worst_l1 = (report.gap_l1, sample.config)
        if report.gap_entropic < worst_ent[0]:
            worst_ent = (report.gap_entropic, sample.config)
        if args.output:
            rows.append(csv_row(f"N{sample.n}/d{sample.d}/{sample.sample_index}", report))

    for (n, d), (gap_l1, gap_ent) in sorted(cell_stats.items()):
        print(f"N={n} d={d} worst_gap_l1={gap_l1:.3e} worst_gap_entropic={gap_ent:.3e}")
    print(
        f"total_configs={spec.total_configs} "
        f"worst_gap_l1={worst_l1[0]:.3e} worst_gap_entropic={worst_ent[0]:.3e}"
    )

    ok = worst_l1[0] >= -args.tolerance and worst_ent[0] >= -args.tolerance
    if args.output:
        if args.format == "json":
            summary = {
                "tool_version": __version__,
                "rng_algorithm": RNG_ALGORITHM,
                "seed": args.seed,
                "tolerance": args.tolerance,
                "grid": {"n": list(n_range), "d": d_desc,
                         "samples": args.samples,
                         "prior_mode": args.prior_mode, "alpha": args.alpha},
                "cells": [
                    {"n": n, "d": d, "worst_gap_l1": g1, "worst_gap_entropic": g2}
                    for (n, d), (g1, g2) in sorted(cell_stats.items())
                ],
                "worst_gap_l1": worst_l1[0],
                "worst_gap_entropic": worst_ent[0],
                "status": "ok" if ok else "violation",
            }
            _write_text(args.output, json.dumps(summary, indent=2) + "\n")
        else:
            _write_text(args.output, header + CSV_HEADER + "\n" + "\n".join(rows) + "\n")

    if not ok:
        offender = worst_l1[1] if worst_l1[0] <= worst_ent[0] else worst_ent[1]
        print("FAIL: duality violation; offending configuration follows")
        print(json.dumps(config_to_json(offender)))
        return 1
    print("PASS")
    return 0


def family_points(
    family: str,
    steps: int,
    seed: int,
    n: int = 4,
    overlap: float = 0.0,
    prior_mode: str = "dirichlet",
    alpha: float = 1.0,
) -> list[tuple[float, InterferometerConfig]]:
    """The (parameter, configuration) points of a sweep family.

    overlap-scan: two equiprobable paths, detector overlap running 0 -> 1.
    prior-scan: two paths with fixed detector overlap, first prior 0 -> 1.
    dimension-scan: sampled N-path configurations at d = 1 .. steps.
    """
    points: list[tuple[float, InterferometerConfig]] = []
    if family in ("overlap-scan", "prior-scan"):
        if steps < 2:
            raise UsageError(f"{family} needs --steps >= 2, got {steps}")
        if family == "prior-scan" and not 0.0 <= overlap <= 1.0:
            raise UsageError(f"--overlap must lie in [0, 1], got {overlap}")
        for k in range(steps):
            t = k / (steps - 1)
            if family == "overlap-scan":
                probs, c = [0.5, 0.5], t
            else:
                probs, c = [t, 1.0 - t], overlap
            states = [[1.0, 0.0], [c, np.sqrt(max(1.0 - c * c, 0.0))]]
            points.append((t, build_config(probs, states)))
    elif family == "dimension-scan":
        if steps < 1:
            raise UsageError(f"dimension-scan needs --steps >= 1, got {steps}")
        if n < 2:
            raise UsageError(f"--n must be >= 2, got {n}")
        for d in range(1, steps + 1):
            rng = rng_stream(seed, d)
            config = sample_config(n, d, rng, prior_mode=prior_mode, alpha=alpha)
            points.append((float(d), config))
    else:
        raise UsageError(f"unknown family {family!r}")
    return points


def _run_sweep(args: argparse.Namespace) -> int:
    if not args.family:
        raise UsageError("sweep requires --family")
    if args.format not in (None, "csv"):
        raise UsageError("sweep emits CSV; use --format csv")
    points = family_points(
        args.family, steps=args.steps, seed=args.seed,
        n=args.n if args.n is not None else 4,
        overlap=args.overlap, prior_mode=args.prior_mode, alpha=args.alpha,
    )
    lines = [
        f"# pathduality sweep family={args.family} steps={args.steps} "
        f"seed={args.seed} rng={RNG_ALGORITHM} version={__version__}",
        CSV_HEADER,
    ]
    for param, config in points:
        povm = pretty_good_measurement(Ensemble.from_config(config))
        lines.append(csv_row(param, duality_report(config, povm)))
    _write_text(args.output, "\n".join(lines) + "\n")
    return 0
