"""The two duality relations and their reports.

For an N-path configuration with success bound P_s, normalized coherence X,
relative-entropy coherence C_rel, measured mutual information I and prior
entropy H:

    quadratic:  (P_s - 1/N)^2 + X^2  <=  (1 - 1/N)^2
    entropic:   C_rel + I            <=  H

Reports carry both sides and the slack (gap >= 0 means the relation holds),
plus serialization helpers for the CLI. The quadratic relation also comes
with a step-by-step chain check that exposes where its slack lives.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .coherence import normalized_coherence, rel_ent_coherence, shannon_entropy
from .discrimination import Ensemble, Povm, helstrom_matrix, success_upper_bound
from .information import joint_distribution, mutual_information
from .linalg import trace_norm
from .model import InterferometerConfig, particle_density

__all__ = [
    "CSV_HEADER",
    "DualityReport",
    "SchwarzChainReport",
    "csv_row",
    "duality_report",
    "entropic_duality_report",
    "l1_duality_report",
    "schwarz_chain_check",
]

#: Column order of every CSV row this package emits.
CSV_HEADER = "param,x,ps_bound,lhs_l1,rhs_l1,gap_l1,c_rel,mi,h_priors,gap_entropic"


@dataclass(frozen=True)
class DualityReport:
    """Both sides of the duality relations for one configuration.

    The quadratic-side fields (x, ps_bound, lhs_l1, rhs_l1, gap_l1) and the
    entropic-side fields (c_rel, mi, h_priors, gap_entropic) are filled by
    their respective builders and left None by the other, so a report always
    says which relation it actually evaluated.
    """

    n_paths: int
    x: float | None = None
    ps_bound: float | None = None
    lhs_l1: float | None = None
    rhs_l1: float | None = None
    gap_l1: float | None = None
    c_rel: float | None = None
    mi: float | None = None
    h_priors: float | None = None
    gap_entropic: float | None = None

    def to_json_dict(self) -> dict[str, Any]:
        """Field name to value, omitting the sides that were not evaluated."""
        out: dict[str, Any] = {"n_paths": self.n_paths}
        for name in ("x", "ps_bound", "lhs_l1", "rhs_l1", "gap_l1",
                     "c_rel", "mi", "h_priors", "gap_entropic"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out


@dataclass(frozen=True)
class SchwarzChainReport:
    """The quadratic relation split into its two inequality links.

    lhs is (P_s - 1/N)^2 + X^2 with the success bound standing in for P_s.
    pair_term_sum is the middle quantity: 1/N^2 times the double sum, over
    ordered pairs (i, j) and (k, l), of the scalar products of the pair
    vectors ( ||Lambda||_1 / 2, sqrt(p_i p_j) |overlap_ij| ). schwarz_bound
    is (1 - 1/N)^2, which dominates the middle by Cauchy-Schwarz because
    every pair vector has length (p_i + p_j) / 2.
    """

    lhs: float
    pair_term_sum: float
    schwarz_bound: float

    @property
    def slack_pair(self) -> float:
        return self.pair_term_sum - self.lhs

    @property
    def slack_schwarz(self) -> float:
        return self.schwarz_bound - self.pair_term_sum


def l1_duality_report(config: InterferometerConfig) -> DualityReport:
    """Evaluate the quadratic relation for one configuration."""
    n = config.n_paths
    x = normalized_coherence(particle_density(config))
    ps = success_upper_bound(Ensemble.from_config(config))
    lhs = (ps - 1.0 / n) ** 2 + x * x
    rhs = (1.0 - 1.0 / n) ** 2
    return DualityReport(
        n_paths=n, x=x, ps_bound=ps, lhs_l1=lhs, rhs_l1=rhs, gap_l1=rhs - lhs
    )


def entropic_duality_report(config: InterferometerConfig, povm: Povm) -> DualityReport:
    """Evaluate the entropic relation for one configuration and measurement."""
    rho = particle_density(config)
    c_rel = rel_ent_coherence(rho)
    mi = mutual_information(joint_distribution(povm, config))
    h = shannon_entropy(config.priors)
    return DualityReport(
        n_paths=config.n_paths, c_rel=c_rel, mi=mi, h_priors=h,
        gap_entropic=h - c_rel - mi,
    )


def duality_report(config: InterferometerConfig, povm: Povm) -> DualityReport:
    """Evaluate both relations; the entropic side uses the given POVM."""
    left = l1_duality_report(config)
    right = entropic_duality_report(config, povm)
    return DualityReport(
        n_paths=config.n_paths,
        x=left.x, ps_bound=left.ps_bound, lhs_l1=left.lhs_l1,
        rhs_l1=left.rhs_l1, gap_l1=left.gap_l1,
        c_rel=right.c_rel, mi=right.mi, h_priors=right.h_priors,
        gap_entropic=right.gap_entropic,
    )


def schwarz_chain_check(config: InterferometerConfig) -> SchwarzChainReport:
    """Evaluate the quadratic relation one inequality link at a time.

    The chain is lhs <= pair_term_sum <= schwarz_bound. The first link
    holds term by term (each measurement outcome extracts at most the
    positive part of its Helstrom matrix); the second is Cauchy-Schwarz on
    the pair vectors and carries essentially all of the slack.
    """
    n = config.n_paths
    probs = config.priors.probs
    ensemble = Ensemble.from_config(config)
    gram_abs = np.abs(config.detectors.overlap_gram())

    half_norms = np.zeros((n, n))
    cross = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            half_norms[i, j] = trace_norm(helstrom_matrix(ensemble, i, j)) / 2.0
            cross[i, j] = np.sqrt(probs[i] * probs[j]) * gram_abs[i, j]
    # The double sum over pairs of ordered pairs factorizes into the two
    # squared totals because each term is a plain product.
    pair_term_sum = (half_norms.sum() ** 2 + cross.sum() ** 2) / n**2

    report = l1_duality_report(config)
    assert report.lhs_l1 is not None
    return SchwarzChainReport(
        lhs=report.lhs_l1,
        pair_term_sum=pair_term_sum,
        schwarz_bound=(1.0 - 1.0 / n) ** 2,
    )


def _fmt(value: float | str) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def csv_row(param: float | str, report: DualityReport) -> str:
    """One CSV line in CSV_HEADER order; needs a report with both sides."""
    fields = (report.x, report.ps_bound, report.lhs_l1, report.rhs_l1,
              report.gap_l1, report.c_rel, report.mi, report.h_priors,
              report.gap_entropic)
    if any(f is None for f in fields):
        raise ValueError("csv_row needs a combined report with both sides filled")
    return ",".join([_fmt(param)] + [_fmt(f) for f in fields])
