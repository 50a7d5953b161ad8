"""End-to-end pipeline runs and expert-weight sensitivity analysis."""

from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .defuzz import CFCSVariant, defuzzify
from .dematel import (
    ProminenceRecord,
    normalize_direct_matrix,
    prominence_table,
    row_column_sums,
    total_relation_matrix,
)
from .graph import (
    DEFAULT_LOOP_CAP,
    CausalGraph,
    ThresholdPolicy,
    ThresholdSpec,
    compute_threshold,
    enumerate_loops,
    extract_edges,
)
from .grey import GreyMatrix, weighted_average_grey
from .study import Scenario, Study, StudyError


@dataclass(frozen=True)
class PipelineConfig:
    threshold: ThresholdSpec = field(default_factory=ThresholdSpec)
    cfcs: CFCSVariant = CFCSVariant.PAPER
    include_diagonal: bool = True
    loop_cap: int = DEFAULT_LOOP_CAP

    def __post_init__(self):
        object.__setattr__(self, "cfcs", CFCSVariant(self.cfcs))
        if isinstance(self.threshold, str):
            object.__setattr__(self, "threshold", ThresholdSpec.parse(self.threshold))


@dataclass
class PipelineResult:
    codes: list[str]
    weights: np.ndarray
    grey: GreyMatrix
    z: np.ndarray
    x: np.ndarray
    m: np.ndarray
    r: np.ndarray
    c: np.ndarray
    records: list[ProminenceRecord]
    threshold: ThresholdPolicy
    graph: CausalGraph

    @property
    def theta(self) -> float:
        return self.threshold.theta


def scenario_weights(study: Study, scenario: Scenario | None) -> list[float]:
    """Per-expert weights: each group's weight split evenly over its members.

    Experts outside every weighted group get zero weight. ``None`` means
    equal weights for all experts.
    """
    if scenario is None:
        return [1.0] * study.k
    groups = study.groups()
    unknown = sorted(set(scenario.group_weights) - set(groups))
    if unknown:
        raise StudyError(f"scenario {scenario.name!r} references unknown group(s): {', '.join(unknown)}")
    weights = []
    for e in study.experts:
        if e.group is None or e.group not in scenario.group_weights:
            weights.append(0.0)
        else:
            weights.append(scenario.group_weights[e.group] / len(groups[e.group]))
    if not any(w > 0 for w in weights):
        raise StudyError(f"scenario {scenario.name!r} gives every expert zero weight")
    return weights


def run_pipeline(study: Study, scenario: Scenario | None = None, config: PipelineConfig = PipelineConfig()) -> PipelineResult:
    weights = scenario_weights(study, scenario)
    grey = weighted_average_grey(study.grey_matrices(), weights)
    return run_from_grey(grey, study.codes, config, np.asarray(weights))


def run_from_grey(grey: GreyMatrix, codes: Sequence[str], config: PipelineConfig = PipelineConfig(),
                  weights: np.ndarray | None = None) -> PipelineResult:
    z = defuzzify(grey, config.cfcs, config.include_diagonal)
    x = normalize_direct_matrix(z)
    m = total_relation_matrix(x)
    r, c = row_column_sums(m)
    records = prominence_table(r, c, codes)
    policy = compute_threshold(m, config.threshold)
    graph = extract_edges(m, policy.theta, codes)
    graph.loops = enumerate_loops(graph, config.loop_cap)
    return PipelineResult(list(codes), weights if weights is not None else np.ones(grey.n), grey,
                          z, x, m, r, c, records, policy, graph)


def rank_delta_table(
    base: Sequence[ProminenceRecord], alternates: Sequence[Sequence[ProminenceRecord]]
) -> dict[str, tuple[int, int]]:
    """Largest absolute rank change per factor: ``{code: (prominence, influence)}``."""
    base_by_code = {rec.factor_code: rec for rec in base}
    out = {code: (0, 0) for code in base_by_code}
    for k, alt in enumerate(alternates):
        alt_by_code = {rec.factor_code: rec for rec in alt}
        if set(alt_by_code) != set(base_by_code):
            raise ValueError(f"scenario {k + 1} has a different factor set from the base run")
        for code, b in base_by_code.items():
            a = alt_by_code[code]
            dp, di = out[code]
            out[code] = (
                max(dp, abs(a.prominence_rank - b.prominence_rank)),
                max(di, abs(a.influence_rank - b.influence_rank)),
            )
    return out


def edge_presence_matrix(graphs: Sequence[CausalGraph]) -> list[tuple[tuple[str, str], list[int]]]:
    """0/1 presence of every edge in each graph; the first graph is the base.

    Rows list the base graph's edges first, then edges seen only in other
    scenarios, each block in lexicographic order.
    """
    if not graphs:
        return []
    nodes = set(graphs[0].nodes)
    for k, g in enumerate(graphs[1:], start=1):
        if set(g.nodes) != nodes:
            raise ValueError(f"graph {k} has a different node set from the base graph")
    pair_sets = [g.edge_pairs() for g in graphs]
    base = sorted(pair_sets[0])
    others = sorted(set().union(*pair_sets[1:]) - pair_sets[0]) if len(pair_sets) > 1 else []
    return [(edge, [int(edge in ps) for ps in pair_sets]) for edge in base + others]


@dataclass
class SensitivityReport:
    base: PipelineResult
    scenario_names: list[str]
    alternates: list[PipelineResult]
    prominence_rank_deltas: dict[str, int]
    influence_rank_deltas: dict[str, int]
    edge_presence: list[tuple[tuple[str, str], list[int]]]

    @property
    def thetas(self) -> list[float]:
        return [self.base.theta] + [a.theta for a in self.alternates]

    @property
    def column_names(self) -> list[str]:
        return ["base", *self.scenario_names]


def run_sensitivity(
    study: Study,
    scenarios: Sequence[Scenario],
    config: PipelineConfig = PipelineConfig(),
    workers: int = 1,
) -> SensitivityReport:
    """Base run (equal weights) plus one run per scenario, θ recomputed for each."""
    base = run_pipeline(study, None, config)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            alternates = list(pool.map(lambda s: run_pipeline(study, s, config), scenarios))
    else:
        alternates = [run_pipeline(study, s, config) for s in scenarios]
    deltas = rank_delta_table(base.records, [a.records for a in alternates])
    return SensitivityReport(
        base=base,
        scenario_names=[s.name for s in scenarios],
        alternates=alternates,
        prominence_rank_deltas={code: d[0] for code, d in deltas.items()},
        influence_rank_deltas={code: d[1] for code, d in deltas.items()},
        edge_presence=edge_presence_matrix([base.graph] + [a.graph for a in alternates]),
    )
