"""Rank and edge stability under expert-group reweighting.

    python scripts/sensitivity_sweep.py fixtures/synthetic18.json fixtures/scenarios_six_illustrative.json
"""

import argparse

from greydematel import load_scenarios, load_study
from greydematel.sensitivity import PipelineConfig, run_sensitivity


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("study")
    ap.add_argument("scenarios")
    ap.add_argument("--threshold", default="mean+sigma")
    args = ap.parse_args()

    study = load_study(args.study)
    report = run_sensitivity(study, load_scenarios(args.scenarios, study), PipelineConfig(args.threshold))
    runs = [report.base, *report.alternates]
    names = report.column_names

    print("prominence ranks")
    print(f"{'':6}" + "".join(f"{n:>8}" for n in names) + f"{'max':>6}")
    for i, code in enumerate(report.base.codes):
        ranks = "".join(f"{r.records[i].prominence_rank:>8}" for r in runs)
        print(f"{code:6}{ranks}{report.prominence_rank_deltas[code]:>6}")

    print("\nedges present")
    print(f"{'theta':10}" + "".join(f"{t:>8.4f}" for t in report.thetas))
    print(f"{'count':10}" + "".join(f"{len(r.graph.edges):>8}" for r in runs))
    stable = sum(all(flags) for _, flags in report.edge_presence)
    print(f"edges present in every run: {stable}")


if __name__ == "__main__":
    main()
