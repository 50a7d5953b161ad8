"""Generate fixtures/synthetic18.json: a SYNTHETIC 10-barrier, 18-expert study.

The raw survey matrices behind the published AV-barrier results were never
released. This fixture has the same dimensions and barrier codes, with
ratings drawn around a latent structure in which the published base-case
influences are strong. It is test data, not the study's data.

    python scripts/make_synthetic_fixture.py [--seed 2018] [--out fixtures/synthetic18.json]
"""

import argparse
import csv
import json
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
CODES_SCALE = ["N", "VL", "L", "M", "H", "VH"]
BARRIERS = [
    ("RSP", "Reduced security and privacy"),
    ("SIN", "Social inequity"),
    ("OSA", "Obscurity in accountability"),
    ("LCA", "Lack of customer acceptance"),
    ("PLE", "Potential loss of employment"),
    ("INF", "Inadequate infrastructure"),
    ("LOS", "Lack of standards"),
    ("ARC", "Absence of regulation and certification"),
    ("MNC", "Manufacturing cost"),
    ("ITRL", "Induced travel"),
]
GROUPS = [">8y", "5-8y", "3.5-5y"]


def base_edges() -> list[tuple[str, str]]:
    with (ROOT / "fixtures" / "table8_base_edges.csv").open(newline="") as fh:
        return [(r["from"], r["to"]) for r in csv.DictReader(fh)]


def make_study(seed: int = 2018, experts: int = 18) -> dict:
    rng = np.random.default_rng(seed)
    codes = [c for c, _ in BARRIERS]
    idx = {c: i for i, c in enumerate(codes)}
    n = len(codes)
    latent = rng.uniform(0.8, 2.2, size=(n, n))
    for a, b in base_edges():
        latent[idx[a], idx[b]] = rng.uniform(3.6, 4.4)
    latent[idx["PLE"], :] = rng.uniform(0.0, 0.8, size=n)
    latent[:, idx["PLE"]] = rng.uniform(0.0, 0.8, size=n)

    doc = {
        "name": "Synthetic AV-barrier panel (10 barriers, 18 experts; NOT the published survey data)",
        "barriers": [{"code": c, "name": name, "description": ""} for c, name in BARRIERS],
        "experts": [],
        "assessments": {},
    }
    for k in range(experts):
        eid = f"E{k + 1:02d}"
        group = GROUPS[k % len(GROUPS)]
        doc["experts"].append({"id": eid, "group": group, "metadata": {"synthetic": True}})
        noisy = np.clip(np.rint(latent + rng.normal(0.0, 0.7, size=(n, n))), 0, 5).astype(int)
        grid = [[CODES_SCALE[noisy[i, j]] if i != j else "N" for j in range(n)] for i in range(n)]
        doc["assessments"][eid] = grid
    return doc


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=2018)
    ap.add_argument("--out", type=Path, default=ROOT / "fixtures" / "synthetic18.json")
    args = ap.parse_args()
    args.out.write_text(json.dumps(make_study(args.seed), indent=1) + "\n", encoding="utf-8")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
