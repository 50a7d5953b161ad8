"""Result files. All text is UTF-8 with LF endings and fixed-precision numbers."""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np

from .dematel import ProminenceRecord, ipm_points
from .graph import CausalGraph, export_cld, format_number
from .sensitivity import PipelineResult, SensitivityReport

ALL_FORMATS = frozenset({"csv", "md", "json", "dot"})

PROMINENCE_HEADER = ["barrier", "R", "C", "R+C", "R-C", "rank_prominence", "rank_net_influence", "cause_effect"]


def _csv_text(rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _write(path: Path, text: str) -> Path:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def matrix_csv(m: np.ndarray, codes: Sequence[str], precision: int = 4) -> str:
    rows = [["", *codes]]
    rows += [[code, *(format_number(v, precision) for v in m[i])] for i, code in enumerate(codes)]
    return _csv_text(rows)


def read_matrix_csv(path: str | Path) -> tuple[np.ndarray, list[str]]:
    """Read a labelled square matrix as written by ``matrix_csv``."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise ValueError(f"{path}: empty matrix file")
    codes = [c.strip() for c in rows[0][1:]]
    body = rows[1:]
    if len(body) != len(codes) or any(len(r) != len(codes) + 1 for r in body):
        raise ValueError(f"{path}: expected a {len(codes)}x{len(codes)} matrix with row and column labels")
    if [r[0].strip() for r in body] != codes:
        raise ValueError(f"{path}: row labels do not match column labels")
    try:
        m = np.array([[float(v) for v in r[1:]] for r in body])
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
    return m, codes


def prominence_csv(records: Sequence[ProminenceRecord], precision: int = 4) -> str:
    f = lambda v: format_number(v, precision)  # noqa: E731
    rows: list[list[object]] = [PROMINENCE_HEADER]
    for rec in records:
        rows.append([rec.factor_code, f(rec.r), f(rec.c), f(rec.prominence), f(rec.net_influence),
                     rec.prominence_rank, rec.influence_rank, rec.label])
    return _csv_text(rows)


def prominence_markdown(records: Sequence[ProminenceRecord], precision: int = 4) -> str:
    f = lambda v: format_number(v, precision)  # noqa: E731
    lines = [
        "| Barrier | R | C | R+C | R-C | Rank (R+C) | Rank (R-C) | Cause/Effect |",
        "|---|---:|---:|---:|---:|---:|---:|:---:|",
    ]
    for rec in records:
        lines.append(f"| {rec.factor_code} | {f(rec.r)} | {f(rec.c)} | {f(rec.prominence)} | "
                     f"{f(rec.net_influence)} | {rec.prominence_rank} | {rec.influence_rank} | {rec.label} |")
    return "\n".join(lines) + "\n"


def edges_csv(graph: CausalGraph, precision: int = 4) -> str:
    rows: list[list[object]] = [["from", "to", "weight"]]
    rows += [[e.source, e.target, format_number(e.weight, precision)] for e in graph.edges]
    return _csv_text(rows)


def _json(obj: object) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _rounded(v: float, precision: int) -> float:
    return float(format_number(v, precision))


def ipm_json(records: Sequence[ProminenceRecord], precision: int = 4) -> str:
    return _json([
        {"code": p.code, "x": _rounded(p.x, precision), "y": _rounded(p.y, precision), "group": p.group}
        for p in ipm_points(records)
    ])


def loops_json(graph: CausalGraph) -> str:
    return _json([{"id": f"L{k + 1}", "length": len(loop), "nodes": loop} for k, loop in enumerate(graph.loops)])


def report_markdown(result: PipelineResult, precision: int = 4, title: str = "Grey-DEMATEL report",
                    experts: int | None = None) -> str:
    t = result.threshold
    k = experts if experts is not None else len(result.weights)
    out = [f"# {title}", "", f"- factors (n): {len(result.codes)}", f"- experts (K): {k}",
           f"- threshold ({t.kind.value}): {t.describe(precision)}",
           f"- edges at or above threshold: {len(result.graph.edges)}",
           f"- feedback loops: {len(result.graph.loops)}", "",
           "## Prominence and net influence", "", prominence_markdown(result.records, precision).rstrip("\n"), "",
           "## Influences at or above threshold", ""]
    if result.graph.edges:
        out += [f"- {e.source} -> {e.target} ({format_number(e.weight, precision)})" for e in result.graph.edges]
    else:
        out.append("(none)")
    out += ["", "## Feedback loops", ""]
    if result.graph.loops:
        out += [f"- L{i + 1}: {' -> '.join(loop + loop[:1])}" for i, loop in enumerate(result.graph.loops)]
    else:
        out.append("(none)")
    return "\n".join(out) + "\n"


def write_outputs(
    result: PipelineResult,
    out_dir: str | Path,
    formats: Iterable[str] = ALL_FORMATS,
    precision: int = 4,
    experts: int | None = None,
) -> list[Path]:
    """Write every artifact for one pipeline run; returns the paths written."""
    formats = set(formats)
    unknown = formats - ALL_FORMATS
    if unknown:
        raise ValueError(f"unknown output format(s): {', '.join(sorted(unknown))}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if "csv" in formats:
        written.append(_write(out / "total_relation.csv", matrix_csv(result.m, result.codes, precision)))
        written.append(_write(out / "prominence.csv", prominence_csv(result.records, precision)))
        written.append(_write(out / "edges.csv", edges_csv(result.graph, precision)))
    if "md" in formats:
        written.append(_write(out / "prominence.md", prominence_markdown(result.records, precision)))
        written.append(_write(out / "report.md", report_markdown(result, precision, experts=experts)))
    if "json" in formats:
        written.append(_write(out / "ipm.json", ipm_json(result.records, precision)))
        written.append(_write(out / "loops.json", loops_json(result.graph)))
    if "dot" in formats:
        written.append(_write(out / "cld.dot", export_cld(result.graph, precision)))
    return written


def write_graph_outputs(graph: CausalGraph, out_dir: str | Path, precision: int = 4) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return [
        _write(out / "edges.csv", edges_csv(graph, precision)),
        _write(out / "loops.json", loops_json(graph)),
        _write(out / "cld.dot", export_cld(graph, precision)),
    ]


def _rank_table(report: SensitivityReport, attr: str, deltas: dict[str, int]) -> str:
    rows: list[list[object]] = [["barrier", *report.column_names, "max_change"]]
    runs = [report.base, *report.alternates]
    for i, code in enumerate(report.base.codes):
        rows.append([code, *(getattr(run.records[i], attr) for run in runs), deltas[code]])
    return _csv_text(rows)


def write_sensitivity(report: SensitivityReport, out_dir: str | Path, precision: int = 4) -> list[Path]:
    """Tables in the layout of a per-scenario rank and edge-presence comparison."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    edges: list[list[object]] = [["edge", *report.column_names]]
    edges.append(["theta", *(format_number(t, precision) for t in report.thetas)])
    edges.append(["relationships", *(len(r.graph.edges) for r in [report.base, *report.alternates])])
    edges += [[f"{a}->{b}", *flags] for (a, b), flags in report.edge_presence]
    return [
        _write(out / "sensitivity_prominence.csv",
               _rank_table(report, "prominence_rank", report.prominence_rank_deltas)),
        _write(out / "sensitivity_influence.csv",
               _rank_table(report, "influence_rank", report.influence_rank_deltas)),
        _write(out / "sensitivity_edges.csv", _csv_text(edges)),
    ]
