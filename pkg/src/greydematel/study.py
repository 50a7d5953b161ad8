"""Study documents: loading, validation, and round-trip writing.

A study is a JSON document (schema in ``data/study.schema.json``) or a CSV
bundle directory::

    barriers.csv   code,name,description
    experts.csv    id,group,matrix        (matrix = CSV file name in the bundle)
    <matrix>.csv   header row of codes, then one labelled row per factor
    scale.csv      optional: code,lower,upper

Validation collects every problem it can find rather than stopping at the
first one.
"""

from __future__ import annotations

import csv
import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .grey import DEFAULT_SCALE, NO_INFLUENCE, GreyMatrix, LinguisticScale, ScaleError, assessment_to_grey_matrix


@dataclass(frozen=True)
class Finding:
    message: str
    expert: str | None = None
    row: int | None = None  # 1-based
    col: int | None = None  # 1-based

    def __str__(self) -> str:
        where = []
        if self.expert is not None:
            where.append(f"expert {self.expert}")
        if self.row is not None:
            where.append(f"row {self.row}")
        if self.col is not None:
            where.append(f"column {self.col}")
        return f"{', '.join(where)}: {self.message}" if where else self.message


class StudyError(ValueError):
    def __init__(self, findings: Sequence[Finding] | str):
        if isinstance(findings, str):
            findings = [Finding(findings)]
        self.findings = list(findings)
        super().__init__("; ".join(str(f) for f in self.findings))


@dataclass(frozen=True)
class Barrier:
    code: str
    name: str = ""
    description: str = ""


@dataclass(frozen=True)
class Expert:
    id: str
    group: str | None = None
    metadata: Mapping[str, Any] = field(default_factory=dict)


@dataclass
class Study:
    name: str
    barriers: list[Barrier]
    experts: list[Expert]
    assessments: dict[str, list[list[str]]]
    scale: LinguisticScale = DEFAULT_SCALE

    @property
    def codes(self) -> list[str]:
        return [b.code for b in self.barriers]

    @property
    def n(self) -> int:
        return len(self.barriers)

    @property
    def k(self) -> int:
        return len(self.experts)

    def groups(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for e in self.experts:
            if e.group is not None:
                out.setdefault(e.group, []).append(e.id)
        return out

    def grey_matrices(self) -> list[GreyMatrix]:
        """One grey matrix per expert, in panel order."""
        return [assessment_to_grey_matrix(self.assessments[e.id], self.scale, e.id) for e in self.experts]

    def to_document(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "name": self.name,
            "barriers": [{"code": b.code, "name": b.name, "description": b.description} for b in self.barriers],
            "experts": [],
            "assessments": {eid: [list(r) for r in grid] for eid, grid in self.assessments.items()},
        }
        for e in self.experts:
            entry: dict[str, Any] = {"id": e.id}
            if e.group is not None:
                entry["group"] = e.group
            if e.metadata:
                entry["metadata"] = dict(e.metadata)
            doc["experts"].append(entry)
        if self.scale != DEFAULT_SCALE:
            doc["scale"] = self.scale.to_pairs()
        return doc


def _check_grid(eid: str, grid: Any, n: int, scale: LinguisticScale, findings: list[Finding]) -> list[list[str]] | None:
    if not isinstance(grid, list) or not all(isinstance(r, list) for r in grid):
        findings.append(Finding("assessment must be a list of rows", eid))
        return None
    if len(grid) != n or any(len(r) != len(grid) for r in grid):
        shape = f"{len(grid)}x{max((len(r) for r in grid), default=0)}"
        if grid and len({len(r) for r in grid}) > 1:
            shape = f"{len(grid)} rows of lengths {sorted({len(r) for r in grid})}"
        findings.append(Finding(f"matrix is not square {n}x{n} (got {shape})", eid))
        return None
    out = []
    for i, row in enumerate(grid):
        canon = []
        for j, code in enumerate(row):
            if code is None or (isinstance(code, str) and not code.strip()):
                findings.append(Finding("missing rating", eid, i + 1, j + 1))
                canon.append("")
                continue
            if not isinstance(code, str):
                findings.append(Finding(f"rating must be a linguistic code, got {code!r}", eid, i + 1, j + 1))
                canon.append("")
                continue
            c = code.strip().upper()
            if i == j and c != NO_INFLUENCE:
                findings.append(Finding(f"diagonal must be {NO_INFLUENCE!r}, got {code!r}", eid, i + 1, j + 1))
            elif c not in scale:
                findings.append(Finding(f"unknown code {code!r}; expected one of {scale.codes}", eid, i + 1, j + 1))
            canon.append(c)
        out.append(canon)
    return out


def validate_document(doc: Any) -> tuple[Study | None, list[Finding]]:
    """Validate a parsed study document; returns the study (if valid) and all findings."""
    findings: list[Finding] = []
    if not isinstance(doc, dict):
        return None, [Finding("study document must be a JSON object")]

    scale = DEFAULT_SCALE
    if doc.get("scale") is not None:
        try:
            raw = doc["scale"]
            if not isinstance(raw, dict):
                raise ScaleError("scale must map codes to [lower, upper] pairs")
            scale = LinguisticScale.from_pairs(raw)
        except (ScaleError, ValueError, TypeError, IndexError) as exc:
            findings.append(Finding(f"invalid scale: {exc}"))

    barriers: list[Barrier] = []
    raw_barriers = doc.get("barriers")
    if not isinstance(raw_barriers, list) or not raw_barriers:
        findings.append(Finding("'barriers' must be a non-empty list"))
        raw_barriers = []
    seen: set[str] = set()
    for idx, b in enumerate(raw_barriers):
        if isinstance(b, str):
            b = {"code": b}
        code = b.get("code") if isinstance(b, dict) else None
        if not isinstance(code, str) or not code.strip():
            findings.append(Finding(f"barrier {idx + 1} has no code"))
            continue
        code = code.strip()
        if code in seen:
            findings.append(Finding(f"duplicate barrier code {code!r}"))
            continue
        seen.add(code)
        barriers.append(Barrier(code, str(b.get("name", "")), str(b.get("description", ""))))
    n = len(raw_barriers)

    experts: list[Expert] = []
    raw_experts = doc.get("experts")
    if not isinstance(raw_experts, list) or not raw_experts:
        findings.append(Finding("'experts' must be a non-empty list"))
        raw_experts = []
    expert_ids: set[str] = set()
    for idx, e in enumerate(raw_experts):
        if isinstance(e, str):
            e = {"id": e}
        eid = e.get("id") if isinstance(e, dict) else None
        if isinstance(eid, (int, float)) and not isinstance(eid, bool):
            eid = str(eid)
        if not isinstance(eid, str) or not eid.strip():
            findings.append(Finding(f"expert {idx + 1} has no id"))
            continue
        if eid in expert_ids:
            findings.append(Finding(f"duplicate expert id {eid!r}"))
            continue
        expert_ids.add(eid)
        group = e.get("group")
        experts.append(Expert(eid, None if group is None else str(group), dict(e.get("metadata") or {})))

    assessments: dict[str, list[list[str]]] = {}
    raw_assess = doc.get("assessments")
    if not isinstance(raw_assess, dict):
        findings.append(Finding("'assessments' must map expert ids to matrices"))
        raw_assess = {}
    for e in experts:
        if e.id not in raw_assess:
            findings.append(Finding("missing assessment", e.id))
            continue
        grid = _check_grid(e.id, raw_assess[e.id], n, scale, findings)
        if grid is not None:
            assessments[e.id] = grid
    for eid in raw_assess:
        if eid not in expert_ids:
            findings.append(Finding("assessment given for an expert not on the panel", str(eid)))

    if findings:
        return None, findings
    return Study(str(doc.get("name", "")), barriers, experts, assessments, scale), []


def _read_csv_rows(path: Path) -> list[list[str]]:
    with path.open(newline="", encoding="utf-8") as fh:
        return [row for row in csv.reader(fh) if any(cell.strip() for cell in row)]


def _bundle_document(directory: Path) -> tuple[dict[str, Any], list[Finding]]:
    findings: list[Finding] = []
    doc: dict[str, Any] = {"name": directory.name, "barriers": [], "experts": [], "assessments": {}}
    for required in ("barriers.csv", "experts.csv"):
        if not (directory / required).is_file():
            findings.append(Finding(f"CSV bundle is missing {required}"))
    if findings:
        return doc, findings
    with (directory / "barriers.csv").open(newline="", encoding="utf-8") as fh:
        doc["barriers"] = [dict(r) for r in csv.DictReader(fh)]
    codes = [b.get("code", "") for b in doc["barriers"]]
    with (directory / "experts.csv").open(newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        eid = (r.get("id") or "").strip()
        entry: dict[str, Any] = {"id": eid}
        if (r.get("group") or "").strip():
            entry["group"] = r["group"].strip()
        doc["experts"].append(entry)
        matrix_file = directory / ((r.get("matrix") or "").strip() or f"{eid}.csv")
        if not matrix_file.is_file():
            continue  # reported as a missing assessment
        grid = _read_csv_rows(matrix_file)
        header, body = (grid[0], grid[1:]) if grid else ([], [])
        if [h.strip() for h in header[1:]] != codes:
            findings.append(Finding(f"{matrix_file.name}: header does not list the barrier codes in order", eid))
        if [row[0].strip() for row in body] != codes:
            findings.append(Finding(f"{matrix_file.name}: row labels do not list the barrier codes in order", eid))
        doc["assessments"][eid] = [row[1:] for row in body]
    if (directory / "scale.csv").is_file():
        with (directory / "scale.csv").open(newline="", encoding="utf-8") as fh:
            doc["scale"] = {r["code"]: [float(r["lower"]), float(r["upper"])] for r in csv.DictReader(fh)}
    return doc, findings


def check_study(path: str | Path) -> tuple[Study | None, list[Finding]]:
    """Parse and validate without raising; used by ``validate``."""
    path = Path(path)
    if not path.exists():
        return None, [Finding(f"file not found: {path}")]
    if path.is_dir():
        doc, findings = _bundle_document(path)
        study, more = validate_document(doc)
        findings = findings + more
        return (study if not findings else None), findings
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        return None, [Finding(f"cannot read {path}: {exc.strerror}")]
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        return None, [Finding(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}")]
    return validate_document(doc)


def load_study(path: str | Path) -> Study:
    study, findings = check_study(path)
    if findings:
        raise StudyError(findings)
    return study


def save_study(study: Study, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(study.to_document(), indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return path


def save_study_bundle(study: Study, directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    with (directory / "barriers.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["code", "name", "description"])
        w.writerows([b.code, b.name, b.description] for b in study.barriers)
    with (directory / "experts.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "group", "matrix"])
        for e in study.experts:
            w.writerow([e.id, e.group or "", f"{e.id}.csv"])
    for e in study.experts:
        with (directory / f"{e.id}.csv").open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["", *study.codes])
            for code, row in zip(study.codes, study.assessments[e.id]):
                w.writerow([code, *row])
    if study.scale != DEFAULT_SCALE:
        with (directory / "scale.csv").open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["code", "lower", "upper"])
            for code, (lo, hi) in study.scale.to_pairs().items():
                w.writerow([code, lo, hi])
    return directory


@dataclass(frozen=True)
class Scenario:
    name: str
    group_weights: Mapping[str, float]


def load_scenarios(path: str | Path, study: Study | None = None) -> list[Scenario]:
    """Read ``{"scenarios": [{"name": ..., "group_weights": {...}}, ...]}``."""
    path = Path(path)
    if not path.is_file():
        raise StudyError(f"file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise StudyError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    raw = doc.get("scenarios") if isinstance(doc, dict) else doc
    if not isinstance(raw, list) or not raw:
        raise StudyError("scenarios file must contain a non-empty 'scenarios' list")
    findings: list[Finding] = []
    out: list[Scenario] = []
    names: set[str] = set()
    groups = set(study.groups()) if study is not None else None
    for idx, s in enumerate(raw):
        name = s.get("name") if isinstance(s, dict) else None
        weights = s.get("group_weights") if isinstance(s, dict) else None
        if not isinstance(name, str) or not name:
            findings.append(Finding(f"scenario {idx + 1} has no name"))
            continue
        if name in names:
            findings.append(Finding(f"duplicate scenario name {name!r}"))
            continue
        names.add(name)
        if not isinstance(weights, dict) or not weights:
            findings.append(Finding(f"scenario {name!r}: 'group_weights' must be a non-empty mapping"))
            continue
        bad = [g for g, w in weights.items() if not isinstance(w, (int, float)) or isinstance(w, bool) or w < 0]
        if bad:
            findings.append(Finding(f"scenario {name!r}: weights must be non-negative numbers ({', '.join(bad)})"))
            continue
        if not any(w > 0 for w in weights.values()):
            findings.append(Finding(f"scenario {name!r}: weights are all zero"))
            continue
        if groups is not None:
            unknown = sorted(set(weights) - groups)
            if unknown:
                findings.append(Finding(f"scenario {name!r}: unknown group(s) {', '.join(unknown)}"))
                continue
        out.append(Scenario(name, {str(g): float(w) for g, w in weights.items()}))
    if findings:
        raise StudyError(findings)
    return out
