"""Command-line front end: ``greydematel run|sensitivity|loops|validate``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .dematel import DegenerateStudyError, InfeasibleStudyError
from .graph import LoopOverflowError, ThresholdSpec, compute_threshold, enumerate_loops, extract_edges, format_number
from .outputs import ALL_FORMATS, read_matrix_csv, write_graph_outputs, write_outputs, write_sensitivity
from .sensitivity import PipelineConfig, run_pipeline, run_sensitivity
from .study import StudyError, check_study, load_scenarios, load_study

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INFEASIBLE = 2

log = logging.getLogger("greydematel")


@dataclass(frozen=True)
class RunConfig:
    threshold: ThresholdSpec = field(default_factory=ThresholdSpec)
    cfcs: str = "paper"
    include_diagonal: bool = True
    precision: int = 4
    out_dir: Path = Path("out")
    formats: frozenset[str] = ALL_FORMATS

    def __post_init__(self):
        if not 1 <= self.precision <= 12:
            raise ValueError(f"precision must be in 1..12, got {self.precision}")

    def pipeline(self) -> PipelineConfig:
        return PipelineConfig(self.threshold, self.cfcs, self.include_diagonal)


def _config(args: argparse.Namespace) -> RunConfig:
    formats = ALL_FORMATS
    if getattr(args, "formats", None):
        formats = frozenset(f.strip() for f in args.formats.split(",") if f.strip())
        unknown = formats - ALL_FORMATS
        if unknown:
            raise ValueError(f"unknown output format(s): {', '.join(sorted(unknown))}")
    return RunConfig(
        threshold=ThresholdSpec.parse(args.threshold),
        cfcs=args.cfcs,
        include_diagonal=not args.exclude_diagonal,
        precision=args.precision,
        out_dir=Path(args.out),
        formats=formats,
    )


def _fail(message: str, code: int = EXIT_INVALID) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _config(args)
    study = load_study(args.study)
    result = run_pipeline(study, None, cfg.pipeline())
    paths = write_outputs(result, cfg.out_dir, cfg.formats, cfg.precision)
    log.info("wrote %d files to %s", len(paths), cfg.out_dir)
    print(f"n={study.n} K={study.k} theta={format_number(result.theta, cfg.precision)} "
          f"({result.threshold.describe(cfg.precision)}) edges={len(result.graph.edges)} "
          f"loops={len(result.graph.loops)}")
    return EXIT_OK


def cmd_sensitivity(args: argparse.Namespace) -> int:
    cfg = _config(args)
    study = load_study(args.study)
    scenarios = load_scenarios(args.scenarios, study)
    report = run_sensitivity(study, scenarios, cfg.pipeline(), workers=args.workers)
    write_sensitivity(report, cfg.out_dir, cfg.precision)
    print(f"n={study.n} K={study.k} scenarios={len(scenarios)}")
    for name, run in zip(report.column_names, [report.base, *report.alternates]):
        print(f"{name}: theta={format_number(run.theta, cfg.precision)} edges={len(run.graph.edges)} "
              f"loops={len(run.graph.loops)}")
    return EXIT_OK


def cmd_loops(args: argparse.Namespace) -> int:
    cfg = _config(args)
    if not Path(args.matrix).is_file():
        return _fail(f"file not found: {args.matrix}")
    m, codes = read_matrix_csv(args.matrix)
    policy = compute_threshold(m, cfg.threshold)
    graph = extract_edges(m, policy.theta, codes)
    graph.loops = enumerate_loops(graph)
    write_graph_outputs(graph, cfg.out_dir, cfg.precision)
    print(f"n={len(codes)} theta={format_number(policy.theta, cfg.precision)} "
          f"({policy.describe(cfg.precision)}) edges={len(graph.edges)} loops={len(graph.loops)}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    study, findings = check_study(args.study)
    if findings:
        for f in findings:
            print(f)
        return EXIT_INVALID
    print(f"OK (n={study.n}, K={study.k})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="greydematel", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--threshold", default="mean+sigma",
                       help="mean | mean+sigma | mean+1.5sigma | mean+2sigma | fixed:VALUE (default: mean+sigma)")
        p.add_argument("--cfcs", choices=["paper", "standard"], default="paper")
        p.add_argument("--exclude-diagonal", action="store_true",
                       help="leave diagonal cells out of CFCS row statistics")
        p.add_argument("--precision", type=int, default=4, help="decimals in output files (1-12)")
        p.add_argument("--out", default="out", help="output directory")

    p = sub.add_parser("run", help="run the full pipeline on a study")
    p.add_argument("study")
    common(p)
    p.add_argument("--formats", help=f"comma list from {','.join(sorted(ALL_FORMATS))}")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sensitivity", help="rerun under expert-group weighting scenarios")
    p.add_argument("study")
    p.add_argument("scenarios")
    common(p)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("loops", help="edges and feedback loops from a total-relation matrix CSV")
    p.add_argument("matrix")
    common(p)
    p.set_defaults(func=cmd_loops)

    p = sub.add_parser("validate", help="check a study file and list every problem")
    p.add_argument("study")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except StudyError as exc:
        for f in exc.findings:
            print(f"error: {f}", file=sys.stderr)
        return EXIT_INVALID
    except (InfeasibleStudyError, DegenerateStudyError) as exc:
        return _fail(str(exc), EXIT_INFEASIBLE)
    except (LoopOverflowError, ValueError, OSError) as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
