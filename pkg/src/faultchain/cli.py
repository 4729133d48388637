"""Command-line surface: trace, localize, evaluate, corpus-gen.

Exit codes: 0 success, 2 malformed input, 3 precondition violation
(for example a suite with no failing test).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import generate_corpus
from .errors import InputError, PreconditionError
from .minilang.pdg import StaticPDG
from .pipeline import (TECHNIQUES, PipelineConfig, evaluate_corpus, localize,
                       render_evaluation_text, trace_case)
from .spectrum import load_spectrum, save_spectrum


def _write_json(data: dict, path: str | None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--phi", default="shannon", choices=["shannon", "gini"],
                        help="entropy generator function")
    parser.add_argument("--delta-fraction", type=float, default=0.30,
                        help="selection budget as a fraction of the candidates")
    parser.add_argument("--delta", type=int, default=None,
                        help="absolute selection budget, overrides the fraction")
    parser.add_argument("--chain-cap", type=int, default=5,
                        help="maximum number of cause-effect chains")
    parser.add_argument("--prior-file", default=None,
                        help="JSON file of statement -> fault-proneness prior")
    parser.add_argument("--matching", default="nearest",
                        choices=["nearest", "full"])
    parser.add_argument("--ridge", type=float, default=1e-4)
    parser.add_argument("--caliper", type=float, default=0.2)
    parser.add_argument("--step-limit", type=int, default=10 ** 6)


def _config_from_args(args, technique: str = "inference",
                      selection_mode: str = "slice") -> PipelineConfig:
    priors = {}
    if getattr(args, "prior_file", None):
        try:
            priors = json.loads(Path(args.prior_file).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise InputError(f"prior file not found: {args.prior_file}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"prior file is not valid JSON: {exc}") from exc
    return PipelineConfig(
        selection_mode=selection_mode,
        phi=args.phi,
        delta_fraction=args.delta_fraction,
        delta=args.delta,
        chain_cap=args.chain_cap,
        priors=priors,
        matching=args.matching,
        ridge=args.ridge,
        caliper=args.caliper,
        technique=technique,
        step_limit=args.step_limit,
    )


def cmd_trace(args) -> int:
    program_path = Path(args.program)
    tests_path = Path(args.tests)
    if not program_path.exists():
        raise InputError(f"program file not found: {program_path}")
    if not tests_path.exists():
        raise InputError(f"tests file not found: {tests_path}")
    try:
        tests = json.loads(tests_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"tests file is not valid JSON: {exc}") from exc
    tr = trace_case(program_path.read_text(encoding="utf-8"), tests,
                    args.step_limit)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_spectrum(tr.coverage, out / "coverage_spectrum.json")
    save_spectrum(tr.slices, out / "slice_spectrum.json")
    tr.pdg.save(out / "pdg.json")
    verdicts = {tc.id: tc.verdict for tc in tr.suite}
    _write_json({"verdicts": verdicts,
                 "failing": tr.n_failing,
                 "passing": len(tr.suite) - tr.n_failing},
                str(out / "verdicts.json"))
    if args.export_ddg:
        ddg_dir = out / "ddg"
        ddg_dir.mkdir(exist_ok=True)
        for tc, trace in zip(tr.suite, tr.traces):
            trace.ddg.save(ddg_dir / f"{tc.id}.json")
    print(f"wrote spectra, pdg, and verdicts to {out}")
    return 0


def cmd_localize(args) -> int:
    spectrum = load_spectrum(args.spectrum)
    if not Path(args.pdg).exists():
        raise InputError(f"pdg file not found: {args.pdg}")
    pdg = StaticPDG.load(args.pdg)
    config = _config_from_args(args, technique=args.technique,
                               selection_mode=spectrum.mode)
    causal_spectrum = None
    if args.causal_spectrum:
        causal_spectrum = load_spectrum(args.causal_spectrum)
    report = localize(spectrum, pdg, config, causal_spectrum=causal_spectrum)
    payload = {"config": config.to_dict(), **report.to_dict()}
    _write_json(payload, args.out)
    if args.text:
        for entry in report.entries:
            print(f"{entry.statement:<8}tier {entry.tier}  score {entry.score:.4f}")
    return 0


def cmd_evaluate(args) -> int:
    techniques = [t.strip() for t in args.techniques.split(",") if t.strip()]
    for tech in techniques:
        if tech not in TECHNIQUES:
            raise InputError(f"unknown technique {tech!r}; "
                             f"expected one of {TECHNIQUES}")
    config = _config_from_args(args)
    results = evaluate_corpus(args.corpus, techniques, config)
    _write_json(results, args.out)
    sys.stdout.write(render_evaluation_text(results))
    if results["skipped"]:
        for item in results["skipped"]:
            print(f"warning: skipped {item['case']}: {item['error']}",
                  file=sys.stderr)
    return 0


def cmd_corpus_gen(args) -> int:
    names = generate_corpus(args.out, n_programs=args.programs,
                            seed=args.seed, tests_min=args.tests_min,
                            tests_max=args.tests_max,
                            include_golden=not args.no_golden)
    print(f"generated {len(names)} cases under {args.out}:")
    for name in names:
        print(f"  {name}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="faultchain",
        description="Slice-spectrum fault localization with cause-effect "
                    "chains and causal effect ranking")
    sub = parser.add_subparsers(dest="command", required=True)

    p_trace = sub.add_parser("trace", help="run a suite and emit spectra/PDG")
    p_trace.add_argument("program", help="mini-language source file")
    p_trace.add_argument("tests", help="JSON test suite")
    p_trace.add_argument("-o", "--out", default="trace-out",
                         help="output directory")
    p_trace.add_argument("--export-ddg", action="store_true",
                         help="also write per-test dependence graphs")
    p_trace.add_argument("--step-limit", type=int, default=10 ** 6)
    p_trace.set_defaults(func=cmd_trace)

    p_loc = sub.add_parser("localize", help="rank statements from a spectrum")
    p_loc.add_argument("spectrum", help="spectrum JSON (selection stage)")
    p_loc.add_argument("pdg", help="static PDG JSON")
    p_loc.add_argument("--causal-spectrum", default=None,
                       help="spectrum JSON for the causal stage "
                            "(default: the selection spectrum)")
    p_loc.add_argument("--technique", default="inference",
                       choices=list(TECHNIQUES))
    p_loc.add_argument("-o", "--out", default=None,
                       help="report JSON path (default: stdout)")
    p_loc.add_argument("--text", action="store_true",
                       help="also print an aligned ranking table")
    _add_config_flags(p_loc)
    p_loc.set_defaults(func=cmd_localize)

    p_eval = sub.add_parser("evaluate", help="score techniques over a corpus")
    p_eval.add_argument("corpus", help="corpus directory")
    p_eval.add_argument("--techniques",
                        default="inference,ochiai,o,gp19,dstar")
    p_eval.add_argument("-o", "--out", default=None,
                        help="results JSON path (default: stdout)")
    _add_config_flags(p_eval)
    p_eval.set_defaults(func=cmd_evaluate)

    p_gen = sub.add_parser("corpus-gen", help="materialize the test corpus")
    p_gen.add_argument("out", help="corpus directory to create")
    p_gen.add_argument("--programs", type=int, default=10)
    p_gen.add_argument("--seed", type=int, default=20260801)
    p_gen.add_argument("--tests-min", type=int, default=50)
    p_gen.add_argument("--tests-max", type=int, default=200)
    p_gen.add_argument("--no-golden", action="store_true")
    p_gen.set_defaults(func=cmd_corpus_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
