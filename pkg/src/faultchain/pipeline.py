"""End-to-end composition: trace -> spectra -> select -> estimate ->
report -> evaluate, under one reproducible configuration."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

from .causal import CausalConfig, failure_causing_effect
from .corpus import FaultBundle, load_case
from .errors import InputError, PreconditionError
from .evaluation import (BASELINES, RankedReport, assemble_report,
                         baseline_report, evaluate_report, expense_iterate)
from .infotheory import EntropyConfig, PHI_GENERATORS
from .minilang.parser import Program, parse
from .minilang.pdg import StaticPDG, static_pdg
from .minilang.tracer import (backward_slice, mismatching_output_roots,
                              run_suite, spectra_from_traces)
from .selection import run_selection
from .spectrum import (FAIL, MODE_COVERAGE, MODE_SLICE, SliceSpectrum,
                       TestCase)

TECHNIQUES = ("inference",) + tuple(sorted(BASELINES))


@dataclass
class PipelineConfig:
    """Every knob of a localization run; embedded in reports."""

    selection_mode: str = MODE_SLICE
    phi: str = "shannon"
    log_base: float = 2.0
    delta_fraction: float = 0.30
    delta: Optional[int] = None
    chain_cap: int = 5
    priors: dict = field(default_factory=dict)
    matching: str = "nearest"
    ridge: float = 1e-4
    caliper: float = 0.2
    technique: str = "inference"
    step_limit: int = 10 ** 6

    def __post_init__(self):
        if self.selection_mode not in (MODE_COVERAGE, MODE_SLICE):
            raise InputError(f"unknown spectrum mode {self.selection_mode!r}")
        if not (0.0 < self.delta_fraction <= 1.0):
            raise InputError("delta fraction must be in (0, 1]")
        if self.delta is not None and self.delta < 0:
            raise InputError("delta must be non-negative")
        if self.chain_cap < 1:
            raise InputError("chain cap must be at least 1")
        if self.ridge <= 0:
            raise InputError("ridge penalty must be positive")
        if self.caliper < 0:
            raise InputError("caliper must be non-negative")
        if self.phi not in PHI_GENERATORS:
            raise InputError(f"unknown phi {self.phi!r}")
        if self.technique not in TECHNIQUES:
            raise InputError(f"unknown technique {self.technique!r}; "
                             f"expected one of {TECHNIQUES}")

    def entropy_config(self) -> EntropyConfig:
        return EntropyConfig(phi_name=self.phi, base=self.log_base)

    def causal_config(self) -> CausalConfig:
        return CausalConfig(matching=self.matching, ridge=self.ridge,
                            caliper=self.caliper)

    def to_dict(self) -> dict:
        return {
            "selection_mode": self.selection_mode,
            "phi": self.phi,
            "log_base": self.log_base,
            "delta_fraction": self.delta_fraction,
            "delta": self.delta,
            "chain_cap": self.chain_cap,
            "priors": dict(sorted(self.priors.items())),
            "matching": self.matching,
            "ridge": self.ridge,
            "caliper": self.caliper,
            "technique": self.technique,
            "step_limit": self.step_limit,
        }


@dataclass
class TraceResult:
    """One suite execution with everything derived from it."""

    program: Program
    suite: list[TestCase]
    traces: list
    coverage: SliceSpectrum
    slices: SliceSpectrum
    pdg: StaticPDG

    def spectrum(self, mode: str) -> SliceSpectrum:
        return self.coverage if mode == MODE_COVERAGE else self.slices

    @property
    def n_failing(self) -> int:
        return self.coverage.n_fail


def trace_case(source: str, tests: Sequence, step_limit: int = 10 ** 6) -> TraceResult:
    """Parse, execute, classify, and build both spectra plus the PDG."""
    program = parse(source)
    if not program.has_output():
        raise InputError("program has no output statement")
    suite = [t if isinstance(t, TestCase)
             else TestCase(id=t["id"], inputs=dict(t["inputs"]),
                           expected_output=t["expected"])
             for t in tests]
    traces = run_suite(program, suite, step_limit)
    coverage = spectra_from_traces(program, suite, traces, MODE_COVERAGE)
    slices = spectra_from_traces(program, suite, traces, MODE_SLICE)
    return TraceResult(program, suite, traces, coverage, slices, static_pdg(program))


def localize(selection_spectrum: SliceSpectrum, pdg: StaticPDG,
             config: PipelineConfig,
             causal_spectrum: Optional[SliceSpectrum] = None) -> RankedReport:
    """Run one technique over a spectrum.

    Baseline techniques rank directly from the count statistics. The
    causal technique selects statements on ``selection_spectrum``, then
    estimates effects on ``causal_spectrum`` (the slice spectrum in the
    full pipeline; defaults to the selection spectrum).
    """
    selection_spectrum.require_failing_test()
    if config.technique != "inference":
        return baseline_report(selection_spectrum, config.technique)
    if causal_spectrum is None:
        causal_spectrum = selection_spectrum
    if causal_spectrum.statements != selection_spectrum.statements:
        raise InputError("selection and causal spectra disagree on statements")
    ecfg = config.entropy_config()
    result = run_selection(selection_spectrum, pdg, ecfg,
                           priors=config.priors,
                           delta_fraction=config.delta_fraction,
                           delta=config.delta,
                           chain_cap=config.chain_cap)
    ccfg = config.causal_config()
    effects = {s: failure_causing_effect(s, pdg, causal_spectrum, ccfg)
               for s in result.selected}
    return assemble_report(result, effects, selection_spectrum, ecfg)


def localize_source(source: str, tests: Sequence,
                    config: PipelineConfig) -> tuple[RankedReport, TraceResult]:
    """Trace a program and localize in one shot."""
    tr = trace_case(source, tests, config.step_limit)
    report = localize(tr.spectrum(config.selection_mode), tr.pdg, config,
                      causal_spectrum=tr.slices)
    return report, tr


def infected_statements(trace_result: TraceResult, faulty_ids) -> set[str]:
    """Chain ground truth: the faulty statements plus every statement on
    a dependence path from a faulty instance to a wrong output instance
    in some failing run."""
    faulty = set(faulty_ids)
    infected = set(faulty)
    for tc, trace in zip(trace_result.suite, trace_result.traces):
        if tc.verdict != FAIL or trace.crashed:
            continue
        roots = mismatching_output_roots(trace, tc)
        sliced: set = set()
        for root in roots:
            sliced |= backward_slice(trace.ddg, root).instances
        position = {inst: i for i, inst in enumerate(trace.ddg.nodes)}
        reach = set()
        for inst in sorted(sliced, key=position.__getitem__):
            if inst.statement in faulty:
                reach.add(inst)
                continue
            for dep, _kind in trace.ddg.dependencies(inst):
                if dep in reach:
                    reach.add(inst)
                    break
        infected |= {inst.statement for inst in reach}
    return infected


# -- corpus evaluation ---------------------------------------------------

def _case_dirs(corpus_dir: Path) -> list[Path]:
    return sorted(p for p in Path(corpus_dir).iterdir()
                  if p.is_dir() and (p / "program.src").exists())


def check_expectations(expected: dict, reports: dict[str, RankedReport],
                       selection_order: Optional[list] = None) -> list[dict]:
    """Diff a case's embedded expected values against a run's reports."""
    checks = []
    for item in expected.get("expectations", []):
        metric = item["metric"]
        got: object = None
        if metric in BASELINES:
            report = reports.get(metric)
            if report is not None:
                entry = next(e for e in report.entries
                             if e.statement == item["statement"])
                got = entry.score
        elif metric == "selection_order":
            got = selection_order
        elif metric == "report_top3":
            report = reports.get("inference")
            if report is not None:
                got = [e.statement for e in report.entries[:3]]
        elif metric == "chains":
            report = reports.get("inference")
            if report is not None:
                got = [list(c.ordered_members or sorted(c.members))
                       for c in report.chains]
        if isinstance(item["value"], list):
            ok = got == item["value"]
        else:
            ok = got is not None and abs(got - item["value"]) <= item.get("tol", 0.01)
        checks.append({"metric": metric, "statement": item.get("statement"),
                       "expected": item["value"], "got": got, "ok": bool(ok)})
    return checks


def _selection_order(spectrum: SliceSpectrum, pdg: StaticPDG,
                     config: PipelineConfig) -> list[str]:
    result = run_selection(spectrum, pdg, config.entropy_config(),
                           priors=config.priors,
                           delta_fraction=config.delta_fraction,
                           delta=config.delta, chain_cap=config.chain_cap)
    return list(result.selected)


def evaluate_case(bundle: FaultBundle, expected: dict,
                  techniques: Sequence[str],
                  config: PipelineConfig) -> dict:
    case_config = replace(config,
                          selection_mode=expected.get("selection_mode",
                                                      config.selection_mode))
    tr = trace_case(bundle.combined_source, bundle.make_suite(),
                    config.step_limit)
    if tr.n_failing == 0:
        raise PreconditionError(f"case {bundle.name!r} has no failing test")
    faulty = expected.get("faulty_statements") or bundle.faulty_statements
    truth = sorted(infected_statements(tr, faulty))

    reports: dict[str, RankedReport] = {}
    technique_rows = {}
    for tech in techniques:
        tcfg = replace(case_config, technique=tech)
        report = localize(tr.spectrum(tcfg.selection_mode), tr.pdg, tcfg,
                          causal_spectrum=tr.slices)
        reports[tech] = report
        metrics = evaluate_report(report, faulty,
                                  chain_truth=truth if tech == "inference" else None)
        row = {
            "exam_best": metrics.exam_best,
            "exam_worst": metrics.exam_worst,
            "statements_examined_best": metrics.statements_examined_best,
            "statements_examined_worst": metrics.statements_examined_worst,
        }
        if metrics.precision is not None:
            row["chain_precision"] = metrics.precision
            row["chain_recall"] = metrics.recall
            row["chain_f_measure"] = metrics.f_measure
        technique_rows[tech] = row

    case_result = {
        "name": bundle.name,
        "statements": len(tr.program.statements),
        "tests": len(tr.suite),
        "failing_tests": tr.n_failing,
        "faulty_statements": list(faulty),
        "chain_ground_truth": truth,
        "techniques": technique_rows,
    }

    if expected.get("expectations"):
        order = _selection_order(tr.spectrum(case_config.selection_mode),
                                 tr.pdg, case_config)
        case_result["expectation_checks"] = check_expectations(
            expected, reports, selection_order=order)

    if len(bundle.faults) > 1:
        expense = {}
        for tech in techniques:
            tcfg = replace(case_config, technique=tech)

            def localizer(source, suite, _cfg=tcfg):
                tr_inner = trace_case(source, suite, _cfg.step_limit)
                if tr_inner.n_failing == 0:
                    return None, 0
                report = localize(tr_inner.spectrum(_cfg.selection_mode),
                                  tr_inner.pdg, _cfg,
                                  causal_spectrum=tr_inner.slices)
                return report, tr_inner.n_failing

            expense[tech] = [
                {"iteration": it.iteration, "failing_tests": it.failing_tests,
                 "exam_best": it.exam_best, "exam_worst": it.exam_worst,
                 "fixed_fault": it.fixed_fault}
                for it in expense_iterate(bundle, localizer)]
        case_result["one_fault_at_a_time"] = expense
    return case_result


def evaluate_corpus(corpus_dir, techniques: Sequence[str],
                    config: PipelineConfig) -> dict:
    """Per-case metrics plus technique averages over the whole corpus.

    Malformed cases are skipped with a warning entry; if everything is
    skipped the run fails.
    """
    case_dirs = _case_dirs(Path(corpus_dir))
    if not case_dirs:
        raise InputError(f"no corpus cases under {corpus_dir}")
    cases = []
    warnings = []
    for case_dir in case_dirs:
        try:
            bundle, expected = load_case(case_dir)
            cases.append(evaluate_case(bundle, expected, techniques, config))
        except (InputError, PreconditionError) as exc:
            warnings.append({"case": case_dir.name, "error": str(exc)})
    if not cases:
        raise InputError("every corpus case was skipped")

    aggregate = {}
    for tech in techniques:
        rows = [c["techniques"][tech] for c in cases]
        n = len(rows)
        aggregate[tech] = {
            "cases": n,
            "mean_exam_best": sum(r["exam_best"] for r in rows) / n,
            "mean_exam_worst": sum(r["exam_worst"] for r in rows) / n,
            "mean_statements_examined_best":
                sum(r["statements_examined_best"] for r in rows) / n,
            "mean_statements_examined_worst":
                sum(r["statements_examined_worst"] for r in rows) / n,
        }
    return {
        "config": config.to_dict(),
        "techniques": list(techniques),
        "cases": cases,
        "aggregate": aggregate,
        "skipped": warnings,
    }


def render_evaluation_text(results: dict) -> str:
    """Fixed-width comparative table; byte-stable across reruns."""
    lines = []
    techs = results["techniques"]
    lines.append("Average statements examined per faulty version")
    header = f"{'technique':<12}" + "".join(
        f"{col:>16}" for col in ("best", "worst", "exam best %", "exam worst %"))
    lines.append(header)
    lines.append("-" * len(header))
    for tech in techs:
        agg = results["aggregate"][tech]
        lines.append(
            f"{tech:<12}"
            f"{agg['mean_statements_examined_best']:>16.2f}"
            f"{agg['mean_statements_examined_worst']:>16.2f}"
            f"{agg['mean_exam_best']:>16.2f}"
            f"{agg['mean_exam_worst']:>16.2f}")
    lines.append("")
    lines.append(f"{'case':<22}{'technique':<12}"
                 f"{'best':>8}{'worst':>8}{'P':>8}{'R':>8}{'F':>8}")
    for case in results["cases"]:
        for tech in techs:
            row = case["techniques"][tech]
            p = row.get("chain_precision")
            r = row.get("chain_recall")
            f = row.get("chain_f_measure")
            fmt = lambda v: f"{v:>8.2f}" if v is not None else f"{'-':>8}"
            lines.append(f"{case['name']:<22}{tech:<12}"
                         f"{row['statements_examined_best']:>8}"
                         f"{row['statements_examined_worst']:>8}"
                         f"{fmt(p)}{fmt(r)}{fmt(f)}")
    for case in results["cases"]:
        if "expectation_checks" in case:
            lines.append("")
            lines.append(f"expected-value checks: {case['name']}")
            for check in case["expectation_checks"]:
                status = "ok" if check["ok"] else "MISMATCH"
                where = f" {check['statement']}" if check.get("statement") else ""
                lines.append(f"  {check['metric']}{where}: {status}")
    return "\n".join(lines) + "\n"
