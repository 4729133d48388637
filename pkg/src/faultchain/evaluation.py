"""Baseline suspiciousness formulas, ranking assembly, and metrics:
EXAM (best/worst), statements examined, one-fault-at-a-time traces,
and chain precision/recall/F-measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from .causal import CausalEffect, rank_chains
from .errors import InputError, PreconditionError
from .infotheory import DEFAULT_CONFIG, EntropyConfig, MeasureCache, relevance_class
from .selection import CauseEffectChain, SelectionResult
from .spectrum import SliceSpectrum, SpectrumStats, build_stats

BEST = "best"
WORST = "worst"


# -- baseline formulas ---------------------------------------------------

def ochiai(stats: SpectrumStats, s: str) -> float:
    c = stats.counts(s)
    denom = math.sqrt(stats.n_f * (c.n_cf + c.n_cp))
    return c.n_cf / denom if denom > 0 else 0.0


def o_score(stats: SpectrumStats, s: str) -> int:
    c = stats.counts(s)
    return -1 if c.n_uf > 0 else c.n_up


def gp19(stats: SpectrumStats, s: str) -> float:
    c = stats.counts(s)
    return c.n_cf * math.sqrt(abs(c.n_cp - c.n_cf + c.n_uf - c.n_up))


def dstar(stats: SpectrumStats, s: str, star: int = 2) -> float:
    c = stats.counts(s)
    denom = c.n_uf + c.n_cp
    if denom == 0:
        return math.inf if c.n_cf > 0 else 0.0
    return c.n_cf ** star / denom


BASELINES: dict[str, Callable[[SpectrumStats, str], float]] = {
    "ochiai": ochiai,
    "o": o_score,
    "gp19": gp19,
    "dstar": dstar,
}


# -- ranked reports ------------------------------------------------------

@dataclass(frozen=True)
class RankedEntry:
    statement: str
    score: float
    tier: int
    tie_group: int


@dataclass
class RankedReport:
    """Full statement ordering with tie groups, plus chains when the
    technique produces them. Scores are non-increasing within a tier;
    tie groups never span tiers."""

    technique: str
    entries: list[RankedEntry]
    tie_groups: list[list[str]]
    chains: list[CauseEffectChain] = field(default_factory=list)
    effects: dict[str, CausalEffect] = field(default_factory=dict)

    def position(self, statement: str) -> int:
        for i, e in enumerate(self.entries):
            if e.statement == statement:
                return i
        raise InputError(f"statement {statement!r} not in report")

    def to_dict(self) -> dict:
        data = {
            "technique": self.technique,
            "ranking": [{"statement": e.statement,
                         "score": _json_score(e.score),
                         "tier": e.tier,
                         "tie_group": e.tie_group}
                        for e in self.entries],
            "tie_groups": self.tie_groups,
            "chains": [{"members": c.ordered_members or sorted(c.members),
                        "links": [{"src": a, "dst": b, "type": k}
                                  for a, b, k in sorted(c.links)],
                        "aggregate_effect": c.aggregate_effect}
                       for c in self.chains],
        }
        if self.effects:
            data["effects"] = {
                s: {"tau_hat": e.tau_hat, "degenerate": e.degenerate,
                    "reason": e.reason, "n_retained": e.n_retained}
                for s, e in sorted(self.effects.items())}
        return data


def _json_score(score: float):
    if score == math.inf:
        return "inf"
    if score == -math.inf:
        return "-inf"
    return score


def _group_entries(scored: Sequence[tuple[str, float, int]],
                   order: Mapping[str, int],
                   technique: str) -> RankedReport:
    """Sort (statement, score, tier) triples and group exact-score ties
    within each tier."""
    ranked = sorted(scored, key=lambda t: (t[2], -t[1], order[t[0]]))
    entries: list[RankedEntry] = []
    tie_groups: list[list[str]] = []
    prev_key = None
    for statement, score, tier in ranked:
        key = (tier, score)
        if key != prev_key:
            tie_groups.append([])
            prev_key = key
        tie_groups[-1].append(statement)
        entries.append(RankedEntry(statement, score, tier, len(tie_groups) - 1))
    return RankedReport(technique=technique, entries=entries, tie_groups=tie_groups)


def baseline_report(spectrum: SliceSpectrum, technique: str) -> RankedReport:
    """Rank every statement by one suspiciousness formula."""
    if technique not in BASELINES:
        raise InputError(f"unknown technique {technique!r}")
    stats = build_stats(spectrum)
    formula = BASELINES[technique]
    order = {s: i for i, s in enumerate(spectrum.statements)}
    scored = [(s, float(formula(stats, s)), 1) for s in spectrum.statements]
    return _group_entries(scored, order, technique)


def assemble_report(selection: SelectionResult,
                    effects: Mapping[str, CausalEffect],
                    spectrum: SliceSpectrum,
                    cfg: EntropyConfig = DEFAULT_CONFIG,
                    technique: str = "inference") -> RankedReport:
    """Two-tier ranking: selected statements by estimated effect, the
    rest by relevance signed with their execution class."""
    stats = build_stats(spectrum)
    cache = MeasureCache(spectrum, cfg)
    order = {s: i for i, s in enumerate(spectrum.statements)}
    selected = set(selection.selected)
    scored: list[tuple[str, float, int]] = []
    for s in spectrum.statements:
        if s in selected:
            scored.append((s, effects[s].tau_hat + 0.0, 1))
        else:
            # + 0.0 normalizes the -0.0 that R * (-1) produces
            scored.append((s, cache.relevance(s) * relevance_class(stats, s) + 0.0, 2))
    report = _group_entries(scored, order, technique)
    report.chains = rank_chains(list(selection.chains), effects, order)
    report.effects = {s: effects[s] for s in selection.selected}
    return report


# -- metrics -------------------------------------------------------------

def _first_faulty_group(report: RankedReport, faulty: set[str]):
    above = 0
    for group in report.tie_groups:
        hits = [s for s in group if s in faulty]
        if hits:
            return above, group, hits
        above += len(group)
    raise InputError(f"no faulty statement present in the ranking: {sorted(faulty)}")


def statements_examined(report: RankedReport, faulty, mode: str) -> int:
    """Statements inspected walking the ranking until the first faulty
    one, resolving ties optimistically (best) or adversarially (worst)."""
    faulty = set(faulty)
    if not faulty:
        raise InputError("faulty statement set is empty")
    above, group, hits = _first_faulty_group(report, faulty)
    if mode == BEST:
        return above + 1
    if mode == WORST:
        return above + len(group) - len(hits) + 1
    raise InputError(f"unknown mode {mode!r}; expected 'best' or 'worst'")


def exam_score(report: RankedReport, faulty, mode: str) -> float:
    """statements_examined as a percentage of the ranking length."""
    count = statements_examined(report, faulty, mode)
    return 100.0 * count / len(report.entries)


def chain_prf(chains: Sequence[CauseEffectChain],
              ground_truth) -> tuple[float, float, float]:
    """Precision/recall/F over the union of reported chain members
    against the infected statement set."""
    truth = set(ground_truth)
    if not truth:
        raise InputError("ground truth statement set is empty")
    members: set[str] = set()
    for c in chains:
        members |= set(c.members)
    if not members:
        return (0.0, 0.0, 0.0)
    hit = len(members & truth)
    precision = hit / len(members)
    recall = hit / len(truth)
    f = (2 * precision * recall / (precision + recall)) if (precision + recall) else 0.0
    return (precision, recall, f)


@dataclass
class EvaluationMetrics:
    exam_best: float
    exam_worst: float
    statements_examined_best: int
    statements_examined_worst: int
    precision: Optional[float] = None
    recall: Optional[float] = None
    f_measure: Optional[float] = None


def evaluate_report(report: RankedReport, faulty,
                    chain_truth=None) -> EvaluationMetrics:
    metrics = EvaluationMetrics(
        exam_best=exam_score(report, faulty, BEST),
        exam_worst=exam_score(report, faulty, WORST),
        statements_examined_best=statements_examined(report, faulty, BEST),
        statements_examined_worst=statements_examined(report, faulty, WORST),
    )
    if chain_truth is not None and report.chains:
        p, r, f = chain_prf(report.chains, chain_truth)
        metrics.precision, metrics.recall, metrics.f_measure = p, r, f
    return metrics


# -- one-fault-at-a-time harness ------------------------------------------

@dataclass
class ExpenseIteration:
    iteration: int
    failing_tests: int
    exam_best: float
    exam_worst: float
    fixed_fault: str


def expense_iterate(bundle, localizer: Callable,
                    max_iterations: int = 50) -> list[ExpenseIteration]:
    """Locate-fix-rerun until no test fails.

    ``bundle`` supplies the faulty variant sources (``variant_source``),
    fault ids with their statements (``fault_statements``), and a fresh
    suite (``make_suite``). ``localizer(source, suite) -> RankedReport``
    is the technique under evaluation. Each round fixes the fault whose
    statement is reached first in the ranking.
    """
    remaining = dict(bundle.fault_statements)  # fault id -> statement id
    iterations: list[ExpenseIteration] = []
    for round_no in range(1, max_iterations + 1):
        source = bundle.variant_source(sorted(remaining))
        suite = bundle.make_suite()
        report, n_failing = localizer(source, suite)
        if n_failing == 0:
            break
        faulty_statements = {sid: fid for fid, sid in remaining.items()}
        _, group, hits = _first_faulty_group(report, set(faulty_statements))
        fixed = min(faulty_statements[s] for s in hits)
        iterations.append(ExpenseIteration(
            iteration=round_no,
            failing_tests=n_failing,
            exam_best=exam_score(report, set(faulty_statements), BEST),
            exam_worst=exam_score(report, set(faulty_statements), WORST),
            fixed_fault=fixed,
        ))
        del remaining[fixed]
        if not remaining:
            # all faults fixed; one more pass confirms a clean suite
            source = bundle.variant_source([])
            suite = bundle.make_suite()
            _, n_failing = localizer(source, suite)
            if n_failing != 0:
                raise PreconditionError(
                    "bundle still fails with every fault fixed")
            break
    else:
        raise PreconditionError("fault fixing did not converge")
    return iterations
