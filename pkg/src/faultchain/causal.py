"""Per-statement failure-causing-effect estimation.

Treatment is coverage of the statement, outcome is the failure
indicator, confounders are the statement's direct dependence
predecessors. A ridge logistic model estimates coverage propensity,
executions are matched on it, missing potential outcomes are imputed
from the matches, and the effect is the mean imputed difference.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import InputError
from .minilang.pdg import StaticPDG
from .selection import CauseEffectChain
from .spectrum import SliceSpectrum

_TIE_EPS = 1e-12
_LOGIT_CLIP = 35.0


@dataclass
class CausalConfig:
    matching: str = "nearest"   # nearest | full
    ridge: float = 1e-4
    caliper: float = 0.2        # in sd units of the logit propensity

    def __post_init__(self):
        if self.matching not in ("nearest", "full"):
            raise InputError(f"unknown matching strategy {self.matching!r}")
        if self.ridge <= 0:
            raise InputError("ridge penalty must be positive")


DEFAULT_CAUSAL_CONFIG = CausalConfig()


class Degenerate(Exception):
    """Estimation cannot proceed; callers fall back and flag."""


@dataclass(frozen=True)
class ConfounderVector:
    """Coverage columns of a statement's direct dependence predecessors,
    one row per test."""

    statement: str
    predecessors: tuple[str, ...]
    values: np.ndarray  # shape (n_tests, n_predecessors), uint8


def confounder_vector(statement: str, pdg: StaticPDG,
                      spectrum: SliceSpectrum) -> ConfounderVector:
    """Pull the coverage columns of everything the statement directly
    depends on (data and control parents), in source order."""
    if statement not in spectrum:
        raise InputError(f"statement {statement!r} not in spectrum")
    order = {s: i for i, s in enumerate(spectrum.statements)}
    preds = sorted({dst for dst, _kind in pdg.dependees(statement)},
                   key=lambda s: order.get(s, len(order)))
    if preds:
        values = np.column_stack([spectrum.column(p) for p in preds])
    else:
        values = np.zeros((len(spectrum.tests), 0), dtype=np.uint8)
    return ConfounderVector(statement, tuple(preds), values)


# -- propensity model --------------------------------------------------

@dataclass
class PropensityModel:
    """Ridge logistic fit of treatment on confounders.

    ``beta[0]`` is the intercept (unpenalized); predictions are kept
    strictly inside (0, 1).
    """

    beta: np.ndarray
    iterations: int
    log_likelihood: float
    ridge: float
    converged: bool

    def predict(self, confounders) -> np.ndarray:
        x = np.asarray(confounders, dtype=float)
        design = np.column_stack([np.ones(len(x)), x])
        return _sigmoid(design @ self.beta)


def _sigmoid(logits: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(logits, -_LOGIT_CLIP, _LOGIT_CLIP)))


def penalized_log_likelihood(beta, treatment, confounders, ridge) -> float:
    """Binomial log likelihood minus the ridge penalty (intercept
    excluded from the penalty)."""
    y = np.asarray(treatment, dtype=float)
    x = np.asarray(confounders, dtype=float)
    design = np.column_stack([np.ones(len(y)), x])
    p = _sigmoid(design @ np.asarray(beta, dtype=float))
    ll = float(np.sum(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))
    return ll - 0.5 * ridge * float(np.sum(np.asarray(beta)[1:] ** 2))


def penalized_gradient(beta, treatment, confounders, ridge) -> np.ndarray:
    """Analytic gradient of the penalized log likelihood."""
    y = np.asarray(treatment, dtype=float)
    x = np.asarray(confounders, dtype=float)
    design = np.column_stack([np.ones(len(y)), x])
    beta = np.asarray(beta, dtype=float)
    p = _sigmoid(design @ beta)
    grad = design.T @ (y - p)
    penalty = ridge * beta
    penalty[0] = 0.0
    return grad - penalty


def fit_propensity(treatment, confounders, ridge: float = 1e-4,
                   tol: float = 1e-8, max_iter: int = 100) -> PropensityModel:
    """Newton iteration with step halving on the penalized likelihood.

    Separable data stays finite thanks to the ridge term. All-treated
    or all-control inputs carry no contrast to model and raise
    Degenerate.
    """
    y = np.asarray(treatment, dtype=float)
    x = np.asarray(confounders, dtype=float)
    if x.ndim == 1:
        x = x.reshape(len(y), 0) if x.size == 0 else x.reshape(len(y), -1)
    n_treated = int(y.sum())
    if n_treated == 0 or n_treated == len(y):
        raise Degenerate("treatment column is constant")
    design = np.column_stack([np.ones(len(y)), x])
    k = design.shape[1]
    penalty_mask = np.ones(k)
    penalty_mask[0] = 0.0

    beta = np.zeros(k)
    ll = penalized_log_likelihood(beta, y, x, ridge)
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        p = _sigmoid(design @ beta)
        grad = design.T @ (y - p) - ridge * penalty_mask * beta
        w = p * (1.0 - p)
        hess = design.T @ (design * w[:, None]) + ridge * np.diag(penalty_mask)
        hess[0, 0] += 1e-12  # guard: intercept row can go flat under saturation
        try:
            step = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(hess, grad, rcond=None)[0]
        # halve until the penalized likelihood stops decreasing
        scale = 1.0
        for _ in range(30):
            candidate = beta + scale * step
            new_ll = penalized_log_likelihood(candidate, y, x, ridge)
            if new_ll >= ll - 1e-12:
                break
            scale *= 0.5
        beta = beta + scale * step
        ll = penalized_log_likelihood(beta, y, x, ridge)
        if float(np.max(np.abs(scale * step))) < tol:
            converged = True
            break
    return PropensityModel(beta=beta, iterations=iterations,
                           log_likelihood=ll, ridge=ridge, converged=converged)


# -- matching ----------------------------------------------------------

@dataclass
class MatchedSample:
    """Match sets per retained unit. Treated units map to the control
    units they matched (exact distance ties all included), controls map
    back to the treated units that used them."""

    match_sets: dict[int, tuple[int, ...]]
    treated: tuple[int, ...]
    controls: tuple[int, ...]
    discarded: tuple[int, ...]
    strategy: str
    m: int = 1

    @property
    def retained(self) -> tuple[int, ...]:
        return tuple(sorted(self.match_sets))


def _logit(p: np.ndarray) -> np.ndarray:
    p = np.clip(p, 1e-15, 1.0 - 1e-15)
    return np.log(p / (1.0 - p))


def match_executions(treatment, propensities, strategy: str = "nearest",
                     caliper: float = 0.2) -> MatchedSample:
    """Pair covering (treated) with non-covering (control) executions.

    nearest: every treated unit takes its nearest admissible control by
    propensity difference, with replacement; admissible means within
    ``caliper`` standard deviations of the logit propensity. Exact ties
    are all kept. Unmatched units are discarded.

    full: greedy full matching; all units are kept, partitioned into
    blocks holding at least one unit of each side.
    """
    t = np.asarray(treatment).astype(bool)
    p = np.asarray(propensities, dtype=float)
    treated = [int(i) for i in np.flatnonzero(t)]
    controls = [int(i) for i in np.flatnonzero(~t)]
    if not treated or not controls:
        raise Degenerate("need at least one treated and one control unit")

    if strategy == "nearest":
        return _match_nearest(p, treated, controls, caliper)
    if strategy == "full":
        return _match_full(p, treated, controls)
    raise InputError(f"unknown matching strategy {strategy!r}")


def _match_nearest(p, treated, controls, caliper) -> MatchedSample:
    logits = _logit(p)
    cal = caliper * float(np.std(logits))
    match_sets: dict[int, tuple[int, ...]] = {}
    used_controls: dict[int, list[int]] = {}
    discarded = []
    for i in treated:
        admissible = [j for j in controls
                      if abs(logits[i] - logits[j]) <= cal + _TIE_EPS]
        if not admissible:
            discarded.append(i)
            continue
        dists = {j: abs(p[i] - p[j]) for j in admissible}
        dmin = min(dists.values())
        ties = tuple(j for j in admissible if dists[j] <= dmin + _TIE_EPS)
        match_sets[i] = ties
        for j in ties:
            used_controls.setdefault(j, []).append(i)
    if not match_sets:
        raise Degenerate("every treated unit fell outside the caliper")
    for j in controls:
        if j in used_controls:
            match_sets[j] = tuple(used_controls[j])
        else:
            discarded.append(j)
    return MatchedSample(match_sets=match_sets, treated=tuple(treated),
                         controls=tuple(controls),
                         discarded=tuple(sorted(discarded)), strategy="nearest")


def _match_full(p, treated, controls) -> MatchedSample:
    anchors, others = (treated, controls) if len(treated) <= len(controls) \
        else (controls, treated)
    blocks: dict[int, list[int]] = {a: [] for a in anchors}
    for u in others:
        best = min(anchors, key=lambda a: (abs(p[u] - p[a]), a))
        blocks[best].append(u)
    # fold anchors that attracted nothing into the nearest live block
    live = [a for a in anchors if blocks[a]]
    for a in anchors:
        if not blocks[a]:
            host = min(live, key=lambda b: (abs(p[a] - p[b]), b))
            blocks[host].append(a)
    treated_set = set(treated)
    match_sets: dict[int, tuple[int, ...]] = {}
    for anchor, rest in blocks.items():
        if not rest:
            continue
        members = [anchor] + rest
        block_treated = sorted(u for u in members if u in treated_set)
        block_controls = sorted(u for u in members if u not in treated_set)
        for u in block_treated:
            match_sets[u] = tuple(block_controls)
        for u in block_controls:
            match_sets[u] = tuple(block_treated)
    return MatchedSample(match_sets=match_sets, treated=tuple(treated),
                         controls=tuple(controls), discarded=(),
                         strategy="full")


# -- estimation --------------------------------------------------------

@dataclass
class CausalEffect:
    """Matched estimate of how covering the statement moves the failure
    indicator, with the imputed potential outcomes it came from."""

    statement: str
    tau_hat: float
    y0: dict[int, float] = field(default_factory=dict)
    y1: dict[int, float] = field(default_factory=dict)
    degenerate: bool = False
    reason: Optional[str] = None
    n_retained: int = 0


def impute_and_estimate(outcomes, matched: MatchedSample,
                        statement: str = "") -> CausalEffect:
    """Fill each retained unit's missing potential outcome with the
    average outcome of its matches; the effect is the mean imputed
    difference over retained units."""
    y = np.asarray(outcomes, dtype=float)
    treated_set = set(matched.treated)
    retained = matched.retained
    if not retained:
        raise Degenerate("no retained units after matching")
    y0: dict[int, float] = {}
    y1: dict[int, float] = {}
    for i in retained:
        matched_mean = float(np.mean([y[j] for j in matched.match_sets[i]]))
        if i in treated_set:
            y1[i] = float(y[i])
            y0[i] = matched_mean
        else:
            y0[i] = float(y[i])
            y1[i] = matched_mean
    tau = float(np.mean([y1[i] - y0[i] for i in retained]))
    return CausalEffect(statement=statement, tau_hat=tau, y0=y0, y1=y1,
                        n_retained=len(retained))


def _fallback_effect(statement, t, y, reason) -> CausalEffect:
    """Unadjusted risk difference; a side with no units contributes the
    overall failure rate instead."""
    overall = float(np.mean(y))
    covered = y[t == 1]
    uncovered = y[t == 0]
    mean_cov = float(np.mean(covered)) if covered.size else overall
    mean_unc = float(np.mean(uncovered)) if uncovered.size else overall
    return CausalEffect(statement=statement, tau_hat=mean_cov - mean_unc,
                        degenerate=True, reason=reason, n_retained=0)


def failure_causing_effect(statement: str, pdg: StaticPDG,
                           spectrum: SliceSpectrum,
                           config: CausalConfig = DEFAULT_CAUSAL_CONFIG) -> CausalEffect:
    """Full estimate for one statement: confounders from the PDG,
    propensity fit, matching, imputation.

    Never raises on degeneracy: statements covered by all or no tests,
    and matchings that discard everything, fall back to the unadjusted
    risk difference and are flagged.
    """
    t = spectrum.column(statement).astype(np.int64)
    y = spectrum.outcome_column().astype(float)
    if t.min() == t.max():
        return _fallback_effect(statement, t, y,
                                "constant coverage column")
    conf = confounder_vector(statement, pdg, spectrum)
    try:
        model = fit_propensity(t, conf.values, ridge=config.ridge)
        propensities = model.predict(conf.values)
        matched = match_executions(t, propensities, strategy=config.matching,
                                   caliper=config.caliper)
        effect = impute_and_estimate(y, matched, statement)
    except Degenerate as d:
        return _fallback_effect(statement, t, y, str(d))
    effect.tau_hat = min(1.0, max(-1.0, effect.tau_hat))
    return effect


def rank_chains(chains: Sequence[CauseEffectChain],
                effects: Mapping[str, CausalEffect],
                order: Optional[Mapping[str, int]] = None) -> list[CauseEffectChain]:
    """Order chains by mean member effect, descending. Ties go to the
    chain with the larger best member, then to source order. Members
    are sorted by effect for presentation."""
    if order is None:
        order = {s: i for i, s in enumerate(sorted(effects))}

    def agg(chain: CauseEffectChain) -> float:
        taus = [effects[m].tau_hat for m in chain.members]
        return float(np.mean(taus))

    for chain in chains:
        chain.aggregate_effect = agg(chain)
        chain.ordered_members = sorted(
            chain.members, key=lambda m: (-effects[m].tau_hat, order[m]))
    return sorted(chains, key=lambda c: (
        -c.aggregate_effect,
        -max(effects[m].tau_hat for m in c.members),
        min(order[m] for m in c.members),
    ))
