"""Dynamic-weighting statement selection and cause-effect chains.

Each round scores every candidate with J(s) = R(s,Out) * w(s) * RC(s),
moves the argmax into the selected set, then reweights everything else
by its correlation ratio with the new pick: w(i) *= 1 + CR(i, chosen).
Selected statements are chained over the static PDG as they arrive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import InputError, PreconditionError
from .infotheory import DEFAULT_CONFIG, EntropyConfig, MeasureCache, relevance_class
from .minilang.pdg import StaticPDG
from .spectrum import SliceSpectrum, build_stats

WEIGHT_FLOOR = 1e-9
DEFAULT_DELTA_FRACTION = 0.30
DEFAULT_CHAIN_CAP = 5


@dataclass
class CauseEffectChain:
    """Statements linked by PDG dependence edges, presented together as
    one failure context. ``links`` are PDG edges between members;
    ``ordered_members`` is filled at ranking time (effect descending)."""

    members: set = field(default_factory=set)
    links: set = field(default_factory=set)  # (src, dst, type) PDG edges
    aggregate_effect: Optional[float] = None
    ordered_members: Optional[list] = None

    def sorted_members(self, order: Mapping[str, int]) -> list[str]:
        return sorted(self.members, key=lambda s: order[s])


@dataclass
class SelectionState:
    """Evolving loop state: remaining candidates, picks, and weights."""

    candidates: list[str]
    selected: list[str]
    weights: dict[str, float]
    iteration: int
    delta: int
    chain_cap: int


@dataclass
class SelectionStep:
    """One loop round, in the order things happened: the correlation
    update from the previous pick, the weights this round scored with,
    the scores, and the pick."""

    index: int
    cr_update: dict[str, float]
    weights: dict[str, float]
    scores: dict[str, float]
    chosen: str


@dataclass
class SelectionResult:
    selected: list[str]
    chains: list[CauseEffectChain]
    weights: dict[str, float]
    steps: list[SelectionStep]
    candidates: list[str]


def informative_candidates(spectrum: SliceSpectrum) -> list[str]:
    """Statements whose column varies across the suite.

    Constant columns carry no information (H = 0, J pinned at 0) and
    are never selectable on merit; in slice mode this also drops
    statements outside every slice.
    """
    return [s for s in spectrum.statements
            if 0 < int(spectrum.column(s).sum()) < len(spectrum.tests)]


def initialize(spectrum: SliceSpectrum,
               priors: Optional[Mapping[str, float]] = None,
               delta_fraction: float = DEFAULT_DELTA_FRACTION,
               delta: Optional[int] = None,
               chain_cap: int = DEFAULT_CHAIN_CAP) -> SelectionState:
    """Set up the loop: unit weights plus optional fault-proneness
    priors, and the selection budget delta."""
    spectrum.require_failing_test()
    priors = dict(priors or {})
    for s, p in priors.items():
        if p < 0:
            raise InputError(f"negative prior for {s!r}")
    candidates = informative_candidates(spectrum)
    weights = {s: 1.0 + priors.get(s, 0.0) for s in candidates}
    if delta is None:
        delta = math.ceil(delta_fraction * len(candidates))
    return SelectionState(candidates=list(candidates), selected=[],
                          weights=weights, iteration=0, delta=delta,
                          chain_cap=chain_cap)


def score_candidates(state: SelectionState, cache: MeasureCache,
                     rc: Mapping[str, int]) -> dict[str, float]:
    return {s: cache.relevance(s) * state.weights[s] * rc[s]
            for s in state.candidates}


def select_next(state: SelectionState, scores: Mapping[str, float],
                order: Mapping[str, int]) -> str:
    """Argmax of J; ties break toward the earliest statement in source
    order, keeping runs deterministic."""
    if not state.candidates:
        raise PreconditionError("no candidates left to select")
    chosen = max(state.candidates, key=lambda s: (scores[s], -order[s]))
    state.candidates.remove(chosen)
    state.selected.append(chosen)
    return chosen


def update_weights(state: SelectionState, chosen: str,
                   cache: MeasureCache) -> dict[str, float]:
    """Reweight every other statement (already-selected ones included,
    for diagnostics) by its correlation with the new pick."""
    crs: dict[str, float] = {}
    for s in state.candidates + [x for x in state.selected if x != chosen]:
        record = cache.correlation_ratio(s, chosen)
        crs[s] = record.cr
        state.weights[s] = max(WEIGHT_FLOOR, state.weights[s] * (1.0 + record.cr))
    return crs


def attach_to_chains(chains: list[CauseEffectChain], chosen: str,
                     pdg: StaticPDG, chain_cap: int) -> list[CauseEffectChain]:
    """Place a newly selected statement among the chains.

    Adjacent to exactly one chain: join it, recording the dependence
    edges. Adjacent to several: merge them all. Adjacent to none: open
    a new chain while the cap allows, otherwise the statement stays
    selected but unchained.
    """
    adjacent = [c for c in chains
                if any(pdg.edges_between(chosen, m) for m in c.members)]
    if not adjacent:
        if len(chains) < chain_cap:
            chains.append(CauseEffectChain(members={chosen}))
        return chains
    target = adjacent[0]
    for other in adjacent[1:]:
        target.members |= other.members
        target.links |= other.links
        chains.remove(other)
    new_links = set()
    for m in sorted(target.members):
        new_links.update(pdg.edges_between(chosen, m))
    target.members.add(chosen)
    target.links |= new_links
    return chains


def run_selection(spectrum: SliceSpectrum, pdg: StaticPDG,
                  cfg: EntropyConfig = DEFAULT_CONFIG,
                  priors: Optional[Mapping[str, float]] = None,
                  delta_fraction: float = DEFAULT_DELTA_FRACTION,
                  delta: Optional[int] = None,
                  chain_cap: int = DEFAULT_CHAIN_CAP) -> SelectionResult:
    """The full loop: score, pick, reweight, chain, until the budget is
    spent (|selected| reaches delta + 1) or candidates run out."""
    state = initialize(spectrum, priors, delta_fraction, delta, chain_cap)
    initial_candidates = list(state.candidates)
    stats = build_stats(spectrum)
    rc = {s: relevance_class(stats, s) for s in spectrum.statements}
    cache = MeasureCache(spectrum, cfg)
    order = {s: i for i, s in enumerate(spectrum.statements)}

    chains: list[CauseEffectChain] = []
    steps: list[SelectionStep] = []
    cr_update: dict[str, float] = {}
    while state.iteration <= state.delta and state.candidates:
        scores = score_candidates(state, cache, rc)
        weights_used = dict(state.weights)
        chosen = select_next(state, scores, order)
        steps.append(SelectionStep(index=state.iteration + 1,
                                   cr_update=cr_update, weights=weights_used,
                                   scores=scores, chosen=chosen))
        cr_update = update_weights(state, chosen, cache)
        chains = attach_to_chains(chains, chosen, pdg, state.chain_cap)
        state.iteration += 1

    return SelectionResult(selected=list(state.selected), chains=chains,
                           weights=dict(state.weights), steps=steps,
                           candidates=initial_candidates)
