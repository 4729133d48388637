"""Entropy, mutual information, and the correlation machinery over
boolean spectrum columns.

All measures run on empirical frequencies with no smoothing and a
pluggable convex generator function phi: the entropy of a column is
``-sum(phi(p))`` over its empirical distribution, and mutual
information uses the linearized form ``H(X) - sum_y p(y) H(X|Y=y)``.
The default phi reproduces Shannon in bits, which is the reference
configuration for every pinned value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._kernels import cmi_bits, counts1, counts2, counts3, h_bits, mi_bits
from .errors import InputError
from .spectrum import SliceSpectrum, SpectrumStats

_NEG_FUZZ = -1e-9


def shannon_phi(base: float = 2.0) -> Callable[[float], float]:
    log_base = math.log(base)

    def phi(p: float) -> float:
        if p <= 0.0:
            return 0.0
        return p * math.log(p) / log_base

    return phi


def gini_phi(base: float = 2.0) -> Callable[[float], float]:
    # base unused; kept so all generators share a signature
    def phi(p: float) -> float:
        return p * p - p

    return phi


PHI_GENERATORS = {"shannon": shannon_phi, "gini": gini_phi}


@dataclass
class EntropyConfig:
    """Measure configuration: generator function and log base.

    The stock Shannon/bits configuration routes through the fused
    kernels; anything else (named generators, other bases, or a
    user-supplied phi) takes the generic path below.
    """

    phi_name: str = "shannon"
    base: float = 2.0
    phi: Callable[[float], float] = field(default=None, repr=False)

    def __post_init__(self):
        self.fast_shannon = (self.phi is None and self.phi_name == "shannon"
                             and self.base == 2.0)
        if self.phi is None:
            try:
                self.phi = PHI_GENERATORS[self.phi_name](self.base)
            except KeyError:
                raise InputError(
                    f"unknown phi {self.phi_name!r}; expected one of "
                    f"{sorted(PHI_GENERATORS)}") from None


DEFAULT_CONFIG = EntropyConfig()


def as_column(samples) -> np.ndarray:
    """Normalize samples to a contiguous uint8 0/1 column."""
    col = np.ascontiguousarray(samples, dtype=np.uint8)
    if col.ndim != 1:
        raise InputError("samples must be one-dimensional")
    if col.size == 0:
        raise InputError("empty sample column")
    if col.max(initial=0) > 1:
        raise InputError("samples must be boolean (0/1)")
    return col


def _h_from_counts(cells, total: int, cfg: EntropyConfig) -> float:
    if total == 0:
        return 0.0
    return -sum(cfg.phi(c / total) for c in cells if c)


def _clamp_tiny(value: float) -> float:
    return 0.0 if _NEG_FUZZ < value < 0.0 else value


def entropy(samples, cfg: EntropyConfig = DEFAULT_CONFIG) -> float:
    """H(X) of a boolean column, in cfg's units (bits by default)."""
    x = as_column(samples)
    if cfg.fast_shannon:
        return h_bits(x)
    cells = counts1(x)
    return _h_from_counts(cells, len(x), cfg)


def mutual_information(x_samples, y_samples,
                       cfg: EntropyConfig = DEFAULT_CONFIG) -> float:
    """I(X;Y) as the entropy of X minus its expected conditional
    entropy given Y. Non-negative under the default phi."""
    x = as_column(x_samples)
    y = as_column(y_samples)
    if len(x) != len(y):
        raise InputError("paired samples must have equal length")
    if cfg.fast_shannon:
        return _clamp_tiny(mi_bits(x, y))
    n = len(x)
    c = counts2(x, y)  # index x*2 + y
    h_x = _h_from_counts((c[0] + c[1], c[2] + c[3]), n, cfg)
    total = h_x
    for y_val in (0, 1):
        n_y = c[y_val] + c[2 + y_val]
        if n_y:
            total -= (n_y / n) * _h_from_counts((c[y_val], c[2 + y_val]), n_y, cfg)
    return _clamp_tiny(total)


def conditional_mutual_information(x_samples, y_samples, z_samples,
                                   cfg: EntropyConfig = DEFAULT_CONFIG) -> float:
    """I(X;Y|Z): the Z-stratified expectation of I(X;Y) within each
    stratum. Equals Shannon CMI under the default phi."""
    x = as_column(x_samples)
    y = as_column(y_samples)
    z = as_column(z_samples)
    if not (len(x) == len(y) == len(z)):
        raise InputError("paired samples must have equal length")
    if cfg.fast_shannon:
        return _clamp_tiny(cmi_bits(x, y, z))
    n = len(x)
    c = counts3(x, y, z)  # index x*4 + y*2 + z
    total = 0.0
    for z_val in (0, 1):
        cell = lambda xv, yv: c[(xv << 2) | (yv << 1) | z_val]
        n_z = sum(cell(xv, yv) for xv in (0, 1) for yv in (0, 1))
        if not n_z:
            continue
        h_x_z = _h_from_counts((cell(0, 0) + cell(0, 1),
                                cell(1, 0) + cell(1, 1)), n_z, cfg)
        inner = h_x_z
        for y_val in (0, 1):
            n_yz = cell(0, y_val) + cell(1, y_val)
            if n_yz:
                inner -= (n_yz / n_z) * _h_from_counts(
                    (cell(0, y_val), cell(1, y_val)), n_yz, cfg)
        total += (n_z / n) * inner
    return _clamp_tiny(total)


def symmetric_uncertainty(x_samples, y_samples,
                          cfg: EntropyConfig = DEFAULT_CONFIG) -> float:
    """Normalized mutual information 2*I/(H(X)+H(Y)), clamped to [0,1].

    When both columns are constant the measure is undefined; 0.0 is
    returned (the pair carries no information either way).
    """
    x = as_column(x_samples)
    y = as_column(y_samples)
    denom = entropy(x, cfg) + entropy(y, cfg)
    if denom == 0.0:
        return 0.0
    u = 2.0 * mutual_information(x, y, cfg) / denom
    return min(1.0, max(0.0, u))


REDUNDANT = "redundant"
INTERDEPENDENT = "interdependent"


@dataclass(frozen=True)
class CorrelationRecord:
    """Signed, normalized change of statement i's relevance to the
    outcome when conditioning on statement j."""

    i: str
    j: str
    cmi: float
    mi: float
    cr: float
    kind: str
    degenerate: bool = False


def correlation_ratio(i: str, j: str, spectrum: SliceSpectrum,
                      cfg: EntropyConfig = DEFAULT_CONFIG) -> CorrelationRecord:
    """CR(i, j) = 2*(I(s_i;Out|s_j) - I(s_i;Out)) / (H(s_i) + H(Out)).

    Positive means j's knowledge raises i's relevance to the outcome
    (interdependent), negative means it lowers it (redundant). The
    boundary cmi == mi counts as interdependent with cr = 0.
    """
    if i == j:
        raise InputError("correlation ratio needs two distinct statements")
    x = spectrum.column(i)
    z = spectrum.column(j)
    out = spectrum.outcome_column()
    mi = mutual_information(x, out, cfg)
    cmi = conditional_mutual_information(x, out, z, cfg)
    denom = entropy(x, cfg) + entropy(out, cfg)
    if denom == 0.0:
        return CorrelationRecord(i, j, cmi, mi, 0.0, INTERDEPENDENT, degenerate=True)
    cr = 2.0 * (cmi - mi) / denom
    cr = min(1.0, max(-1.0, cr))
    kind = INTERDEPENDENT if cmi >= mi else REDUNDANT
    return CorrelationRecord(i, j, cmi, mi, cr, kind)


def relevance_class(stats: SpectrumStats, statement: str) -> int:
    """+1 when the statement sits closer to failing runs than passing
    ones, else -1. Ties go to -1."""
    c = stats.counts(statement)
    if stats.n_f < 1:
        raise InputError("relevance class needs at least one failing test")
    fail_side = (c.n_cf - c.n_uf) / stats.n_f
    pass_side = (c.n_cp - c.n_up) / stats.n_p if stats.n_p > 0 else -1.0
    return 1 if fail_side > pass_side else -1


class MeasureCache:
    """Per-spectrum memo for the selection loop's hot measures."""

    def __init__(self, spectrum: SliceSpectrum, cfg: EntropyConfig = DEFAULT_CONFIG):
        self.spectrum = spectrum
        self.cfg = cfg
        self._out = spectrum.outcome_column()
        self._h_out = entropy(self._out, cfg)
        self._h: dict[str, float] = {}
        self._mi_out: dict[str, float] = {}

    def h(self, s: str) -> float:
        if s not in self._h:
            self._h[s] = entropy(self.spectrum.column(s), self.cfg)
        return self._h[s]

    def mi_out(self, s: str) -> float:
        if s not in self._mi_out:
            self._mi_out[s] = mutual_information(self.spectrum.column(s),
                                                 self._out, self.cfg)
        return self._mi_out[s]

    def relevance(self, s: str) -> float:
        denom = self.h(s) + self._h_out
        if denom == 0.0:
            return 0.0
        return min(1.0, max(0.0, 2.0 * self.mi_out(s) / denom))

    def correlation_ratio(self, i: str, j: str) -> CorrelationRecord:
        cmi = conditional_mutual_information(
            self.spectrum.column(i), self._out, self.spectrum.column(j), self.cfg)
        mi = self.mi_out(i)
        denom = self.h(i) + self._h_out
        if denom == 0.0:
            return CorrelationRecord(i, j, cmi, mi, 0.0, INTERDEPENDENT, degenerate=True)
        cr = min(1.0, max(-1.0, 2.0 * (cmi - mi) / denom))
        kind = INTERDEPENDENT if cmi >= mi else REDUNDANT
        return CorrelationRecord(i, j, cmi, mi, cr, kind)
