"""Slice-spectrum fault localization.

Statements are selected by a dynamically reweighted relevance score,
linked into cause-effect chains over the program dependence graph, and
ranked by their matched causal effect on the failure indicator.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .errors import FaultchainError, InputError, ParseError, PreconditionError
from .infotheory import (EntropyConfig, conditional_mutual_information,
                         correlation_ratio, entropy, mutual_information,
                         relevance_class, symmetric_uncertainty)
from .pipeline import PipelineConfig, localize, localize_source, trace_case
from .spectrum import (SliceSpectrum, SpectrumStats, TestCase, build_stats,
                       classify_tests, load_spectrum, save_spectrum)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND", "__version__",
    "FaultchainError", "InputError", "ParseError", "PreconditionError",
    "EntropyConfig", "entropy", "mutual_information",
    "conditional_mutual_information", "symmetric_uncertainty",
    "correlation_ratio", "relevance_class",
    "PipelineConfig", "localize", "localize_source", "trace_case",
    "SliceSpectrum", "SpectrumStats", "TestCase", "build_stats",
    "classify_tests", "load_spectrum", "save_spectrum",
]
