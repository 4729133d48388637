"""Mini-language front end, tracing interpreter, and dependence graphs."""

from .parser import ParseError, Program, parse, render_program
from .pdg import StaticPDG, static_pdg
from .tracer import (BackwardDynamicSlice, DynamicDependenceGraph, Instance,
                     RunTrace, backward_slice, build_slice_spectrum,
                     run_suite, run_with_trace, spectra_from_traces)

__all__ = [
    "ParseError", "Program", "parse", "render_program",
    "StaticPDG", "static_pdg",
    "BackwardDynamicSlice", "DynamicDependenceGraph", "Instance", "RunTrace",
    "backward_slice", "build_slice_spectrum", "run_suite", "run_with_trace",
    "spectra_from_traces",
]
