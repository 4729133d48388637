"""Test suites, verdicts, coverage/slice matrices, and the per-statement
count statistics every suspiciousness formula consumes.

A spectrum is a boolean test x statement matrix plus per-test verdicts.
Rows come either from raw coverage or from backward dynamic slices of
the run's output values; the ``mode`` flag records which.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Optional, Sequence

import numpy as np

from .errors import InputError, PreconditionError

PASS = "pass"
FAIL = "fail"

MODE_COVERAGE = "coverage"
MODE_SLICE = "slice"


@dataclass
class TestCase:
    """One test: named input bindings, the desired output, and what the
    run actually produced.

    ``expected_output``/``observed_output`` are scalars or tuples of
    scalars (multi-output programs). ``crashed`` marks runs that died
    before producing output; those are always failing.
    """

    __test__ = False  # keep pytest from collecting the domain type

    id: str
    inputs: Mapping[str, int] = field(default_factory=dict)
    expected_output: object = None
    observed_output: object = None
    crashed: bool = False
    verdict: Optional[str] = None


def _as_output(value):
    if isinstance(value, (list, tuple)):
        return tuple(value)
    return (value,)


def classify_tests(suite: Sequence[TestCase]) -> list[TestCase]:
    """Assign a pass/fail verdict to every test.

    A test fails iff its observed output differs from the expected one,
    or the run crashed. Crashes count as failures even without output.
    """
    seen = set()
    for tc in suite:
        if tc.id in seen:
            raise InputError(f"duplicate test id {tc.id!r}")
        seen.add(tc.id)
        if tc.expected_output is None:
            raise InputError(f"test {tc.id!r} has no expected output")
        if tc.crashed:
            tc.verdict = FAIL
        elif tc.observed_output is None:
            raise InputError(f"test {tc.id!r} has neither observed output nor crash flag")
        else:
            same = _as_output(tc.observed_output) == _as_output(tc.expected_output)
            tc.verdict = PASS if same else FAIL
    return list(suite)


class SliceSpectrum:
    """Immutable test x statement boolean matrix with verdicts.

    ``matrix[i, j]`` says whether test ``tests[i]`` covers (or slices
    through) statement ``statements[j]``.
    """

    def __init__(self, statements: Sequence[str], tests: Sequence[str],
                 matrix, verdicts: Sequence[str], mode: str = MODE_COVERAGE):
        statements = tuple(statements)
        tests = tuple(tests)
        if len(set(statements)) != len(statements):
            raise InputError("duplicate statement ids in spectrum")
        if len(set(tests)) != len(tests):
            raise InputError("duplicate test ids in spectrum")
        if mode not in (MODE_COVERAGE, MODE_SLICE):
            raise InputError(f"unknown spectrum mode {mode!r}")
        m = np.asarray(matrix, dtype=np.uint8)
        if m.ndim != 2 or m.shape != (len(tests), len(statements)):
            raise InputError(
                f"matrix shape {m.shape} does not match "
                f"{len(tests)} tests x {len(statements)} statements")
        verdicts = tuple(verdicts)
        if len(verdicts) != len(tests):
            raise InputError("one verdict required per test")
        if any(v not in (PASS, FAIL) for v in verdicts):
            raise InputError("verdicts must be 'pass' or 'fail'")
        m = np.ascontiguousarray(m)
        m.flags.writeable = False
        self.statements = statements
        self.tests = tests
        self.matrix = m
        self.verdicts = verdicts
        self.mode = mode
        self._index = {s: i for i, s in enumerate(statements)}
        fails = np.array([v == FAIL for v in verdicts], dtype=bool)
        fails.flags.writeable = False
        self._fail_mask = fails

    # -- accessors ---------------------------------------------------

    @property
    def n_fail(self) -> int:
        return int(self._fail_mask.sum())

    @property
    def n_pass(self) -> int:
        return len(self.tests) - self.n_fail

    @property
    def fail_mask(self) -> np.ndarray:
        return self._fail_mask

    def outcome_column(self) -> np.ndarray:
        """Failure indicator per test as a contiguous uint8 column."""
        return np.ascontiguousarray(self._fail_mask, dtype=np.uint8)

    def column(self, statement: str) -> np.ndarray:
        try:
            j = self._index[statement]
        except KeyError:
            raise InputError(f"statement {statement!r} not in spectrum") from None
        return np.ascontiguousarray(self.matrix[:, j])

    def statement_index(self, statement: str) -> int:
        return self._index[statement]

    def __contains__(self, statement: str) -> bool:
        return statement in self._index

    def __eq__(self, other) -> bool:
        return (isinstance(other, SliceSpectrum)
                and self.statements == other.statements
                and self.tests == other.tests
                and self.verdicts == other.verdicts
                and self.mode == other.mode
                and np.array_equal(self.matrix, other.matrix))

    def __repr__(self) -> str:
        return (f"SliceSpectrum({len(self.tests)} tests x "
                f"{len(self.statements)} statements, mode={self.mode}, "
                f"{self.n_fail} failing)")

    def require_failing_test(self) -> None:
        if self.n_fail == 0:
            raise PreconditionError("spectrum has no failing test")


class StatementCounts(NamedTuple):
    n_cf: int
    n_uf: int
    n_cp: int
    n_up: int


class SpectrumStats:
    """Per-statement covered/uncovered x failed/passed counts.

    For every statement n_cf + n_uf = n_f and n_cp + n_up = n_p.
    """

    def __init__(self, statements, n_cf, n_uf, n_cp, n_up, n_f, n_p):
        self.statements = tuple(statements)
        self.n_cf = n_cf
        self.n_uf = n_uf
        self.n_cp = n_cp
        self.n_up = n_up
        self.n_f = int(n_f)
        self.n_p = int(n_p)
        self._index = {s: i for i, s in enumerate(self.statements)}

    def counts(self, statement: str) -> StatementCounts:
        i = self._index[statement]
        return StatementCounts(int(self.n_cf[i]), int(self.n_uf[i]),
                               int(self.n_cp[i]), int(self.n_up[i]))


def build_stats(spectrum: SliceSpectrum) -> SpectrumStats:
    """Count covering failed/passed tests per statement.

    Refuses spectra without a failing test: every downstream formula
    divides by n_f.
    """
    spectrum.require_failing_test()
    fails = spectrum.fail_mask
    m = spectrum.matrix.astype(np.int64)
    n_cf = m[fails].sum(axis=0)
    n_cp = m[~fails].sum(axis=0)
    n_f = int(fails.sum())
    n_p = len(spectrum.tests) - n_f
    return SpectrumStats(spectrum.statements, n_cf, n_f - n_cf,
                         n_cp, n_p - n_cp, n_f, n_p)


# -- serialization ---------------------------------------------------

def spectrum_to_dict(spectrum: SliceSpectrum) -> dict:
    return {
        "statements": list(spectrum.statements),
        "tests": [{"id": t, "verdict": v}
                  for t, v in zip(spectrum.tests, spectrum.verdicts)],
        "matrix": spectrum.matrix.astype(int).tolist(),
        "mode": spectrum.mode,
    }


def spectrum_from_dict(data: Mapping) -> SliceSpectrum:
    try:
        statements = list(data["statements"])
        tests = [t["id"] for t in data["tests"]]
        verdicts = [t["verdict"] for t in data["tests"]]
        matrix = data["matrix"]
        mode = data.get("mode", MODE_COVERAGE)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed spectrum object: {exc}") from exc
    if len(matrix) != len(tests):
        raise InputError(
            f"matrix has {len(matrix)} rows for {len(tests)} tests")
    for t, row in zip(tests, matrix):
        if len(row) != len(statements):
            raise InputError(
                f"matrix row for test {t!r} has {len(row)} entries, "
                f"expected {len(statements)}")
        if any(v not in (0, 1) for v in row):
            raise InputError(f"matrix row for test {t!r} has non-boolean entries")
    return SliceSpectrum(statements, tests, matrix, verdicts, mode)


def save_spectrum(spectrum: SliceSpectrum, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spectrum_to_dict(spectrum), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_spectrum(path) -> SliceSpectrum:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise InputError(f"spectrum file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"spectrum file {path} is not valid JSON: {exc}") from exc
    return spectrum_from_dict(data)
