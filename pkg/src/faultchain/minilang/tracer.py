"""Deterministic tracing interpreter.

Every statement execution becomes an instance node in a per-test
dynamic dependence graph. Data edges run from a use instance to the
most recent defining instance of each used variable; control edges run
to the nearest enclosing predicate instance. Backward slices are plain
reachability over those edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from ..errors import InputError
from ..spectrum import (MODE_COVERAGE, MODE_SLICE, SliceSpectrum, TestCase,
                        classify_tests)
from .parser import Binary, BoolLit, IntLit, Program, Statement, Unary, Var
from .pdg import CONTROL, DATA

DEFAULT_STEP_LIMIT = 10 ** 6


class Instance(NamedTuple):
    """One execution of a statement: (statement id, occurrence index)."""
    statement: str
    occurrence: int


@dataclass
class DynamicDependenceGraph:
    """Per-test instance-level dependence graph, acyclic by construction
    (instances only depend on earlier instances)."""

    nodes: list[Instance] = field(default_factory=list)
    edges: list[tuple[Instance, Instance, str]] = field(default_factory=list)

    def __post_init__(self):
        self._out: dict[Instance, list[tuple[Instance, str]]] = {}

    def add_node(self, inst: Instance) -> None:
        self.nodes.append(inst)
        self._out[inst] = []

    def add_edge(self, src: Instance, dst: Instance, kind: str) -> None:
        self.edges.append((src, dst, kind))
        self._out[src].append((dst, kind))

    def dependencies(self, inst: Instance) -> list[tuple[Instance, str]]:
        return self._out[inst]

    def __contains__(self, inst: Instance) -> bool:
        return inst in self._out

    def to_dict(self) -> dict:
        return {
            "nodes": [{"statement": i.statement, "occurrence": i.occurrence}
                      for i in self.nodes],
            "edges": [{"src": {"statement": s.statement, "occurrence": s.occurrence},
                       "dst": {"statement": d.statement, "occurrence": d.occurrence},
                       "type": k}
                      for s, d, k in self.edges],
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


@dataclass(frozen=True)
class BackwardDynamicSlice:
    root: Instance
    instances: frozenset
    statements: frozenset


@dataclass
class RunTrace:
    """Everything one traced execution produced."""
    outputs: tuple                      # printed values, return value last
    output_instances: tuple             # Instance per output element
    crashed: bool
    crash_reason: Optional[str]
    ddg: DynamicDependenceGraph
    covered: frozenset                  # statement ids

    @property
    def observed_output(self):
        if self.crashed:
            return None
        if len(self.outputs) == 1:
            return self.outputs[0]
        return tuple(self.outputs)


class _Crash(Exception):
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class _Halt(Exception):
    pass


class _Tracer:
    def __init__(self, program: Program, inputs, step_limit: int):
        self.program = program
        self.inputs = dict(inputs)
        self.step_limit = step_limit
        self.steps = 0
        self.occurrences: dict[str, int] = {}
        self.env: dict[str, tuple[int, Instance]] = {}
        self.control: list[Instance] = []
        self.ddg = DynamicDependenceGraph()
        self.outputs: list = []
        self.output_instances: list[Instance] = []

    def new_instance(self, stmt: Statement) -> Instance:
        self.steps += 1
        if self.steps > self.step_limit:
            raise _Crash("step limit exceeded")
        occ = self.occurrences.get(stmt.sid, 0)
        self.occurrences[stmt.sid] = occ + 1
        inst = Instance(stmt.sid, occ)
        self.ddg.add_node(inst)
        if self.control:
            self.ddg.add_edge(inst, self.control[-1], CONTROL)
        return inst

    def eval(self, node, inst: Instance):
        """Evaluate an expression, wiring data edges from inst to the
        defining instances of every variable read."""
        if isinstance(node, IntLit):
            return node.value
        if isinstance(node, BoolLit):
            return node.value
        if isinstance(node, Var):
            value, def_inst = self.env[node.name]
            self.ddg.add_edge(inst, def_inst, DATA)
            return value
        if isinstance(node, Unary):
            if node.op == "!":
                return not self.eval(node.operand, inst)
            return -self.eval(node.operand, inst)
        if isinstance(node, Binary):
            # && and || still evaluate both sides: dependence recording
            # stays total and the language has no effectful expressions.
            left = self.eval(node.left, inst)
            right = self.eval(node.right, inst)
            return self.apply(node.op, left, right)
        raise ValueError(f"cannot evaluate {node!r}")

    def apply(self, op, left, right):
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            if right == 0:
                raise _Crash("division by zero")
            q = abs(left) // abs(right)
            return q if (left >= 0) == (right >= 0) else -q
        if op == "<":
            return left < right
        if op == "<=":
            return left <= right
        if op == ">":
            return left > right
        if op == ">=":
            return left >= right
        if op == "==":
            return left == right
        if op == "!=":
            return left != right
        if op == "&&":
            return left and right
        if op == "||":
            return left or right
        raise ValueError(op)

    def exec_block(self, stmts: Sequence[Statement]) -> None:
        for stmt in stmts:
            self.exec_stmt(stmt)

    def exec_stmt(self, stmt: Statement) -> None:
        if stmt.kind == "Read":
            inst = self.new_instance(stmt)
            for name in stmt.targets:
                if name not in self.inputs:
                    raise InputError(f"input variable {name!r} not bound")
                self.env[name] = (int(self.inputs[name]), inst)
        elif stmt.kind == "Assign":
            inst = self.new_instance(stmt)
            value = self.eval(stmt.expr, inst)
            self.env[stmt.name] = (value, inst)
        elif stmt.kind == "Print":
            inst = self.new_instance(stmt)
            self.outputs.append(self.eval(stmt.expr, inst))
            self.output_instances.append(inst)
        elif stmt.kind == "Return":
            inst = self.new_instance(stmt)
            self.outputs.append(self.eval(stmt.expr, inst))
            self.output_instances.append(inst)
            raise _Halt()
        elif stmt.kind == "If":
            inst = self.new_instance(stmt)
            taken = self.eval(stmt.expr, inst)
            branch = stmt.body if taken else stmt.else_body
            if branch:
                self.control.append(inst)
                try:
                    self.exec_block(branch)
                finally:
                    self.control.pop()
        elif stmt.kind == "While":
            while True:
                inst = self.new_instance(stmt)
                if not self.eval(stmt.expr, inst):
                    break
                self.control.append(inst)
                try:
                    self.exec_block(stmt.body)
                finally:
                    self.control.pop()
        else:
            raise ValueError(stmt.kind)

    def run(self) -> RunTrace:
        crashed = False
        reason = None
        try:
            self.exec_block(self.program.top)
        except _Halt:
            pass
        except _Crash as c:
            crashed = True
            reason = c.reason
        covered = frozenset(self.occurrences)
        return RunTrace(tuple(self.outputs), tuple(self.output_instances),
                        crashed, reason, self.ddg, covered)


def run_with_trace(program: Program, inputs,
                   step_limit: int = DEFAULT_STEP_LIMIT) -> RunTrace:
    """Execute a program on one input binding, recording the DDG.

    Division truncates toward zero; division by zero and exceeding the
    step limit are crash results, not exceptions. Unbound input
    variables are an input error.
    """
    missing = [v for v in program.read_variables() if v not in inputs]
    if missing:
        raise InputError(f"inputs missing for variables: {', '.join(sorted(set(missing)))}")
    return _Tracer(program, inputs, step_limit).run()


def backward_slice(ddg: DynamicDependenceGraph, root: Instance) -> BackwardDynamicSlice:
    """All instances reachable from root over data and control edges,
    projected onto statement ids."""
    if root not in ddg:
        raise InputError(f"instance {root} not in dependence graph")
    seen = {root}
    stack = [root]
    while stack:
        inst = stack.pop()
        for dep, _kind in ddg.dependencies(inst):
            if dep not in seen:
                seen.add(dep)
                stack.append(dep)
    return BackwardDynamicSlice(root, frozenset(seen),
                                frozenset(i.statement for i in seen))


def run_suite(program: Program, suite: Sequence[TestCase],
              step_limit: int = DEFAULT_STEP_LIMIT) -> list[RunTrace]:
    """Execute every test, filling observed outputs and crash flags, and
    assign verdicts. Returns one trace per test, aligned with suite."""
    traces = []
    for tc in suite:
        trace = run_with_trace(program, tc.inputs, step_limit)
        tc.observed_output = trace.observed_output
        tc.crashed = trace.crashed
        traces.append(trace)
    classify_tests(suite)
    return traces


def mismatching_output_roots(trace: RunTrace, tc: TestCase) -> list[Instance]:
    """Output instances of a failing run whose values differ from the
    expected elements. Empty when the run crashed before any output."""
    expected = tc.expected_output
    expected_seq = tuple(expected) if isinstance(expected, (list, tuple)) else (expected,)
    roots = [inst for i, inst in enumerate(trace.output_instances)
             if i >= len(expected_seq) or trace.outputs[i] != expected_seq[i]]
    if not roots:
        # failure came from a crash or missing trailing outputs; every
        # produced output is suspect
        roots = list(trace.output_instances)
    return roots


def _slice_row(trace: RunTrace, tc: TestCase) -> frozenset:
    """Statement set for one slice-spectrum row.

    Failing tests slice from every output instance whose value differs
    from the expected element, passing tests from all output instances.
    Crashes leave no output instance to slice from; the coverage row
    stands in.
    """
    if trace.crashed or not trace.output_instances:
        return trace.covered
    if tc.verdict == "fail":
        roots = mismatching_output_roots(trace, tc)
    else:
        roots = list(trace.output_instances)
    statements: set[str] = set()
    for root in roots:
        statements |= backward_slice(trace.ddg, root).statements
    return frozenset(statements)


def spectra_from_traces(program: Program, suite: Sequence[TestCase],
                        traces: Sequence[RunTrace], mode: str) -> SliceSpectrum:
    """Assemble a spectrum from already-executed, classified tests."""
    statements = program.statement_ids()
    rows = []
    for tc, trace in zip(suite, traces):
        members = trace.covered if mode == MODE_COVERAGE else _slice_row(trace, tc)
        rows.append([1 if s in members else 0 for s in statements])
    verdicts = [tc.verdict for tc in suite]
    return SliceSpectrum(statements, [tc.id for tc in suite], rows, verdicts, mode)


def build_slice_spectrum(program: Program, suite: Sequence[TestCase],
                         mode: str = MODE_SLICE,
                         step_limit: int = DEFAULT_STEP_LIMIT) -> SliceSpectrum:
    """Trace the whole suite and build a spectrum in the given mode."""
    if not program.has_output():
        raise InputError("program has no output statement")
    traces = run_suite(program, suite, step_limit)
    return spectra_from_traces(program, suite, traces, mode)
