"""Golden and seeded-fault corpora.

The golden case is a small three-operation calculator with a seeded
wrong-variable fault whose suite splits 6 failing / 6 passing; its
expected scores are pinned in data and diffed by the test runner.
Seeded cases are generated mini-language programs with 1-3 mutations,
each validated to fail somewhere, pass somewhere, and never crash.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .errors import InputError
from .minilang.parser import (Binary, IntLit, Program, Statement,
                              Unary, Var, parse, render_expr,
                              render_statement_line)
from .minilang.tracer import run_with_trace
from .spectrum import TestCase

GOLDEN_NAME = "golden-calculator"

GOLDEN_SOURCE = """\
read(a, b, c);
result = 0;
rdiv = 1;
rsum = a + b;
if ((a > 0) && (b > 0)) {
    rdiv = a / b;
}
rmax = b;
if (a > b) {
    rmax = b;
}
if (c == 1) {
    result = rsum;
}
if (c == 2) {
    result = rdiv;
}
if (c == 3) {
    result = rmax;
}
return result;
"""

GOLDEN_FAULT_STATEMENT = "S9"
GOLDEN_FAULTY_LINE = "rmax = b;"
GOLDEN_FIXED_LINE = "rmax = a;"

# (a, b, c, expected output of the fixed program)
GOLDEN_TESTS = [
    ("t1", 4, 1, 3, 4),
    ("t2", 7, 6, 3, 7),
    ("t3", 6, 3, 3, 6),
    ("t4", 2, 1, 3, 2),
    ("t5", 3, 2, 3, 3),
    ("t6", 9, 7, 3, 9),
    ("t7", 8, -3, 2, 1),
    ("t8", 9, -2, 2, 1),
    ("t9", -6, 8, 3, 8),
    ("t10", 7, 6, 1, 13),
    ("t11", 6, 8, 3, 8),
    ("t12", -8, 9, 3, 9),
]

# Reference scores for the golden case. "published-reference" values are
# pinned from the literature this corpus mirrors; "derived-oracle" values
# were computed with an independent oracle and frozen.
GOLDEN_EXPECTATIONS = [
    {"metric": "ochiai", "statement": "S6", "value": 0.87, "tol": 0.01,
     "provenance": "published-reference"},
    {"metric": "ochiai", "statement": "S9", "value": 0.81, "tol": 0.01,
     "provenance": "published-reference"},
    {"metric": "ochiai", "statement": "S15", "value": 0.81, "tol": 0.01,
     "provenance": "published-reference"},
    {"metric": "o", "statement": "S6", "value": 4, "tol": 0,
     "provenance": "published-reference"},
    {"metric": "o", "statement": "S9", "value": 3, "tol": 0,
     "provenance": "published-reference"},
    {"metric": "o", "statement": "S15", "value": 3, "tol": 0,
     "provenance": "published-reference"},
    {"metric": "gp19", "statement": "S6", "value": 16.97, "tol": 0.01,
     "provenance": "published-reference"},
    {"metric": "gp19", "statement": "S9", "value": 14.69, "tol": 0.01,
     "provenance": "published-reference"},
    {"metric": "gp19", "statement": "S15", "value": 14.69, "tol": 0.01,
     "provenance": "published-reference"},
    {"metric": "dstar", "statement": "S6", "value": 18.0, "tol": 1e-9,
     "provenance": "derived-oracle"},
    {"metric": "dstar", "statement": "S9", "value": 12.0, "tol": 1e-9,
     "provenance": "derived-oracle"},
    {"metric": "dstar", "statement": "S15", "value": 12.0, "tol": 1e-9,
     "provenance": "derived-oracle"},
    {"metric": "selection_order", "value": ["S6", "S9", "S15"],
     "provenance": "published-reference"},
    # chains in ranked order, members by estimated effect descending
    {"metric": "chains", "value": [["S9", "S15"], ["S6"]],
     "provenance": "published-reference"},
    {"metric": "report_top3", "value": ["S9", "S15", "S6"],
     "provenance": "published-reference"},
]


@dataclass
class Fault:
    fault_id: str
    statement: str
    faulty_line: str
    original_line: str

    def to_dict(self) -> dict:
        return {"id": self.fault_id, "statement": self.statement,
                "faulty_line": self.faulty_line,
                "original_line": self.original_line}


def render_with_overrides(program: Program, overrides: dict[str, str]) -> str:
    """Render a program, swapping in replacement lines for the named
    statements (the predicate line only, for if/while)."""
    lines: list[str] = []

    def line_for(stmt: Statement) -> str:
        return overrides.get(stmt.sid, render_statement_line(stmt))

    def emit(stmts, depth):
        pad = "    " * depth
        for s in stmts:
            if s.kind in ("If", "While"):
                lines.append(pad + line_for(s) + " {")
                emit(s.body, depth + 1)
                if s.else_body:
                    lines.append(pad + "} else {")
                    emit(s.else_body, depth + 1)
                lines.append(pad + "}")
            else:
                lines.append(pad + line_for(s))

    emit(program.top, 0)
    return "\n".join(lines) + "\n"


@dataclass
class FaultBundle:
    """A base program, its seeded faults, and the test suite.

    ``variant_source(ids)`` renders the program with exactly those
    faults active; the combined variant has all of them.
    """

    name: str
    base_source: str
    faults: list[Fault]
    tests: list[dict]  # {"id", "inputs", "expected"}
    _base_program: Program = field(default=None, repr=False)

    def __post_init__(self):
        if self._base_program is None:
            self._base_program = parse(self.base_source)

    @property
    def fault_statements(self) -> dict[str, str]:
        return {f.fault_id: f.statement for f in self.faults}

    @property
    def faulty_statements(self) -> list[str]:
        return sorted({f.statement for f in self.faults},
                      key=lambda s: self._base_program.order[s])

    def variant_source(self, active_fault_ids: Sequence[str]) -> str:
        active = set(active_fault_ids)
        overrides = {f.statement: f.faulty_line
                     for f in self.faults if f.fault_id in active}
        return render_with_overrides(self._base_program, overrides)

    @property
    def combined_source(self) -> str:
        return self.variant_source([f.fault_id for f in self.faults])

    def make_suite(self) -> list[TestCase]:
        return [TestCase(id=t["id"], inputs=dict(t["inputs"]),
                         expected_output=t["expected"])
                for t in self.tests]


@dataclass
class GoldenCase:
    name: str
    source: str                 # the faulty program under test
    bundle: FaultBundle
    expectations: list[dict]
    selection_mode: str = "coverage"

    def make_suite(self) -> list[TestCase]:
        return self.bundle.make_suite()


def motivating_example() -> GoldenCase:
    """The calculator case: 16 statements, 12 tests, one wrong-variable
    fault whose effect only shows when two conditional assignments are
    both executed."""
    fault = Fault("F1", GOLDEN_FAULT_STATEMENT, GOLDEN_FAULTY_LINE,
                  GOLDEN_FIXED_LINE)
    # S7 renders to the same text as the faulty S9; fix by id, not by text
    fixed_source = render_with_overrides(
        parse(GOLDEN_SOURCE), {GOLDEN_FAULT_STATEMENT: GOLDEN_FIXED_LINE})
    tests = [{"id": tid, "inputs": {"a": a, "b": b, "c": c}, "expected": exp}
             for tid, a, b, c, exp in GOLDEN_TESTS]
    bundle = FaultBundle(name=GOLDEN_NAME, base_source=fixed_source,
                         faults=[fault], tests=tests)
    return GoldenCase(name=GOLDEN_NAME, source=bundle.combined_source,
                      bundle=bundle, expectations=list(GOLDEN_EXPECTATIONS))


# -- expression mutation -------------------------------------------------

_OP_SWAPS = {
    "+": ["-", "*"], "-": ["+"], "*": ["+"],
    "<": ["<=", ">"], "<=": ["<", ">="], ">": [">=", "<"], ">=": [">", "<="],
    "==": ["!="], "!=": ["=="], "&&": ["||"], "||": ["&&"],
}


def _expr_nodes(expr) -> list:
    """Preorder list of subexpression nodes."""
    nodes = [expr]
    if isinstance(expr, Unary):
        nodes += _expr_nodes(expr.operand)
    elif isinstance(expr, Binary):
        nodes += _expr_nodes(expr.left) + _expr_nodes(expr.right)
    return nodes


def _rewrite(expr, target_idx, make_new, counter=None):
    """Rebuild the tree with node ``target_idx`` (preorder) replaced."""
    if counter is None:
        counter = [0]
    idx = counter[0]
    counter[0] += 1
    if idx == target_idx:
        return make_new(expr)
    if isinstance(expr, Unary):
        return Unary(expr.op, _rewrite(expr.operand, target_idx, make_new, counter))
    if isinstance(expr, Binary):
        left = _rewrite(expr.left, target_idx, make_new, counter)
        right = _rewrite(expr.right, target_idx, make_new, counter)
        return Binary(expr.op, left, right)
    return expr


def _mutate_expression(expr, rng: random.Random, visible_vars: list[str]):
    """One random small change: wrong variable, wrong operator, or
    wrong constant. Returns a new tree or None if nothing applies."""
    nodes = _expr_nodes(expr)
    choices = []
    for idx, node in enumerate(nodes):
        if isinstance(node, Var) and len(visible_vars) > 1:
            choices.append(("var", idx))
        elif isinstance(node, Binary) and node.op in _OP_SWAPS and node.op != "/":
            choices.append(("op", idx))
        elif isinstance(node, IntLit):
            choices.append(("const", idx))
    if not choices:
        return None
    kind, idx = rng.choice(choices)
    if kind == "var":
        node = nodes[idx]
        alternatives = [v for v in visible_vars if v != node.name]
        replacement = rng.choice(alternatives)
        return _rewrite(expr, idx, lambda n: Var(replacement))
    if kind == "op":
        node = nodes[idx]
        new_op = rng.choice(_OP_SWAPS[node.op])
        return _rewrite(expr, idx, lambda n: Binary(new_op, n.left, n.right))
    node = nodes[idx]
    delta = rng.choice([-2, -1, 1, 2])
    return _rewrite(expr, idx, lambda n: IntLit(n.value + delta))


def _mutate_statement(stmt: Statement, rng: random.Random,
                      visible_vars: list[str]) -> Optional[str]:
    """A faulty rendering of the statement's own line, or None."""
    if stmt.kind == "Assign":
        moves = ["expr"]
        # retargeting is only safe when this is not the variable's first
        # definition, otherwise later uses lose their lexical def
        if stmt.name in visible_vars and len(visible_vars) > 1:
            moves.append("target")
        move = rng.choice(moves)
        if move == "target":
            target = rng.choice([v for v in visible_vars if v != stmt.name])
            return f"{target} = {render_expr(stmt.expr)};"
        mutated = _mutate_expression(stmt.expr, rng, visible_vars)
        if mutated is None:
            return None
        return f"{stmt.name} = {render_expr(mutated)};"
    if stmt.kind == "If":
        if rng.random() < 0.3:
            return f"if (!({render_expr(stmt.expr)}))"
        mutated = _mutate_expression(stmt.expr, rng, visible_vars)
        if mutated is None:
            return None
        return f"if ({render_expr(mutated)})"
    if stmt.kind in ("Print", "Return"):
        mutated = _mutate_expression(stmt.expr, rng, visible_vars)
        if mutated is None:
            return None
        body = render_expr(mutated)
        return f"print({body});" if stmt.kind == "Print" else f"return {body};"
    return None


def _visible_vars(program: Program, stmt: Statement) -> list[str]:
    seen: list[str] = []
    for s in program.statements:
        if s.sid == stmt.sid:
            break
        if s.kind == "Read":
            seen.extend(s.targets)
        elif s.kind == "Assign" and s.name not in seen:
            seen.append(s.name)
    return seen


def _suite_outcomes(source: str, tests: list[dict],
                    step_limit: int) -> Optional[tuple[int, int]]:
    """(n_failing, n_passing) for a variant, or None if any run crashes
    or the variant no longer parses."""
    try:
        program = parse(source)
    except InputError:
        return None
    n_fail = 0
    for t in tests:
        trace = run_with_trace(program, t["inputs"], step_limit)
        if trace.crashed:
            return None
        observed = trace.observed_output
        if observed != t["expected"]:
            n_fail += 1
    return n_fail, len(tests) - n_fail


def _output_reaching_statements(program: Program) -> set[str]:
    """Statements the output transitively depends on in the static PDG;
    mutations elsewhere cannot change any output."""
    from .minilang.pdg import static_pdg  # local import to avoid a cycle

    pdg = static_pdg(program)
    frontier = [s.sid for s in program.statements if s.kind in ("Print", "Return")]
    live = set(frontier)
    while frontier:
        sid = frontier.pop()
        for dep, _kind in pdg.dependees(sid):
            if dep not in live:
                live.add(dep)
                frontier.append(dep)
    return live


def seed_faults(base_source: str, n_faults: int, seed: int,
                tests: list[dict], name: str = "seeded",
                max_attempts: int = 40,
                step_limit: int = 200_000) -> FaultBundle:
    """Plant ``n_faults`` mutations into distinct statements.

    Every accepted mutation individually fails at least once and passes
    at least once with no crashes; on top of that the combined set is
    validated so that fixing faults in any order strictly shrinks the
    failing set (the one-fault-at-a-time harness relies on that).
    Deterministic per seed.
    """
    program = parse(base_source)
    rng = random.Random(seed)
    live = _output_reaching_statements(program)
    mutable = [s for s in program.statements
               if s.kind in ("Assign", "If", "Print", "Return") and s.sid in live]
    if not mutable:
        raise InputError("program has no mutable statements")
    base_outcome = _suite_outcomes(base_source, tests, step_limit)
    if base_outcome is None or base_outcome[0] != 0:
        raise InputError("base program must pass its own suite crash-free")
    # mutants that need far more steps than the base ever does are
    # runaways; cap them early instead of burning the full step limit
    base_steps = max(len(run_with_trace(program, t["inputs"], step_limit).ddg.nodes)
                     for t in tests)
    budget = min(step_limit, max(2000, 20 * base_steps))

    faults = _sample_fault_set(program, n_faults, rng, tests, mutable,
                               budget, tries=max_attempts * n_faults)
    if faults is None:
        raise InputError(f"no viable {n_faults}-fault mutation found")
    return FaultBundle(name=name, base_source=base_source,
                       faults=faults, tests=tests, _base_program=program)


def _sample_fault_set(program, n_faults, rng, tests, mutable, budget,
                      tries: int):
    """Grow the fault set one accepted mutation at a time.

    A candidate joins only if its single-fault variant fails somewhere,
    passes somewhere, never crashes, and every fault subset it creates
    keeps the strictly-decreasing-failures property. Rejections keep
    the already-accepted faults, so convergence stays cheap.
    """
    accepted: list[tuple[str, str, str]] = []  # (sid, faulty, original)
    outcomes: dict[frozenset, int] = {frozenset(): 0}
    used: set[str] = set()

    def variant(active_sids) -> str:
        overrides = {sid: faulty for sid, faulty, _ in accepted
                     if sid in active_sids}
        return render_with_overrides(program, overrides)

    for _ in range(tries):
        if len(accepted) == n_faults:
            break
        stmt = rng.choice(mutable)
        if stmt.sid in used:
            continue
        line = _mutate_statement(stmt, rng, _visible_vars(program, stmt))
        if line is None or line == render_statement_line(stmt):
            continue
        source = render_with_overrides(program, {stmt.sid: line})
        # cheap probe on a prefix; equivalent and runaway mutants die
        # here without paying for the whole suite
        probe = _suite_outcomes(source, tests[:16], budget)
        if probe is None or probe[0] == 0:
            continue
        single = _suite_outcomes(source, tests, budget)
        if single is None or single[0] == 0 or single[1] == 0:
            continue
        # validate every new subset the candidate would create
        accepted.append((stmt.sid, line, render_statement_line(stmt)))
        new_outcomes = dict(outcomes)
        new_outcomes[frozenset([stmt.sid])] = single[0]
        ok = True
        prior_sids = [sid for sid, _, _ in accepted[:-1]]
        for mask in range(1, 2 ** len(prior_sids)):
            subset = frozenset(s for i, s in enumerate(prior_sids)
                               if mask >> i & 1) | {stmt.sid}
            result = _suite_outcomes(variant(subset), tests, budget)
            if result is None or result[0] == 0:
                ok = False
                break
            new_outcomes[subset] = result[0]
        if ok:
            for subset, n_fail in new_outcomes.items():
                if stmt.sid not in subset:
                    continue
                for sid in subset:
                    if new_outcomes[subset - {sid}] >= n_fail:
                        ok = False
                        break
                if not ok:
                    break
        if not ok:
            accepted.pop()
            continue
        outcomes = new_outcomes
        used.add(stmt.sid)
    if len(accepted) != n_faults:
        return None
    accepted.sort(key=lambda f: program.order[f[0]])
    return [Fault(f"F{i + 1}", sid, faulty, original)
            for i, (sid, faulty, original) in enumerate(accepted)]


def bundle_failing_counts(bundle: FaultBundle,
                          step_limit: int = 200_000) -> dict[frozenset, int]:
    """Failing-test count for every fault subset; used to audit the
    strictly-decreasing property."""
    ids = [f.fault_id for f in bundle.faults]
    outcomes: dict[frozenset, int] = {}
    for mask in range(2 ** len(ids)):
        active = frozenset(ids[i] for i in range(len(ids)) if mask >> i & 1)
        result = _suite_outcomes(bundle.variant_source(sorted(active)),
                                 bundle.tests, step_limit)
        outcomes[active] = -1 if result is None else result[0]
    return outcomes


# -- random base programs -------------------------------------------------

def _random_expr(rng: random.Random, variables: list[str], depth: int = 0) -> str:
    if depth >= 2 or rng.random() < 0.35:
        if variables and rng.random() < 0.7:
            return rng.choice(variables)
        return str(rng.randint(1, 9))
    op = rng.choice(["+", "+", "-", "*"])
    return (f"({_random_expr(rng, variables, depth + 1)} {op} "
            f"{_random_expr(rng, variables, depth + 1)})")


def _random_condition(rng: random.Random, variables: list[str]) -> str:
    op = rng.choice(["<", "<=", ">", ">=", "==", "!="])
    left = rng.choice(variables)
    right = rng.choice(variables + [str(rng.randint(-5, 9))])
    return f"({left} {op} {right})"


def generate_program(seed: int, target_statements: int = 40) -> str:
    """A random terminating program: reads, guarded arithmetic, bounded
    loops, and a return mixing several live variables."""
    rng = random.Random(seed)
    n_inputs = rng.randint(3, 5)
    inputs = [f"in{i}" for i in range(n_inputs)]
    lines = [f"read({', '.join(inputs)});"]
    variables = list(inputs)
    count = 1
    fresh = 0

    def new_var() -> str:
        nonlocal fresh
        fresh += 1
        return f"v{fresh}"

    while count < target_statements - 3:
        kind = rng.random()
        if kind < 0.5:
            target = new_var() if rng.random() < 0.6 or not variables else rng.choice(variables)
            lines.append(f"{target} = {_random_expr(rng, variables)};")
            if target not in variables:
                variables.append(target)
            count += 1
        elif kind < 0.65 and count + 3 < target_statements:
            # division guarded by a strictly positive denominator
            target = new_var()
            denom = new_var()
            num = rng.choice(variables)
            lines.append(f"{denom} = ({num} * {num}) + {rng.randint(1, 4)};")
            lines.append(f"{target} = {rng.choice(variables)} / {denom};")
            variables += [denom, target]
            count += 2
        elif kind < 0.85 and count + 3 < target_statements:
            body_n = rng.randint(1, 3)
            lines.append(f"if {_random_condition(rng, variables)} {{")
            for _ in range(body_n):
                target = rng.choice(variables)
                lines.append(f"    {target} = {_random_expr(rng, variables)};")
            count += 1 + body_n
            if rng.random() < 0.4:
                lines.append("} else {")
                target = rng.choice(variables)
                lines.append(f"    {target} = {_random_expr(rng, variables)};")
                count += 1
            lines.append("}")
        elif count + 4 < target_statements:
            counter = new_var()
            acc = rng.choice(variables)
            bound = rng.randint(2, 6)
            lines.append(f"{counter} = 0;")
            lines.append(f"while ({counter} < {bound}) {{")
            lines.append(f"    {acc} = {_random_expr(rng, variables)};")
            lines.append(f"    {counter} = {counter} + 1;")
            lines.append("}")
            variables.append(counter)
            count += 4
    while count < target_statements - 2:  # pad up to the target exactly
        target = new_var()
        lines.append(f"{target} = {_random_expr(rng, variables)};")
        variables.append(target)
        count += 1
    mix = new_var()
    lines.append(f"{mix} = {_random_expr(rng, variables)} "
                 f"+ {rng.choice(variables)};")
    lines.append(f"return {mix} + {rng.choice(variables)};")
    return "\n".join(lines) + "\n"


def generate_tests(source: str, seed: int, n_tests: int,
                   step_limit: int = 200_000) -> list[dict]:
    """Random plus boundary inputs; expected outputs come from the base
    program, which therefore passes its own suite."""
    program = parse(source)
    rng = random.Random(seed)
    read_vars = sorted(set(program.read_variables()))
    boundary = [0, 1, -1, 2, -2, 5, -5]
    tests = []
    for i in range(n_tests):
        if i < len(boundary):
            inputs = {v: boundary[i] for v in read_vars}
        else:
            inputs = {v: rng.randint(-20, 20) for v in read_vars}
        trace = run_with_trace(program, inputs, step_limit)
        if trace.crashed:
            raise InputError("base program crashed on generated input")
        tests.append({"id": f"t{i + 1}", "inputs": inputs,
                      "expected": trace.observed_output})
    return tests


# -- corpus directories ----------------------------------------------------

def write_case(case_dir: Path, bundle: FaultBundle,
               expected: Optional[dict] = None) -> None:
    case_dir.mkdir(parents=True, exist_ok=True)
    (case_dir / "program.src").write_text(bundle.combined_source, encoding="utf-8")
    with open(case_dir / "tests.json", "w", encoding="utf-8") as fh:
        json.dump(bundle.tests, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(case_dir / "faults.json", "w", encoding="utf-8") as fh:
        json.dump({"base_source": bundle.base_source,
                   "faults": [f.to_dict() for f in bundle.faults]},
                  fh, indent=2, sort_keys=True)
        fh.write("\n")
    if expected is None:
        expected = {"faulty_statements": bundle.faulty_statements}
    with open(case_dir / "expected.json", "w", encoding="utf-8") as fh:
        json.dump(expected, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_case(case_dir: Path) -> tuple[FaultBundle, dict]:
    case_dir = Path(case_dir)
    for required in ("program.src", "tests.json", "faults.json"):
        if not (case_dir / required).exists():
            raise InputError(f"corpus case {case_dir.name!r} is missing {required}")
    tests = json.loads((case_dir / "tests.json").read_text(encoding="utf-8"))
    fault_data = json.loads((case_dir / "faults.json").read_text(encoding="utf-8"))
    faults = [Fault(f["id"], f["statement"], f["faulty_line"], f["original_line"])
              for f in fault_data["faults"]]
    bundle = FaultBundle(name=case_dir.name,
                         base_source=fault_data["base_source"],
                         faults=faults, tests=tests)
    program_src = (case_dir / "program.src").read_text(encoding="utf-8")
    if bundle.combined_source != program_src:
        raise InputError(f"corpus case {case_dir.name!r}: program.src does not "
                         f"match faults.json applied to the base source")
    expected_path = case_dir / "expected.json"
    expected = json.loads(expected_path.read_text(encoding="utf-8")) \
        if expected_path.exists() else {}
    return bundle, expected


def golden_expected() -> dict:
    return {
        "name": GOLDEN_NAME,
        "faulty_statements": ["S9"],
        "selection_mode": "coverage",
        "expectations": GOLDEN_EXPECTATIONS,
    }


def generate_corpus(out_dir, n_programs: int = 10, seed: int = 20260801,
                    tests_min: int = 50, tests_max: int = 200,
                    include_golden: bool = True) -> list[str]:
    """Materialize the corpus layout: the golden case plus seeded
    programs, fault counts cycling 1, 2, 3."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    if include_golden:
        golden = motivating_example()
        write_case(out / golden.name, golden.bundle, golden_expected())
        names.append(golden.name)
    rng = random.Random(seed)
    made = 0
    attempt = 0
    while made < n_programs:
        attempt += 1
        if attempt > n_programs * 20:
            raise InputError("corpus generation did not converge")
        case_seed = seed + attempt * 977
        n_faults = made % 3 + 1
        name = f"seeded-{made + 1:02d}"
        try:
            # block construction can overshoot the target by up to 3
            # statements, so cap the draw to keep programs within 30-80
            source = generate_program(case_seed,
                                      target_statements=rng.randint(30, 77))
            tests = generate_tests(source, case_seed + 1,
                                   rng.randint(tests_min, tests_max))
            bundle = seed_faults(source, n_faults, case_seed + 2, tests,
                                 name=name)
        except InputError:
            continue
        write_case(out / name, bundle,
                   {"faulty_statements": bundle.faulty_statements,
                    "n_faults": n_faults})
        names.append(name)
        made += 1
    return names
