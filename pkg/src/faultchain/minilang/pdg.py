"""Statement-level program dependence graph.

Data edges come from reaching definitions over the control-flow graph:
an edge s -> d (type "data") means statement s uses a variable whose
definition at d may reach s. Control edges point from a body statement
to its governing predicate. Edges are oriented dependent -> dependee.
"""

from __future__ import annotations

import json
from typing import Iterable

from .parser import Program, Statement, statement_defs, statement_uses

DATA = "data"
CONTROL = "control"


class StaticPDG:
    def __init__(self, nodes: Iterable[str], edges: Iterable[tuple[str, str, str]]):
        self.nodes = tuple(nodes)
        self.edges = tuple(sorted(set(edges)))
        self._out: dict[str, list[tuple[str, str]]] = {n: [] for n in self.nodes}
        self._in: dict[str, list[tuple[str, str]]] = {n: [] for n in self.nodes}
        for src, dst, kind in self.edges:
            self._out[src].append((dst, kind))
            self._in[dst].append((src, kind))

    def dependees(self, sid: str) -> list[tuple[str, str]]:
        """Statements sid depends on, with edge type."""
        return list(self._out[sid])

    def dependents(self, sid: str) -> list[tuple[str, str]]:
        """Statements that depend on sid, with edge type."""
        return list(self._in[sid])

    def neighbors(self, sid: str) -> set[str]:
        """Adjacent statements over both edge directions."""
        return {d for d, _ in self._out[sid]} | {s for s, _ in self._in[sid]}

    def has_edge(self, src: str, dst: str) -> bool:
        return any(d == dst for d, _ in self._out[src])

    def edges_between(self, a: str, b: str) -> list[tuple[str, str, str]]:
        """All edges joining a and b, either direction."""
        found = [(a, d, k) for d, k in self._out[a] if d == b]
        found += [(b, d, k) for d, k in self._out[b] if d == a]
        return sorted(set(found))

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [{"src": s, "dst": d, "type": k} for s, d, k in self.edges],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StaticPDG":
        edges = [(e["src"], e["dst"], e["type"]) for e in data["edges"]]
        return cls(data["nodes"], edges)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "StaticPDG":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _cfg_successors(program: Program) -> dict[str, set[str]]:
    """Successor map of the statement-level control-flow graph.

    Returns don't flow anywhere; a while predicate flows into its body
    and past it; an if predicate flows into both branches and the join.
    """
    succ: dict[str, set[str]] = {s.sid: set() for s in program.statements}

    def first(stmt: Statement) -> str:
        return stmt.sid

    def wire(stmts: list[Statement]) -> list[str]:
        """Wire a statement list; returns its dangling exits."""
        exits: list[str] = []
        for i, stmt in enumerate(stmts):
            nxt = first(stmts[i + 1]) if i + 1 < len(stmts) else None
            ends = wire_stmt(stmt)
            if nxt is not None:
                for e in ends:
                    succ[e].add(nxt)
            else:
                exits.extend(ends)
        return exits

    def wire_stmt(stmt: Statement) -> list[str]:
        if stmt.kind in ("Read", "Assign", "Print"):
            return [stmt.sid]
        if stmt.kind == "Return":
            return []
        if stmt.kind == "If":
            ends = []
            if stmt.body:
                succ[stmt.sid].add(first(stmt.body[0]))
                ends.extend(wire(stmt.body))
            else:
                ends.append(stmt.sid)
            if stmt.else_body:
                succ[stmt.sid].add(first(stmt.else_body[0]))
                ends.extend(wire(stmt.else_body, []))
            else:
                ends.append(stmt.sid)
            return ends
        if stmt.kind == "While":
            if stmt.body:
                succ[stmt.sid].add(first(stmt.body[0]))
                for e in wire(stmt.body):
                    succ[e].add(stmt.sid)
            else:
                succ[stmt.sid].add(stmt.sid)
            return [stmt.sid]
        raise ValueError(stmt.kind)

    wire(program.top)
    return succ


def _reaching_definitions(program: Program) -> dict[str, set[tuple[str, str]]]:
    """IN sets of (variable, defining statement) pairs per statement."""
    succ = _cfg_successors(program)
    preds: dict[str, set[str]] = {s.sid: set() for s in program.statements}
    for src, dsts in succ.items():
        for d in dsts:
            preds[d].add(src)

    gen = {s.sid: {(v, s.sid) for v in statement_defs(s)} for s in program.statements}
    kills = {s.sid: set(statement_defs(s)) for s in program.statements}

    in_sets: dict[str, set[tuple[str, str]]] = {s.sid: set() for s in program.statements}
    out_sets: dict[str, set[tuple[str, str]]] = {s.sid: set() for s in program.statements}

    order = [s.sid for s in program.statements]
    changed = True
    while changed:
        changed = False
        for sid in order:
            new_in = set()
            for p in preds[sid]:
                new_in |= out_sets[p]
            new_out = gen[sid] | {(v, d) for (v, d) in new_in if v not in kills[sid]}
            if new_in != in_sets[sid] or new_out != out_sets[sid]:
                in_sets[sid] = new_in
                out_sets[sid] = new_out
                changed = True
    return in_sets


def static_pdg(program: Program) -> StaticPDG:
    """Build the PDG: reaching-definition data edges plus lexical
    control edges from body statements to their governing predicate."""
    in_sets = _reaching_definitions(program)
    edges: list[tuple[str, str, str]] = []
    for stmt in program.statements:
        for var in statement_uses(stmt):
            for (v, d) in in_sets[stmt.sid]:
                if v == var:
                    edges.append((stmt.sid, d, DATA))
        if stmt.parent is not None:
            edges.append((stmt.sid, stmt.parent, CONTROL))
    return StaticPDG(program.statement_ids(), edges)
