"""
Program dependence graphs for parsed MiniLang methods.

Nodes are statements and predicates labelled with an abstract tag that keeps
types, operators, callees and small literals but never variable names.
Control dependence follows the structured nesting; data dependence comes from
reaching definitions over the control-flow graph derived from the same walk.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Union

import networkx as nx

from .minilang import SyntaxTree

logger = logging.getLogger(__name__)

ENTRY_ID = 0

INT_TYPES = frozenset({"int", "long", "short", "byte", "uint", "ulong"})
COMPARISON_TAGS = {"<": "Small", "<=": "SmallEqual", ">": "Great", ">=": "GreatEqual", "==": "Same", "!=": "NotSame"}
ASSIGN_TAGS = {
    "=": "Equal", "+=": "PlusEqual", "-=": "MinusEqual", "*=": "TimesEqual", "/=": "DivideEqual",
    "%=": "ModEqual", "&=": "AndEqual", "|=": "OrEqual", "^=": "XorEqual",
    "<<=": "ShiftLeftEqual", ">>=": "ShiftRightEqual",
}
ARITHMETIC = frozenset({"+", "-", "*", "/", "%"})
PSEUDO_NAMES = frozenset({"this", "base", "super"})


class NodeKind(str, Enum):
    ENTRY = "entry"
    STATEMENT = "statement"
    PREDICATE = "predicate"


class EdgeKind(str, Enum):
    CONTROL = "control"
    DATA = "data"


@dataclass(frozen=True)
class PdgNode:
    id: int
    label: str
    kind: NodeKind
    defs: frozenset[str] = frozenset()
    uses: frozenset[str] = frozenset()


@dataclass(frozen=True)
class PdgEdge:
    source: int
    target: int
    kind: EdgeKind


@dataclass(frozen=True)
class DependenceGraph:
    nodes: tuple[PdgNode, ...]
    edges: tuple[PdgEdge, ...]

    @property
    def size(self) -> int:
        return len(self.nodes) + len(self.edges)

    def node(self, node_id: int) -> PdgNode:
        return self.nodes[node_id]

    def to_networkx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        for n in self.nodes:
            g.add_node(n.id, label=n.label, kind=n.kind.value,
                       defs=sorted(n.defs), uses=sorted(n.uses))
        for e in self.edges:
            g.add_edge(e.source, e.target, key=e.kind.value, kind=e.kind.value)
        return g

    def to_dot(self, name: str = "pdg") -> str:
        lines = [f'digraph "{_dot_escape(name)}" {{']
        for n in self.nodes:
            shape = "diamond" if n.kind is NodeKind.PREDICATE else "box"
            if n.kind is NodeKind.ENTRY:
                shape = "ellipse"
            lines.append(f'  n{n.id} [label="{n.id}: {_dot_escape(n.label)}", kind="{n.kind.value}", shape={shape}];')
        for e in self.edges:
            style = "solid" if e.kind is EdgeKind.CONTROL else "dashed"
            lines.append(f'  n{e.source} -> n{e.target} [kind="{e.kind.value}", style={style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


@dataclass(frozen=True)
class NotApplicable:
    reason: str


PdgResult = Union[DependenceGraph, NotApplicable]


def is_applicable(result: PdgResult) -> bool:
    return isinstance(result, DependenceGraph)


class _Unsupported(Exception):
    pass


# Structured skeleton the control-flow pass walks.
@dataclass
class _Simple:
    node: int


@dataclass
class _Jump:
    node: int
    kind: str  # return | throw | break | continue


@dataclass
class _Branch:
    node: int
    then: list
    orelse: list


@dataclass
class _Loop:
    node: int
    body: list
    step: list = field(default_factory=list)


class _Builder:
    def __init__(self, tree: SyntaxTree):
        self.t = tree
        self.nodes: list[PdgNode] = [PdgNode(ENTRY_ID, "entry", NodeKind.ENTRY)]
        self.control: list[tuple[int, int]] = []
        self.types: dict[str, str] = {}
        self.loop_predicates: list[int] = []

    # type lookup
    def _collect_types(self, method_id: int):
        for nid in self.t.preorder(method_id):
            n = self.t.node(nid)
            if n.label in ("Param", "VarDecl", "Foreach"):
                var = self.t.node(n.children[0]).value
                self.types.setdefault(var, _bucket(n.value))

    def expr_type(self, nid: int) -> str:
        n = self.t.node(nid)
        if n.label == "Literal":
            return "int" if n.value.isdigit() else "obj"
        if n.label == "Name":
            return self.types.get(n.value, "obj")
        if n.label == "BinaryOp" and n.value in ARITHMETIC:
            kinds = {self.expr_type(c) for c in n.children}
            return "int" if kinds == {"int"} else "obj"
        if n.label == "UnaryOp" and n.value == "-":
            return self.expr_type(n.children[0])
        return "obj"

    def tag(self, nid: int) -> str:
        n = self.t.node(nid)
        if n.label == "Literal":
            if n.value.isdigit():
                return n.value if len(n.value) == 1 else "Int"
            if n.value in ("true", "false", "null"):
                return n.value.capitalize()
            return "Str"
        if n.label == "Call":
            return "Call"
        if n.label == "New":
            return "New"
        return self.expr_type(nid).capitalize()

    def names(self, nid: int) -> set[str]:
        """Variables read by an expression. Callee names of direct calls are not variables."""
        n = self.t.node(nid)
        if n.label == "Name":
            return set() if n.value in PSEUDO_NAMES else {n.value}
        kids = list(n.children)
        if n.label == "Call" and self.t.node(kids[0]).label == "Name":
            kids = kids[1:]
        out: set[str] = set()
        for c in kids:
            out |= self.names(c)
        return out

    def callee(self, nid: int) -> str:
        target = self.t.node(self.t.node(nid).children[0])
        if target.label in ("Name", "FieldAccess"):
            return target.value
        return "expr"

    # node creation
    def add(self, label: str, kind: NodeKind, parent: int,
            defs: Iterable[str] = (), uses: Iterable[str] = ()) -> int:
        nid = len(self.nodes)
        self.nodes.append(PdgNode(nid, label, kind, frozenset(defs), frozenset(uses)))
        self.control.append((parent, nid))
        return nid

    def method(self, method_id: int) -> list:
        self._collect_types(method_id)
        m = self.t.node(method_id)
        kids = list(m.children)
        items: list = []
        for pid in self.t.node(kids[1]).children:
            p = self.t.node(pid)
            var = self.t.node(p.children[0]).value
            items.append(_Simple(self.add(f"input{_bucket(p.value).capitalize()}", NodeKind.STATEMENT,
                                          ENTRY_ID, defs={var})))
        if self.t.node(kids[2]).label == "BaseCall":
            base = self.t.node(kids[2])
            uses = set().union(*(self.names(a) for a in base.children)) if base.children else set()
            items.append(_Simple(self.add(f"call:{base.value}", NodeKind.STATEMENT, ENTRY_ID, uses=uses)))
        items.extend(self.statements(self.t.node(kids[-1]).children, ENTRY_ID))
        return items

    def statements(self, ids: Iterable[int], parent: int) -> list:
        items: list = []
        for sid in ids:
            items.extend(self.statement(sid, parent))
        return items

    def statement(self, sid: int, parent: int) -> list:
        n = self.t.node(sid)
        c = list(n.children)
        if n.label == "Block":
            return self.statements(c, parent)
        if n.label == "If":
            pred = self.add(self.predicate_label(c[0]), NodeKind.PREDICATE, parent, uses=self.names(c[0]))
            then = self.statement(c[1], pred)
            orelse = self.statement(c[2], pred) if len(c) == 3 else []
            return [_Branch(pred, then, orelse)]
        if n.label == "While":
            pred = self.add(self.predicate_label(c[0]), NodeKind.PREDICATE, parent, uses=self.names(c[0]))
            return [_Loop(pred, self.loop_body(c[1], pred))]
        if n.label == "For":
            init, cond, step, body = (self.t.node(x) for x in c)
            items = self.statements(init.children, parent)
            if cond.children:
                ce = cond.children[0]
                pred = self.add(self.predicate_label(ce), NodeKind.PREDICATE, parent, uses=self.names(ce))
            else:
                pred = self.add("condTrue", NodeKind.PREDICATE, parent)
            loop_body = self.loop_body(c[3], pred)
            items.append(_Loop(pred, loop_body, self.statements(step.children, pred)))
            return items
        if n.label == "Foreach":
            var = self.t.node(c[0]).value
            pred = self.add(f"foreach{_bucket(n.value).capitalize()}", NodeKind.PREDICATE, parent,
                            defs={var}, uses=self.names(c[1]))
            return [_Loop(pred, self.loop_body(c[2], pred))]
        if n.label in ("Return", "Throw"):
            word = n.label.lower()
            label = f"{word}{self.tag(c[0])}" if c else word
            uses = self.names(c[0]) if c else set()
            return [_Jump(self.add(label, NodeKind.STATEMENT, parent, uses=uses), word)]
        if n.label in ("Break", "Continue"):
            # control-dependent on the innermost loop predicate
            word = n.label.lower()
            owner = self.loop_predicates[-1] if self.loop_predicates else parent
            return [_Jump(self.add(word, NodeKind.STATEMENT, owner), word)]
        if n.label == "VarDecl":
            var = self.t.node(c[0]).value
            label = f"declare{_bucket(n.value).capitalize()}"
            if len(c) == 2:
                return [_Simple(self.add(f"{label}Equal{self.tag(c[1])}", NodeKind.STATEMENT, parent,
                                         defs={var}, uses=self.names(c[1])))]
            return [_Simple(self.add(label, NodeKind.STATEMENT, parent))]
        if n.label == "Assign":
            return [_Simple(self.assignment(sid, parent))]
        return [_Simple(self.add(self.expression_label(sid), NodeKind.STATEMENT, parent, uses=self.names(sid)))]

    def loop_body(self, sid: int, pred: int) -> list:
        self.loop_predicates.append(pred)
        try:
            return self.statement(sid, pred)
        finally:
            self.loop_predicates.pop()

    def assignment(self, sid: int, parent: int) -> int:
        n = self.t.node(sid)
        target = n.children[0]
        tnode = self.t.node(target)
        if tnode.label == "Name" and tnode.value not in PSEUDO_NAMES:
            root, extra_uses = tnode.value, set()
        elif tnode.label in ("FieldAccess", "Index"):
            root = self._root_name(target)
            extra_uses = self.names(target)
        else:
            raise _Unsupported(f"assignment to {tnode.label}")
        ttype = self.expr_type(target)
        defs = {root} if root else set()
        if n.value in ("++", "--"):
            label = f"{ttype}{'Increment' if n.value == '++' else 'Decrement'}"
            return self.add(label, NodeKind.STATEMENT, parent, defs=defs, uses=extra_uses | defs)
        rhs = n.children[1]
        uses = self.names(rhs) | extra_uses
        if n.value != "=":
            uses |= defs
        label = f"{ttype}{ASSIGN_TAGS[n.value]}{self.tag(rhs)}"
        return self.add(label, NodeKind.STATEMENT, parent, defs=defs, uses=uses)

    def _root_name(self, nid: int) -> Optional[str]:
        n = self.t.node(nid)
        while n.label in ("FieldAccess", "Index"):
            n = self.t.node(n.children[0])
        if n.label == "Name" and n.value not in PSEUDO_NAMES:
            return n.value
        return None

    def predicate_label(self, cond: int) -> str:
        n = self.t.node(cond)
        if n.label == "BinaryOp" and n.value in COMPARISON_TAGS:
            left, right = n.children
            return f"{self.expr_type(left)}{COMPARISON_TAGS[n.value]}{self.tag(right)}"
        return f"cond{self.tag(cond)}"

    def expression_label(self, nid: int) -> str:
        n = self.t.node(nid)
        if n.label == "Call":
            return f"call:{self.callee(nid)}"
        if n.label == "New":
            return f"new:{n.value}"
        return f"expr{self.tag(nid)}"


def _bucket(type_name: Optional[str]) -> str:
    return "int" if type_name in INT_TYPES else "obj"


class _FlowBuilder:
    """Derives CFG successor sets from the structured skeleton."""

    def __init__(self, n_nodes: int):
        self.succ: dict[int, set[int]] = {i: set() for i in range(n_nodes)}
        self.loops: list[tuple[set[int], set[int]]] = []

    def link(self, sources: set[int], target: int):
        for s in sources:
            self.succ[s].add(target)

    def flow(self, items: list, incoming: set[int]) -> set[int]:
        current = set(incoming)
        for item in items:
            current = self.item(item, current)
        return current

    def item(self, item, incoming: set[int]) -> set[int]:
        self.link(incoming, item.node)
        if isinstance(item, _Simple):
            return {item.node}
        if isinstance(item, _Branch):
            out = self.flow(item.then, {item.node})
            out |= self.flow(item.orelse, {item.node}) if item.orelse else {item.node}
            return out
        if isinstance(item, _Loop):
            breaks: set[int] = set()
            continues: set[int] = set()
            self.loops.append((breaks, continues))
            body_out = self.flow(item.body, {item.node})
            step_out = self.flow(item.step, body_out | continues)
            self.link(step_out, item.node)
            self.loops.pop()
            return {item.node} | breaks
        # jumps end the fall-through flow
        if item.kind == "break" and self.loops:
            self.loops[-1][0].add(item.node)
        elif item.kind == "continue" and self.loops:
            self.loops[-1][1].add(item.node)
        return set()


def _reaching_definitions(nodes: list[PdgNode], succ: dict[int, set[int]]) -> dict[int, set[tuple[str, int]]]:
    """Iterative forward analysis; returns IN sets of (variable, defining node)."""
    defs_of: dict[str, set[int]] = {}
    for n in nodes:
        for v in n.defs:
            defs_of.setdefault(v, set()).add(n.id)
    gen = {n.id: {(v, n.id) for v in n.defs} for n in nodes}
    kill = {n.id: {(v, d) for v in n.defs for d in defs_of[v] if d != n.id} for n in nodes}
    preds: dict[int, set[int]] = {n.id: set() for n in nodes}
    for s, targets in succ.items():
        for t in targets:
            preds[t].add(s)

    reach_in: dict[int, set] = {n.id: set() for n in nodes}
    reach_out: dict[int, set] = {n.id: set(gen[n.id]) for n in nodes}
    worklist = [n.id for n in nodes]
    while worklist:
        nid = worklist.pop(0)
        new_in = set().union(*(reach_out[p] for p in preds[nid])) if preds[nid] else set()
        reach_in[nid] = new_in
        new_out = gen[nid] | (new_in - kill[nid])
        if new_out != reach_out[nid]:
            reach_out[nid] = new_out
            worklist.extend(s for s in sorted(succ[nid]) if s not in worklist)
    return reach_in


def build_pdg(tree: SyntaxTree) -> PdgResult:
    """
    Builds the dependence graph of a parsed method.

    Args:
        tree: syntax tree whose root is a Method (a Unit of several methods is
              not analysable).

    Returns:
        DependenceGraph, or NotApplicable with the reason.
    """
    root = tree.node(tree.root)
    if root.label == "Unit":
        return NotApplicable("multiple methods")
    if root.label != "Method":
        return NotApplicable(f"root is {root.label}, not a method")

    builder = _Builder(tree)
    try:
        items = builder.method(tree.root)
    except _Unsupported as e:
        logger.debug(f"PDG not applicable: {e}")
        return NotApplicable(f"unsupported construct: {e}")

    has_base = tree.node(root.children[2]).label == "BaseCall"
    if not tree.node(root.children[-1]).children and not has_base:
        return NotApplicable("empty method body")

    flow = _FlowBuilder(len(builder.nodes))
    flow.flow(items, {ENTRY_ID})
    reach_in = _reaching_definitions(builder.nodes, flow.succ)

    edges: list[PdgEdge] = []
    seen: set[tuple[int, int, EdgeKind]] = set()
    for u, v in builder.control:
        if (u, v, EdgeKind.CONTROL) not in seen:
            seen.add((u, v, EdgeKind.CONTROL))
            edges.append(PdgEdge(u, v, EdgeKind.CONTROL))
    data = sorted({(d, n.id) for n in builder.nodes for (var, d) in reach_in[n.id] if var in n.uses})
    edges.extend(PdgEdge(u, v, EdgeKind.DATA) for u, v in data)

    return DependenceGraph(tuple(builder.nodes), tuple(edges))
