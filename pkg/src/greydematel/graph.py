"""Threshold selection, influence edges, feedback loops, and DOT export."""

from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

DEFAULT_LOOP_CAP = 10_000

# Entries within this relative distance below theta still count as reaching
# it; theta computed as a mean can land an ulp above equal entries.
EDGE_TOLERANCE = 1e-12


class ThresholdKind(str, Enum):
    MEAN = "mean"
    MEAN_PLUS_SIGMA = "mean+sigma"
    MEAN_PLUS_1_5_SIGMA = "mean+1.5sigma"
    MEAN_PLUS_2_SIGMA = "mean+2sigma"
    FIXED = "fixed"


_SIGMA_MULTIPLIER = {
    ThresholdKind.MEAN: 0.0,
    ThresholdKind.MEAN_PLUS_SIGMA: 1.0,
    ThresholdKind.MEAN_PLUS_1_5_SIGMA: 1.5,
    ThresholdKind.MEAN_PLUS_2_SIGMA: 2.0,
}


class LoopOverflowError(RuntimeError):
    pass


@dataclass(frozen=True)
class ThresholdSpec:
    """Requested threshold rule, e.g. parsed from ``mean+sigma`` or ``fixed:0.2``."""

    kind: ThresholdKind = ThresholdKind.MEAN_PLUS_SIGMA
    value: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ThresholdKind(self.kind))
        if self.kind is ThresholdKind.FIXED:
            if self.value is None or not math.isfinite(self.value) or self.value < 0:
                raise ValueError("a fixed threshold needs a finite non-negative value")
        elif self.value is not None:
            raise ValueError(f"threshold kind {self.kind.value!r} takes no value")

    @classmethod
    def parse(cls, text: str) -> ThresholdSpec:
        text = text.strip().lower()
        if text.startswith("fixed:"):
            try:
                value = float(text.split(":", 1)[1])
            except ValueError:
                raise ValueError(f"bad fixed threshold {text!r}") from None
            return cls(ThresholdKind.FIXED, value)
        aliases = {"mean_plus_sigma": "mean+sigma", "mean_plus_1_5_sigma": "mean+1.5sigma",
                   "mean_plus_2_sigma": "mean+2sigma"}
        try:
            return cls(ThresholdKind(aliases.get(text, text)))
        except ValueError:
            choices = ", ".join(k.value for k in ThresholdKind if k is not ThresholdKind.FIXED)
            raise ValueError(f"unknown threshold {text!r}; use one of {choices} or fixed:VALUE") from None

    def __str__(self) -> str:
        if self.kind is ThresholdKind.FIXED:
            return f"fixed:{self.value}"
        return self.kind.value


@dataclass(frozen=True)
class ThresholdPolicy:
    kind: ThresholdKind
    mu: float
    sigma: float
    theta: float

    def describe(self, precision: int = 4) -> str:
        """Render the threshold arithmetic, e.g. ``0.0375 + 0.0289 = 0.0665``.

        Each term is rounded on its own, so the printed sum need not add up
        digit for digit.
        """
        f = lambda v: format_number(v, precision)  # noqa: E731
        if self.kind is ThresholdKind.FIXED:
            return f"fixed = {f(self.theta)}"
        k = _SIGMA_MULTIPLIER[self.kind]
        if k == 0:
            return f"{f(self.mu)} = {f(self.theta)}"
        term = f(self.sigma) if k == 1 else f"{k:g} * {f(self.sigma)}"
        return f"{f(self.mu)} + {term} = {f(self.theta)}"


def format_number(value: float, precision: int = 4) -> str:
    text = f"{value:.{precision}f}"
    if float(text) == 0:
        # no "-0.0000"
        text = f"{0.0:.{precision}f}"
    return text


def off_diagonal(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    return m[~np.eye(m.shape[0], dtype=bool)]


def compute_threshold(m: np.ndarray, spec: ThresholdSpec | str = ThresholdSpec()) -> ThresholdPolicy:
    """Threshold from the mean and population std of the off-diagonal entries."""
    if isinstance(spec, str):
        spec = ThresholdSpec.parse(spec)
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got shape {m.shape}")
    if m.shape[0] < 2:
        raise ValueError("threshold needs at least two factors (no off-diagonal entries)")
    vals = off_diagonal(m)
    mu = float(vals.mean())
    sigma = float(vals.std(ddof=0))
    if spec.kind is ThresholdKind.FIXED:
        theta = float(spec.value)
    else:
        theta = mu + _SIGMA_MULTIPLIER[spec.kind] * sigma
    return ThresholdPolicy(spec.kind, mu, sigma, theta)


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    weight: float


@dataclass
class CausalGraph:
    nodes: list[str]
    edges: list[Edge] = field(default_factory=list)
    loops: list[list[str]] = field(default_factory=list)

    def edge_pairs(self) -> set[tuple[str, str]]:
        return {(e.source, e.target) for e in self.edges}

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]], nodes: Iterable[str] | None = None,
                   weight: float = 1.0) -> CausalGraph:
        pairs = list(pairs)
        node_set = set(nodes) if nodes is not None else set()
        for a, b in pairs:
            node_set.update((a, b))
        return cls(sorted(node_set), [Edge(a, b, weight) for a, b in sorted(set(pairs))])


def extract_edges(m: np.ndarray, theta: float, codes: Sequence[str]) -> CausalGraph:
    m = np.asarray(m, dtype=float)
    n = len(codes)
    if m.shape != (n, n):
        raise ValueError(f"matrix shape {m.shape} does not match {n} factor codes")
    cutoff = theta - EDGE_TOLERANCE * (float(np.abs(m).max()) if n else 0.0)
    edges = [
        Edge(codes[i], codes[j], float(m[i, j]))
        for i in range(n)
        for j in range(n)
        if i != j and m[i, j] >= cutoff
    ]
    edges.sort(key=lambda e: (e.source, e.target))
    return CausalGraph(list(codes), edges)


def canonical_cycle(cycle: Sequence[str]) -> tuple[str, ...]:
    """Rotate a cycle so it starts at its smallest node."""
    k = min(range(len(cycle)), key=lambda i: cycle[i])
    return tuple(cycle[k:]) + tuple(cycle[:k])


def _strong_components(nodes: Sequence[str], succ: dict[str, list[str]]) -> list[list[str]]:
    # iterative Tarjan
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    comps: list[list[str]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def _circuits_from(start: str, succ: dict[str, list[str]], allowed: set[str], emit) -> None:
    """Johnson's CIRCUIT search for cycles through ``start`` inside ``allowed``."""
    blocked = {start}
    block_map: dict[str, set[str]] = defaultdict(set)
    path = [start]
    stack = [(start, [w for w in succ[start] if w in allowed])]
    closed = [False]

    def unblock(node: str) -> None:
        todo = [node]
        while todo:
            u = todo.pop()
            if u in blocked:
                blocked.discard(u)
                todo.extend(block_map.pop(u, ()))

    while stack:
        v, nbrs = stack[-1]
        if nbrs:
            w = nbrs.pop()
            if w == start:
                emit(list(path))
                closed[-1] = True
            elif w not in blocked:
                path.append(w)
                stack.append((w, [x for x in succ[w] if x in allowed]))
                closed.append(False)
                blocked.add(w)
            continue
        stack.pop()
        path.pop()
        found = closed.pop()
        if found:
            unblock(v)
        else:
            for w in succ[v]:
                if w in allowed:
                    block_map[w].add(v)
        if closed:
            closed[-1] = closed[-1] or found


def enumerate_loops(graph: CausalGraph, cap: int = DEFAULT_LOOP_CAP) -> list[list[str]]:
    """All elementary cycles, each starting at its smallest node.

    Sorted by length, then lexicographically. Raises ``LoopOverflowError``
    once more than ``cap`` cycles are found.
    """
    succ = {v: [] for v in graph.nodes}
    for e in graph.edges:
        if e.source == e.target:
            continue
        succ.setdefault(e.source, [])
        succ.setdefault(e.target, [])
        if e.target not in succ[e.source]:
            succ[e.source].append(e.target)
    order = sorted(succ)
    found: list[tuple[str, ...]] = []

    def emit(cycle: list[str]) -> None:
        found.append(canonical_cycle(cycle))
        if len(found) > cap:
            raise LoopOverflowError(f"more than {cap} feedback loops; raise the cap or the threshold")

    # Johnson: take nodes in order, search cycles whose smallest node is `start`
    # inside the strong component of the subgraph induced by nodes >= start.
    for pos, start in enumerate(order):
        remaining = set(order[pos:])
        sub = {v: [w for w in succ[v] if w in remaining] for v in order[pos:]}
        comp = next(c for c in _strong_components(order[pos:], sub) if start in c)
        if len(comp) < 2:
            continue
        _circuits_from(start, sub, set(comp), emit)

    loops = sorted(set(found), key=lambda c: (len(c), c))
    return [list(c) for c in loops]


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_cld(graph: CausalGraph, precision: int = 4, name: str = "CLD") -> str:
    """Graphviz DOT text for the causal loop diagram."""
    lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;"]
    for v in sorted(graph.nodes):
        lines.append(f"  {_quote(v)};")
    for e in sorted(graph.edges, key=lambda e: (e.source, e.target)):
        label = format_number(e.weight, precision)
        lines.append(f'  {_quote(e.source)} -> {_quote(e.target)} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
