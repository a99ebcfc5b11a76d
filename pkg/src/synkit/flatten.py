"""Hierarchy flattening: atomic instances, end-to-end wiring, schedule order.

Composites are transparent containers; channels and delegations are resolved
to direct links between atomic ports (or root boundary ports). A channel fed
by a weakly causal producer is an instantaneous dependency; strongly causal
producers emit from a one-tick buffer and create no instantaneous edge. The
schedule is a topological order of the instantaneous-dependency graph, which
exists exactly when the causality check passes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .ast import ComponentSpec, Composite, Model

Path = tuple[str, ...]

# where an atomic input (or root output) reads its message from
RootIn = tuple[str]  # ('portname',) on the root boundary
InstOut = tuple[int, str]  # (instance index, port name)
Source = Union[None, RootIn, InstOut]


@dataclass
class Instance:
    path: Path
    spec: ComponentSpec
    # per input port name: where the message comes from
    sources: dict[str, Source]


@dataclass
class FlatModel:
    model: Model
    instances: list[Instance]  # in schedule (topological) order
    root_output_sources: dict[str, Source]
    # instantaneous edges between instance indices (producer -> consumer)
    edges: set[tuple[int, int]]


class CausalityCycle(Exception):
    def __init__(self, cycle_paths: list[Path]):
        names = " -> ".join("/".join(p) for p in cycle_paths)
        super().__init__(f"weakly causal cycle: {names}")
        self.cycle_paths = cycle_paths


def _collect(spec: ComponentSpec, path: Path, atoms, parents):
    if isinstance(spec.behavior, Composite):
        parents[path] = spec
        for sub in spec.behavior.subs:
            _collect(sub, path + (sub.name,), atoms, parents)
    else:
        atoms[path] = spec


def flatten(model: Model) -> FlatModel:
    """Flatten a model that passed the static checks.

    Raises CausalityCycle if the instantaneous-dependency graph is cyclic
    (callers run the causality check first).
    """
    atoms: dict[Path, ComponentSpec] = {}
    composites: dict[Path, ComponentSpec] = {}
    root_path: Path = (model.root.name,)
    _collect(model.root, root_path, atoms, composites)
    if not atoms and not isinstance(model.root.behavior, Composite):
        atoms[root_path] = model.root

    # immediate feeder of every (component path, port): channels inside the
    # enclosing composite and delegations at composite boundaries
    feeds: dict[tuple[Path, str], tuple[Path, str]] = {}
    for cpath, comp in composites.items():
        body = comp.behavior
        for ch in body.channels:
            feeds[(cpath + (ch.dst_comp,), ch.dst_port)] = (cpath + (ch.src_comp,), ch.src_port)
        for d in body.delegations:
            if d.src_comp is None:  # parent in -> child in
                feeds[(cpath + (d.dst_comp,), d.dst_port)] = (cpath, d.src_port)
            else:  # child out -> parent out
                feeds[(cpath, d.dst_port)] = (cpath + (d.src_comp,), d.src_port)

    spec_at: dict[Path, ComponentSpec] = dict(atoms)
    spec_at.update(composites)

    def resolve(path: Path, port: str) -> Source:
        # walk through composite boundaries to an atomic output or root input
        seen = set()
        cur = (path, port)
        while True:
            if cur in seen:
                raise ValueError(f"wiring loop at {cur}")
            seen.add(cur)
            if cur not in feeds:
                return None  # unconnected: reads absent
            src_path, src_port = feeds[cur]
            if src_path == root_path and any(
                p.name == src_port and p.direction == "in" for p in model.root.ports
            ):
                return (src_port,)
            spec = spec_at[src_path]
            is_out = any(p.name == src_port and p.direction == "out" for p in spec.ports)
            if is_out and src_path in atoms:
                return (_index_of[src_path], src_port)
            cur = (src_path, src_port)

    order = sorted(atoms)  # stable pre-order by path
    _index_of = {p: i for i, p in enumerate(order)}

    instances = [
        Instance(path=p, spec=atoms[p], sources={}) for p in order
    ]
    for inst in instances:
        for port in inst.spec.inputs():
            inst.sources[port.name] = resolve(inst.path, port.name)

    root_out: dict[str, Source] = {}
    if isinstance(model.root.behavior, Composite):
        for port in model.root.outputs():
            root_out[port.name] = resolve(root_path, port.name)
    else:
        for port in model.root.outputs():
            root_out[port.name] = (0, port.name)
        # atomic root reads the root inputs directly
        for inst in instances:
            for port in inst.spec.inputs():
                inst.sources[port.name] = (port.name,)

    edges: set[tuple[int, int]] = set()
    for ci, inst in enumerate(instances):
        for src in inst.sources.values():
            if isinstance(src, tuple) and len(src) == 2:
                pi = src[0]
                if instances[pi].spec.causality == "weak":
                    edges.add((pi, ci))

    sched = _topo_order(len(instances), edges)
    if sched is None:
        cyc = _find_cycle(len(instances), edges)
        raise CausalityCycle([instances[i].path for i in cyc])

    remap = {old: new for new, old in enumerate(sched)}
    reordered = [instances[i] for i in sched]
    for inst in reordered:
        for port, src in inst.sources.items():
            if isinstance(src, tuple) and len(src) == 2:
                inst.sources[port] = (remap[src[0]], src[1])
    for port, src in root_out.items():
        if isinstance(src, tuple) and len(src) == 2:
            root_out[port] = (remap[src[0]], src[1])
    new_edges = {(remap[a], remap[b]) for a, b in edges}

    return FlatModel(model=model, instances=reordered, root_output_sources=root_out, edges=new_edges)


def _topo_order(n: int, edges: set[tuple[int, int]]) -> Optional[list[int]]:
    indeg = [0] * n
    succs: list[list[int]] = [[] for _ in range(n)]
    for a, b in sorted(edges):
        indeg[b] += 1
        succs[a].append(b)
    ready = sorted(i for i in range(n) if indeg[i] == 0)
    out: list[int] = []
    while ready:
        i = ready.pop(0)
        out.append(i)
        for j in succs[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                # keep determinism: insert in sorted position
                lo = 0
                while lo < len(ready) and ready[lo] < j:
                    lo += 1
                ready.insert(lo, j)
    return out if len(out) == n else None


def _find_cycle(n: int, edges: set[tuple[int, int]]) -> list[int]:
    succs: list[list[int]] = [[] for _ in range(n)]
    for a, b in sorted(edges):
        succs[a].append(b)
    color = [0] * n  # 0 unvisited, 1 on stack, 2 done
    stack: list[int] = []

    def dfs(v: int) -> Optional[list[int]]:
        color[v] = 1
        stack.append(v)
        for w in succs[v]:
            if color[w] == 1:
                return stack[stack.index(w):]
            if color[w] == 0:
                found = dfs(w)
                if found:
                    return found
        stack.pop()
        color[v] = 2
        return None

    for v in range(n):
        if color[v] == 0:
            found = dfs(v)
            if found:
                return found
    raise AssertionError("no cycle found in cyclic graph")


def instantaneous_port_graph(model: Model) -> dict[tuple[Path, str], set[tuple[Path, str]]]:
    """Port-level instantaneous reachability edges over the whole tree.

    Used to compare declared composite causality against the actual wiring:
    structural links are instantaneous, weak atomics connect all their inputs
    to all their outputs, strong atomics break the path.
    """
    atoms: dict[Path, ComponentSpec] = {}
    composites: dict[Path, ComponentSpec] = {}
    root_path: Path = (model.root.name,)
    _collect(model.root, root_path, atoms, composites)

    graph: dict[tuple[Path, str], set[tuple[Path, str]]] = {}

    def add(a, b):
        graph.setdefault(a, set()).add(b)

    for cpath, comp in composites.items():
        body = comp.behavior
        for ch in body.channels:
            add((cpath + (ch.src_comp,), ch.src_port), (cpath + (ch.dst_comp,), ch.dst_port))
        for d in body.delegations:
            if d.src_comp is None:
                add((cpath, d.src_port), (cpath + (d.dst_comp,), d.dst_port))
            else:
                add((cpath + (d.src_comp,), d.src_port), (cpath, d.dst_port))
    for apath, spec in atoms.items():
        if spec.causality == "weak":
            for pin in spec.inputs():
                for pout in spec.outputs():
                    add((apath, pin.name), (apath, pout.name))
    return graph
