"""Open port-graph diagrams and their categorical combinators.

A diagram is an immutable multigraph of generator nodes (Z spiders, H
boxes, triangles) whose free edge-ends are attached to ordered input and
output boundaries.  Identity wires, swaps, caps and cups are pure wiring:
they are edges between boundary slots, never nodes.  Closed loops with no
nodes on them cannot be represented as edges, so the diagram carries a
loop counter (each bare loop contributes a scalar factor 2 under the
standard interpretation).

Endpoints of an edge are tuples:

    ("in", i)        input boundary slot i
    ("out", j)       output boundary slot j
    ("n", v, p)      port p of node v

Ports of Z spiders and H boxes are interchangeable; ports of triangles
are not (port 0 is the input side, port 1 the tip), which is how flipped
triangles are expressed by wiring alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

Z = "z"
H = "h"
T = "t"
T_INV = "t_inv"

_KINDS = (Z, H, T, T_INV)

Endpoint = tuple
Edge = tuple


class DiagramError(ValueError):
    """Raised for ill-formed diagrams or ill-typed combinator calls."""


@dataclass(frozen=True)
class Node:
    """A generator node: kind plus the complex parameter of a Z spider.

    The ``phase`` field is the complex number carried by a Z spider (the
    spider interprets to |0..0><0..0| + phase |1..1><1..1|).  It is
    ignored for the other kinds, which carry no parameter.
    """

    kind: str
    phase: complex = 1.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DiagramError(f"unknown node kind {self.kind!r}")


def _ep_key(ep: Endpoint):
    tag = ep[0]
    order = {"n": 0, "in": 1, "out": 2}[tag]
    return (order,) + tuple(ep[1:])


def _norm_edge(a: Endpoint, b: Endpoint) -> Edge:
    return (a, b) if _ep_key(a) <= _ep_key(b) else (b, a)


class Diagram:
    """An immutable open diagram of type n_in -> n_out."""

    __slots__ = ("nodes", "edges", "n_in", "n_out", "loops")

    def __init__(self, nodes: dict[int, Node], edges: Iterable[Edge],
                 n_in: int, n_out: int, loops: int = 0, validate: bool = True):
        self.nodes = dict(nodes)
        self.edges = tuple(_norm_edge(a, b) for a, b in edges)
        self.n_in = n_in
        self.n_out = n_out
        self.loops = loops
        if validate:
            self.check_validity()

    # -- well-formedness ------------------------------------------------

    def check_validity(self) -> None:
        """Raise DiagramError unless every port and boundary slot is used
        exactly once and degree constraints hold."""
        if self.n_in < 0 or self.n_out < 0 or self.loops < 0:
            raise DiagramError("negative boundary or loop count")
        seen: dict[Endpoint, int] = {}
        for a, b in self.edges:
            for ep in (a, b):
                seen[ep] = seen.get(ep, 0) + 1
        for ep, count in seen.items():
            if count != 1:
                raise DiagramError(f"endpoint {ep} used {count} times")
            tag = ep[0]
            if tag == "in":
                if not 0 <= ep[1] < self.n_in:
                    raise DiagramError(f"input slot {ep[1]} out of range")
            elif tag == "out":
                if not 0 <= ep[1] < self.n_out:
                    raise DiagramError(f"output slot {ep[1]} out of range")
            elif tag == "n":
                if ep[1] not in self.nodes:
                    raise DiagramError(f"edge references missing node {ep[1]}")
            else:
                raise DiagramError(f"bad endpoint tag {tag!r}")
        for i in range(self.n_in):
            if ("in", i) not in seen:
                raise DiagramError(f"dangling input slot {i}")
        for j in range(self.n_out):
            if ("out", j) not in seen:
                raise DiagramError(f"dangling output slot {j}")
        ports_of: dict[int, list[int]] = {v: [] for v in self.nodes}
        for ep in seen:
            if ep[0] == "n":
                ports_of[ep[1]].append(ep[2])
        for v, node in self.nodes.items():
            ports = sorted(ports_of[v])
            if ports != list(range(len(ports))):
                raise DiagramError(f"node {v} ports {ports} not contiguous")
            if node.kind in (H, T, T_INV) and len(ports) != 2:
                raise DiagramError(
                    f"node {v} of kind {node.kind} must have degree 2, "
                    f"got {len(ports)}")

    # -- basic queries ---------------------------------------------------

    def degree(self, v: int) -> int:
        return sum((ep[0] == "n" and ep[1] == v) for e in self.edges for ep in e)

    def node_ids(self) -> list[int]:
        return sorted(self.nodes)

    def edges_at(self, v: int) -> list[int]:
        """Indices into self.edges of the edges touching node v."""
        return [i for i, e in enumerate(self.edges)
                if any(ep[0] == "n" and ep[1] == v for ep in e)]

    @property
    def type(self) -> tuple[int, int]:
        return (self.n_in, self.n_out)

    def structural_key(self):
        """Canonical id-normalised form; equal keys mean identical diagrams
        up to node renumbering in sorted-id order."""
        order = {v: k for k, v in enumerate(self.node_ids())}

        def ren(ep):
            return ("n", order[ep[1]], ep[2]) if ep[0] == "n" else ep

        nodes = tuple((order[v], self.nodes[v].kind, complex(self.nodes[v].phase))
                      for v in self.node_ids())
        edges = tuple(sorted(_norm_edge(ren(a), ren(b)) for a, b in self.edges))
        return (nodes, edges, self.n_in, self.n_out, self.loops)

    def __repr__(self):
        return (f"Diagram({self.n_in}->{self.n_out}, {len(self.nodes)} nodes, "
                f"{len(self.edges)} edges, loops={self.loops})")


# -- wire splicing used by compose -------------------------------------

def _splice(edges: Sequence[Edge], is_junction: Callable[[Endpoint], bool]):
    """Remove 2-valent junction points from a wire multigraph.

    Every endpoint satisfying ``is_junction`` must occur exactly twice in
    ``edges``.  Returns (new_edges, n_loops) where wires running only
    through junctions close up into counted loops.
    """
    occ: dict[Endpoint, list[tuple[int, int]]] = {}
    for i, e in enumerate(edges):
        for side in (0, 1):
            ep = e[side]
            if is_junction(ep):
                occ.setdefault(ep, []).append((i, side))
    for ep, ends in occ.items():
        if len(ends) != 2:
            raise DiagramError(f"junction {ep} has {len(ends)} edge-ends")

    visited = [False] * len(edges)
    out: list[Edge] = []
    loops = 0

    def step(i: int, side: int):
        """From edge i arriving at its `side` endpoint (a junction), hop to
        the partner edge across the junction; return (edge, far side)."""
        ep = edges[i][side]
        (i1, s1), (i2, s2) = occ[ep]
        j, sj = (i2, s2) if (i1, s1) == (i, side) else (i1, s1)
        return j, 1 - sj

    for start in range(len(edges)):
        if visited[start]:
            continue
        visited[start] = True
        a, b = edges[start]
        if not is_junction(a) and not is_junction(b):
            out.append((a, b))
            continue
        closed = False
        free_ends: list[Endpoint] = []
        for side in (0, 1):
            ep = edges[start][side]
            if not is_junction(ep):
                free_ends.append(ep)
                continue
            i, s = start, side
            while True:
                i, s = step(i, s)
                if (i, s) == (start, side):
                    # walked all the way around: closed loop
                    closed = True
                    break
                visited[i] = True
                ep2 = edges[i][s]
                if not is_junction(ep2):
                    free_ends.append(ep2)
                    break
            if closed:
                break
        if closed:
            loops += 1
        else:
            if len(free_ends) != 2:
                raise DiagramError("inconsistent wiring")
            out.append((free_ends[0], free_ends[1]))
    return out, loops


# -- combinators --------------------------------------------------------

def compose(d1: Diagram, d2: Diagram) -> Diagram:
    """Sequential composition: d2 after d1 (d1's outputs glued to d2's
    inputs positionally).  Requires d1.n_out == d2.n_in."""
    if d1.n_out != d2.n_in:
        raise DiagramError(
            f"compose arity mismatch: {d1.n_out} outputs vs {d2.n_in} inputs")
    shift = max(d1.nodes, default=-1) + 1
    nodes = dict(d1.nodes)
    nodes.update({v + shift: nd for v, nd in d2.nodes.items()})

    def ren1(ep):
        if ep[0] == "out":
            return ("glue", ep[1])
        return ep

    def ren2(ep):
        if ep[0] == "in":
            return ("glue", ep[1])
        if ep[0] == "n":
            return ("n", ep[1] + shift, ep[2])
        return ep

    edges = [(ren1(a), ren1(b)) for a, b in d1.edges]
    edges += [(ren2(a), ren2(b)) for a, b in d2.edges]
    spliced, new_loops = _splice(edges, lambda ep: ep[0] == "glue")
    return Diagram(nodes, spliced, d1.n_in, d2.n_out,
                   loops=d1.loops + d2.loops + new_loops)


def tensor(d1: Diagram, d2: Diagram) -> Diagram:
    """Parallel composition; d1's boundaries precede d2's."""
    shift = max(d1.nodes, default=-1) + 1
    nodes = dict(d1.nodes)
    nodes.update({v + shift: nd for v, nd in d2.nodes.items()})

    def ren2(ep):
        if ep[0] == "n":
            return ("n", ep[1] + shift, ep[2])
        if ep[0] == "in":
            return ("in", ep[1] + d1.n_in)
        return ("out", ep[1] + d1.n_out)

    edges = list(d1.edges) + [(ren2(a), ren2(b)) for a, b in d2.edges]
    return Diagram(nodes, edges, d1.n_in + d2.n_in, d1.n_out + d2.n_out,
                   loops=d1.loops + d2.loops)


def tensor_all(ds: Sequence[Diagram]) -> Diagram:
    out = empty()
    for d in ds:
        out = tensor(out, d)
    return out


def compose_all(ds: Sequence[Diagram]) -> Diagram:
    if not ds:
        raise DiagramError("compose_all of nothing")
    out = ds[0]
    for d in ds[1:]:
        out = compose(out, d)
    return out


def flip(d: Diagram) -> Diagram:
    """Upside-down flip: inputs become outputs and vice versa (the
    interpretation transposes)."""

    def ren(ep):
        if ep[0] == "in":
            return ("out", ep[1])
        if ep[0] == "out":
            return ("in", ep[1])
        return ep

    edges = [(ren(a), ren(b)) for a, b in d.edges]
    return Diagram(d.nodes, edges, d.n_out, d.n_in, loops=d.loops)


def permute_outputs(d: Diagram, perm: Sequence[int]) -> Diagram:
    """Reorder outputs; new slot i carries what old slot perm[i] carried."""
    if sorted(perm) != list(range(d.n_out)):
        raise DiagramError(f"bad output permutation {perm}")
    inv = [0] * d.n_out
    for new, old in enumerate(perm):
        inv[old] = new

    def ren(ep):
        if ep[0] == "out":
            return ("out", inv[ep[1]])
        return ep

    edges = [(ren(a), ren(b)) for a, b in d.edges]
    return Diagram(d.nodes, edges, d.n_in, d.n_out, loops=d.loops)


def bend_to_state(d: Diagram) -> Diagram:
    """Map-state duality: bend every input up with a cap, producing a
    0 -> (n_in + n_out) state.

    Convention (fixed once, used by every oracle): the n bent former
    inputs occupy the left-most n output slots in reversed order, then
    d's original outputs follow.  Bending input i of an n-input diagram
    sends it to output slot n - 1 - i.
    """
    n = d.n_in

    def ren(ep):
        if ep[0] == "in":
            return ("out", n - 1 - ep[1])
        if ep[0] == "out":
            return ("out", n + ep[1])
        return ep

    edges = [(ren(a), ren(b)) for a, b in d.edges]
    return Diagram(d.nodes, edges, 0, n + d.n_out, loops=d.loops)


# -- builders ------------------------------------------------------------

def empty() -> Diagram:
    return Diagram({}, [], 0, 0)


def identity(n: int = 1) -> Diagram:
    return Diagram({}, [(("in", i), ("out", i)) for i in range(n)], n, n)


def wire() -> Diagram:
    return identity(1)


def swap() -> Diagram:
    return permutation([1, 0])


def permutation(perm: Sequence[int]) -> Diagram:
    """Wire permutation; output slot j is connected to input slot perm[j]."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise DiagramError(f"bad permutation {perm}")
    return Diagram({}, [(("in", perm[j]), ("out", j)) for j in range(n)], n, n)


def cap() -> Diagram:
    """0 -> 2 bent wire; interprets to (1,0,0,1)^T."""
    return Diagram({}, [(("out", 0), ("out", 1))], 0, 2)


def cup() -> Diagram:
    """2 -> 0 bent wire; interprets to (1,0,0,1)."""
    return Diagram({}, [(("in", 0), ("in", 1))], 2, 0)


def z_spider(n_in: int, n_out: int, phase: complex = 1.0) -> Diagram:
    """Z spider of type n_in -> n_out carrying a complex parameter."""
    if n_in < 0 or n_out < 0:
        raise DiagramError("negative spider arity")
    edges = []
    for i in range(n_in):
        edges.append((("in", i), ("n", 0, i)))
    for j in range(n_out):
        edges.append((("out", j), ("n", 0, n_in + j)))
    return Diagram({0: Node(Z, complex(phase))}, edges, n_in, n_out)


def scalar_z(phase: complex) -> Diagram:
    """Degree-0 Z spider: a floating scalar node worth 1 + phase."""
    return z_spider(0, 0, phase)


def h_box() -> Diagram:
    return Diagram({0: Node(H)},
                   [(("in", 0), ("n", 0, 0)), (("out", 0), ("n", 0, 1))], 1, 1)


def triangle() -> Diagram:
    """1 -> 1 triangle; interprets to [[1,1],[0,1]] (port 0 in, port 1 out)."""
    return Diagram({0: Node(T)},
                   [(("in", 0), ("n", 0, 0)), (("out", 0), ("n", 0, 1))], 1, 1)


def triangle_inv() -> Diagram:
    """1 -> 1 inverse triangle; interprets to [[1,-1],[0,1]]."""
    return Diagram({0: Node(T_INV)},
                   [(("in", 0), ("n", 0, 0)), (("out", 0), ("n", 0, 1))], 1, 1)


def triangle_flipped() -> Diagram:
    """Triangle used upside down: interprets to [[1,0],[1,1]]."""
    return flip(triangle())


def triangle_inv_flipped() -> Diagram:
    """Inverse triangle used upside down: interprets to [[1,0],[-1,1]]."""
    return flip(triangle_inv())


TAU_ZERO = 0.0
TAU_PI = math.pi


def _tau_sign(tau: float) -> complex:
    if abs(tau) < 1e-12:
        return 1.0
    if abs(tau - math.pi) < 1e-12:
        return -1.0
    raise DiagramError(f"X phase must be 0 or pi, got {tau}")


def x_spider(n_in: int, n_out: int, tau: float = TAU_ZERO) -> Diagram:
    """X (pink) spider macro: an H-conjugated Z spider.

    Pink nodes are not primitive.  The bare H-conjugation of a Z spider
    with parameter e^{i tau} interprets to exactly twice the parity-sum
    tensor (the factor is pinned by contraction in the test suite), so the
    expansion includes a compensating scalar worth 1/2, making the macro
    interpret to the parity-sum tensor itself:

        entry[i1..im; j1..jn] = 1  iff  i1+..+im = j1+..+jn + tau/pi (mod 2)
    """
    sign = _tau_sign(tau)
    core = z_spider(n_in, n_out, sign)
    if n_in:
        core = compose(tensor_all([h_box()] * n_in), core)
    if n_out:
        core = compose(core, tensor_all([h_box()] * n_out))
    return tensor(core, scalar_z(-0.5))


def x_spider_bare(n_in: int, n_out: int, tau: float = TAU_ZERO) -> Diagram:
    """The H-conjugated Z spider without the compensating scalar; used by
    the tests that pin the macro's global scalar by contraction."""
    sign = _tau_sign(tau)
    core = z_spider(n_in, n_out, sign)
    if n_in:
        core = compose(tensor_all([h_box()] * n_in), core)
    if n_out:
        core = compose(core, tensor_all([h_box()] * n_out))
    return core
