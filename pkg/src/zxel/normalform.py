"""Elementary-transformation diagrams and the normal form of states.

A state on m wires is canonically represented by its coefficient vector
(length 2^m, indexed so that wire i weighs 2^i with wire 0 right-most).
The associated diagram applies 2^m - 1 row additions and one row
multiplication to the base state e_{2^m-1}:

  * a row addition with coefficient a and wire subset S interprets to the
    identity matrix plus a at (row j, column 2^m - 1), j = 2^m - 1 -
    sum_{i in S} 2^i;
  * a row multiplication with coefficient a interprets to
    diag(1, ..., 1, a).

This module never calls the interpreter; the normal-form pipeline is an
independent route that the semantics module cross-checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import diagram as dg
from .diagram import (Diagram, compose, compose_all, tensor, tensor_all,
                      bend_to_state, identity, permutation, triangle,
                      triangle_inv, x_spider, z_spider)

NF_TOL = 1e-9


@dataclass(frozen=True)
class NormalForm:
    """Canonical representative of an m-wire state: its coefficients."""

    m: int
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        if self.m < 0 or len(self.coeffs) != 2 ** self.m:
            raise ValueError(
                f"normal form needs 2^{self.m} coefficients, "
                f"got {len(self.coeffs)}")

    def vector(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)


@dataclass(frozen=True)
class ElementarySpec:
    """One elementary transformation: kind "add" (coefficient + nonempty
    wire subset) or "mult" (coefficient only)."""

    kind: str
    m: int
    coeff: complex
    subset: frozenset[int] | None = None

    def __post_init__(self):
        if self.kind not in ("add", "mult"):
            raise ValueError(f"bad elementary kind {self.kind!r}")
        if self.kind == "add":
            if not self.subset:
                raise ValueError("row addition needs a nonempty wire subset")
            if not all(0 <= i < self.m for i in self.subset):
                raise ValueError("row addition subset out of range")
        elif self.subset is not None:
            raise ValueError("row multiplication takes no subset")

    @property
    def target_row(self) -> int:
        if self.kind == "mult":
            return 2 ** self.m - 1
        return 2 ** self.m - 1 - sum(2 ** i for i in self.subset)

    def matrix(self) -> np.ndarray:
        """The elementary matrix itself (the A_j / M formulas)."""
        n = 2 ** self.m
        mat = np.eye(n, dtype=complex)
        if self.kind == "add":
            mat[self.target_row, n - 1] = self.coeff
        else:
            mat[n - 1, n - 1] = self.coeff
        return mat

    def to_jsonable(self) -> dict:
        rec = {"kind": self.kind, "m": self.m,
               "coeff": [self.coeff.real, self.coeff.imag]}
        if self.kind == "add":
            rec["subset"] = sorted(self.subset)
        return rec


# -- diagrammatic gadgets -------------------------------------------------

def and_gate() -> Diagram:
    """2 -> 1 logical AND on the computational basis,
    built as triangle-inverse after a green merge of two triangles."""
    return compose_all([
        tensor(triangle(), triangle()),
        z_spider(2, 1, 1.0),
        triangle_inv(),
    ])


def and_tree(k: int) -> Diagram:
    """k -> 1 AND of k bits (k >= 1), a right-leaning cascade."""
    if k < 1:
        raise ValueError("and_tree needs at least one wire")
    out = identity(1)
    for _ in range(k - 1):
        out = compose(tensor(out, identity(1)), and_gate())
    return out


def _copies_then_sides(m: int) -> Diagram:
    """m -> 2m: a degree-3 green dot on each wire; outputs ordered as the
    m through-wires followed by the m side branches."""
    copies = tensor_all([z_spider(1, 2, 1.0)] * m)
    perm = [2 * i for i in range(m)] + [2 * i + 1 for i in range(m)]
    return compose(copies, permutation(perm))


def _apply_flip_layer(m: int, subset: frozenset[int]) -> Diagram:
    """(m + s) -> m: XOR the s control branches into the wires of the
    subset via pink dots; controls arrive ordered by decreasing wire."""
    wires_desc = sorted(subset, reverse=True)
    # route each control next to its wire: slot of wire i is m-1-i
    n = m + len(wires_desc)
    src: list[int] = []
    layer: list[Diagram] = []
    taken = 0
    for slot in range(m):
        wire = m - 1 - slot
        src.append(slot)
        if wire in subset:
            src.append(m + taken)
            taken += 1
            layer.append(x_spider(2, 1, dg.TAU_ZERO))
        else:
            layer.append(identity(1))
    return compose(permutation(src), tensor_all(layer))


def row_addition_diagram(m: int, a: complex, subset) -> Diagram:
    """Diagram of the row-addition elementary matrix on m wires.

    Green dots on every wire feed an AND that detects the all-ones input;
    on detection a flip command weighted by the coefficient fans out to
    pink dots on the wires of the subset.
    """
    subset = frozenset(subset)
    spec = ElementarySpec("add", m, complex(a), subset)  # validates args
    s = len(subset)
    stages = [
        _copies_then_sides(m),
        tensor(identity(m), and_tree(m)),
        tensor(identity(m), compose(triangle(), z_spider(1, 1, complex(a)))),
        tensor(identity(m), z_spider(1, s, 1.0)),
        _apply_flip_layer(m, subset),
    ]
    d = compose_all(stages)
    assert d.type == (m, m), spec
    return d


def row_multiplication_diagram(m: int, a: complex) -> Diagram:
    """Diagram of diag(1, ..., 1, a) on m wires: green dots on every wire
    into an AND, capped off by a 1 -> 0 green dot carrying a."""
    if m < 1:
        raise ValueError("row multiplication needs at least one wire")
    return compose_all([
        _copies_then_sides(m),
        tensor(identity(m), and_tree(m)),
        tensor(identity(m), z_spider(1, 0, complex(a))),
    ])


def pi_layer(m: int, wires) -> Diagram:
    """m -> m layer with a pink pi dot on each listed wire."""
    wires = frozenset(wires)
    layer = [x_spider(1, 1, dg.TAU_PI) if (m - 1 - slot) in wires
             else identity(1) for slot in range(m)]
    return tensor_all(layer) if m else dg.empty()


def decorated_row_addition(m: int, a: complex, subset, pi_wires) -> Diagram:
    """Row addition whose detector reads flipped bits on ``pi_wires``:
    pairs of pink pi nodes around the gadget on those wires."""
    core = row_addition_diagram(m, a, subset)
    layer = pi_layer(m, pi_wires)
    return compose_all([layer, core, layer])


def decorated_row_multiplication(m: int, a: complex, pi_wires) -> Diagram:
    """Row multiplication conjugated by pink pi pairs on ``pi_wires``."""
    core = row_multiplication_diagram(m, a)
    layer = pi_layer(m, pi_wires)
    return compose_all([layer, core, layer])


def elementary_matrix(spec: ElementarySpec) -> np.ndarray:
    return spec.matrix()


def elementary_diagram(spec: ElementarySpec) -> Diagram:
    if spec.kind == "add":
        return row_addition_diagram(spec.m, spec.coeff, spec.subset)
    return row_multiplication_diagram(spec.m, spec.coeff)


# -- normal forms ---------------------------------------------------------

def nf_from_vector(v) -> NormalForm:
    """Wrap a coefficient vector of power-of-two length."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    m = int(v.size).bit_length() - 1
    if 2 ** m != v.size:
        raise ValueError(f"vector length {v.size} is not a power of two")
    return NormalForm(m, tuple(complex(x) for x in v))


def elementary_specs(nf: NormalForm) -> list[ElementarySpec]:
    """The 2^m - 1 row additions (ordered by increasing target row) and
    the final row multiplication realising the coefficient vector."""
    if nf.m == 0:
        return []
    last = 2 ** nf.m - 1
    specs = []
    for j in range(last):
        zero_bits = frozenset(i for i in range(nf.m) if not j >> i & 1)
        specs.append(ElementarySpec("add", nf.m, nf.coeffs[j], zero_bits))
    specs.append(ElementarySpec("mult", nf.m, nf.coeffs[last]))
    return specs


def base_state(m: int) -> Diagram:
    """The all-ones base state e_{2^m-1}: a pink pi state on every wire."""
    return tensor_all([x_spider(0, 1, dg.TAU_PI)] * m)


def nf_to_diagram(nf: NormalForm) -> Diagram:
    """Emit the normal-form diagram: base state, then each elementary
    transformation in the canonical order."""
    if nf.m == 0:
        return scalar_nf_diagram(nf.coeffs[0])
    d = base_state(nf.m)
    for spec in elementary_specs(nf):
        d = compose(d, elementary_diagram(spec))
    return d


def scalar_nf(a: complex) -> NormalForm:
    return NormalForm(0, (complex(a),))


def scalar_nf_diagram(a: complex) -> Diagram:
    """0 -> 0 scalar normal form: a green a-state plugged into a pink pi
    costate; interprets to exactly a."""
    return compose(z_spider(0, 1, complex(a)), x_spider(1, 0, dg.TAU_PI))


def nf_equal(nf1: NormalForm, nf2: NormalForm, tol: float = NF_TOL) -> bool:
    if nf1.m != nf2.m:
        return False
    return bool(np.max(np.abs(nf1.vector() - nf2.vector()), initial=0.0) <= tol)


def nf_tensor(nf_a: NormalForm, nf_b: NormalForm) -> NormalForm:
    """Tensor of normal forms: products a_i b_j, a-side on the
    more-significant wires."""
    return NormalForm(nf_a.m + nf_b.m,
                      tuple(np.kron(nf_a.vector(), nf_b.vector())))


def nf_permute(nf: NormalForm, perm) -> NormalForm:
    """Reorder wires: new wire i is old wire perm[i] (significance
    indexing, wire 0 right-most)."""
    m = nf.m
    if sorted(perm) != list(range(m)):
        raise ValueError(f"bad wire permutation {perm}")
    arr = nf.vector().reshape((2,) * m) if m else nf.vector()
    # axis a holds wire m-1-a; new axis a' must hold old wire perm[m-1-a']
    axes = [m - 1 - perm[m - 1 - a] for a in range(m)]
    out = np.transpose(arr, axes) if m else arr
    return NormalForm(m, tuple(out.reshape(-1)))


def nf_self_plug(nf: NormalForm, wire_pair) -> NormalForm:
    """Plug two output wires with a cup.

    Reduces to the right-most pair by a wire permutation, then applies
    b_k = a_{4k} + a_{4k+3}.
    """
    p, q = wire_pair
    if nf.m < 2:
        raise ValueError("self-plugging needs at least two wires")
    if p == q:
        raise ValueError("cannot plug a wire into itself")
    p, q = min(p, q), max(p, q)
    if not 0 <= p < q < nf.m:
        raise ValueError(f"wire pair {wire_pair} out of range")
    rest = [w for w in range(nf.m) if w not in (p, q)]
    moved = nf_permute(nf, [p, q] + rest)
    c = moved.vector()
    b = c[0::4] + c[3::4]
    return NormalForm(nf.m - 2, tuple(b))


# node state tables, written from the generator definitions (independent
# of the contraction engine); port 0 is the most significant wire
def _node_state(kind: str, phase: complex, degree: int) -> NormalForm:
    if kind == dg.Z:
        if degree == 0:
            return scalar_nf(1.0 + phase)
        v = np.zeros(2 ** degree, dtype=complex)
        v[0] = 1.0
        v[-1] = phase
        return NormalForm(degree, tuple(v))
    if kind == dg.H:
        return NormalForm(2, (1, 1, 1, -1))
    if kind == dg.T:
        return NormalForm(2, (1, 0, 1, 1))
    if kind == dg.T_INV:
        return NormalForm(2, (1, 0, -1, 1))
    raise ValueError(f"unknown node kind {kind!r}")


_GENERATOR_TABLE = {
    "copy": lambda a: _node_state(dg.Z, 1.0, 3),
    "codot": lambda a: _node_state(dg.Z, 1.0, 3),
    "z_state": lambda a: NormalForm(1, (1.0, complex(a))),
    "identity": lambda a: NormalForm(2, (1, 0, 0, 1)),
    "cap": lambda a: NormalForm(2, (1, 0, 0, 1)),
    "cup": lambda a: NormalForm(2, (1, 0, 0, 1)),
    "h": lambda a: NormalForm(2, (1, 1, 1, -1)),
    "triangle": lambda a: NormalForm(2, (1, 0, 1, 1)),
    "triangle_inv": lambda a: NormalForm(2, (1, 0, -1, 1)),
    "swap": lambda a: NormalForm(4, tuple(
        1.0 if (k >> 3 & 1) == (k >> 1 & 1) and (k >> 2 & 1) == (k & 1)
        else 0.0 for k in range(16))),
}


def generator_nf(kind: str, phase: complex = 1.0) -> NormalForm:
    """Normal form of a generator bent into a state (wire order follows
    the recorded bending convention)."""
    try:
        build = _GENERATOR_TABLE[kind]
    except KeyError:
        raise ValueError(f"unknown generator kind {kind!r}") from None
    return build(phase)


# -- normalisation of arbitrary diagrams ----------------------------------

class WireCapError(RuntimeError):
    """Normalisation would exceed the configured open-wire cap."""


def _fold_order(d: Diagram) -> list[int]:
    """Process nodes greedily, preferring the node with the most edges
    into the already-materialised frontier; ties to the smallest id."""
    remaining = set(d.node_ids())
    done: set[int] = set()
    order = []
    adj: dict[int, list[int]] = {v: [] for v in remaining}
    for a, b in d.edges:
        if a[0] == "n" and b[0] == "n":
            adj[a[1]].append(b[1])
            adj[b[1]].append(a[1])
    while remaining:
        best = min(remaining,
                   key=lambda v: (-sum(u in done or u == v for u in adj[v]), v))
        order.append(best)
        done.add(best)
        remaining.discard(best)
    return order


def normalize(d: Diagram, cap: int | None = None) -> NormalForm:
    """Rewrite any diagram into its normal form.

    Bends the diagram into a state by map-state duality, then folds the
    generators in: tensor the next generator's normal form onto the
    accumulator and self-plug every wire pair that became connected.
    """
    if cap is None:
        from .semantics import wire_cap
        cap = wire_cap()
    state = bend_to_state(d)
    if state.n_out > cap:
        raise WireCapError(
            f"state has {state.n_out} wires, cap is {cap}")

    acc = scalar_nf(2.0 ** state.loops)  # each bare loop is a scalar 2
    ports: list = []  # ports[0] most significant

    edge_key = {i: ("e", i) for i in range(len(state.edges))}

    def key_for(v: int, p: int):
        for i, (a, b) in enumerate(state.edges):
            if a == ("n", v, p) or b == ("n", v, p):
                other = b if a == ("n", v, p) else a
                if other[0] == "out":
                    return other
                return edge_key[i]
        raise AssertionError("dangling port")

    def plug_duplicates():
        nonlocal acc, ports
        while True:
            dup = None
            for i, k in enumerate(ports):
                if k[0] == "out":
                    continue
                try:
                    j = ports.index(k, i + 1)
                except ValueError:
                    continue
                dup = (i, j)
                break
            if dup is None:
                return
            i, j = dup
            L = len(ports)
            acc = nf_self_plug(acc, (L - 1 - j, L - 1 - i))
            ports = [k for t, k in enumerate(ports) if t not in (i, j)]

    # bare wires between two outputs behave like caps
    for a, b in state.edges:
        if a[0] == "out" and b[0] == "out":
            acc = nf_tensor(acc, generator_nf("cap"))
            ports.extend([a, b])

    for v in _fold_order(state):
        node = state.nodes[v]
        deg = state.degree(v)
        acc = nf_tensor(acc, _node_state(node.kind, node.phase, deg))
        ports.extend(key_for(v, p) for p in range(deg))
        if len(ports) > cap:
            raise WireCapError(
                f"normalisation frontier reached {len(ports)} wires, "
                f"cap is {cap}")
        plug_duplicates()

    # align remaining wires with the state's output order
    L = len(ports)
    assert L == state.n_out and all(k[0] == "out" for k in ports)
    if L == 0:
        return acc
    slot_wire = {k[1]: L - 1 - i for i, k in enumerate(ports)}
    perm = [slot_wire[L - 1 - w] for w in range(L)]
    return nf_permute(acc, perm)


# -- serialization --------------------------------------------------------

def nf_to_jsonable(nf: NormalForm) -> dict:
    return {"m": nf.m, "coeffs": [[c.real, c.imag] for c in nf.coeffs]}


def nf_to_json(nf: NormalForm) -> str:
    return json.dumps(nf_to_jsonable(nf))


def nf_from_json(text: str) -> NormalForm:
    rec = json.loads(text)
    coeffs = [complex(re, im) for re, im in rec["coeffs"]]
    return NormalForm(int(rec["m"]), tuple(coeffs))
