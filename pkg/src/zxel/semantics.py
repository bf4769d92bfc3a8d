"""The standard interpretation: diagrams to dense complex matrices.

A diagram of type n -> m evaluates to a 2^m x 2^n complex matrix by
contracting the generator tensors along the wiring.  Index convention:
wire 0 is the right-most wire of a boundary, and a bit on wire i weighs
2^i, so boundary slot j of an m-wire boundary carries bit weight
2^(m-1-j).

This module is the ground-truth oracle for everything else.  It has its
own contraction engine and never goes through the normal-form pipeline.
"""

from __future__ import annotations

import os

import numpy as np

from .diagram import Diagram, H, T, T_INV, Z

DEFAULT_TOL = 1e-9
_DEFAULT_WIRE_CAP = 14


class ResourceError(RuntimeError):
    """Contraction would exceed the configured open-wire cap."""


def wire_cap() -> int:
    """Open-wire cap for a single contraction (env ZXEL_WIRE_CAP)."""
    raw = os.environ.get("ZXEL_WIRE_CAP")
    if raw is None:
        return _DEFAULT_WIRE_CAP
    try:
        return int(raw)
    except ValueError:
        return _DEFAULT_WIRE_CAP


_H_TENSOR = np.array([[1, 1], [1, -1]], dtype=complex)
# arr[p0, p1] = <p1| M |p0> for the 1->1 matrix M of the generator
_T_TENSOR = np.array([[1, 0], [1, 1]], dtype=complex)       # M = [[1,1],[0,1]]
_T_INV_TENSOR = np.array([[1, 0], [-1, 1]], dtype=complex)  # M = [[1,-1],[0,1]]


def node_tensor(kind: str, phase: complex, degree: int) -> np.ndarray:
    """Tensor of one generator node, one axis of dimension 2 per port."""
    if kind == Z:
        if degree == 0:
            return np.array(1.0 + phase, dtype=complex)
        t = np.zeros((2,) * degree, dtype=complex)
        t[(0,) * degree] = 1.0
        t[(1,) * degree] = phase
        return t
    if kind == H:
        return _H_TENSOR
    if kind == T:
        return _T_TENSOR
    if kind == T_INV:
        return _T_INV_TENSOR
    raise ValueError(f"unknown node kind {kind!r}")


def _prepare(d: Diagram):
    """Build (tensor, labels) pairs; labels are integer wire ids, with
    boundary wires remembered separately."""
    next_label = len(d.edges)
    boundary_label: dict[tuple, int] = {}
    port_label: dict[tuple, int] = {}
    bare: list[tuple[np.ndarray, list[int]]] = []
    for i, (a, b) in enumerate(d.edges):
        if a[0] == "n" and b[0] == "n":
            port_label[(a[1], a[2])] = i
            port_label[(b[1], b[2])] = i
        elif a[0] == "n":
            port_label[(a[1], a[2])] = i
            boundary_label[b] = i
        elif b[0] == "n":
            port_label[(b[1], b[2])] = i
            boundary_label[a] = i
        else:
            # bare wire between two boundary slots: explicit identity with
            # one label per end
            boundary_label[a] = i
            boundary_label[b] = next_label
            bare.append((np.eye(2, dtype=complex), [i, next_label]))
            next_label += 1

    degrees: dict[int, int] = {v: 0 for v in d.nodes}
    for (v, _p) in port_label:
        degrees[v] += 1
    tensors: list[tuple[np.ndarray, list[int]]] = []
    for v in d.node_ids():
        node = d.nodes[v]
        deg = degrees[v]
        labels = [port_label[(v, p)] for p in range(deg)]
        tensors.append((node_tensor(node.kind, node.phase, deg), labels))
    tensors.extend(bare)
    return tensors, boundary_label


def _contract_self(t: np.ndarray, labels: list[int]):
    """Trace out repeated labels within one tensor."""
    while True:
        dup = None
        for i, l in enumerate(labels):
            if l in labels[i + 1:]:
                dup = l
                break
        if dup is None:
            return t, labels
        i = labels.index(dup)
        j = labels.index(dup, i + 1)
        t = np.trace(t, axis1=i, axis2=j)
        labels = [l for k, l in enumerate(labels) if k not in (i, j)]


def _pair_contract(ti, li, tj, lj, cap):
    shared = set(li) & set(lj)
    out_labels = [l for l in li if l not in shared] + \
                 [l for l in lj if l not in shared]
    if len(out_labels) > cap:
        raise ResourceError(
            f"contraction needs {len(out_labels)} open wires, cap is {cap}")
    local: dict[int, int] = {}

    def loc(labels):
        return [local.setdefault(l, len(local)) for l in labels]

    t = np.einsum(ti, loc(li), tj, loc(lj), loc(out_labels))
    return _contract_self(t, out_labels)


def _contract(tensors, cap: int):
    """Greedy accumulator contraction: repeatedly absorb the neighbouring
    tensor that minimises the intermediate open-wire count, with a
    deterministic tie-break by insertion order."""
    work: list = []
    for t, labels in tensors:
        t2, l2 = _contract_self(np.asarray(t, dtype=complex), list(labels))
        work.append((t2, l2))

    holders: dict[int, set[int]] = {}
    for i, (_, labels) in enumerate(work):
        for l in labels:
            holders.setdefault(l, set()).add(i)
    alive = set(range(len(work)))
    done: list = []
    acc_i = None

    def release(i):
        for l in work[i][1]:
            holders[l].discard(i)

    while alive or acc_i is not None:
        if acc_i is None:
            acc_i = min(alive)
            alive.discard(acc_i)
            release(acc_i)
        acc_t, acc_l = work[acc_i]
        cands = set()
        for l in acc_l:
            cands |= holders.get(l, set())
        cands &= alive
        if not cands:
            done.append((acc_t, acc_l))
            acc_i = None
            continue
        best = None
        for j in cands:
            shared = len(set(acc_l) & set(work[j][1]))
            rank = len(acc_l) + len(work[j][1]) - 2 * shared
            key = (rank, j)
            if best is None or key < best:
                best = key
        j = best[1]
        alive.discard(j)
        release(j)
        t, labels = _pair_contract(acc_t, acc_l, work[j][0], work[j][1], cap)
        work.append((t, labels))
        acc_i = len(work) - 1

    # outer-product the disconnected components
    t, labels = done[0]
    for t2, l2 in done[1:]:
        t, labels = _pair_contract(t, labels, t2, l2, cap)
    return t, labels


def interpret(d: Diagram, cap: int | None = None) -> np.ndarray:
    """Evaluate a diagram of type n -> m to its 2^m x 2^n matrix."""
    d.check_validity()
    if cap is None:
        cap = wire_cap()
    if d.n_in + d.n_out > cap:
        raise ResourceError(
            f"diagram has {d.n_in + d.n_out} boundary wires, cap is {cap}")
    tensors, boundary_label = _prepare(d)
    if not tensors:
        t = np.array(1.0, dtype=complex)
        labels: list[int] = []
    else:
        t, labels = _contract(tensors, cap)
    # order axes as out slot 0..m-1 then in slot 0..n-1 (most significant
    # bit first within each boundary, matching |a_{m-1}...a_0>)
    wanted = [boundary_label[("out", j)] for j in range(d.n_out)] + \
             [boundary_label[("in", i)] for i in range(d.n_in)]
    perm = [labels.index(l) for l in wanted]
    t = np.transpose(t, perm) if perm else t
    mat = np.asarray(t, dtype=complex).reshape(2 ** d.n_out, 2 ** d.n_in)
    mat = mat * (2.0 ** d.loops)
    if not np.all(np.isfinite(mat)):
        raise ArithmeticError("non-finite entries in interpretation")
    return mat


def contract_state(d: Diagram, cap: int | None = None) -> np.ndarray:
    """Coefficient vector of a state diagram (no inputs): entry k is the
    amplitude of e_k under the |a_{m-1}...a_0> indexing."""
    if d.n_in != 0:
        raise ValueError(f"contract_state needs a state, got {d.n_in} inputs")
    return interpret(d, cap=cap).reshape(-1)


def matrices_equal(a: np.ndarray, b: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """Same shape and max-abs entrywise difference at most tol."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    return bool(np.max(np.abs(a - b), initial=0.0) <= tol)


def max_deviation(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return float("inf")
    return float(np.max(np.abs(a - b), initial=0.0))
