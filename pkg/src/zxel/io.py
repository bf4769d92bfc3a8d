"""Diagram file serialization and the plain-text matrix format.

The canonical diagram format is version-tagged JSON:

    {
      "version": "zxel/1",
      "inputs": 1, "outputs": 1, "loops": 0,
      "nodes": [{"id": 0, "kind": "z", "phase": [re, im]},
                {"id": 1, "kind": "h"},
                {"id": 2, "kind": "x", "tau": "pi"}],
      "edges": [[["in", 0], ["node", 0, 0]], ...]
    }

Node kinds are "z" (complex phase as an [re, im] pair), "h", "t",
"t_inv", and the macro kind "x" (tau "0" or "pi"), which is expanded
into its H-conjugated form while parsing; serialization never emits it.
Phases are [re, im] pairs, never formatted complex strings, so round
trips are bit-stable.

Matrix files are rows of whitespace-separated complex tokens in the
form ``re+imi`` (e.g. ``1  2+3i  -0.5i``).
"""

from __future__ import annotations

import json
import re

import numpy as np

from .diagram import Diagram, DiagramError, Node, H, T, T_INV, Z

FORMAT_VERSION = "zxel/1"


class DiagramFileError(ValueError):
    """Malformed diagram file; message carries the offending location."""


def _parse_endpoint(raw, where: str):
    if not isinstance(raw, list) or not raw:
        raise DiagramFileError(f"{where}: endpoint must be a list")
    tag = raw[0]
    if tag == "in" or tag == "out":
        if len(raw) != 2 or not isinstance(raw[1], int):
            raise DiagramFileError(f"{where}: boundary endpoint needs a slot")
        return (tag, raw[1])
    if tag == "node":
        if len(raw) != 3 or not all(isinstance(x, int) for x in raw[1:]):
            raise DiagramFileError(f"{where}: node endpoint needs id and port")
        return ("n", raw[1], raw[2])
    raise DiagramFileError(f"{where}: unknown endpoint tag {tag!r}")


def _expand_x_nodes(nodes, x_nodes, edges):
    """Replace macro "x" nodes by H-conjugated Z spiders with the
    compensating half scalar, re-pointing file edges to the H boxes."""
    next_id = max(list(nodes) + list(x_nodes) + [-1]) + 1
    for xid, (sign, degree) in x_nodes.items():
        core = next_id
        nodes[core] = Node(Z, sign)
        next_id += 1
        hs = []
        for p in range(degree):
            nodes[next_id] = Node(H)
            hs.append(next_id)
            next_id += 1
        comp = next_id
        nodes[comp] = Node(Z, -0.5)
        next_id += 1
        for i, e in enumerate(edges):
            a, b = e
            if a[0] == "n" and a[1] == xid:
                a = ("n", hs[a[2]], 0)
            if b[0] == "n" and b[1] == xid:
                b = ("n", hs[b[2]], 0)
            edges[i] = (a, b)
        for p, h in enumerate(hs):
            edges.append((("n", h, 1), ("n", core, p)))
    return nodes, edges


def diagram_from_jsonable(rec) -> Diagram:
    if not isinstance(rec, dict):
        raise DiagramFileError("top level: expected an object")
    if rec.get("version") != FORMAT_VERSION:
        raise DiagramFileError(
            f"version: expected {FORMAT_VERSION!r}, got {rec.get('version')!r}")
    try:
        n_in = int(rec["inputs"])
        n_out = int(rec["outputs"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DiagramFileError(f"inputs/outputs: {exc}") from None
    loops = int(rec.get("loops", 0))

    nodes: dict[int, Node] = {}
    x_nodes: dict[int, tuple[complex, int]] = {}
    for i, nd in enumerate(rec.get("nodes", [])):
        where = f"nodes[{i}]"
        if not isinstance(nd, dict) or "id" not in nd or "kind" not in nd:
            raise DiagramFileError(f"{where}: needs id and kind")
        vid = nd["id"]
        if not isinstance(vid, int) or vid in nodes or vid in x_nodes:
            raise DiagramFileError(f"{where}: bad or duplicate id {vid!r}")
        kind = nd["kind"]
        if kind == "z":
            phase = nd.get("phase", [1.0, 0.0])
            if (not isinstance(phase, list) or len(phase) != 2
                    or not all(isinstance(x, (int, float)) for x in phase)):
                raise DiagramFileError(
                    f"{where}: phase must be an [re, im] pair")
            nodes[vid] = Node(Z, complex(phase[0], phase[1]))
        elif kind in ("h", "t", "t_inv"):
            nodes[vid] = Node({"h": H, "t": T, "t_inv": T_INV}[kind])
        elif kind == "x":
            tau = str(nd.get("tau", "0"))
            if tau not in ("0", "pi"):
                raise DiagramFileError(f"{where}: tau must be '0' or 'pi'")
            x_nodes[vid] = (-1.0 if tau == "pi" else 1.0, 0)
        else:
            raise DiagramFileError(f"{where}: unknown kind {kind!r}")

    edges = []
    for i, e in enumerate(rec.get("edges", [])):
        where = f"edges[{i}]"
        if not isinstance(e, list) or len(e) != 2:
            raise DiagramFileError(f"{where}: expected an endpoint pair")
        a = _parse_endpoint(e[0], where)
        b = _parse_endpoint(e[1], where)
        for ep in (a, b):
            if ep[0] == "n" and ep[1] in x_nodes:
                sign, deg = x_nodes[ep[1]]
                x_nodes[ep[1]] = (sign, max(deg, ep[2] + 1))
        edges.append((a, b))

    nodes, edges = _expand_x_nodes(nodes, x_nodes, edges)
    try:
        return Diagram(nodes, edges, n_in, n_out, loops=loops)
    except DiagramError as exc:
        raise DiagramFileError(f"ill-formed diagram: {exc}") from None


def diagram_to_jsonable(d: Diagram) -> dict:
    order = {v: k for k, v in enumerate(d.node_ids())}
    nodes = []
    for v in d.node_ids():
        nd = d.nodes[v]
        rec: dict = {"id": order[v], "kind": nd.kind}
        if nd.kind == Z:
            rec["phase"] = [nd.phase.real, nd.phase.imag]
        nodes.append(rec)

    def ep_out(ep):
        if ep[0] == "n":
            return ["node", order[ep[1]], ep[2]]
        return [ep[0], ep[1]]

    edges = sorted([sorted((ep_out(a), ep_out(b)))
                    for a, b in d.edges])
    return {"version": FORMAT_VERSION, "inputs": d.n_in, "outputs": d.n_out,
            "loops": d.loops, "nodes": nodes, "edges": edges}


def load_diagram(path: str) -> Diagram:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            rec = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DiagramFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")
    except OSError as exc:
        raise DiagramFileError(f"{path}: {exc}")
    return diagram_from_jsonable(rec)


def save_diagram(d: Diagram, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(diagram_to_jsonable(d), fh, indent=1)
        fh.write("\n")


def dumps_diagram(d: Diagram) -> str:
    return json.dumps(diagram_to_jsonable(d), indent=1)


# -- matrix files ----------------------------------------------------------

_TOKEN = re.compile(r"^[+\-0-9.eEij]+$")


def parse_complex_token(tok: str, where: str = "") -> complex:
    if not _TOKEN.match(tok):
        raise DiagramFileError(f"{where}: bad complex token {tok!r}")
    text = tok.replace("i", "j")
    # a bare trailing j needs a coefficient for Python's parser
    text = re.sub(r"(?<![0-9.])j", "1j", text)
    try:
        return complex(text)
    except ValueError:
        raise DiagramFileError(f"{where}: bad complex token {tok!r}") from None


def load_matrix(path: str) -> np.ndarray:
    """Parse a whitespace-separated matrix of re+imi tokens."""
    rows = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise DiagramFileError(f"{path}: {exc}")
    for ln, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        row = [parse_complex_token(tok, f"{path}:{ln}")
               for tok in line.split()]
        rows.append(row)
    if not rows:
        raise DiagramFileError(f"{path}: empty matrix")
    width = len(rows[0])
    for ln, row in enumerate(rows):
        if len(row) != width:
            raise DiagramFileError(
                f"{path}: row {ln} has {len(row)} entries, expected {width}")
    return np.array(rows, dtype=complex)


def format_complex(z: complex, precision: int = 6) -> str:
    re_s = f"{z.real:.{precision}g}"
    im = z.imag
    if im == 0:
        return re_s
    sign = "+" if im >= 0 else "-"
    return f"{re_s}{sign}{abs(im):.{precision}g}i"


def format_matrix(mat: np.ndarray, precision: int = 6) -> str:
    lines = []
    for row in np.atleast_2d(mat):
        lines.append("  ".join(format_complex(z, precision) for z in row))
    return "\n".join(lines)
