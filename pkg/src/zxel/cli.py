"""Command-line front end.

Machine-readable results go to stdout as JSON; diagnostics go to stderr.
Exit codes: 0 success (check-eq: diagrams equal), 1 negative result
(check-eq: not equal; rules: some rule failed; elementary: matrix not
representable), 2 error (bad file, type mismatch, resource cap).
"""

from __future__ import annotations

import itertools
import json
import sys

import click
import numpy as np

from . import diagram as dg
from .diagram import Diagram, compose_all, permutation
from .equivalence import TypeMismatchError, check_equivalent
from .io import (DiagramFileError, dumps_diagram, format_matrix,
                 load_diagram, load_matrix, save_diagram)
from .normalform import (ElementarySpec, WireCapError, elementary_diagram,
                         nf_to_diagram, nf_to_jsonable, normalize)
from .rewrite import simplify as run_simplify
from .rules import check_soundness, full_catalog
from .semantics import ResourceError, interpret, matrices_equal


def _fail(message: str, code: int = 2):
    click.echo(f"zxel: {message}", err=True)
    sys.exit(code)


def _load(path: str) -> Diagram:
    try:
        return load_diagram(path)
    except DiagramFileError as exc:
        _fail(str(exc))


@click.group()
def main():
    """Algebraic ZX-calculus: interpret, rewrite, normalize, compare."""


@main.command("interpret")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--precision", default=6, show_default=True,
              help="significant digits in the text matrix")
@click.option("--json", "as_json", is_flag=True, help="emit JSON")
def cmd_interpret(file, precision, as_json):
    """Evaluate a diagram to its complex matrix."""
    d = _load(file)
    try:
        mat = interpret(d)
    except ResourceError as exc:
        _fail(str(exc))
    if as_json:
        click.echo(json.dumps({
            "rows": mat.shape[0], "cols": mat.shape[1],
            "entries": [[[z.real, z.imag] for z in row] for row in mat],
        }))
    else:
        click.echo(format_matrix(mat, precision))


@main.command("check-eq")
@click.argument("file1", type=click.Path(exists=True, dir_okay=False))
@click.argument("file2", type=click.Path(exists=True, dir_okay=False))
@click.option("--tol", default=1e-9, show_default=True)
def cmd_check_eq(file1, file2, tol):
    """Decide equality of two diagrams (exit 0 equal, 1 not, 2 error)."""
    d1, d2 = _load(file1), _load(file2)
    try:
        verdict = check_equivalent(d1, d2, tol=tol)
    except TypeMismatchError as exc:
        _fail(str(exc))
    except (ResourceError, WireCapError) as exc:
        _fail(str(exc))
    click.echo(verdict.to_json())
    sys.exit(0 if verdict.equal else 1)


@main.command("normalize")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False),
              help="also write the normal-form diagram file")
def cmd_normalize(file, out):
    """Rewrite a diagram into its unique normal form."""
    d = _load(file)
    try:
        nf = normalize(d)
    except (WireCapError, ResourceError) as exc:
        _fail(str(exc))
    click.echo(json.dumps(nf_to_jsonable(nf)))
    if out:
        save_diagram(nf_to_diagram(nf), out)


@main.command("simplify")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--budget", default=None, type=int,
              help="maximum rewrite steps (default 10 x node count + 20)")
@click.option("--trace", is_flag=True, help="log applied rules to stderr")
@click.option("--out", type=click.Path(dir_okay=False),
              help="write the simplified diagram here instead of stdout")
def cmd_simplify(file, budget, trace, out):
    """Apply the terminating simplification strategy."""
    d = _load(file)
    res = run_simplify(d, budget=budget, trace=trace)
    if trace:
        for step in res.trace:
            click.echo(f"{step['rule']} at nodes {step['nodes']}", err=True)
        click.echo(f"{res.steps} steps"
                   + (", budget exhausted" if res.budget_exhausted else ""),
                   err=True)
    if out:
        save_diagram(res.diagram, out)
    else:
        click.echo(dumps_diagram(res.diagram))


@main.command("rules")
@click.option("--samples", default=20, show_default=True)
@click.option("--tol", default=1e-9, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="emit JSON report")
@click.option("--corrupt", default=None, hidden=True,
              help="deliberately corrupt a rule (testing hook)")
def cmd_rules(samples, tol, seed, as_json, corrupt):
    """Soundness sweep over the whole rule catalog (exit 0 iff clean)."""
    rng = np.random.default_rng(seed)
    reports = []
    for rule in full_catalog():
        reports.append(check_soundness(
            rule, samples=samples, tol=tol, rng=rng,
            corrupt=(rule.name == corrupt)))
    failures = [r for r in reports if not r.ok]
    if as_json:
        click.echo(json.dumps({
            "samples": samples, "tol": tol,
            "rules": [r.to_jsonable() for r in reports],
            "ok": not failures,
        }))
    else:
        for r in reports:
            status = "ok" if r.ok else "FAIL"
            click.echo(f"{r.name:32s} {status}  checked={r.checked:3d}  "
                       f"max_dev={r.max_deviation:.2e}")
        click.echo(f"{len(reports)} rules, {len(failures)} failing")
    sys.exit(0 if not failures else 1)


# -- elementary decomposition ------------------------------------------------

def _perm_matrix(perm: list[int], m: int) -> np.ndarray:
    return interpret(permutation(perm))


def _last_column_specs(mat: np.ndarray, m: int):
    """If mat is identity except its last column, return the elementary
    specs realising it (additions by increasing target row, then the
    multiplication); otherwise None."""
    n = 2 ** m
    probe = mat.copy()
    probe[:, n - 1] = 0.0
    expect = np.eye(n, dtype=complex)
    expect[:, n - 1] = 0.0
    if not matrices_equal(probe, expect, 1e-9):
        return None
    specs = []
    for j in range(n - 1):
        coeff = complex(mat[j, n - 1])
        if abs(coeff) > 1e-12:
            subset = frozenset(i for i in range(m) if not j >> i & 1)
            specs.append(ElementarySpec("add", m, coeff, subset))
    specs.append(ElementarySpec("mult", m, complex(mat[n - 1, n - 1])))
    return specs


def decompose_elementary(mat: np.ndarray):
    """Factor a 2^m x 2^m matrix (m <= 3) into wire permutations, row
    additions on the last column and a final row multiplication.

    Returns (operations, diagram) or None when the matrix is outside the
    representable set (row switching beyond wire permutations is not
    diagrammatically representable here).
    """
    n = mat.shape[0]
    if mat.shape != (n, n) or n & (n - 1) or n == 0:
        raise DiagramFileError("matrix must be square with 2^m rows")
    m = n.bit_length() - 1
    if m > 3:
        raise DiagramFileError("elementary decomposition supports m <= 3")
    if m == 0:
        return None

    perms = [list(p) for p in itertools.permutations(range(m))]
    for p_out in perms:
        mat_out = _perm_matrix(p_out, m)
        for p_in in perms:
            mat_in = _perm_matrix(p_in, m)
            core = np.conj(mat_out.T) @ mat @ np.conj(mat_in.T)
            specs = _last_column_specs(core, m)
            if specs is None:
                continue
            ops: list = []
            if p_in != list(range(m)):
                ops.append({"kind": "permute", "perm": p_in})
            ops.extend(spec.to_jsonable() for spec in specs)
            if p_out != list(range(m)):
                ops.append({"kind": "permute", "perm": p_out})
            pieces = []
            if p_in != list(range(m)):
                pieces.append(permutation(p_in))
            pieces.extend(elementary_diagram(s) for s in specs)
            if p_out != list(range(m)):
                pieces.append(permutation(p_out))
            diagramme = compose_all(pieces)
            return ops, diagramme
    return None


@main.command("elementary")
@click.argument("matrix_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False),
              help="write the composed diagram file here")
def cmd_elementary(matrix_file, out):
    """Decompose a matrix into elementary transformation diagrams."""
    try:
        mat = load_matrix(matrix_file)
        result = decompose_elementary(mat)
    except DiagramFileError as exc:
        _fail(str(exc))
    if result is None:
        click.echo("zxel: matrix is not representable by row additions, "
                   "row multiplication and wire permutations (row "
                   "switching is not supported)", err=True)
        sys.exit(1)
    ops, d = result
    check = interpret(d)
    if not matrices_equal(check, mat, 1e-7):
        _fail("internal: composed diagram does not reproduce the matrix")
    click.echo(json.dumps({"operations": ops}))
    if out:
        save_diagram(d, out)


@main.command("export")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", default="dot", show_default=True,
              type=click.Choice(["dot", "tikz-text"]))
def cmd_export(file, fmt):
    """Emit a deterministic text description of the diagram graph."""
    d = _load(file)
    order = {v: k for k, v in enumerate(d.node_ids())}

    def label(v):
        nd = d.nodes[v]
        if nd.kind == dg.Z:
            return f"Z({nd.phase.real:g}{nd.phase.imag:+g}i)"
        return {"h": "H", "t": "T", "t_inv": "T-inv"}[nd.kind]

    def ep_name(ep):
        if ep[0] == "n":
            return f"n{order[ep[1]]}"
        return f"{ep[0]}{ep[1]}"

    if fmt == "dot":
        lines = ["graph zx {"]
        for i in range(d.n_in):
            lines.append(f'  in{i} [shape=none, label="in {i}"];')
        for j in range(d.n_out):
            lines.append(f'  out{j} [shape=none, label="out {j}"];')
        for v in d.node_ids():
            lines.append(f'  n{order[v]} [label="{label(v)}"];')
        for a, b in sorted(d.edges, key=lambda e: (ep_name(e[0]), ep_name(e[1]))):
            lines.append(f"  {ep_name(a)} -- {ep_name(b)};")
        for k in range(d.loops):
            lines.append(f"  // bare loop {k} (scalar 2)")
        lines.append("}")
    else:
        lines = [f"% zxel diagram {d.n_in}->{d.n_out}, loops={d.loops}"]
        for v in d.node_ids():
            lines.append(f"node n{order[v]}: {label(v)}")
        for a, b in sorted(d.edges, key=lambda e: (ep_name(e[0]), ep_name(e[1]))):
            lines.append(f"wire {ep_name(a)} -- {ep_name(b)}")
    click.echo("\n".join(lines))


if __name__ == "__main__":
    main()
