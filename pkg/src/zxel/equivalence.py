"""Diagram equivalence by normal-form comparison, cross-checked against
the matrix semantics.

Both routes always run at desk scale: the normal-form pipeline is the
completeness machinery under test, and the interpreter is the ground
truth guarding it.  The two verdicts must agree; disagreement is an
implementation defect, never a valid outcome.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .diagram import Diagram
from .normalform import NormalForm, nf_equal, normalize
from .semantics import interpret, matrices_equal, max_deviation

DEFAULT_TOL = 1e-9


class TypeMismatchError(ValueError):
    """The two diagrams have different boundary types."""


class VerdictDisagreement(RuntimeError):
    """Normal-form and semantic verdicts disagree: an internal bug."""


@dataclass(frozen=True)
class EquivalenceVerdict:
    equal: bool
    method: str  # "normal-form", "semantic" or "both"
    max_deviation: float
    nf_pair: tuple[NormalForm, NormalForm] | None = None

    def to_jsonable(self) -> dict:
        rec = {"equal": self.equal, "method": self.method,
               "max_deviation": self.max_deviation}
        if self.nf_pair is not None:
            rec["normal_forms"] = [
                {"m": nf.m, "coeffs": [[c.real, c.imag] for c in nf.coeffs]}
                for nf in self.nf_pair]
        return rec

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable())


def check_equivalent(d1: Diagram, d2: Diagram,
                     tol: float = DEFAULT_TOL) -> EquivalenceVerdict:
    """Decide whether two diagrams are equal in the calculus."""
    if d1.type != d2.type:
        raise TypeMismatchError(
            f"diagram types differ: {d1.type} vs {d2.type}")
    nf1 = normalize(d1)
    nf2 = normalize(d2)
    by_nf = nf_equal(nf1, nf2, tol)

    m1 = interpret(d1)
    m2 = interpret(d2)
    by_sem = matrices_equal(m1, m2, tol)
    dev = max_deviation(m1, m2)

    if by_nf != by_sem:
        raise VerdictDisagreement(
            f"normal-form verdict {by_nf} vs semantic verdict {by_sem} "
            f"(deviation {dev:.3e})")
    return EquivalenceVerdict(by_sem, "both", float(dev), (nf1, nf2))
